fn main() -> std::process::ExitCode {
    plasmode::run(std::env::args_os())
}
