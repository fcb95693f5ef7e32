use std::path::Path;
use std::process::{Command, Output};

const P1: [&str; 8] = ["--omega", "0.5", "--eps", "0.2", "--k", "5", "--alpha-p", "0.5"];
// a point of the boundary curve (Omega, eps) at mu = 0.9
const ON_CURVE: [&str; 4] = ["--omega", "3.10553126063311469", "--eps", "2.46756417510283965"];

fn plasmode(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plasmode"))
        .args(args)
        .env_remove("PLASMODE_TOL_COEFF")
        .env_remove("PLASMODE_TOL_FIELD")
        .env_remove("PLASMODE_TOL_SERIES")
        .output()
        .unwrap()
}

fn with(base: &[&str], extra: &[&str]) -> Vec<String> {
    base.iter().chain(extra).map(|s| s.to_string()).collect()
}

fn run(args: &[String]) -> Output {
    let v: Vec<&str> = args.iter().map(String::as_str).collect();
    plasmode(&v)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data rows of a CSV with a `#` header: column names and parsed rows.
fn table(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let cols = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (cols, rows)
}

fn f(s: &str) -> f64 {
    s.parse().unwrap()
}

fn close(a: &str, b: &str) -> bool {
    (f(a) - f(b)).abs() <= 1e-12 * f(a).abs().max(1.0)
}

#[test]
fn spectrum_reports_twice_the_winding_index() {
    let o = plasmode(&["spectrum", "--omega", "0.5", "--eps", "0.2", "--k", "5"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["N"], 2 * v["kappa"].as_i64().unwrap());
    assert_eq!(v["N"], v["multistart_zero_count"]);
    assert_eq!(v["region"], "DPlus");
    assert!(v["residual"].as_f64().unwrap() < 1e-12);
    assert!(v["meta"]["conventions"].as_str().unwrap().contains("A_tilde = w0*A1"));
}

#[test]
fn boundary_curve_rows_satisfy_the_curve_equations() {
    let o = plasmode(&["boundary-curve", "--samples", "200"]);
    assert!(o.status.success());
    let (cols, rows) = table(&stdout(&o));
    assert_eq!(cols, ["mu", "Omega", "eps", "g1", "g2"]);
    assert_eq!(rows.len(), 200);
    for r in rows {
        assert!(f(&r[3]).abs() < 1e-9 && f(&r[4]).abs() < 1e-9);
    }
}

#[test]
fn verify_passes_at_reference_point() {
    let o = run(&with(&["verify"], &P1));
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.contains("PASS Q1 three-route agreement"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn verify_fails_with_exit_three_at_loose_tolerances() {
    let o = run(&with(&["verify", "--tol-coeff", "1e-3", "--tol-field", "1e-3"], &P1));
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn exit_codes() {
    assert_eq!(plasmode(&["field", "--omega", "0.5", "--eps", "-1", "--k", "5", "--alpha-p", "0.5"]).status.code(), Some(1));
    assert_eq!(plasmode(&["field", "--omega", "0.5", "--eps", "0.2", "--k", "5"]).status.code(), Some(1));
    assert_eq!(plasmode(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(plasmode(&["--help"]).status.code(), Some(0));
    let near = run(&with(&["field", "--k", "1", "--alpha-p", "0.5"], &ON_CURVE));
    assert_eq!(near.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&near.stderr).contains("curve L"));
}

#[test]
fn near_curve_points_become_status_rows_in_a_sweep() {
    let eps: f64 = ON_CURVE[3].parse().unwrap();
    let (lo, hi) = (format!("{}", eps - 0.5), format!("{}", eps + 0.5));
    let o = run(&with(
        &["absorb", "--axis", "eps", "--min", &lo, "--max", &hi, "--steps", "3", "--k", "1", "--alpha-p", "0.5"],
        &ON_CURVE[..2],
    ));
    assert!(o.status.success());
    let (cols, rows) = table(&stdout(&o));
    assert_eq!(cols, ["eps", "Q0", "agreement", "status"]);
    let status: Vec<&str> = rows.iter().map(|r| r[3].as_str()).collect();
    assert_eq!(status, ["ok", "near_l", "ok"]);
    assert_eq!(rows[1][1], "NaN");
}

#[test]
fn outputs_are_reproducible_and_independent_of_jobs() {
    let args = ["absorb", "--omega-min", "0.3", "--omega-max", "1.5", "--omega-steps", "5", "--eps", "0.2", "--k", "5", "--alpha-p", "0.5", "--no-timestamp", "--all-routes"];
    let a = plasmode(&args);
    let b = plasmode(&args);
    let c = run(&with(&args, &["--jobs", "4"]));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let text = stdout(&a);
    assert!(!text.contains("# generated"));
    assert!(text.contains("# params: omega=swept eps=0.2 k=5 alpha_p=0.5"));
    let (cols, rows) = table(&text);
    assert_eq!(cols.len(), 10);
    assert_eq!(rows.len(), 5);
    for r in &rows {
        assert_eq!(r[3], "ok");
        assert!(f(&r[1]) >= 0.0 && f(&r[2]) < 1e-6);
        // 17 significant digits in scientific notation
        assert_eq!(r[1].split('e').next().unwrap().len(), 18);
    }
    let stamped = plasmode(&args[..args.len() - 2]);
    assert!(stdout(&stamped).contains("# generated: "));
}

#[test]
fn absorb_json_lists_rows_in_order() {
    let o = plasmode(&["absorb", "--axis", "alpha-p", "--min", "0", "--max", "1", "--steps", "3", "--omega", "0.5", "--eps", "0.2", "--k", "5", "--format", "json", "--jobs", "3"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v["rows"].as_array().unwrap();
    let values: Vec<f64> = rows.iter().map(|r| r["value"].as_f64().unwrap()).collect();
    assert_eq!(values, [0.0, 0.5, 1.0]);
    assert!(v["meta"]["params"]["alpha_p"].is_null());
    for r in rows {
        assert_eq!(r["status"], "ok");
    }
}

#[test]
fn field_meets_the_wall_condition() {
    let o = run(&with(&["field", "--points", "11", "--jobs", "2"], &P1));
    assert!(o.status.success());
    let (cols, rows) = table(&stdout(&o));
    assert_eq!(cols, ["x", "re_e", "im_e"]);
    assert_eq!(rows.len(), 11);
    for r in [&rows[0], &rows[10]] {
        assert!((f(&r[1]) - 1.0).abs() < 1e-6 && f(&r[2]).abs() < 1e-6);
    }
    for i in 0..11 {
        assert!(close(&rows[i][1], &rows[10 - i][1]) && close(&rows[i][2], &rows[10 - i][2]));
    }
}

#[test]
fn distribution_grid_avoids_zero() {
    let o = run(&with(&["distribution", "--mu-grid", "9"], &P1));
    assert!(o.status.success());
    let (_, rows) = table(&stdout(&o));
    assert_eq!(rows.len(), 8);
    assert!(rows.iter().all(|r| f(&r[0]) != 0.0 && f(&r[1]).is_finite()));
}

#[test]
fn dispersion_at_points_and_on_the_cut() {
    let o = plasmode(&["dispersion", "--omega", "0.5", "--eps", "0.2", "--k", "5", "--z", "0,1", "--z", "-2,-0.5"]);
    assert!(o.status.success());
    let (cols, rows) = table(&stdout(&o));
    assert_eq!(cols.len(), 6);
    assert_eq!(rows.len(), 2);
    let cut = plasmode(&["dispersion", "--omega", "0.5", "--eps", "0.2", "--k", "5", "--mu-grid", "10"]);
    let (cols, rows) = table(&stdout(&cut));
    assert_eq!(cols[0], "mu");
    assert_eq!(rows.len(), 10);
    // lambda+(-mu) = lambda-(mu)
    assert!(close(&rows[0][3], &rows[9][5]) && close(&rows[0][4], &rows[9][6]));
}

#[test]
fn config_file_environment_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("p1.conf");
    std::fs::write(&conf, "# reference point\nomega = 0.5\neps = 0.2\nk = 5\nalpha_p = 0.5\n").unwrap();
    let out = dir.path().join("field.csv");
    let status = Command::new(env!("CARGO_BIN_EXE_plasmode"))
        .args(["field", "--points", "3", "--k", "4", "--tol-series", "1e-14", "--no-timestamp"])
        .arg("--config")
        .arg(&conf)
        .arg("-o")
        .arg(&out)
        .env("PLASMODE_TOL_FIELD", "1e-9")
        .env("PLASMODE_TOL_SERIES", "1e-12")
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(Path::new(&out)).unwrap();
    assert!(text.contains("# params: omega=0.5 eps=0.2 k=4 alpha_p=0.5"), "{text}");
    assert!(text.contains("# tolerances: coeff=1e-10 field=1e-9 series=1e-14"), "{text}");
    assert_eq!(table(&text).1.len(), 3);
}
