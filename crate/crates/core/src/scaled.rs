//! Overflow-safe hyperbolic ratios. Arguments like `w0/eta` grow without bound
//! as `eta -> 0`, so nothing here calls `cosh` or `sinh` directly.

use num_complex::Complex64;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Returns `(b, s)` with `b = s*a`, `s = +-1` and `Re b >= 0`.
fn right_half(a: Complex64) -> (Complex64, f64) {
    if a.re >= 0.0 {
        (a, 1.0)
    } else {
        (-a, -1.0)
    }
}

/// `cosh(a x) / cosh(a)` for `|x| <= 1`.
pub fn cosh_ratio(a: Complex64, x: f64) -> Complex64 {
    let (b, _) = right_half(a);
    let ax = x.abs();
    (b * (ax - 1.0)).exp() * (ONE + (-2.0 * b * ax).exp()) / (ONE + (-2.0 * b).exp())
}

/// `sinh(a x) / cosh(a)` for `|x| <= 1`.
pub fn sinh_ratio(a: Complex64, x: f64) -> Complex64 {
    let (b, s) = right_half(a);
    let ax = x.abs();
    let v = (b * (ax - 1.0)).exp() * (ONE - (-2.0 * b * ax).exp()) / (ONE + (-2.0 * b).exp());
    v * s * x.signum()
}

/// `exp(a) / cosh(a)`.
pub fn exp_over_cosh(a: Complex64) -> Complex64 {
    if a.re >= 0.0 {
        2.0 / (ONE + (-2.0 * a).exp())
    } else {
        let e = (2.0 * a).exp();
        2.0 * e / (ONE + e)
    }
}

pub fn tanh(a: Complex64) -> Complex64 {
    let (b, s) = right_half(a);
    let e = (-2.0 * b).exp();
    (ONE - e) / (ONE + e) * s
}

/// `cosh(a)`, or `None` when it overflows.
pub fn cosh(a: Complex64) -> Option<Complex64> {
    let v = a.cosh();
    (v.re.is_finite() && v.im.is_finite()).then_some(v)
}
