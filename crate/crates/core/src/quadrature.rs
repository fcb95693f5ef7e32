//! Adaptive Gauss-Kronrod integration of complex-valued integrands, principal
//! values by folding about the pole, and one-sided summation of symmetric
//! residue series.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Kronrod abscissae on `[0, 1]` (odd indices are the Gauss nodes).
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_525_478_626,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Minimum distance between a principal-value pole and an endpoint.
pub const PV_ENDPOINT_GUARD: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Bisections allowed before giving up.
    pub max_subdivisions: usize,
}

impl QuadratureOptions {
    /// Relative and absolute tolerance both set to `tol`, i.e. an error target of
    /// `tol * max(1, |value|)`.
    pub fn with_tol(tol: f64) -> Self {
        QuadratureOptions {
            rel_tol: tol,
            abs_tol: tol,
            ..Self::default()
        }
    }

    fn target(&self, value: Complex64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.norm())
    }
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions {
            rel_tol: 1e-10,
            abs_tol: 1e-10,
            max_subdivisions: 20_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: Complex64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

impl core::ops::Add for QuadratureResult {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        QuadratureResult {
            value: self.value + o.value,
            error_estimate: self.error_estimate + o.error_estimate,
            evaluations: self.evaluations + o.evaluations,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    piece: usize,
    a: f64,
    b: f64,
    value: Complex64,
    err: f64,
    /// `int |f|` over the segment, the scale of rounding errors.
    magnitude: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn checked(v: Complex64, x: f64) -> Result<Complex64> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite {
            quantity: "integrand",
            at: x,
        })
    }
}

type Integrand<'a> = dyn FnMut(usize, f64) -> Result<Complex64> + 'a;

fn gk21(f: &mut Integrand<'_>, piece: usize, a: f64, b: f64) -> Result<Segment> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = checked(f(piece, center)?, center)?;
    let mut kronrod = fc * WGK[10];
    let mut abs = fc.norm() * WGK[10];
    let mut gauss = Complex64::new(0.0, 0.0);
    for j in 0..10 {
        let dx = half * XGK[j];
        let (x1, x2) = (center - dx, center + dx);
        let (f1, f2) = (checked(f(piece, x1)?, x1)?, checked(f(piece, x2)?, x2)?);
        let pair = f1 + f2;
        abs += (f1.norm() + f2.norm()) * WGK[j];
        kronrod += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    let value = kronrod * half;
    let magnitude = abs * half.abs();
    let err = ((kronrod - gauss) * half).norm();
    Ok(Segment {
        piece,
        a,
        b,
        value,
        err: err.max(50.0 * f64::EPSILON * magnitude),
        magnitude,
    })
}

/// Global adaptive driver: always bisects the segment with the largest error.
fn adapt(
    f: &mut Integrand<'_>,
    initial: &[(usize, f64, f64)],
    opts: &QuadratureOptions,
) -> Result<QuadratureResult> {
    let mut heap = BinaryHeap::new();
    let mut frozen: Vec<Segment> = Vec::new();
    let mut evaluations = 0usize;
    for &(piece, a, b) in initial {
        if b > a {
            heap.push(gk21(f, piece, a, b)?);
            evaluations += 21;
        }
    }
    let mut splits = 0usize;
    loop {
        let (value, err, magnitude) = totals(&heap, &frozen);
        // below this the estimate is rounding noise and cannot improve
        let noise = 100.0 * f64::EPSILON * magnitude;
        if err <= opts.target(value).max(noise) {
            return Ok(QuadratureResult {
                value,
                error_estimate: err,
                evaluations,
            });
        }
        let Some(worst) = heap.pop() else {
            return Err(Error::Quadrature {
                value,
                error_estimate: err,
                evaluations,
            });
        };
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) || worst.b - worst.a < 1e-15 * worst.a.abs().max(1e-3) {
            frozen.push(worst);
            continue;
        }
        if splits >= opts.max_subdivisions {
            heap.push(worst);
            let (value, err, _) = totals(&heap, &frozen);
            return Err(Error::Quadrature {
                value,
                error_estimate: err,
                evaluations,
            });
        }
        splits += 1;
        heap.push(gk21(f, worst.piece, worst.a, mid)?);
        heap.push(gk21(f, worst.piece, mid, worst.b)?);
        evaluations += 42;
    }
}

fn totals(heap: &BinaryHeap<Segment>, frozen: &[Segment]) -> (Complex64, f64, f64) {
    let mut value = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut magnitude = 0.0;
    for s in heap.iter().chain(frozen) {
        value += s.value;
        err += s.err;
        magnitude += s.magnitude;
    }
    (value, err, magnitude)
}

fn intervals(points: &[f64]) -> Vec<(usize, f64, f64)> {
    points.windows(2).map(|w| (0, w[0], w[1])).collect()
}

fn with_zero(a: f64, b: f64) -> Vec<f64> {
    if a < 0.0 && b > 0.0 {
        alloc::vec![a, 0.0, b]
    } else {
        alloc::vec![a, b]
    }
}

/// `int_a^b f`, split at 0 when the interval straddles it.
pub fn integrate(
    mut f: impl FnMut(f64) -> Complex64,
    a: f64,
    b: f64,
    opts: &QuadratureOptions,
) -> Result<QuadratureResult> {
    try_integrate(|x| Ok(f(x)), a, b, opts)
}

/// As [`integrate`] for an integrand that can fail.
pub fn try_integrate(
    mut f: impl FnMut(f64) -> Result<Complex64>,
    a: f64,
    b: f64,
    opts: &QuadratureOptions,
) -> Result<QuadratureResult> {
    if a > b {
        let r = try_integrate(f, b, a, opts)?;
        return Ok(QuadratureResult { value: -r.value, ..r });
    }
    let mut g = |_: usize, x: f64| f(x);
    adapt(&mut g, &intervals(&with_zero(a, b)), opts)
}

/// Integral over `[points[0], points[last]]` with forced breaks at every point.
pub fn try_integrate_breaks(
    mut f: impl FnMut(f64) -> Result<Complex64>,
    points: &[f64],
    opts: &QuadratureOptions,
) -> Result<QuadratureResult> {
    let mut g = |_: usize, x: f64| f(x);
    adapt(&mut g, &intervals(points), opts)
}

/// Cauchy principal value of `int_a^b f(x) / (x - s) dx`.
///
/// The neighbourhood `|x - s| < r` is folded onto `(0, r)` as
/// `(f(s+t) - f(s-t)) / t`, which is regular, so no excision limit is needed.
/// `breaks` lists points where `f` is not smooth; `r` stops short of them.
pub fn integrate_pv(
    mut f: impl FnMut(f64) -> Complex64,
    a: f64,
    b: f64,
    s: f64,
    breaks: &[f64],
    opts: &QuadratureOptions,
) -> Result<QuadratureResult> {
    try_integrate_pv(|x| Ok(f(x)), a, b, s, breaks, opts)
}

pub fn try_integrate_pv(
    mut f: impl FnMut(f64) -> Result<Complex64>,
    a: f64,
    b: f64,
    s: f64,
    breaks: &[f64],
    opts: &QuadratureOptions,
) -> Result<QuadratureResult> {
    if !(s - a >= PV_ENDPOINT_GUARD && b - s >= PV_ENDPOINT_GUARD) {
        return Err(Error::PoleNearEndpoint { pole: s });
    }
    let mut r = (s - a).min(b - s);
    let mut cuts: Vec<f64> = Vec::new();
    for &p in breaks {
        if p > a && p < b && p != s {
            r = r.min((p - s).abs());
            cuts.push(p);
        }
    }
    let mut pieces = alloc::vec![(0usize, 0.0, r)];
    let mut left = alloc::vec![a];
    let mut right = alloc::vec![s + r];
    for &p in &cuts {
        if p < s - r {
            left.push(p);
        } else if p > s + r {
            right.push(p);
        }
    }
    left.push(s - r);
    right.push(b);
    left.sort_by(f64::total_cmp);
    right.sort_by(f64::total_cmp);
    for w in left.windows(2).chain(right.windows(2)) {
        pieces.push((1, w[0], w[1]));
    }
    let mut g = |piece: usize, x: f64| -> Result<Complex64> {
        if piece == 0 {
            Ok((f(s + x)? - f(s - x)?) / x)
        } else {
            Ok(f(x)? / (x - s))
        }
    };
    adapt(&mut g, &pieces, opts)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult {
    pub value: Complex64,
    pub terms: usize,
    /// Size of the omitted tail, assuming terms decay like `k^-4`.
    pub tail_estimate: f64,
}

/// `2 * sum_{k >= 0} term(k)` for series whose terms are even under
/// `k -> -(k+1)`. Stops after three consecutive terms below `tol * |partial|`.
pub fn sum_symmetric_series(
    mut term: impl FnMut(usize) -> Result<Complex64>,
    tol: f64,
    max_terms: usize,
) -> Result<SeriesResult> {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut small = 0;
    let mut last = 0.0;
    for k in 0..max_terms {
        let t = term(k)?;
        sum += t;
        last = t.norm();
        if last <= tol * sum.norm() {
            small += 1;
            if small == 3 {
                return Ok(SeriesResult {
                    value: 2.0 * sum,
                    terms: k + 1,
                    tail_estimate: 2.0 * last * (k + 1) as f64 / 3.0,
                });
            }
        } else {
            small = 0;
        }
    }
    let _ = last;
    Err(Error::SeriesNonConvergence {
        partial: 2.0 * sum,
        terms: max_terms,
    })
}
