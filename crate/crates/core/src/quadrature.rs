//! Deterministic adaptive quadrature for weakly singular integrands on
//! finite intervals and on half-lines.
//!
//! Every finite segment between consecutive break points is cut in half and
//! each half is integrated in a local coordinate measured from its outer
//! end point, so panels can shrink geometrically toward a singular end
//! without losing the distance to it. A tail `[T, ∞)` is mapped to
//! `(0, 1/T]` by `x = 1/u`, which turns power decay into one more singular
//! end point. Panels are refined globally by largest error estimate with the
//! 21-point Gauss–Kronrod pair; panels touching a singular end are split at
//! a quarter of their width, all others are bisected.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

const GRADING_RATIO: f64 = 0.25;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Known singular locations strictly inside the integration domain.
    pub split_points: Vec<f64>,
    /// Power `e` with integrand ~ x^e at infinity.
    pub tail_exponent_hint: Option<f64>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-14,
            max_subdivisions: 2000,
            split_points: Vec::new(),
            tail_exponent_hint: None,
        }
    }
}

impl QuadratureSpec {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_max_subdivisions(mut self, max_subdivisions: usize) -> Self {
        self.max_subdivisions = max_subdivisions;
        self
    }

    pub fn with_split_points(mut self, split_points: Vec<f64>) -> Self {
        self.split_points = split_points;
        self
    }

    pub fn with_tail_exponent_hint(mut self, exponent: f64) -> Self {
        self.tail_exponent_hint = Some(exponent);
        self
    }

    pub fn without_tail_exponent_hint(mut self) -> Self {
        self.tail_exponent_hint = None;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return domain(format!("rel_tol must be positive, got {}", self.rel_tol));
        }
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return domain(format!("abs_tol must be positive, got {}", self.abs_tol));
        }
        if self.max_subdivisions == 0 {
            return domain("max_subdivisions must be at least 1");
        }
        if self.split_points.iter().any(|s| !s.is_finite()) {
            return domain("split points must be finite");
        }
        if self.split_points.windows(2).any(|w| w[0] >= w[1]) {
            return domain("split points must be strictly increasing");
        }
        Ok(())
    }
}

/// An integral value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub err_estimate: f64,
}

impl Estimate {
    pub fn zero() -> Self {
        Self {
            value: 0.0,
            err_estimate: 0.0,
        }
    }

    pub fn scaled(self, c: f64) -> Self {
        Self {
            value: c * self.value,
            err_estimate: c.abs() * self.err_estimate,
        }
    }
}

impl std::ops::Add for Estimate {
    type Output = Estimate;

    fn add(self, rhs: Estimate) -> Estimate {
        Estimate {
            value: self.value + rhs.value,
            err_estimate: self.err_estimate + rhs.err_estimate,
        }
    }
}

/// A quadrature node as seen by an anchored integrand.
///
/// `x` is the node itself. When `anchor` is a finite break point, `offset`
/// is the exact signed distance `x − anchor`, which stays accurate even when
/// `x` rounds onto the anchor. Tail nodes use `anchor = 0` and `offset = x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Abscissa {
    pub x: f64,
    pub anchor: f64,
    pub offset: f64,
}

impl Abscissa {
    /// Distance from `point`, exact when `point` is this node's anchor.
    pub fn distance_to(&self, point: f64) -> f64 {
        if self.anchor == point {
            self.offset.abs()
        } else {
            (self.x - point).abs()
        }
    }
}

/// ∫_a^b f(x) dx where `b` may be `f64::INFINITY`.
pub fn integrate<F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Estimate>
where
    F: Fn(f64) -> f64,
{
    integrate_anchored(|node: Abscissa| f(node.x), a, b, spec)
}

/// Same as [`integrate`], but the integrand receives the node together with
/// its exact offset from the nearest break point.
pub fn integrate_anchored<F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Estimate>
where
    F: Fn(Abscissa) -> f64,
{
    spec.validate()?;
    if !a.is_finite() || b.is_nan() || b == f64::NEG_INFINITY {
        return domain(format!("unsupported integration range [{a}, {b}]"));
    }
    if a == b {
        return Ok(Estimate::zero());
    }
    if b < a {
        return Ok(integrate_anchored(f, b, a, spec)?.scaled(-1.0));
    }
    for &s in &spec.split_points {
        if s < a || s > b {
            return domain(format!("split point {s} lies outside [{a}, {b}]"));
        }
    }

    let mut breaks = vec![a];
    breaks.extend(spec.split_points.iter().copied().filter(|&s| s > a && s < b));

    let mut pieces = Vec::new();
    if b.is_finite() {
        breaks.push(b);
    } else {
        let largest = spec.split_points.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let t = 1f64.max(2.0 * largest).max(a);
        check_tail(&f, t, spec)?;
        if t > a {
            breaks.push(t);
        }
        pieces.push(Piece {
            kind: PieceKind::Tail,
            anchor: 0.0,
            lo: 0.0,
            hi: 1.0 / t,
        });
    }
    let mut finite = Vec::new();
    for w in breaks.windows(2) {
        let (u, v) = (w[0], w[1]);
        let half = 0.5 * (v - u);
        let mid = u + half;
        finite.push(Piece {
            kind: PieceKind::Affine,
            anchor: u,
            lo: 0.0,
            hi: mid - u,
        });
        finite.push(Piece {
            kind: PieceKind::Affine,
            anchor: v,
            lo: mid - v,
            hi: 0.0,
        });
    }
    finite.extend(pieces);
    adapt(&f, &finite, spec)
}

fn check_tail<F>(f: &F, t: f64, spec: &QuadratureSpec) -> Result<()>
where
    F: Fn(Abscissa) -> f64,
{
    if let Some(e) = spec.tail_exponent_hint {
        if e >= -1.0 {
            return Err(Error::DivergentTail { exponent: e });
        }
        return Ok(());
    }
    let probe = |x: f64| {
        f(Abscissa {
            x,
            anchor: 0.0,
            offset: x,
        })
        .abs()
    };
    let (x1, x2) = (1e3 * t, 1e4 * t);
    let (f1, f2) = (probe(x1), probe(x2));
    if !(f1.is_finite() && f2.is_finite()) {
        return domain("integrand is not finite in the tail probe");
    }
    if f1 == 0.0 || f2 == 0.0 {
        return Ok(());
    }
    let slope = (f2 / f1).ln() / 10f64.ln();
    if slope >= -1.0 {
        return Err(Error::DivergentTail { exponent: slope });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PieceKind {
    /// x = anchor + t
    Affine,
    /// x = 1/t, dx = dt/t²
    Tail,
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    kind: PieceKind,
    anchor: f64,
    lo: f64,
    hi: f64,
}

impl Piece {
    fn eval<F>(&self, f: &F, t: f64) -> f64
    where
        F: Fn(Abscissa) -> f64,
    {
        match self.kind {
            PieceKind::Affine => f(Abscissa {
                x: self.anchor + t,
                anchor: self.anchor,
                offset: t,
            }),
            PieceKind::Tail => {
                let x = 1.0 / t;
                let fx = f(Abscissa {
                    x,
                    anchor: 0.0,
                    offset: x,
                });
                if fx == 0.0 {
                    0.0
                } else {
                    fx * x * x
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    piece: usize,
    lo: f64,
    hi: f64,
    value: f64,
    err: f64,
    serial: usize,
}

impl Panel {
    fn touches_singular_end(&self) -> bool {
        self.lo == 0.0 || self.hi == 0.0
    }
}

struct ByError(Panel);

impl PartialEq for ByError {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for ByError {}

impl PartialOrd for ByError {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ByError {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .err
            .total_cmp(&other.0.err)
            .then_with(|| other.0.serial.cmp(&self.0.serial))
    }
}

fn adapt<F>(f: &F, pieces: &[Piece], spec: &QuadratureSpec) -> Result<Estimate>
where
    F: Fn(Abscissa) -> f64,
{
    let mut serial = 0usize;
    let mut heap = BinaryHeap::new();
    let mut frozen: Vec<Panel> = Vec::new();
    let mut make = |piece: usize, lo: f64, hi: f64| -> Result<Panel> {
        let (value, err) = gauss_kronrod_21(|t| pieces[piece].eval(f, t), lo, hi);
        if !(value.is_finite() && err.is_finite()) {
            return domain(format!(
                "integrand produced a non-finite value on [{lo:e}, {hi:e}] near {}",
                pieces[piece].anchor
            ));
        }
        serial += 1;
        Ok(Panel {
            piece,
            lo,
            hi,
            value,
            err,
            serial,
        })
    };

    let mut total = 0.0;
    let mut total_err = 0.0;
    for (i, p) in pieces.iter().enumerate() {
        let panel = make(i, p.lo, p.hi)?;
        total += panel.value;
        total_err += panel.err;
        heap.push(ByError(panel));
    }

    let mut subdivisions = 0usize;
    loop {
        if total_err <= spec.abs_tol.max(spec.rel_tol * total.abs()) {
            break;
        }
        let Some(ByError(worst)) = heap.pop() else {
            return Err(non_convergent(&frozen, subdivisions));
        };
        if subdivisions >= spec.max_subdivisions {
            heap.push(ByError(worst));
            let mut all: Vec<Panel> = heap.into_iter().map(|p| p.0).collect();
            all.extend(frozen);
            return Err(non_convergent(&all, subdivisions));
        }
        let cut = if worst.touches_singular_end() {
            if worst.lo == 0.0 {
                worst.lo + GRADING_RATIO * (worst.hi - worst.lo)
            } else {
                worst.hi - GRADING_RATIO * (worst.hi - worst.lo)
            }
        } else {
            0.5 * (worst.lo + worst.hi)
        };
        if !(cut > worst.lo && cut < worst.hi) {
            frozen.push(worst);
            continue;
        }
        let left = make(worst.piece, worst.lo, cut)?;
        let right = make(worst.piece, cut, worst.hi)?;
        subdivisions += 1;
        total += left.value + right.value - worst.value;
        total_err += left.err + right.err - worst.err;
        heap.push(ByError(left));
        heap.push(ByError(right));
    }

    let mut all: Vec<Panel> = heap.into_iter().map(|p| p.0).collect();
    all.extend(frozen);
    Ok(ordered_sum(&all))
}

/// Sums panels in a fixed order (piece, then position) so the result does
/// not depend on the refinement history.
fn ordered_sum(panels: &[Panel]) -> Estimate {
    let mut sorted: Vec<&Panel> = panels.iter().collect();
    sorted.sort_by(|a, b| a.piece.cmp(&b.piece).then(a.lo.total_cmp(&b.lo)));
    sorted.iter().fold(Estimate::zero(), |acc, p| Estimate {
        value: acc.value + p.value,
        err_estimate: acc.err_estimate + p.err,
    })
}

fn non_convergent(panels: &[Panel], subdivisions: usize) -> Error {
    let est = ordered_sum(panels);
    Error::NonConvergent {
        value: est.value,
        err_estimate: est.err_estimate,
        subdivisions,
    }
}

#[allow(clippy::excessive_precision)]
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

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// 21-point Gauss–Kronrod rule with the QUADPACK error heuristic.
fn gauss_kronrod_21<G: Fn(f64) -> f64>(g: G, lo: f64, hi: f64) -> (f64, f64) {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = g(center);
    let mut res_k = WGK[10] * fc;
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = g(center - dx);
        let f2 = g(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let width = half.abs();
    let value = res_k * half;
    res_abs *= width;
    res_asc *= width;
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (value, err)
}

/// A singular location on the real line, possibly at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Location {
    Finite(f64),
    Infinity,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Finite(x) => write!(f, "{x}"),
            Location::Infinity => write!(f, "infinity"),
        }
    }
}

/// Local power behaviour ~|t − t₀|^e (or ~t^e at infinity) of an integrand.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SingularityBudget {
    pub local_exponents: Vec<(Location, f64)>,
}

impl SingularityBudget {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn at(mut self, location: f64, exponent: f64) -> Self {
        self.local_exponents.push((Location::Finite(location), exponent));
        self
    }

    pub fn at_infinity(mut self, exponent: f64) -> Self {
        self.local_exponents.push((Location::Infinity, exponent));
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Screen {
    Convergent,
    Divergent(Location),
}

impl Screen {
    pub fn is_convergent(&self) -> bool {
        matches!(self, Screen::Convergent)
    }
}

/// Absolute-convergence test: finite exponents must exceed −1, the exponent
/// at infinity must be below −1. Exactly −1 fails either way.
pub fn convergence_screen(budget: &SingularityBudget) -> Screen {
    for &(location, e) in &budget.local_exponents {
        let ok = match location {
            Location::Finite(_) => e > -1.0,
            Location::Infinity => e < -1.0,
        };
        if !ok {
            return Screen::Divergent(location);
        }
    }
    Screen::Convergent
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn inverse_square_root_at_endpoint() {
        let est = integrate(|s| s.powf(-0.5), 0.0, 1.0, &spec()).unwrap();
        assert!((est.value - 2.0).abs() < 2e-9);
    }

    #[test]
    fn interior_singularity_with_split() {
        let s = spec().with_split_points(vec![0.5]);
        let est = integrate_anchored(|node| node.distance_to(0.5).powf(-0.5), 0.0, 1.0, &s).unwrap();
        assert!((est.value - 2.0 * 2f64.sqrt()).abs() < 3e-9);
    }

    #[test]
    fn power_tail() {
        let est = integrate(|s| s.powi(-2), 1.0, f64::INFINITY, &spec()).unwrap();
        assert!((est.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn reversed_and_empty_ranges() {
        let fwd = integrate(|s| s * s, 0.0, 2.0, &spec()).unwrap();
        let rev = integrate(|s| s * s, 2.0, 0.0, &spec()).unwrap();
        assert_eq!(fwd.value, -rev.value);
        assert_eq!(integrate(|s| s, 1.0, 1.0, &spec()).unwrap().value, 0.0);
    }

    #[test]
    fn divergent_tail_is_reported() {
        let err = integrate(|s| 1.0 / s, 1.0, f64::INFINITY, &spec()).unwrap_err();
        assert!(matches!(err, Error::DivergentTail { .. }));
        let err = integrate(
            |s| s.powf(-1.5),
            1.0,
            f64::INFINITY,
            &spec().with_tail_exponent_hint(-1.0),
        )
        .unwrap_err();
        assert!(matches!(err, Error::DivergentTail { .. }));
    }

    #[test]
    fn budget_exhaustion_is_non_convergent() {
        let s = spec().with_max_subdivisions(3).with_rel_tol(1e-14);
        let err = integrate(|x| (30.0 * x).sin().abs().sqrt(), 0.0, 10.0, &s).unwrap_err();
        assert!(matches!(err, Error::NonConvergent { .. }));
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(integrate(|x| x, 0.0, 1.0, &spec().with_rel_tol(0.0)).is_err());
        assert!(integrate(|x| x, 0.0, 1.0, &spec().with_split_points(vec![0.6, 0.4])).is_err());
        assert!(integrate(|x| x, 0.0, 1.0, &spec().with_split_points(vec![1.5])).is_err());
        assert!(integrate(|x| x, f64::NEG_INFINITY, 1.0, &spec()).is_err());
    }

    #[test]
    fn deterministic_bitwise() {
        let f = |x: f64| x.powf(-0.3) * (1.0 + x * x).powf(-1.2);
        let a = integrate(f, 0.0, f64::INFINITY, &spec()).unwrap();
        let b = integrate(f, 0.0, f64::INFINITY, &spec()).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.err_estimate.to_bits(), b.err_estimate.to_bits());
    }

    #[test]
    fn screen_examples() {
        // f_C · f_C^{p−1} in ℝⁿ: radial exponent −1 at the origin.
        let (n, lambda) = (3.0, 1.0);
        let e0 = -(n - lambda / 2.0) - lambda / 2.0 + (n - 1.0);
        let b = SingularityBudget::new().at(0.0, e0).at_infinity(e0);
        assert_eq!(convergence_screen(&b), Screen::Divergent(Location::Finite(0.0)));

        let b = SingularityBudget::new()
            .at(0.0, -(n - lambda / 2.0) + (n - 1.0))
            .at_infinity(-(n + lambda / 2.0) + (n - 1.0));
        assert_eq!(convergence_screen(&b), Screen::Convergent);

        assert_eq!(convergence_screen(&SingularityBudget::new()), Screen::Convergent);
        let b = SingularityBudget::new().at(0.0, 0.0).at_infinity(-1.0);
        assert_eq!(convergence_screen(&b), Screen::Divergent(Location::Infinity));
    }
}
