//! Boundary-weighted smoothness norms, kernel growth conditions for the
//! Riesz kernel, and a decay / singularity scan for radial solutions.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::identities::{partial_derivative, MultiIndex, ScalarField};
use crate::jet::Jet;
use crate::specfun::Params;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Domain1D {
    Interval { a: f64, b: f64 },
    Ball { n: u32, radius: f64 },
}

impl Domain1D {
    pub fn interval(a: f64, b: f64) -> Result<Self> {
        if !(a < b && a.is_finite() && b.is_finite()) {
            return domain(format!("interval ({a}, {b}) is empty or unbounded"));
        }
        Ok(Self::Interval { a, b })
    }

    pub fn ball(n: u32, radius: f64) -> Result<Self> {
        if n == 0 || !(radius > 0.0 && radius.is_finite()) {
            return domain("ball needs n >= 1 and a positive finite radius");
        }
        Ok(Self::Ball { n, radius })
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Interval { .. } => 1,
            Self::Ball { n, .. } => *n as usize,
        }
    }

    /// Distance to the boundary; negative outside.
    pub fn rho(&self, x: &[f64]) -> f64 {
        match self {
            Self::Interval { a, b } => (x[0] - a).min(b - x[0]),
            Self::Ball { radius, .. } => radius - x.iter().map(|v| v * v).sum::<f64>().sqrt(),
        }
    }

    /// The domain as a segment of the real line, when it is one.
    pub fn segment(&self) -> Option<(f64, f64)> {
        match *self {
            Self::Interval { a, b } => Some((a, b)),
            Self::Ball { n: 1, radius } => Some((-radius, radius)),
            Self::Ball { .. } => None,
        }
    }
}

/// w_λ(x): 1 for λ < 0, (1 + |log ρ|)^{−1} for λ = 0, ρ^λ for λ > 0.
pub fn weight(lam: f64, x: &[f64], g: &Domain1D) -> Result<f64> {
    if x.len() != g.dim() {
        return domain(format!(
            "point has {} coordinates, domain has dimension {}",
            x.len(),
            g.dim()
        ));
    }
    let rho = g.rho(x);
    if !(rho > 0.0) {
        return domain("weight is defined only in the interior of the domain");
    }
    Ok(if lam < 0.0 {
        1.0
    } else if lam == 0.0 {
        1.0 / (1.0 + rho.ln().abs())
    } else {
        rho.powf(lam)
    })
}

/// Refinement schedule for supremum estimates. Level ℓ samples the
/// `base_points·2^ℓ` uniform cell boundaries, geometric clusters toward both
/// boundary points and every focus point reaching distance span·4^{−(6+4ℓ)},
/// and any extra points (for instance the breakpoints of a sampled field).
/// Each level contains the previous one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSchedule {
    pub base_points: usize,
    pub levels: usize,
    pub focus_points: Vec<f64>,
    pub extra_points: Vec<f64>,
}

impl Default for GridSchedule {
    fn default() -> Self {
        Self {
            base_points: 64,
            levels: 3,
            focus_points: Vec::new(),
            extra_points: Vec::new(),
        }
    }
}

impl GridSchedule {
    pub fn with_focus(mut self, points: Vec<f64>) -> Self {
        self.focus_points = points;
        self
    }

    pub fn with_extra_points(mut self, points: Vec<f64>) -> Self {
        self.extra_points = points;
        self
    }

    fn level_points(&self, a: f64, b: f64, level: usize) -> Vec<f64> {
        let span = b - a;
        let n = self.base_points << level;
        let mut pts: Vec<f64> = (1..n).map(|i| a + span * i as f64 / n as f64).collect();
        pts.extend_from_slice(&self.extra_points);
        let depth = 6 + 4 * level as i32;
        let mut anchors = vec![(a, 1.0), (b, -1.0)];
        for &c in &self.focus_points {
            anchors.push((c, 1.0));
            anchors.push((c, -1.0));
        }
        for (anchor, dir) in anchors {
            for j in 1..=depth {
                pts.push(anchor + dir * span * 4f64.powi(-j));
            }
        }
        pts.retain(|&x| x > a && x < b && !self.focus_points.contains(&x));
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedNormResult {
    pub m: u32,
    pub nu: f64,
    /// Finest-level estimate of sup w_{|α|−(n−ν)}|D_α u| for |α| = 0..=m.
    pub per_alpha_suprema: Vec<f64>,
    /// Estimates at every refinement level, coarsest first.
    pub level_suprema: Vec<Vec<f64>>,
    pub per_alpha_unbounded: Vec<bool>,
    /// Sum of the suprema, or `None` when any of them is flagged unbounded.
    pub total: Option<f64>,
    pub unbounded: bool,
}

/// Estimates Σ_{|α|≤m} sup_G w_{|α|−(n−ν)}|D_α u| on a one-dimensional
/// domain. A supremum is flagged unbounded when it grows by more than 10%
/// between the two finest levels.
pub fn weighted_norm<S: ScalarField + ?Sized>(
    u: &S,
    m: u32,
    nu: f64,
    g: &Domain1D,
    schedule: &GridSchedule,
) -> Result<WeightedNormResult> {
    let (a, b) = g
        .segment()
        .ok_or_else(|| crate::Error::Domain("weighted norms are estimated on one-dimensional domains".into()))?;
    if u.dim() != 1 {
        return domain("weighted norms need a one-dimensional field");
    }
    let n = 1.0;
    if !(nu < n) {
        return domain(format!("need nu < n = 1, got {nu}"));
    }
    if schedule.levels < 3 {
        return domain("at least three refinement levels are required");
    }
    let mut level_suprema = Vec::with_capacity(schedule.levels);
    for level in 0..schedule.levels {
        let pts = schedule.level_points(a, b, level);
        let mut sups = vec![0.0f64; m as usize + 1];
        for &x in &pts {
            for k in 0..=m {
                let lam = f64::from(k) - (n - nu);
                let w = weight(lam, &[x], g)?;
                let d = partial_derivative(u, &MultiIndex::new(vec![k]), &[x])?;
                let v = w * d.abs();
                let slot = &mut sups[k as usize];
                *slot = if v.is_nan() { f64::INFINITY } else { slot.max(v) };
            }
        }
        level_suprema.push(sups);
    }
    let finest = &level_suprema[schedule.levels - 1];
    let previous = &level_suprema[schedule.levels - 2];
    let per_alpha_unbounded: Vec<bool> = finest
        .iter()
        .zip(previous)
        .map(|(&f, &p)| !f.is_finite() || f > 1.1 * p)
        .collect();
    let unbounded = per_alpha_unbounded.iter().any(|&x| x);
    let total = if unbounded { None } else { Some(finest.iter().sum()) };
    Ok(WeightedNormResult {
        m,
        nu,
        per_alpha_suprema: finest.clone(),
        level_suprema,
        per_alpha_unbounded,
        total,
        unbounded,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthOrder {
    pub order: u32,
    /// Range of |D_x^k K|·|x−y|^{λ+k} over the samples.
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// λ(λ+1)…(λ+k−1)
    pub analytic_coefficient: f64,
    pub max_rel_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelGrowthReport {
    pub lambda: f64,
    pub sample_count: usize,
    pub orders: Vec<GrowthOrder>,
    /// Empirical b₁: the largest ratio over all orders.
    pub b1: f64,
    /// max |∂K/∂u| over the samples (the kernel ignores u).
    pub u_derivative_max: f64,
    /// max |(∂_x + ∂_y)K| over the samples.
    pub translation_derivative_max: f64,
    /// Lipschitz constant in u; zero for a u-independent kernel.
    pub b2: f64,
}

/// |x−y|^{−λ} in one dimension; the unused `u` slot mirrors K(x, y, u).
fn kernel_1d(x: f64, y: f64, _u: f64, lambda: f64) -> f64 {
    (x - y).abs().powf(-lambda)
}

/// Weyl-sequence sample pairs in [−1, 1]², kept at distance ≥ 1e−3.
fn weyl_pairs(count: usize) -> Vec<(f64, f64)> {
    let (g1, g2) = (0.754_877_666_246_692_8, 0.569_840_290_998_053_3);
    let mut out = Vec::with_capacity(count);
    let mut i = 1u64;
    while out.len() < count {
        let x = 2.0 * ((i as f64 * g1).fract()) - 1.0;
        let y = 2.0 * ((i as f64 * g2).fract()) - 1.0;
        if (x - y).abs() >= 1e-3 {
            out.push((x, y));
        }
        i += 1;
    }
    out
}

/// Growth of x-derivatives of the Riesz kernel in one dimension, sampled
/// deterministically, together with the vanishing u- and translation slices.
pub fn kernel_growth_check(params: &Params, m: u32, sample_count: usize) -> Result<KernelGrowthReport> {
    if m > 4 {
        return domain("kernel growth checks support m <= 4");
    }
    if sample_count == 0 {
        return domain("at least one sample is required");
    }
    let lambda = params.lambda();
    let samples = weyl_pairs(sample_count);
    let mut orders = Vec::with_capacity(m as usize + 1);
    let mut coefficient = 1.0;
    for k in 0..=m {
        if k > 0 {
            coefficient *= lambda + f64::from(k) - 1.0;
        }
        let (mut lo, mut hi, mut dev) = (f64::INFINITY, 0.0f64, 0.0f64);
        for &(x, y) in &samples {
            let jet = (&Jet::variable(x, k as usize) - &Jet::constant(y, k as usize))
                .abs()
                .powf(-lambda);
            let dist = (x - y).abs();
            let ratio = jet.derivative(k as usize).abs() * dist.powf(lambda + f64::from(k));
            lo = lo.min(ratio);
            hi = hi.max(ratio);
            dev = dev.max((ratio - coefficient).abs() / coefficient);
        }
        orders.push(GrowthOrder {
            order: k,
            min_ratio: lo,
            max_ratio: hi,
            analytic_coefficient: coefficient,
            max_rel_deviation: dev,
        });
    }
    let mut u_derivative_max = 0.0f64;
    let mut translation_derivative_max = 0.0f64;
    for &(x, y) in &samples {
        let h = 1e-3;
        let du = (kernel_1d(x, y, 1.0 + h, lambda) - kernel_1d(x, y, 1.0 - h, lambda)) / (2.0 * h);
        u_derivative_max = u_derivative_max.max(du.abs());
        // both arguments carried along the same direction t ↦ (x + t, y + t)
        let moved = (&Jet::variable(x, 1) - &Jet::variable(y, 1)).abs().powf(-lambda);
        translation_derivative_max = translation_derivative_max.max(moved.derivative(1).abs());
    }
    let b1 = orders.iter().map(|o| o.max_ratio).fold(0.0, f64::max);
    Ok(KernelGrowthReport {
        lambda,
        sample_count,
        orders,
        b1,
        u_derivative_max,
        translation_derivative_max,
        b2: 0.0,
    })
}

fn riesz_kernel(x: &[f64], y: &[f64], lambda: f64) -> f64 {
    let d2: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
    d2.powf(-0.5 * lambda)
}

/// max over samples and axes of the central difference
/// [K(x+h eᵢ, y+h eᵢ) − K(x−h eᵢ, y−h eᵢ)]/(2h), which approximates
/// (∂/∂xᵢ + ∂/∂yᵢ)|x−y|^{−λ}.
pub fn translation_annihilation_check(params: &Params, points: &[(Vec<f64>, Vec<f64>)], h: f64) -> Result<f64> {
    if !(h > 0.0 && h.is_finite()) {
        return domain("step must be positive");
    }
    let n = params.n() as usize;
    let mut worst = 0.0f64;
    for (x, y) in points {
        if x.len() != n || y.len() != n {
            return domain(format!("sample points must have {n} coordinates"));
        }
        if x == y {
            return domain("sample pairs must satisfy x != y");
        }
        for axis in 0..n {
            let (mut xp, mut yp, mut xm, mut ym) = (x.clone(), y.clone(), x.clone(), y.clone());
            xp[axis] += h;
            yp[axis] += h;
            xm[axis] -= h;
            ym[axis] -= h;
            let diff = riesz_kernel(&xp, &yp, params.lambda()) - riesz_kernel(&xm, &ym, params.lambda());
            worst = worst.max((diff / (2.0 * h)).abs());
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanOptions {
    /// Smallest radius of the first scan level.
    pub inner_radius: f64,
    pub points_per_decade: usize,
    /// Decay holds when f(R_outer) ≤ decay_rel·f(1).
    pub decay_rel: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            inner_radius: 1e-6,
            points_per_decade: 20,
            decay_rel: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularPoint {
    pub radius: f64,
    /// Largest sampled value near the point at the base level and after each refinement.
    pub peak_values: Vec<f64>,
}

/// Result of the decay / singularity scan. Singularities are detected
/// heuristically: threshold exceedance whose peak keeps growing under two
/// successive refinements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub r_outer: f64,
    pub blowup_threshold: f64,
    pub value_at_outer: f64,
    pub reference_value: f64,
    pub last_decade_decreasing: bool,
    pub decay_verified: bool,
    pub singularities: Vec<SingularPoint>,
    /// f stays below the threshold on the scanned radii beyond this radius.
    pub bounding_radius: f64,
    pub sup_outside: f64,
}

fn geometric_grid(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    let decades = (hi / lo).log10();
    let count = (decades * per_decade as f64).ceil().max(1.0) as usize;
    (0..=count)
        .map(|i| lo * (hi / lo).powf(i as f64 / count as f64))
        .collect()
}

const GROWTH_FACTOR: f64 = 1.01;

/// Scans a radial function on (0, r_outer].
pub fn decay_singularity_scan(
    f: &dyn Fn(f64) -> f64,
    r_outer: f64,
    blowup_threshold: f64,
    options: &ScanOptions,
) -> Result<ScanReport> {
    if !(r_outer > 1.0 && r_outer.is_finite()) {
        return domain("outer radius must exceed 1");
    }
    if !(options.inner_radius > 0.0 && options.inner_radius < 1.0) {
        return domain("inner radius must lie in (0, 1)");
    }
    let eval = |r: f64| {
        let v = f(r);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v.abs()
        }
    };
    let grid = geometric_grid(options.inner_radius, r_outer, options.points_per_decade);
    let values: Vec<f64> = grid.iter().map(|&r| eval(r)).collect();

    let mut singularities = Vec::new();
    let mut i = 0;
    while i < grid.len() {
        if values[i] <= blowup_threshold {
            i += 1;
            continue;
        }
        let start = i;
        while i < grid.len() && values[i] > blowup_threshold {
            i += 1;
        }
        let run = start..i;
        let peak = run
            .clone()
            .max_by(|&a, &b| values[a].total_cmp(&values[b]))
            .unwrap_or(start);
        let mut peaks = vec![values[peak]];
        let radius;
        if peak == 0 {
            // toward the origin: push the inner radius down by 10³ per refinement
            let mut lo = options.inner_radius;
            for level in 1..=2 {
                lo *= 1e-3;
                let fine = geometric_grid(
                    lo,
                    grid[run.end.min(grid.len() - 1)],
                    options.points_per_decade << level,
                );
                peaks.push(fine.iter().map(|&r| eval(r)).fold(0.0, f64::max));
            }
            radius = 0.0;
        } else {
            let mut left = grid[peak - 1];
            let mut right = grid[(peak + 1).min(grid.len() - 1)];
            let mut center = grid[peak];
            for level in 1..=2 {
                let count = 16usize << level;
                let fine: Vec<f64> = (0..=count)
                    .map(|j| left + (right - left) * j as f64 / count as f64)
                    .collect();
                let (arg, val) =
                    fine.iter()
                        .map(|&r| (r, eval(r)))
                        .fold((center, 0.0), |acc, (r, v)| if v > acc.1 { (r, v) } else { acc });
                peaks.push(val);
                let step = (right - left) / count as f64;
                center = arg;
                left = (arg - step).max(left);
                right = (arg + step).min(right);
            }
            radius = center;
        }
        let grows = peaks
            .windows(2)
            .all(|w| !w[1].is_finite() || w[1] > GROWTH_FACTOR * w[0]);
        if grows {
            singularities.push(SingularPoint {
                radius,
                peak_values: peaks,
            });
        }
    }

    let last_above = values.iter().rposition(|&v| v > blowup_threshold);
    let bounding_radius = last_above.map_or(0.0, |k| grid[(k + 1).min(grid.len() - 1)]);
    let sup_outside = grid
        .iter()
        .zip(&values)
        .filter(|(&r, _)| r >= bounding_radius)
        .map(|(_, &v)| v)
        .fold(0.0, f64::max);

    let value_at_outer = eval(r_outer);
    let reference_value = eval(1.0);
    let decade_start = r_outer / 10.0;
    let tail: Vec<f64> = grid
        .iter()
        .zip(&values)
        .filter(|(&r, _)| r >= decade_start)
        .map(|(_, &v)| v)
        .collect();
    let last_decade_decreasing = tail.len() >= 2 && tail.windows(2).all(|w| w[1] < w[0]);
    let decay_verified = value_at_outer <= options.decay_rel * reference_value && last_decade_decreasing;

    Ok(ScanReport {
        r_outer,
        blowup_threshold,
        value_at_outer,
        reference_value,
        last_decade_decreasing,
        decay_verified,
        singularities,
        bounding_radius,
        sup_outside,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identities::{FnField, RadialField};
    use crate::quadrature::QuadratureSpec;
    use crate::solutions::{lieb_solution, singular_solution};

    #[test]
    fn weight_branches() {
        let g = Domain1D::interval(0.0, 2.0).unwrap();
        assert_eq!(weight(-1.0, &[0.3], &g).unwrap(), 1.0);
        assert_eq!(weight(0.0, &[1.0], &g).unwrap(), 1.0);
        assert_eq!(weight(2.0, &[0.5], &g).unwrap(), 0.25);
        assert!(weight(1.0, &[2.0], &g).is_err());
        let ball = Domain1D::ball(3, 1.0).unwrap();
        assert!((weight(1.0, &[0.3, 0.0, 0.4], &ball).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn constant_has_unit_norm() {
        let g = Domain1D::interval(0.0, 1.0).unwrap();
        let one = FnField::new(1, |_: &[f64]| 1.0);
        let res = weighted_norm(&one, 0, 0.5, &g, &GridSchedule::default()).unwrap();
        assert_eq!(res.total, Some(1.0));
    }

    #[test]
    fn inverse_distance_is_unbounded() {
        let g = Domain1D::interval(0.0, 1.0).unwrap();
        let u = FnField::new(1, |x: &[f64]| 1.0 / x[0].min(1.0 - x[0]));
        let res = weighted_norm(&u, 0, 0.5, &g, &GridSchedule::default()).unwrap();
        assert!(res.unbounded);
        assert_eq!(res.total, None);
    }

    #[test]
    fn norm_dichotomy_for_the_two_solutions() {
        let params = Params::new(1, 0.5).unwrap();
        let g = Domain1D::ball(1, 1.0).unwrap();
        let fl = RadialField::new(lieb_solution(&params, &QuadratureSpec::default()).unwrap(), 1);
        let res = weighted_norm(&fl, 2, 0.5, &g, &GridSchedule::default()).unwrap();
        assert!(res.total.is_some_and(f64::is_finite), "{res:?}");
        let fc = RadialField::new(singular_solution(&params), 1);
        let res = weighted_norm(&fc, 2, 0.5, &g, &GridSchedule::default().with_focus(vec![0.0])).unwrap();
        assert!(res.unbounded);
    }

    #[test]
    fn norm_is_absolutely_homogeneous() {
        let g = Domain1D::interval(-1.0, 1.0).unwrap();
        let u = FnField::new(1, |x: &[f64]| (3.0 * x[0]).sin() + x[0] * x[0]);
        let v = FnField::new(1, |x: &[f64]| -2.5 * ((3.0 * x[0]).sin() + x[0] * x[0]));
        let s = GridSchedule::default();
        let a = weighted_norm(&u, 2, 0.2, &g, &s).unwrap().total.unwrap();
        let b = weighted_norm(&v, 2, 0.2, &g, &s).unwrap().total.unwrap();
        assert!((b - 2.5 * a).abs() < 1e-6 * b);
    }

    #[test]
    fn kernel_growth_constants_are_pochhammer() {
        let params = Params::new(1, 0.5).unwrap();
        let rep = kernel_growth_check(&params, 4, 50).unwrap();
        for o in &rep.orders {
            assert!(o.max_rel_deviation < 1e-10, "{o:?}");
        }
        assert!((rep.orders[1].analytic_coefficient - 0.5).abs() < 1e-15);
        assert!((rep.orders[3].analytic_coefficient - 0.5 * 1.5 * 2.5).abs() < 1e-15);
        assert_eq!(rep.u_derivative_max, 0.0);
        assert_eq!(rep.translation_derivative_max, 0.0);
    }

    #[test]
    fn translation_difference_vanishes() {
        let params = Params::new(1, 0.5).unwrap();
        let v = translation_annihilation_check(&params, &[(vec![1.0], vec![0.3])], 1e-4).unwrap();
        assert!(v <= 1e-8);
        // dyadic data: the shifted differences are exact, so the stencil cancels bitwise
        let v = translation_annihilation_check(&params, &[(vec![1.0], vec![0.25])], 2f64.powi(-10)).unwrap();
        assert_eq!(v, 0.0);
        let params = Params::new(3, 2.5).unwrap();
        let v = translation_annihilation_check(&params, &[(vec![0.2, -0.4, 0.1], vec![0.9, 0.3, -0.5])], 1e-4).unwrap();
        assert!(v <= 1e-8);
    }

    #[test]
    fn scan_finds_origin_singularity_only_for_singular_solution() {
        let params = Params::new(1, 0.5).unwrap();
        let fc = singular_solution(&params);
        let threshold = 100.0 * fc.value(1.0);
        let rep = decay_singularity_scan(&|r| fc.value(r), 1e6, threshold, &ScanOptions::default()).unwrap();
        assert!(rep.decay_verified);
        assert_eq!(rep.singularities.len(), 1);
        assert_eq!(rep.singularities[0].radius, 0.0);
        assert!(rep.bounding_radius < 1.0);

        let fl = lieb_solution(&params, &QuadratureSpec::default()).unwrap();
        let rep =
            decay_singularity_scan(&|r| fl.value(r), 1e6, 100.0 * fl.value(1.0), &ScanOptions::default()).unwrap();
        assert!(rep.decay_verified);
        assert!(rep.singularities.is_empty());
    }

    #[test]
    fn scan_flags_constant_and_interior_blowup() {
        let rep = decay_singularity_scan(&|_| 1.0, 1e3, 10.0, &ScanOptions::default()).unwrap();
        assert!(!rep.decay_verified);
        let spike = |r: f64| r * (r - 0.7).abs().powf(-0.5) / (1.0 + r.powi(4));
        let rep = decay_singularity_scan(&spike, 1e3, 2.0, &ScanOptions::default()).unwrap();
        assert_eq!(rep.singularities.len(), 1);
        assert!((rep.singularities[0].radius - 0.7).abs() < 1e-2);
        assert!(rep.decay_verified);
    }

    #[test]
    fn smooth_peak_is_not_singular() {
        let bump = |r: f64| 50.0 * (-(r - 2.0) * (r - 2.0)).exp() + (1.0 + r * r).recip();
        let rep = decay_singularity_scan(&bump, 1e3, 10.0, &ScanOptions::default()).unwrap();
        assert!(rep.singularities.is_empty(), "{rep:?}");
    }
}
