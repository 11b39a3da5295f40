//! The Riesz operator (Tf)(x) = ∫_{ℝⁿ} |x−y|^{−λ} f(y) dy on radial inputs.
//!
//! For radial `f` the potential is radial as well and reduces to
//! (Tf)(r) = ∫₀^∞ f(s) s^{n−1} K(r, s) ds with the angular kernel
//! K(r, s) = ∫_{S^{n−1}} |r e₁ − s ω|^{−λ} dσ(ω).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::interp::MonotoneCubic;
use crate::quadrature::{
    convergence_screen, integrate, integrate_anchored, Abscissa, Estimate, QuadratureSpec, Screen, SingularityBudget,
};
use crate::specfun::{unit_sphere_area, Params};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProfileKind {
    PowerSingular,
    Lieb,
    GridSampled,
}

/// Sampled radial data with power-law extensions at both ends.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridShape {
    interp: MonotoneCubic,
    /// Values decay like r^{−tail_decay} beyond the last node.
    tail_decay: f64,
    /// Values behave like r^{inner_power} inside the first node.
    inner_power: f64,
}

impl GridShape {
    fn new(radii: Vec<f64>, values: Vec<f64>, tail_decay: f64) -> Result<Self> {
        if radii.first().is_some_and(|&r| r < 0.0) {
            return domain("grid radii must be non-negative");
        }
        if values.iter().any(|&v| !(v > 0.0)) {
            return domain("grid profile values must be positive");
        }
        if !tail_decay.is_finite() {
            return domain("tail decay exponent must be finite");
        }
        let interp = MonotoneCubic::new(radii, values)?;
        let (r, v) = (interp.nodes(), interp.values());
        let inner_power = if r[0] > 0.0 {
            (v[1] / v[0]).ln() / (r[1] / r[0]).ln()
        } else {
            0.0
        };
        Ok(Self {
            interp,
            tail_decay,
            inner_power,
        })
    }

    fn value(&self, r: f64) -> f64 {
        let (first, last) = (self.interp.first(), self.interp.last());
        if r < first {
            self.interp.values()[0] * (r / first).powf(self.inner_power)
        } else if r > last {
            self.interp.values()[self.interp.values().len() - 1] * (r / last).powf(-self.tail_decay)
        } else {
            self.interp.eval(r)
        }
    }

    pub fn radii(&self) -> &[f64] {
        self.interp.nodes()
    }

    pub fn values(&self) -> &[f64] {
        self.interp.values()
    }

    pub fn tail_decay(&self) -> f64 {
        self.tail_decay
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ProfileShape {
    /// r^{−exponent}
    PowerSingular {
        exponent: f64,
    },
    /// (1 + r²)^{−exponent}
    Lieb {
        exponent: f64,
    },
    GridSampled(GridShape),
}

/// A positive radially symmetric function `amplitude · shape(|x|)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile {
    amplitude: f64,
    shape: ProfileShape,
}

impl RadialProfile {
    pub fn power_singular(amplitude: f64, exponent: f64) -> Result<Self> {
        check_amplitude(amplitude)?;
        if !exponent.is_finite() {
            return domain("power exponent must be finite");
        }
        Ok(Self {
            amplitude,
            shape: ProfileShape::PowerSingular { exponent },
        })
    }

    pub fn lieb(amplitude: f64, exponent: f64) -> Result<Self> {
        check_amplitude(amplitude)?;
        if !exponent.is_finite() {
            return domain("Lieb exponent must be finite");
        }
        Ok(Self {
            amplitude,
            shape: ProfileShape::Lieb { exponent },
        })
    }

    pub fn grid(radii: Vec<f64>, values: Vec<f64>, tail_decay: f64) -> Result<Self> {
        Ok(Self {
            amplitude: 1.0,
            shape: ProfileShape::GridSampled(GridShape::new(radii, values, tail_decay)?),
        })
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn shape(&self) -> &ProfileShape {
        &self.shape
    }

    pub fn kind(&self) -> ProfileKind {
        match self.shape {
            ProfileShape::PowerSingular { .. } => ProfileKind::PowerSingular,
            ProfileShape::Lieb { .. } => ProfileKind::Lieb,
            ProfileShape::GridSampled(_) => ProfileKind::GridSampled,
        }
    }

    pub fn value(&self, r: f64) -> f64 {
        let shape = match &self.shape {
            ProfileShape::PowerSingular { exponent } => r.powf(-exponent),
            ProfileShape::Lieb { exponent } => (1.0 + r * r).powf(-exponent),
            ProfileShape::GridSampled(g) => g.value(r),
        };
        self.amplitude * shape
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        check_amplitude(c)?;
        Ok(Self {
            amplitude: c * self.amplitude,
            shape: self.shape.clone(),
        })
    }

    /// The profile raised pointwise to the power `q > 0`.
    pub fn powered(&self, q: f64) -> Result<Self> {
        if !(q > 0.0 && q.is_finite()) {
            return domain(format!("profile power must be positive, got {q}"));
        }
        Ok(match &self.shape {
            ProfileShape::PowerSingular { exponent } => Self {
                amplitude: self.amplitude.powf(q),
                shape: ProfileShape::PowerSingular { exponent: exponent * q },
            },
            ProfileShape::Lieb { exponent } => Self {
                amplitude: self.amplitude.powf(q),
                shape: ProfileShape::Lieb { exponent: exponent * q },
            },
            ProfileShape::GridSampled(g) => {
                let values = g.values().iter().map(|v| (self.amplitude * v).powf(q)).collect();
                Self::grid(g.radii().to_vec(), values, g.tail_decay * q)?
            }
        })
    }

    /// Exponent `e` with value ~ r^e as r → 0.
    pub fn exponent_at_origin(&self) -> f64 {
        match &self.shape {
            ProfileShape::PowerSingular { exponent } => -exponent,
            ProfileShape::Lieb { .. } => 0.0,
            ProfileShape::GridSampled(g) => g.inner_power,
        }
    }

    /// Exponent `e` with value ~ r^e as r → ∞.
    pub fn exponent_at_infinity(&self) -> f64 {
        match &self.shape {
            ProfileShape::PowerSingular { exponent } => -exponent,
            ProfileShape::Lieb { exponent } => -2.0 * exponent,
            ProfileShape::GridSampled(g) => -g.tail_decay,
        }
    }
}

fn check_amplitude(a: f64) -> Result<()> {
    if a > 0.0 && a.is_finite() {
        Ok(())
    } else {
        domain(format!("amplitude must be positive and finite, got {a}"))
    }
}

/// K(r, s) = ∫_{S^{n−1}} |r e₁ − s ω|^{−λ} dσ(ω) for r ≠ s.
pub fn angular_kernel(n: u32, lambda: f64, r: f64, s: f64) -> Result<f64> {
    check_kernel_args(n, lambda, r, s)?;
    kernel_with_gap(n, lambda, r, s, (r - s).abs())
}

/// The angular integral |S^{n−2}|∫₀^π (r²+s²−2rs cos θ)^{−λ/2} sin^{n−2}θ dθ
/// by adaptive quadrature, valid for every n ≥ 2.
pub fn angular_kernel_quadrature(n: u32, lambda: f64, r: f64, s: f64, quad: &QuadratureSpec) -> Result<f64> {
    check_kernel_args(n, lambda, r, s)?;
    if n < 2 {
        return domain("the angular integral needs n >= 2");
    }
    Ok(angular_quadrature(n, lambda, r, s, (r - s).abs(), quad)?.value)
}

fn check_kernel_args(n: u32, lambda: f64, r: f64, s: f64) -> Result<()> {
    if n == 0 || !(lambda > 0.0 && lambda < f64::from(n)) {
        return domain(format!("need 0 < lambda < n, got n = {n}, lambda = {lambda}"));
    }
    if !(r >= 0.0 && s >= 0.0 && r.is_finite() && s.is_finite()) {
        return domain("kernel radii must be finite and non-negative");
    }
    if r == s {
        return domain("the angular kernel is singular at r = s");
    }
    Ok(())
}

fn inner_spec() -> QuadratureSpec {
    QuadratureSpec::default()
        .with_rel_tol(1e-13)
        .with_abs_tol(1e-300)
        .with_max_subdivisions(4000)
}

/// Kernel evaluation with the distance |r − s| supplied exactly.
fn kernel_with_gap(n: u32, lambda: f64, r: f64, s: f64, gap: f64) -> Result<f64> {
    if r == 0.0 || s == 0.0 {
        return Ok(unit_sphere_area(n) * r.max(s).powf(-lambda));
    }
    match n {
        1 => Ok(gap.powf(-lambda) + (r + s).powf(-lambda)),
        3 => Ok(shell_kernel_3d(lambda, r, s, gap)),
        _ => Ok(angular_quadrature(n, lambda, r, s, gap, &inner_spec())?.value),
    }
}

/// Closed form in three dimensions, written through t = min/max so that
/// (r+s)^{2−λ} − |r−s|^{2−λ} keeps its precision when one radius is tiny.
fn shell_kernel_3d(lambda: f64, r: f64, s: f64, gap: f64) -> f64 {
    let m = r.max(s);
    let t = r.min(s) / m;
    let l_plus = t.ln_1p();
    let l_minus = if t < 0.5 { (-t).ln_1p() } else { (gap / m).ln() };
    let rs = r * s;
    if lambda == 2.0 {
        2.0 * PI / rs * (l_plus - l_minus)
    } else {
        let a = 2.0 - lambda;
        let diff = 2.0 * (0.5 * a * (l_plus + l_minus)).exp() * (0.5 * a * (l_plus - l_minus)).sinh();
        2.0 * PI / (a * rs) * m.powf(a) * diff
    }
}

fn angular_quadrature(n: u32, lambda: f64, r: f64, s: f64, gap: f64, quad: &QuadratureSpec) -> Result<Estimate> {
    let sin_power = f64::from(n) - 2.0;
    let gap2 = gap * gap;
    let rs4 = 4.0 * r * s;
    let integrand = |theta: f64| {
        let h = (0.5 * theta).sin();
        (gap2 + rs4 * h * h).powf(-0.5 * lambda) * theta.sin().powf(sin_power)
    };
    let spec = quad.clone().with_split_points(Vec::new()).without_tail_exponent_hint();
    let est = integrate(integrand, 0.0, PI, &spec)?;
    Ok(est.scaled(unit_sphere_area(n - 1)))
}

/// Exponent budget of s ↦ f(s) s^{n−1} K(r, s) on (0, ∞).
pub fn potential_budget(f: &RadialProfile, params: &Params, r: f64) -> SingularityBudget {
    let n = params.dim();
    let lambda = params.lambda();
    let at_zero = f.exponent_at_origin() + n - 1.0 + if r == 0.0 { -lambda } else { 0.0 };
    let mut budget = SingularityBudget::new().at(0.0, at_zero);
    if r > 0.0 {
        let kernel = if params.n() == 1 {
            -lambda
        } else {
            (n - 1.0 - lambda).min(0.0)
        };
        budget = budget.at(r, kernel);
    }
    budget.at_infinity(f.exponent_at_infinity() - lambda + n - 1.0)
}

/// (Tf)(r) for a radial profile.
pub fn riesz_potential_radial(f: &RadialProfile, params: &Params, r: f64, quad: &QuadratureSpec) -> Result<Estimate> {
    if !(r >= 0.0 && r.is_finite()) {
        return domain(format!("evaluation radius must be finite and non-negative, got {r}"));
    }
    let budget = potential_budget(f, params, r);
    if let Screen::Divergent(location) = convergence_screen(&budget) {
        return Err(Error::ScreenRejected { location });
    }
    let n = params.n();
    let radial_power = params.dim() - 1.0;
    let lambda = params.lambda();
    let tail = f.exponent_at_infinity() - lambda + radial_power;

    if r == 0.0 {
        let spec = quad.clone().with_split_points(Vec::new()).with_tail_exponent_hint(tail);
        let est = integrate(
            |s| f.value(s) * s.powf(radial_power - lambda),
            0.0,
            f64::INFINITY,
            &spec,
        )?;
        return Ok(est.scaled(unit_sphere_area(n)));
    }

    let spec = quad.clone().with_split_points(vec![r]).with_tail_exponent_hint(tail);
    let failure = std::cell::Cell::new(None);
    let est = integrate_anchored(
        |node: Abscissa| {
            let s = node.x;
            let gap = node.distance_to(r);
            match kernel_with_gap(n, lambda, r, s, gap) {
                Ok(k) => f.value(s) * s.powf(radial_power) * k,
                Err(e) => {
                    failure.set(Some(e));
                    f64::NAN
                }
            }
        },
        0.0,
        f64::INFINITY,
        &spec,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    est
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{lieb_constant_c, log_beta, riesz_power_constant};

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn tight() -> QuadratureSpec {
        QuadratureSpec::default().with_rel_tol(1e-11)
    }

    #[test]
    fn one_dimensional_kernel_is_two_point_sum() {
        let k = angular_kernel(1, 0.5, 2.0, 1.0).unwrap();
        assert!((k - (1.0 + 3f64.powf(-0.5))).abs() < 1e-15);
    }

    #[test]
    fn shell_theorem_in_three_dimensions() {
        for &(r, s) in &[(1.0, 0.3), (0.2, 5.0), (2.0, 1.999), (1e-9, 1.0)] {
            let k = angular_kernel(3, 1.0, r, s).unwrap();
            assert!(rel(k, 4.0 * PI / f64::max(r, s)) < 1e-13, "r={r} s={s} k={k}");
        }
    }

    #[test]
    fn closed_form_matches_angular_quadrature() {
        let closed = angular_kernel(3, 1.3, 1.0, 0.7).unwrap();
        let quad = angular_kernel_quadrature(3, 1.3, 1.0, 0.7, &inner_spec()).unwrap();
        assert!(rel(closed, quad) < 1e-10);
        let closed = angular_kernel(3, 2.0, 1.0, 0.7).unwrap();
        let quad = angular_kernel_quadrature(3, 2.0, 1.0, 0.7, &inner_spec()).unwrap();
        assert!(rel(closed, quad) < 1e-10);
    }

    #[test]
    fn kernel_rejects_coincident_radii() {
        assert!(angular_kernel(3, 1.0, 1.0, 1.0).is_err());
        assert!(angular_kernel(2, 2.0, 1.0, 0.5).is_err());
    }

    #[test]
    fn singular_solution_reproduces_its_power() {
        let params = Params::new(1, 0.5).unwrap();
        let c = lieb_constant_c(&params);
        let f = RadialProfile::power_singular(c, params.solution_exponent()).unwrap();
        for r in [0.5, 1.0, 2.0] {
            let t = riesz_potential_radial(&f, &params, r, &tight()).unwrap().value;
            let want = c.powf(params.pm1()) * r.powf(-0.5 * params.lambda());
            assert!(rel(t, want) < 1e-9, "r={r}: {t} vs {want}");
        }
    }

    #[test]
    fn dilation_homogeneity() {
        let params = Params::new(3, 1.4).unwrap();
        let f = RadialProfile::power_singular(1.0, params.solution_exponent()).unwrap();
        let t1 = riesz_potential_radial(&f, &params, 0.8, &tight()).unwrap().value;
        let t2 = riesz_potential_radial(&f, &params, 1.6, &tight()).unwrap().value;
        assert!(rel(t2 / t1, 2f64.powf(-0.7)) < 1e-9);
    }

    #[test]
    fn bounded_profile_at_origin_is_a_beta_integral() {
        let params = Params::new(3, 1.0).unwrap();
        let f = RadialProfile::lieb(0.3, params.solution_exponent()).unwrap();
        let t0 = riesz_potential_radial(&f, &params, 0.0, &tight()).unwrap().value;
        let (n, lambda) = (params.dim(), params.lambda());
        let want = unit_sphere_area(3) * 0.5 * log_beta(0.5 * (n - lambda), 0.5 * n).unwrap().exp() * 0.3;
        assert!(rel(t0, want) < 1e-10);
    }

    #[test]
    fn power_profiles_match_composition_constant() {
        for &(n, lambda, mu) in &[(1u32, 0.6, 0.7), (3, 1.5, 2.2), (2, 1.2, 1.3)] {
            let params = Params::new(n, lambda).unwrap();
            let f = RadialProfile::power_singular(1.0, mu).unwrap();
            let k = riesz_power_constant(n, lambda, mu).unwrap();
            for r in [0.5, 1.0, 2.0] {
                let t = riesz_potential_radial(&f, &params, r, &QuadratureSpec::default())
                    .unwrap()
                    .value;
                let want = k * r.powf(f64::from(n) - lambda - mu);
                assert!(rel(t, want) < 1e-6, "n={n} r={r}: {t} vs {want}");
            }
        }
    }

    #[test]
    fn divergent_potential_is_screened() {
        let params = Params::new(1, 0.5).unwrap();
        // too slow a decay: s^{-0.3} against |r-s|^{-0.5} is not integrable at infinity
        let f = RadialProfile::power_singular(1.0, 0.3).unwrap();
        let err = riesz_potential_radial(&f, &params, 1.0, &tight()).unwrap_err();
        assert!(matches!(err, Error::ScreenRejected { .. }));
    }

    #[test]
    fn profile_powers_and_positivity() {
        let f = RadialProfile::lieb(2.0, 1.5).unwrap();
        let g = f.powered(0.5).unwrap();
        for r in [0.0, 0.3, 4.0] {
            assert!(rel(g.value(r), f.value(r).sqrt()) < 1e-14);
        }
        let grid = RadialProfile::grid(vec![0.5, 1.0, 2.0, 4.0], vec![4.0, 2.0, 1.0, 0.5], 1.0).unwrap();
        assert!(rel(grid.value(0.25), 8.0) < 1e-12);
        assert!(rel(grid.value(8.0), 0.25) < 1e-12);
        assert!(RadialProfile::grid(vec![1.0, 2.0], vec![1.0, -1.0], 1.0).is_err());
        assert!(RadialProfile::lieb(0.0, 1.0).is_err());
    }

    #[test]
    fn grid_sampled_potential_tracks_closed_form() {
        let params = Params::new(1, 0.5).unwrap();
        let exact = RadialProfile::lieb(1.0, 1.0).unwrap();
        let radii: Vec<f64> = (0..=400).map(|i| 40.0 * f64::from(i) / 400.0).collect();
        let values = radii.iter().map(|&r| exact.value(r)).collect();
        let grid = RadialProfile::grid(radii, values, 2.0).unwrap();
        let spec = QuadratureSpec::default()
            .with_rel_tol(1e-8)
            .with_max_subdivisions(20_000);
        let a = riesz_potential_radial(&grid, &params, 1.0, &spec).unwrap().value;
        let b = riesz_potential_radial(&exact, &params, 1.0, &spec).unwrap().value;
        assert!(rel(a, b) < 1e-4, "{a} vs {b}");
    }
}
