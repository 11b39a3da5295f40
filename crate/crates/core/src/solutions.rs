//! The two exhibited solutions of Tf = f^{p−1} and a residual verifier.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::quadrature::QuadratureSpec;
use crate::radial::{riesz_potential_radial, ProfileKind, RadialProfile};
use crate::specfun::{lieb_constant_c, lieb_constant_l, Params};
use crate::verdict::{classify, Verdict};

/// f_C(x) = C(n,λ)|x|^{−(n−λ/2)}, singular at the origin.
pub fn singular_solution(params: &Params) -> RadialProfile {
    RadialProfile::power_singular(lieb_constant_c(params), params.solution_exponent())
        .expect("the composition constant is positive and finite")
}

/// f_L(x) = L(n,λ)(1+|x|²)^{−(n−λ/2)}, bounded everywhere.
pub fn lieb_solution(params: &Params, quad: &QuadratureSpec) -> Result<RadialProfile> {
    RadialProfile::lieb(lieb_constant_l(params, quad)?, params.solution_exponent())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub params: Params,
    pub sample_radii: Vec<f64>,
    /// (Tf)(r) at each sample.
    pub lhs_values: Vec<f64>,
    /// f(r)^{p−1} at each sample.
    pub rhs_values: Vec<f64>,
    pub err_estimates: Vec<f64>,
    pub max_rel_residual: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
}

pub fn verify_solution(
    f: &RadialProfile,
    params: &Params,
    radii: &[f64],
    tolerance: f64,
    quad: &QuadratureSpec,
) -> Result<ResidualReport> {
    if radii.is_empty() {
        return domain("at least one sample radius is required");
    }
    if !(tolerance > 0.0) {
        return domain("tolerance must be positive");
    }
    for &r in radii {
        if !(r >= 0.0 && r.is_finite()) {
            return domain(format!("sample radius {r} is not a finite non-negative number"));
        }
        if r == 0.0 && f.kind() == ProfileKind::PowerSingular {
            return domain("a power-singular profile cannot be sampled at the origin");
        }
    }
    let mut lhs_values = Vec::with_capacity(radii.len());
    let mut rhs_values = Vec::with_capacity(radii.len());
    let mut err_estimates = Vec::with_capacity(radii.len());
    let mut max_rel_residual: f64 = 0.0;
    let mut max_rel_err: f64 = 0.0;
    for &r in radii {
        let lhs = riesz_potential_radial(f, params, r, quad)?;
        let rhs = f.value(r).powf(params.pm1());
        let residual = (lhs.value - rhs).abs() / rhs.abs();
        max_rel_residual = max_rel_residual.max(residual);
        max_rel_err = max_rel_err.max(lhs.err_estimate / rhs.abs());
        lhs_values.push(lhs.value);
        rhs_values.push(rhs);
        err_estimates.push(lhs.err_estimate);
    }
    Ok(ResidualReport {
        params: *params,
        sample_radii: radii.to_vec(),
        lhs_values,
        rhs_values,
        err_estimates,
        max_rel_residual,
        tolerance,
        verdict: classify(max_rel_residual, tolerance, max_rel_err),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn singular_solution_shape() {
        let params = Params::new(4, 2.0).unwrap();
        let f = singular_solution(&params);
        assert!(((f.amplitude() - 1.0 / (8.0 * PI.powi(3))) * 8.0 * PI.powi(3)).abs() < 1e-12);
        assert!(((f.value(2.0) / f.value(1.0)) - 0.125).abs() < 1e-15);
    }

    #[test]
    fn singular_solution_verified_in_one_dimension() {
        let params = Params::new(1, 0.5).unwrap();
        let f = singular_solution(&params);
        let rep = verify_solution(&f, &params, &[0.5, 1.0, 2.0], 1e-6, &QuadratureSpec::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::Verified, "{rep:?}");
    }

    #[test]
    fn wrong_amplitude_is_refuted() {
        let params = Params::new(1, 0.5).unwrap();
        let f = singular_solution(&params).scaled(1.1).unwrap();
        let rep = verify_solution(&f, &params, &[0.5, 1.0, 2.0], 1e-6, &QuadratureSpec::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::Refuted);
        let want = (1.1 - 1.1f64.powf(params.pm1())).abs() / 1.1f64.powf(params.pm1());
        assert!((rep.max_rel_residual - want).abs() < 1e-8);
    }

    #[test]
    fn lieb_solution_verified() {
        let quad = QuadratureSpec::default();
        let params = Params::new(1, 0.5).unwrap();
        let f = lieb_solution(&params, &quad).unwrap();
        let rep = verify_solution(&f, &params, &[0.0, 0.5, 1.0, 2.0, 5.0], 1e-6, &quad).unwrap();
        assert_eq!(rep.verdict, Verdict::Verified, "{rep:?}");
        let params = Params::new(3, 1.0).unwrap();
        let f = lieb_solution(&params, &quad).unwrap();
        let rep = verify_solution(&f, &params, &[0.0, 1.0, 3.0], 1e-5, &quad).unwrap();
        assert_eq!(rep.verdict, Verdict::Verified, "{rep:?}");
    }

    #[test]
    fn origin_rejected_for_singular_profile() {
        let params = Params::new(1, 0.5).unwrap();
        let f = singular_solution(&params);
        assert!(verify_solution(&f, &params, &[0.0], 1e-6, &QuadratureSpec::default()).is_err());
    }
}
