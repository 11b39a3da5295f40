use std::f64::consts::PI;

use proptest::prelude::*;

use lieb_core::quadrature::{integrate, QuadratureSpec};
use lieb_core::radial::{riesz_potential_radial, RadialProfile};
use lieb_core::solutions::{lieb_solution, singular_solution, verify_solution};
use lieb_core::specfun::{unit_sphere_area, Params};
use lieb_core::Verdict;

/// ⟨Tf, g⟩ over ℝⁿ for radial f, g.
fn pairing(f: &RadialProfile, g: &RadialProfile, params: &Params) -> f64 {
    let inner = QuadratureSpec::default().with_rel_tol(1e-11);
    let outer = QuadratureSpec::default()
        .with_rel_tol(1e-10)
        .with_split_points(vec![1.0]);
    let n = params.n() as i32;
    let est = integrate(
        |r| riesz_potential_radial(f, params, r, &inner).unwrap().value * g.value(r) * r.powi(n - 1),
        0.0,
        f64::INFINITY,
        &outer,
    )
    .unwrap();
    unit_sphere_area(params.n()) * est.value
}

#[test]
fn riesz_operator_is_symmetric() {
    for (n, lambda, a, b) in [(1, 0.5, 1.0, 1.5), (3, 1.0, 2.0, 2.5), (3, 2.0, 2.0, 3.0)] {
        let params = Params::new(n, lambda).unwrap();
        let f = RadialProfile::lieb(1.0, a).unwrap();
        let g = RadialProfile::lieb(0.7, b).unwrap();
        let tf_g = pairing(&f, &g, &params);
        let f_tg = pairing(&g, &f, &params);
        let gap = (tf_g - f_tg).abs() / tf_g.abs();
        assert!(gap < 1e-7, "(n={n}, λ={lambda}): {tf_g} vs {f_tg}");
    }
}

#[test]
fn gaussian_potential_at_origin() {
    // T applied to e^{-r²} at 0 in three dimensions: 4π·∫ r^{2−λ} e^{−r²} dr = 2π·Γ((3−λ)/2)
    let params = Params::new(3, 1.0).unwrap();
    let radii: Vec<f64> = (0..=400).map(|i| 8.0 * f64::from(i) / 400.0).collect();
    let values: Vec<f64> = radii.iter().map(|r| (-r * r).exp()).collect();
    let f = RadialProfile::grid(radii, values, 40.0).unwrap();
    let got = riesz_potential_radial(&f, &params, 0.0, &QuadratureSpec::default())
        .unwrap()
        .value;
    assert!((got - 2.0 * PI).abs() < 1e-4, "{got}");
}

#[test]
fn wrong_amplitude_is_refuted() {
    let params = Params::new(1, 0.5).unwrap();
    let quad = QuadratureSpec::default();
    let radii = [0.5, 1.0, 2.0];
    let f = singular_solution(&params).scaled(1.01).unwrap();
    let rep = verify_solution(&f, &params, &radii, 1e-6, &quad).unwrap();
    assert_eq!(rep.verdict, Verdict::Refuted);
    let f = lieb_solution(&params, &quad).unwrap().scaled(0.99).unwrap();
    let rep = verify_solution(&f, &params, &radii, 1e-6, &quad).unwrap();
    assert_eq!(rep.verdict, Verdict::Refuted);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn verdicts_are_monotone_in_tolerance(scale in 0.98f64..1.02, exponent in -12.0f64..-1.0) {
        let params = Params::new(3, 1.0).unwrap();
        let quad = QuadratureSpec::default();
        let f = lieb_solution(&params, &quad).unwrap().scaled(scale).unwrap();
        let radii = [0.0, 1.0, 3.0];
        let tight = 10f64.powf(exponent);
        let loose = 10.0 * tight;
        let a = verify_solution(&f, &params, &radii, tight, &quad).unwrap();
        let b = verify_solution(&f, &params, &radii, loose, &quad).unwrap();
        prop_assert_eq!(a.max_rel_residual, b.max_rel_residual);
        if a.verdict == Verdict::Verified {
            prop_assert_eq!(b.verdict, Verdict::Verified);
        }
        if b.verdict == Verdict::Refuted {
            prop_assert_eq!(a.verdict, Verdict::Refuted);
        }
    }
}
