use std::f64::consts::{E, PI};

use proptest::prelude::*;

use lieb_core::quadrature::{integrate, integrate_anchored, Abscissa, QuadratureSpec};
use lieb_core::specfun::log_gamma;

struct Case {
    name: &'static str,
    f: fn(Abscissa) -> f64,
    a: f64,
    b: f64,
    exact: f64,
    splits: &'static [f64],
}

fn gamma(x: f64) -> f64 {
    log_gamma(x).unwrap().exp()
}

fn corpus() -> Vec<Case> {
    let inf = f64::INFINITY;
    vec![
        Case {
            name: "x^2",
            f: |node| {
                let x = node.x;
                x * x
            },
            a: 0.0,
            b: 1.0,
            exact: 1.0 / 3.0,
            splits: &[],
        },
        Case {
            name: "sin",
            f: |node| node.x.sin(),
            a: 0.0,
            b: PI,
            exact: 2.0,
            splits: &[],
        },
        Case {
            name: "exp",
            f: |node| node.x.exp(),
            a: 0.0,
            b: 1.0,
            exact: E - 1.0,
            splits: &[],
        },
        Case {
            name: "1/x",
            f: |node| {
                let x = node.x;
                1.0 / x
            },
            a: 1.0,
            b: E,
            exact: 1.0,
            splits: &[],
        },
        Case {
            name: "x^-1/2",
            f: |node| {
                let x = node.x;
                x.powf(-0.5)
            },
            a: 0.0,
            b: 1.0,
            exact: 2.0,
            splits: &[],
        },
        Case {
            name: "x^-0.9",
            f: |node| {
                let x = node.x;
                x.powf(-0.9)
            },
            a: 0.0,
            b: 1.0,
            exact: 10.0,
            splits: &[],
        },
        Case {
            name: "ln x",
            f: |node| node.x.ln(),
            a: 0.0,
            b: 1.0,
            exact: -1.0,
            splits: &[],
        },
        Case {
            name: "x^-1/2 ln x",
            f: |node| {
                let x = node.x;
                x.ln() / x.sqrt()
            },
            a: 0.0,
            b: 1.0,
            exact: -4.0,
            splits: &[],
        },
        Case {
            name: "1/(1+x^2)",
            f: |node| {
                let x = node.x;
                1.0 / (1.0 + x * x)
            },
            a: 0.0,
            b: inf,
            exact: 0.5 * PI,
            splits: &[],
        },
        Case {
            name: "e^-x",
            f: |node| {
                let x = node.x;
                (-x).exp()
            },
            a: 0.0,
            b: inf,
            exact: 1.0,
            splits: &[],
        },
        Case {
            name: "x^-2",
            f: |node| {
                let x = node.x;
                x.powi(-2)
            },
            a: 1.0,
            b: inf,
            exact: 1.0,
            splits: &[],
        },
        Case {
            name: "x^-1.5",
            f: |node| {
                let x = node.x;
                x.powf(-1.5)
            },
            a: 1.0,
            b: inf,
            exact: 2.0,
            splits: &[],
        },
        Case {
            name: "gaussian",
            f: |node| {
                let x = node.x;
                (-x * x).exp()
            },
            a: 0.0,
            b: inf,
            exact: 0.5 * PI.sqrt(),
            splits: &[],
        },
        Case {
            name: "x^-1/2 e^-x",
            f: |node| {
                let x = node.x;
                (-x).exp() / x.sqrt()
            },
            a: 0.0,
            b: inf,
            exact: 1.772_453_850_905_516,
            splits: &[],
        },
        Case {
            name: "beta(1/4,3/4)",
            f: |node| {
                let x = node.x;
                x.powf(-0.75) * (1.0 - x).powf(-0.25)
            },
            a: 0.0,
            b: 1.0,
            exact: PI * 2f64.sqrt(),
            splits: &[],
        },
        Case {
            name: "|x-1/3|^-1/2",
            f: |node| node.distance_to(1.0 / 3.0).powf(-0.5),
            a: 0.0,
            b: 1.0,
            exact: 2.0 * ((1.0f64 / 3.0).sqrt() + (2.0f64 / 3.0).sqrt()),
            splits: &[1.0 / 3.0],
        },
        Case {
            name: "|x-1/2|^-0.75",
            f: |node| node.distance_to(0.5).powf(-0.75),
            a: 0.0,
            b: 1.0,
            exact: 8.0 * 0.5f64.powf(0.25),
            splits: &[0.5],
        },
        Case {
            name: "x^-1/2 (1+x)^-1",
            f: |node| {
                let x = node.x;
                1.0 / (x.sqrt() * (1.0 + x))
            },
            a: 0.0,
            b: inf,
            exact: PI,
            splits: &[],
        },
        Case {
            name: "x^-1/4 (1+x^2)^-1",
            f: |node| {
                let x = node.x;
                x.powf(-0.25) / (1.0 + x * x)
            },
            a: 0.0,
            b: inf,
            exact: PI / (2.0 * (3.0 * PI / 8.0).sin()),
            splits: &[],
        },
        Case {
            name: "(1+x^2)^-3/4",
            f: |node| {
                let x = node.x;
                (1.0 + x * x).powf(-0.75)
            },
            a: 0.0,
            b: inf,
            exact: 0.5 * PI.sqrt() * gamma(0.25) / gamma(0.75),
            splits: &[],
        },
        Case {
            name: "cos^2",
            f: |node| {
                let x = node.x;
                x.cos().powi(2)
            },
            a: 0.0,
            b: 2.0 * PI,
            exact: PI,
            splits: &[],
        },
        Case {
            name: "sqrt(1-x^2)",
            f: |node| {
                let x = node.x;
                (1.0 - x * x).max(0.0).sqrt()
            },
            a: -1.0,
            b: 1.0,
            exact: 0.5 * PI,
            splits: &[],
        },
        Case {
            name: "x^7",
            f: |node| {
                let x = node.x;
                x.powi(7)
            },
            a: -1.0,
            b: 2.0,
            exact: (256.0 - 1.0) / 8.0,
            splits: &[],
        },
        Case {
            name: "x^-1/3 on both sides",
            f: |node| node.distance_to(0.0).powf(-1.0 / 3.0),
            a: -1.0,
            b: 8.0,
            exact: 1.5 * (1.0 + 4.0),
            splits: &[0.0],
        },
    ]
}

#[test]
fn closed_form_corpus() {
    let cases = corpus();
    assert!(cases.len() >= 20);
    for case in cases {
        let spec = QuadratureSpec::default().with_split_points(case.splits.to_vec());
        let est = integrate_anchored(case.f, case.a, case.b, &spec).unwrap_or_else(|e| panic!("{}: {e}", case.name));
        let gap = (est.value - case.exact).abs() / case.exact.abs();
        assert!(
            gap < 1e-9,
            "{}: {} vs {} (gap {gap:.2e})",
            case.name,
            est.value,
            case.exact
        );
        assert!(
            (est.value - case.exact).abs()
                <= 10.0 * est.err_estimate.max(1e-15 * case.exact.abs()) + 1e-9 * case.exact.abs(),
            "{}: error estimate {:.2e} does not cover the true error",
            case.name,
            est.err_estimate
        );
    }
}

fn poly(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &k| acc * x + k)
}

proptest! {
    #[test]
    fn linearity(a in -3.0f64..3.0, b in -3.0f64..3.0, shift in 0.1f64..2.0) {
        let spec = QuadratureSpec::default().with_rel_tol(1e-12).with_abs_tol(1e-12);
        let f = |x: f64| x.powf(-0.5) * (x + shift).cos();
        let g = |x: f64| (-x * shift).exp();
        let combined = integrate(|x| a * f(x) + b * g(x), 0.0, 2.0, &spec).unwrap().value;
        let separate = a * integrate(f, 0.0, 2.0, &spec).unwrap().value + b * integrate(g, 0.0, 2.0, &spec).unwrap().value;
        prop_assert!((combined - separate).abs() <= 1e-10 * (1.0 + separate.abs()));
    }

    #[test]
    fn splitting_the_range(c in proptest::collection::vec(-2.0f64..2.0, 1..6), split in 0.05f64..0.95) {
        let spec = QuadratureSpec::default().with_rel_tol(1e-12);
        let f = |x: f64| poly(&c, x) * x.powf(-0.3);
        let whole = integrate(f, 0.0, 1.0, &spec).unwrap().value;
        let parts = integrate(f, 0.0, split, &spec).unwrap().value + integrate(f, split, 1.0, &spec).unwrap().value;
        let scale: f64 = c.iter().map(|v| v.abs()).sum::<f64>() + 1.0;
        prop_assert!((whole - parts).abs() <= 1e-11 * scale);
    }

    #[test]
    fn monomials_are_exact(k in 0u32..12, b in 0.1f64..3.0) {
        let est = integrate(|x| x.powi(k as i32), 0.0, b, &QuadratureSpec::default()).unwrap();
        let exact = b.powi(k as i32 + 1) / f64::from(k + 1);
        prop_assert!((est.value - exact).abs() <= 1e-13 * exact.max(1.0));
    }
}
