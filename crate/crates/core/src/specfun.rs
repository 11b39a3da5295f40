//! Gamma-function machinery and the closed-form constants of the Riesz
//! convolution equation.
//!
//! Every constant is assembled in the log domain and exponentiated once, so
//! large dimensions do not overflow the intermediate Gamma values.

#![allow(clippy::excessive_precision)]

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::quadrature::{integrate, Estimate, QuadratureSpec};

/// Problem instance `(n, λ)` together with the conjugate exponent
/// `p = 2n/(2n−λ)` and `p−1 = λ/(2n−λ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    n: u32,
    lambda: f64,
    p: f64,
    pm1: f64,
}

impl Params {
    pub fn new(n: u32, lambda: f64) -> Result<Self> {
        if n == 0 {
            return domain("dimension n must be a positive integer");
        }
        let nf = f64::from(n);
        if !(lambda.is_finite() && lambda > 0.0 && lambda < nf) {
            return domain(format!(
                "kernel exponent must satisfy 0 < lambda < n = {n}, got {lambda}"
            ));
        }
        let denom = 2.0 * nf - lambda;
        Ok(Self {
            n,
            lambda,
            p: 2.0 * nf / denom,
            pm1: lambda / denom,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn dim(&self) -> f64 {
        f64::from(self.n)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// The power `p − 1` on the right-hand side of the equation.
    pub fn pm1(&self) -> f64 {
        self.pm1
    }

    /// `1/(p−1) = (2n−λ)/λ`, the power that inverts the right-hand side.
    pub fn inverse_power(&self) -> f64 {
        (2.0 * self.dim() - self.lambda) / self.lambda
    }

    /// Decay exponent `n − λ/2` shared by both exhibited solutions.
    pub fn solution_exponent(&self) -> f64 {
        self.dim() - 0.5 * self.lambda
    }

    /// Exponent `−(2n−λ)/(2(n−λ))` turning a composition constant into an amplitude.
    pub fn amplitude_exponent(&self) -> f64 {
        let n = self.dim();
        -(2.0 * n - self.lambda) / (2.0 * (n - self.lambda))
    }
}

const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_6;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_741_8;

/// ζ(k) − 1 for k = 2, 3, …, 33.
#[allow(clippy::excessive_precision)]
const ZETA_MINUS_ONE: [f64; 32] = [
    0.644934066848226436472,
    0.2020569031595942854,
    0.082323233711138191516,
    0.0369277551433699263314,
    0.0173430619844491397145,
    0.0083492773819228268398,
    0.00407735619794433937869,
    0.00200839282608221441785,
    0.000994575127818085337146,
    0.000494188604119464558702,
    0.000246086553308048298638,
    0.000122713347578489146752,
    0.0000612481350587048292585,
    0.0000305882363070204935517,
    0.0000152822594086518717326,
    0.0000076371976378997622736,
    0.00000381729326499983985646,
    0.00000190821271655393892566,
    9.53962033872796113152e-7,
    4.76932986787806463117e-7,
    2.38450502727732990004e-7,
    1.19219925965311073068e-7,
    5.96081890512594796124e-8,
    2.98035035146522801861e-8,
    1.49015548283650412347e-8,
    7.45071178983542949198e-9,
    3.72533402478845705482e-9,
    1.8626597235130490064e-9,
    9.31327432419668182872e-10,
    4.65662906503378407299e-10,
    2.328311833676505492e-10,
    1.16415501727005197759e-10,
];

/// Stirling series coefficients B_{2k} / (2k(2k−1)).
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// ln Γ(2 + z) for |z| ≤ 1/2 from the Taylor series
/// (1−γ)z + Σ (−1)^k (ζ(k)−1) z^k / k.
fn ln_gamma_2p(z: f64) -> f64 {
    let mut sum = 0.0;
    let mut zk = z;
    for (i, c) in ZETA_MINUS_ONE.iter().enumerate() {
        let k = i + 2;
        zk *= z;
        let term = c * zk / k as f64;
        sum += if k % 2 == 0 { term } else { -term };
    }
    (1.0 - EULER_GAMMA) * z + sum
}

fn ln_gamma_stirling(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut pow = inv;
    for c in STIRLING {
        series += c * pow;
        pow *= inv2;
    }
    (x - 0.5) * x.ln() - x + HALF_LN_2PI + series
}

/// ln Γ(x) for x > 0 without argument checking.
pub(crate) fn lgamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x >= 10.0 {
        ln_gamma_stirling(x)
    } else if x > 2.5 {
        // ln Γ(x) = ln Γ(x − k) + ln((x−1)…(x−k)) with x − k in (1.5, 2.5]
        let mut y = x;
        let mut prod = 1.0;
        while y > 2.5 {
            y -= 1.0;
            prod *= y;
        }
        ln_gamma_2p(y - 2.0) + prod.ln()
    } else if x >= 1.5 {
        ln_gamma_2p(x - 2.0)
    } else if x >= 0.5 {
        // Γ(x) = Γ(x + 1)/x, with ln x taken through ln_1p near 1
        ln_gamma_2p(x - 1.0) - (x - 1.0).ln_1p()
    } else {
        lgamma(x + 1.0) - x.ln()
    }
}

/// Natural logarithm of the Gamma function for positive arguments.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("log_gamma requires a finite positive argument, got {x}"));
    }
    Ok(lgamma(x))
}

/// ln B(a, b) = ln Γ(a) + ln Γ(b) − ln Γ(a + b).
pub fn log_beta(a: f64, b: f64) -> Result<f64> {
    Ok(log_gamma(a)? + log_gamma(b)? - log_gamma(a + b)?)
}

/// Surface area |S^{n−1}| = 2π^{n/2}/Γ(n/2) of the unit sphere in ℝⁿ.
pub fn unit_sphere_area(n: u32) -> f64 {
    let half = 0.5 * f64::from(n);
    (2.0f64.ln() + half * PI.ln() - lgamma(half)).exp()
}

fn check_open_interval(name: &str, v: f64, n: u32) -> Result<()> {
    if v.is_finite() && v > 0.0 && v < f64::from(n) {
        Ok(())
    } else {
        domain(format!("{name} must lie in (0, {n}), got {v}"))
    }
}

/// Coefficient `c` with FT(|y|^{−ν}) = c·|x|^{ν−n}, using the transform
/// ∫ g(y) exp(−2πi x·y) dy.
pub fn ft_riesz_coefficient(n: u32, nu: f64) -> Result<f64> {
    if n == 0 {
        return domain("dimension must be positive");
    }
    check_open_interval("nu", nu, n)?;
    let nf = f64::from(n);
    let log_c = (nu - 0.5 * nf) * PI.ln() + lgamma(0.5 * (nf - nu)) - lgamma(0.5 * nu);
    Ok(log_c.exp())
}

/// ln k(n, λ, μ) for the composition constant, see [`riesz_power_constant`].
fn log_riesz_power_constant(n: u32, lambda: f64, mu: f64) -> Result<f64> {
    if n == 0 {
        return domain("dimension must be positive");
    }
    check_open_interval("lambda", lambda, n)?;
    check_open_interval("mu", mu, n)?;
    let nf = f64::from(n);
    if lambda + mu <= nf {
        return domain(format!(
            "lambda + mu = {} must exceed n = {n} for the composition integral to converge at infinity",
            lambda + mu
        ));
    }
    Ok(
        0.5 * nf * PI.ln() + lgamma(0.5 * (nf - lambda)) + lgamma(0.5 * (nf - mu)) + lgamma(0.5 * (lambda + mu - nf))
            - lgamma(0.5 * lambda)
            - lgamma(0.5 * mu)
            - lgamma(nf - 0.5 * (lambda + mu)),
    )
}

/// Constant `k` with ∫|x−y|^{−λ}|y|^{−μ}dy = k·|x|^{n−λ−μ}.
pub fn riesz_power_constant(n: u32, lambda: f64, mu: f64) -> Result<f64> {
    Ok(log_riesz_power_constant(n, lambda, mu)?.exp())
}

/// Amplitude C(n, λ) of the singular power solution C|x|^{−(n−λ/2)}.
pub fn lieb_constant_c(params: &Params) -> f64 {
    let log_k = log_riesz_power_constant(params.n(), params.lambda(), params.solution_exponent())
        .expect("valid params always give a convergent composition constant");
    (params.amplitude_exponent() * log_k).exp()
}

/// I(0) = ∫_{ℝⁿ} |y|^{−λ}(1+|y|²)^{−(n−λ/2)} dy by radial quadrature.
pub fn lieb_potential_at_origin(params: &Params, quad: &QuadratureSpec) -> Result<Estimate> {
    let n = params.dim();
    let lambda = params.lambda();
    let e = params.solution_exponent();
    let radial_power = n - 1.0 - lambda;
    let spec = quad
        .clone()
        .with_split_points(Vec::new())
        .with_tail_exponent_hint(radial_power - 2.0 * e);
    let est = integrate(
        |r| r.powf(radial_power) * (1.0 + r * r).powf(-e),
        0.0,
        f64::INFINITY,
        &spec,
    )?;
    let area = unit_sphere_area(params.n());
    Ok(est.scaled(area))
}

/// Amplitude L(n, λ) of the bounded solution L(1+|x|²)^{−(n−λ/2)}, fixed by
/// matching the equation at the origin: L·I(0) = L^{p−1}.
pub fn lieb_constant_l(params: &Params, quad: &QuadratureSpec) -> Result<f64> {
    let i0 = lieb_potential_at_origin(params, quad)?;
    Ok((params.amplitude_exponent() * i0.value.ln()).exp())
}
