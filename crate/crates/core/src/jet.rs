//! Truncated Taylor series arithmetic in one variable.
//!
//! A `Jet` stores normalized coefficients `c_k = g^{(k)}(t₀)/k!`, which is
//! enough to differentiate compositions of powers and polynomials exactly up
//! to rounding.

use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    coeffs: Vec<f64>,
}

impl Jet {
    pub fn constant(value: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = value;
        Self { coeffs }
    }

    /// The identity map `t ↦ t` expanded at `t₀`.
    pub fn variable(t0: f64, order: usize) -> Self {
        let mut j = Self::constant(t0, order);
        if order >= 1 {
            j.coeffs[1] = 1.0;
        }
        j
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// The k-th derivative at the expansion point.
    pub fn derivative(&self, k: usize) -> f64 {
        let mut fact = 1.0;
        for i in 2..=k {
            fact *= i as f64;
        }
        self.coeffs[k] * fact
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|v| c * v).collect(),
        }
    }

    pub fn add_constant(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.coeffs[0] += c;
        out
    }

    /// `|g|` for a jet whose value is nonzero.
    pub fn abs(&self) -> Self {
        if self.value() < 0.0 {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// `g^a` for a jet with positive value, through `g·(g^a)' = a·g'·g^a`.
    pub fn powf(&self, a: f64) -> Self {
        let u = &self.coeffs;
        let u0 = u[0];
        debug_assert!(u0 > 0.0, "powf of a jet needs a positive base");
        let mut g = vec![0.0; u.len()];
        g[0] = u0.powf(a);
        for k in 1..u.len() {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += ((a + 1.0) * j as f64 - k as f64) * u[j] * g[k - j];
            }
            g[k] = acc / (k as f64 * u0);
        }
        Self { coeffs: g }
    }
}

impl Add for &Jet {
    type Output = Jet;

    fn add(self, rhs: &Jet) -> Jet {
        Jet {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Jet {
    type Output = Jet;

    fn sub(self, rhs: &Jet) -> Jet {
        Jet {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &Jet {
    type Output = Jet;

    fn mul(self, rhs: &Jet) -> Jet {
        let n = self.coeffs.len().min(rhs.coeffs.len());
        let mut out = vec![0.0; n];
        for (k, slot) in out.iter_mut().enumerate() {
            *slot = (0..=k).map(|j| self.coeffs[j] * rhs.coeffs[k - j]).sum();
        }
        Jet { coeffs: out }
    }
}

impl Neg for Jet {
    type Output = Jet;

    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}
