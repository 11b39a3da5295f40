//! Constant-coefficient linear differential forms Σ a_α D_α.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Multi-index α = (α₁,…,αₙ) selecting ∂^{|α|}/∂x₁^{α₁}…∂xₙ^{αₙ}.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(components: Vec<u32>) -> Self {
        Self(components)
    }

    pub fn zero(dim: usize) -> Self {
        Self(vec![0; dim])
    }

    /// `order` derivatives along the 0-based `axis`.
    pub fn axis(dim: usize, axis: usize, order: u32) -> Self {
        let mut c = vec![0; dim];
        c[axis] = order;
        Self(c)
    }

    pub fn components(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    /// (−1)^{|α|}
    pub fn parity(&self) -> i32 {
        if self.is_even() {
            1
        } else {
            -1
        }
    }

    pub fn is_even(&self) -> bool {
        self.order().is_multiple_of(2)
    }

    pub fn is_zero(&self) -> bool {
        self.order() == 0
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("1");
        }
        f.write_str("d")?;
        for (axis, &k) in self.0.iter().enumerate() {
            for _ in 0..k {
                write!(f, "{}", axis + 1)?;
            }
        }
        Ok(())
    }
}

/// Σ a_α D_α with distinct indices and no zero coefficients. Terms are kept
/// in index order, so every traversal is independent of construction order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "FormRepr", try_from = "FormRepr")]
pub struct DifferentialForm {
    dim: usize,
    terms: BTreeMap<MultiIndex, f64>,
}

#[derive(Serialize, Deserialize)]
struct FormRepr {
    dim: usize,
    terms: Vec<(f64, MultiIndex)>,
}

impl From<DifferentialForm> for FormRepr {
    fn from(form: DifferentialForm) -> Self {
        Self {
            dim: form.dim,
            terms: form.terms.into_iter().map(|(k, a)| (a, k)).collect(),
        }
    }
}

impl TryFrom<FormRepr> for DifferentialForm {
    type Error = Error;

    fn try_from(repr: FormRepr) -> Result<Self> {
        let mut form = DifferentialForm::new(repr.dim);
        for (a, alpha) in repr.terms {
            form = form.with_term(a, alpha)?;
        }
        Ok(form)
    }
}

impl DifferentialForm {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::single(MultiIndex::zero(dim))
    }

    pub fn single(alpha: MultiIndex) -> Self {
        let dim = alpha.dim();
        let mut terms = BTreeMap::new();
        terms.insert(alpha, 1.0);
        Self { dim, terms }
    }

    /// Adds `a·D_α`, merging with an existing term of the same index.
    pub fn with_term(mut self, a: f64, alpha: MultiIndex) -> Result<Self> {
        if alpha.dim() != self.dim {
            return domain(format!(
                "multi-index {alpha} has {} components, form has dimension {}",
                alpha.dim(),
                self.dim
            ));
        }
        if !a.is_finite() {
            return domain("form coefficients must be finite");
        }
        let slot = self.terms.entry(alpha).or_insert(0.0);
        *slot += a;
        self.terms.retain(|_, a| *a != 0.0);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, f64)> + '_ {
        self.terms.iter().map(|(k, &a)| (k, a))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_order(&self) -> u32 {
        self.terms.keys().map(MultiIndex::order).max().unwrap_or(0)
    }

    pub fn scaled(&self, c: f64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(k, a)| (k.clone(), c * a))
            .filter(|(_, a)| *a != 0.0)
            .collect();
        Self { dim: self.dim, terms }
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (alpha, a) in other.terms() {
            out = out.with_term(a, alpha.clone())?;
        }
        Ok(out)
    }

    /// (even part, odd part) by the parity of each index's total order.
    pub fn parity_split(&self) -> (Self, Self) {
        let (even, odd): (BTreeMap<_, _>, BTreeMap<_, _>) = self
            .terms
            .iter()
            .map(|(k, &a)| (k.clone(), a))
            .partition(|(k, _)| k.is_even());
        (
            Self {
                dim: self.dim,
                terms: even,
            },
            Self {
                dim: self.dim,
                terms: odd,
            },
        )
    }

    /// Parses `"1.0*d1 + 2.0*d11 - d12"`: each digit after `d` is one
    /// differentiation along that 1-based axis, a bare number is a multiple
    /// of the identity.
    pub fn parse(text: &str, dim: usize) -> Result<Self> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return domain("empty differential form");
        }
        let mut form = Self::new(dim);
        for (sign, body) in split_signed_terms(&compact)? {
            let (coeff, index) = parse_term(body, dim)?;
            form = form.with_term(sign * coeff, index)?;
        }
        Ok(form)
    }
}

fn split_signed_terms(s: &str) -> Result<Vec<(f64, &str)>> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut start = 0;
    let mut sign = 1.0;
    if matches!(bytes[0], b'+' | b'-') {
        sign = if bytes[0] == b'-' { -1.0 } else { 1.0 };
        start = 1;
    }
    let mut i = start;
    while i < bytes.len() {
        let c = bytes[i];
        let exponent_sign = i > 0 && matches!(bytes[i - 1], b'e' | b'E') && i > start + 1;
        if matches!(c, b'+' | b'-') && !exponent_sign {
            if i == start {
                return domain(format!("malformed form near position {i} in {s:?}"));
            }
            out.push((sign, &s[start..i]));
            sign = if c == b'-' { -1.0 } else { 1.0 };
            start = i + 1;
        }
        i += 1;
    }
    if start >= s.len() {
        return domain(format!("form {s:?} ends with a dangling sign"));
    }
    out.push((sign, &s[start..]));
    Ok(out)
}

fn parse_term(body: &str, dim: usize) -> Result<(f64, MultiIndex)> {
    let (coeff_text, op_text) = match body.split_once('*') {
        Some((c, d)) => (Some(c), Some(d)),
        None if body.starts_with('d') => (None, Some(body)),
        None => (Some(body), None),
    };
    let coeff = match coeff_text {
        Some(c) => c
            .parse::<f64>()
            .map_err(|_| Error::Domain(format!("bad coefficient {c:?}")))?,
        None => 1.0,
    };
    let index = match op_text {
        None => MultiIndex::zero(dim),
        Some(d) => {
            let digits = d
                .strip_prefix('d')
                .filter(|rest| !rest.is_empty())
                .ok_or_else(|| Error::Domain(format!("bad derivative term {d:?}")))?;
            let mut components = vec![0u32; dim];
            for ch in digits.chars() {
                let axis = ch
                    .to_digit(10)
                    .filter(|&a| a >= 1 && (a as usize) <= dim)
                    .ok_or_else(|| Error::Domain(format!("axis {ch:?} out of range 1..={dim}")))?;
                components[axis as usize - 1] += 1;
            }
            MultiIndex::new(components)
        }
    };
    Ok((coeff, index))
}

impl fmt::Display for DifferentialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("0");
        }
        for (i, (alpha, a)) in self.terms().enumerate() {
            if i > 0 {
                f.write_str(if a < 0.0 { " - " } else { " + " })?;
            } else if a < 0.0 {
                f.write_str("-")?;
            }
            if alpha.is_zero() {
                write!(f, "{}", a.abs())?;
            } else {
                write!(f, "{}*{alpha}", a.abs())?;
            }
        }
        Ok(())
    }
}
