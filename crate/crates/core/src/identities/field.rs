//! Scalar fields on ℝⁿ and the evaluation of differential forms on them.

use crate::error::{domain, Result};
use crate::jet::Jet;
use crate::radial::{ProfileShape, RadialProfile};

use super::form::{DifferentialForm, MultiIndex};

/// Highest total order handled by the finite-difference path.
pub const MAX_FD_ORDER: u32 = 6;

pub trait ScalarField {
    fn dim(&self) -> usize;

    fn value(&self, x: &[f64]) -> Result<f64>;

    /// Exact derivative when the field knows one.
    fn analytic_derivative(&self, _alpha: &MultiIndex, _x: &[f64]) -> Option<Result<f64>> {
        None
    }

    /// Length scale for finite-difference steps at `x`.
    fn step_scale(&self, x: &[f64]) -> f64 {
        norm(x).max(1.0)
    }
}

pub(crate) fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// x ↦ profile(|x|) in `dim` dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialField {
    profile: RadialProfile,
    dim: usize,
}

impl RadialField {
    pub fn new(profile: RadialProfile, dim: usize) -> Self {
        Self { profile, dim }
    }

    pub fn profile(&self) -> &RadialProfile {
        &self.profile
    }

    fn singular_at_origin(&self) -> bool {
        self.profile.exponent_at_origin() < 0.0
    }

    /// Taylor jet of the one-dimensional restriction at `x`.
    pub(crate) fn line_jet(&self, x: f64, order: usize) -> Option<Jet> {
        let amp = self.profile.amplitude();
        match self.profile.shape() {
            ProfileShape::PowerSingular { exponent } => Some(Jet::variable(x, order).abs().powf(-exponent).scale(amp)),
            ProfileShape::Lieb { exponent } => {
                let t = Jet::variable(x, order);
                Some((&t * &t).add_constant(1.0).powf(-exponent).scale(amp))
            }
            ProfileShape::GridSampled(_) => None,
        }
    }
}

impl ScalarField for RadialField {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        let r = norm(x);
        if r == 0.0 && self.singular_at_origin() {
            return domain("field is singular at the origin");
        }
        Ok(self.profile.value(r))
    }

    fn analytic_derivative(&self, alpha: &MultiIndex, x: &[f64]) -> Option<Result<f64>> {
        if self.dim != 1 {
            return None;
        }
        if x[0] == 0.0 && self.singular_at_origin() {
            return Some(domain("field is singular at the origin"));
        }
        let k = alpha.order() as usize;
        self.line_jet(x[0], k).map(|j| Ok(j.derivative(k)))
    }

    fn step_scale(&self, x: &[f64]) -> f64 {
        let r = norm(x);
        if self.singular_at_origin() {
            r
        } else {
            r.max(1.0)
        }
    }
}

/// A field given by a closure.
pub struct FnField<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(&[f64]) -> f64> FnField<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F: Fn(&[f64]) -> f64> ScalarField for FnField<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        Ok((self.f)(x))
    }
}

/// Finite-difference weights at 0 for the `order`-th derivative on `nodes`
/// (Fornberg's recursion).
pub fn fornberg_weights(order: usize, nodes: &[f64]) -> Vec<f64> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; order + 1]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = nodes[0];
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i];
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[order]).collect()
}

/// Central stencil of fourth-order accuracy for the d-th derivative on
/// integer offsets −M..=M.
fn central_stencil(d: u32) -> (i32, Vec<f64>) {
    let m = (d as i32 + 1) / 2 + 1;
    let nodes: Vec<f64> = (-m..=m).map(f64::from).collect();
    (m, fornberg_weights(d as usize, &nodes))
}

/// D_α field at x by tensor-product central differences with
/// step h = ε^{1/(|α|+2)}·scale(x).
pub fn finite_difference<S: ScalarField + ?Sized>(field: &S, alpha: &MultiIndex, x: &[f64]) -> Result<f64> {
    check_point(field, alpha, x)?;
    let order = alpha.order();
    if order == 0 {
        return field.value(x);
    }
    if order > MAX_FD_ORDER {
        return domain(format!(
            "finite differences support total order <= {MAX_FD_ORDER}, got {order}"
        ));
    }
    let h = f64::EPSILON.powf(1.0 / f64::from(order + 2)) * field.step_scale(x);
    if !(h > 0.0) {
        return domain("finite-difference step vanished at this point");
    }
    let axes: Vec<(usize, i32, Vec<f64>)> = alpha
        .components()
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(axis, &k)| {
            let (m, w) = central_stencil(k);
            (axis, m, w)
        })
        .collect();
    let mut counters = vec![0usize; axes.len()];
    let mut acc = 0.0;
    let mut point = x.to_vec();
    loop {
        let mut weight = 1.0;
        point.copy_from_slice(x);
        for (slot, (axis, m, w)) in counters.iter().zip(&axes) {
            weight *= w[*slot];
            point[*axis] = x[*axis] + f64::from(*slot as i32 - m) * h;
        }
        if weight != 0.0 {
            acc += weight * field.value(&point)?;
        }
        let mut carry = 0;
        while carry < axes.len() {
            counters[carry] += 1;
            if counters[carry] < axes[carry].2.len() {
                break;
            }
            counters[carry] = 0;
            carry += 1;
        }
        if carry == axes.len() {
            break;
        }
    }
    Ok(acc / h.powi(order as i32))
}

fn check_point<S: ScalarField + ?Sized>(field: &S, alpha: &MultiIndex, x: &[f64]) -> Result<()> {
    if x.len() != field.dim() || alpha.dim() != field.dim() {
        return domain(format!(
            "dimension mismatch: field {}, point {}, multi-index {}",
            field.dim(),
            x.len(),
            alpha.dim()
        ));
    }
    Ok(())
}

/// D_α field at x, exact when available and by finite differences otherwise.
pub fn partial_derivative<S: ScalarField + ?Sized>(field: &S, alpha: &MultiIndex, x: &[f64]) -> Result<f64> {
    check_point(field, alpha, x)?;
    match field.analytic_derivative(alpha, x) {
        Some(v) => v,
        None => finite_difference(field, alpha, x),
    }
}

/// Σ a_α D_α field at x.
pub fn apply_form<S: ScalarField + ?Sized>(form: &DifferentialForm, field: &S, x: &[f64]) -> Result<f64> {
    if form.dim() != field.dim() {
        return domain(format!(
            "form dimension {} differs from field dimension {}",
            form.dim(),
            field.dim()
        ));
    }
    let mut acc = 0.0;
    for (alpha, a) in form.terms() {
        acc += a * partial_derivative(field, alpha, x)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d1(k: u32) -> MultiIndex {
        MultiIndex::new(vec![k])
    }

    #[test]
    fn fornberg_reproduces_classic_stencils() {
        let w = fornberg_weights(1, &[-1.0, 0.0, 1.0]);
        assert_eq!(w, vec![-0.5, 0.0, 0.5]);
        let w = fornberg_weights(2, &[-2.0, -1.0, 0.0, 1.0, 2.0]);
        let want = [-1.0 / 12.0, 4.0 / 3.0, -2.5, 4.0 / 3.0, -1.0 / 12.0];
        for (a, b) in w.iter().zip(want) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn identity_form_returns_value() {
        let f = RadialField::new(RadialProfile::lieb(2.0, 0.75).unwrap(), 1);
        let id = DifferentialForm::identity(1);
        assert_eq!(apply_form(&id, &f, &[0.3]).unwrap(), f.value(&[0.3]).unwrap());
    }

    #[test]
    fn analytic_first_derivative_of_lieb_profile() {
        let (amp, e) = (0.7, 0.75);
        let f = RadialField::new(RadialProfile::lieb(amp, e).unwrap(), 1);
        for x in [-1.3, 0.2, 2.5] {
            let want = -2.0 * x * e * amp * (1.0 + x * x).powf(-e - 1.0);
            let exact = partial_derivative(&f, &d1(1), &[x]).unwrap();
            let fd = finite_difference(&f, &d1(1), &[x]).unwrap();
            assert!((exact - want).abs() < 1e-15);
            assert!((fd - want).abs() < 1e-7);
        }
    }

    #[test]
    fn finite_differences_track_jets_up_to_order_four() {
        let f = RadialField::new(RadialProfile::power_singular(1.0, 0.75).unwrap(), 1);
        for k in 0..=4 {
            let exact = partial_derivative(&f, &d1(k), &[1.2]).unwrap();
            let fd = finite_difference(&f, &d1(k), &[1.2]).unwrap();
            assert!(((fd - exact) / exact).abs() < 1e-4, "k={k}: {fd} vs {exact}");
        }
    }

    #[test]
    fn mixed_partials_in_two_dimensions() {
        let f = FnField::new(2, |x: &[f64]| x[0] * x[0] * x[1].sin());
        let alpha = MultiIndex::new(vec![1, 1]);
        let got = finite_difference(&f, &alpha, &[0.4, 0.9]).unwrap();
        assert!((got - 2.0 * 0.4 * 0.9f64.cos()).abs() < 1e-8);
    }

    #[test]
    fn form_linearity() {
        let f = RadialField::new(RadialProfile::lieb(1.0, 1.25).unwrap(), 1);
        let a = DifferentialForm::parse("d1 + 2*d11", 1).unwrap();
        let b = DifferentialForm::parse("-3 + 0.5*d111", 1).unwrap();
        let x = [0.8];
        let combined = apply_form(&a.scaled(2.0).plus(&b.scaled(-1.5)).unwrap(), &f, &x).unwrap();
        let separate = 2.0 * apply_form(&a, &f, &x).unwrap() - 1.5 * apply_form(&b, &f, &x).unwrap();
        assert!((combined - separate).abs() <= 1e-14 * separate.abs().max(1.0));
    }

    #[test]
    fn singular_point_and_order_cap() {
        let f = RadialField::new(RadialProfile::power_singular(1.0, 0.5).unwrap(), 1);
        assert!(partial_derivative(&f, &d1(1), &[0.0]).is_err());
        let g = FnField::new(1, |x: &[f64]| x[0].exp());
        assert!(finite_difference(&g, &d1(7), &[0.0]).is_err());
    }
}
