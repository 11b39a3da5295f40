//! Numerical certification of the commutativity and orthogonality identities
//! between solutions f, g of Tf = f^{p−1}.
//!
//! Every identity integral is a sum of term integrals ∫ D_α u · D_β v dx over
//! ℝⁿ with u, v radial. In one dimension the two half-lines are integrated
//! separately; in higher dimensions only α = β = 0 is supported, through the
//! radial reduction.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::quadrature::{convergence_screen, integrate, Estimate, Location, QuadratureSpec, Screen, SingularityBudget};
use crate::radial::{ProfileShape, RadialProfile};
use crate::solutions::{lieb_solution, singular_solution};
use crate::specfun::{log_beta, unit_sphere_area, Params};
use crate::verdict::{classify, Verdict};

use super::field::{partial_derivative, RadialField};
use super::form::{DifferentialForm, MultiIndex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IdentityId {
    SolutionPairing,
    Commutativity,
    SignedSymmetry,
    OddOrthogonality,
    CompositeCommutativity,
    ParityCrossTerm,
    ParityChain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Target {
    /// lhs = rhs, judged by the relative gap.
    Equality,
    /// lhs = rhs = 0, judged by max(|lhs|, |rhs|).
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityTolerances {
    pub equality: f64,
    pub zero: f64,
    pub abs_floor: f64,
}

impl Default for IdentityTolerances {
    fn default() -> Self {
        Self {
            equality: 1e-6,
            zero: 1e-8,
            abs_floor: 1e-14,
        }
    }
}

/// One asserted equality. When the screen rejects an integral, `lhs`, `rhs`
/// and the gaps are 0 and the verdict is `NotApplicable`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity: IdentityId,
    pub target: Target,
    pub lhs: f64,
    pub rhs: f64,
    pub screen: Screen,
    /// |lhs − rhs| / max(|lhs|, |rhs|, abs_floor)
    pub rel_gap: f64,
    /// The quantity held against `tolerance`: `rel_gap` for equalities,
    /// max(|lhs|, |rhs|) for zero targets.
    pub gap: f64,
    pub tolerance: f64,
    pub err_estimate: f64,
    /// Σ |coefficients|·∫|integrand|, the scale a zero result is measured against.
    pub abs_mass: f64,
    /// Every integrand involved is odd, so the zero is forced by symmetry alone.
    pub parity_forced: bool,
    pub verdict: Verdict,
}

/// Local exponents (origin, infinity) of the k-th derivative of a profile
/// restricted to a line through 0, or of the profile itself when k = 0.
fn derivative_exponents(profile: &RadialProfile, k: u32) -> (f64, f64) {
    let k = f64::from(k);
    let at_infinity = profile.exponent_at_infinity() - k;
    let e0 = profile.exponent_at_origin();
    let at_origin = match profile.shape() {
        _ if e0 < 0.0 => e0 - k,
        // smooth even profiles: odd derivatives vanish linearly at 0
        ProfileShape::Lieb { .. } => k % 2.0,
        ProfileShape::GridSampled(_) | ProfileShape::PowerSingular { .. } => {
            if e0 == 0.0 {
                k % 2.0
            } else {
                (e0 - k).min(0.0)
            }
        }
    };
    (at_origin, at_infinity)
}

fn check_term_shape(alpha: &MultiIndex, beta: &MultiIndex, n: u32) -> Result<()> {
    if alpha.dim() != n as usize || beta.dim() != n as usize {
        return domain(format!("multi-indices must have {n} components"));
    }
    if n > 1 && !(alpha.is_zero() && beta.is_zero()) {
        return domain("identity integrals with derivatives are supported in one dimension only");
    }
    Ok(())
}

/// Screen for ∫_{ℝⁿ} D_α u · D_β v dx.
pub fn term_screen(
    u: &RadialProfile,
    alpha: &MultiIndex,
    v: &RadialProfile,
    beta: &MultiIndex,
    n: u32,
) -> Result<Screen> {
    check_term_shape(alpha, beta, n)?;
    Ok(convergence_screen(&term_budget(u, alpha, v, beta, n)))
}

fn term_budget(
    u: &RadialProfile,
    alpha: &MultiIndex,
    v: &RadialProfile,
    beta: &MultiIndex,
    n: u32,
) -> SingularityBudget {
    let (u0, ui) = derivative_exponents(u, alpha.order());
    let (v0, vi) = derivative_exponents(v, beta.order());
    let radial = f64::from(n) - 1.0;
    SingularityBudget::new()
        .at(0.0, u0 + v0 + radial)
        .at_infinity(ui + vi + radial)
}

struct TermIntegral {
    value: f64,
    err: f64,
    abs_mass: f64,
}

fn line_integrand(uf: &RadialField, alpha: &MultiIndex, vf: &RadialField, beta: &MultiIndex, x: f64) -> f64 {
    let a = partial_derivative(uf, alpha, &[x]);
    let b = partial_derivative(vf, beta, &[x]);
    match (a, b) {
        (Ok(a), Ok(b)) => a * b,
        _ => f64::NAN,
    }
}

fn term_integral(
    u: &RadialProfile,
    alpha: &MultiIndex,
    v: &RadialProfile,
    beta: &MultiIndex,
    n: u32,
    quad: &QuadratureSpec,
) -> Result<TermIntegral> {
    let budget = term_budget(u, alpha, v, beta, n);
    let tail = budget.local_exponents.last().map(|(_, e)| *e).unwrap_or(-2.0);
    let spec = quad.clone().with_split_points(Vec::new()).with_tail_exponent_hint(tail);
    if n == 1 {
        let uf = RadialField::new(u.clone(), 1);
        let vf = RadialField::new(v.clone(), 1);
        let right = |x: f64| line_integrand(&uf, alpha, &vf, beta, x);
        let left = |t: f64| line_integrand(&uf, alpha, &vf, beta, -t);
        let pos = integrate(right, 0.0, f64::INFINITY, &spec)?;
        let neg = integrate(left, 0.0, f64::INFINITY, &spec)?;
        let pos_abs = integrate(|x| right(x).abs(), 0.0, f64::INFINITY, &spec)?;
        let neg_abs = integrate(|t| left(t).abs(), 0.0, f64::INFINITY, &spec)?;
        Ok(TermIntegral {
            value: neg.value + pos.value,
            err: neg.err_estimate + pos.err_estimate,
            abs_mass: neg_abs.value + pos_abs.value,
        })
    } else {
        let area = unit_sphere_area(n);
        let radial = f64::from(n) - 1.0;
        let est: Estimate = integrate(|r| u.value(r) * v.value(r) * r.powf(radial), 0.0, f64::INFINITY, &spec)?;
        let est = est.scaled(area);
        Ok(TermIntegral {
            value: est.value,
            err: est.err_estimate,
            abs_mass: est.value.abs(),
        })
    }
}

/// ∫ |D_α u · D_β v| over the shell 1/R ≤ |x| ≤ R. Used to probe whether a
/// screened-out integral really fails to settle as the cutoff grows.
pub fn forced_cutoff_integral(
    u: &RadialProfile,
    alpha: &MultiIndex,
    v: &RadialProfile,
    beta: &MultiIndex,
    n: u32,
    cutoff: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    check_term_shape(alpha, beta, n)?;
    if !(cutoff > 1.0 && cutoff.is_finite()) {
        return domain("cutoff radius must exceed 1");
    }
    let spec = quad.clone().with_split_points(vec![1.0]).without_tail_exponent_hint();
    let (lo, hi) = (1.0 / cutoff, cutoff);
    if n == 1 {
        let uf = RadialField::new(u.clone(), 1);
        let vf = RadialField::new(v.clone(), 1);
        let pos = integrate(|x| line_integrand(&uf, alpha, &vf, beta, x).abs(), lo, hi, &spec)?;
        let neg = integrate(|t| line_integrand(&uf, alpha, &vf, beta, -t).abs(), lo, hi, &spec)?;
        Ok(pos.value + neg.value)
    } else {
        let radial = f64::from(n) - 1.0;
        let est = integrate(|r| (u.value(r) * v.value(r)).abs() * r.powf(radial), lo, hi, &spec)?;
        Ok(unit_sphere_area(n) * est.value)
    }
}

/// A weighted sum of term integrals.
#[derive(Clone)]
struct Side {
    value: f64,
    err: f64,
    abs_mass: f64,
    divergent: Option<Location>,
    all_odd: bool,
}

impl Side {
    fn exact_zero() -> Self {
        Self {
            value: 0.0,
            err: 0.0,
            abs_mass: 0.0,
            divergent: None,
            all_odd: true,
        }
    }
}

struct Term<'a> {
    coeff: f64,
    u: &'a RadialProfile,
    alpha: &'a MultiIndex,
    v: &'a RadialProfile,
    beta: &'a MultiIndex,
}

fn side(terms: &[Term<'_>], n: u32, quad: &QuadratureSpec) -> Result<Side> {
    let mut out = Side::exact_zero();
    for t in terms {
        check_term_shape(t.alpha, t.beta, n)?;
        if let Screen::Divergent(loc) = convergence_screen(&term_budget(t.u, t.alpha, t.v, t.beta, n)) {
            out.divergent.get_or_insert(loc);
        }
    }
    if out.divergent.is_some() {
        return Ok(out);
    }
    for t in terms {
        let ti = term_integral(t.u, t.alpha, t.v, t.beta, n, quad)?;
        out.value += t.coeff * ti.value;
        out.err += t.coeff.abs() * ti.err;
        out.abs_mass += t.coeff.abs() * ti.abs_mass;
        out.all_odd &= n == 1 && (t.alpha.order() + t.beta.order()) % 2 == 1;
    }
    Ok(out)
}

fn report(id: IdentityId, target: Target, lhs: Side, rhs: Side, tol: &IdentityTolerances) -> IdentityReport {
    let tolerance = match target {
        Target::Equality => tol.equality,
        Target::Zero => tol.zero,
    };
    if let Some(location) = lhs.divergent.or(rhs.divergent) {
        return IdentityReport {
            identity: id,
            target,
            lhs: 0.0,
            rhs: 0.0,
            screen: Screen::Divergent(location),
            rel_gap: 0.0,
            gap: 0.0,
            tolerance,
            err_estimate: 0.0,
            abs_mass: 0.0,
            parity_forced: false,
            verdict: Verdict::NotApplicable,
        };
    }
    let scale = lhs.value.abs().max(rhs.value.abs());
    let rel_gap = (lhs.value - rhs.value).abs() / scale.max(tol.abs_floor);
    let err = lhs.err + rhs.err;
    let (gap, verdict) = match target {
        Target::Equality => (rel_gap, classify(rel_gap, tolerance, err / scale.max(tol.abs_floor))),
        Target::Zero => (scale, classify(scale, tolerance, err)),
    };
    IdentityReport {
        identity: id,
        target,
        lhs: lhs.value,
        rhs: rhs.value,
        screen: Screen::Convergent,
        rel_gap,
        gap,
        tolerance,
        err_estimate: err,
        abs_mass: lhs.abs_mass + rhs.abs_mass,
        parity_forced: lhs.all_odd && rhs.all_odd,
        verdict,
    }
}

fn powered(f: &RadialProfile, params: &Params) -> Result<RadialProfile> {
    f.powered(params.pm1())
}

/// ∫ D_β g · D_α(f^{p−1}) dx = ∫ D_α f · D_β(g^{p−1}) dx.
pub fn check_commutativity(
    f: &RadialProfile,
    g: &RadialProfile,
    alpha: &MultiIndex,
    beta: &MultiIndex,
    params: &Params,
    quad: &QuadratureSpec,
    tol: &IdentityTolerances,
) -> Result<IdentityReport> {
    let (fp, gp) = (powered(f, params)?, powered(g, params)?);
    let n = params.n();
    let lhs = side(
        &[Term {
            coeff: 1.0,
            u: g,
            alpha: beta,
            v: &fp,
            beta: alpha,
        }],
        n,
        quad,
    )?;
    let rhs = side(
        &[Term {
            coeff: 1.0,
            u: f,
            alpha,
            v: &gp,
            beta,
        }],
        n,
        quad,
    )?;
    Ok(report(IdentityId::Commutativity, Target::Equality, lhs, rhs, tol))
}

/// For (−1)^{|α|+|β|} = 1 the signed equality
/// (−1)^{|β|}∫D_β f·D_α(f^{p−1}) = (−1)^{|α|}∫D_α f·D_β(f^{p−1});
/// otherwise both integrals vanish.
pub fn check_orthogonality(
    f: &RadialProfile,
    alpha: &MultiIndex,
    beta: &MultiIndex,
    params: &Params,
    quad: &QuadratureSpec,
    tol: &IdentityTolerances,
) -> Result<IdentityReport> {
    let fp = powered(f, params)?;
    let n = params.n();
    let odd_total = (alpha.order() + beta.order()) % 2 == 1;
    let (sign_l, sign_r, id, target) = if odd_total {
        (1.0, 1.0, IdentityId::OddOrthogonality, Target::Zero)
    } else {
        (
            f64::from(beta.parity()),
            f64::from(alpha.parity()),
            IdentityId::SignedSymmetry,
            Target::Equality,
        )
    };
    let lhs = side(
        &[Term {
            coeff: sign_l,
            u: f,
            alpha: beta,
            v: &fp,
            beta: alpha,
        }],
        n,
        quad,
    )?;
    let rhs = side(
        &[Term {
            coeff: sign_r,
            u: f,
            alpha,
            v: &fp,
            beta,
        }],
        n,
        quad,
    )?;
    Ok(report(id, target, lhs, rhs, tol))
}

/// Term list of ∫ Λ(u) Ω(v) dx.
fn expand<'a>(
    lam: &'a DifferentialForm,
    u: &'a RadialProfile,
    om: &'a DifferentialForm,
    v: &'a RadialProfile,
) -> Vec<Term<'a>> {
    let mut out = Vec::with_capacity(lam.len() * om.len());
    for (alpha, a) in lam.terms() {
        for (beta, b) in om.terms() {
            out.push(Term {
                coeff: a * b,
                u,
                alpha,
                v,
                beta,
            });
        }
    }
    out
}

fn joined<'a>(mut a: Vec<Term<'a>>, b: Vec<Term<'a>>) -> Vec<Term<'a>> {
    a.extend(b);
    a
}

/// Reports, in order: one for ∫Λ(f)Ω(g^{p−1}) = ∫Λ(f^{p−1})Ω(g); two zero
/// targets ∫Λ_e(f)Λ_o(f^{p−1}) and ∫Λ_e(f^{p−1})Λ_o(f); and the three links
/// of the chain ∫Λ(f)Ω(f^{p−1}) = ∫Λ(f^{p−1})Ω(f)
/// = ∫Λ_e(f)Ω_e(f^{p−1}) + ∫Λ_o(f)Ω_o(f^{p−1})
/// = ∫Λ_e(f^{p−1})Ω_e(f) + ∫Λ_o(f^{p−1})Ω_o(f).
///
/// With single-term forms D_α, D_β the first report carries the two sides of
/// `check_commutativity(f, g, α, β)` in swapped slots.
pub fn check_composite(
    f: &RadialProfile,
    g: &RadialProfile,
    lam: &DifferentialForm,
    om: &DifferentialForm,
    params: &Params,
    quad: &QuadratureSpec,
    tol: &IdentityTolerances,
) -> Result<Vec<IdentityReport>> {
    let n = params.n() as usize;
    if lam.dim() != n || om.dim() != n {
        return domain(format!("forms must act in dimension {n}"));
    }
    let (fp, gp) = (powered(f, params)?, powered(g, params)?);
    let n = params.n();
    let (lam_e, lam_o) = lam.parity_split();
    let (om_e, om_o) = om.parity_split();
    let mut out = Vec::with_capacity(6);

    // single-term sums are ordered to match check_commutativity bit for bit
    let lhs_terms: Vec<Term> = lam
        .terms()
        .flat_map(|(alpha, a)| om.terms().map(move |(beta, b)| (alpha, a, beta, b)))
        .map(|(alpha, a, beta, b)| Term {
            coeff: a * b,
            u: f,
            alpha,
            v: &gp,
            beta,
        })
        .collect();
    let rhs_terms: Vec<Term> = lam
        .terms()
        .flat_map(|(alpha, a)| om.terms().map(move |(beta, b)| (alpha, a, beta, b)))
        .map(|(alpha, a, beta, b)| Term {
            coeff: a * b,
            u: g,
            alpha: beta,
            v: &fp,
            beta: alpha,
        })
        .collect();
    out.push(report(
        IdentityId::CompositeCommutativity,
        Target::Equality,
        side(&lhs_terms, n, quad)?,
        side(&rhs_terms, n, quad)?,
        tol,
    ));

    for terms in [expand(&lam_e, f, &lam_o, &fp), expand(&lam_e, &fp, &lam_o, f)] {
        let zero = side(&terms, n, quad)?;
        let mut rep = report(IdentityId::ParityCrossTerm, Target::Zero, zero, Side::exact_zero(), tol);
        if terms.is_empty() {
            rep.parity_forced = false;
        }
        out.push(rep);
    }

    let chain = [
        side(&expand(lam, f, om, &fp), n, quad)?,
        side(&expand(lam, &fp, om, f), n, quad)?,
        side(
            &joined(expand(&lam_e, f, &om_e, &fp), expand(&lam_o, f, &om_o, &fp)),
            n,
            quad,
        )?,
        side(
            &joined(expand(&lam_e, &fp, &om_e, f), expand(&lam_o, &fp, &om_o, f)),
            n,
            quad,
        )?,
    ];
    for link in chain.windows(2) {
        out.push(report(
            IdentityId::ParityChain,
            Target::Equality,
            link[0].clone(),
            link[1].clone(),
            tol,
        ));
    }
    Ok(out)
}

/// The integral identity between the two exhibited solutions:
/// ∫ f_C · f_L^{p−1} dx = ∫ f_L · f_C^{p−1} dx, each side by radial quadrature.
pub fn check_corollary(params: &Params, quad: &QuadratureSpec, tol: &IdentityTolerances) -> Result<IdentityReport> {
    let fc = singular_solution(params);
    let fl = lieb_solution(params, quad)?;
    let zero = MultiIndex::zero(params.n() as usize);
    let n = params.n();
    let lhs = side(
        &[Term {
            coeff: 1.0,
            u: &fc,
            alpha: &zero,
            v: &powered(&fl, params)?,
            beta: &zero,
        }],
        n,
        quad,
    )?;
    let rhs = side(
        &[Term {
            coeff: 1.0,
            u: &fl,
            alpha: &zero,
            v: &powered(&fc, params)?,
            beta: &zero,
        }],
        n,
        quad,
    )?;
    Ok(report(IdentityId::SolutionPairing, Target::Equality, lhs, rhs, tol))
}

/// Both sides of the corollary identity through Beta functions:
/// C·L^{p−1}·|S^{n−1}|·½B(λ/4, λ/4) and L·C^{p−1}·|S^{n−1}|·½B(a/2, a/2), a = n − λ/2.
pub fn corollary_closed_form(params: &Params, quad: &QuadratureSpec) -> Result<(f64, f64)> {
    let c = singular_solution(params).amplitude();
    let l = lieb_solution(params, quad)?.amplitude();
    let (lambda, pm1) = (params.lambda(), params.pm1());
    let a = params.solution_exponent();
    let area = unit_sphere_area(params.n());
    let lhs = c * l.powf(pm1) * area * 0.5 * log_beta(0.25 * lambda, 0.25 * lambda)?.exp();
    let rhs = l * c.powf(pm1) * area * 0.5 * log_beta(0.5 * a, 0.5 * a)?.exp();
    Ok((lhs, rhs))
}
