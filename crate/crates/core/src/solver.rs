//! Fixed-point iteration for Tf = f^{p−1} restricted to a bounded
//! one-dimensional domain G, with (T_G u)(x) = ∫_G |x−y|^{−λ} u(y) dy
//! discretized by product integration on a graded grid.
//!
//! The literal map u ↦ (T_G u)^{1/(p−1)} has the solution as an eigenvector
//! of its linearization with eigenvalue 1/(p−1) > 1, so it cannot converge
//! on its own. The iteration here runs on the unit sphere of L^p(G):
//! ũ = (T_G u)^{1/(p−1)} normalized, mixed with the previous iterate; the
//! amplitude, which T_G and the power scale differently, is restored
//! afterwards in closed form.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::identities::{MultiIndex, ScalarField};
use crate::interp::MonotoneCubic;
use crate::radial::RadialProfile;
use crate::regularity::Domain1D;
use crate::specfun::Params;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub domain: Domain1D,
    pub lambda: f64,
    /// Number of grid panels; the grid has `grid_size + 1` nodes.
    pub grid_size: usize,
    /// Nodes cluster toward both ends like t^grading near t = 0.
    pub grading_exponent: f64,
    pub max_iters: usize,
    pub stop_tol: f64,
    pub damping: f64,
}

impl SolverConfig {
    pub fn new(domain: Domain1D, lambda: f64) -> Self {
        Self {
            domain,
            lambda,
            grid_size: 200,
            grading_exponent: 2.0,
            max_iters: 1000,
            stop_tol: 1e-8,
            damping: 1.0,
        }
    }

    pub fn with_grid_size(mut self, grid_size: usize) -> Self {
        self.grid_size = grid_size;
        self
    }

    pub fn with_grading_exponent(mut self, g: f64) -> Self {
        self.grading_exponent = g;
        self
    }

    pub fn with_max_iters(mut self, max_iters: usize) -> Self {
        self.max_iters = max_iters;
        self
    }

    pub fn with_stop_tol(mut self, stop_tol: f64) -> Self {
        self.stop_tol = stop_tol;
        self
    }

    pub fn with_damping(mut self, damping: f64) -> Self {
        self.damping = damping;
        self
    }

    fn validate(&self, params: &Params) -> Result<(f64, f64)> {
        if params.n() != 1 {
            return domain("the bounded-domain solver works in one dimension");
        }
        if self.lambda != params.lambda() {
            return domain("solver lambda differs from the problem parameters");
        }
        let segment = self
            .domain
            .segment()
            .ok_or_else(|| Error::Domain("the solver needs a one-dimensional domain".into()))?;
        if self.grid_size < 2 {
            return domain("grid needs at least two panels");
        }
        if !(self.grading_exponent >= 1.0 && self.grading_exponent.is_finite()) {
            return domain("grading exponent must be at least 1");
        }
        if !(self.stop_tol > 0.0) {
            return domain("stop tolerance must be positive");
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return domain("damping must lie in (0, 1]");
        }
        Ok(segment)
    }
}

/// Nodes a + (b−a)φ(i/N) with φ(t) = ½(2t)^g on [0, ½] mirrored on [½, 1].
pub fn graded_grid(a: f64, b: f64, panels: usize, grading: f64) -> Vec<f64> {
    (0..=panels)
        .map(|i| {
            let t = i as f64 / panels as f64;
            let phi = if 2 * i <= panels {
                0.5 * (2.0 * t).powf(grading)
            } else {
                1.0 - 0.5 * (2.0 * (1.0 - t)).powf(grading)
            };
            if i == panels {
                b
            } else {
                a + (b - a) * phi
            }
        })
        .collect()
}

/// T_G on piecewise-linear functions: the kernel moments ∫|x−s|^{−λ}{1, s}ds
/// are integrated exactly on each panel.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductIntegration {
    nodes: Vec<f64>,
    lambda: f64,
    matrix: Vec<Vec<f64>>,
}

impl ProductIntegration {
    pub fn new(nodes: Vec<f64>, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda < 1.0) {
            return domain("product integration needs 0 < lambda < 1");
        }
        if nodes.len() < 2 || nodes.windows(2).any(|w| !(w[0] < w[1])) {
            return domain("nodes must be strictly increasing");
        }
        let matrix = nodes.iter().map(|&x| row_weights(&nodes, lambda, x)).collect();
        Ok(Self { nodes, lambda, matrix })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn apply(&self, u: &[f64]) -> Vec<f64> {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(u).map(|(w, v)| w * v).sum())
            .collect()
    }

    /// (T_G u)(x) for the piecewise-linear interpolant of nodal values `u`.
    pub fn apply_at(&self, u: &[f64], x: f64) -> f64 {
        row_weights(&self.nodes, self.lambda, x)
            .iter()
            .zip(u)
            .map(|(w, v)| w * v)
            .sum()
    }
}

fn row_weights(nodes: &[f64], lambda: f64, x: f64) -> Vec<f64> {
    let f0 = |t: f64| t.signum() * t.abs().powf(1.0 - lambda) / (1.0 - lambda);
    let f1 = |t: f64| t.abs().powf(2.0 - lambda) / (2.0 - lambda);
    let mut row = vec![0.0; nodes.len()];
    for j in 0..nodes.len() - 1 {
        let (a, b) = (nodes[j] - x, nodes[j + 1] - x);
        let h = nodes[j + 1] - nodes[j];
        let m0 = f0(b) - f0(a);
        let m1 = f1(b) - f1(a);
        row[j] += (b * m0 - m1) / h;
        row[j + 1] += (m1 - a * m0) / h;
    }
    row
}

fn trapezoid_weights(nodes: &[f64]) -> Vec<f64> {
    let mut w = vec![0.0; nodes.len()];
    for j in 0..nodes.len() - 1 {
        let h = nodes[j + 1] - nodes[j];
        w[j] += 0.5 * h;
        w[j + 1] += 0.5 * h;
    }
    w
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum InitialGuess {
    Constant(f64),
    /// Evaluated at |x|.
    Profile(RadialProfile),
}

impl InitialGuess {
    fn value(&self, x: f64) -> f64 {
        match self {
            Self::Constant(c) => *c,
            Self::Profile(p) => p.value(x.abs()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverTrace {
    /// max_i |(T_G U)_i − U_i^{p−1}| / U_i^{p−1} after each iteration.
    pub residuals: Vec<f64>,
    /// max_i |U'_i − U_i| / U_i where U' is one literal damped step from U.
    pub step_changes: Vec<f64>,
    pub amplitudes: Vec<f64>,
    /// Smallest nodal value of each normalized iterate.
    pub min_values: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
}

/// Nodal solution with a monotone cubic interpolant between nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSolution {
    interp: MonotoneCubic,
}

impl GridSolution {
    pub fn nodes(&self) -> &[f64] {
        self.interp.nodes()
    }

    pub fn values(&self) -> &[f64] {
        self.interp.values()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.interp.eval(x)
    }

    pub fn sup(&self) -> f64 {
        self.values().iter().copied().fold(0.0, f64::max)
    }
}

impl ScalarField for GridSolution {
    fn dim(&self) -> usize {
        1
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        if x[0] < self.interp.first() || x[0] > self.interp.last() {
            return domain("point outside the solution grid");
        }
        Ok(self.interp.eval(x[0]))
    }

    fn analytic_derivative(&self, alpha: &MultiIndex, x: &[f64]) -> Option<Result<f64>> {
        match alpha.order() {
            0 => Some(self.value(x)),
            1 => Some(self.value(x).map(|_| self.interp.derivative(x[0]))),
            _ => None,
        }
    }
}

/// The discrete operator and bookkeeping shared by the solver and its checks.
pub struct Discretization {
    pub operator: ProductIntegration,
    quadrature: Vec<f64>,
    params: Params,
}

impl Discretization {
    pub fn new(config: &SolverConfig, params: &Params) -> Result<Self> {
        let (a, b) = config.validate(params)?;
        let nodes = graded_grid(a, b, config.grid_size, config.grading_exponent);
        let quadrature = trapezoid_weights(&nodes);
        Ok(Self {
            operator: ProductIntegration::new(nodes, params.lambda())?,
            quadrature,
            params: *params,
        })
    }

    fn lp_norm(&self, v: &[f64]) -> f64 {
        let p = self.params.p();
        self.quadrature
            .iter()
            .zip(v)
            .map(|(w, x)| w * x.powf(p))
            .sum::<f64>()
            .powf(1.0 / p)
    }

    /// Relative residual of the equation at the nodes.
    pub fn residual(&self, u: &[f64]) -> f64 {
        let tu = self.operator.apply(u);
        tu.iter()
            .zip(u)
            .map(|(t, v)| {
                let rhs = v.powf(self.params.pm1());
                (t - rhs).abs() / rhs
            })
            .fold(0.0, f64::max)
    }
}

/// One literal damped step u ↦ (1−ω)u + ω(T_G u)^{1/(p−1)} on nodal values.
pub fn picard_step(disc: &Discretization, u: &[f64], damping: f64) -> Vec<f64> {
    let q = disc.params.inverse_power();
    disc.operator
        .apply(u)
        .iter()
        .zip(u)
        .map(|(t, v)| (1.0 - damping) * v + damping * t.powf(q))
        .collect()
}

pub fn picard_solve(
    config: &SolverConfig,
    params: &Params,
    init: &InitialGuess,
) -> Result<(GridSolution, SolverTrace)> {
    let disc = Discretization::new(config, params)?;
    let nodes = disc.operator.nodes().to_vec();
    let q = params.inverse_power();
    let pm1 = params.pm1();

    let mut u: Vec<f64> = nodes.iter().map(|&x| init.value(x)).collect();
    if let Some(node) = u.iter().position(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(Error::NonPositive { iteration: 0, node });
    }
    let norm = disc.lp_norm(&u);
    u.iter_mut().for_each(|v| *v /= norm);

    let mut trace = SolverTrace {
        residuals: Vec::new(),
        step_changes: Vec::new(),
        amplitudes: Vec::new(),
        min_values: Vec::new(),
        converged: false,
        iterations: 0,
    };
    let mut scaled = u.clone();
    let mut rising = 0;
    for iteration in 1..=config.max_iters {
        let mut next: Vec<f64> = disc.operator.apply(&u).iter().map(|t| t.powf(q)).collect();
        let norm = disc.lp_norm(&next);
        next.iter_mut().for_each(|v| *v /= norm);
        for (v, w) in u.iter_mut().zip(&next) {
            *v = (1.0 - config.damping) * *v + config.damping * w;
        }
        let norm = disc.lp_norm(&u);
        u.iter_mut().for_each(|v| *v /= norm);
        if let Some(node) = u.iter().position(|v| !(*v > 0.0 && v.is_finite())) {
            return Err(Error::NonPositive { iteration, node });
        }

        // T(cu) = c·Tu while (cu)^{p−1} = c^{p−1}u^{p−1}: the Rayleigh-type
        // quotient μ = ⟨Tu,u⟩/⟨u^{p−1},u⟩ fixes c = μ^{−1/(1−(p−1))}.
        let tu = disc.operator.apply(&u);
        let num: f64 = disc
            .quadrature
            .iter()
            .zip(&tu)
            .zip(&u)
            .map(|((w, t), v)| w * t * v)
            .sum();
        let den: f64 = disc.quadrature.iter().zip(&u).map(|(w, v)| w * v.powf(1.0 + pm1)).sum();
        let amplitude = (num / den).powf(-1.0 / (1.0 - pm1));
        scaled = u.iter().map(|v| amplitude * v).collect();

        let residual = disc.residual(&scaled);
        let step = picard_step(&disc, &scaled, config.damping)
            .iter()
            .zip(&scaled)
            .map(|(a, b)| (a - b).abs() / b)
            .fold(0.0, f64::max);

        if trace.residuals.last().is_some_and(|&prev| residual > prev) {
            rising += 1;
        } else {
            rising = 0;
        }
        trace.residuals.push(residual);
        trace.step_changes.push(step);
        trace.amplitudes.push(amplitude);
        trace.min_values.push(u.iter().copied().fold(f64::INFINITY, f64::min));
        trace.iterations = iteration;

        if residual <= config.stop_tol && step <= config.stop_tol {
            trace.converged = true;
            break;
        }
        if rising >= 5 {
            return Err(Error::Diverged {
                iterations: iteration,
                residual,
            });
        }
    }
    let solution = GridSolution {
        interp: MonotoneCubic::new(nodes, scaled)?,
    };
    Ok((solution, trace))
}

/// Relative residual |T_G U − U^{p−1}|/U^{p−1} at off-grid points, with U the
/// piecewise-linear interpolant of the nodal solution.
pub fn off_grid_residual(disc: &Discretization, solution: &GridSolution, probes: &[f64]) -> Result<f64> {
    let nodes = solution.nodes();
    let values = solution.values();
    let mut worst = 0.0f64;
    for &x in probes {
        if !(x > nodes[0] && x < nodes[nodes.len() - 1]) {
            return domain(format!("probe {x} outside the grid interior"));
        }
        let j = nodes.partition_point(|&v| v <= x).clamp(1, nodes.len() - 1) - 1;
        let t = (x - nodes[j]) / (nodes[j + 1] - nodes[j]);
        let u = (1.0 - t) * values[j] + t * values[j + 1];
        let rhs = u.powf(disc.params.pm1());
        worst = worst.max((disc.operator.apply_at(values, x) - rhs).abs() / rhs);
    }
    Ok(worst)
}

/// Relative sup-norm difference of two solutions over probe points.
pub fn relative_sup_difference(coarse: &GridSolution, fine: &GridSolution, probes: &[f64]) -> f64 {
    let scale = fine.sup();
    probes
        .iter()
        .map(|&x| (coarse.eval(x) - fine.eval(x)).abs())
        .fold(0.0, f64::max)
        / scale
}
