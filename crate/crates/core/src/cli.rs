//! Command-line front end: `lieb <subcommand> [flags]`.
//!
//! Exit codes: 0 when every verdict is Verified (NotApplicable entries
//! alongside Verified ones are allowed), 1 on any Refuted, Inconclusive or
//! Diverged outcome or a numerical failure, 2 on usage and configuration
//! errors, 3 when every result is NotApplicable.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::Error;
use crate::identities::{
    check_commutativity, check_composite, check_corollary, check_orthogonality, corollary_closed_form,
    DifferentialForm, IdentityReport, IdentityTolerances, MultiIndex, RadialField,
};
use crate::quadrature::QuadratureSpec;
use crate::radial::{riesz_potential_radial, RadialProfile};
use crate::regularity::{
    decay_singularity_scan, kernel_growth_check, translation_annihilation_check, weighted_norm, Domain1D, GridSchedule,
    ScanOptions,
};
use crate::report::{to_json, Outcome, ParamsSummary, QuadratureSummary, RunReport};
use crate::solutions::{lieb_solution, singular_solution, verify_solution};
use crate::solver::{picard_solve, InitialGuess, SolverConfig};
use crate::specfun::{lieb_constant_c, lieb_constant_l, riesz_power_constant, Params};
use crate::verdict::Verdict;

#[derive(Debug, Parser)]
#[command(
    name = "lieb",
    version,
    args_override_self = true,
    about = "Verify and solve the Riesz convolution equation Tf = f^(p-1)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// The amplitudes C and L and the composition constant
    Constants(ConstantsArgs),
    /// Residual check of a candidate solution on sample radii
    VerifySolution(VerifyArgs),
    /// Riesz potential of a solution profile at given radii
    Riesz(RieszArgs),
    /// Commutativity, orthogonality and composite-form identities
    Identity(IdentityArgs),
    /// The integral identity linking the singular and bounded solutions
    Corollary(CorollaryArgs),
    /// Weighted norms and kernel growth conditions
    Regularity(RegularityArgs),
    /// Decay and singularity scan of a solution profile
    Scan(ScanArgs),
    /// Fixed-point solve on a bounded interval
    Solve(SolveArgs),
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long)]
    n: u32,
    #[arg(long, allow_hyphen_values = true)]
    lambda: f64,
    /// key=value file merged under the command-line flags
    #[arg(long)]
    config: Option<String>,
    /// Write the JSON report here instead of standard output
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    no_timestamp: bool,
    #[arg(long, default_value_t = 1e-9)]
    rel_tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Which {
    Singular,
    Lieb,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Solution {
    Singular,
    Lieb,
}

#[derive(Debug, Args)]
struct ConstantsArgs {
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum, default_value_t = Which::Both)]
    which: Which,
    /// Comma-separated radii; defaults to 0.5,1,2,5 (plus 0 for the bounded solution)
    #[arg(long, value_delimiter = ',')]
    radii: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
}

#[derive(Debug, Args)]
struct RieszArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum, default_value_t = Solution::Lieb)]
    which: Solution,
    #[arg(long, value_delimiter = ',', default_value = "0.5,1,2")]
    radii: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum IdentityKind {
    Commutativity,
    Orthogonality,
    Composite,
}

#[derive(Debug, Args)]
struct IdentityArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum, default_value_t = IdentityKind::Commutativity)]
    kind: IdentityKind,
    #[arg(long, value_enum, default_value_t = Solution::Lieb)]
    f: Solution,
    #[arg(long, value_enum, default_value_t = Solution::Lieb)]
    g: Solution,
    /// Multi-index as comma-separated orders, one per axis
    #[arg(long, value_delimiter = ',')]
    alpha: Option<Vec<u32>>,
    #[arg(long, value_delimiter = ',')]
    beta: Option<Vec<u32>>,
    /// Form such as "1.0*d1 + 2.0*d11" for the composite identities
    #[arg(long, allow_hyphen_values = true)]
    left_form: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    right_form: Option<String>,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, default_value_t = 1e-8)]
    zero_tol: f64,
}

#[derive(Debug, Args)]
struct CorollaryArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum RegularityCheck {
    Norm,
    KernelGrowth,
    Translation,
}

#[derive(Debug, Args)]
struct RegularityArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum, default_value_t = RegularityCheck::Norm)]
    check: RegularityCheck,
    #[arg(long, value_enum, default_value_t = Solution::Lieb)]
    which: Solution,
    #[arg(long, default_value_t = 2)]
    m: u32,
    /// Defaults to lambda
    #[arg(long, allow_hyphen_values = true)]
    nu: Option<f64>,
    /// The norm is taken on the ball of this radius
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    #[arg(long, default_value_t = 50)]
    samples: usize,
    #[arg(long, default_value_t = 1e-4)]
    step: f64,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum, default_value_t = Solution::Lieb)]
    which: Solution,
    #[arg(long, default_value_t = 1e6)]
    r_outer: f64,
    /// Blow-up threshold as a multiple of f(1)
    #[arg(long, default_value_t = 100.0)]
    threshold_factor: f64,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    a: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    b: f64,
    #[arg(long, default_value_t = 200)]
    grid_size: usize,
    #[arg(long, default_value_t = 2.0)]
    grading: f64,
    #[arg(long, default_value_t = 1000)]
    max_iters: usize,
    #[arg(long, default_value_t = 1e-8)]
    stop_tol: f64,
    #[arg(long, default_value_t = 1.0)]
    damping: f64,
    /// Constant initial guess
    #[arg(long, default_value_t = 1.0)]
    init: f64,
}

/// A failure that ends the run with a specific exit code.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Domain(_) => 2,
            _ => 1,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Runs the CLI on `argv` (program name first) and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with_io(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with_io<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<String> = argv
        .into_iter()
        .map(|a| a.into().to_string_lossy().into_owned())
        .collect();
    let args = match merge_config(args) {
        Ok(a) => a,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            return f.code;
        }
    };
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    2
                }
            };
        }
    };
    match dispatch(cli.command) {
        Ok((report, common)) => match emit(&report, &common, out) {
            Ok(()) => report.verdict.exit_code(),
            Err(f) => {
                let _ = writeln!(err, "error: {}", f.message);
                f.code
            }
        },
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

/// Inserts `--key value` pairs from the `--config` file right after the
/// subcommand, so that explicit flags (parsed later) take precedence. Keys
/// the subcommand does not define are skipped; keys no subcommand defines
/// are rejected.
fn merge_config(args: Vec<String>) -> CliResult<Vec<String>> {
    let mut path = None;
    for (i, a) in args.iter().enumerate() {
        if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        } else if a == "--config" {
            path = args.get(i + 1).cloned();
        }
    }
    let Some(path) = path else {
        return Ok(args);
    };
    let text = fs::read_to_string(&path).map_err(|e| Failure::usage(format!("cannot read config {path}: {e}")))?;
    let Some(sub_pos) = args.iter().skip(1).position(|a| !a.starts_with('-')).map(|p| p + 1) else {
        return Ok(args);
    };
    let command = Cli::command();
    let Some(sub) = command.find_subcommand(&args[sub_pos]) else {
        return Ok(args);
    };
    let known = |cmd: &clap::Command, key: &str| cmd.get_arguments().any(|a| a.get_long() == Some(key));
    let mut injected = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Failure::usage(format!("{path}:{}: expected key=value", lineno + 1)))?;
        let key = key.trim().replace('_', "-");
        let (key, value) = (key.as_str(), value.trim());
        if matches!(key, "config" | "out") {
            return Err(Failure::usage(format!(
                "{path}:{}: key {key} is not allowed in a config file",
                lineno + 1
            )));
        }
        if known(sub, key) {
            let flag = sub
                .get_arguments()
                .find(|a| a.get_long() == Some(key))
                .expect("checked above");
            let takes_value = flag.get_num_args().is_none_or(|r| r.takes_values());
            if takes_value {
                injected.push(format!("--{key}={value}"));
            } else if matches!(value, "true" | "1" | "yes") {
                injected.push(format!("--{key}"));
            }
        } else if !command.get_subcommands().any(|s| known(s, key)) {
            return Err(Failure::usage(format!("{path}:{}: unknown key {key}", lineno + 1)));
        }
    }
    let mut merged = args[..=sub_pos].to_vec();
    merged.extend(injected);
    merged.extend_from_slice(&args[sub_pos + 1..]);
    Ok(merged)
}

fn emit(report: &RunReport, common: &Common, out: &mut dyn Write) -> CliResult<()> {
    let text = to_json(report).map_err(|e| Failure {
        code: 1,
        message: format!("cannot serialize report: {e}"),
    })?;
    match &common.out {
        Some(path) => fs::write(path, text).map_err(|e| Failure {
            code: 1,
            message: format!("cannot write {path}: {e}"),
        }),
        None => out.write_all(text.as_bytes()).map_err(|e| Failure {
            code: 1,
            message: format!("cannot write report: {e}"),
        }),
    }
}

fn dispatch(command: Command) -> CliResult<(RunReport, Common)> {
    match command {
        Command::Constants(a) => constants(a),
        Command::VerifySolution(a) => verify(a),
        Command::Riesz(a) => riesz(a),
        Command::Identity(a) => identity(a),
        Command::Corollary(a) => corollary(a),
        Command::Regularity(a) => regularity(a),
        Command::Scan(a) => scan(a),
        Command::Solve(a) => solve(a),
    }
}

struct Context {
    params: Params,
    quad: QuadratureSpec,
}

impl Context {
    fn new(common: &Common) -> CliResult<Self> {
        let params = Params::new(common.n, common.lambda)?;
        let quad = QuadratureSpec::default().with_rel_tol(common.rel_tol);
        quad.validate()?;
        Ok(Self { params, quad })
    }

    fn profile(&self, which: Solution) -> CliResult<RadialProfile> {
        Ok(match which {
            Solution::Singular => singular_solution(&self.params),
            Solution::Lieb => lieb_solution(&self.params, &self.quad)?,
        })
    }

    #[allow(clippy::too_many_arguments)]
    fn report(
        &self,
        subcommand: &str,
        common: &Common,
        inputs: Value,
        results: Vec<Value>,
        verdict: Outcome,
        tolerances: Value,
        err_estimates: Vec<f64>,
    ) -> RunReport {
        RunReport {
            subcommand: subcommand.to_string(),
            params: ParamsSummary::from(&self.params),
            inputs: object(inputs),
            results,
            verdict,
            tolerances: object(tolerances),
            quadrature: QuadratureSummary {
                rel_tol: self.quad.rel_tol,
                err_estimates,
            },
            timestamp: (!common.no_timestamp).then(timestamp),
        }
    }
}

fn object(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => Map::new(),
    }
}

fn timestamp() -> String {
    let secs = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    format!("unix:{secs}")
}

fn value<T: Serialize>(v: &T) -> CliResult<Value> {
    serde_json::to_value(v).map_err(|e| Failure {
        code: 1,
        message: format!("cannot serialize result: {e}"),
    })
}

fn constants(a: ConstantsArgs) -> CliResult<(RunReport, Common)> {
    let ctx = Context::new(&a.common)?;
    let p = &ctx.params;
    let composition = riesz_power_constant(p.n(), p.lambda(), p.solution_exponent())?;
    let c = lieb_constant_c(p);
    let l = lieb_constant_l(p, &ctx.quad)?;
    let results = vec![
        json!({"name": "composition_constant", "mu": p.solution_exponent(), "value": composition}),
        json!({"name": "C", "value": c}),
        json!({"name": "L", "value": l}),
        json!({"name": "pm1", "value": p.pm1()}),
    ];
    let report = ctx.report(
        "constants",
        &a.common,
        json!({}),
        results,
        Outcome::Verified,
        json!({}),
        Vec::new(),
    );
    Ok((report, a.common))
}

fn verify(a: VerifyArgs) -> CliResult<(RunReport, Common)> {
    let ctx = Context::new(&a.common)?;
    let kinds: &[Solution] = match a.which {
        Which::Singular => &[Solution::Singular],
        Which::Lieb => &[Solution::Lieb],
        Which::Both => &[Solution::Singular, Solution::Lieb],
    };
    let mut results = Vec::new();
    let mut errs = Vec::new();
    let mut outcomes = Vec::new();
    for &kind in kinds {
        let radii = a.radii.clone().unwrap_or_else(|| match kind {
            Solution::Singular => vec![0.5, 1.0, 2.0, 5.0],
            Solution::Lieb => vec![0.0, 0.5, 1.0, 2.0, 5.0],
        });
        let f = ctx.profile(kind)?;
        match verify_solution(&f, &ctx.params, &radii, a.tol, &ctx.quad) {
            Ok(rep) => {
                errs.extend_from_slice(&rep.err_estimates);
                outcomes.push(Outcome::from(rep.verdict));
                let mut v = value(&rep)?;
                v["solution"] = value(&kind)?;
                v["amplitude"] = json!(f.amplitude());
                results.push(v);
            }
            Err(Error::ScreenRejected { location }) => {
                outcomes.push(Outcome::NotApplicable);
                results.push(json!({"solution": kind, "verdict": Verdict::NotApplicable, "screen": value(&location)?}));
            }
            Err(e) => return Err(e.into()),
        }
    }
    let report = ctx.report(
        "verify-solution",
        &a.common,
        json!({"which": a.which, "radii": a.radii}),
        results,
        Outcome::combine(outcomes),
        json!({"residual": a.tol}),
        errs,
    );
    Ok((report, a.common))
}

fn riesz(a: RieszArgs) -> CliResult<(RunReport, Common)> {
    let ctx = Context::new(&a.common)?;
    let f = ctx.profile(a.which)?;
    let mut results = Vec::new();
    let mut errs = Vec::new();
    let mut outcomes = Vec::new();
    for &r in &a.radii {
        match riesz_potential_radial(&f, &ctx.params, r, &ctx.quad) {
            Ok(est) => {
                errs.push(est.err_estimate);
                outcomes.push(Outcome::Verified);
                results.push(json!({"radius": r, "value": est.value, "err_estimate": est.err_estimate}));
            }
            Err(Error::ScreenRejected { location }) => {
                outcomes.push(Outcome::NotApplicable);
                results.push(json!({"radius": r, "verdict": Verdict::NotApplicable, "screen": value(&location)?}));
            }
            Err(e) => return Err(e.into()),
        }
    }
    let report = ctx.report(
        "riesz",
        &a.common,
        json!({"which": a.which, "radii": a.radii}),
        results,
        Outcome::combine(outcomes),
        json!({}),
        errs,
    );
    Ok((report, a.common))
}

fn multi_index(v: &Option<Vec<u32>>, n: u32, name: &str) -> CliResult<MultiIndex> {
    match v {
        None => Ok(MultiIndex::zero(n as usize)),
        Some(c) if c.len() == n as usize => Ok(MultiIndex::new(c.clone())),
        Some(c) => Err(Failure::usage(format!(
            "--{name} needs {n} components, got {}",
            c.len()
        ))),
    }
}

fn identity_results(reports: &[IdentityReport]) -> CliResult<(Vec<Value>, Vec<f64>, Outcome)> {
    let mut results = Vec::new();
    let mut errs = Vec::new();
    for r in reports {
        results.push(value(r)?);
        errs.push(r.err_estimate);
    }
    let outcome = Outcome::combine(reports.iter().map(|r| Outcome::from(r.verdict)));
    Ok((results, errs, outcome))
}

fn identity(a: IdentityArgs) -> CliResult<(RunReport, Common)> {
    let ctx = Context::new(&a.common)?;
    let n = ctx.params.n();
    let tol = IdentityTolerances {
        equality: a.tol,
        zero: a.zero_tol,
        ..IdentityTolerances::default()
    };
    let f = ctx.profile(a.f)?;
    let g = ctx.profile(a.g)?;
    let reports = match a.kind {
        IdentityKind::Commutativity => {
            let alpha = multi_index(&a.alpha, n, "alpha")?;
            let beta = multi_index(&a.beta, n, "beta")?;
            vec![check_commutativity(
                &f,
                &g,
                &alpha,
                &beta,
                &ctx.params,
                &ctx.quad,
                &tol,
            )?]
        }
        IdentityKind::Orthogonality => {
            let alpha = multi_index(&a.alpha, n, "alpha")?;
            let beta = multi_index(&a.beta, n, "beta")?;
            vec![check_orthogonality(&f, &alpha, &beta, &ctx.params, &ctx.quad, &tol)?]
        }
        IdentityKind::Composite => {
            let left = a
                .left_form
                .as_deref()
                .ok_or_else(|| Failure::usage("composite identities need --left-form"))?;
            let right = a.right_form.as_deref().unwrap_or(left);
            let lam = DifferentialForm::parse(left, n as usize)?;
            let om = DifferentialForm::parse(right, n as usize)?;
            check_composite(&f, &g, &lam, &om, &ctx.params, &ctx.quad, &tol)?
        }
    };
    let (results, errs, outcome) = identity_results(&reports)?;
    let inputs = json!({
        "kind": a.kind, "f": a.f, "g": a.g, "alpha": a.alpha, "beta": a.beta,
        "left_form": a.left_form, "right_form": a.right_form,
    });
    let report = ctx.report(
        "identity",
        &a.common,
        inputs,
        results,
        outcome,
        json!({"equality": tol.equality, "zero": tol.zero, "abs_floor": tol.abs_floor}),
        errs,
    );
    Ok((report, a.common))
}

fn corollary(a: CorollaryArgs) -> CliResult<(RunReport, Common)> {
    let ctx = Context::new(&a.common)?;
    let tol = IdentityTolerances {
        equality: a.tol,
        ..IdentityTolerances::default()
    };
    let rep = check_corollary(&ctx.params, &ctx.quad, &tol)?;
    let (lhs, rhs) = corollary_closed_form(&ctx.params, &ctx.quad)?;
    let (mut results, errs, outcome) = identity_results(std::slice::from_ref(&rep))?;
    results.push(json!({"closed_form_lhs": lhs, "closed_form_rhs": rhs}));
    let report = ctx.report(
        "corollary",
        &a.common,
        json!({}),
        results,
        outcome,
        json!({"equality": a.tol}),
        errs,
    );
    Ok((report, a.common))
}

fn regularity(a: RegularityArgs) -> CliResult<(RunReport, Common)> {
    let ctx = Context::new(&a.common)?;
    let (result, outcome, inputs) = match a.check {
        RegularityCheck::Norm => {
            let nu = a.nu.unwrap_or(ctx.params.lambda());
            let g = Domain1D::ball(ctx.params.n(), a.radius)?;
            let f = ctx.profile(a.which)?;
            let schedule = match a.which {
                Solution::Singular => GridSchedule::default().with_focus(vec![0.0]),
                Solution::Lieb => GridSchedule::default(),
            };
            let field = RadialField::new(f, ctx.params.n() as usize);
            let res = weighted_norm(&field, a.m, nu, &g, &schedule)?;
            let outcome = if res.unbounded {
                Outcome::Refuted
            } else {
                Outcome::Verified
            };
            (
                value(&res)?,
                outcome,
                json!({"check": a.check, "which": a.which, "m": a.m, "nu": nu, "radius": a.radius}),
            )
        }
        RegularityCheck::KernelGrowth => {
            let res = kernel_growth_check(&ctx.params, a.m, a.samples)?;
            let worst = res.orders.iter().map(|o| o.max_rel_deviation).fold(0.0, f64::max);
            let ok = worst <= a.tol && res.u_derivative_max == 0.0 && res.translation_derivative_max == 0.0;
            let outcome = if ok { Outcome::Verified } else { Outcome::Refuted };
            (
                value(&res)?,
                outcome,
                json!({"check": a.check, "m": a.m, "samples": a.samples}),
            )
        }
        RegularityCheck::Translation => {
            let points = translation_samples(ctx.params.n() as usize, a.samples);
            let max_abs = translation_annihilation_check(&ctx.params, &points, a.step)?;
            let outcome = if max_abs <= a.tol {
                Outcome::Verified
            } else {
                Outcome::Refuted
            };
            (
                json!({"max_abs": max_abs, "sample_count": points.len()}),
                outcome,
                json!({"check": a.check, "samples": a.samples, "step": a.step}),
            )
        }
    };
    let report = ctx.report(
        "regularity",
        &a.common,
        inputs,
        vec![result],
        outcome,
        json!({"tol": a.tol}),
        Vec::new(),
    );
    Ok((report, a.common))
}

/// Deterministic pairs in [−1, 1]ⁿ with 0.5 ≤ |x−y| ≤ 2.
pub fn translation_samples(dim: usize, count: usize) -> Vec<(Vec<f64>, Vec<f64>)> {
    // additive recurrence with generalized golden ratios
    let alphas: Vec<f64> = (1..=2 * dim).map(|k| (1.0 + k as f64).sqrt().fract()).collect();
    let mut out = Vec::with_capacity(count);
    let mut i = 1u64;
    while out.len() < count {
        let coords: Vec<f64> = alphas.iter().map(|a| 2.0 * (i as f64 * a).fract() - 1.0).collect();
        let (x, y) = coords.split_at(dim);
        let d = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        if (0.5..=2.0).contains(&d) {
            out.push((x.to_vec(), y.to_vec()));
        }
        i += 1;
    }
    out
}

fn scan(a: ScanArgs) -> CliResult<(RunReport, Common)> {
    let ctx = Context::new(&a.common)?;
    let f = ctx.profile(a.which)?;
    let threshold = a.threshold_factor * f.value(1.0);
    let rep = decay_singularity_scan(&|r| f.value(r), a.r_outer, threshold, &ScanOptions::default())?;
    let outcome = if rep.decay_verified {
        Outcome::Verified
    } else {
        Outcome::Refuted
    };
    let report = ctx.report(
        "scan",
        &a.common,
        json!({"which": a.which, "r_outer": a.r_outer, "threshold_factor": a.threshold_factor}),
        vec![value(&rep)?],
        outcome,
        json!({"decay_rel": ScanOptions::default().decay_rel, "blowup_threshold": threshold}),
        Vec::new(),
    );
    Ok((report, a.common))
}

fn solve(a: SolveArgs) -> CliResult<(RunReport, Common)> {
    let ctx = Context::new(&a.common)?;
    let g = Domain1D::interval(a.a, a.b)?;
    let config = SolverConfig::new(g, ctx.params.lambda())
        .with_grid_size(a.grid_size)
        .with_grading_exponent(a.grading)
        .with_max_iters(a.max_iters)
        .with_stop_tol(a.stop_tol)
        .with_damping(a.damping);
    let inputs = json!({
        "a": a.a, "b": a.b, "grid_size": a.grid_size, "grading": a.grading,
        "max_iters": a.max_iters, "damping": a.damping, "init": a.init,
    });
    let tolerances = json!({"stop_tol": a.stop_tol});
    let (results, outcome) = match picard_solve(&config, &ctx.params, &InitialGuess::Constant(a.init)) {
        Ok((sol, trace)) => {
            let outcome = if trace.converged {
                Outcome::Verified
            } else {
                Outcome::Inconclusive
            };
            let result = json!({
                "converged": trace.converged,
                "iterations": trace.iterations,
                "final_residual": trace.residuals.last(),
                "final_step_change": trace.step_changes.last(),
                "sup": sol.sup(),
                "nodes": sol.nodes(),
                "values": sol.values(),
                "residuals": trace.residuals,
            });
            (vec![result], outcome)
        }
        Err(e @ (Error::Diverged { .. } | Error::NonPositive { .. })) => (
            vec![json!({"converged": false, "failure": e.to_string()})],
            Outcome::Diverged,
        ),
        Err(e) => return Err(e.into()),
    };
    let report = ctx.report("solve", &a.common, inputs, results, outcome, tolerances, Vec::new());
    Ok((report, a.common))
}
