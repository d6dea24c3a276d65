//! `run`, `study` and `verify` subcommands.
//!
//! Every config key is also a flag of the same name; flags override values
//! read from `--config`. [`parse_args`] validates the merged config, and
//! [`execute`] returns the process exit status.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::diagnostics::{
    entropy_budget_with, entropy_inequality_check, residuals, theorem_bound_check, ResidualFn,
    IDENTITY_TOLERANCE,
};
use crate::error::{Error, Result};
use crate::harness::{
    convergence_study, parse_eps_list, run_pair_with, write_run_outputs, write_study, RunConfig,
    RunOptions, REFERENCE_EPS_LIST,
};
use crate::model::{CellField, Grid};
use crate::sampling::random_smooth_pair;
use crate::schemes::{semi_discrete_dt, semi_discrete_step, HyperbolicState, SchemeKind};

/// Random state pairs drawn by `verify --check identity`.
pub const IDENTITY_SAMPLES: usize = 100;
const IDENTITY_SEED: u64 = 20_240_611;
/// Allowed growth of `max(budget)^+ / dx` under one grid refinement.
const INEQUALITY_GROWTH: f64 = 1.1;

#[derive(Debug, Parser)]
#[command(
    name = "jinxin",
    version,
    about = "Relaxation system vs. diffusive limit: paired runs, eps sweeps, entropy checks"
)]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Debug, Subcommand)]
enum CliCommand {
    /// One paired run; writes profiles and the error series.
    Run(ConfigArgs),
    /// Paired runs over an eps sweep; writes the study file with the fitted rate.
    Study(StudyArgs),
    /// Entropy-identity, residual, bound and entropy-inequality checks.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct ConfigArgs {
    /// Flat `key = value` file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long = "out-dir")]
    out_dir: Option<PathBuf>,
    /// Relaxation parameter.
    #[arg(long)]
    eps: Option<String>,
    /// Characteristic speed.
    #[arg(long)]
    lambda: Option<String>,
    /// Transport coefficient of the linear flux.
    #[arg(long)]
    a: Option<String>,
    /// linear | burgers
    #[arg(long)]
    flux: Option<String>,
    /// Number of cells.
    #[arg(long = "n_cells", visible_alias = "nx")]
    n_cells: Option<String>,
    /// Left end of the domain.
    #[arg(long = "x_min")]
    x_min: Option<String>,
    /// Right end of the domain.
    #[arg(long = "x_max")]
    x_max: Option<String>,
    /// CFL factor in (0, 1].
    #[arg(long)]
    cfl: Option<String>,
    /// Final time.
    #[arg(long = "t_final", visible_alias = "tfinal")]
    t_final: Option<String>,
    /// State left of the jump.
    #[arg(long = "u_left")]
    u_left: Option<String>,
    /// State right of the jump.
    #[arg(long = "u_right")]
    u_right: Option<String>,
    /// true | false; bare flag means true.
    #[arg(long = "well_prepared", num_args = 0..=1, default_missing_value = "true")]
    well_prepared: Option<String>,
    /// jpt | semi-discrete
    #[arg(long)]
    scheme: Option<String>,
    /// Profile dump stride in steps (0: first and last level only).
    #[arg(long = "record_every")]
    record_every: Option<String>,
}

#[derive(Debug, Args)]
struct StudyArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// Comma-separated, strictly decreasing eps values.
    #[arg(long = "eps-list")]
    eps_list: Option<String>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// Which check to run; identity/residuals/theorem use the semi-discrete scheme.
    #[arg(long, value_enum, default_value_t = Check::All)]
    check: Check,
}

/// Which `verify` checks to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Check {
    Identity,
    Residuals,
    Theorem,
    #[value(name = "entropy-ineq")]
    EntropyIneq,
    All,
}

impl Check {
    fn expand(self) -> Vec<Check> {
        match self {
            Check::All => vec![
                Check::Identity,
                Check::Residuals,
                Check::Theorem,
                Check::EntropyIneq,
            ],
            one => vec![one],
        }
    }

    fn name(self) -> &'static str {
        match self {
            Check::Identity => "identity",
            Check::Residuals => "residuals",
            Check::Theorem => "theorem",
            Check::EntropyIneq => "entropy-ineq",
            Check::All => "all",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Run(RunConfig),
    Study(RunConfig, Vec<f64>),
    Verify(RunConfig, Check),
}

impl ConfigArgs {
    fn into_config(self) -> Result<RunConfig> {
        let mut config = match &self.config {
            Some(path) => RunConfig::from_config_file(path)?,
            None => RunConfig::default(),
        };
        let overrides = [
            ("eps", self.eps),
            ("lambda", self.lambda),
            ("a", self.a),
            ("flux", self.flux),
            ("n_cells", self.n_cells),
            ("x_min", self.x_min),
            ("x_max", self.x_max),
            ("cfl", self.cfl),
            ("t_final", self.t_final),
            ("u_left", self.u_left),
            ("u_right", self.u_right),
            ("well_prepared", self.well_prepared),
            ("scheme", self.scheme),
            ("record_every", self.record_every),
        ];
        for (key, value) in overrides {
            if let Some(value) = value {
                config
                    .set(key, &value)
                    .map_err(|e| Error::Config(format!("--{key}: {e}")))?;
            }
        }
        config.out_dir = self.out_dir;
        Ok(config)
    }
}

/// Why `argv` did not produce a [`Command`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub message: String,
    /// `--help` or `--version`: print to stdout and exit 0.
    pub informational: bool,
}

impl ParseError {
    fn invalid(message: impl Into<String>) -> Self {
        ParseError {
            message: message.into(),
            informational: false,
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.informational {
            0
        } else {
            2
        }
    }
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.message.trim_end())
    }
}

/// Parses `argv` (program name first), merges the config file and flags,
/// and validates the result.
pub fn parse_args<I, T>(argv: I) -> std::result::Result<Command, ParseError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    use clap::error::ErrorKind;
    let cli = Cli::try_parse_from(argv).map_err(|e| ParseError {
        informational: matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion),
        message: e.render().to_string(),
    })?;
    let invalid = |e: Error| ParseError::invalid(e.to_string());
    let command = match cli.command {
        CliCommand::Run(args) => Command::Run(args.into_config().map_err(invalid)?),
        CliCommand::Study(args) => {
            let eps = match &args.eps_list {
                Some(text) => parse_eps_list(text)
                    .map_err(|e| ParseError::invalid(format!("--eps-list: {e}")))?,
                None => REFERENCE_EPS_LIST.to_vec(),
            };
            Command::Study(args.config.into_config().map_err(invalid)?, eps)
        }
        CliCommand::Verify(args) => {
            Command::Verify(args.config.into_config().map_err(invalid)?, args.check)
        }
    };
    let config = match &command {
        Command::Run(c) | Command::Study(c, _) | Command::Verify(c, _) => c,
    };
    config.validate().map_err(invalid)?;
    Ok(command)
}

/// Full help text of one subcommand (or the top level for `None`).
pub fn help_text(subcommand: Option<&str>) -> String {
    use clap::CommandFactory;
    let mut cmd = Cli::command();
    match subcommand {
        Some(name) => cmd
            .find_subcommand_mut(name)
            .map(|c| c.render_long_help().to_string())
            .unwrap_or_default(),
        None => cmd.render_long_help().to_string(),
    }
}

/// Test seams for [`execute_with`].
#[derive(Debug, Clone, Copy)]
pub struct Hooks {
    pub residual_fn: ResidualFn,
}

impl Default for Hooks {
    fn default() -> Self {
        Hooks {
            residual_fn: residuals,
        }
    }
}

pub fn execute(cmd: &Command) -> i32 {
    execute_with(cmd, Hooks::default())
}

pub fn execute_with(cmd: &Command, hooks: Hooks) -> i32 {
    let outcome = match cmd {
        Command::Run(config) => execute_run(config),
        Command::Study(config, eps) => execute_study(config, eps),
        Command::Verify(config, check) => execute_verify(config, *check, hooks),
    };
    match outcome {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

/// Parses and executes; usage errors exit with status 2.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match parse_args(argv) {
        Ok(cmd) => execute(&cmd),
        Err(e) if e.informational => {
            println!("{e}");
            0
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

fn out_dir(config: &RunConfig) -> PathBuf {
    config
        .out_dir
        .clone()
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn execute_run(config: &RunConfig) -> Result<bool> {
    let run = run_pair_with(config, RunOptions::default())?;
    if let Some(w) = &run.boundary_warning {
        eprintln!("warning: {w}");
    }
    println!(
        "{} flux, scheme {}, eps = {:e}, {} cells, {} steps of dt = {:e}",
        config.params.flux.name(),
        config.scheme.name(),
        config.params.eps,
        run.grid.n_cells,
        run.step.n_steps,
        run.step.dt
    );
    println!("l2err_sq = {:.6e}", run.l2err_sq);
    if let Some(phi) = run.series.sup_phi {
        println!("sup phi = {phi:.6e}");
    }
    if let Some((mh, ml)) = run.mass {
        println!(
            "mass balance defect: relaxation {:.3e}, limit {:.3e}",
            mh.relative_defect(),
            ml.relative_defect()
        );
    }
    if let Some(b) = &run.budget {
        println!(
            "entropy identity mismatch {:.3e}, residual estimate failures {}/{}",
            b.max_identity_mismatch, b.residual_failures, b.levels_checked
        );
    }
    let written = write_run_outputs(&out_dir(config), &run)?;
    println!(
        "wrote {} files to {}",
        written.len(),
        out_dir(config).display()
    );
    Ok(true)
}

fn execute_study(config: &RunConfig, eps: &[f64]) -> Result<bool> {
    let study = convergence_study(config, eps)?;
    println!("{:>12} {:>8} {:>14}", "eps", "n_cells", "l2err_sq");
    for p in &study.points {
        match &p.outcome {
            Ok(err) => println!("{:>12.4e} {:>8} {:>14.6e}", p.eps, p.n_cells, err),
            Err(msg) => println!("{:>12.4e} {:>8} failed: {msg}", p.eps, p.n_cells),
        }
    }
    match study.fit {
        Some(fit) => println!("slope = {:.4}, intercept = {:.4}", fit.slope, fit.intercept),
        None => println!("slope unavailable (fewer than two successful runs)"),
    }
    let path = out_dir(config).join("study.csv");
    write_study(&path, &study)?;
    println!("wrote {}", path.display());
    Ok(study.fit.is_some() && study.failures().next().is_none())
}

fn report(check: Check, passed: bool, detail: String) -> bool {
    println!(
        "{} {}: {detail}",
        if passed { "PASS" } else { "FAIL" },
        check.name()
    );
    passed
}

fn execute_verify(config: &RunConfig, check: Check, hooks: Hooks) -> Result<bool> {
    let mut all = true;
    for one in check.expand() {
        let passed = match one {
            Check::Identity => verify_identity(config, hooks)?,
            Check::Residuals => verify_residuals(config, hooks)?,
            Check::Theorem => verify_theorem(config)?,
            Check::EntropyIneq => verify_entropy_inequality(config)?,
            Check::All => unreachable!("expanded above"),
        };
        all &= passed;
    }
    Ok(all)
}

fn verify_identity(config: &RunConfig, hooks: Hooks) -> Result<bool> {
    let grid = config.grid()?;
    let mut rng = ChaCha8Rng::seed_from_u64(IDENTITY_SEED);
    let mut worst = 0.0f64;
    for _ in 0..IDENTITY_SAMPLES {
        let (h, l) = random_smooth_pair(&config.params, &grid, &mut rng);
        let budget = entropy_budget_with(&config.params, &grid, &h, &l, hooks.residual_fn)?;
        worst = worst.max(budget.max_relative_mismatch());
    }
    Ok(report(
        Check::Identity,
        worst <= IDENTITY_TOLERANCE,
        format!("max relative mismatch {worst:.3e} over {IDENTITY_SAMPLES} random pairs (tolerance {IDENTITY_TOLERANCE:e})"),
    ))
}

fn semi_discrete(config: &RunConfig) -> RunConfig {
    RunConfig {
        scheme: SchemeKind::SemiDiscrete,
        ..config.clone()
    }
}

fn verify_residuals(config: &RunConfig, hooks: Hooks) -> Result<bool> {
    let options = RunOptions {
        residual_fn: hooks.residual_fn,
        ..RunOptions::lean()
    };
    let run = run_pair_with(
        &semi_discrete(config),
        RunOptions {
            check_budget: true,
            ..options
        },
    )?;
    let budget = run.budget.ok_or(Error::NonlinearEntropy)?;
    let worst = budget
        .final_report
        .estimates
        .iter()
        .map(|e| format!("{} margin {:.3e}", e.name, e.margin))
        .collect::<Vec<_>>()
        .join("; ");
    Ok(report(
        Check::Residuals,
        budget.residual_failures == 0,
        format!(
            "{} of {} levels failed; at T: {worst}",
            budget.residual_failures, budget.levels_checked
        ),
    ))
}

fn verify_theorem(config: &RunConfig) -> Result<bool> {
    let run = run_pair_with(
        &semi_discrete(config),
        RunOptions {
            check_budget: false,
            ..RunOptions::lean()
        },
    )?;
    let check = theorem_bound_check(&run.series, &config.params, &run.grid)?;
    Ok(report(
        Check::Theorem,
        check.satisfied,
        format!(
            "sup phi {:.4e} <= phi(0) + B eps^4 = {:.4e} (B = {:.4e}, margin {:.3e})",
            check.sup_phi, check.bound, check.b_meas, check.margin
        ),
    ))
}

/// Smooth front from `u_left` to `u_right` at the domain midpoint.
fn smooth_front(config: &RunConfig, grid: &Grid) -> HyperbolicState {
    let width = 0.1 * grid.length();
    let mid = grid.midpoint();
    let (ul, ur) = (config.u_left, config.u_right);
    let u = CellField::from_fn(grid, |x| {
        0.5 * (ul + ur) - 0.5 * (ul - ur) * ((x - mid) / width).tanh()
    });
    let v = u.map(|x| config.params.flux_eval(x));
    HyperbolicState { u, v, t: 0.0 }
}

fn inequality_constant(config: &RunConfig, n_cells: usize) -> Result<(f64, f64)> {
    let p = config.params;
    let grid = Grid::uniform(n_cells, config.x_min, config.x_max)?;
    let step = semi_discrete_dt(&p, &grid);
    let mut h = smooth_front(config, &grid);
    let mut trajectory = Vec::with_capacity(step.n_steps + 1);
    trajectory.push(h.clone());
    for _ in 0..step.n_steps {
        h = semi_discrete_step(&p, &grid, &h, step.dt)?;
        trajectory.push(h.clone());
    }
    let r = entropy_inequality_check(&p, &grid, &trajectory)?;
    Ok((r.max_positive, r.constant))
}

fn verify_entropy_inequality(config: &RunConfig) -> Result<bool> {
    let coarse = config.n_cells.max(3);
    let (pos_c, const_c) = inequality_constant(config, coarse)?;
    let (pos_f, const_f) = inequality_constant(config, 2 * coarse)?;
    let passed = const_f <= INEQUALITY_GROWTH * const_c || pos_f <= f64::EPSILON;
    Ok(report(
        Check::EntropyIneq,
        passed,
        format!(
            "max positive budget {pos_c:.3e} -> {pos_f:.3e} on refinement; C = {const_c:.3} -> {const_f:.3}"
        ),
    ))
}
