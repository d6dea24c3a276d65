//! Paired runs, `eps` sweeps, rate fits and CSV output.
//!
//! A run advances a relaxation solution and a limit solution from the same
//! Riemann data with the same time steps and records their distance. A
//! study repeats the run over a list of `eps` values and fits
//! `log(error) = slope * log(eps) + intercept`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::diagnostics::{
    entropy_budget_with, residual_sign_checks, residuals, ErrorSeries, ResidualFn,
    ResidualIntegrals, ResidualReport, SeriesRecorder,
};
use crate::error::{Error, Result};
use crate::model::{check_subcharacteristic, riemann_initial, FluxKind, Grid, ModelParams};
use crate::schemes::{HyperbolicState, LimitState, SchemeKind, StepSize};

/// The `eps` sweep of the reference study.
pub const REFERENCE_EPS_LIST: [f64; 7] = [1e-1, 5e-2, 2.5e-2, 1.25e-2, 6.25e-3, 3.125e-3, 1.5e-3];

/// Coarsest grid used by a study.
pub const MIN_STUDY_CELLS: usize = 200;

/// Keys accepted in a config file, in file order.
pub const CONFIG_KEYS: [&str; 14] = [
    "eps",
    "lambda",
    "a",
    "flux",
    "n_cells",
    "x_min",
    "x_max",
    "cfl",
    "t_final",
    "u_left",
    "u_right",
    "well_prepared",
    "scheme",
    "record_every",
];

/// Everything needed to reproduce one paired run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: ModelParams,
    pub n_cells: usize,
    pub x_min: f64,
    pub x_max: f64,
    pub u_left: f64,
    pub u_right: f64,
    /// Start the relaxation solution on the discrete closure instead of `v = f(u)`.
    pub well_prepared: bool,
    pub scheme: SchemeKind,
    /// Profile dump stride in steps; 0 dumps only the first and last level.
    pub record_every: usize,
    pub out_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    /// Linear flux, `eps = 1`, `lambda = 0.72`, `a = 0.5`, 200 cells on
    /// `[0, 1]`, data `2 -> 1`, CFL 0.95, `T = 0.1`.
    fn default() -> Self {
        RunConfig {
            params: ModelParams::linear(1.0, 0.72, 0.5),
            n_cells: 200,
            x_min: 0.0,
            x_max: 1.0,
            u_left: 2.0,
            u_right: 1.0,
            well_prepared: false,
            scheme: SchemeKind::Jpt,
            record_every: 0,
            out_dir: None,
        }
    }
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("invalid value `{}` for `{key}`", value.trim())))
}

pub fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.trim().to_ascii_lowercase().as_str() {
        "true" | "1" | "yes" | "on" => Ok(true),
        "false" | "0" | "no" | "off" => Ok(false),
        other => Err(Error::Config(format!(
            "invalid value `{other}` for `{key}`"
        ))),
    }
}

/// Parses `1e-1,5e-2,...`.
pub fn parse_eps_list(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse_value("eps-list", s))
        .collect()
}

impl RunConfig {
    /// Sets one config key. Unknown keys are rejected.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "eps" => self.params.eps = parse_value(key, value)?,
            "lambda" => self.params.lambda = parse_value(key, value)?,
            "a" => self.params.a = parse_value(key, value)?,
            "flux" => self.params.flux = value.parse::<FluxKind>()?,
            "n_cells" => self.n_cells = parse_value(key, value)?,
            "x_min" => self.x_min = parse_value(key, value)?,
            "x_max" => self.x_max = parse_value(key, value)?,
            "cfl" => self.params.cfl = parse_value(key, value)?,
            "t_final" => self.params.t_final = parse_value(key, value)?,
            "u_left" => self.u_left = parse_value(key, value)?,
            "u_right" => self.u_right = parse_value(key, value)?,
            "well_prepared" => self.well_prepared = parse_bool(key, value)?,
            "scheme" => self.scheme = value.parse::<SchemeKind>()?,
            "record_every" => self.record_every = parse_value(key, value)?,
            other => return Err(Error::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    /// Applies `key = value` lines on top of `self`. `#` starts a comment.
    pub fn apply_config_text(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            self.set(key.trim(), value)
                .map_err(|e| Error::Config(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(())
    }

    pub fn from_config_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut config = RunConfig::default();
        config.apply_config_text(&text)?;
        Ok(config)
    }

    /// Serializes every key in [`CONFIG_KEYS`] order.
    pub fn to_config_text(&self) -> String {
        let p = &self.params;
        let mut out = String::new();
        let _ = writeln!(out, "eps = {:e}", p.eps);
        let _ = writeln!(out, "lambda = {}", p.lambda);
        let _ = writeln!(out, "a = {}", p.a);
        let _ = writeln!(out, "flux = {}", p.flux.name());
        let _ = writeln!(out, "n_cells = {}", self.n_cells);
        let _ = writeln!(out, "x_min = {}", self.x_min);
        let _ = writeln!(out, "x_max = {}", self.x_max);
        let _ = writeln!(out, "cfl = {}", p.cfl);
        let _ = writeln!(out, "t_final = {}", p.t_final);
        let _ = writeln!(out, "u_left = {}", self.u_left);
        let _ = writeln!(out, "u_right = {}", self.u_right);
        let _ = writeln!(out, "well_prepared = {}", self.well_prepared);
        let _ = writeln!(out, "scheme = {}", self.scheme.name());
        let _ = writeln!(out, "record_every = {}", self.record_every);
        out
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::uniform(self.n_cells, self.x_min, self.x_max)
    }

    /// Parameter sanity plus the subcharacteristic condition; for Burgers
    /// the bound uses `max(|u_left|, |u_right|)`.
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.grid()?;
        if !(self.u_left.is_finite() && self.u_right.is_finite()) {
            return Err(Error::InvalidParameter(
                "initial states must be finite".into(),
            ));
        }
        let max_abs_u = self.u_left.abs().max(self.u_right.abs());
        if !check_subcharacteristic(&self.params, max_abs_u) {
            return Err(Error::Subcharacteristic {
                lambda: self.params.lambda,
                bound: self.params.subcharacteristic_bound(max_abs_u),
            });
        }
        Ok(())
    }

    /// `Some(message)` when a wave of speed `lambda` can reach a boundary
    /// before `t_final`.
    pub fn boundary_warning(&self) -> Option<String> {
        let mid = 0.5 * (self.x_min + self.x_max);
        let distance = (mid - self.x_min).min(self.x_max - mid);
        let reach = self.params.lambda * self.params.t_final;
        (reach >= distance).then(|| {
            format!("lambda * t_final = {reach} reaches a boundary {distance} away from the jump")
        })
    }
}

/// Mass `sum_i u_i dx` against the inflow through the two boundary faces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassBalance {
    pub initial: f64,
    pub final_mass: f64,
    /// `int (F_left - F_right) dt`.
    pub boundary_inflow: f64,
}

impl MassBalance {
    fn new(mass: f64) -> Self {
        MassBalance {
            initial: mass,
            final_mass: mass,
            boundary_inflow: 0.0,
        }
    }

    /// `|M(T) - M(0) - inflow| / max(1, |M(0)|)`.
    pub fn relative_defect(&self) -> f64 {
        (self.final_mass - self.initial - self.boundary_inflow).abs() / self.initial.abs().max(1.0)
    }
}

/// Identity and residual-estimate results along a semi-discrete run.
#[derive(Debug, Clone, PartialEq)]
pub struct BudgetSummary {
    /// Worst mismatch of the evolution law over all levels, relative to the
    /// largest term on the grid at that level.
    pub max_identity_mismatch: f64,
    /// Levels at which some residual estimate failed.
    pub residual_failures: usize,
    pub levels_checked: usize,
    /// Report on the integrals over the whole run.
    pub final_report: ResidualReport,
}

impl BudgetSummary {
    pub fn passed(&self) -> bool {
        self.max_identity_mismatch <= crate::diagnostics::IDENTITY_TOLERANCE
            && self.residual_failures == 0
    }
}

/// State of both solutions at one time level.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub step: usize,
    pub hyperbolic: HyperbolicState,
    pub limit: LimitState,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub config: RunConfig,
    pub grid: Grid,
    pub step: StepSize,
    pub series: ErrorSeries,
    /// Profile dumps at the configured stride, always including both ends.
    pub snapshots: Vec<Snapshot>,
    pub l2err_sq: f64,
    /// Semi-discrete scheme with linear flux only.
    pub budget: Option<BudgetSummary>,
    /// Splitting scheme only, where the boundary flux is explicit.
    pub mass: Option<(MassBalance, MassBalance)>,
    pub boundary_warning: Option<String>,
}

impl RunOutcome {
    pub fn final_state(&self) -> &Snapshot {
        self.snapshots
            .last()
            .expect("a run always keeps its last level")
    }
}

/// Recording options of [`run_pair_with`].
#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    /// Keep every `series_stride`-th series row.
    pub series_stride: usize,
    /// Keep profile snapshots at `record_every`.
    pub keep_profiles: bool,
    /// Evaluate the entropy budget along semi-discrete linear runs.
    pub check_budget: bool,
    pub residual_fn: ResidualFn,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            series_stride: 1,
            keep_profiles: true,
            check_budget: true,
            residual_fn: residuals,
        }
    }
}

impl RunOptions {
    /// Only the accumulated error; used by studies.
    pub fn lean() -> Self {
        RunOptions {
            series_stride: usize::MAX,
            keep_profiles: false,
            check_budget: false,
            residual_fn: residuals,
        }
    }
}

pub fn run_pair(config: &RunConfig) -> Result<RunOutcome> {
    run_pair_with(config, RunOptions::default())
}

fn boundary_inflow(v: &[f64]) -> f64 {
    v[0] - v[v.len() - 1]
}

pub fn run_pair_with(config: &RunConfig, options: RunOptions) -> Result<RunOutcome> {
    config.validate()?;
    let p = config.params;
    let grid = config.grid()?;
    let step = config.scheme.step_size(&p, &grid);
    let (mut h, mut l) = riemann_initial(
        &p,
        &grid,
        config.u_left,
        config.u_right,
        config.well_prepared,
    );

    let mut recorder = SeriesRecorder::with_stride(options.series_stride);
    let track_budget = options.check_budget
        && config.scheme == SchemeKind::SemiDiscrete
        && p.flux == FluxKind::Linear;
    let mut integrals = ResidualIntegrals::default();
    let mut max_identity_mismatch = 0.0f64;
    let mut residual_failures = 0;
    let mut levels_checked = 0;
    let mut mass = (config.scheme == SchemeKind::Jpt).then(|| {
        (
            MassBalance::new(h.u.integral(grid.dx)),
            MassBalance::new(l.ubar.integral(grid.dx)),
        )
    });
    let mut snapshots = Vec::new();
    let dump = |n: usize| config.record_every > 0 && n.is_multiple_of(config.record_every);

    for n in 0..step.n_steps {
        if options.keep_profiles && (n == 0 || dump(n)) {
            snapshots.push(Snapshot {
                step: n,
                hyperbolic: h.clone(),
                limit: l.clone(),
            });
        }
        recorder.record(&p, &grid, &h, &l, Some(step.dt))?;
        if track_budget {
            let budget = entropy_budget_with(&p, &grid, &h, &l, options.residual_fn)?;
            max_identity_mismatch =
                max_identity_mismatch.max(budget.max_global_relative_mismatch());
            integrals.accumulate_with(&p, &grid, &h, &l, step.dt, options.residual_fn)?;
            levels_checked += 1;
            if !residual_sign_checks(&p, &grid, &integrals).passed() {
                residual_failures += 1;
            }
        }
        if let Some((mh, ml)) = mass.as_mut() {
            mh.boundary_inflow += step.dt * boundary_inflow(&h.v);
            ml.boundary_inflow += step.dt * boundary_inflow(&l.vbar);
        }
        let (next_h, next_l) = config.scheme.advance(&p, &grid, &h, &l, step.dt)?;
        h = next_h;
        l = next_l;
    }
    recorder.record(&p, &grid, &h, &l, None)?;
    if let Some((mh, ml)) = mass.as_mut() {
        mh.final_mass = h.u.integral(grid.dx);
        ml.final_mass = l.ubar.integral(grid.dx);
    }
    let series = recorder.finish();
    let l2err_sq = series.last().map_or(0.0, |r| r.l2err_sq);
    snapshots.push(Snapshot {
        step: step.n_steps,
        hyperbolic: h,
        limit: l,
    });

    let budget = track_budget.then(|| BudgetSummary {
        max_identity_mismatch,
        residual_failures,
        levels_checked,
        final_report: residual_sign_checks(&p, &grid, &integrals),
    });
    Ok(RunOutcome {
        config: config.clone(),
        grid,
        step,
        series,
        snapshots,
        l2err_sq,
        budget,
        mass,
        boundary_warning: config.boundary_warning(),
    })
}

/// `max(200, ceil(L / eps))` cells, so that `dx <= eps`.
pub fn study_cells(length: f64, eps: f64) -> usize {
    MIN_STUDY_CELLS.max((length / eps).ceil() as usize)
}

/// Least-squares line through `(log eps, log error)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
}

pub fn fit_rate(points: &[(f64, f64)]) -> Result<RateFit> {
    if points.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "rate fit needs at least 2 points, got {}",
            points.len()
        )));
    }
    if let Some(&(e, err)) = points.iter().find(|(e, err)| !(*e > 0.0 && *err > 0.0)) {
        return Err(Error::InvalidParameter(format!(
            "rate fit needs positive values, got ({e}, {err})"
        )));
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter(
            "rate fit needs distinct eps values".into(),
        ));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Ok(RateFit {
        slope,
        intercept: my - slope * mx,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyPoint {
    pub eps: f64,
    pub n_cells: usize,
    /// Squared space-time error, or the failure message.
    pub outcome: std::result::Result<f64, String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyResult {
    pub well_prepared: bool,
    /// In sweep order (strictly decreasing `eps`).
    pub points: Vec<StudyPoint>,
    /// Fit over the successful points; `None` with fewer than two.
    pub fit: Option<RateFit>,
}

impl StudyResult {
    pub fn epsilons(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.eps).collect()
    }

    /// `(eps, error)` of the successful runs.
    pub fn errors(&self) -> Vec<(f64, f64)> {
        self.points
            .iter()
            .filter_map(|p| p.outcome.as_ref().ok().map(|&e| (p.eps, e)))
            .collect()
    }

    pub fn failures(&self) -> impl Iterator<Item = &StudyPoint> {
        self.points.iter().filter(|p| p.outcome.is_err())
    }

    pub fn slope(&self) -> Option<f64> {
        self.fit.map(|f| f.slope)
    }
}

fn study_point(base: &RunConfig, eps: f64) -> StudyPoint {
    let length = base.x_max - base.x_min;
    let n_cells = study_cells(length, eps);
    let mut config = base.clone();
    config.params.eps = eps;
    config.n_cells = n_cells;
    config.out_dir = None;
    let outcome = (|| {
        let dx = length / n_cells as f64;
        if dx > eps {
            return Err(Error::ResolutionGuard { dx, eps });
        }
        let run = run_pair_with(&config, RunOptions::lean())?;
        if run.l2err_sq > 0.0 {
            Ok(run.l2err_sq)
        } else {
            Err(Error::InvalidParameter(format!(
                "zero error at eps = {eps}"
            )))
        }
    })()
    .map_err(|e| e.to_string());
    StudyPoint {
        eps,
        n_cells,
        outcome,
    }
}

/// Runs the paired schemes once per `eps` (in parallel) on the
/// study grid and fits the rate. Failures are recorded per point.
pub fn convergence_study(base: &RunConfig, epsilons: &[f64]) -> Result<StudyResult> {
    if epsilons.is_empty() {
        return Err(Error::Config("empty eps list".into()));
    }
    if !epsilons.windows(2).all(|w| w[1] < w[0]) {
        return Err(Error::Config("eps list must be strictly decreasing".into()));
    }
    for &eps in epsilons {
        let mut config = base.clone();
        config.params.eps = eps;
        config.validate()?;
    }
    let points: Vec<StudyPoint> = epsilons
        .par_iter()
        .map(|&eps| study_point(base, eps))
        .collect();
    let mut result = StudyResult {
        well_prepared: base.well_prepared,
        points,
        fit: None,
    };
    let errors = result.errors();
    result.fit = (errors.len() >= 2).then(|| fit_rate(&errors)).transpose()?;
    Ok(result)
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(io_error(parent))?;
    }
    fs::write(path, contents).map_err(io_error(path))
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn profile_csv(grid: &Grid, h: &HyperbolicState, l: &LimitState) -> String {
    let mut out = String::from("x,u,v,ubar,vbar\n");
    for i in 0..grid.n_cells {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            num(grid.centers[i]),
            num(h.u[i]),
            num(h.v[i]),
            num(l.ubar[i]),
            num(l.vbar[i])
        );
    }
    out
}

/// `phi` is written as `NaN` for the nonlinear flux.
pub fn series_csv(series: &ErrorSeries) -> String {
    let mut out = String::from("t,phi,l2err_sq,k_dvbar_sq,k_dxxvbar_sq\n");
    for r in &series.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            num(r.t),
            num(r.phi.unwrap_or(f64::NAN)),
            num(r.l2err_sq),
            num(r.k_dvbar_sq),
            num(r.k_dxxvbar_sq)
        );
    }
    out
}

/// Failed points are written with a `NaN` error and listed after the fit.
pub fn study_csv(study: &StudyResult) -> String {
    let mut out = String::from("eps,n_cells,l2err_sq\n");
    for p in &study.points {
        let err = p.outcome.as_ref().map_or(f64::NAN, |e| *e);
        let _ = writeln!(out, "{},{},{}", num(p.eps), p.n_cells, num(err));
    }
    let (slope, intercept) = study
        .fit
        .map_or((f64::NAN, f64::NAN), |f| (f.slope, f.intercept));
    let _ = writeln!(out, "# slope={}", num(slope));
    let _ = writeln!(out, "# intercept={}", num(intercept));
    for p in study.failures() {
        if let Err(msg) = &p.outcome {
            let _ = writeln!(out, "# failed eps={}: {msg}", num(p.eps));
        }
    }
    out
}

pub fn profile_file_name(step: usize) -> String {
    format!("profile_{step:07}.csv")
}

/// Writes `config.txt`, `series.csv` and one profile per snapshot into
/// `dir`; returns the written paths.
pub fn write_run_outputs(dir: &Path, run: &RunOutcome) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    let config_path = dir.join("config.txt");
    write_file(&config_path, &run.config.to_config_text())?;
    written.push(config_path);
    let series_path = dir.join("series.csv");
    write_file(&series_path, &series_csv(&run.series))?;
    written.push(series_path);
    for snap in &run.snapshots {
        let path = dir.join(profile_file_name(snap.step));
        write_file(
            &path,
            &profile_csv(&run.grid, &snap.hyperbolic, &snap.limit),
        )?;
        written.push(path);
    }
    Ok(written)
}

pub fn write_study(path: &Path, study: &StudyResult) -> Result<()> {
    write_file(path, &study_csv(study))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn config_text_round_trips() {
        let c = RunConfig {
            params: ModelParams::burgers(0.25, 3.0),
            n_cells: 64,
            well_prepared: true,
            scheme: SchemeKind::SemiDiscrete,
            record_every: 7,
            ..RunConfig::default()
        };
        let mut back = RunConfig::default();
        back.apply_config_text(&c.to_config_text()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn config_rejects_unknown_keys_and_bad_values() {
        let mut c = RunConfig::default();
        assert!(c.apply_config_text("nx = 10").is_err());
        assert!(c.apply_config_text("eps = fast").is_err());
        assert!(c.apply_config_text("eps 0.1").is_err());
        c.apply_config_text("# comment\n\neps = 0.1  # trailing\n")
            .unwrap();
        assert_eq!(c.params.eps, 0.1);
    }

    #[test]
    fn validation_gate() {
        let mut c = RunConfig::default();
        c.params.lambda = 0.3;
        assert!(matches!(c.validate(), Err(Error::Subcharacteristic { .. })));
        c.params.lambda = 0.5;
        assert!(matches!(c.validate(), Err(Error::Subcharacteristic { .. })));
        c.params.lambda = 0.51;
        assert!(c.validate().is_ok());
        let mut b = RunConfig {
            params: ModelParams::burgers(1.0, 1.5),
            ..RunConfig::default()
        };
        assert!(matches!(b.validate(), Err(Error::Subcharacteristic { .. })));
        b.params.lambda = 3.0;
        assert!(b.validate().is_ok());
    }

    #[test]
    fn boundary_warning_threshold() {
        let mut c = RunConfig::default();
        assert!(c.boundary_warning().is_none());
        c.params.lambda = 1.0;
        c.params.t_final = 0.5;
        assert!(c.boundary_warning().is_some());
        c.params.t_final = 0.5 - 1e-9;
        assert!(c.boundary_warning().is_none());
    }

    #[test]
    fn fit_rate_examples() {
        let f = fit_rate(&[(1.0, 1.0), (0.5, 0.0625)]).unwrap();
        assert_relative_eq!(f.slope, 4.0, max_relative = 1e-14);
        assert_relative_eq!(f.intercept, 0.0, epsilon = 1e-14);
        let f = fit_rate(&[(1.0, 2.0), (0.1, 2.0)]).unwrap();
        assert_eq!(f.slope, 0.0);
        assert_relative_eq!(f.intercept, 2f64.ln());
        assert!(fit_rate(&[(1.0, 1.0)]).is_err());
        assert!(fit_rate(&[(1.0, 1.0), (0.5, 0.0)]).is_err());
        assert!(fit_rate(&[(1.0, 1.0), (-0.5, 1.0)]).is_err());
    }

    #[test]
    fn study_cell_rule() {
        assert_eq!(study_cells(1.0, 0.1), 200);
        assert_eq!(study_cells(1.0, 0.005), 200);
        assert_eq!(study_cells(1.0, 1.5e-3), 667);
        for eps in REFERENCE_EPS_LIST {
            assert!(1.0 / study_cells(1.0, eps) as f64 <= eps);
        }
    }

    #[test]
    fn study_rejects_unsorted_or_invalid_lists() {
        let c = RunConfig::default();
        assert!(convergence_study(&c, &[0.1, 0.2]).is_err());
        assert!(convergence_study(&c, &[]).is_err());
        let mut strong = c.clone();
        strong.params.a = 10.0;
        assert!(convergence_study(&strong, &[0.1, 0.05]).is_err());
    }

    #[test]
    fn equal_states_give_zero_series() {
        let mut c = RunConfig::default();
        c.u_right = c.u_left;
        c.n_cells = 40;
        for scheme in [SchemeKind::Jpt, SchemeKind::SemiDiscrete] {
            c.scheme = scheme;
            let run = run_pair(&c).unwrap();
            assert!(run
                .series
                .rows
                .iter()
                .all(|r| r.l2err_sq == 0.0 && r.phi == Some(0.0)));
        }
    }

    #[test]
    fn csv_formats() {
        let c = RunConfig {
            n_cells: 5,
            ..RunConfig::default()
        };
        let g = c.grid().unwrap();
        let (h, l) = riemann_initial(&c.params, &g, 2.0, 1.0, false);
        let text = profile_csv(&g, &h, &l);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "x,u,v,ubar,vbar");
        assert_eq!(lines.len(), 6);
        assert!(lines[1..].iter().all(|l| l.split(',').count() == 5));
        assert_eq!(lines[1].split(',').next().unwrap(), "1.0000000000000001e-1");

        let study = StudyResult {
            well_prepared: true,
            points: vec![
                StudyPoint {
                    eps: 0.1,
                    n_cells: 200,
                    outcome: Ok(1e-4),
                },
                StudyPoint {
                    eps: 0.05,
                    n_cells: 200,
                    outcome: Err("boom".into()),
                },
            ],
            fit: None,
        };
        let text = study_csv(&study);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "eps,n_cells,l2err_sq");
        assert_eq!(lines[2], "5.0000000000000003e-2,200,NaN");
        assert_eq!(lines[3], "# slope=NaN");
        assert!(lines[5].contains("boom"));
    }
}
