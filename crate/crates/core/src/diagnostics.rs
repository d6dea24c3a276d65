//! Relative-entropy measurements between a relaxation solution `w = (u, v)`
//! and a limit solution `wbar = (ubar, vbar)` on the same grid.
//!
//! The central object is the per-cell evolution law of the discrete relative
//! entropy `E_i = E(w_i | wbar_i)` along the semi-discrete flow:
//!
//! ```text
//!   dE_i/dt + (F_{i+1/2} - F_{i-1/2}) / dx
//!       = -[a(u_i - ubar_i) - (v_i - vbar_i)]^2
//!         + eps^2 [a(u_i - ubar_i) - (v_i - vbar_i)] dvbar_i/dt
//!         + R1_i + R2_i + R3_i + R4_i
//! ```
//!
//! which is an exact algebraic identity once `dE_i/dt` is evaluated by the
//! chain rule from the two semi-discrete right-hand sides. Everything here
//! is restricted to the linear flux.

use crate::error::{Error, Result};
use crate::model::{
    interface_difference, second_difference, CellField, ConvexityBounds, EntropyPair, Grid,
    ModelParams,
};
use crate::schemes::{
    limit_semi_discrete_rhs, semi_discrete_rhs, HyperbolicState, LimitState, SolutionPair,
};

/// Relative tolerance of the per-cell identity check.
pub const IDENTITY_TOLERANCE: f64 = 1e-10;
/// Relative tolerance of the summation-by-parts equalities.
pub const SBP_TOLERANCE: f64 = 1e-12;
/// Relative slack on the stability bound `sup phi <= phi(0) + B eps^4`.
pub const THEOREM_SLACK: f64 = 1e-8;
/// Young parameter used in the `R3` estimate.
pub const THETA: f64 = 0.5;

pub fn cell_relative_entropy(p: &ModelParams, w: (f64, f64), wbar: (f64, f64)) -> Result<f64> {
    Ok(p.entropy_pair()?.relative(w, wbar))
}

fn check_pair(grid: &Grid, h: &HyperbolicState, l: &LimitState) -> Result<()> {
    grid.check_field(&h.u)?;
    grid.check_field(&h.v)?;
    grid.check_field(&l.ubar)?;
    grid.check_field(&l.vbar)
}

/// Cellwise differences `(u - ubar, v - vbar)`.
fn differences(h: &HyperbolicState, l: &LimitState) -> (CellField, CellField) {
    (
        h.u.zip_map(&l.ubar, |a, b| a - b),
        h.v.zip_map(&l.vbar, |a, b| a - b),
    )
}

/// `phi = sum_i dx E_i`.
pub fn phi_total(p: &ModelParams, grid: &Grid, h: &HyperbolicState, l: &LimitState) -> Result<f64> {
    let pair = p.entropy_pair()?;
    check_pair(grid, h, l)?;
    let sum: f64 = (0..grid.n_cells)
        .map(|i| pair.relative((h.u[i], h.v[i]), (l.ubar[i], l.vbar[i])))
        .sum();
    Ok(grid.dx * sum)
}

/// Interface relative-entropy flux `F_{i+1/2}` from the differences
/// `d = w - wbar` in the two adjacent cells.
#[inline]
pub fn discrete_re_flux(pair: &EntropyPair, left: (f64, f64), right: (f64, f64)) -> f64 {
    let (ul, vl) = left;
    let (ur, vr) = right;
    -0.5 * pair.eps2 * pair.a * vl * vr - 0.5 * pair.lambda2 * pair.a * ul * ur
        + 0.5 * pair.lambda2 * (ul * vr + ur * vl)
}

/// Numerical-viscosity residuals of the discrete evolution law, per cell.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Residuals {
    pub r1: Vec<f64>,
    pub r2: Vec<f64>,
    pub r3: Vec<f64>,
    pub r4: Vec<f64>,
}

impl Residuals {
    /// `sum_i dx R^j_i` for `j = 1..4`.
    pub fn integrals(&self, dx: f64) -> [f64; 4] {
        [&self.r1, &self.r2, &self.r3, &self.r4].map(|r| dx * r.iter().sum::<f64>())
    }
}

/// Signature of a residual evaluator; lets the identity check run against
/// alternative (e.g. deliberately broken) formulas.
pub type ResidualFn = fn(&ModelParams, &Grid, &HyperbolicState, &LimitState) -> Result<Residuals>;

pub fn residuals(
    p: &ModelParams,
    grid: &Grid,
    h: &HyperbolicState,
    l: &LimitState,
) -> Result<Residuals> {
    let pair = p.entropy_pair()?;
    check_pair(grid, h, l)?;
    let (du, dv) = differences(h, l);
    let dxx_du = second_difference(&du, grid.dx);
    let dxx_dv = second_difference(&dv, grid.dx);
    let dxx_vbar = second_difference(&l.vbar, grid.dx);
    let lam = pair.lambda;
    let c1 = 0.5 * lam * pair.lambda2 * grid.dx;
    let c2 = 0.5 * pair.eps2 * lam * grid.dx;
    let c4 = -0.5 * pair.eps2 * pair.a * lam * grid.dx;
    let n = grid.n_cells;
    let mut out = Residuals {
        r1: Vec::with_capacity(n),
        r2: Vec::with_capacity(n),
        r3: Vec::with_capacity(n),
        r4: Vec::with_capacity(n),
    };
    for i in 0..n {
        out.r1.push(c1 * du[i] * dxx_du[i]);
        out.r2.push(c2 * dv[i] * dxx_dv[i]);
        out.r3.push(c2 * (dv[i] - pair.a * du[i]) * dxx_vbar[i]);
        out.r4.push(c4 * (dv[i] * dxx_du[i] + du[i] * dxx_dv[i]));
    }
    Ok(out)
}

/// All terms of the discrete evolution law at one time level.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyBudget {
    /// `E_i`.
    pub relative_entropy: Vec<f64>,
    /// `F_{i+1/2}` on the `n + 1` interfaces (ghosts included).
    pub interface_flux: Vec<f64>,
    /// `dE_i/dt` by the chain rule.
    pub entropy_rate: Vec<f64>,
    pub residuals: Residuals,
    /// `-[a(u_i - ubar_i) - (v_i - vbar_i)]^2`.
    pub dissipation: Vec<f64>,
    /// `eps^2 [a(u_i - ubar_i) - (v_i - vbar_i)] dvbar_i/dt`.
    pub forcing: Vec<f64>,
    /// Left-hand side minus right-hand side.
    pub mismatch: Vec<f64>,
    /// Largest magnitude among the terms entering cell `i`.
    pub scale: Vec<f64>,
}

impl EntropyBudget {
    pub fn max_mismatch(&self) -> f64 {
        self.mismatch.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// `max_i |mismatch_i| / scale_i` (cells with all terms zero count as 0).
    pub fn max_relative_mismatch(&self) -> f64 {
        self.mismatch
            .iter()
            .zip(&self.scale)
            .map(|(m, s)| if *s > 0.0 { m.abs() / s } else { m.abs() })
            .fold(0.0, f64::max)
    }

    /// `max_i |mismatch_i| / max_i scale_i`.
    pub fn max_global_relative_mismatch(&self) -> f64 {
        let scale = self.scale.iter().fold(0.0f64, |m, x| m.max(*x));
        if scale > 0.0 {
            self.max_mismatch() / scale
        } else {
            self.max_mismatch()
        }
    }

    pub fn holds(&self) -> bool {
        self.max_relative_mismatch() <= IDENTITY_TOLERANCE
    }
}

pub fn entropy_budget(
    p: &ModelParams,
    grid: &Grid,
    h: &HyperbolicState,
    l: &LimitState,
) -> Result<EntropyBudget> {
    entropy_budget_with(p, grid, h, l, residuals)
}

/// [`entropy_budget`] with a caller-supplied residual evaluator.
pub fn entropy_budget_with(
    p: &ModelParams,
    grid: &Grid,
    h: &HyperbolicState,
    l: &LimitState,
    residual_fn: ResidualFn,
) -> Result<EntropyBudget> {
    let pair = p.entropy_pair()?;
    check_pair(grid, h, l)?;
    let n = grid.n_cells;
    let (du, dv) = differences(h, l);
    let (rate_u, rate_v) = semi_discrete_rhs(p, grid, h);
    let (rate_ubar, rate_vbar) = limit_semi_discrete_rhs(p, grid, l)?;
    let res = residual_fn(p, grid, h, l)?;

    let interface_flux: Vec<f64> = (0..=n)
        .map(|k| {
            let a = k.saturating_sub(1);
            let b = k.min(n - 1);
            discrete_re_flux(&pair, (du[a], dv[a]), (du[b], dv[b]))
        })
        .collect();

    let mut budget = EntropyBudget {
        relative_entropy: Vec::with_capacity(n),
        interface_flux,
        entropy_rate: Vec::with_capacity(n),
        residuals: res,
        dissipation: Vec::with_capacity(n),
        forcing: Vec::with_capacity(n),
        mismatch: Vec::with_capacity(n),
        scale: Vec::with_capacity(n),
    };
    for i in 0..n {
        let (gu, gv) = pair.gradient(du[i], dv[i]);
        let ddu = rate_u[i] - rate_ubar[i];
        let ddv = rate_v[i] - rate_vbar[i];
        let rate = gu * ddu + gv * ddv;
        let flux_div = (budget.interface_flux[i + 1] - budget.interface_flux[i]) / grid.dx;
        let gap = pair.a * du[i] - dv[i];
        let dissipation = -gap * gap;
        let forcing = pair.eps2 * gap * rate_vbar[i];
        let r = [
            budget.residuals.r1[i],
            budget.residuals.r2[i],
            budget.residuals.r3[i],
            budget.residuals.r4[i],
        ];
        let lhs = rate + flux_div;
        let rhs = dissipation + forcing + r.iter().sum::<f64>();
        let terms = [
            (gu * ddu).abs(),
            (gv * ddv).abs(),
            flux_div.abs(),
            budget.interface_flux[i].abs() / grid.dx,
            budget.interface_flux[i + 1].abs() / grid.dx,
            dissipation.abs(),
            forcing.abs(),
        ];
        let scale = terms
            .iter()
            .chain(r.iter().map(|x| x.abs()).collect::<Vec<_>>().iter())
            .fold(0.0f64, |m, x| m.max(*x));
        budget.relative_entropy.push(pair.entropy(du[i], dv[i]));
        budget.entropy_rate.push(rate);
        budget.dissipation.push(dissipation);
        budget.forcing.push(forcing);
        budget.mismatch.push(lhs - rhs);
        budget.scale.push(scale);
    }
    Ok(budget)
}

/// Per-cell mismatch of the evolution law; alias of [`entropy_budget`].
pub fn identity_mismatch(
    p: &ModelParams,
    grid: &Grid,
    h: &HyperbolicState,
    l: &LimitState,
) -> Result<EntropyBudget> {
    entropy_budget(p, grid, h, l)
}

/// Time integrals (left-endpoint rule) of the residual sums and of the
/// norms appearing in their estimates.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ResidualIntegrals {
    pub t: f64,
    /// `int sum_i dx R^j_i`, `j = 1..4`.
    pub residual: [f64; 4],
    /// `||D_x(u - ubar)||^2_{L2(Q_t)}`.
    pub dx_du_sq: f64,
    /// `||D_x(v - vbar)||^2_{L2(Q_t)}`.
    pub dx_dv_sq: f64,
    /// `||D_xx vbar||^2_{L2(Q_t)}`.
    pub dxx_vbar_sq: f64,
    /// `int sum_i dx [(v - vbar) - a(u - ubar)]^2`.
    pub relax_sq: f64,
}

impl ResidualIntegrals {
    /// Adds `dt` times the instantaneous integrands at `(h, l)`.
    pub fn accumulate_with(
        &mut self,
        p: &ModelParams,
        grid: &Grid,
        h: &HyperbolicState,
        l: &LimitState,
        dt: f64,
        residual_fn: ResidualFn,
    ) -> Result<()> {
        let res = residual_fn(p, grid, h, l)?;
        let sums = res.integrals(grid.dx);
        let (du, dv) = differences(h, l);
        let sq = |xs: &[f64]| grid.dx * xs.iter().map(|x| x * x).sum::<f64>();
        for (acc, s) in self.residual.iter_mut().zip(sums) {
            *acc += dt * s;
        }
        self.dx_du_sq += dt * sq(&interface_difference(&du, grid.dx));
        self.dx_dv_sq += dt * sq(&interface_difference(&dv, grid.dx));
        self.dxx_vbar_sq += dt * sq(&second_difference(&l.vbar, grid.dx));
        let gap: Vec<f64> = dv.iter().zip(du.iter()).map(|(v, u)| v - p.a * u).collect();
        self.relax_sq += dt * sq(&gap);
        self.t += dt;
        Ok(())
    }

    pub fn accumulate(
        &mut self,
        p: &ModelParams,
        grid: &Grid,
        h: &HyperbolicState,
        l: &LimitState,
        dt: f64,
    ) -> Result<()> {
        self.accumulate_with(p, grid, h, l, dt, residuals)
    }
}

/// Outcome of one residual estimate: `lhs <= rhs` (or `==` for equalities).
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateOutcome {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs` for inequalities, `-|lhs - rhs|` for equalities.
    pub margin: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub t: f64,
    pub estimates: Vec<EstimateOutcome>,
}

impl ResidualReport {
    pub fn passed(&self) -> bool {
        self.estimates.iter().all(|e| e.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &EstimateOutcome> {
        self.estimates.iter().filter(|e| !e.passed)
    }
}

fn equality(name: &'static str, lhs: f64, rhs: f64) -> EstimateOutcome {
    let gap = (lhs - rhs).abs();
    let scale = lhs.abs().max(rhs.abs());
    EstimateOutcome {
        name,
        lhs,
        rhs,
        margin: -gap,
        passed: gap <= SBP_TOLERANCE * scale,
    }
}

fn inequality(name: &'static str, lhs: f64, rhs: f64, scale: f64) -> EstimateOutcome {
    EstimateOutcome {
        name,
        lhs,
        rhs,
        margin: rhs - lhs,
        passed: lhs <= rhs + SBP_TOLERANCE * scale,
    }
}

/// Checks the residual estimates on time-integrated sums:
///
/// * `int sum dx R1 = -(lambda^3/2) dx ||D_x(u - ubar)||^2`
/// * `int sum dx R2 = -(eps^2 lambda/2) dx ||D_x(v - vbar)||^2`
/// * `int sum dx (R1 + R2 + R4) <= 0`
/// * `int sum dx R3 <= eps^4 lambda^2/(8 theta) dx^2 ||D_xx vbar||^2
///    + theta/2 int sum dx [(v - vbar) - a(u - ubar)]^2` with `theta = 1/2`
/// * `int sum dx R4 <= (lambda^3/2) dx ||D_x(u - ubar)||^2
///    + (lambda eps^2/2) dx ||D_x(v - vbar)||^2`
pub fn residual_sign_checks(
    p: &ModelParams,
    grid: &Grid,
    integrals: &ResidualIntegrals,
) -> ResidualReport {
    let lam = p.lambda;
    let eps2 = p.eps * p.eps;
    let dx = grid.dx;
    let [r1, r2, r3, r4] = integrals.residual;
    let r1_rhs = -0.5 * lam.powi(3) * dx * integrals.dx_du_sq;
    let r2_rhs = -0.5 * eps2 * lam * dx * integrals.dx_dv_sq;
    let r3_rhs = eps2 * eps2 * lam * lam / (8.0 * THETA) * dx * dx * integrals.dxx_vbar_sq
        + 0.5 * THETA * integrals.relax_sq;
    let r4_rhs = -r1_rhs - r2_rhs;
    let viscous_scale = r1.abs() + r2.abs() + r4.abs();
    ResidualReport {
        t: integrals.t,
        estimates: vec![
            equality("R1 summation by parts", r1, r1_rhs),
            equality("R2 summation by parts", r2, r2_rhs),
            inequality("R1+R2+R4 nonpositive", r1 + r2 + r4, 0.0, viscous_scale),
            inequality("R3 Young bound", r3, r3_rhs, r3.abs() + r3_rhs.abs()),
            inequality("R4 Young bound", r4, r4_rhs, r4.abs() + r4_rhs.abs()),
        ],
    }
}

/// One row of the per-step error series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesRow {
    pub t: f64,
    /// `phi(t)`; `None` for the nonlinear flux.
    pub phi: Option<f64>,
    /// `||(u, v) - (ubar, vbar)||^2_{L2(Q_t)}`.
    pub l2err_sq: f64,
    /// `||d vbar/dt||^2_{L2(Q_t)}`.
    pub k_dvbar_sq: f64,
    /// `||D_xx vbar||^2_{L2(Q_t)}`.
    pub k_dxxvbar_sq: f64,
}

/// Per-step measurements accumulated along a run.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ErrorSeries {
    /// Rows kept at the recorder's stride (always the first and last level).
    pub rows: Vec<SeriesRow>,
    /// `phi` at the first level and its supremum over every level, kept
    /// rows or not.
    pub phi0: Option<f64>,
    pub sup_phi: Option<f64>,
}

impl ErrorSeries {
    pub fn last(&self) -> Option<&SeriesRow> {
        self.rows.last()
    }

    /// Cumulative columns never decrease and all entries are nonnegative.
    pub fn is_monotone(&self) -> bool {
        self.rows.windows(2).all(|w| {
            w[1].l2err_sq >= w[0].l2err_sq
                && w[1].k_dvbar_sq >= w[0].k_dvbar_sq
                && w[1].k_dxxvbar_sq >= w[0].k_dxxvbar_sq
        }) && self.rows.iter().all(|r| {
            r.l2err_sq >= 0.0
                && r.k_dvbar_sq >= 0.0
                && r.k_dxxvbar_sq >= 0.0
                && r.phi.is_none_or(|x| x >= 0.0)
        })
    }
}

/// Builds an [`ErrorSeries`] one time level at a time.
#[derive(Debug, Clone)]
pub struct SeriesRecorder {
    series: ErrorSeries,
    stride: usize,
    level: usize,
    l2err_sq: f64,
    k_dvbar_sq: f64,
    k_dxxvbar_sq: f64,
}

impl Default for SeriesRecorder {
    fn default() -> Self {
        Self::new()
    }
}

impl SeriesRecorder {
    /// Keeps a row at every level.
    pub fn new() -> Self {
        Self::with_stride(1)
    }

    /// Keeps a row every `stride` levels, plus the final one.
    pub fn with_stride(stride: usize) -> Self {
        SeriesRecorder {
            series: ErrorSeries::default(),
            stride: stride.max(1),
            level: 0,
            l2err_sq: 0.0,
            k_dvbar_sq: 0.0,
            k_dxxvbar_sq: 0.0,
        }
    }

    /// Records the current time level, then adds `dt` times the current
    /// integrands (`dt = None` marks the final level).
    pub fn record(
        &mut self,
        p: &ModelParams,
        grid: &Grid,
        h: &HyperbolicState,
        l: &LimitState,
        dt: Option<f64>,
    ) -> Result<()> {
        let phi = match p.entropy_pair() {
            Ok(_) => Some(phi_total(p, grid, h, l)?),
            Err(_) => None,
        };
        if let Some(value) = phi {
            if self.series.phi0.is_none() {
                self.series.phi0 = Some(value);
            }
            self.series.sup_phi = Some(self.series.sup_phi.map_or(value, |s| s.max(value)));
        }
        if self.level.is_multiple_of(self.stride) || dt.is_none() {
            self.series.rows.push(SeriesRow {
                t: h.t,
                phi,
                l2err_sq: self.l2err_sq,
                k_dvbar_sq: self.k_dvbar_sq,
                k_dxxvbar_sq: self.k_dxxvbar_sq,
            });
        }
        self.level += 1;
        if let Some(dt) = dt {
            let (_, dvbar) = limit_semi_discrete_rhs(p, grid, l)?;
            let dxx = second_difference(&l.vbar, grid.dx);
            let sq = |xs: &[f64]| grid.dx * xs.iter().map(|x| x * x).sum::<f64>();
            self.l2err_sq += dt * crate::schemes::squared_distance(grid, h, l);
            self.k_dvbar_sq += dt * sq(&dvbar);
            self.k_dxxvbar_sq += dt * sq(&dxx);
        }
        Ok(())
    }

    pub fn finish(self) -> ErrorSeries {
        self.series
    }
}

/// `sum_n (t_{n+1} - t_n) sum_i dx (|u - ubar|^2 + |v - vbar|^2)` over a
/// recorded trajectory (left-endpoint rule).
pub fn l2_error_spacetime(grid: &Grid, trajectory: &[SolutionPair]) -> f64 {
    trajectory
        .windows(2)
        .map(|w| {
            let dt = w[1].hyperbolic.t - w[0].hyperbolic.t;
            dt * crate::schemes::squared_distance(grid, &w[0].hyperbolic, &w[0].limit)
        })
        .sum()
}

/// Stability bound `sup_t phi(t) <= phi(0) + B eps^4`, with
/// `B = ||dvbar/dt||^2 + (lambda^2 dx^2 / 4) ||D_xx vbar||^2` measured on
/// the run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoremCheck {
    pub phi0: f64,
    pub sup_phi: f64,
    pub b_meas: f64,
    pub bound: f64,
    /// `bound - sup_phi`.
    pub margin: f64,
    pub satisfied: bool,
}

pub fn theorem_bound_check(
    series: &ErrorSeries,
    p: &ModelParams,
    grid: &Grid,
) -> Result<TheoremCheck> {
    p.entropy_pair()?;
    let first = series
        .rows
        .first()
        .ok_or_else(|| Error::InvalidParameter("empty error series".into()))?;
    let last = series.rows.last().unwrap_or(first);
    let phi0 = series.phi0.or(first.phi).ok_or(Error::NonlinearEntropy)?;
    let sup_phi = series.sup_phi.ok_or(Error::NonlinearEntropy)?;
    let b_meas =
        last.k_dvbar_sq + 0.25 * p.lambda * p.lambda * grid.dx * grid.dx * last.k_dxxvbar_sq;
    let bound = phi0 + b_meas * p.eps.powi(4);
    Ok(TheoremCheck {
        phi0,
        sup_phi,
        b_meas,
        bound,
        margin: bound - sup_phi,
        satisfied: sup_phi <= bound * (1.0 + THEOREM_SLACK),
    })
}

/// Cellwise `dE(w_i)/dt + (F(w_{i+1}) - F(w_{i-1}))/(2 dx) + (a u_i - v_i)^2`
/// along the semi-discrete flow.
pub fn entropy_inequality_budget(
    p: &ModelParams,
    grid: &Grid,
    h: &HyperbolicState,
) -> Result<Vec<f64>> {
    let pair = p.entropy_pair()?;
    grid.check_field(&h.u)?;
    let (du, dv) = semi_discrete_rhs(p, grid, h);
    let flux = h.u.zip_map(&h.v, |u, v| pair.flux(u, v));
    Ok((0..grid.n_cells)
        .map(|i| {
            let (gu, gv) = pair.gradient(h.u[i], h.v[i]);
            let (fl, fr) = flux.neighbors(i);
            let src = pair.a * h.u[i] - h.v[i];
            gu * du[i] + gv * dv[i] + (fr - fl) / (2.0 * grid.dx) + src * src
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyInequalityReport {
    pub dx: f64,
    /// Largest positive part of the budget over cells and times.
    pub max_positive: f64,
    /// Most negative budget value seen.
    pub min_budget: f64,
    /// `max_positive / dx`, the constant in `budget <= C dx`.
    pub constant: f64,
}

pub fn entropy_inequality_check(
    p: &ModelParams,
    grid: &Grid,
    trajectory: &[HyperbolicState],
) -> Result<EntropyInequalityReport> {
    let mut max_positive = 0.0f64;
    let mut min_budget = f64::INFINITY;
    for h in trajectory {
        for b in entropy_inequality_budget(p, grid, h)? {
            max_positive = max_positive.max(b);
            min_budget = min_budget.min(b);
        }
    }
    Ok(EntropyInequalityReport {
        dx: grid.dx,
        max_positive,
        min_budget,
        constant: max_positive / grid.dx,
    })
}

/// Number of difference vectors violating
/// `beta0/2 |d|^2 <= E(w | wbar) <= beta1/2 |d|^2`.
pub fn sandwich_violations(
    pair: &EntropyPair,
    bounds: &ConvexityBounds,
    diffs: impl IntoIterator<Item = (f64, f64)>,
) -> usize {
    diffs
        .into_iter()
        .filter(|&(du, dv)| {
            let e = pair.entropy(du, dv);
            let d2 = du * du + dv * dv;
            let tol = 1e-13 * bounds.beta1 * d2;
            e < 0.5 * bounds.beta0 * d2 - tol || e > 0.5 * bounds.beta1 * d2 + tol
        })
        .count()
}
