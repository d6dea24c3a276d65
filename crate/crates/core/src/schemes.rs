//! Time advancement.
//!
//! Two families are provided, each as a pair (relaxation system, limit
//! system) advanced with a common time step:
//!
//! * the fully discrete splitting scheme: an HLL convection step followed by
//!   an implicit (closed-form) relaxation step, and the explicit
//!   convection-diffusion scheme it reduces to at `eps = 0`;
//! * the semi-discrete (method-of-lines) systems, integrated with classical
//!   RK4.

use crate::error::{Error, Result};
use crate::model::{equilibrium_v, CellField, Grid, ModelParams};

/// Closure tolerance for a limit state: `|lambda^2 D0 ubar - (f(ubar) - vbar)|`.
pub const CLOSURE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct HyperbolicState {
    pub u: CellField,
    pub v: CellField,
    pub t: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitState {
    pub ubar: CellField,
    pub vbar: CellField,
    pub t: f64,
}

impl LimitState {
    /// Builds a limit state from `ubar`, filling `vbar` from the closure.
    pub fn from_ubar(p: &ModelParams, grid: &Grid, ubar: CellField, t: f64) -> Self {
        let vbar = equilibrium_v(p, grid, &ubar);
        LimitState { ubar, vbar, t }
    }

    /// Largest closure violation, scaled by `max(1, |vbar_i|)`, and its cell.
    pub fn closure_violation(&self, p: &ModelParams, grid: &Grid) -> (usize, f64) {
        let coef = p.lambda * p.lambda / (2.0 * grid.dx);
        (0..self.ubar.len())
            .map(|i| {
                let (l, r) = self.ubar.neighbors(i);
                let gap = coef * (r - l) - (p.flux_eval(self.ubar[i]) - self.vbar[i]);
                (i, gap.abs() / self.vbar[i].abs().max(1.0))
            })
            .fold((0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc })
    }
}

/// Hyperbolic and limit solutions at the same time level.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionPair {
    pub hyperbolic: HyperbolicState,
    pub limit: LimitState,
    /// `||(u, v) - (ubar, vbar)||^2` over `[0, t)`, left-endpoint rule.
    pub l2err_sq: f64,
}

/// A uniform time step landing exactly on the final time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepSize {
    pub dt: f64,
    pub n_steps: usize,
    /// Stability limit before rounding down to an integer number of steps.
    pub dt_max: f64,
}

impl StepSize {
    pub fn landing_on(t_final: f64, dt_max: f64) -> Self {
        let n_steps = ((t_final / dt_max).ceil() as usize).max(1);
        StepSize {
            dt: t_final / n_steps as f64,
            n_steps,
            dt_max,
        }
    }
}

/// `dt <= cfl * dx / (2 lambda)`, independent of `eps`.
pub fn cfl_dt(p: &ModelParams, grid: &Grid) -> StepSize {
    StepSize::landing_on(p.t_final, p.cfl * grid.dx / (2.0 * p.lambda))
}

/// Step shared by the splitting scheme and its explicit limit scheme.
///
/// The limit update is an explicit parabolic step with diffusion `lambda^2`,
/// so the hyperbolic rule is capped by `dt <= cfl * dx^2 / (2 lambda^2)`.
/// Both bounds are independent of `eps`.
pub fn paired_dt(p: &ModelParams, grid: &Grid) -> StepSize {
    let hyperbolic = p.cfl * grid.dx / (2.0 * p.lambda);
    let parabolic = p.cfl * grid.dx * grid.dx / (2.0 * p.lambda * p.lambda);
    StepSize::landing_on(p.t_final, hyperbolic.min(parabolic))
}

/// Step for explicit RK4 on the stiff semi-discrete systems.
///
/// On top of the hyperbolic CFL rule the step resolves the relaxation time
/// (`dt <= eps^2 / 2`) and the parabolic limit operator, whose spectrum
/// reaches `lambda^2 / dx^2` (`dt <= dx^2 / (2 lambda^2)`).
pub fn semi_discrete_dt(p: &ModelParams, grid: &Grid) -> StepSize {
    let hyperbolic = p.cfl * grid.dx / (2.0 * p.lambda);
    let relaxation = 0.5 * p.eps * p.eps;
    let parabolic = 0.5 * grid.dx * grid.dx / (p.lambda * p.lambda);
    StepSize::landing_on(p.t_final, hyperbolic.min(relaxation).min(parabolic))
}

fn check_finite(field: &CellField, name: &'static str, t: f64) -> Result<()> {
    match field.first_non_finite() {
        Some(cell) => Err(Error::Unstable {
            field: name,
            cell,
            t,
        }),
        None => Ok(()),
    }
}

/// HLL interface fluxes `(F^u, F^v)` on the `n + 1` interfaces, ghosts included.
pub fn hll_fluxes(lambda: f64, u: &CellField, v: &CellField) -> (Vec<f64>, Vec<f64>) {
    let n = u.len();
    let lambda2 = lambda * lambda;
    let mut fu = Vec::with_capacity(n + 1);
    let mut fv = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let l = k.saturating_sub(1);
        let r = k.min(n - 1);
        fu.push(0.5 * (v[l] + v[r]) - 0.5 * lambda * (u[r] - u[l]));
        fv.push(0.5 * lambda2 * (u[l] + u[r]) - 0.5 * lambda * (v[r] - v[l]));
    }
    (fu, fv)
}

/// Conservative HLL update of the homogeneous linear system; returns the
/// half-step state (time unchanged).
pub fn hll_convection_step(
    p: &ModelParams,
    grid: &Grid,
    state: &HyperbolicState,
    dt: f64,
) -> Result<HyperbolicState> {
    let (fu, fv) = hll_fluxes(p.lambda, &state.u, &state.v);
    let r = dt / grid.dx;
    let u: CellField = (0..grid.n_cells)
        .map(|i| state.u[i] - r * (fu[i + 1] - fu[i]))
        .collect::<Vec<_>>()
        .into();
    let v: CellField = (0..grid.n_cells)
        .map(|i| state.v[i] - r * (fv[i + 1] - fv[i]))
        .collect::<Vec<_>>()
        .into();
    check_finite(&u, "u", state.t + dt)?;
    check_finite(&v, "v", state.t + dt)?;
    Ok(HyperbolicState { u, v, t: state.t })
}

/// Implicit relaxation of `v` towards `f(u) - (1 - eps^2) lambda^2 D0 u`,
/// solved in closed form. `u` is untouched; well defined at `eps = 0`.
pub fn relaxation_step(
    p: &ModelParams,
    grid: &Grid,
    half: &HyperbolicState,
    dt: f64,
) -> HyperbolicState {
    let eps2 = p.eps * p.eps;
    let keep = eps2 / (eps2 + dt);
    let coef = (1.0 - eps2) * p.lambda * p.lambda / (2.0 * grid.dx);
    let v = (0..grid.n_cells)
        .map(|i| {
            let (l, r) = half.u.neighbors(i);
            let target = p.flux_eval(half.u[i]) - coef * (r - l);
            target + keep * (half.v[i] - target)
        })
        .collect::<Vec<_>>()
        .into();
    HyperbolicState {
        u: half.u.clone(),
        v,
        t: half.t,
    }
}

/// One step of the asymptotic-preserving splitting scheme.
pub fn jpt_step(
    p: &ModelParams,
    grid: &Grid,
    state: &HyperbolicState,
    dt: f64,
) -> Result<HyperbolicState> {
    let half = hll_convection_step(p, grid, state, dt)?;
    let mut next = relaxation_step(p, grid, &half, dt);
    next.t = state.t + dt;
    check_finite(&next.v, "v", next.t)?;
    Ok(next)
}

/// One step of the explicit convection-diffusion scheme obtained from
/// [`jpt_step`] at `eps = 0`.
pub fn limit_step(p: &ModelParams, grid: &Grid, state: &LimitState, dt: f64) -> Result<LimitState> {
    let r = dt / (2.0 * grid.dx);
    let ubar: CellField = (0..grid.n_cells)
        .map(|i| {
            let (vl, vr) = state.vbar.neighbors(i);
            let (ul, ur) = state.ubar.neighbors(i);
            state.ubar[i] - r * (vr - vl) + p.lambda * r * (ur - 2.0 * state.ubar[i] + ul)
        })
        .collect::<Vec<_>>()
        .into();
    let t = state.t + dt;
    check_finite(&ubar, "ubar", t)?;
    let next = LimitState::from_ubar(p, grid, ubar, t);
    check_finite(&next.vbar, "vbar", t)?;
    Ok(next)
}

/// Right-hand side of the semi-discrete relaxation system with HLL fluxes.
pub fn semi_discrete_rhs(
    p: &ModelParams,
    grid: &Grid,
    state: &HyperbolicState,
) -> (CellField, CellField) {
    let n = grid.n_cells;
    let inv2dx = 1.0 / (2.0 * grid.dx);
    let visc = p.lambda * inv2dx;
    let inv_eps2 = 1.0 / (p.eps * p.eps);
    let lambda2 = p.lambda * p.lambda;
    let mut du = Vec::with_capacity(n);
    let mut dv = Vec::with_capacity(n);
    for i in 0..n {
        let (ul, ur) = state.u.neighbors(i);
        let (vl, vr) = state.v.neighbors(i);
        let (ui, vi) = (state.u[i], state.v[i]);
        du.push(-(vr - vl) * inv2dx + visc * (ur - 2.0 * ui + ul));
        dv.push(
            -lambda2 * (ur - ul) * inv2dx * inv_eps2
                + visc * (vr - 2.0 * vi + vl)
                + (p.flux_eval(ui) - vi) * inv_eps2,
        );
    }
    (du.into(), dv.into())
}

/// `d ubar/dt` from the limit system, assuming `vbar` satisfies the closure.
fn limit_ubar_rate(p: &ModelParams, grid: &Grid, ubar: &CellField, vbar: &CellField) -> CellField {
    let inv2dx = 1.0 / (2.0 * grid.dx);
    let visc = p.lambda * inv2dx;
    (0..grid.n_cells)
        .map(|i| {
            let (vl, vr) = vbar.neighbors(i);
            let (ul, ur) = ubar.neighbors(i);
            -(vr - vl) * inv2dx + visc * (ur - 2.0 * ubar[i] + ul)
        })
        .collect::<Vec<_>>()
        .into()
}

/// Right-hand side of the semi-discrete limit system.
///
/// `d vbar/dt` comes from differentiating the closure in time:
/// `f'(ubar_i) d ubar_i/dt - lambda^2 D0 (d ubar/dt)_i`.
pub fn limit_semi_discrete_rhs(
    p: &ModelParams,
    grid: &Grid,
    state: &LimitState,
) -> Result<(CellField, CellField)> {
    let (cell, violation) = state.closure_violation(p, grid);
    if violation > CLOSURE_TOLERANCE {
        return Err(Error::ClosureViolation { cell, violation });
    }
    let dubar = limit_ubar_rate(p, grid, &state.ubar, &state.vbar);
    let coef = p.lambda * p.lambda / (2.0 * grid.dx);
    let dvbar = (0..grid.n_cells)
        .map(|i| {
            let (l, r) = dubar.neighbors(i);
            p.flux_derivative(state.ubar[i]) * dubar[i] - coef * (r - l)
        })
        .collect::<Vec<_>>()
        .into();
    Ok((dubar, dvbar))
}

fn axpy(base: &CellField, h: f64, k: &CellField) -> CellField {
    base.zip_map(k, |b, k| b + h * k)
}

fn rk4_combine(base: &CellField, dt: f64, k: [&CellField; 4]) -> CellField {
    (0..base.len())
        .map(|i| base[i] + dt / 6.0 * (k[0][i] + 2.0 * k[1][i] + 2.0 * k[2][i] + k[3][i]))
        .collect::<Vec<_>>()
        .into()
}

/// One classical RK4 step of the semi-discrete relaxation system.
pub fn semi_discrete_step(
    p: &ModelParams,
    grid: &Grid,
    state: &HyperbolicState,
    dt: f64,
) -> Result<HyperbolicState> {
    let stage = |u: CellField, v: CellField| {
        semi_discrete_rhs(p, grid, &HyperbolicState { u, v, t: state.t })
    };
    let (ku1, kv1) = semi_discrete_rhs(p, grid, state);
    let (ku2, kv2) = stage(
        axpy(&state.u, 0.5 * dt, &ku1),
        axpy(&state.v, 0.5 * dt, &kv1),
    );
    let (ku3, kv3) = stage(
        axpy(&state.u, 0.5 * dt, &ku2),
        axpy(&state.v, 0.5 * dt, &kv2),
    );
    let (ku4, kv4) = stage(axpy(&state.u, dt, &ku3), axpy(&state.v, dt, &kv3));
    let t = state.t + dt;
    let u = rk4_combine(&state.u, dt, [&ku1, &ku2, &ku3, &ku4]);
    let v = rk4_combine(&state.v, dt, [&kv1, &kv2, &kv3, &kv4]);
    check_finite(&u, "u", t)?;
    check_finite(&v, "v", t)?;
    Ok(HyperbolicState { u, v, t })
}

/// One classical RK4 step of the semi-discrete limit system. The ODE is
/// integrated for `ubar`; `vbar` is recomputed from the closure at every
/// stage so the algebraic constraint holds to rounding.
pub fn limit_semi_discrete_step(
    p: &ModelParams,
    grid: &Grid,
    state: &LimitState,
    dt: f64,
) -> Result<LimitState> {
    let rate = |ubar: &CellField| {
        let vbar = equilibrium_v(p, grid, ubar);
        limit_ubar_rate(p, grid, ubar, &vbar)
    };
    let k1 = rate(&state.ubar);
    let k2 = rate(&axpy(&state.ubar, 0.5 * dt, &k1));
    let k3 = rate(&axpy(&state.ubar, 0.5 * dt, &k2));
    let k4 = rate(&axpy(&state.ubar, dt, &k3));
    let t = state.t + dt;
    let ubar = rk4_combine(&state.ubar, dt, [&k1, &k2, &k3, &k4]);
    check_finite(&ubar, "ubar", t)?;
    let next = LimitState::from_ubar(p, grid, ubar, t);
    check_finite(&next.vbar, "vbar", t)?;
    Ok(next)
}

/// Which pair of schemes advances a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeKind {
    /// Splitting scheme paired with its `eps = 0` limit.
    Jpt,
    /// RK4 on the semi-discrete relaxation and limit systems.
    SemiDiscrete,
}

impl SchemeKind {
    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::Jpt => "jpt",
            SchemeKind::SemiDiscrete => "semi-discrete",
        }
    }

    pub fn step_size(self, p: &ModelParams, grid: &Grid) -> StepSize {
        match self {
            SchemeKind::Jpt => paired_dt(p, grid),
            SchemeKind::SemiDiscrete => semi_discrete_dt(p, grid),
        }
    }

    pub fn advance(
        self,
        p: &ModelParams,
        grid: &Grid,
        hyperbolic: &HyperbolicState,
        limit: &LimitState,
        dt: f64,
    ) -> Result<(HyperbolicState, LimitState)> {
        match self {
            SchemeKind::Jpt => Ok((
                jpt_step(p, grid, hyperbolic, dt)?,
                limit_step(p, grid, limit, dt)?,
            )),
            SchemeKind::SemiDiscrete => Ok((
                semi_discrete_step(p, grid, hyperbolic, dt)?,
                limit_semi_discrete_step(p, grid, limit, dt)?,
            )),
        }
    }
}

impl std::str::FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "jpt" => Ok(SchemeKind::Jpt),
            "semi-discrete" | "semi_discrete" | "semidiscrete" => Ok(SchemeKind::SemiDiscrete),
            other => Err(Error::Config(format!(
                "unknown scheme `{other}` (expected jpt or semi-discrete)"
            ))),
        }
    }
}

/// Squared distance `sum_i dx (|u - ubar|^2 + |v - vbar|^2)` at one time.
pub fn squared_distance(grid: &Grid, h: &HyperbolicState, l: &LimitState) -> f64 {
    let su: f64 =
        h.u.iter()
            .zip(l.ubar.iter())
            .map(|(a, b)| (a - b).powi(2))
            .sum();
    let sv: f64 =
        h.v.iter()
            .zip(l.vbar.iter())
            .map(|(a, b)| (a - b).powi(2))
            .sum();
    grid.dx * (su + sv)
}

/// Advances both semi-discrete systems from `t = 0` with the given step and
/// records every time level (`n_steps + 1` entries).
pub fn integrate_semi_discrete(
    p: &ModelParams,
    grid: &Grid,
    hyperbolic: HyperbolicState,
    limit: LimitState,
    step: StepSize,
) -> Result<Vec<SolutionPair>> {
    grid.check_field(&hyperbolic.u)?;
    grid.check_field(&limit.ubar)?;
    let mut trajectory = Vec::with_capacity(step.n_steps + 1);
    let mut current = SolutionPair {
        hyperbolic,
        limit,
        l2err_sq: 0.0,
    };
    for _ in 0..step.n_steps {
        let gap = squared_distance(grid, &current.hyperbolic, &current.limit);
        let (h, l) = SchemeKind::SemiDiscrete.advance(
            p,
            grid,
            &current.hyperbolic,
            &current.limit,
            step.dt,
        )?;
        let next = SolutionPair {
            hyperbolic: h,
            limit: l,
            l2err_sq: current.l2err_sq + step.dt * gap,
        };
        trajectory.push(std::mem::replace(&mut current, next));
    }
    trajectory.push(current);
    Ok(trajectory)
}
