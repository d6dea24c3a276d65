//! Model parameters, grids and the closed-form entropy algebra of the
//! linear relaxation system
//!
//! ```text
//!   u_t + v_x = 0
//!   eps^2 v_t + lambda^2 u_x = f(u) - v
//! ```
//!
//! and of its diffusive limit `ubar_t + f(ubar)_x = lambda^2 ubar_xx`,
//! `vbar = f(ubar) - lambda^2 ubar_x`.
//!
//! Cell fields use copy (zero-gradient) ghost cells on both ends, so the
//! far-field states are whatever sits in the first and last cell.

use std::ops::{Deref, DerefMut};

use crate::error::{Error, Result};
use crate::schemes::{HyperbolicState, LimitState};

/// Relaxation function `f` in the source term `f(u) - v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FluxKind {
    /// `f(u) = a u`, with `a` taken from [`ModelParams::a`].
    Linear,
    /// `f(u) = u^2 / 2`.
    Burgers,
}

impl FluxKind {
    pub fn name(self) -> &'static str {
        match self {
            FluxKind::Linear => "linear",
            FluxKind::Burgers => "burgers",
        }
    }
}

impl std::str::FromStr for FluxKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "linear" => Ok(FluxKind::Linear),
            "burgers" => Ok(FluxKind::Burgers),
            other => Err(Error::Config(format!(
                "unknown flux `{other}` (expected linear or burgers)"
            ))),
        }
    }
}

/// Physical and numerical constants of one run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Relaxation parameter, `eps > 0`.
    pub eps: f64,
    /// Characteristic speed of the relaxation system, `lambda > 0`.
    pub lambda: f64,
    /// Transport coefficient of the linear flux (ignored for Burgers).
    pub a: f64,
    pub flux: FluxKind,
    /// CFL safety factor in `(0, 1]`.
    pub cfl: f64,
    pub t_final: f64,
}

impl ModelParams {
    /// Linear flux with the reference CFL factor 0.95 and final time 0.1.
    pub fn linear(eps: f64, lambda: f64, a: f64) -> Self {
        ModelParams {
            eps,
            lambda,
            a,
            flux: FluxKind::Linear,
            cfl: 0.95,
            t_final: 0.1,
        }
    }

    /// Burgers flux `u^2/2` with the reference CFL factor and final time.
    pub fn burgers(eps: f64, lambda: f64) -> Self {
        ModelParams {
            eps,
            lambda,
            a: 0.0,
            flux: FluxKind::Burgers,
            cfl: 0.95,
            t_final: 0.1,
        }
    }

    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps = eps;
        self
    }

    pub fn with_cfl(mut self, cfl: f64) -> Self {
        self.cfl = cfl;
        self
    }

    pub fn with_t_final(mut self, t_final: f64) -> Self {
        self.t_final = t_final;
        self
    }

    /// Checks the positivity constraints (not the subcharacteristic condition).
    pub fn validate(&self) -> Result<()> {
        let finite_pos = |x: f64| x.is_finite() && x > 0.0;
        if !finite_pos(self.eps) {
            return Err(Error::InvalidParameter(format!(
                "eps must be > 0, got {}",
                self.eps
            )));
        }
        if !finite_pos(self.lambda) {
            return Err(Error::InvalidParameter(format!(
                "lambda must be > 0, got {}",
                self.lambda
            )));
        }
        if !self.a.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "a must be finite, got {}",
                self.a
            )));
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "cfl must lie in (0, 1], got {}",
                self.cfl
            )));
        }
        if !finite_pos(self.t_final) {
            return Err(Error::InvalidParameter(format!(
                "t_final must be > 0, got {}",
                self.t_final
            )));
        }
        Ok(())
    }

    #[inline]
    pub fn flux_eval(&self, u: f64) -> f64 {
        flux_eval(self.flux, self.a, u)
    }

    #[inline]
    pub fn flux_derivative(&self, u: f64) -> f64 {
        match self.flux {
            FluxKind::Linear => self.a,
            FluxKind::Burgers => u,
        }
    }

    /// Right-hand side of the strict inequality `lambda > bound`.
    ///
    /// For Burgers the bound uses `max |u|` over the initial data, which the
    /// maximum principle propagates to later times.
    pub fn subcharacteristic_bound(&self, max_abs_u: f64) -> f64 {
        match self.flux {
            FluxKind::Linear => self.eps * self.a.abs(),
            FluxKind::Burgers => self.eps * max_abs_u.abs(),
        }
    }

    /// The quadratic entropy pair. Fails for the nonlinear flux, whose
    /// entropy has no closed form.
    pub fn entropy_pair(&self) -> Result<EntropyPair> {
        match self.flux {
            FluxKind::Linear => Ok(EntropyPair {
                lambda: self.lambda,
                lambda2: self.lambda * self.lambda,
                eps2: self.eps * self.eps,
                a: self.a,
            }),
            FluxKind::Burgers => Err(Error::NonlinearEntropy),
        }
    }
}

#[inline]
pub fn flux_eval(flux: FluxKind, a: f64, u: f64) -> f64 {
    match flux {
        FluxKind::Linear => a * u,
        FluxKind::Burgers => 0.5 * u * u,
    }
}

/// `lambda > eps |a|` for the linear flux, `lambda > eps max|u|` for Burgers.
pub fn check_subcharacteristic(p: &ModelParams, max_abs_u: f64) -> bool {
    p.lambda > p.subcharacteristic_bound(max_abs_u)
}

/// Entropy `E`, entropy flux `F` and their relative counterparts for the
/// linear flux `f(u) = a u`. All four are quadratic forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyPair {
    pub lambda: f64,
    pub lambda2: f64,
    pub eps2: f64,
    pub a: f64,
}

impl EntropyPair {
    #[inline]
    pub fn entropy(&self, u: f64, v: f64) -> f64 {
        0.5 * self.lambda2 * u * u + 0.5 * self.eps2 * v * v - self.eps2 * self.a * u * v
    }

    #[inline]
    pub fn flux(&self, u: f64, v: f64) -> f64 {
        -0.5 * self.lambda2 * self.a * u * u - 0.5 * self.eps2 * self.a * v * v
            + self.lambda2 * u * v
    }

    #[inline]
    pub fn gradient(&self, u: f64, v: f64) -> (f64, f64) {
        (
            self.lambda2 * u - self.eps2 * self.a * v,
            self.eps2 * v - self.eps2 * self.a * u,
        )
    }

    /// `E(w | wbar)`; depends on the difference only since `E` is quadratic.
    #[inline]
    pub fn relative(&self, w: (f64, f64), wbar: (f64, f64)) -> f64 {
        self.entropy(w.0 - wbar.0, w.1 - wbar.1)
    }

    #[inline]
    pub fn relative_flux(&self, w: (f64, f64), wbar: (f64, f64)) -> f64 {
        self.flux(w.0 - wbar.0, w.1 - wbar.1)
    }
}

pub fn entropy(p: &ModelParams, u: f64, v: f64) -> Result<f64> {
    Ok(p.entropy_pair()?.entropy(u, v))
}

pub fn entropy_flux(p: &ModelParams, u: f64, v: f64) -> Result<f64> {
    Ok(p.entropy_pair()?.flux(u, v))
}

pub fn relative_entropy(p: &ModelParams, w: (f64, f64), wbar: (f64, f64)) -> Result<f64> {
    Ok(p.entropy_pair()?.relative(w, wbar))
}

pub fn relative_entropy_flux(p: &ModelParams, w: (f64, f64), wbar: (f64, f64)) -> Result<f64> {
    Ok(p.entropy_pair()?.relative_flux(w, wbar))
}

/// Extreme eigenvalues of the (constant) entropy Hessian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvexityBounds {
    pub beta0: f64,
    pub beta1: f64,
}

/// Eigenvalues of `[[lambda^2, -eps^2 a], [-eps^2 a, eps^2]]`.
pub fn convexity_bounds(p: &ModelParams) -> Result<ConvexityBounds> {
    let pair = p.entropy_pair()?;
    if !check_subcharacteristic(p, 0.0) {
        return Err(Error::Subcharacteristic {
            lambda: p.lambda,
            bound: p.subcharacteristic_bound(0.0),
        });
    }
    let h11 = pair.lambda2;
    let h22 = pair.eps2;
    let h12 = -pair.eps2 * pair.a;
    let half_gap = (0.25 * (h11 - h22).powi(2) + h12 * h12).sqrt();
    let beta1 = 0.5 * (h11 + h22) + half_gap;
    // det / beta1 avoids cancellation when beta0 << beta1
    let det = h11 * h22 - h12 * h12;
    Ok(ConvexityBounds {
        beta0: det / beta1,
        beta1,
    })
}

/// Uniform 1-D mesh of `n_cells` cells on `[x_min, x_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub n_cells: usize,
    pub x_min: f64,
    pub x_max: f64,
    pub dx: f64,
    pub centers: Vec<f64>,
}

impl Grid {
    pub fn uniform(n_cells: usize, x_min: f64, x_max: f64) -> Result<Self> {
        if n_cells < 3 {
            return Err(Error::InvalidParameter(format!(
                "need at least 3 cells, got {n_cells}"
            )));
        }
        if !(x_min.is_finite() && x_max.is_finite() && x_max > x_min) {
            return Err(Error::InvalidParameter(format!(
                "invalid domain [{x_min}, {x_max}]"
            )));
        }
        let dx = (x_max - x_min) / n_cells as f64;
        let centers = (0..n_cells)
            .map(|i| x_min + (i as f64 + 0.5) * dx)
            .collect();
        Ok(Grid {
            n_cells,
            x_min,
            x_max,
            dx,
            centers,
        })
    }

    pub fn length(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.x_min + self.x_max)
    }

    pub fn check_field(&self, field: &CellField) -> Result<()> {
        if field.len() != self.n_cells {
            return Err(Error::GridMismatch {
                expected: self.n_cells,
                found: field.len(),
            });
        }
        Ok(())
    }
}

/// Cell averages of one scalar quantity at one time.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CellField(pub Vec<f64>);

impl CellField {
    pub fn constant(n: usize, value: f64) -> Self {
        CellField(vec![value; n])
    }

    pub fn from_fn(grid: &Grid, f: impl Fn(f64) -> f64) -> Self {
        CellField(grid.centers.iter().map(|&x| f(x)).collect())
    }

    /// Values of the left and right neighbours of cell `i`, with copy ghosts.
    #[inline]
    pub fn neighbors(&self, i: usize) -> (f64, f64) {
        let n = self.0.len();
        let left = self.0[i.saturating_sub(1)];
        let right = self.0[if i + 1 < n { i + 1 } else { n - 1 }];
        (left, right)
    }

    pub fn first_non_finite(&self) -> Option<usize> {
        self.0.iter().position(|x| !x.is_finite())
    }

    /// `sum_i dx * values_i`.
    pub fn integral(&self, dx: f64) -> f64 {
        self.0.iter().sum::<f64>() * dx
    }

    pub fn zip_map(&self, other: &CellField, f: impl Fn(f64, f64) -> f64) -> CellField {
        CellField(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&x, &y)| f(x, y))
                .collect(),
        )
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> CellField {
        CellField(self.0.iter().map(|&x| f(x)).collect())
    }
}

impl Deref for CellField {
    type Target = Vec<f64>;
    fn deref(&self) -> &Vec<f64> {
        &self.0
    }
}

impl DerefMut for CellField {
    fn deref_mut(&mut self) -> &mut Vec<f64> {
        &mut self.0
    }
}

impl From<Vec<f64>> for CellField {
    fn from(values: Vec<f64>) -> Self {
        CellField(values)
    }
}

/// Constant far-field states `(u, v)` on either side of the domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryStates {
    pub left: (f64, f64),
    pub right: (f64, f64),
}

impl BoundaryStates {
    pub fn of(u: &CellField, v: &CellField) -> Self {
        let n = u.len();
        BoundaryStates {
            left: (u[0], v[0]),
            right: (u[n - 1], v[n - 1]),
        }
    }
}

/// Centered difference `(w_{i+1} - w_{i-1}) / (2 dx)`.
pub fn centered_difference(field: &CellField, dx: f64) -> CellField {
    let inv = 0.5 / dx;
    CellField(
        (0..field.len())
            .map(|i| {
                let (l, r) = field.neighbors(i);
                (r - l) * inv
            })
            .collect(),
    )
}

/// `(D_xx w)_i = (w_{i+1} - 2 w_i + w_{i-1}) / dx^2`.
pub fn second_difference(field: &CellField, dx: f64) -> CellField {
    let inv = 1.0 / (dx * dx);
    CellField(
        (0..field.len())
            .map(|i| {
                let (l, r) = field.neighbors(i);
                (r - 2.0 * field[i] + l) * inv
            })
            .collect(),
    )
}

/// `(D_x w)_{i+1/2} = (w_{i+1} - w_i) / dx` on the `n - 1` interior
/// interfaces. The two boundary interfaces vanish under copy ghosts.
pub fn interface_difference(field: &CellField, dx: f64) -> Vec<f64> {
    field.windows(2).map(|w| (w[1] - w[0]) / dx).collect()
}

/// Discrete closure `vbar_i = f(ubar_i) - lambda^2 (ubar_{i+1} - ubar_{i-1}) / (2 dx)`.
pub fn equilibrium_v(p: &ModelParams, grid: &Grid, ubar: &CellField) -> CellField {
    let coef = p.lambda * p.lambda / (2.0 * grid.dx);
    CellField(
        (0..ubar.len())
            .map(|i| {
                let (l, r) = ubar.neighbors(i);
                p.flux_eval(ubar[i]) - coef * (r - l)
            })
            .collect(),
    )
}

/// Riemann data `u = u_left` left of the domain midpoint, `u_right` elsewhere.
///
/// The limit state always satisfies the discrete closure. The hyperbolic
/// `v` is `f(u)` (pointwise equilibrium) unless `well_prepared`, in which
/// case it copies the limit `vbar` and the initial relative entropy is zero.
pub fn riemann_initial(
    p: &ModelParams,
    grid: &Grid,
    u_left: f64,
    u_right: f64,
    well_prepared: bool,
) -> (HyperbolicState, LimitState) {
    let mid = grid.midpoint();
    let u = CellField::from_fn(grid, |x| if x < mid { u_left } else { u_right });
    let vbar = equilibrium_v(p, grid, &u);
    let v = if well_prepared {
        vbar.clone()
    } else {
        u.map(|x| p.flux_eval(x))
    };
    (
        HyperbolicState {
            u: u.clone(),
            v,
            t: 0.0,
        },
        LimitState {
            ubar: u,
            vbar,
            t: 0.0,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn reference_params() -> ModelParams {
        ModelParams::linear(1.0, 0.72, 0.5)
    }

    #[test]
    fn subcharacteristic_examples() {
        assert!(check_subcharacteristic(&reference_params(), 0.0));
        assert!(!check_subcharacteristic(
            &ModelParams::linear(1.0, 0.5, 0.5),
            0.0
        ));
        assert!(check_subcharacteristic(
            &ModelParams::linear(0.01, 0.72, 0.5),
            0.0
        ));
        let b = ModelParams::burgers(1.0, 3.0);
        assert!(check_subcharacteristic(&b, 2.0));
        assert!(!check_subcharacteristic(&b, 3.0));
    }

    #[test]
    fn flux_examples() {
        assert_eq!(flux_eval(FluxKind::Linear, 0.5, 2.0), 1.0);
        assert_eq!(flux_eval(FluxKind::Burgers, 0.5, 2.0), 2.0);
        assert_eq!(flux_eval(FluxKind::Linear, 0.5, 0.0), 0.0);
    }

    #[test]
    fn entropy_examples() {
        let p = reference_params();
        assert_relative_eq!(entropy(&p, 1.0, 0.5).unwrap(), 0.1342, epsilon = 1e-14);
        assert_eq!(entropy(&p, 0.0, 0.0).unwrap(), 0.0);
        let q = ModelParams::linear(1.0, 1.0, 0.0);
        assert_relative_eq!(entropy(&q, 1.0, 1.0).unwrap(), 1.0);

        assert_relative_eq!(entropy_flux(&p, 1.0, 0.5).unwrap(), 0.0671, epsilon = 1e-14);
        assert_eq!(entropy_flux(&p, 0.0, 0.0).unwrap(), 0.0);
        assert_relative_eq!(entropy_flux(&q, 1.0, 1.0).unwrap(), 1.0);
    }

    #[test]
    fn relative_entropy_examples() {
        let p = reference_params();
        assert_eq!(relative_entropy(&p, (0.3, -1.2), (0.3, -1.2)).unwrap(), 0.0);
        assert_relative_eq!(
            relative_entropy(&p, (1.0, 0.5), (0.0, 0.0)).unwrap(),
            0.1342,
            epsilon = 1e-14
        );
        let q = ModelParams::linear(1.0, 1.0, 0.0);
        assert_relative_eq!(relative_entropy(&q, (3.0, 2.0), (2.0, 1.0)).unwrap(), 1.0);

        assert_eq!(
            relative_entropy_flux(&p, (1.0, 2.0), (1.0, 2.0)).unwrap(),
            0.0
        );
        assert_relative_eq!(
            relative_entropy_flux(&p, (1.5, 0.75), (0.5, 0.25)).unwrap(),
            0.0671,
            epsilon = 1e-14
        );
        assert_relative_eq!(
            relative_entropy_flux(&q, (1.0, -1.0), (0.0, 0.0)).unwrap(),
            -1.0
        );
    }

    #[test]
    fn burgers_has_no_entropy() {
        let b = ModelParams::burgers(1.0, 3.0);
        assert!(matches!(
            entropy(&b, 1.0, 1.0),
            Err(Error::NonlinearEntropy)
        ));
        assert!(entropy_flux(&b, 1.0, 1.0).is_err());
        assert!(relative_entropy(&b, (1.0, 1.0), (0.0, 0.0)).is_err());
        assert!(convexity_bounds(&b).is_err());
    }

    #[test]
    fn convexity_bounds_examples() {
        let id = convexity_bounds(&ModelParams::linear(1.0, 1.0, 0.0)).unwrap();
        assert_eq!((id.beta0, id.beta1), (1.0, 1.0));

        // frozen from a 30-digit symmetric eigensolver
        let b = convexity_bounds(&ModelParams::linear(0.1, 0.72, 0.5)).unwrap();
        assert_relative_eq!(b.beta0, 0.009_950_830_876_480_542, max_relative = 1e-12);
        assert_relative_eq!(b.beta1, 0.518_449_169_123_519_5, max_relative = 1e-12);
    }

    #[test]
    fn convexity_bounds_match_rayleigh_quotient_sweep() {
        // independent route: extremes of d^T H d over unit vectors
        for &(eps, lambda, a) in &[(0.1, 0.72, 0.5), (1.0, 0.72, 0.5), (0.3, 2.0, -4.0)] {
            let p = ModelParams::linear(eps, lambda, a);
            let b = convexity_bounds(&p).unwrap();
            let pair = p.entropy_pair().unwrap();
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            let n = 200_000;
            for k in 0..n {
                let th = std::f64::consts::PI * k as f64 / n as f64;
                let q = 2.0 * pair.entropy(th.cos(), th.sin());
                lo = lo.min(q);
                hi = hi.max(q);
            }
            assert_relative_eq!(b.beta0, lo, max_relative = 1e-8);
            assert_relative_eq!(b.beta1, hi, max_relative = 1e-8);
        }
    }

    #[test]
    fn convexity_bounds_reject_violation() {
        assert!(matches!(
            convexity_bounds(&ModelParams::linear(1.0, 0.5, 0.5)),
            Err(Error::Subcharacteristic { .. })
        ));
    }

    #[test]
    fn grid_layout() {
        let g = Grid::uniform(200, 0.0, 1.0).unwrap();
        assert_relative_eq!(g.dx, 0.005);
        assert_relative_eq!(g.centers[0], 0.0025);
        assert_relative_eq!(g.centers[199], 0.9975);
        assert!(Grid::uniform(2, 0.0, 1.0).is_err());
        assert!(Grid::uniform(10, 1.0, 1.0).is_err());
    }

    #[test]
    fn equilibrium_v_examples() {
        let p = reference_params();
        let g = Grid::uniform(40, 0.0, 1.0).unwrap();
        let c = CellField::constant(40, 1.7);
        let v = equilibrium_v(&p, &g, &c);
        assert!(v.iter().all(|&x| x == 0.5 * 1.7));

        let q = ModelParams::linear(1.0, 1.0, 0.0);
        let lin = CellField::from_fn(&g, |x| x);
        let v = equilibrium_v(&q, &g, &lin);
        for &vi in &v[1..39] {
            assert_relative_eq!(vi, -1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn equilibrium_v_spike_at_riemann_jump() {
        let p = reference_params();
        let g = Grid::uniform(200, 0.0, 1.0).unwrap();
        let (_, lim) = riemann_initial(&p, &g, 2.0, 1.0, false);
        let spike = p.lambda * p.lambda * 1.0 / (2.0 * g.dx);
        assert_relative_eq!(lim.vbar[99] - 1.0, spike, max_relative = 1e-14);
        assert_relative_eq!(lim.vbar[100] - 0.5, spike, max_relative = 1e-14);
        assert_eq!(lim.vbar[98], 1.0);
        assert_eq!(lim.vbar[101], 0.5);
    }

    #[test]
    fn riemann_initial_examples() {
        let p = reference_params();
        let g = Grid::uniform(200, 0.0, 1.0).unwrap();
        let (h, lim) = riemann_initial(&p, &g, 2.0, 1.0, false);
        assert!(h.u[..100].iter().all(|&x| x == 2.0));
        assert!(h.u[100..].iter().all(|&x| x == 1.0));
        assert!(h.v[..100].iter().all(|&x| x == 1.0));
        assert!(h.v[100..].iter().all(|&x| x == 0.5));
        assert_eq!(lim.ubar, h.u);

        let (h, lim) = riemann_initial(&p, &g, 1.3, 1.3, false);
        assert!(h.v.iter().all(|&x| x == 0.65));
        assert_eq!(h.v, lim.vbar);

        let (h, lim) = riemann_initial(&p, &g, 2.0, 1.0, true);
        assert_eq!(h.v, lim.vbar);
        assert_eq!(h.u, lim.ubar);
    }

    #[test]
    fn parameter_validation() {
        assert!(reference_params().validate().is_ok());
        assert!(reference_params().with_eps(0.0).validate().is_err());
        assert!(reference_params().with_cfl(1.5).validate().is_err());
        assert!(reference_params().with_t_final(-1.0).validate().is_err());
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn relative_entropy_is_taylor_remainder(
                u in -5.0..5.0f64, v in -5.0..5.0f64,
                ub in -5.0..5.0f64, vb in -5.0..5.0f64,
                eps in 0.01..2.0f64, a in -1.0..1.0f64,
            ) {
                let p = ModelParams::linear(eps, 0.72 + eps * a.abs(), a);
                let pair = p.entropy_pair().unwrap();
                let (gu, gv) = pair.gradient(ub, vb);
                let taylor = pair.entropy(u, v) - pair.entropy(ub, vb) - gu * (u - ub) - gv * (v - vb);
                let rel = pair.relative((u, v), (ub, vb));
                let scale = 1.0 + pair.entropy(u, v).abs() + pair.entropy(ub, vb).abs();
                prop_assert!((taylor - rel).abs() <= 1e-12 * scale);
            }

            #[test]
            fn relative_entropy_sandwich(
                du in -10.0..10.0f64, dv in -10.0..10.0f64,
                eps in 0.001..3.0f64, lambda in 0.1..3.0f64, frac in -0.999..0.999f64,
            ) {
                // |a| < lambda / eps keeps the subcharacteristic condition
                let p = ModelParams::linear(eps, lambda, frac * lambda / eps);
                let b = convexity_bounds(&p).unwrap();
                let e = relative_entropy(&p, (du, dv), (0.0, 0.0)).unwrap();
                let d2 = du * du + dv * dv;
                let tol = 1e-12 * (1.0 + b.beta1 * d2);
                prop_assert!(e >= 0.5 * b.beta0 * d2 - tol);
                prop_assert!(e <= 0.5 * b.beta1 * d2 + tol);
            }

            #[test]
            fn convexity_trace_and_determinant(
                eps in 0.001..3.0f64, lambda in 0.1..3.0f64, frac in -0.999..0.999f64,
            ) {
                let a = frac * lambda / eps;
                let b = convexity_bounds(&ModelParams::linear(eps, lambda, a)).unwrap();
                let tr = lambda * lambda + eps * eps;
                let det = eps * eps * (lambda * lambda - eps * eps * a * a);
                prop_assert!(b.beta0 > 0.0 && b.beta0 <= b.beta1);
                prop_assert!(((b.beta0 + b.beta1) - tr).abs() <= 1e-12 * tr);
                prop_assert!((b.beta0 * b.beta1 - det).abs() <= 1e-10 * det.max(1e-300) + 1e-15 * tr * tr);
            }

            #[test]
            fn equilibrium_of_constant_is_flux(c in -4.0..4.0f64, n in 3usize..60) {
                let g = Grid::uniform(n, 0.0, 1.0).unwrap();
                for p in [ModelParams::linear(0.3, 0.72, 0.5), ModelParams::burgers(1.0, 3.0)] {
                    let v = equilibrium_v(&p, &g, &CellField::constant(n, c));
                    prop_assert!(v.iter().all(|&x| x == p.flux_eval(c)));
                }
            }
        }
    }
}
