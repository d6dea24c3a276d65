//! Finite-volume laboratory for the linear Jin-Xin relaxation system
//!
//! ```text
//!   u_t + v_x = 0,    eps^2 v_t + lambda^2 u_x = f(u) - v
//! ```
//!
//! and its convection-diffusion limit as `eps -> 0`. The crate pairs each
//! relaxation solver with a solver for the limit equation on the same grid,
//! measures the distance between the two with a relative entropy, and fits
//! the rate at which that distance vanishes with `eps`.
//!
//! * [`model`]: parameters, grids, entropy algebra, initial data
//! * [`schemes`]: splitting scheme, limit scheme, semi-discrete systems
//! * [`diagnostics`]: relative entropy budget, residual estimates, bounds
//! * [`harness`]: paired runs, `eps` sweeps, rate fits, CSV output
//! * [`cli`]: the `run` / `study` / `verify` entry point

pub mod cli;
pub mod diagnostics;
pub mod error;
pub mod harness;
pub mod model;
pub mod sampling;
pub mod schemes;

pub use error::{Error, Result};
pub use model::{CellField, FluxKind, Grid, ModelParams};
pub use schemes::{HyperbolicState, LimitState, SchemeKind, SolutionPair, StepSize};
