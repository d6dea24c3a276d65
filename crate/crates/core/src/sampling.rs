//! Seeded random states for property checks.

use std::f64::consts::TAU;

use rand::Rng;

use crate::model::{CellField, Grid, ModelParams};
use crate::schemes::{HyperbolicState, LimitState};

/// A random trigonometric polynomial with `modes` modes: a constant plus
/// `sum_k c_k sin(2 pi k x + phase_k)`, `|c_k| <= amplitude / k`.
pub fn random_smooth_field<R: Rng + ?Sized>(
    grid: &Grid,
    rng: &mut R,
    modes: usize,
    amplitude: f64,
) -> CellField {
    let offset = rng.gen_range(-amplitude..amplitude);
    let terms: Vec<(f64, f64, f64)> = (1..=modes)
        .map(|k| {
            let c = rng.gen_range(-amplitude..amplitude) / k as f64;
            (k as f64, c, rng.gen_range(0.0..TAU))
        })
        .collect();
    let len = grid.length();
    CellField::from_fn(grid, |x| {
        let s = (x - grid.x_min) / len;
        offset
            + terms
                .iter()
                .map(|&(k, c, ph)| c * (TAU * k * s + ph).sin())
                .sum::<f64>()
    })
}

/// A random pair of smooth states; the limit state satisfies the discrete
/// closure, the relaxation state is an independent smooth perturbation.
pub fn random_smooth_pair<R: Rng + ?Sized>(
    p: &ModelParams,
    grid: &Grid,
    rng: &mut R,
) -> (HyperbolicState, LimitState) {
    let ubar = random_smooth_field(grid, rng, 4, 1.0).map(|x| x + 1.5);
    let limit = LimitState::from_ubar(p, grid, ubar, 0.0);
    let du = random_smooth_field(grid, rng, 4, 0.5);
    let dv = random_smooth_field(grid, rng, 4, 0.5);
    let hyperbolic = HyperbolicState {
        u: limit.ubar.zip_map(&du, |a, b| a + b),
        v: limit.vbar.zip_map(&dv, |a, b| a + b),
        t: 0.0,
    };
    (hyperbolic, limit)
}
