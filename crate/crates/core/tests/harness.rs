use approx::assert_relative_eq;
use jinxin::diagnostics::{phi_total, theorem_bound_check};
use jinxin::harness::{
    convergence_study, fit_rate, run_pair, run_pair_with, study_csv, RunConfig, RunOptions,
};
use jinxin::model::{convexity_bounds, ModelParams};
use jinxin::schemes::{squared_distance, SchemeKind};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Centers of the steepest `u` gradients left and right of the midpoint.
fn front_positions(x: &[f64], u: &[f64]) -> (f64, f64) {
    let n = u.len();
    let grad: Vec<f64> = (0..n - 1).map(|i| (u[i + 1] - u[i]).abs()).collect();
    let argmax =
        |range: std::ops::Range<usize>| range.max_by(|&a, &b| grad[a].total_cmp(&grad[b])).unwrap();
    let left = argmax(0..n / 2 - 2);
    let right = argmax(n / 2 + 1..n - 1);
    (
        0.5 * (x[left] + x[left + 1]),
        0.5 * (x[right] + x[right + 1]),
    )
}

#[test]
fn reference_run_has_two_waves_and_a_diffused_front() {
    let run = run_pair(&RunConfig::default()).unwrap();
    let last = run.final_state();
    let x = &run.grid.centers;
    // relaxation solution: fronts travelling at -lambda and +lambda
    let (left, right) = front_positions(x, &last.hyperbolic.u);
    let reach = 0.72 * 0.1;
    assert!((left - (0.5 - reach)).abs() < 0.02, "left wave at {left}");
    assert!(
        (right - (0.5 + reach)).abs() < 0.02,
        "right wave at {right}"
    );
    // limit solution: a single monotone front between the far-field states
    let ubar = &last.limit.ubar;
    assert!(ubar.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    // diffusion length sqrt(4 lambda^2 T) ~ 0.46 spreads the front over the domain
    assert!(ubar[0] > 1.8 && ubar[0] <= 2.0);
    assert!(ubar[ubar.len() - 1] < 1.2 && ubar[ubar.len() - 1] >= 1.0);
    let steepest = ubar
        .windows(2)
        .map(|w| (w[0] - w[1]).abs())
        .fold(0.0, f64::max);
    assert!(steepest < 0.1, "limit front too sharp: {steepest}");
    assert!(run.series.is_monotone());
}

#[test]
fn burgers_reference_run_is_stable() {
    let config = RunConfig {
        params: ModelParams::burgers(1.0, 3.0),
        ..RunConfig::default()
    };
    let run = run_pair(&config).unwrap();
    assert!(run.l2err_sq.is_finite() && run.l2err_sq > 0.0);
    assert!(run.series.rows.iter().all(|r| r.phi.is_none()));
    assert!(run.series.is_monotone());
    let last = run.final_state();
    for &u in last.hyperbolic.u.iter().chain(last.limit.ubar.iter()) {
        assert!(u.is_finite() && (0.9..=2.1).contains(&u), "u = {u}");
    }
    assert!(run.budget.is_none());
}

#[test]
fn semi_discrete_run_carries_budget_summary() {
    let config = RunConfig {
        params: ModelParams::linear(0.2, 0.72, 0.5),
        n_cells: 60,
        scheme: SchemeKind::SemiDiscrete,
        ..RunConfig::default()
    };
    let run = run_pair(&config).unwrap();
    let budget = run.budget.as_ref().unwrap();
    assert!(budget.passed(), "{budget:?}");
    assert_eq!(budget.levels_checked, run.step.n_steps);
    assert!(run.mass.is_none());
}

#[test]
fn series_matches_direct_recomputation() {
    let config = RunConfig {
        n_cells: 40,
        record_every: 1,
        ..RunConfig::default()
    };
    let run = run_pair(&config).unwrap();
    // left-endpoint sum over the dumped levels equals the recorded total
    let mut total = 0.0;
    for w in run.snapshots.windows(2) {
        let dt = w[1].hyperbolic.t - w[0].hyperbolic.t;
        total += dt * squared_distance(&run.grid, &w[0].hyperbolic, &w[0].limit);
    }
    assert_relative_eq!(total, run.l2err_sq, max_relative = 1e-12);
    for (snap, row) in run.snapshots.iter().zip(&run.series.rows) {
        let phi = phi_total(&config.params, &run.grid, &snap.hyperbolic, &snap.limit).unwrap();
        assert_eq!(row.phi, Some(phi));
    }
}

#[test]
fn l2_error_is_sandwiched_by_integrated_phi() {
    let config = RunConfig {
        n_cells: 50,
        ..RunConfig::default()
    };
    let run = run_pair(&config).unwrap();
    let bounds = convexity_bounds(&config.params).unwrap();
    let rows = &run.series.rows;
    let phi_integral: f64 = rows
        .windows(2)
        .map(|w| (w[1].t - w[0].t) * w[0].phi.unwrap())
        .sum();
    assert!(run.l2err_sq >= 2.0 / bounds.beta1 * phi_integral * (1.0 - 1e-12));
    assert!(run.l2err_sq <= 2.0 / bounds.beta0 * phi_integral * (1.0 + 1e-12));
}

#[test]
fn theorem_budget_shrinks_with_eps() {
    let mut gaps = Vec::new();
    for eps in [0.1, 0.05] {
        let config = RunConfig {
            params: ModelParams::linear(eps, 0.72, 0.5),
            scheme: SchemeKind::SemiDiscrete,
            well_prepared: true,
            n_cells: 100,
            ..RunConfig::default()
        };
        let run = run_pair_with(&config, RunOptions::lean()).unwrap();
        let check = theorem_bound_check(&run.series, &config.params, &run.grid).unwrap();
        assert!(check.satisfied);
        let gap = check.sup_phi - check.phi0;
        assert!(gap <= check.b_meas * eps.powi(4));
        gaps.push(gap);
    }
    // the gap stays inside a budget that drops 16-fold, and decreases
    assert!(gaps[1] < gaps[0], "{gaps:?}");
}

#[test]
fn study_is_ordered_and_deterministic() {
    let base = RunConfig {
        well_prepared: true,
        ..RunConfig::default()
    };
    let eps = [0.1, 0.05, 0.025];
    let a = convergence_study(&base, &eps).unwrap();
    let b = convergence_study(&base, &eps).unwrap();
    assert_eq!(a.epsilons(), eps.to_vec());
    assert_eq!(study_csv(&a), study_csv(&b));
    let errors = a.errors();
    assert!(errors.windows(2).all(|w| w[1].1 < w[0].1));
    assert!(a.points.iter().all(|p| p.n_cells == 200));
}

#[test]
fn noisy_power_law_fit_matches_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let eps: Vec<f64> = (0..10).map(|k| 0.1 * 0.7f64.powi(k)).collect();
    let points: Vec<(f64, f64)> = eps
        .iter()
        .map(|&e| (e, 2.0 * e.powi(4) * (1.0 + rng.gen_range(-0.01..0.01))))
        .collect();
    // closed-form OLS in log-log coordinates
    let n = points.len() as f64;
    let (sx, sy, sxx, sxy) = points
        .iter()
        .fold((0.0, 0.0, 0.0, 0.0), |(a, b, c, d), &(e, y)| {
            let (x, y) = (e.ln(), y.ln());
            (a + x, b + y, c + x * x, d + x * y)
        });
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let fit = fit_rate(&points).unwrap();
    assert_relative_eq!(fit.slope, slope, max_relative = 1e-10);
    assert!((fit.slope - 4.0).abs() < 0.1);
}

proptest! {
    #[test]
    fn fit_recovers_exact_power_laws(
        coef in 1e-3f64..1e3,
        rate in -2.0f64..6.0,
        count in 2usize..9,
    ) {
        let points: Vec<(f64, f64)> =
            (0..count).map(|k| { let e = 0.2 / 2f64.powi(k as i32); (e, coef * e.powf(rate)) }).collect();
        let fit = fit_rate(&points).unwrap();
        prop_assert!((fit.slope - rate).abs() < 1e-9);
        prop_assert!((fit.intercept - coef.ln()).abs() < 1e-8);
    }

    #[test]
    fn config_text_round_trips(
        eps in 1e-4f64..2.0,
        lambda in 0.5f64..5.0,
        n_cells in 3usize..5000,
        well_prepared in any::<bool>(),
        semi in any::<bool>(),
        record_every in 0usize..1000,
    ) {
        let mut c = RunConfig::default();
        c.params.eps = eps;
        c.params.lambda = lambda;
        c.n_cells = n_cells;
        c.well_prepared = well_prepared;
        c.scheme = if semi { SchemeKind::SemiDiscrete } else { SchemeKind::Jpt };
        c.record_every = record_every;
        let mut back = RunConfig::default();
        back.apply_config_text(&c.to_config_text()).unwrap();
        prop_assert_eq!(back, c);
    }
}
