//! Per-cell relative-entropy evolution law on random smooth states, and the
//! residual estimates integrated along a semi-discrete trajectory.

use jinxin::diagnostics::entropy_budget;
use jinxin::harness::{run_pair_with, RunConfig, RunOptions};
use jinxin::model::{Grid, ModelParams};
use jinxin::sampling::random_smooth_pair;
use jinxin::schemes::SchemeKind;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> jinxin::Result<()> {
    let grid = Grid::uniform(50, 0.0, 1.0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for eps in [1.0, 0.1] {
        let p = ModelParams::linear(eps, 0.72, 0.5);
        let (h, l) = random_smooth_pair(&p, &grid, &mut rng);
        let b = entropy_budget(&p, &grid, &h, &l)?;
        let i = grid.n_cells / 3;
        println!("eps = {eps}, cell {i}:");
        println!("  dE/dt          {:+.6e}", b.entropy_rate[i]);
        println!(
            "  flux jump/dx   {:+.6e}",
            (b.interface_flux[i + 1] - b.interface_flux[i]) / grid.dx
        );
        println!("  dissipation    {:+.6e}", b.dissipation[i]);
        println!("  forcing        {:+.6e}", b.forcing[i]);
        let r = &b.residuals;
        println!(
            "  R1..R4         {:+.3e} {:+.3e} {:+.3e} {:+.3e}",
            r.r1[i], r.r2[i], r.r3[i], r.r4[i]
        );
        println!(
            "  max relative mismatch over cells {:.3e}",
            b.max_relative_mismatch()
        );
    }

    let config = RunConfig {
        params: ModelParams::linear(0.1, 0.72, 0.5),
        scheme: SchemeKind::SemiDiscrete,
        ..RunConfig::default()
    };
    let run = run_pair_with(
        &config,
        RunOptions {
            check_budget: true,
            ..RunOptions::lean()
        },
    )?;
    let budget = run.budget.expect("linear semi-discrete run");
    println!(
        "\nsemi-discrete trajectory, eps = 0.1, {} levels",
        budget.levels_checked
    );
    for e in &budget.final_report.estimates {
        println!(
            "  {:<24} lhs {:+.6e}  rhs {:+.6e}  {}",
            e.name,
            e.lhs,
            e.rhs,
            if e.passed { "ok" } else { "VIOLATED" }
        );
    }
    println!(
        "  levels with a violated estimate: {}",
        budget.residual_failures
    );
    Ok(())
}
