//! `sup_t phi(t) <= phi(0) + B eps^4` with `B` measured on the run, for
//! well-prepared data.

use jinxin::diagnostics::theorem_bound_check;
use jinxin::harness::{run_pair_with, RunConfig, RunOptions};
use jinxin::model::ModelParams;
use jinxin::schemes::SchemeKind;

fn main() -> jinxin::Result<()> {
    println!(
        "{:>8} {:>12} {:>12} {:>12} {:>9}",
        "eps", "sup phi", "B", "bound", "holds"
    );
    for eps in [0.1, 0.05, 0.025] {
        let config = RunConfig {
            params: ModelParams::linear(eps, 0.72, 0.5),
            scheme: SchemeKind::SemiDiscrete,
            well_prepared: true,
            ..RunConfig::default()
        };
        let run = run_pair_with(&config, RunOptions::lean())?;
        let c = theorem_bound_check(&run.series, &config.params, &run.grid)?;
        println!(
            "{eps:>8} {:>12.4e} {:>12.4e} {:>12.4e} {:>9}",
            c.sup_phi, c.b_meas, c.bound, c.satisfied
        );
    }
    Ok(())
}
