//! Paired run on the reference Riemann problem; writes profiles and the
//! error series. Usage: `cargo run --example riemann_profiles [OUT_DIR]`.

use std::path::PathBuf;

use jinxin::harness::{run_pair, write_run_outputs, RunConfig};
use jinxin::model::ModelParams;

fn main() -> jinxin::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("target/example-out/riemann_profiles"));

    for (name, params) in [
        ("linear", ModelParams::linear(1.0, 0.72, 0.5)),
        ("burgers", ModelParams::burgers(1.0, 3.0)),
    ] {
        let config = RunConfig {
            params,
            record_every: 1000,
            ..RunConfig::default()
        };
        let run = run_pair(&config)?;
        let last = run.final_state();
        println!(
            "{name}: {} steps, l2err_sq = {:.4e}",
            run.step.n_steps, run.l2err_sq
        );
        println!(
            "  {:>8} {:>10} {:>10} {:>10} {:>10}",
            "x", "u", "v", "ubar", "vbar"
        );
        for i in (0..run.grid.n_cells).step_by(20) {
            println!(
                "  {:>8.4} {:>10.5} {:>10.5} {:>10.5} {:>10.5}",
                run.grid.centers[i],
                last.hyperbolic.u[i],
                last.hyperbolic.v[i],
                last.limit.ubar[i],
                last.limit.vbar[i]
            );
        }
        let written = write_run_outputs(&out.join(name), &run)?;
        println!(
            "  wrote {} files under {}",
            written.len(),
            out.join(name).display()
        );
    }
    Ok(())
}
