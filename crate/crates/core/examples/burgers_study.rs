//! Same sweep as `convergence_study` with `f(u) = u^2/2` and `lambda = 3`.
//! Usage: `cargo run --release --example burgers_study [OUT_DIR]`.

use std::path::PathBuf;

use jinxin::harness::{convergence_study, write_study, RunConfig, REFERENCE_EPS_LIST};
use jinxin::model::ModelParams;

fn main() -> jinxin::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("target/example-out/burgers_study"));

    let config = RunConfig {
        params: ModelParams::burgers(1.0, 3.0),
        well_prepared: true,
        ..RunConfig::default()
    };
    let study = convergence_study(&config, &REFERENCE_EPS_LIST)?;
    for p in &study.points {
        match &p.outcome {
            Ok(err) => println!("eps {:.4e}  n {:>4}  err {err:.4e}", p.eps, p.n_cells),
            Err(msg) => println!("eps {:.4e}  failed: {msg}", p.eps),
        }
    }
    if let Some(fit) = study.fit {
        println!("fitted slope {:.3}", fit.slope);
    }
    write_study(&out.join("study.csv"), &study)?;
    Ok(())
}
