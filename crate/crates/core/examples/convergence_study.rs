//! Rate of `||(u, v) - (ubar, vbar)||^2` in `eps` for the linear flux, for
//! both initializations of the relaxation solution.
//! Usage: `cargo run --release --example convergence_study [OUT_DIR]`.

use std::path::PathBuf;

use jinxin::harness::{convergence_study, write_study, RunConfig, REFERENCE_EPS_LIST};

fn main() -> jinxin::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("target/example-out/convergence_study"));

    for well_prepared in [true, false] {
        let config = RunConfig {
            well_prepared,
            ..RunConfig::default()
        };
        let study = convergence_study(&config, &REFERENCE_EPS_LIST)?;
        println!("well_prepared = {well_prepared}");
        let errors = study.errors();
        for (k, &(eps, err)) in errors.iter().enumerate() {
            let local = k
                .checked_sub(1)
                .map(|j| (errors[j].1 / err).ln() / (errors[j].0 / eps).ln());
            let n_cells = study.points[k].n_cells;
            match local {
                Some(s) => {
                    println!("  eps {eps:.4e}  n {n_cells:>4}  err {err:.4e}  local slope {s:.2}")
                }
                None => println!("  eps {eps:.4e}  n {n_cells:>4}  err {err:.4e}"),
            }
        }
        if let Some(fit) = study.fit {
            println!("  fitted slope {:.3}", fit.slope);
        }
        let name = if well_prepared {
            "study_well_prepared.csv"
        } else {
            "study_equilibrium.csv"
        };
        write_study(&out.join(name), &study)?;
    }
    Ok(())
}
