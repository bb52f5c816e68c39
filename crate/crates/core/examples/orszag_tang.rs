//! Orszag-Tang vortex on a square grid, with the point-symmetry check of the density.
//!
//!     cargo run --release --example orszag_tang -- 64 0.5

use cgl_es::run::simulate;
use cgl_es::{CaseId, RunConfig, SchemeName};

fn main() -> cgl_es::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(64, |s| s.parse().expect("N"));
    let t: f64 = args.next().map_or(0.5, |s| s.parse().expect("t"));
    let mut cfg = RunConfig::new("orszag_tang", "O2ES-IMEX", vec![n]);
    cfg.t_final = Some(t);
    let r = simulate(CaseId::OrszagTang, SchemeName::O2EsImex, n, &cfg, |s, b| {
        if s.step % 50 == 0 {
            println!("step {:>5} t={:.4} residual/scale {:+.2e}", s.step, s.t, b.residual / b.scale);
        }
        Ok(())
    })?;
    let mut asym = 0.0f64;
    for j in 0..n {
        for i in 0..n {
            asym = asym.max((r.field.at(i, j)[0] - r.field.at(n - 1 - i, n - 1 - j)[0]).abs());
        }
    }
    let m = &r.manifest;
    println!("{} steps, worst residual/scale {:.2e}", m.steps, m.max_budget_residual_ratio);
    println!("rho point-symmetry defect {asym:.2e}, hyperbolicity excursions {}", m.hyperbolicity_excursions);
    Ok(())
}
