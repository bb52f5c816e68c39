//! Stiff pressure relaxation: the IMEX scheme drives p_par to p_perp while the
//! explicit scheme keeps the anisotropy of the double-adiabatic model.
//!
//!     cargo run --release --example isotropization -- 1000 1e-5

use cgl_es::run::simulate;
use cgl_es::{CaseId, RunConfig, SchemeName};

fn median_anisotropy(r: &cgl_es::run::RunResult) -> f64 {
    let mut a: Vec<f64> = (0..r.grid.nx)
        .map(|i| {
            let w = r.field.primitive(i, 0);
            (w.p_par - w.p_perp).abs() * 3.0 / (w.p_par + 2.0 * w.p_perp)
        })
        .collect();
    a.sort_by(f64::total_cmp);
    a[a.len() / 2]
}

fn main() -> cgl_es::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(1000, |s| s.parse().expect("N"));
    let tau: f64 = args.next().map_or(1e-5, |s| s.parse().expect("tau"));
    for scheme in [SchemeName::O2EsExp, SchemeName::O2EsImex] {
        let mut cfg = RunConfig::new("brio_wu", scheme.label(), vec![n]);
        cfg.tau = tau;
        let r = simulate(CaseId::BrioWu, scheme, n, &cfg, |_, _| Ok(()))?;
        println!("{:<10} median |p_par - p_perp| / p = {:.3e}", scheme.label(), median_anisotropy(&r));
    }
    Ok(())
}
