//! Brio-Wu shock tube with the full set of output files and the entropy budget.
//!
//!     cargo run --release --example brio_wu -- O2ES-EXP 2000 out/brio_wu

use cgl_es::{run, RunConfig};

fn main() -> cgl_es::Result<()> {
    let mut args = std::env::args().skip(1);
    let scheme = args.next().unwrap_or_else(|| "O2ES-EXP".into());
    let n: usize = args.next().map_or(800, |s| s.parse().expect("N"));
    let out = args.next().unwrap_or_else(|| "out/brio_wu".into());

    let mut cfg = RunConfig::new("brio_wu", &scheme, vec![n]);
    cfg.output_dir = out.into();
    let summary = run(&cfg)?;
    let r = &summary.results[0];

    let total: f64 = r.budgets.iter().map(|b| b.residual).sum();
    let first = r.budgets.first().unwrap().total_entropy;
    let last = r.budgets.last().unwrap().total_entropy;
    println!("{} steps, total entropy {first:.6} -> {last:.6}", r.manifest.steps);
    println!("summed budget residual {total:.3e}, worst step ratio {:.3e}", r.manifest.max_budget_residual_ratio);
    for f in &summary.files {
        println!("wrote {}", f.display());
    }
    Ok(())
}
