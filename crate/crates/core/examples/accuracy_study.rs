//! Grid refinement on the smooth density wave.
//!
//!     cargo run --release --example accuracy_study -- O3ES-EXP 40 80 160 320

use cgl_es::run::{emit_convergence_table, simulate};
use cgl_es::{CaseId, RunConfig, SchemeName};

fn main() -> cgl_es::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let schemes: Vec<SchemeName> = match args.first() {
        Some(s) if s.parse::<usize>().is_err() => vec![s.parse()?],
        _ => vec![SchemeName::O2EsExp, SchemeName::O3EsExp, SchemeName::O4EsExp],
    };
    let mut ns: Vec<usize> = args.iter().filter_map(|a| a.parse().ok()).collect();
    if ns.is_empty() {
        ns = vec![40, 80, 160];
    }
    for scheme in schemes {
        let cfg = RunConfig::new("accuracy", scheme.label(), ns.clone());
        let errors = ns
            .iter()
            .map(|&n| simulate(CaseId::Accuracy, scheme, n, &cfg, |_, _| Ok(())).map(|r| r.l1_rho.unwrap()))
            .collect::<cgl_es::Result<Vec<_>>>()?;
        println!("{}\n{}", scheme.label(), emit_convergence_table(&errors, &ns));
    }
    Ok(())
}
