//! All seven shock tubes at one resolution.
//!
//!     cargo run --release --example riemann_suite -- O2ES-EXP 2000

use cgl_es::cases::CaseId;
use cgl_es::run::simulate;
use cgl_es::{RunConfig, SchemeName};

fn main() -> cgl_es::Result<()> {
    let mut args = std::env::args().skip(1);
    let scheme: SchemeName = args.next().unwrap_or_else(|| "O2ES-EXP".into()).parse()?;
    let n: usize = args.next().map_or(400, |s| s.parse().expect("N"));
    println!("{:<5} {:<11} {:>6} {:>10} {:>10} {:>12}", "", "case", "steps", "min rho", "max rho", "excursions");
    for (k, case) in CaseId::RIEMANN.into_iter().enumerate() {
        let cfg = RunConfig::new(case.name(), scheme.label(), vec![n]);
        let r = simulate(case, scheme, n, &cfg, |_, _| Ok(()))?;
        let rho = r.field.data.iter().map(|u| u[0]);
        let (lo, hi) = rho.fold((f64::INFINITY, 0.0f64), |(a, b), x| (a.min(x), b.max(x)));
        println!(
            "RP{:<3} {:<11} {:>6} {:>10.4} {:>10.4} {:>12}",
            k + 1,
            case.name(),
            r.manifest.steps,
            lo,
            hi,
            r.manifest.hyperbolicity_excursions
        );
    }
    Ok(())
}
