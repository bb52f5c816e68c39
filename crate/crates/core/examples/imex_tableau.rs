//! Load an IMEX tableau from a TOML file and check its order conditions.
//!
//!     cargo run --release --example imex_tableau -- crates/core/tableaus/ark4.toml

use cgl_es::timeint::ArkTableau;

fn conditions(t: &ArkTableau) -> Vec<(&'static str, f64)> {
    let ce: Vec<f64> = t.explicit.iter().map(|r| r.iter().sum()).collect();
    let ci: Vec<f64> = t.implicit.iter().map(|r| r.iter().sum()).collect();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    vec![
        ("sum b_E - 1", t.b_explicit.iter().sum::<f64>() - 1.0),
        ("sum b_I - 1", t.b_implicit.iter().sum::<f64>() - 1.0),
        ("b_E.c_E - 1/2", dot(&t.b_explicit, &ce) - 0.5),
        ("b_I.c_I - 1/2", dot(&t.b_implicit, &ci) - 0.5),
        ("b_E.c_I - 1/2", dot(&t.b_explicit, &ci) - 0.5),
        ("b_I.c_E - 1/2", dot(&t.b_implicit, &ce) - 0.5),
    ]
}

fn main() -> cgl_es::Result<()> {
    let tableaus = match std::env::args().nth(1) {
        Some(p) => vec![ArkTableau::load(p.as_ref())?],
        None => vec![ArkTableau::ark2(), ArkTableau::ark3(), ArkTableau::ark4()],
    };
    for t in &tableaus {
        println!("{} (order {}, {} stages)", t.name, t.order, t.stages());
        for (name, r) in conditions(t) {
            println!("  {name:<14} {r:+.2e}");
        }
    }
    Ok(())
}
