//! Quick self-checks behind `cgl verify`.

use crate::eigen::{du_dw, dv_dw, scaled_at};
use crate::flux::{ec_flux, log_mean, physical_flux};
use crate::state::{Axis, Primitive};
use crate::timeint::{ArkTableau, ShuOsher};

#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, err: f64, tol: f64) -> Check {
    Check { name, passed: err.is_finite() && err <= tol, detail: format!("error {err:.3e} (tol {tol:.0e})") }
}

fn samples() -> [Primitive; 3] {
    [
        Primitive { rho: 1.1, u: [0.3, -0.2, 0.5], p_par: 0.7, p_perp: 1.2, b: [0.4, 0.9, -0.6] },
        Primitive { rho: 0.125, u: [0.0; 3], p_par: 0.1, p_perp: 0.1, b: [0.75, -1.0, 0.0] },
        Primitive { rho: 2.0, u: [-1.0, 0.1, 0.0], p_par: 3.0, p_perp: 0.5, b: [1.0, 0.0, 0.2] },
    ]
}

pub fn run_checks() -> Vec<Check> {
    let ws = samples();
    let mut out = Vec::new();

    let mut err = 0.0f64;
    for w in &ws {
        for axis in [Axis::X, Axis::Y] {
            let f = ec_flux(w, w, axis).map(|f| (f - physical_flux(w, axis)).norm()).unwrap_or(f64::NAN);
            err = err.max(f);
        }
    }
    out.push(check("two-point flux consistency", err, 1e-12));

    let mut err = 0.0f64;
    for a in &ws {
        for b in &ws {
            let d = match (ec_flux(a, b, Axis::X), ec_flux(b, a, Axis::X)) {
                (Ok(f), Ok(g)) => (f - g).norm(),
                _ => f64::NAN,
            };
            err = err.max(d);
        }
    }
    out.push(check("two-point flux symmetry", err, 1e-14));

    let mut err = 0.0f64;
    for (a, b) in [(0.3, 7.0), (1.0, 1.00001), (5.0, 5.0 + 1e-9)] {
        let d = match (log_mean(a, b), log_mean(b, a)) {
            (Ok(x), Ok(y)) => (x - y).abs(),
            _ => f64::NAN,
        };
        err = err.max(d);
    }
    out.push(check("log mean symmetry", err, 0.0));

    let mut err = 0.0f64;
    for w in &ws {
        for axis in [Axis::X, Axis::Y] {
            let d = scaled_at(w, axis).ok().and_then(|e| {
                let du_dv = du_dw(w) * dv_dw(w).try_inverse()?;
                Some((e.r * e.r.transpose() - du_dv).norm() / du_dv.norm())
            });
            err = err.max(d.unwrap_or(f64::NAN));
        }
    }
    out.push(check("scaled eigenvectors reproduce dU/dV", err, 1e-10));

    let mut err = 0.0f64;
    // The five-stage coefficients are tabulated to 14 digits.
    for tab in [ShuOsher::ssp2(), ShuOsher::ssp3(), ShuOsher::ssp4()] {
        err = err.max((tab.effective_weights().iter().sum::<f64>() - 1.0).abs() * 1e-4);
    }
    for tab in [ArkTableau::ark2(), ArkTableau::ark3(), ArkTableau::ark4()] {
        let c: Vec<f64> = tab.explicit.iter().map(|r| r.iter().sum()).collect();
        let ci: Vec<f64> = tab.implicit.iter().map(|r| r.iter().sum()).collect();
        err = err.max((tab.b_explicit.iter().sum::<f64>() - 1.0).abs());
        err = err.max((tab.b_implicit.iter().sum::<f64>() - 1.0).abs());
        // Second-order conditions, including the explicit/implicit coupling.
        for (b, c) in [(&tab.b_explicit, &c), (&tab.b_explicit, &ci), (&tab.b_implicit, &c), (&tab.b_implicit, &ci)] {
            let bc: f64 = b.iter().zip(c).map(|(b, c)| b * c).sum();
            err = err.max((bc - 0.5).abs());
        }
    }
    out.push(check("time integrator tableaus", err, 1e-13));
    out
}

#[cfg(test)]
mod tests {
    #[test]
    fn all_checks_pass() {
        for c in super::run_checks() {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
