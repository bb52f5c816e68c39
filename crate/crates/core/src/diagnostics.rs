//! Error norms, convergence orders and the per-step entropy budget.

use crate::error::{Error, Result};
use crate::scheme::Field;
use crate::state::{specific_entropy, Conserved};
use crate::timeint::relaxation_source;

/// Pairwise summation in a fixed order, so totals are reproducible.
pub fn pairwise_sum(x: &[f64]) -> f64 {
    if x.len() <= 32 {
        x.iter().sum()
    } else {
        let (a, b) = x.split_at(x.len() / 2);
        pairwise_sum(a) + pairwise_sum(b)
    }
}

fn cell_entropy(u: &nalgebra::SVector<f64, 9>) -> f64 {
    let w = Conserved::from_vector(u).to_primitive_unchecked();
    -w.rho * specific_entropy(&w)
}

pub fn cell_entropies(field: &Field) -> Vec<f64> {
    field.data.iter().map(cell_entropy).collect()
}

/// Sum over cells of E = -rho s.
pub fn total_entropy(field: &Field) -> f64 {
    pairwise_sum(&cell_entropies(field))
}

pub fn max_abs_entropy(field: &Field) -> f64 {
    field.data.iter().map(|u| cell_entropy(u).abs()).fold(0.0, f64::max)
}

/// Sum over cells of V . S for the relaxation source; never positive.
pub fn source_entropy_rate(field: &Field, tau: f64) -> f64 {
    let rates: Vec<f64> = field
        .data
        .iter()
        .map(|u| {
            let w = Conserved::from_vector(u).to_primitive_unchecked();
            let v5 = w.rho / w.p_perp - w.rho / w.p_par;
            v5 * relaxation_source(u, tau)[4]
        })
        .collect();
    pairwise_sum(&rates)
}

/// Budget of one time step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropyBudget {
    pub step: usize,
    pub t: f64,
    pub dt: f64,
    pub total_entropy: f64,
    /// Entropy change plus stage-weighted flux divergence, minus stage-weighted source production.
    pub residual: f64,
    /// Same with fluxes and source evaluated at the start of the step only.
    pub fe_residual: f64,
    /// Largest per-interface diffusion production seen during the step.
    pub max_production: f64,
    /// N max|E| at the start of the step; tolerances are relative to it.
    pub scale: f64,
}

/// sum_i [E(u_new) - E(u_old)] + dt * flux_div - dt * source_rate.
///
/// `flux_div` is the cell sum of the numerical entropy flux differences divided by the
/// cell width, `source_rate` the cell sum of V . S; both already weighted over stages.
pub fn entropy_budget(u_old: &Field, u_new: &Field, dt: f64, flux_div: f64, source_rate: f64) -> Result<f64> {
    if u_old.data.len() != u_new.data.len() {
        return Err(Error::DimensionMismatch("budget fields differ in size".into()));
    }
    let change: Vec<f64> =
        u_old.data.iter().zip(&u_new.data).map(|(a, b)| cell_entropy(b) - cell_entropy(a)).collect();
    Ok(pairwise_sum(&change) + dt * flux_div - dt * source_rate)
}

/// Sum |a - b| times the cell volume.
pub fn l1_error(numeric: &[f64], exact: &[f64], cell_volume: f64) -> Result<f64> {
    if numeric.len() != exact.len() {
        return Err(Error::DimensionMismatch(format!("{} vs {} samples", numeric.len(), exact.len())));
    }
    let d: Vec<f64> = numeric.iter().zip(exact).map(|(a, b)| (a - b).abs()).collect();
    Ok(pairwise_sum(&d) * cell_volume)
}

/// Observed orders ln(e_i / e_{i+1}) / ln(n_{i+1} / n_i).
pub fn convergence_order(errors: &[f64], ns: &[usize]) -> Result<Vec<f64>> {
    if errors.len() != ns.len() || errors.len() < 2 {
        return Err(Error::DimensionMismatch(format!("{} errors for {} resolutions", errors.len(), ns.len())));
    }
    if let Some(e) = errors.iter().find(|e| !(**e > 0.0)) {
        return Err(Error::NonPositiveError(*e));
    }
    Ok(errors
        .windows(2)
        .zip(ns.windows(2))
        .map(|(e, n)| (e[0] / e[1]).ln() / (n[1] as f64 / n[0] as f64).ln())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert_eq!(convergence_order(&[4.0, 1.0], &[40, 80]).unwrap(), vec![2.0]);
        let o = convergence_order(&[5.53282e-3, 7.07952e-4], &[40, 80]).unwrap()[0];
        assert!((o - 2.966).abs() < 5e-4);
        assert!(convergence_order(&[0.0, 1.0], &[1, 2]).is_err());
        let o = convergence_order(&[9.0, 1.0], &[10, 30]).unwrap()[0];
        assert!((o - 2.0).abs() < 1e-14);
    }

    #[test]
    fn l1_norm_basics() {
        assert_eq!(l1_error(&[1.0, 2.0], &[1.0, 2.0], 0.5).unwrap(), 0.0);
        let n = 1000;
        let c = vec![0.3; n];
        assert!((l1_error(&c, &vec![0.0; n], 1.0 / n as f64).unwrap() - 0.3).abs() < 1e-14);
        assert!(l1_error(&[1.0], &[1.0, 2.0], 1.0).is_err());
    }

    #[test]
    fn pairwise_matches_naive() {
        let x: Vec<f64> = (0..1000).map(|i| (i as f64).sin()).collect();
        assert!((pairwise_sum(&x) - x.iter().sum::<f64>()).abs() < 1e-12);
    }
}
