//! Physical fluxes and the entropy conservative two-point flux.

use crate::error::{Error, Result};
use crate::state::{
    dot3, entropy_potential, entropy_vars_unchecked, Axis, Primitive, Vector9,
};

pub type FluxVector = Vector9;

/// Conservative part of the physical flux along `axis`.
pub fn physical_flux(w: &Primitive, axis: Axis) -> FluxVector {
    let d = axis.index();
    let un = w.u[d];
    let bn = w.b[d];
    let b2 = w.b2();
    let e = w.to_conserved_unchecked().e;
    let mut f = [0.0; 9];
    f[0] = w.rho * un;
    for m in 0..3 {
        f[1 + m] = w.rho * un * w.u[m] - bn * w.b[m];
    }
    f[1 + d] += w.p_perp + 0.5 * b2;
    f[4] = w.p_par * un;
    f[5] = un * (e + w.p_perp + 0.5 * b2) - bn * w.u_dot_b();
    for m in 0..3 {
        f[6 + m] = un * w.b[m] - bn * w.u[m];
    }
    f[6 + d] = 0.0;
    FluxVector::from_column_slice(&f)
}

/// Logarithmic mean (b - a) / (ln b - ln a), with a series near a = b.
pub fn log_mean(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::NonPositiveInput(a, b));
    }
    Ok(log_mean_unchecked(a, b))
}

#[inline]
pub(crate) fn log_mean_unchecked(a: f64, b: f64) -> f64 {
    let sum = a + b;
    // |f| keeps the result bitwise symmetric in (a, b).
    let f = ((b - a) / sum).abs();
    if f < 5e-5 {
        let u = f * f;
        0.5 * sum / (1.0 + u * (1.0 / 3.0 + u * (0.2 + u / 7.0)))
    } else if f < 0.5 {
        0.5 * sum * f / f.atanh()
    } else {
        // atanh loses digits as f -> 1; sorting keeps the symmetry.
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        (hi - lo) / (hi / lo).ln()
    }
}

/// Per-cell quantities reused by every flux evaluation that touches the cell.
#[derive(Clone, Copy, Debug)]
pub struct FluxCell {
    pub w: Primitive,
    pub beta_perp: f64,
    pub beta_par: f64,
    pub u2: f64,
    pub b2: f64,
    pub v: Vector9,
    pub phi: f64,
    pub potential: f64,
}

impl FluxCell {
    pub fn new(w: &Primitive) -> Result<Self> {
        w.validate()?;
        Ok(Self::new_unchecked(w))
    }

    pub(crate) fn new_unchecked(w: &Primitive) -> Self {
        let ev = entropy_vars_unchecked(w);
        FluxCell {
            w: *w,
            beta_perp: ev.beta_perp,
            beta_par: ev.beta_par,
            u2: w.u2(),
            b2: w.b2(),
            v: ev.v,
            phi: 2.0 * ev.beta_perp * w.u_dot_b(),
            potential: entropy_potential(w),
        }
    }
}

/// Two-point entropy conservative flux together with its entropy flux.
pub fn ec_flux_pair(l: &FluxCell, r: &FluxCell, axis: Axis) -> (FluxVector, f64) {
    let d = axis.index();
    let (wl, wr) = (&l.w, &r.w);
    let m = |a: f64, b: f64| 0.5 * (a + b);

    let rho_ln = log_mean_unchecked(wl.rho, wr.rho);
    let bperp_ln = log_mean_unchecked(l.beta_perp, r.beta_perp);
    let bpar_ln = log_mean_unchecked(l.beta_par, r.beta_par);
    let rho = m(wl.rho, wr.rho);
    let bp = m(l.beta_perp, r.beta_perp);
    let u = [m(wl.u[0], wr.u[0]), m(wl.u[1], wr.u[1]), m(wl.u[2], wr.u[2])];
    let b = [m(wl.b[0], wr.b[0]), m(wl.b[1], wr.b[1]), m(wl.b[2], wr.b[2])];
    let bu = [
        m(l.beta_perp * wl.u[0], r.beta_perp * wr.u[0]),
        m(l.beta_perp * wl.u[1], r.beta_perp * wr.u[1]),
        m(l.beta_perp * wl.u[2], r.beta_perp * wr.u[2]),
    ];
    let u2 = m(l.u2, r.u2);
    let b2 = m(l.b2, r.b2);

    let mut f = [0.0; 9];
    f[0] = rho_ln * u[d];
    for k in 0..3 {
        f[1 + k] = u[k] * f[0] - b[d] * b[k];
    }
    f[1 + d] += rho / bp + 0.5 * b2;
    f[4] = f[0] / bpar_ln;
    for k in 0..3 {
        f[6 + k] = if k == d { 0.0 } else { (bu[d] * b[k] - bu[k] * b[d]) / bp };
    }
    f[5] = 0.5 * (2.0 / bperp_ln - u2) * f[0]
        + (u[0] * f[1] + u[1] * f[2] + u[2] * f[3])
        + 0.5 * f[4]
        + (b[0] * f[6] + b[1] * f[7] + b[2] * f[8])
        - 0.5 * u[d] * b2
        + dot3(&u, &b) * b[d];
    let flux = FluxVector::from_column_slice(&f);

    let vbar = (l.v + r.v) * 0.5;
    let q = vbar.dot(&flux) + m(l.phi, r.phi) * b[d] - m(l.potential * wl.u[d], r.potential * wr.u[d]);
    (flux, q)
}

/// Two-point entropy conservative flux between primitive states.
pub fn ec_flux(wl: &Primitive, wr: &Primitive, axis: Axis) -> Result<FluxVector> {
    let l = FluxCell::new(wl)?;
    let r = FluxCell::new(wr)?;
    Ok(ec_flux_pair(&l, &r, axis).0)
}

/// Fourth-order combination over cells (i-1, i, i+1, i+2) for the interface i+1/2.
pub fn ec_flux_fourth_cells(c: [&FluxCell; 4], axis: Axis) -> (FluxVector, f64) {
    let (f12, q12) = ec_flux_pair(c[1], c[2], axis);
    let (f02, q02) = ec_flux_pair(c[0], c[2], axis);
    let (f13, q13) = ec_flux_pair(c[1], c[3], axis);
    let a = 4.0 / 3.0;
    let b = 1.0 / 6.0;
    (f12 * a - (f02 + f13) * b, a * q12 - b * (q02 + q13))
}

pub fn ec_flux_fourth(stencil: [&Primitive; 4], axis: Axis) -> Result<FluxVector> {
    let cells = [
        FluxCell::new(stencil[0])?,
        FluxCell::new(stencil[1])?,
        FluxCell::new(stencil[2])?,
        FluxCell::new(stencil[3])?,
    ];
    Ok(ec_flux_fourth_cells([&cells[0], &cells[1], &cells[2], &cells[3]], axis).0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_mean_branches_agree() {
        let a: f64 = 1.7;
        for eps in [1e-3, 1e-4, 4.9e-5 * 2.0, 1e-5, 1e-9] {
            let b = a * (1.0 + eps);
            let direct = (b - a) / (b.ln() - a.ln());
            let lm = log_mean(a, b).unwrap();
            assert!((lm - direct).abs() / direct < 1e-9, "eps {eps}");
        }
        assert_eq!(log_mean(2.0, 2.0).unwrap(), 2.0);
        assert!(log_mean(-1.0, 2.0).is_err());
    }

    #[test]
    fn log_mean_symmetric() {
        for (a, b) in [(0.3, 7.0), (1.0, 1.00001), (2.0, 2.0000000001)] {
            assert_eq!(log_mean(a, b).unwrap(), log_mean(b, a).unwrap());
        }
    }

    #[test]
    fn flux_consistent() {
        let w = Primitive { rho: 1.1, u: [0.3, -0.2, 0.5], p_par: 0.7, p_perp: 1.2, b: [0.4, 0.9, -0.6] };
        for axis in [Axis::X, Axis::Y] {
            let f = ec_flux(&w, &w, axis).unwrap();
            let g = physical_flux(&w, axis);
            assert!((f - g).norm() < 1e-13 * g.norm());
        }
    }
}
