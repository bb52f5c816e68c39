//! The two-point flux satisfies the discrete entropy jump condition, and the
//! non-conservative products do no work against the entropy variables.

use cgl_es::flux::{ec_flux, physical_flux};
use cgl_es::noncons::nonconservative_matrix;
use cgl_es::state::{prim_to_entropy, Axis, Primitive, Vector9};

fn potentials(w: &Primitive, axis: Axis) -> (f64, f64) {
    let bp = w.rho / w.p_perp;
    ((2.0 * w.rho + bp * w.b2()) * w.u[axis.index()], 2.0 * bp * w.u_dot_b())
}

fn main() -> cgl_es::Result<()> {
    let a = Primitive { rho: 1.0, u: [0.3, -0.1, 0.2], p_par: 1.2, p_perp: 0.8, b: [0.75, 1.0, 0.1] };
    let b = Primitive { rho: 0.4, u: [-0.2, 0.4, 0.0], p_par: 0.3, p_perp: 0.25, b: [0.7, -0.6, 0.3] };
    let dv = prim_to_entropy(&b)?.v - prim_to_entropy(&a)?.v;
    for axis in [Axis::X, Axis::Y] {
        let f = ec_flux(&a, &b, axis)?;
        let (psi_a, phi_a) = potentials(&a, axis);
        let (psi_b, phi_b) = potentials(&b, axis);
        let bn = 0.5 * (a.b[axis.index()] + b.b[axis.index()]);
        let defect = dv.dot(&f) - (psi_b - psi_a) + (phi_b - phi_a) * bn;
        let consistency = (ec_flux(&a, &a, axis)? - physical_flux(&a, axis)).norm();
        println!("{axis:?}: jump condition defect {defect:+.2e}, |F(a,a) - f(a)| {consistency:.2e}");

        let g = Vector9::from_fn(|i, _| (i as f64 * 0.7).sin());
        let work = prim_to_entropy(&a)?.v.dot(&(nonconservative_matrix(&a, axis)? * g));
        println!("{axis:?}: V . (C g) = {work:+.2e}");
    }
    Ok(())
}
