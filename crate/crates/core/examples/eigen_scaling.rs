//! Entropy-scaled eigenvectors reproduce dU/dV, so the diffusion built from them
//! only removes entropy.

use cgl_es::eigen::{diffusion_matrix, du_dw, dv_dw, scaled_at};
use cgl_es::state::{Axis, Primitive};

fn main() -> cgl_es::Result<()> {
    let w = Primitive { rho: 0.9, u: [0.4, -0.3, 0.1], p_par: 0.7, p_perp: 1.1, b: [0.6, 0.8, -0.5] };
    let du_dv = du_dw(&w) * dv_dw(&w).try_inverse().expect("invertible");
    for axis in [Axis::X, Axis::Y] {
        let e = scaled_at(&w, axis)?;
        let err = (e.r * e.r.transpose() - du_dv).norm() / du_dv.norm();
        let d = diffusion_matrix(&e);
        let min_eig = d.symmetric_eigenvalues().min();
        println!("{axis:?}: |R R^T - dU/dV| / |dU/dV| = {err:.2e}, lambda_max {:.4}, min eig of D {min_eig:.2e}", e.lambda_max);
        println!("     eigenvalues {:?}", e.lambda.map(|l| (l * 1e4).round() / 1e4));
    }
    Ok(())
}
