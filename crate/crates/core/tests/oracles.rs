//! Point checks against values computed outside the library.

mod common;

use cgl_es::eigen::{scaled_at, y_matrix};
use cgl_es::flux::{ec_flux, log_mean, physical_flux};
use cgl_es::state::{entropy_pair, prim_to_cons, prim_to_entropy, Axis, Matrix9, Primitive, Vector9};
use cgl_es::timeint::{implicit_source_solve, ArkTableau, ShuOsher};
use common::*;

#[test]
fn log_mean_matches_extended_precision() {
    for (a, b, want) in LOG_MEAN_REFERENCE {
        let got = log_mean(a, b).unwrap();
        assert!(((got - want) / want).abs() < 4e-16, "L({a}, {b}) = {got:e}, want {want:e}");
        assert_eq!(got, log_mean(b, a).unwrap());
    }
}

#[test]
fn entropy_variables_are_the_gradient_of_entropy() {
    // dE/dU through the chain rule dE/dW (dU/dW)^-1, all by differences.
    let mut r = rng(11);
    for _ in 0..50 {
        let w = admissible_state(&mut r);
        let du = fd_jacobian(&w, |p| prim_to_cons(p).unwrap().to_vector());
        let de = fd_jacobian(&w, |p| Vector9::from_element(entropy_pair(p).unwrap().e)).row(0).transpose();
        let grad = du.transpose().try_inverse().unwrap() * de;
        let v = prim_to_entropy(&w).unwrap().v;
        assert!((grad - v).norm() < 1e-6 * (1.0 + v.norm()), "{grad} vs {v}");
    }
}

#[test]
fn brio_wu_left_flux_by_hand() {
    let w = Primitive { rho: 1.0, u: [0.0; 3], p_par: 1.0, p_perp: 1.0, b: [0.75, 1.0, 0.0] };
    let f = physical_flux(&w, Axis::X);
    // rho u_x^2 + p_perp + |B|^2/2 - B_x^2 = 1 + 0.78125 - 0.5625
    let want = [0.0, 1.21875, -0.75, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0];
    for (g, h) in f.iter().zip(want) {
        assert!((g - h).abs() < 1e-15);
    }
    let u = prim_to_cons(&w).unwrap();
    // e = p_par/2 + p_perp + |B|^2/2
    assert!((u.e - 2.28125).abs() < 1e-15);
    // s = ln(1) = 0 so E = 0.
    assert_eq!(entropy_pair(&w).unwrap().e, 0.0);
}

fn godunov_matrix(w: &Primitive, axis: Axis) -> Matrix9 {
    // Flux Jacobian of the symmetrized conservative part, by differences.
    let du = fd_jacobian(w, |p| prim_to_cons(p).unwrap().to_vector());
    let df = fd_jacobian(w, |p| physical_flux(p, axis));
    let d = axis.index();
    let mut a = df * du.try_inverse().unwrap();
    // phi'(V) times the normal field component, written on U.
    let phi = Vector9::from_column_slice(&[0.0, w.b[0], w.b[1], w.b[2], 0.0, w.u_dot_b(), w.u[0], w.u[1], w.u[2]]);
    for j in 0..9 {
        a[(j, 6 + d)] += phi[j];
    }
    a
}

#[test]
fn scaled_vectors_are_eigenvectors_of_the_symmetrized_part() {
    let mut r = rng(12);
    for _ in 0..50 {
        let w = admissible_state(&mut r);
        for axis in [Axis::X, Axis::Y] {
            let e = scaled_at(&w, axis).unwrap();
            let a = godunov_matrix(&w, axis);
            let lam = Matrix9::from_diagonal(&Vector9::from_column_slice(&e.lambda));
            let lhs = a * e.r;
            let rhs = e.r * lam;
            assert!((lhs - rhs).norm() < 1e-5 * (1.0 + rhs.norm()), "{axis:?} {}", (lhs - rhs).norm());
        }
    }
}

#[test]
fn y_matrix_frozen_entries() {
    let w = Primitive { rho: 2.0, u: [0.0; 3], p_par: 3.0, p_perp: 0.5, b: [1.0, 0.0, 0.0] };
    let y = y_matrix(&w);
    assert_eq!(y[(0, 0)], 1.0 / 16.0);
    assert_eq!(y[(2, 2)], 0.5 / 16.0);
    assert_eq!(y[(3, 3)], 0.5);
    assert_eq!(y[(4, 4)], 0.125);
    assert_eq!(y[(5, 5)], 5.0 * 9.0 / 8.0);
    assert_eq!(y[(3, 5)], 0.75);
}

#[test]
fn two_point_flux_frozen_value() {
    // Regression value; consistency and the entropy condition are covered elsewhere.
    let a = Primitive { rho: 1.0, u: [0.0; 3], p_par: 1.0, p_perp: 1.0, b: [0.75, 1.0, 0.0] };
    let b = Primitive { rho: 0.125, u: [0.0; 3], p_par: 0.1, p_perp: 0.1, b: [0.75, -1.0, 0.0] };
    let f = ec_flux(&a, &b, Axis::X).unwrap();
    assert!(f[0].abs() < 1e-300 && f[4].abs() < 1e-300);
    // Momentum: rho/beta_perp means + |B|^2/2 - B_x^2, with <B_y> = 0.
    let bp = 0.5 * (1.0 + 1.25);
    let want = 0.5 * (1.0 + 0.125) / bp + 0.5 * (0.5625 + 1.0) - 0.5625;
    assert!((f[1] - want).abs() < 1e-15, "{} vs {want}", f[1]);
}

#[test]
fn shu_osher_weights_and_ark2() {
    for (so, order) in [(ShuOsher::ssp2(), 2), (ShuOsher::ssp3(), 3), (ShuOsher::ssp4(), 4)] {
        let b = so.effective_weights();
        assert!((b.iter().sum::<f64>() - 1.0).abs() < 1e-10, "order {order}");
    }
    let t = ArkTableau::ark2();
    let beta = t.implicit[0][0];
    assert!((beta - 0.29289321881345254).abs() < 1e-15);
    assert!((beta * beta - 2.0 * beta + 0.5).abs() < 1e-15);
}

#[test]
fn closed_form_relaxation_by_hand() {
    // p_perp + p_par/2 is frozen; with h/tau = 2: p_par = (1 + 0.5*2*E)/(1 + 3), E = 2 p_perp + p_par.
    let w = Primitive { rho: 1.0, u: [0.0; 3], p_par: 1.0, p_perp: 0.25, b: [1.0, 0.0, 0.0] };
    let u = prim_to_cons(&w).unwrap();
    let out = implicit_source_solve(&u, 2.0, 1.0).unwrap();
    assert!((out.p_par - 0.625).abs() < 1e-15);
}
