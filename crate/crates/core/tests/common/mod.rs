//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use cgl_es::state::{admissibility, prim_to_cons, prim_to_entropy, Matrix9, Primitive, Region, Vector9};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A state strictly inside the hyperbolic region, with |B| bounded away from zero.
pub fn admissible_state(rng: &mut impl Rng) -> Primitive {
    loop {
        let rho = rng.random_range(0.1..3.0);
        let u = [rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5)];
        let b = [rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5)];
        let p_perp = rng.random_range(0.05..3.0);
        let mut w = Primitive { rho, u, p_par: 1.0, p_perp, b };
        if w.b2() < 0.05 {
            continue;
        }
        let rep = admissibility(&w);
        let t: f64 = rng.random_range(0.02..0.98);
        w.p_par = rep.p_min + t * (rep.p_max - rep.p_min);
        if admissibility(&w).region != Region::Violated {
            return w;
        }
    }
}

pub fn random_vector(rng: &mut impl Rng) -> Vector9 {
    Vector9::from_fn(|_, _| rng.random_range(-1.0..1.0))
}

fn perturb(w: &Primitive, k: usize, h: f64) -> Primitive {
    let mut v = w.to_vector();
    v[k] += h;
    Primitive::from_vector(&v)
}

/// Central finite-difference Jacobian of `f` with respect to the primitive vector.
pub fn fd_jacobian(w: &Primitive, f: impl Fn(&Primitive) -> Vector9) -> Matrix9 {
    let mut m = Matrix9::zeros();
    let base = w.to_vector();
    for k in 0..9 {
        let h = 1e-6 * (1.0 + base[k].abs());
        let col = (f(&perturb(w, k, h)) - f(&perturb(w, k, -h))) / (2.0 * h);
        m.set_column(k, &col);
    }
    m
}

/// dU/dV by finite differences of both maps through the primitive variables.
pub fn fd_du_dv(w: &Primitive) -> Matrix9 {
    let du = fd_jacobian(w, |p| prim_to_cons(p).unwrap().to_vector());
    let dv = fd_jacobian(w, |p| prim_to_entropy(p).unwrap().v);
    du * dv.try_inverse().expect("dV/dW invertible")
}

/// Relative Frobenius distance.
pub fn rel(a: &Matrix9, b: &Matrix9) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

/// Logarithmic means evaluated with 50-digit arithmetic.
pub const LOG_MEAN_REFERENCE: [(f64, f64, f64); 7] = [
    (1.0, 1.000000001, 1.0000000005000000413),
    (1.0, 1.00001, 1.0000049999916667411),
    (2.0, 2.0001, 2.0000499995833438552),
    (0.3, 7.0, 2.1270631636670401051),
    (1e-3, 1e3, 72.382341268128320842),
    (5.0, 5.000000000005, 5.0000000000024997782),
    (1.0, 1.0002, 1.0000999966669999468),
];
