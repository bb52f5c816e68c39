//! Right eigenvectors of the conservative part, their entropy scaling, and the
//! diffusion operator built from them.
//!
//! Column order: fast-, slow-, Alfven-, entropy, normal field, parallel pressure,
//! Alfven+, slow+, fast+.

use crate::error::{Error, Result};
use crate::state::{conservative_speeds, Axis, Matrix9, Primitive};

/// Threshold under which the tangential field is treated as zero.
const TANGENTIAL_EPS: f64 = 1e-12;

fn tangential_axes(axis: Axis) -> (usize, usize) {
    match axis {
        Axis::X => (1, 2),
        Axis::Y => (0, 2),
    }
}

/// Conservative-part eigenvalues in column order.
pub fn eigenvalues(w: &Primitive, axis: Axis) -> [f64; 9] {
    let d = axis.index();
    let (_, va, cf, cs) = conservative_speeds(w, axis);
    let u = w.u[d];
    [u - cf, u - cs, u - va, u, u, u, u + va, u + cs, u + cf]
}

/// Primitive-variable right eigenvectors R_W along `axis`.
pub fn eigensystem_primitive(w: &Primitive, axis: Axis) -> Result<Matrix9> {
    w.validate()?;
    Ok(primitive_unchecked(w, axis))
}

pub(crate) fn primitive_unchecked(w: &Primitive, axis: Axis) -> Matrix9 {
    let d = axis.index();
    let (t1, t2) = tangential_axes(axis);
    let (a, _, cf, cs) = conservative_speeds(w, axis);
    let a2 = a * a;
    let (cf2, cs2) = (cf * cf, cs * cs);
    let (af, as_) = if (cf2 - cs2).abs() < 1e-12 * cf2 {
        (1.0, 0.0)
    } else {
        let den = cf2 - cs2;
        (((a2 - cs2) / den).clamp(0.0, 1.0).sqrt(), ((cf2 - a2) / den).clamp(0.0, 1.0).sqrt())
    };
    let bt2 = w.b[t1] * w.b[t1] + w.b[t2] * w.b[t2];
    let (bt1, bt2_) = if bt2 <= TANGENTIAL_EPS * w.b2().max(1.0) {
        (std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2)
    } else {
        let bt = bt2.sqrt();
        (w.b[t1] / bt, w.b[t2] / bt)
    };
    let s = if w.b[d] >= 0.0 { 1.0 } else { -1.0 };
    let r = w.rho;
    let sr = r.sqrt();
    let pp = w.p_par;

    let mut m = Matrix9::zeros();
    let set_row = |m: &mut Matrix9, row: usize, vals: [f64; 9]| {
        for (j, v) in vals.into_iter().enumerate() {
            m[(row, j)] = v;
        }
    };
    set_row(&mut m, 0, [af * r, as_ * r, 0.0, 1.0, 0.0, 0.0, 0.0, as_ * r, af * r]);
    set_row(&mut m, 1 + d, [-af * cf, -as_ * cs, 0.0, 0.0, 0.0, 0.0, 0.0, as_ * cs, af * cf]);
    for (row, bt, alf) in [(t1, bt1, -bt2_), (t2, bt2_, bt1)] {
        set_row(
            &mut m,
            1 + row,
            [
                as_ * bt * cs * s,
                -af * bt * cf * s,
                alf,
                0.0,
                0.0,
                0.0,
                -alf,
                af * bt * cf * s,
                -as_ * bt * cs * s,
            ],
        );
    }
    set_row(&mut m, 4, [af * pp, as_ * pp, 0.0, 0.0, 0.0, 1.0, 0.0, as_ * pp, af * pp]);
    set_row(&mut m, 5, [a2 * af * r, a2 * as_ * r, 0.0, 0.0, 0.0, 0.0, 0.0, a2 * as_ * r, a2 * af * r]);
    set_row(&mut m, 6 + d, [0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
    for (row, bt, alf) in [(t1, bt1, -bt2_), (t2, bt2_, bt1)] {
        let fs = a * as_ * bt * sr;
        let ff = -a * af * bt * sr;
        let al = alf * sr * s;
        set_row(&mut m, 6 + row, [fs, ff, al, 0.0, 0.0, 0.0, al, ff, fs]);
    }
    m
}

/// Jacobian dU/dW.
pub fn du_dw(w: &Primitive) -> Matrix9 {
    let mut m = Matrix9::identity();
    for i in 0..3 {
        m[(1 + i, 0)] = w.u[i];
        m[(1 + i, 1 + i)] = w.rho;
    }
    m[(5, 0)] = 0.5 * w.u2();
    for i in 0..3 {
        m[(5, 1 + i)] = w.rho * w.u[i];
        m[(5, 6 + i)] = w.b[i];
    }
    m[(5, 4)] = 0.5;
    m[(5, 5)] = 1.0;
    m
}

/// Jacobian dV/dW of the entropy variables.
pub fn dv_dw(w: &Primitive) -> Matrix9 {
    let (r, pl, pp) = (w.rho, w.p_par, w.p_perp);
    let bp = r / pp;
    let u2 = w.u2();
    let mut m = Matrix9::zeros();
    m[(0, 0)] = 5.0 / r - u2 / pp;
    m[(0, 4)] = -1.0 / pl;
    m[(0, 5)] = -2.0 / pp + r * u2 / (pp * pp);
    for i in 0..3 {
        m[(0, 1 + i)] = -2.0 * bp * w.u[i];
        m[(1 + i, 0)] = 2.0 * w.u[i] / pp;
        m[(1 + i, 1 + i)] = 2.0 * bp;
        m[(1 + i, 5)] = -2.0 * r * w.u[i] / (pp * pp);
        m[(6 + i, 0)] = 2.0 * w.b[i] / pp;
        m[(6 + i, 5)] = -2.0 * r * w.b[i] / (pp * pp);
        m[(6 + i, 6 + i)] = 2.0 * bp;
    }
    m[(4, 0)] = 1.0 / pp - 1.0 / pl;
    m[(4, 4)] = r / (pl * pl);
    m[(4, 5)] = -r / (pp * pp);
    m[(5, 0)] = -2.0 / pp;
    m[(5, 5)] = 2.0 * r / (pp * pp);
    m
}

/// The symmetric matrix Y with R Y R^T = dU/dV, R = dU/dW R_W. Same for both axes.
pub fn y_matrix(w: &Primitive) -> Matrix9 {
    let (r, pl, pp) = (w.rho, w.p_par, w.p_perp);
    let mut m = Matrix9::zeros();
    let diag = [
        1.0 / (8.0 * r),
        1.0 / (8.0 * r),
        pp / (4.0 * r * r),
        r / 4.0,
        pp / (2.0 * r),
        5.0 * pl * pl / (4.0 * r),
        pp / (4.0 * r * r),
        1.0 / (8.0 * r),
        1.0 / (8.0 * r),
    ];
    for (i, v) in diag.into_iter().enumerate() {
        m[(i, i)] = v;
    }
    m[(3, 5)] = pl / 4.0;
    m[(5, 3)] = pl / 4.0;
    m
}

/// Symmetric square root T of Y.
pub fn scaling_matrix(w: &Primitive, _axis: Axis) -> Result<Matrix9> {
    let y = y_matrix(w);
    let mut t = Matrix9::zeros();
    for i in [0, 1, 2, 4, 6, 7, 8] {
        t[(i, i)] = y[(i, i)].sqrt();
    }
    let (p, q, r) = (y[(3, 3)], y[(3, 5)], y[(5, 5)]);
    let s = (p * r - q * q).sqrt();
    let tt = (p + r + 2.0 * s).sqrt();
    if !(tt > 0.0) || !tt.is_finite() {
        return Err(Error::SqrtBranch);
    }
    t[(3, 3)] = (p + s) / tt;
    t[(3, 5)] = q / tt;
    t[(5, 3)] = q / tt;
    t[(5, 5)] = (r + s) / tt;
    Ok(t)
}

/// Entropy-scaled eigenvectors at an interface.
#[derive(Clone, Copy, Debug)]
pub struct EigenDecomp {
    pub state: Primitive,
    pub r: Matrix9,
    pub lambda: [f64; 9],
    pub lambda_max: f64,
}

/// Scaled eigenvectors of the arithmetic-mean state between `wl` and `wr`.
pub fn entropy_scaled_eigenvectors(wl: &Primitive, wr: &Primitive, axis: Axis) -> Result<EigenDecomp> {
    let w = Primitive::average(wl, wr);
    scaled_at(&w, axis)
}

/// Scaled eigenvectors R = dU/dW R_W T at a single state.
pub fn scaled_at(w: &Primitive, axis: Axis) -> Result<EigenDecomp> {
    w.validate()?;
    let t = scaling_matrix(w, axis)?;
    // T is diagonal apart from the (3, 5) block.
    let mut rw = primitive_unchecked(w, axis);
    let (c3, c5) = (rw.column(3).clone_owned(), rw.column(5).clone_owned());
    for j in [0, 1, 2, 4, 6, 7, 8] {
        rw.column_mut(j).scale_mut(t[(j, j)]);
    }
    rw.set_column(3, &(c3 * t[(3, 3)] + c5 * t[(5, 3)]));
    rw.set_column(5, &(c3 * t[(3, 5)] + c5 * t[(5, 5)]));
    let r = du_dw(w) * rw;
    let lambda = eigenvalues(w, axis);
    let lambda_max = lambda.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    Ok(EigenDecomp { state: *w, r, lambda, lambda_max })
}

/// D = R Lambda R^T with Lambda = lambda_max I.
pub fn diffusion_matrix(e: &EigenDecomp) -> Matrix9 {
    let lam = Matrix9::from_diagonal_element(e.lambda_max);
    e.r * lam * e.r.transpose()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_of_y() {
        let w = Primitive { rho: 0.8, u: [0.1, 0.2, 0.3], p_par: 1.4, p_perp: 0.6, b: [0.5, -0.2, 0.9] };
        let t = scaling_matrix(&w, Axis::X).unwrap();
        assert!((t * t - y_matrix(&w)).norm() < 1e-14);
        let tpar = w.p_par;
        let rho = w.rho;
        let root = (5.0 * tpar * tpar + 4.0 * tpar * rho + rho * rho).sqrt();
        assert!((t[(3, 3)] - rho.sqrt() * (2.0 * tpar + rho) / (2.0 * root)).abs() < 1e-14);
        assert!((t[(5, 5)] - tpar * (5.0 * tpar + 2.0 * rho) / (2.0 * (rho).sqrt() * root)).abs() < 1e-14);
    }

    #[test]
    fn degenerate_states_build() {
        let w = Primitive { rho: 1.0, u: [0.0; 3], p_par: 1.0, p_perp: 0.5, b: [1.0, 0.0, 0.0] };
        let e = scaled_at(&w, Axis::X).unwrap();
        assert!(e.r.iter().all(|x| x.is_finite()));
        let w = Primitive { rho: 1.0, u: [0.0; 3], p_par: 1.0, p_perp: 1.0, b: [0.0, 0.5, 0.0] };
        assert!(scaled_at(&w, Axis::X).unwrap().r.iter().all(|x| x.is_finite()));
    }
}
