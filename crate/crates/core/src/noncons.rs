//! Non-conservative products of the anisotropic system and the Godunov term.
//!
//! The matrix C_d multiplies the derivative of the conserved vector along d. Rows for
//! density and the induction equation vanish; the momentum and energy rows are built
//! from the pressure anisotropy and the field direction.

use crate::error::{Error, Result};
use crate::state::{dot3, phi_prime, Axis, Matrix9, Primitive, Vector9};

/// Scalars shared by every entry of C_d.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NonConsCoeffs {
    pub dp: f64,
    pub b_mag: f64,
    pub b: [f64; 3],
    /// dp (1 - b_i^2)
    pub gamma: [f64; 3],
    pub b_dot_u: f64,
}

impl NonConsCoeffs {
    pub fn new(w: &Primitive) -> Result<Self> {
        w.validate()?;
        Ok(Self::new_unchecked(w))
    }

    pub(crate) fn new_unchecked(w: &Primitive) -> Self {
        let b_mag = w.b2().sqrt();
        let b = [w.b[0] / b_mag, w.b[1] / b_mag, w.b[2] / b_mag];
        let dp = w.p_par - w.p_perp;
        NonConsCoeffs {
            dp,
            b_mag,
            b,
            gamma: [dp * (1.0 - b[0] * b[0]), dp * (1.0 - b[1] * b[1]), dp * (1.0 - b[2] * b[2])],
            b_dot_u: dot3(&b, &w.u),
        }
    }
}

/// C_d as a dense matrix.
pub fn nonconservative_matrix(w: &Primitive, axis: Axis) -> Result<Matrix9> {
    let c = NonConsCoeffs::new(w)?;
    Ok(matrix_unchecked(w, &c, axis))
}

pub(crate) fn matrix_unchecked(w: &Primitive, c: &NonConsCoeffs, axis: Axis) -> Matrix9 {
    let k = axis.index();
    let (b, bm, dp, bu) = (&c.b, c.b_mag, c.dp, c.b_dot_u);
    let u = &w.u;
    let rho = w.rho;
    let u2 = w.u2();
    let delta = |i: usize, j: usize| if i == j { 1.0 } else { 0.0 };

    // gradient of the anisotropy dp with respect to U
    let mut ddp = [0.0; 9];
    ddp[0] = -0.5 * u2;
    ddp[1..4].copy_from_slice(u);
    ddp[4] = 1.5;
    ddp[5] = -1.0;
    ddp[6..9].copy_from_slice(&w.b);

    let mut m = Matrix9::zeros();
    for r in 0..3 {
        let g = b[k] * b[r];
        for j in 0..9 {
            m[(1 + r, j)] = g * ddp[j];
        }
        for n in 0..3 {
            m[(1 + r, 6 + n)] += dp * (delta(k, n) * b[r] + delta(r, n) * b[k] - 2.0 * b[k] * b[r] * b[n]) / bm;
        }
    }

    let s = 2.0 * w.p_par * b[k] / rho;
    m[(4, 0)] = -s * bu;
    for n in 0..3 {
        m[(4, 1 + n)] = s * b[n];
    }

    let g = b[k] * bu;
    for j in 0..9 {
        m[(5, j)] = g * ddp[j];
    }
    m[(5, 0)] -= dp * b[k] * bu / rho;
    for n in 0..3 {
        m[(5, 1 + n)] += dp * b[k] * b[n] / rho;
        m[(5, 6 + n)] += dp * ((delta(k, n) - 2.0 * b[k] * b[n]) * bu + b[k] * u[n]) / bm;
    }
    m
}

/// C_d(U) g for a derivative sample g of the conserved vector.
pub fn noncons_apply(w: &Primitive, g: &Vector9, axis: Axis) -> Result<Vector9> {
    Ok(nonconservative_matrix(w, axis)? * g)
}

/// phi'(V) times the divergence sample.
pub fn godunov_term(w: &Primitive, div_b: f64) -> Vector9 {
    phi_prime(w) * div_b
}

/// Centered derivative of order 2 or 4 on a padded array; returns interior values.
pub fn central_diff(samples: &[f64], ghost: usize, dx: f64, order: usize) -> Result<Vec<f64>> {
    let need = stencil_half_width(order)?;
    if ghost < need {
        return Err(Error::InsufficientGhostWidth { need, have: ghost });
    }
    if samples.len() < 2 * ghost {
        return Err(Error::DimensionMismatch("padded array shorter than its ghost layers".into()));
    }
    let n = samples.len() - 2 * ghost;
    Ok((ghost..ghost + n)
        .map(|c| central_stencil([samples[c - need], samples[c - 1], samples[c + 1], samples[c + need]], order, dx))
        .collect())
}

pub(crate) fn stencil_half_width(order: usize) -> Result<usize> {
    match order {
        2 => Ok(1),
        4 => Ok(2),
        _ => Err(Error::DimensionMismatch(format!("central difference order {order}"))),
    }
}

/// Derivative from samples at offsets (-2, -1, +1, +2). Order 2 ignores the outer pair.
///
/// Grouped so that mirrored data gives exactly negated results.
#[inline]
pub(crate) fn central_stencil<T>(s: [T; 4], order: usize, dx: f64) -> T
where
    T: Copy + std::ops::Add<Output = T> + std::ops::Sub<Output = T> + std::ops::Mul<f64, Output = T>,
{
    if order == 2 {
        (s[2] - s[1]) * (0.5 / dx)
    } else {
        ((s[0] - s[3]) + (s[2] - s[1]) * 8.0) * (1.0 / (12.0 * dx))
    }
}
