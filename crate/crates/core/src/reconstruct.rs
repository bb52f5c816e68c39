//! Sign-preserving reconstruction of scaled entropy variables.
//!
//! At an interface the entropy variables of the neighbouring cells are projected with
//! the interface eigenvectors, W = R^T V, reconstructed componentwise to the face and
//! mapped back. The resulting jump feeds the numerical diffusion.

use crate::error::{Error, Result};
use crate::state::{Matrix9, Vector9};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Reconstruction {
    /// No reconstruction: the raw jump in V.
    FirstOrder,
    MinMod,
    Eno3,
    Eno4,
}

impl Reconstruction {
    pub fn order(self) -> usize {
        match self {
            Reconstruction::FirstOrder => 1,
            Reconstruction::MinMod => 2,
            Reconstruction::Eno3 => 3,
            Reconstruction::Eno4 => 4,
        }
    }

    pub fn from_order(k: usize) -> Result<Self> {
        match k {
            1 => Ok(Reconstruction::FirstOrder),
            2 => Ok(Reconstruction::MinMod),
            3 => Ok(Reconstruction::Eno3),
            4 => Ok(Reconstruction::Eno4),
            _ => Err(Error::DimensionMismatch(format!("reconstruction order {k}"))),
        }
    }

    /// Cells needed on each side of the interface's left cell: window is
    /// [left - reach, left + 1 + reach].
    pub fn reach(self) -> usize {
        match self {
            Reconstruction::FirstOrder => 0,
            Reconstruction::MinMod => 1,
            Reconstruction::Eno3 => 2,
            Reconstruction::Eno4 => 3,
        }
    }
}

pub fn minmod(a: f64, b: f64) -> f64 {
    if a * b <= 0.0 {
        0.0
    } else if a > 0.0 {
        a.min(b)
    } else {
        a.max(b)
    }
}

// Right-face weights c_{r,j} for stencils with r cells left of the target, r = -1..k-1.
const ENO2: [[f64; 4]; 3] = [[1.5, -0.5, 0.0, 0.0], [0.5, 0.5, 0.0, 0.0], [-0.5, 1.5, 0.0, 0.0]];
const ENO3: [[f64; 4]; 4] = [
    [11.0 / 6.0, -7.0 / 6.0, 1.0 / 3.0, 0.0],
    [1.0 / 3.0, 5.0 / 6.0, -1.0 / 6.0, 0.0],
    [-1.0 / 6.0, 5.0 / 6.0, 1.0 / 3.0, 0.0],
    [1.0 / 3.0, -7.0 / 6.0, 11.0 / 6.0, 0.0],
];
const ENO4: [[f64; 4]; 5] = [
    [25.0 / 12.0, -23.0 / 12.0, 13.0 / 12.0, -0.25],
    [0.25, 13.0 / 12.0, -5.0 / 12.0, 1.0 / 12.0],
    [-1.0 / 12.0, 7.0 / 12.0, 7.0 / 12.0, -1.0 / 12.0],
    [1.0 / 12.0, -5.0 / 12.0, 13.0 / 12.0, 0.25],
    [-0.25, 13.0 / 12.0, -23.0 / 12.0, 25.0 / 12.0],
];

/// Weights for the right face (`right = true`) or left face of a cell whose stencil
/// starts `r` cells to its left.
#[inline]
pub fn eno_weights(k: usize, r: usize, right: bool) -> [f64; 4] {
    let row = if right { r + 1 } else { r };
    match k {
        2 => ENO2[row],
        3 => ENO3[row],
        4 => ENO4[row],
        _ => panic!("ENO order {k} not tabulated"),
    }
}

// Built as a difference of differences so it rounds like the table in `eno_pair`.
fn undivided(w: &[f64], start: usize, order: usize) -> f64 {
    if order == 0 {
        w[start]
    } else {
        undivided(w, start + 1, order - 1) - undivided(w, start, order - 1)
    }
}

/// ENO face value of cell `i` from the samples `w`. Ties pick the left stencil.
pub fn eno_face(w: &[f64], i: usize, k: usize, right: bool) -> f64 {
    let mut left = i;
    for len in 1..k {
        let dl = undivided(w, left - 1, len);
        let dr = undivided(w, left, len);
        if dl.abs() <= dr.abs() {
            left -= 1;
        }
    }
    let c = eno_weights(k, i - left, right);
    (0..k).map(|j| c[j] * w[left + j]).sum()
}

/// Face values (right face of cell `left`, left face of cell `left + 1`) of one component.
#[inline]
pub fn face_pair(w: &[f64], left: usize, recon: Reconstruction) -> (f64, f64) {
    match recon {
        Reconstruction::FirstOrder => (w[left], w[left + 1]),
        Reconstruction::MinMod => {
            let (a, b, c, d) = (w[left - 1], w[left], w[left + 1], w[left + 2]);
            (b + 0.5 * minmod(b - a, c - b), c - 0.5 * minmod(c - b, d - c))
        }
        Reconstruction::Eno3 => eno_pair::<3>(w, left),
        Reconstruction::Eno4 => eno_pair::<4>(w, left),
    }
}

// Both faces at once, sharing the difference tables. Same choices as `eno_face`.
#[inline]
fn eno_pair<const K: usize>(w: &[f64], left: usize) -> (f64, f64) {
    let lo = left + 1 - K;
    let n = 2 * K;
    let mut d = [[0.0f64; 8]; 4];
    d[0][..n].copy_from_slice(&w[lo..lo + n]);
    for len in 1..K {
        for j in 0..n - len {
            d[len][j] = d[len - 1][j + 1] - d[len - 1][j];
        }
    }
    let face = |i: usize, right: bool| {
        let mut l = i - lo;
        for row in d.iter().take(K).skip(1) {
            if row[l - 1].abs() <= row[l].abs() {
                l -= 1;
            }
        }
        let c = eno_weights(K, i - lo - l, right);
        (0..K).map(|j| c[j] * d[0][l + j]).sum::<f64>()
    };
    (face(left, true), face(left + 1, false))
}

/// Reconstructed jump in entropy variables at one interface.
#[derive(Clone, Copy, Debug)]
pub struct ScaledJump {
    /// Jump in V recovered from the reconstructed scaled variables.
    pub v_jump: Vector9,
    /// Raw jump of the scaled variables between the two cells.
    pub w_jump: Vector9,
    /// Reconstructed jump of the scaled variables.
    pub w_hat_jump: Vector9,
    pub order: usize,
    /// Components whose reconstructed jump has the wrong sign.
    pub sign_violations: u32,
}

pub(crate) fn invert_transpose(r: &Matrix9) -> Result<Matrix9> {
    let rt = r.transpose();
    let inv = rt.try_inverse().ok_or(Error::SingularScaling(f64::INFINITY))?;
    let cond = norm1(&rt) * norm1(&inv);
    if !(cond <= 1e12) {
        return Err(Error::SingularScaling(cond));
    }
    Ok(inv)
}

fn norm1(m: &Matrix9) -> f64 {
    m.column_iter().map(|c| c.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// Reconstructed jump of the scaled variables W = R^T V at the interface between
/// `window[left]` and `window[left + 1]`, plus the number of components whose sign
/// disagrees with the raw jump. The inverse map back to V is left to the caller.
pub fn scaled_jump_hat(window: &[Vector9], left: usize, r: &Matrix9, recon: Reconstruction) -> Result<(Vector9, Vector9, u32)> {
    let reach = recon.reach();
    if left < reach || left + 1 + reach >= window.len() {
        return Err(Error::InsufficientGhostWidth { need: reach, have: left.min(window.len().saturating_sub(left + 2)) });
    }
    if recon == Reconstruction::FirstOrder {
        let raw = r.tr_mul(&(window[left + 1] - window[left]));
        return Ok((raw, raw, 0));
    }
    let lo = left - reach;
    let n = 2 * reach + 2;
    let mut w = [[0.0f64; 8]; 9];
    for c in 0..n {
        let wc = r.tr_mul(&window[lo + c]);
        for comp in 0..9 {
            w[comp][c] = wc[comp];
        }
    }
    let mut hat = Vector9::zeros();
    let mut wj = Vector9::zeros();
    let mut violations = 0;
    for comp in 0..9 {
        let s = &w[comp][..n];
        let (plus, minus) = face_pair(s, reach, recon);
        hat[comp] = minus - plus;
        wj[comp] = s[reach + 1] - s[reach];
        let scale = s.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if hat[comp] * wj[comp] < 0.0 && hat[comp].abs() > 1e-12 * scale {
            violations += 1;
        }
    }
    Ok((hat, wj, violations))
}

/// Jump at the interface between `window[left]` and `window[left + 1]`.
///
/// `window` holds entropy variables of consecutive cells along the sweep direction and
/// `r` the scaled eigenvectors at that interface.
pub fn scaled_entropy_jump(
    window: &[Vector9],
    left: usize,
    r: &Matrix9,
    recon: Reconstruction,
) -> Result<ScaledJump> {
    if recon == Reconstruction::FirstOrder {
        if left + 1 >= window.len() {
            return Err(Error::InsufficientGhostWidth { need: 1, have: 0 });
        }
        let raw = window[left + 1] - window[left];
        return Ok(ScaledJump { v_jump: raw, w_jump: raw, w_hat_jump: raw, order: 1, sign_violations: 0 });
    }
    let (hat, wj, violations) = scaled_jump_hat(window, left, r, recon)?;
    let inv = invert_transpose(r)?;
    Ok(ScaledJump { v_jump: inv * hat, w_jump: wj, w_hat_jump: hat, order: recon.order(), sign_violations: violations })
}

#[cfg(test)]
mod tests {
    use super::*;

    // Cell averages of x^p on unit cells [i, i+1].
    fn averages(p: i32, n: usize) -> Vec<f64> {
        (0..n).map(|i| ((i as f64 + 1.0).powi(p + 1) - (i as f64).powi(p + 1)) / (p as f64 + 1.0)).collect()
    }

    #[test]
    fn eno_exact_for_polynomials() {
        for k in [2usize, 3, 4] {
            for p in 0..k as i32 {
                let w = averages(p, 12);
                for i in 4..8 {
                    let right = eno_face(&w, i, k, true);
                    let left = eno_face(&w, i, k, false);
                    assert!((right - (i as f64 + 1.0).powi(p)).abs() < 1e-9, "k{k} p{p}");
                    assert!((left - (i as f64).powi(p)).abs() < 1e-9, "k{k} p{p}");
                }
            }
        }
    }

    #[test]
    fn pair_matches_single_faces() {
        let w: Vec<f64> = (0..8).map(|i| ((i * i * 37 % 11) as f64).sin()).collect();
        for (k, recon) in [(3, Reconstruction::Eno3), (4, Reconstruction::Eno4)] {
            let left = k - 1;
            let (p, m) = face_pair(&w, left, recon);
            assert_eq!(p, eno_face(&w, left, k, true));
            assert_eq!(m, eno_face(&w, left + 1, k, false));
        }
    }

    #[test]
    fn minmod_basics() {
        assert_eq!(minmod(1.0, 2.0), 1.0);
        assert_eq!(minmod(-1.0, -3.0), -1.0);
        assert_eq!(minmod(-1.0, 3.0), 0.0);
    }

    #[test]
    fn eno_ties_go_left() {
        let w = [0.0, 1.0, 2.0, 3.0, 4.0];
        // Linear data: every difference ties, so the stencil slides fully left.
        let v = eno_face(&w, 2, 3, true);
        assert!((v - 2.5).abs() < 1e-14);
    }
}
