//! Conserved, primitive and entropy variables, the entropy pair, wave speeds
//! and the admissibility regions.
//!
//! Slot order for conserved vectors: (rho, rho u_x, rho u_y, rho u_z, p_par, e, B_x, B_y, B_z).

use nalgebra::{SMatrix, SVector};

use crate::error::{Error, Result};

pub type Vector9 = SVector<f64, 9>;
pub type Matrix9 = SMatrix<f64, 9, 9>;

/// Lower bound on |B|^2 below which field-aligned quantities are undefined.
pub const EPS_B: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Primitive {
    pub rho: f64,
    pub u: [f64; 3],
    pub p_par: f64,
    pub p_perp: f64,
    pub b: [f64; 3],
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Conserved {
    pub rho: f64,
    pub mom: [f64; 3],
    pub p_par: f64,
    pub e: f64,
    pub b: [f64; 3],
}

#[inline]
pub(crate) fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

impl Primitive {
    pub fn u2(&self) -> f64 {
        dot3(&self.u, &self.u)
    }

    pub fn b2(&self) -> f64 {
        dot3(&self.b, &self.b)
    }

    pub fn u_dot_b(&self) -> f64 {
        dot3(&self.u, &self.b)
    }

    /// Positivity of density and both pressures, and a non-degenerate field.
    pub fn validate(&self) -> Result<()> {
        if !(self.rho > 0.0) {
            return Err(Error::NonPositiveDensity(self.rho));
        }
        if !(self.p_par > 0.0) {
            return Err(Error::NonPositivePressure { which: "parallel", value: self.p_par });
        }
        if !(self.p_perp > 0.0) {
            return Err(Error::NonPositivePressure { which: "perpendicular", value: self.p_perp });
        }
        let b2 = self.b2();
        if !(b2 > EPS_B) {
            return Err(Error::DegenerateField(b2));
        }
        Ok(())
    }

    pub fn to_vector(&self) -> Vector9 {
        Vector9::from_column_slice(&[
            self.rho, self.u[0], self.u[1], self.u[2], self.p_par, self.p_perp, self.b[0],
            self.b[1], self.b[2],
        ])
    }

    pub fn from_vector(v: &Vector9) -> Self {
        Primitive {
            rho: v[0],
            u: [v[1], v[2], v[3]],
            p_par: v[4],
            p_perp: v[5],
            b: [v[6], v[7], v[8]],
        }
    }

    /// Arithmetic mean of two primitive states.
    pub fn average(a: &Primitive, b: &Primitive) -> Primitive {
        let m = |x: f64, y: f64| 0.5 * (x + y);
        Primitive {
            rho: m(a.rho, b.rho),
            u: [m(a.u[0], b.u[0]), m(a.u[1], b.u[1]), m(a.u[2], b.u[2])],
            p_par: m(a.p_par, b.p_par),
            p_perp: m(a.p_perp, b.p_perp),
            b: [m(a.b[0], b.b[0]), m(a.b[1], b.b[1]), m(a.b[2], b.b[2])],
        }
    }

    /// Conversion without validation; the caller has already checked the state.
    pub fn to_conserved_unchecked(&self) -> Conserved {
        let r = self.rho;
        Conserved {
            rho: r,
            mom: [r * self.u[0], r * self.u[1], r * self.u[2]],
            p_par: self.p_par,
            e: 0.5 * r * self.u2() + 0.5 * self.b2() + 0.5 * (2.0 * self.p_perp + self.p_par),
            b: self.b,
        }
    }
}

impl Conserved {
    pub fn to_vector(&self) -> Vector9 {
        Vector9::from_column_slice(&[
            self.rho, self.mom[0], self.mom[1], self.mom[2], self.p_par, self.e, self.b[0],
            self.b[1], self.b[2],
        ])
    }

    pub fn from_vector(v: &Vector9) -> Self {
        Conserved {
            rho: v[0],
            mom: [v[1], v[2], v[3]],
            p_par: v[4],
            e: v[5],
            b: [v[6], v[7], v[8]],
        }
    }

    /// Conversion without validation. Used on hot paths that validate afterwards.
    pub fn to_primitive_unchecked(&self) -> Primitive {
        let r = self.rho;
        let u = [self.mom[0] / r, self.mom[1] / r, self.mom[2] / r];
        let p_perp = 0.5 * (2.0 * self.e - r * dot3(&u, &u) - dot3(&self.b, &self.b) - self.p_par);
        Primitive { rho: r, u, p_par: self.p_par, p_perp, b: self.b }
    }
}

pub fn cons_to_prim(u: &Conserved) -> Result<Primitive> {
    if !(u.rho > 0.0) {
        return Err(Error::NonPositiveDensity(u.rho));
    }
    let w = u.to_primitive_unchecked();
    w.validate()?;
    Ok(w)
}

pub fn prim_to_cons(w: &Primitive) -> Result<Conserved> {
    w.validate()?;
    Ok(w.to_conserved_unchecked())
}

/// Entropy variables V = dE/dU together with the scalars they are built from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropyVars {
    pub v: Vector9,
    pub s: f64,
    pub beta_perp: f64,
    pub beta_par: f64,
}

/// Specific entropy s = ln(p_par p_perp^2 / rho^5).
pub fn specific_entropy(w: &Primitive) -> f64 {
    (w.p_par * w.p_perp * w.p_perp).ln() - 5.0 * w.rho.ln()
}

pub fn prim_to_entropy(w: &Primitive) -> Result<EntropyVars> {
    w.validate()?;
    Ok(entropy_vars_unchecked(w))
}

pub(crate) fn entropy_vars_unchecked(w: &Primitive) -> EntropyVars {
    let s = specific_entropy(w);
    let bp = w.rho / w.p_perp;
    let bl = w.rho / w.p_par;
    let v = Vector9::from_column_slice(&[
        5.0 - s - bp * w.u2(),
        2.0 * bp * w.u[0],
        2.0 * bp * w.u[1],
        2.0 * bp * w.u[2],
        bp - bl,
        -2.0 * bp,
        2.0 * bp * w.b[0],
        2.0 * bp * w.b[1],
        2.0 * bp * w.b[2],
    ]);
    EntropyVars { v, s, beta_perp: bp, beta_par: bl }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropyPair {
    pub e: f64,
    pub qx: f64,
    pub qy: f64,
}

/// Entropy E = -rho s and fluxes Q_d = -rho u_d s.
pub fn entropy_pair(w: &Primitive) -> Result<EntropyPair> {
    w.validate()?;
    let s = specific_entropy(w);
    Ok(EntropyPair { e: -w.rho * s, qx: -w.rho * w.u[0] * s, qy: -w.rho * w.u[1] * s })
}

/// Entropy potential 2 rho + beta_perp |B|^2; the flux potential is this times u_d.
pub fn entropy_potential(w: &Primitive) -> f64 {
    2.0 * w.rho + w.rho / w.p_perp * w.b2()
}

/// phi(V) and its gradient phi'(V) for the Godunov symmetrization term.
pub fn godunov_phi(v: &EntropyVars) -> Result<(f64, Vector9)> {
    let v = &v.v;
    if !(v[5] < 0.0) || !v[5].is_finite() {
        return Err(Error::DegenerateEntropyState(v[5]));
    }
    let phi = -(v[1] * v[6] + v[2] * v[7] + v[3] * v[8]) / v[5];
    let u = [-v[1] / v[5], -v[2] / v[5], -v[3] / v[5]];
    let b = [-v[6] / v[5], -v[7] / v[5], -v[8] / v[5]];
    let grad = Vector9::from_column_slice(&[0.0, b[0], b[1], b[2], 0.0, dot3(&u, &b), u[0], u[1], u[2]]);
    Ok((phi, grad))
}

/// phi'(V) written directly in primitive variables: (0, B, 0, u.B, u).
pub(crate) fn phi_prime(w: &Primitive) -> Vector9 {
    Vector9::from_column_slice(&[0.0, w.b[0], w.b[1], w.b[2], 0.0, w.u_dot_b(), w.u[0], w.u[1], w.u[2]])
}

/// Characteristic speeds along one axis.
///
/// `c_a`, `c_f`, `c_s` belong to the full anisotropic system and set the time step.
/// `cons_cf`, `cons_cs` and `v_a` belong to the conservative part and set the diffusion.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WaveSpeeds {
    pub u_n: f64,
    pub c_a: f64,
    pub c_f: f64,
    pub c_s: f64,
    pub a: f64,
    pub v_a: f64,
    pub cons_cf: f64,
    pub cons_cs: f64,
}

impl WaveSpeeds {
    /// Largest |lambda| of the full system.
    pub fn max_full(&self) -> f64 {
        self.u_n.abs() + self.c_f.max(self.c_a)
    }

    /// Largest |lambda| of the conservative part.
    pub fn max_conservative(&self) -> f64 {
        self.u_n.abs() + self.cons_cf.max(self.v_a)
    }
}

// Clamp slightly negative radicands, reject genuinely negative ones.
fn real_sqrt(x: f64, scale: f64) -> Result<f64> {
    if x >= 0.0 {
        Ok(x.sqrt())
    } else if x >= -1e-12 * scale.abs().max(f64::MIN_POSITIVE) {
        Ok(0.0)
    } else {
        Err(Error::ComplexSpeed { radicand: x })
    }
}

/// Conservative-part speeds only. Always real for a valid state.
pub fn conservative_speeds(w: &Primitive, axis: Axis) -> (f64, f64, f64, f64) {
    let d = axis.index();
    let a2 = 2.0 * w.p_perp / w.rho;
    let va2 = w.b2() / w.rho;
    let vad2 = w.b[d] * w.b[d] / w.rho;
    let sum = va2 + a2;
    let disc = (sum * sum - 4.0 * vad2 * a2).max(0.0).sqrt();
    let cf2 = 0.5 * (sum + disc);
    let cs2 = (0.5 * (sum - disc)).max(0.0);
    (a2.sqrt(), vad2.sqrt(), cf2.sqrt(), cs2.sqrt())
}

pub fn wave_speeds(w: &Primitive, axis: Axis) -> Result<WaveSpeeds> {
    w.validate()?;
    speeds_with(w, axis, real_sqrt)
}

/// Like `wave_speeds`, but outside the hyperbolic region each negative radicand is
/// replaced by its magnitude. The flag reports whether that happened.
pub fn wave_speeds_lenient(w: &Primitive, axis: Axis) -> Result<(WaveSpeeds, bool)> {
    w.validate()?;
    let mut outside = false;
    let ws = speeds_with(w, axis, |x, scale| {
        Ok(real_sqrt(x, scale).unwrap_or_else(|_| {
            outside = true;
            x.abs().sqrt()
        }))
    })?;
    Ok((ws, outside))
}

fn speeds_with(w: &Primitive, axis: Axis, mut sqrt: impl FnMut(f64, f64) -> Result<f64>) -> Result<WaveSpeeds> {
    let d = axis.index();
    let (a, v_a, cons_cf, cons_cs) = conservative_speeds(w, axis);

    let b2 = w.b2();
    let bd = w.b[d];
    let bd2 = bd * bd / b2;
    let dp = w.p_par - w.p_perp;
    let (pl, pp) = (w.p_par, w.p_perp);

    let ca2_num = bd * bd - dp * bd2;
    let c_a = sqrt(ca2_num, bd * bd + dp.abs() * bd2)? / w.rho.sqrt();

    let big_a = b2 + 2.0 * pp + bd2 * (2.0 * pl - pp);
    let disc = big_a * big_a
        + 4.0
            * (pp * pp * bd2 * (1.0 - bd2) - 3.0 * pl * pp * bd2 * (2.0 - bd2)
                + 3.0 * pl * pl * bd2 * bd2
                - 3.0 * bd * bd * pl);
    let sq = sqrt(disc, big_a * big_a)?;
    let c_f = sqrt(big_a + sq, big_a)? / (2.0 * w.rho).sqrt();
    let c_s = sqrt(big_a - sq, big_a)? / (2.0 * w.rho).sqrt();

    Ok(WaveSpeeds { u_n: w.u[d], c_a, c_f, c_s, a, v_a, cons_cf, cons_cs })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    R1,
    R2,
    R3,
    Violated,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdmissibilityReport {
    pub p_min: f64,
    pub p_max: f64,
    pub region: Region,
}

/// Bounds on p_par for which the full system stays hyperbolic, and the sub-region.
pub fn admissibility(w: &Primitive) -> AdmissibilityReport {
    let b2 = w.b2();
    let pp = w.p_perp;
    let p_min = pp * pp / (6.0 * pp + 3.0 * b2);
    let p_max = b2 + pp;
    let positive = w.rho > 0.0 && w.p_par > 0.0 && pp > 0.0 && b2 > EPS_B;
    let p = w.p_par;
    let region = if !positive || !(p >= p_min && p <= p_max) {
        Region::Violated
    } else if p <= 0.25 * p_max {
        Region::R1
    } else if p <= 0.25 * p_max + 0.75 * p_min {
        Region::R2
    } else {
        Region::R3
    };
    AdmissibilityReport { p_min, p_max, region }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Primitive {
        Primitive { rho: 1.3, u: [0.2, -0.4, 0.1], p_par: 0.9, p_perp: 0.6, b: [0.7, 0.5, -0.3] }
    }

    #[test]
    fn round_trip() {
        let w = sample();
        let u = prim_to_cons(&w).unwrap();
        let w2 = cons_to_prim(&u).unwrap();
        for (a, b) in w.to_vector().iter().zip(w2.to_vector().iter()) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_negative_perp_pressure() {
        let mut u = prim_to_cons(&sample()).unwrap();
        u.e = 0.1;
        assert!(matches!(cons_to_prim(&u), Err(Error::NonPositivePressure { .. })));
    }

    #[test]
    fn phi_matches_primitive_form() {
        let w = sample();
        let v = prim_to_entropy(&w).unwrap();
        let (phi, grad) = godunov_phi(&v).unwrap();
        assert!((phi - 2.0 * v.beta_perp * w.u_dot_b()).abs() < 1e-14);
        assert!((grad - phi_prime(&w)).norm() < 1e-14);
        assert!((v.v.dot(&grad) - phi).abs() < 1e-14);
    }

    #[test]
    fn isotropic_speeds() {
        // p_par = p_perp reduces the anisotropic fast speed to the MHD one.
        let w = Primitive { rho: 1.0, u: [0.0; 3], p_par: 1.0, p_perp: 1.0, b: [0.75, 1.0, 0.0] };
        let ws = wave_speeds(&w, Axis::X).unwrap();
        assert!(ws.c_f > ws.c_s && ws.c_f > 0.0);
        assert!(ws.max_full() > 0.0);
    }

    #[test]
    fn region_ties_go_low() {
        let mut w = sample();
        let r = admissibility(&w);
        w.p_par = 0.25 * r.p_max;
        assert_eq!(admissibility(&w).region, Region::R1);
        w.p_par = 10.0;
        assert_eq!(admissibility(&w).region, Region::Violated);
    }
}
