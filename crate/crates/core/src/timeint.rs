//! Strong-stability-preserving Runge-Kutta, additive IMEX Runge-Kutta, the implicit
//! relaxation solve and the CFL time step.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::scheme::{Field, Grid};
use crate::state::{cons_to_prim, wave_speeds, wave_speeds_lenient, Axis, Conserved, Vector9};

/// Vector-space operations the integrators need.
pub trait OdeState: Clone {
    /// self += a x
    fn axpy(&mut self, a: f64, x: &Self);
    fn scale(&mut self, a: f64);
}

impl OdeState for f64 {
    fn axpy(&mut self, a: f64, x: &Self) {
        *self += a * x;
    }
    fn scale(&mut self, a: f64) {
        *self *= a;
    }
}

impl OdeState for Field {
    fn axpy(&mut self, a: f64, x: &Self) {
        for (u, v) in self.data.iter_mut().zip(&x.data) {
            *u += v * a;
        }
    }
    fn scale(&mut self, a: f64) {
        for u in self.data.iter_mut() {
            *u *= a;
        }
    }
}

fn tag_stage(e: Error, stage: usize) -> Error {
    match e {
        Error::InadmissibleState { i, j, source, .. } => Error::InadmissibleState { i, j, stage, source },
        other => other,
    }
}

/// Explicit scheme in Shu-Osher form: U(k) = sum_l gamma[k][l] U(l) + delta[k][l] dt M(U(l)).
#[derive(Clone, Debug, PartialEq)]
pub struct ShuOsher {
    pub name: &'static str,
    pub order: usize,
    pub gamma: Vec<Vec<f64>>,
    pub delta: Vec<Vec<f64>>,
}

impl ShuOsher {
    pub fn ssp2() -> Self {
        ShuOsher {
            name: "ssp-rk2",
            order: 2,
            gamma: vec![vec![1.0], vec![0.5, 0.5]],
            delta: vec![vec![1.0], vec![0.0, 0.5]],
        }
    }

    pub fn ssp3() -> Self {
        ShuOsher {
            name: "ssp-rk3",
            order: 3,
            gamma: vec![vec![1.0], vec![0.75, 0.25], vec![1.0 / 3.0, 0.0, 2.0 / 3.0]],
            delta: vec![vec![1.0], vec![0.0, 0.25], vec![0.0, 0.0, 2.0 / 3.0]],
        }
    }

    /// Five-stage fourth-order scheme.
    pub fn ssp4() -> Self {
        ShuOsher {
            name: "ssp-rk4",
            order: 4,
            gamma: vec![
                vec![1.0],
                vec![0.44437049406734, 0.55562950593266],
                vec![0.62010185138540, 0.0, 0.37989814861460],
                vec![0.17807995410773, 0.0, 0.0, 0.82192004589227],
                vec![0.00683325884039, 0.0, 0.51723167208978, 0.12759831133288, 0.34833675773694],
            ],
            delta: vec![
                vec![0.39175222700392],
                vec![0.0, 0.36841059262959],
                vec![0.0, 0.0, 0.25189177424738],
                vec![0.0, 0.0, 0.0, 0.54497475021237],
                vec![0.0, 0.0, 0.0, 0.08460416338212, 0.22600748319395],
            ],
        }
    }

    pub fn stages(&self) -> usize {
        self.gamma.len()
    }

    /// Increment coefficients: row k gives U(k) = U(n) + dt sum_l a[k][l] M(U(l)).
    /// Row 0 is the start of the step, the last row the final weights.
    pub fn increments(&self) -> Vec<Vec<f64>> {
        let s = self.stages();
        let mut a: Vec<Vec<f64>> = vec![vec![0.0; s]];
        for k in 0..s {
            let mut row = vec![0.0; s];
            for l in 0..=k {
                for m in 0..s {
                    row[m] += self.gamma[k][l] * a[l][m];
                }
                row[l] += self.delta[k][l];
            }
            a.push(row);
        }
        a
    }

    /// Weight of each right-hand-side evaluation in U(n+1) = U(n) + dt sum_l b_l M(U(l)).
    pub fn effective_weights(&self) -> Vec<f64> {
        self.increments().pop().unwrap()
    }
}

/// One explicit step. `rhs` is called once per stage, in order.
///
/// Stages are formed in increment form, so a constant state stays bitwise constant even
/// though the tabulated convex weights only sum to one within 1e-14.
pub fn ssprk_step<S: OdeState>(
    u0: &S,
    dt: f64,
    tab: &ShuOsher,
    mut rhs: impl FnMut(&S) -> Result<S>,
) -> Result<S> {
    let a = tab.increments();
    let s = tab.stages();
    let mut evals: Vec<S> = Vec::with_capacity(s);
    let mut stage = u0.clone();
    for k in 0..s {
        evals.push(rhs(&stage).map_err(|e| tag_stage(e, k))?);
        stage = u0.clone();
        for (l, ev) in evals.iter().enumerate() {
            if a[k + 1][l] != 0.0 {
                stage.axpy(a[k + 1][l] * dt, ev);
            }
        }
    }
    Ok(stage)
}

/// Additive Runge-Kutta pair: explicit for the transport, diagonally implicit for the source.
#[derive(Clone, Debug, PartialEq)]
pub struct ArkTableau {
    pub name: String,
    pub order: usize,
    pub explicit: Vec<Vec<f64>>,
    pub implicit: Vec<Vec<f64>>,
    pub b_explicit: Vec<f64>,
    pub b_implicit: Vec<f64>,
}

#[derive(Deserialize)]
struct TableauFile {
    name: String,
    order: usize,
    explicit: Vec<Vec<String>>,
    implicit: Vec<Vec<String>>,
    b_explicit: Vec<String>,
    b_implicit: Vec<String>,
}

fn parse_coeff(s: &str) -> Result<f64> {
    let bad = || Error::Config(format!("bad tableau coefficient `{s}`"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|_| bad())?;
            let q: f64 = q.trim().parse().map_err(|_| bad())?;
            Ok(p / q)
        }
        None => s.trim().parse().map_err(|_| bad()),
    }
}

const ARK3_SRC: &str = include_str!("../tableaus/ark3.toml");
const ARK4_SRC: &str = include_str!("../tableaus/ark4.toml");

impl ArkTableau {
    /// Two-stage L-stable scheme with beta = 1 - 1/sqrt(2).
    pub fn ark2() -> Self {
        let beta = 1.0 - std::f64::consts::FRAC_1_SQRT_2;
        ArkTableau {
            name: "ark2".into(),
            order: 2,
            explicit: vec![vec![0.0, 0.0], vec![1.0, 0.0]],
            implicit: vec![vec![beta, 0.0], vec![1.0 - 2.0 * beta, beta]],
            b_explicit: vec![0.5, 0.5],
            b_implicit: vec![0.5, 0.5],
        }
    }

    pub fn ark3() -> Self {
        Self::parse(ARK3_SRC).expect("bundled tableau")
    }

    pub fn ark4() -> Self {
        Self::parse(ARK4_SRC).expect("bundled tableau")
    }

    /// Read a tableau from TOML text; coefficients are decimal or `p/q` strings.
    pub fn parse(text: &str) -> Result<Self> {
        let f: TableauFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let mat = |m: &Vec<Vec<String>>| -> Result<Vec<Vec<f64>>> {
            m.iter().map(|r| r.iter().map(|c| parse_coeff(c)).collect()).collect()
        };
        let vec = |v: &Vec<String>| -> Result<Vec<f64>> { v.iter().map(|c| parse_coeff(c)).collect() };
        let t = ArkTableau {
            name: f.name,
            order: f.order,
            explicit: mat(&f.explicit)?,
            implicit: mat(&f.implicit)?,
            b_explicit: vec(&f.b_explicit)?,
            b_implicit: vec(&f.b_implicit)?,
        };
        t.check_shape()?;
        Ok(t)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    fn check_shape(&self) -> Result<()> {
        let s = self.b_explicit.len();
        let square = |m: &Vec<Vec<f64>>| m.len() == s && m.iter().all(|r| r.len() == s);
        if !square(&self.explicit) || !square(&self.implicit) || self.b_implicit.len() != s {
            return Err(Error::Config(format!("tableau `{}` has inconsistent shapes", self.name)));
        }
        for i in 0..s {
            if (i..s).any(|j| self.explicit[i][j] != 0.0) || (i + 1..s).any(|j| self.implicit[i][j] != 0.0) {
                return Err(Error::Config(format!("tableau `{}` is not lower triangular", self.name)));
            }
        }
        Ok(())
    }

    pub fn stages(&self) -> usize {
        self.b_explicit.len()
    }
}

/// A stiff term handled implicitly by the ARK schemes.
pub trait StiffSource<S> {
    fn eval(&self, u: &S) -> Result<S>;
    /// Solve U = rhs + h S(U).
    fn solve(&self, rhs: &S, h: f64) -> Result<S>;
}

/// One ARK step. `rhs` is called once per stage at the stage state, in order.
pub fn ark_step<S: OdeState, Src: StiffSource<S>>(
    u0: &S,
    dt: f64,
    tab: &ArkTableau,
    mut rhs: impl FnMut(&S) -> Result<S>,
    src: &Src,
) -> Result<S> {
    let s = tab.stages();
    let mut ls: Vec<S> = Vec::with_capacity(s);
    let mut ss: Vec<S> = Vec::with_capacity(s);
    for i in 0..s {
        let mut base = u0.clone();
        for j in 0..i {
            if tab.explicit[i][j] != 0.0 {
                base.axpy(dt * tab.explicit[i][j], &ls[j]);
            }
            if tab.implicit[i][j] != 0.0 {
                base.axpy(dt * tab.implicit[i][j], &ss[j]);
            }
        }
        let aii = tab.implicit[i][i];
        let stage = if aii != 0.0 { src.solve(&base, dt * aii).map_err(|e| tag_stage(e, i))? } else { base };
        ls.push(rhs(&stage).map_err(|e| tag_stage(e, i))?);
        ss.push(src.eval(&stage).map_err(|e| tag_stage(e, i))?);
    }
    let mut out = u0.clone();
    for i in 0..s {
        out.axpy(dt * tab.b_explicit[i], &ls[i]);
        out.axpy(dt * tab.b_implicit[i], &ss[i]);
    }
    Ok(out)
}

/// The two-stage L-stable ARK step.
pub fn ark_imex2_step<S: OdeState, Src: StiffSource<S>>(
    u0: &S,
    dt: f64,
    rhs: impl FnMut(&S) -> Result<S>,
    src: &Src,
) -> Result<S> {
    ark_step(u0, dt, &ArkTableau::ark2(), rhs, src)
}

/// Relaxation source: only the p_par slot is non-zero.
pub fn relaxation_source(u: &Vector9, tau: f64) -> Vector9 {
    let w = Conserved::from_vector(u).to_primitive_unchecked();
    let mut s = Vector9::zeros();
    s[4] = (w.p_perp - w.p_par) / tau;
    s
}

/// Solve U = rhs + h S(U) in closed form. Only p_par changes; e is frozen, so
/// E = 2e - rho|u|^2 - |B|^2 = 2 p_perp + p_par is too.
pub fn implicit_source_solve(rhs: &Conserved, h: f64, tau: f64) -> Result<Conserved> {
    let r = rhs.rho;
    if !(r > 0.0) {
        return Err(Error::NonPositiveDensity(r));
    }
    let big_e = 2.0 * rhs.e - (rhs.mom[0].powi(2) + rhs.mom[1].powi(2) + rhs.mom[2].powi(2)) / r
        - (rhs.b[0].powi(2) + rhs.b[1].powi(2) + rhs.b[2].powi(2));
    let k = h / tau;
    let p_par = (rhs.p_par + 0.5 * k * big_e) / (1.0 + 1.5 * k);
    if !(p_par > 0.0) || !(big_e - p_par > 0.0) {
        return Err(Error::NonPositiveResult(p_par));
    }
    Ok(Conserved { p_par, ..*rhs })
}

fn source_residual(x: &Vector9, base: &Vector9, h: f64, tau: f64) -> Vector9 {
    x - base - relaxation_source(x, tau) * h
}

/// Newton with backtracking line search on the full 9-vector. Kept to cross-check
/// the closed form.
pub fn implicit_source_solve_newton(rhs: &Conserved, h: f64, tau: f64, tol: f64, max_iter: usize) -> Result<Conserved> {
    let base = rhs.to_vector();
    let mut x = base;
    let scale = 1.0 + base.norm();
    let mut res = source_residual(&x, &base, h, tau);
    for it in 0..max_iter {
        if res.norm() <= tol * scale {
            return finish_newton(x);
        }
        let w = Conserved::from_vector(&x).to_primitive_unchecked();
        let mut jac = nalgebra::SMatrix::<f64, 9, 9>::identity();
        // dS5/dU = (dp_perp/dU - e5) / tau
        let mut dpp = [0.0; 9];
        dpp[0] = 0.5 * w.u2();
        for i in 0..3 {
            dpp[1 + i] = -w.u[i];
            dpp[6 + i] = -w.b[i];
        }
        dpp[4] = -0.5;
        dpp[5] = 1.0;
        for j in 0..9 {
            let ds = (dpp[j] - if j == 4 { 1.0 } else { 0.0 }) / tau;
            jac[(4, j)] -= h * ds;
        }
        let step = jac
            .lu()
            .solve(&(-res))
            .ok_or(Error::ImplicitSolveFailure { iterations: it, residual: res.norm() })?;
        let f0 = res.norm();
        let mut alpha = 1.0;
        loop {
            let trial = x + step * alpha;
            let r = source_residual(&trial, &base, h, tau);
            let admissible = cons_to_prim(&Conserved::from_vector(&trial)).is_ok();
            if admissible && r.norm() <= (1.0 - 1e-4 * alpha) * f0 {
                x = trial;
                res = r;
                break;
            }
            alpha *= 0.5;
            if alpha < 1e-10 {
                return Err(Error::ImplicitSolveFailure { iterations: it, residual: f0 });
            }
        }
    }
    if res.norm() <= tol * scale {
        return finish_newton(x);
    }
    Err(Error::ImplicitSolveFailure { iterations: max_iter, residual: res.norm() })
}

fn finish_newton(x: Vector9) -> Result<Conserved> {
    let c = Conserved::from_vector(&x);
    if !(c.p_par > 0.0) {
        return Err(Error::NonPositiveResult(c.p_par));
    }
    Ok(c)
}

/// Pressure relaxation toward isotropy with time constant `tau`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Relaxation {
    pub tau: f64,
}

impl StiffSource<Field> for Relaxation {
    fn eval(&self, u: &Field) -> Result<Field> {
        Ok(Field { nx: u.nx, ny: u.ny, data: u.data.iter().map(|c| relaxation_source(c, self.tau)).collect() })
    }

    fn solve(&self, rhs: &Field, h: f64) -> Result<Field> {
        let data = rhs
            .data
            .iter()
            .enumerate()
            .map(|(k, c)| {
                implicit_source_solve(&Conserved::from_vector(c), h, self.tau)
                    .map(|s| s.to_vector())
                    .map_err(|e| Error::InadmissibleState { i: k % rhs.nx, j: k / rhs.nx, stage: 0, source: Box::new(e) })
            })
            .collect::<Result<_>>()?;
        Ok(Field { nx: rhs.nx, ny: rhs.ny, data })
    }
}

/// Largest stable step: cfl / max over cells of (|lambda_x|/dx + |lambda_y|/dy),
/// using the full-system speeds.
pub fn compute_dt(field: &Field, grid: &Grid, cfl: f64) -> Result<f64> {
    let (dx, dy) = (grid.dx(), grid.dy());
    let mut worst: f64 = 0.0;
    for (k, u) in field.data.iter().enumerate() {
        let at = |e: Error| Error::InadmissibleState { i: k % field.nx, j: k / field.nx, stage: 0, source: Box::new(e) };
        let w = cons_to_prim(&Conserved::from_vector(u)).map_err(at)?;
        let mut rate = wave_speeds(&w, Axis::X).map_err(at)?.max_full() / dx;
        if grid.two_d {
            rate += wave_speeds(&w, Axis::Y).map_err(at)?.max_full() / dy;
        }
        worst = worst.max(rate);
    }
    if !(worst > 0.0) {
        return Err(Error::Config("all wave speeds vanish".into()));
    }
    Ok(cfl / worst)
}

/// Time step that tolerates states outside the hyperbolic region: there the speeds use
/// the magnitudes of the negative radicands. Returns the step and the number of such cells.
/// Non-positive density or pressure is still an error.
pub fn compute_dt_lenient(field: &Field, grid: &Grid, cfl: f64) -> Result<(f64, usize)> {
    let (dx, dy) = (grid.dx(), grid.dy());
    let mut worst: f64 = 0.0;
    let mut outside = 0;
    for (k, u) in field.data.iter().enumerate() {
        let at = |e: Error| Error::InadmissibleState { i: k % field.nx, j: k / field.nx, stage: 0, source: Box::new(e) };
        let w = cons_to_prim(&Conserved::from_vector(u)).map_err(at)?;
        let (sx, ox) = wave_speeds_lenient(&w, Axis::X).map_err(at)?;
        let mut rate = sx.max_full() / dx;
        let mut out = ox;
        if grid.two_d {
            let (sy, oy) = wave_speeds_lenient(&w, Axis::Y).map_err(at)?;
            rate += sy.max_full() / dy;
            out |= oy;
        }
        outside += out as usize;
        worst = worst.max(rate);
    }
    if !(worst > 0.0) {
        return Err(Error::Config("all wave speeds vanish".into()));
    }
    Ok((cfl / worst, outside))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ssp4_final_weights_sum_to_one() {
        let t = ShuOsher::ssp4();
        let s: f64 = t.gamma.last().unwrap().iter().sum();
        assert!((s - 1.0).abs() < 1e-13);
        let b: f64 = t.effective_weights().iter().sum();
        assert!((b - 1.0).abs() < 1e-10);
    }

    #[test]
    fn effective_weights_known() {
        let b = ShuOsher::ssp3().effective_weights();
        for (x, y) in b.iter().zip([1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0]) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn bundled_tableaus_parse() {
        assert_eq!(ArkTableau::ark3().stages(), 4);
        assert_eq!(ArkTableau::ark4().stages(), 6);
        assert!(ArkTableau::parse("name = 1").is_err());
    }
}
