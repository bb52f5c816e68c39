//! Grid, boundary fill and the semi-discrete right-hand side.

use rayon::prelude::*;

use crate::eigen::{du_dw, dv_dw, scaled_at};
use crate::error::{Error, Result};
use crate::flux::{ec_flux_fourth_cells, ec_flux_pair, FluxCell};
use crate::noncons::{central_stencil, matrix_unchecked, NonConsCoeffs};
use crate::reconstruct::{scaled_entropy_jump, scaled_jump_hat, Reconstruction};
use crate::state::{phi_prime, Axis, Conserved, Primitive, Vector9};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Boundary {
    Periodic,
    Outflow,
}

/// Uniform cell-centred grid. `ny == 1` with `two_d == false` is a 1D grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub nx: usize,
    pub ny: usize,
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub two_d: bool,
    pub bc: Boundary,
}

impl Grid {
    pub fn line(nx: usize, x0: f64, x1: f64, bc: Boundary) -> Self {
        Grid { nx, ny: 1, x0, x1, y0: 0.0, y1: 1.0, two_d: false, bc }
    }

    pub fn plane(nx: usize, ny: usize, (x0, x1): (f64, f64), (y0, y1): (f64, f64), bc: Boundary) -> Self {
        Grid { nx, ny, x0, x1, y0, y1, two_d: true, bc }
    }

    pub fn dx(&self) -> f64 {
        (self.x1 - self.x0) / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        (self.y1 - self.y0) / self.ny as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + (i as f64 + 0.5) * self.dx()
    }

    pub fn y(&self, j: usize) -> f64 {
        self.y0 + (j as f64 + 0.5) * self.dy()
    }

    pub fn cells(&self) -> usize {
        self.nx * self.ny
    }
}

/// Interior cell values, row-major with x fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    pub nx: usize,
    pub ny: usize,
    pub data: Vec<Vector9>,
}

impl Field {
    pub fn zeros(nx: usize, ny: usize) -> Self {
        Field { nx, ny, data: vec![Vector9::zeros(); nx * ny] }
    }

    pub fn from_fn(grid: &Grid, mut f: impl FnMut(f64, f64) -> Conserved) -> Self {
        let mut data = Vec::with_capacity(grid.cells());
        for j in 0..grid.ny {
            for i in 0..grid.nx {
                data.push(f(grid.x(i), grid.y(j)).to_vector());
            }
        }
        Field { nx: grid.nx, ny: grid.ny, data }
    }

    pub fn at(&self, i: usize, j: usize) -> &Vector9 {
        &self.data[j * self.nx + i]
    }

    pub fn conserved(&self, i: usize, j: usize) -> Conserved {
        Conserved::from_vector(self.at(i, j))
    }

    pub fn primitive(&self, i: usize, j: usize) -> Primitive {
        self.conserved(i, j).to_primitive_unchecked()
    }
}

/// Interior plus ghost layers.
#[derive(Clone, Debug)]
pub struct PaddedField {
    pub nx: usize,
    pub ny: usize,
    pub gx: usize,
    pub gy: usize,
    pub data: Vec<Vector9>,
}

impl PaddedField {
    pub fn width(&self) -> usize {
        self.nx + 2 * self.gx
    }

    pub fn at(&self, pi: usize, pj: usize) -> &Vector9 {
        &self.data[pj * self.width() + pi]
    }
}

fn wrap(k: isize, n: usize, bc: Boundary) -> usize {
    match bc {
        Boundary::Periodic => k.rem_euclid(n as isize) as usize,
        Boundary::Outflow => k.clamp(0, n as isize - 1) as usize,
    }
}

/// Copy the interior into a padded array and fill `ghost` layers on every active side.
pub fn apply_boundary(field: &Field, grid: &Grid, ghost: usize) -> Result<PaddedField> {
    if field.nx != grid.nx || field.ny != grid.ny {
        return Err(Error::DimensionMismatch(format!(
            "field {}x{} on grid {}x{}",
            field.nx, field.ny, grid.nx, grid.ny
        )));
    }
    let gy = if grid.two_d { ghost } else { 0 };
    if grid.nx < ghost || (grid.two_d && grid.ny < ghost) {
        return Err(Error::InsufficientGhostWidth { need: ghost, have: grid.nx.min(grid.ny) });
    }
    let w = grid.nx + 2 * ghost;
    let h = grid.ny + 2 * gy;
    let mut data = Vec::with_capacity(w * h);
    for pj in 0..h {
        let j = wrap(pj as isize - gy as isize, grid.ny, grid.bc);
        for pi in 0..w {
            let i = wrap(pi as isize - ghost as isize, grid.nx, grid.bc);
            data.push(*field.at(i, j));
        }
    }
    Ok(PaddedField { nx: grid.nx, ny: grid.ny, gx: ghost, gy, data })
}

/// Spatial discretisation options.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SchemeConfig {
    /// 2 or 4.
    pub flux_order: usize,
    /// 2 or 4.
    pub central_order: usize,
    pub recon: Reconstruction,
    /// Off gives the entropy conservative scheme.
    pub diffusion: bool,
    /// Cross-check the diffusion operator against lambda dU/dV at every interface.
    pub audit: bool,
}

impl SchemeConfig {
    /// Entropy stable scheme of order k: k <= 2 pairs with second-order fluxes.
    pub fn entropy_stable(k: usize) -> Result<Self> {
        let recon = Reconstruction::from_order(k)?;
        let order = if k <= 2 { 2 } else { 4 };
        Ok(SchemeConfig {
            flux_order: order,
            central_order: order,
            recon,
            diffusion: true,
            audit: false,
        })
    }

    /// Entropy conservative scheme of flux order 2 or 4.
    pub fn entropy_conservative(order: usize) -> Self {
        SchemeConfig {
            flux_order: order,
            central_order: order,
            recon: Reconstruction::FirstOrder,
            diffusion: false,
            audit: false,
        }
    }

    pub fn ghost_width(&self) -> usize {
        if self.recon.order() >= 3 || self.flux_order == 4 || self.central_order == 4 {
            4
        } else {
            2
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !matches!(self.flux_order, 2 | 4) || !matches!(self.central_order, 2 | 4) {
            return Err(Error::Config(format!(
                "flux order {} / central order {} must be 2 or 4",
                self.flux_order, self.central_order
            )));
        }
        Ok(())
    }
}

/// Right-hand side of dU/dt = L(U) plus the entropy bookkeeping that goes with it.
#[derive(Clone, Debug)]
pub struct RhsOutput {
    pub rhs: Field,
    /// Per-cell divergence of the numerical entropy flux.
    pub entropy_flux_div: Vec<f64>,
    /// Largest per-interface production -1/2 [V].D[V_hat]; never positive for ES schemes.
    pub max_production: f64,
    pub sign_violations: u64,
    pub diffusion_mismatches: u64,
}

impl RhsOutput {
    pub fn flux_divergence(&self) -> f64 {
        self.entropy_flux_div.iter().sum()
    }
}

struct LineOut {
    rhs: Vec<Vector9>,
    qdiv: Vec<f64>,
    max_production: f64,
    sign_violations: u64,
    mismatches: u64,
}

// One sweep along a line of padded cells; `g` ghost cells on each end.
fn sweep_line(cells: &[FluxCell], us: &[Vector9], g: usize, h: f64, axis: Axis, cfg: &SchemeConfig) -> Result<LineOut> {
    let n = cells.len() - 2 * g;
    let d = axis.index();
    let reach = cfg.recon.reach();
    let mut fhat = Vec::with_capacity(n + 1);
    let mut qhat = Vec::with_capacity(n + 1);
    let mut max_production = f64::NEG_INFINITY;
    let mut sign_violations = 0u64;
    let mut mismatches = 0u64;
    let mut window = [Vector9::zeros(); 8];

    for l in g - 1..g + n {
        let (mut f, mut q) = if cfg.flux_order == 4 {
            ec_flux_fourth_cells([&cells[l - 1], &cells[l], &cells[l + 1], &cells[l + 2]], axis)
        } else {
            ec_flux_pair(&cells[l], &cells[l + 1], axis)
        };
        if cfg.diffusion {
            let wbar = Primitive::average(&cells[l].w, &cells[l + 1].w);
            let ed = scaled_at(&wbar, axis)?;
            let nwin = 2 * reach + 2;
            for (k, slot) in window[..nwin].iter_mut().enumerate() {
                *slot = cells[l - reach + k].v;
            }
            // D [V_hat] = lambda R R^T (R^T)^-1 [W_hat] = lambda R [W_hat].
            let (hat, _, viol) = scaled_jump_hat(&window[..nwin], reach, &ed.r, cfg.recon)?;
            sign_violations += viol as u64;
            let dj = ed.r * hat * ed.lambda_max;
            if cfg.audit {
                let jump = scaled_entropy_jump(&window[..nwin], reach, &ed.r, cfg.recon)?;
                let alt = dv_dw(&wbar)
                    .lu()
                    .solve(&jump.v_jump)
                    .map(|x| du_dw(&wbar) * x * ed.lambda_max);
                let ok = alt.map_or(false, |a| (a - dj).norm() <= 1e-8 * (1.0 + dj.norm()));
                if !ok {
                    mismatches += 1;
                }
            }
            let raw = cells[l + 1].v - cells[l].v;
            max_production = max_production.max(-0.5 * raw.dot(&dj));
            let vbar = (cells[l].v + cells[l + 1].v) * 0.5;
            f -= dj * 0.5;
            q -= 0.5 * vbar.dot(&dj);
        }
        fhat.push(f);
        qhat.push(q);
    }

    let mut rhs = Vec::with_capacity(n);
    let mut qdiv = Vec::with_capacity(n);
    for k in 0..n {
        let c = g + k;
        let w = &cells[c].w;
        let du = central_stencil([us[c - 2], us[c - 1], us[c + 1], us[c + 2]], cfg.central_order, h);
        let db = du[6 + d];
        let coeffs = NonConsCoeffs::new_unchecked(w);
        let cmat = matrix_unchecked(w, &coeffs, axis);
        let r = -(fhat[k + 1] - fhat[k]) / h - phi_prime(w) * db - cmat * du;
        rhs.push(r);
        qdiv.push((qhat[k + 1] - qhat[k]) / h);
    }
    Ok(LineOut { rhs, qdiv, max_production, sign_violations, mismatches })
}

fn flux_cells(p: &PaddedField, two_d: bool) -> Result<Vec<FluxCell>> {
    let w = p.width();
    p.data
        .par_iter()
        .enumerate()
        .map(|(idx, u)| {
            let prim = Conserved::from_vector(u).to_primitive_unchecked();
            prim.validate().map_err(|e| {
                let (pi, pj) = (idx % w, idx / w);
                let gy = if two_d { p.gy } else { 0 };
                Error::InadmissibleState {
                    i: pi.saturating_sub(p.gx).min(p.nx - 1),
                    j: pj.saturating_sub(gy).min(p.ny - 1),
                    stage: 0,
                    source: Box::new(e),
                }
            })?;
            Ok(FluxCell::new_unchecked(&prim))
        })
        .collect()
}

/// Semi-discrete right-hand side on a padded field.
pub fn assemble_rhs(p: &PaddedField, grid: &Grid, cfg: &SchemeConfig) -> Result<RhsOutput> {
    cfg.validate()?;
    let need = cfg.ghost_width();
    if p.gx < need || (grid.two_d && p.gy < need) {
        return Err(Error::InsufficientGhostWidth { need, have: p.gx.min(if grid.two_d { p.gy } else { p.gx }) });
    }
    let cells = flux_cells(p, grid.two_d)?;
    let w = p.width();
    let (nx, ny, gx, gy) = (p.nx, p.ny, p.gx, p.gy);
    let dx = grid.dx();

    let rows: Vec<LineOut> = (0..ny)
        .into_par_iter()
        .map(|j| {
            let start = (j + gy) * w;
            sweep_line(&cells[start..start + w], &p.data[start..start + w], gx, dx, Axis::X, cfg)
        })
        .collect::<Result<_>>()?;

    let cols: Option<Vec<LineOut>> = if grid.two_d {
        let dy = grid.dy();
        let h = ny + 2 * gy;
        Some(
            (0..nx)
                .into_par_iter()
                .map(|i| {
                    let col: Vec<FluxCell> = (0..h).map(|pj| cells[pj * w + i + gx]).collect();
                    let us: Vec<Vector9> = (0..h).map(|pj| p.data[pj * w + i + gx]).collect();
                    sweep_line(&col, &us, gy, dy, Axis::Y, cfg)
                })
                .collect::<Result<_>>()?,
        )
    } else {
        None
    };

    let mut out = RhsOutput {
        rhs: Field::zeros(nx, ny),
        entropy_flux_div: vec![0.0; nx * ny],
        max_production: f64::NEG_INFINITY,
        sign_violations: 0,
        diffusion_mismatches: 0,
    };
    let absorb = |l: &LineOut, out: &mut RhsOutput| {
        out.max_production = out.max_production.max(l.max_production);
        out.sign_violations += l.sign_violations;
        out.diffusion_mismatches += l.mismatches;
    };
    for (j, row) in rows.iter().enumerate() {
        absorb(row, &mut out);
        for i in 0..nx {
            out.rhs.data[j * nx + i] = row.rhs[i];
            out.entropy_flux_div[j * nx + i] = row.qdiv[i];
        }
    }
    if let Some(cols) = cols {
        for (i, col) in cols.iter().enumerate() {
            absorb(col, &mut out);
            for j in 0..ny {
                out.rhs.data[j * nx + i] += col.rhs[j];
                out.entropy_flux_div[j * nx + i] += col.qdiv[j];
            }
        }
    }
    Ok(out)
}

