//! Named schemes and the time-stepping driver.

use std::fmt;
use std::str::FromStr;

use crate::diagnostics::{entropy_budget, max_abs_entropy, source_entropy_rate, total_entropy, EntropyBudget};
use crate::error::{Error, Result};
use crate::scheme::{apply_boundary, assemble_rhs, Field, Grid, SchemeConfig};
use crate::timeint::{ark_step, compute_dt, compute_dt_lenient, relaxation_source, ssprk_step, ArkTableau, Relaxation, ShuOsher};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SchemeName {
    O2EsExp,
    O3EsExp,
    O4EsExp,
    O2EsImex,
    O3EsImex,
    O4EsImex,
    EcOnly,
}

impl SchemeName {
    pub const ALL: [SchemeName; 7] = [
        SchemeName::O2EsExp,
        SchemeName::O3EsExp,
        SchemeName::O4EsExp,
        SchemeName::O2EsImex,
        SchemeName::O3EsImex,
        SchemeName::O4EsImex,
        SchemeName::EcOnly,
    ];

    pub fn label(self) -> &'static str {
        match self {
            SchemeName::O2EsExp => "O2ES-EXP",
            SchemeName::O3EsExp => "O3ES-EXP",
            SchemeName::O4EsExp => "O4ES-EXP",
            SchemeName::O2EsImex => "O2ES-IMEX",
            SchemeName::O3EsImex => "O3ES-IMEX",
            SchemeName::O4EsImex => "O4ES-IMEX",
            SchemeName::EcOnly => "EC-only",
        }
    }

    pub fn spec(self, tau: f64) -> SchemeSpec {
        let es = |k| SchemeConfig::entropy_stable(k).expect("order 2..4");
        let (space, integrator, relaxation) = match self {
            SchemeName::O2EsExp => (es(2), Integrator::Ssp(ShuOsher::ssp2()), None),
            SchemeName::O3EsExp => (es(3), Integrator::Ssp(ShuOsher::ssp3()), None),
            SchemeName::O4EsExp => (es(4), Integrator::Ssp(ShuOsher::ssp4()), None),
            SchemeName::O2EsImex => (es(2), Integrator::Ark(ArkTableau::ark2()), Some(tau)),
            SchemeName::O3EsImex => (es(3), Integrator::Ark(ArkTableau::ark3()), Some(tau)),
            SchemeName::O4EsImex => (es(4), Integrator::Ark(ArkTableau::ark4()), Some(tau)),
            SchemeName::EcOnly => (SchemeConfig::entropy_conservative(4), Integrator::Ssp(ShuOsher::ssp4()), None),
        };
        SchemeSpec { name: self, space, integrator, relaxation }
    }
}

impl fmt::Display for SchemeName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for SchemeName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_uppercase().replace('_', "-");
        SchemeName::ALL
            .into_iter()
            .find(|n| n.label().to_ascii_uppercase() == key || (key == "EC" && *n == SchemeName::EcOnly))
            .ok_or_else(|| Error::UnknownScheme(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Integrator {
    Ssp(ShuOsher),
    Ark(ArkTableau),
}

impl Integrator {
    pub fn name(&self) -> &str {
        match self {
            Integrator::Ssp(t) => t.name,
            Integrator::Ark(t) => &t.name,
        }
    }
}

/// Spatial options, time integrator and optional relaxation time.
#[derive(Clone, Debug, PartialEq)]
pub struct SchemeSpec {
    pub name: SchemeName,
    pub space: SchemeConfig,
    pub integrator: Integrator,
    /// Relaxation time when the isotropization source is on.
    pub relaxation: Option<f64>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct AuditTotals {
    pub sign_violations: u64,
    pub diffusion_mismatches: u64,
    /// Largest per-interface production over the run; <= 0 up to roundoff.
    pub max_production: f64,
    /// Cell-steps whose state was outside the hyperbolic region when the step was chosen.
    pub hyperbolicity_excursions: u64,
}

#[derive(Clone, Copy, Debug, Default)]
struct StageInfo {
    flux_div: f64,
    source_rate: f64,
}

/// A field advancing in time under one scheme.
#[derive(Clone, Debug)]
pub struct Simulation {
    pub grid: Grid,
    pub field: Field,
    pub t: f64,
    pub step: usize,
    pub scheme: SchemeSpec,
    pub cfl: f64,
    /// Also report the residual with fluxes frozen at the start of the step.
    pub fe_audit: bool,
    /// Abort when a state leaves the hyperbolic region instead of counting it.
    pub strict_hyperbolicity: bool,
    pub audit: AuditTotals,
}

impl Simulation {
    pub fn new(grid: Grid, field: Field, scheme: SchemeSpec, cfl: f64) -> Self {
        Simulation {
            grid,
            field,
            t: 0.0,
            step: 0,
            scheme,
            cfl,
            fe_audit: true,
            strict_hyperbolicity: false,
            audit: AuditTotals { max_production: f64::NEG_INFINITY, ..Default::default() },
        }
    }

    fn eval(&self, u: &Field, explicit_source: bool, audit: &mut AuditTotals) -> Result<(Field, StageInfo)> {
        let p = apply_boundary(u, &self.grid, self.scheme.space.ghost_width())?;
        let out = assemble_rhs(&p, &self.grid, &self.scheme.space)?;
        audit.sign_violations += out.sign_violations;
        audit.diffusion_mismatches += out.diffusion_mismatches;
        audit.max_production = audit.max_production.max(out.max_production);
        let mut info = StageInfo { flux_div: out.flux_divergence(), source_rate: 0.0 };
        let mut rhs = out.rhs;
        if let Some(tau) = self.scheme.relaxation {
            info.source_rate = source_entropy_rate(u, tau);
            if explicit_source {
                for (r, c) in rhs.data.iter_mut().zip(&u.data) {
                    *r += relaxation_source(c, tau);
                }
            }
        }
        Ok((rhs, info))
    }

    pub fn stable_dt(&self) -> Result<f64> {
        if self.strict_hyperbolicity {
            compute_dt(&self.field, &self.grid, self.cfl)
        } else {
            compute_dt_lenient(&self.field, &self.grid, self.cfl).map(|(dt, _)| dt)
        }
    }

    /// Advance by `dt` and return the entropy budget of the step.
    pub fn advance(&mut self, dt: f64) -> Result<EntropyBudget> {
        let mut infos: Vec<StageInfo> = Vec::new();
        let mut audit = AuditTotals { max_production: f64::NEG_INFINITY, ..Default::default() };
        let u0 = self.field.clone();
        let (new, fe_info, weights_l, weights_s) = match &self.scheme.integrator {
            Integrator::Ssp(tab) => {
                let new = ssprk_step(&u0, dt, tab, |u| {
                    let (r, info) = self.eval(u, true, &mut audit)?;
                    infos.push(info);
                    Ok(r)
                })?;
                let b = tab.effective_weights();
                (new, infos[0], b.clone(), b)
            }
            Integrator::Ark(tab) => {
                let tau = self.scheme.relaxation.ok_or_else(|| Error::Config("IMEX scheme without relaxation time".into()))?;
                let src = Relaxation { tau };
                let new = ark_step(
                    &u0,
                    dt,
                    tab,
                    |u| {
                        let (r, info) = self.eval(u, false, &mut audit)?;
                        infos.push(info);
                        Ok(r)
                    },
                    &src,
                )?;
                let fe = if tab.implicit[0][0] == 0.0 {
                    infos[0]
                } else if self.fe_audit {
                    self.eval(&u0, false, &mut audit)?.1
                } else {
                    StageInfo { flux_div: f64::NAN, source_rate: f64::NAN }
                };
                (new, fe, tab.b_explicit.clone(), tab.b_implicit.clone())
            }
        };
        let flux_div: f64 = weights_l.iter().zip(&infos).map(|(b, i)| b * i.flux_div).sum();
        let source_rate: f64 = weights_s.iter().zip(&infos).map(|(b, i)| b * i.source_rate).sum();
        let scale = self.field.data.len() as f64 * max_abs_entropy(&u0);
        let residual = entropy_budget(&u0, &new, dt, flux_div, source_rate)?;
        let fe_residual = entropy_budget(&u0, &new, dt, fe_info.flux_div, fe_info.source_rate)?;
        self.audit.sign_violations += audit.sign_violations;
        self.audit.diffusion_mismatches += audit.diffusion_mismatches;
        self.audit.max_production = self.audit.max_production.max(audit.max_production);
        self.field = new;
        self.t += dt;
        self.step += 1;
        Ok(EntropyBudget {
            step: self.step,
            t: self.t,
            dt,
            total_entropy: total_entropy(&self.field),
            residual,
            fe_residual,
            max_production: audit.max_production,
            scale,
        })
    }

    /// Step until `t_end`, calling `on_step` after every step. The last step is shortened
    /// to land on `t_end` exactly.
    pub fn run_until(&mut self, t_end: f64, mut on_step: impl FnMut(&Simulation, &EntropyBudget) -> Result<()>) -> Result<()> {
        while self.t < t_end {
            let dt = if self.strict_hyperbolicity {
                compute_dt(&self.field, &self.grid, self.cfl)?
            } else {
                let (dt, outside) = compute_dt_lenient(&self.field, &self.grid, self.cfl)?;
                self.audit.hyperbolicity_excursions += outside as u64;
                dt
            };
            let dt = dt.min(t_end - self.t);
            let b = self.advance(dt)?;
            if (t_end - self.t).abs() <= 1e-12 * t_end.abs() {
                self.t = t_end;
            }
            on_step(self, &b)?;
        }
        Ok(())
    }

    /// Fixed-step variant used for refinement studies.
    pub fn run_fixed(&mut self, dt: f64, steps: usize) -> Result<Vec<EntropyBudget>> {
        (0..steps).map(|_| self.advance(dt)).collect()
    }
}
