//! Batch runs: config, output files and the run manifest.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::cases::{exact_accuracy_solution, init_case, CaseId, TestCase};
use crate::diagnostics::{convergence_order, l1_error, EntropyBudget};
use crate::error::{Error, Result};
use crate::scheme::{Field, Grid};
use crate::solver::{Integrator, SchemeName, Simulation};
use crate::state::EPS_B;
use crate::timeint::ArkTableau;

fn default_cfl() -> f64 {
    0.4
}
fn default_tau() -> f64 {
    1e-5
}
fn default_out() -> PathBuf {
    PathBuf::from("out")
}

/// Everything a run needs. Loaded from TOML; command-line flags override fields.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub case: String,
    pub scheme: String,
    pub n: Vec<usize>,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    #[serde(default)]
    pub t_final: Option<f64>,
    #[serde(default = "default_out")]
    pub output_dir: PathBuf,
    /// Write a snapshot every this many steps; 0 keeps only the final one.
    #[serde(default)]
    pub output_every: usize,
    #[serde(default = "default_tau")]
    pub tau: f64,
    #[serde(default)]
    pub threads: Option<usize>,
    /// Replace the IMEX tableau with one read from this file.
    #[serde(default)]
    pub ark_tableau: Option<PathBuf>,
    /// Abort when a state leaves the hyperbolic region; otherwise such cells are counted.
    #[serde(default)]
    pub strict_hyperbolicity: bool,
}

impl RunConfig {
    pub fn new(case: &str, scheme: &str, n: Vec<usize>) -> Self {
        RunConfig {
            case: case.into(),
            scheme: scheme.into(),
            n,
            cfl: default_cfl(),
            t_final: None,
            output_dir: default_out(),
            output_every: 0,
            tau: default_tau(),
            threads: None,
            ark_tableau: None,
            strict_hyperbolicity: false,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Self::from_toml(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<(CaseId, SchemeName)> {
        let case: CaseId = self.case.parse()?;
        let scheme: SchemeName = self.scheme.parse()?;
        if self.n.is_empty() || self.n.iter().any(|&n| n < 8) {
            return Err(Error::Config(format!("resolutions {:?} must be >= 8", self.n)));
        }
        if !(self.cfl > 0.0) {
            return Err(Error::Config(format!("cfl {} must be positive", self.cfl)));
        }
        if !(self.tau > 0.0) {
            return Err(Error::Config(format!("tau {} must be positive", self.tau)));
        }
        if let Some(t) = self.t_final {
            if !(t > 0.0) {
                return Err(Error::Config(format!("t_final {t} must be positive")));
            }
        }
        Ok((case, scheme))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Manifest {
    pub case: String,
    pub scheme: String,
    pub n: usize,
    pub k: usize,
    pub flux_order: usize,
    pub central_order: usize,
    pub reconstruction: String,
    pub diffusion: bool,
    pub integrator: String,
    pub relaxation_tau: Option<f64>,
    pub cfl: f64,
    pub t_final: f64,
    pub steps: usize,
    pub eps_b: f64,
    pub log_mean_series_threshold: f64,
    pub scaling_condition_limit: f64,
    pub sign_audit_tolerance: f64,
    pub budget_tolerance: f64,
    pub sign_violations: u64,
    pub diffusion_mismatches: u64,
    pub hyperbolicity_excursions: u64,
    pub strict_hyperbolicity: bool,
    pub max_interface_production: f64,
    pub max_budget_residual_ratio: f64,
    pub git_describe: String,
    pub wall_time_s: f64,
}

#[derive(Clone, Debug)]
pub struct RunResult {
    pub n: usize,
    pub field: Field,
    pub grid: Grid,
    pub budgets: Vec<EntropyBudget>,
    pub manifest: Manifest,
    pub l1_rho: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct RunSummary {
    pub results: Vec<RunResult>,
    pub table: Option<String>,
    pub files: Vec<PathBuf>,
}

fn git_describe() -> String {
    std::process::Command::new("git")
        .args(["describe", "--always", "--dirty"])
        .output()
        .ok()
        .filter(|o| o.status.success())
        .map(|o| String::from_utf8_lossy(&o.stdout).trim().to_string())
        .unwrap_or_else(|| "unknown".into())
}

/// Run one case at one resolution without writing anything.
pub fn simulate(
    case: CaseId,
    scheme: SchemeName,
    n: usize,
    cfg: &RunConfig,
    mut on_step: impl FnMut(&Simulation, &EntropyBudget) -> Result<()>,
) -> Result<RunResult> {
    let tc = TestCase::get(case);
    let grid = tc.grid(n);
    let field = init_case(case, &grid)?;
    let mut spec = scheme.spec(cfg.tau);
    if let (Some(path), Integrator::Ark(_)) = (&cfg.ark_tableau, &spec.integrator) {
        spec.integrator = Integrator::Ark(ArkTableau::load(path)?);
    }
    let t_final = cfg.t_final.unwrap_or(tc.t_final);
    let mut sim = Simulation::new(grid, field, spec, cfg.cfl);
    sim.strict_hyperbolicity = cfg.strict_hyperbolicity;
    let start = Instant::now();
    let mut budgets = Vec::new();
    sim.run_until(t_final, |s, b| {
        budgets.push(*b);
        on_step(s, b)
    })?;
    let wall = start.elapsed().as_secs_f64();

    let l1_rho = if case == CaseId::Accuracy {
        let num: Vec<f64> = sim.field.data.iter().map(|u| u[0]).collect();
        let exact: Vec<f64> = (0..n).map(|i| exact_accuracy_solution(grid.x(i), t_final).rho).collect();
        Some(l1_error(&num, &exact, grid.dx())?)
    } else {
        None
    };
    let sp = &sim.scheme.space;
    let manifest = Manifest {
        case: case.name().into(),
        scheme: scheme.label().into(),
        n,
        k: sp.recon.order(),
        flux_order: sp.flux_order,
        central_order: sp.central_order,
        reconstruction: format!("{:?}", sp.recon),
        diffusion: sp.diffusion,
        integrator: sim.scheme.integrator.name().into(),
        relaxation_tau: sim.scheme.relaxation,
        cfl: cfg.cfl,
        t_final,
        steps: sim.step,
        eps_b: EPS_B,
        log_mean_series_threshold: 1e-4,
        scaling_condition_limit: 1e12,
        sign_audit_tolerance: 1e-12,
        budget_tolerance: 1e-10,
        sign_violations: sim.audit.sign_violations,
        diffusion_mismatches: sim.audit.diffusion_mismatches,
        hyperbolicity_excursions: sim.audit.hyperbolicity_excursions,
        strict_hyperbolicity: sim.strict_hyperbolicity,
        max_interface_production: sim.audit.max_production,
        max_budget_residual_ratio: budgets.iter().map(|b| b.residual / b.scale).fold(f64::NEG_INFINITY, f64::max),
        git_describe: git_describe(),
        wall_time_s: wall,
    };
    Ok(RunResult { n, field: sim.field, grid, budgets, manifest, l1_rho })
}

fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Snapshot CSV: x[,y], rho, ux, uy, uz, p_par, p_perp, bx, by, bz.
pub fn write_snapshot(path: &Path, grid: &Grid, field: &Field) -> Result<()> {
    let mut out = std::io::BufWriter::new(fs::File::create(path)?);
    let head = if grid.two_d { "x,y," } else { "x," };
    writeln!(out, "{head}rho,ux,uy,uz,p_par,p_perp,bx,by,bz")?;
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            let w = field.primitive(i, j);
            let mut cols = vec![fmt_num(grid.x(i))];
            if grid.two_d {
                cols.push(fmt_num(grid.y(j)));
            }
            cols.extend(w.to_vector().iter().map(|v| fmt_num(*v)));
            writeln!(out, "{}", cols.join(","))?;
        }
    }
    Ok(())
}

/// Budget CSV: step, t, dt, total_entropy, budget_residual.
pub fn write_budget(path: &Path, budgets: &[EntropyBudget]) -> Result<()> {
    let mut out = std::io::BufWriter::new(fs::File::create(path)?);
    writeln!(out, "step,t,dt,total_entropy,budget_residual")?;
    for b in budgets {
        writeln!(out, "{},{},{},{},{}", b.step, fmt_num(b.t), fmt_num(b.dt), fmt_num(b.total_entropy), fmt_num(b.residual))?;
    }
    Ok(())
}

/// Companion audit CSV with the start-of-step residual and interface production.
pub fn write_budget_audit(path: &Path, budgets: &[EntropyBudget]) -> Result<()> {
    let mut out = std::io::BufWriter::new(fs::File::create(path)?);
    writeln!(out, "step,fe_residual,max_interface_production,scale")?;
    for b in budgets {
        writeln!(out, "{},{},{},{}", b.step, fmt_num(b.fe_residual), fmt_num(b.max_production), fmt_num(b.scale))?;
    }
    Ok(())
}

/// Plain-text table with columns N, L1 error, order.
pub fn emit_convergence_table(errors: &[f64], ns: &[usize]) -> String {
    let mut s = String::new();
    if errors.is_empty() {
        return s;
    }
    let orders = convergence_order(errors, ns).unwrap_or_default();
    s.push_str(&format!("{:>6}  {:>12}  {:>6}\n", "N", "L1 error", "order"));
    for (i, (e, n)) in errors.iter().zip(ns).enumerate() {
        let o = if i == 0 { "--".to_string() } else { orders.get(i - 1).map_or("--".into(), |o| format!("{o:.2}")) };
        s.push_str(&format!("{n:>6}  {e:>12.5e}  {o:>6}\n"));
    }
    s
}

fn convergence_csv(errors: &[f64], ns: &[usize]) -> String {
    let orders = convergence_order(errors, ns).unwrap_or_default();
    let mut s = String::from("n,l1_error,order\n");
    for (i, (e, n)) in errors.iter().zip(ns).enumerate() {
        let o = if i == 0 { String::new() } else { orders.get(i - 1).map_or(String::new(), |o| fmt_num(*o)) };
        s.push_str(&format!("{n},{},{o}\n", fmt_num(*e)));
    }
    s
}

/// Run every resolution in the config and write snapshots, budgets, manifests and,
/// for the accuracy case, the convergence table.
pub fn run(cfg: &RunConfig) -> Result<RunSummary> {
    let (case, scheme) = cfg.validate()?;
    let body = || -> Result<RunSummary> {
        fs::create_dir_all(&cfg.output_dir)?;
        let mut results = Vec::new();
        let mut files = Vec::new();
        for &n in &cfg.n {
            let stem = format!("{}_{}_n{}", case.name(), scheme.label(), n);
            let dir = cfg.output_dir.clone();
            let every = cfg.output_every;
            let mut written = Vec::new();
            let res = simulate(case, scheme, n, cfg, |s, b| {
                if every > 0 && b.step % every == 0 {
                    let p = dir.join(format!("{stem}_step{:06}.csv", b.step));
                    write_snapshot(&p, &s.grid, &s.field)?;
                    written.push(p);
                }
                Ok(())
            })?;
            files.extend(written);
            let snap = cfg.output_dir.join(format!("{stem}_final.csv"));
            write_snapshot(&snap, &res.grid, &res.field)?;
            let budget = cfg.output_dir.join(format!("{stem}_budget.csv"));
            write_budget(&budget, &res.budgets)?;
            let audit = cfg.output_dir.join(format!("{stem}_budget_audit.csv"));
            write_budget_audit(&audit, &res.budgets)?;
            let manifest = cfg.output_dir.join(format!("{stem}_manifest.json"));
            fs::write(&manifest, serde_json::to_string_pretty(&res.manifest).map_err(|e| Error::Io(e.to_string()))?)?;
            files.extend([snap, budget, audit, manifest]);
            results.push(res);
        }
        let table = if case == CaseId::Accuracy {
            let errors: Vec<f64> = results.iter().filter_map(|r| r.l1_rho).collect();
            let ns: Vec<usize> = results.iter().map(|r| r.n).collect();
            let path = cfg.output_dir.join(format!("accuracy_{}_convergence.csv", scheme.label()));
            fs::write(&path, convergence_csv(&errors, &ns))?;
            files.push(path);
            Some(format!("{}\n{}", scheme.label(), emit_convergence_table(&errors, &ns)))
        } else {
            None
        };
        Ok(RunSummary { results, table, files })
    };
    match cfg.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::Config(e.to_string()))?
            .install(body),
        None => body(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_shapes() {
        assert_eq!(emit_convergence_table(&[], &[]), "");
        let t = emit_convergence_table(&[4.0, 1.0], &[40, 80]);
        assert_eq!(t.lines().count(), 3);
        assert!(t.contains("2.00"));
    }

    #[test]
    fn config_parses_and_rejects() {
        let c = RunConfig::from_toml("case = \"brio_wu\"\nscheme = \"O2ES-EXP\"\nn = [200]\n").unwrap();
        assert_eq!(c.cfl, 0.4);
        assert!(c.validate().is_ok());
        let err = RunConfig::from_toml("case = \"brio_wu\"\nscheme = 3\n").unwrap_err();
        assert!(err.to_string().contains("line"));
        let bad = RunConfig::new("brio_wu", "O9", vec![100]);
        assert!(matches!(bad.validate(), Err(Error::UnknownScheme(_))));
    }
}
