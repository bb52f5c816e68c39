use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cgl_es::cases::{CaseId, TestCase};
use cgl_es::run::{run, RunConfig};
use cgl_es::verify::run_checks;

#[derive(Parser)]
#[command(name = "cgl", version, about = "Entropy-stable CGL plasma solver")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a case from a TOML config, optionally overriding fields.
    Run {
        /// Config file; without it --case, --scheme and --n are required.
        config: Option<PathBuf>,
        #[arg(long)]
        case: Option<String>,
        #[arg(long)]
        scheme: Option<String>,
        /// Resolutions, comma separated.
        #[arg(long, value_delimiter = ',')]
        n: Option<Vec<usize>>,
        #[arg(long)]
        cfl: Option<f64>,
        #[arg(long)]
        t_final: Option<f64>,
        #[arg(long)]
        tau: Option<f64>,
        #[arg(long, short)]
        out: Option<PathBuf>,
        #[arg(long)]
        output_every: Option<usize>,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        ark_tableau: Option<PathBuf>,
        /// Abort when a state leaves the hyperbolic region.
        #[arg(long)]
        strict: bool,
    },
    /// List the built-in cases.
    ListCases,
    /// Run the built-in self-checks.
    Verify {
        #[arg(long)]
        threads: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::ListCases => {
            for id in CaseId::ALL {
                let tc = TestCase::get(id);
                println!("{:<12} t_final={:<6} {}", id.name(), tc.t_final, tc.description);
            }
            ExitCode::SUCCESS
        }
        Cmd::Verify { threads } => {
            if let Some(t) = threads {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
            }
            let checks = run_checks();
            let mut ok = true;
            for c in &checks {
                println!("[{}] {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
                ok &= c.passed;
            }
            if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE }
        }
        Cmd::Run { config, case, scheme, n, cfl, t_final, tau, out, output_every, threads, ark_tableau, strict } => {
            let mut cfg = match config {
                Some(p) => match RunConfig::load(&p) {
                    Ok(c) => c,
                    Err(e) => {
                        eprintln!("error: {e}");
                        return ExitCode::from(2);
                    }
                },
                None => match (&case, &scheme, &n) {
                    (Some(c), Some(s), Some(n)) => RunConfig::new(c, s, n.clone()),
                    _ => {
                        eprintln!("error: give a config file or all of --case, --scheme and --n");
                        return ExitCode::from(2);
                    }
                },
            };
            if let Some(v) = case { cfg.case = v; }
            if let Some(v) = scheme { cfg.scheme = v; }
            if let Some(v) = n { cfg.n = v; }
            if let Some(v) = cfl { cfg.cfl = v; }
            if let Some(v) = t_final { cfg.t_final = Some(v); }
            if let Some(v) = tau { cfg.tau = v; }
            if let Some(v) = out { cfg.output_dir = v; }
            if let Some(v) = output_every { cfg.output_every = v; }
            if let Some(v) = threads { cfg.threads = Some(v); }
            if let Some(v) = ark_tableau { cfg.ark_tableau = Some(v); }
            if strict { cfg.strict_hyperbolicity = true; }
            if let Err(e) = cfg.validate() {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            match run(&cfg) {
                Ok(summary) => {
                    for r in &summary.results {
                        let m = &r.manifest;
                        println!("{} {} N={} steps={} wall={:.2}s", m.case, m.scheme, m.n, m.steps, m.wall_time_s);
                    }
                    if let Some(t) = summary.table {
                        print!("{t}");
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::FAILURE
                }
            }
        }
    }
}
