//! The `cgl` binary end to end.

use std::fs;
use std::path::PathBuf;
use std::process::Command;

fn cgl() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cgl"))
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("cgl-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&d);
    fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn list_cases_names_every_case() {
    let out = cgl().arg("list-cases").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["accuracy", "brio_wu", "ryu_jones", "superfast", "rp4", "rp5", "rp6", "rp7", "orszag_tang"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "missing {name}");
    }
}

#[test]
fn verify_passes() {
    let out = cgl().arg("verify").output().unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{text}");
    assert!(!text.contains("[FAIL]"));
}

#[test]
fn run_writes_every_artifact() {
    let dir = scratch("run");
    let out = cgl()
        .args(["run", "--case", "rp1", "--scheme", "O2ES-IMEX", "--n", "100", "--t-final", "0.02", "--output-every", "5", "-o"])
        .arg(&dir)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stem = dir.join("brio_wu_O2ES-IMEX_n100");
    let snap = fs::read_to_string(stem.with_file_name("brio_wu_O2ES-IMEX_n100_final.csv")).unwrap();
    assert_eq!(snap.lines().next().unwrap(), "x,rho,ux,uy,uz,p_par,p_perp,bx,by,bz");
    assert_eq!(snap.lines().count(), 101);
    let budget = fs::read_to_string(dir.join("brio_wu_O2ES-IMEX_n100_budget.csv")).unwrap();
    assert_eq!(budget.lines().next().unwrap(), "step,t,dt,total_entropy,budget_residual");
    assert!(dir.join("brio_wu_O2ES-IMEX_n100_budget_audit.csv").exists());
    assert!(dir.join("brio_wu_O2ES-IMEX_n100_step000005.csv").exists());
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("brio_wu_O2ES-IMEX_n100_manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["scheme"], "O2ES-IMEX");
    assert_eq!(manifest["relaxation_tau"], 1e-5);
    assert_eq!(manifest["sign_violations"], 0);
    assert!(manifest["max_budget_residual_ratio"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn run_from_config_with_tableau_file() {
    let dir = scratch("config");
    let tableau = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tableaus/ark3.toml");
    let cfg = dir.join("run.toml");
    fs::write(
        &cfg,
        format!(
            "case = \"accuracy\"\nscheme = \"O3ES-IMEX\"\nn = [20, 40]\nt_final = 0.1\noutput_dir = {:?}\nark_tableau = {:?}\n",
            dir, tableau
        ),
    )
    .unwrap();
    let out = cgl().arg("run").arg(&cfg).output().unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(text.contains("L1 error"), "{text}");
    let table = fs::read_to_string(dir.join("accuracy_O3ES-IMEX_convergence.csv")).unwrap();
    assert_eq!(table.lines().count(), 3);
}

#[test]
fn bad_input_exits_with_2() {
    let out = cgl().args(["run", "--case", "nope", "--scheme", "O2ES-EXP", "--n", "50"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let dir = scratch("bad");
    let cfg = dir.join("bad.toml");
    fs::write(&cfg, "case = \"brio_wu\"\nscheme = \"O2ES-EXP\"\nn = [100]\ncfl = \"fast\"\n").unwrap();
    let out = cgl().arg("run").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
}

#[test]
fn shipped_configs_validate() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs");
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let cfg = cgl_es::RunConfig::load(&path).unwrap();
        assert!(cfg.validate().is_ok(), "{}", path.display());
    }
}
