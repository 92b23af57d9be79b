use std::fs;
use std::path::Path;
use std::process::Command;

use experiments_cli::{csv_bytes, run, Experiment, ResolvedConfig, RunConfig, Table};
use spectral_core::Error;

fn resolved(e: Experiment, dir: &Path) -> ResolvedConfig {
    let mut c = RunConfig::new(e);
    c.output.dir = Some(dir.to_path_buf());
    c.resolve().unwrap()
}

fn csvs(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect();
    v.sort();
    v
}

#[test]
fn minimal_config_gets_every_default() {
    let c = RunConfig::from_toml("experiment = \"linear-limit\"\n").unwrap();
    let r = c.resolve().unwrap();
    assert_eq!(r.epsilon_list, vec![0.1, 0.01, 0.001]);
    assert_eq!((r.length, r.n, r.mu, r.t_final), (200.0, 4096, 1.0, 1.0));
    let json = serde_json::to_value(&r).unwrap();
    for key in ["seed", "epsilon", "epsilon_list", "mu", "length", "n", "n_z", "dt", "T", "dn_mode", "N", "family", "amplitude", "out_dir"] {
        assert!(json.get(key).is_some(), "{key} missing from the resolved config");
    }
}

#[test]
fn zero_epsilon_is_rejected() {
    let c = RunConfig::from_toml("experiment = \"null-check\"\n[params]\nepsilon = 0.0\n").unwrap();
    match c.resolve() {
        Err(Error::Config { field, reason }) => {
            assert_eq!(field, "params.epsilon");
            assert!(reason.contains("> 0"), "{reason}");
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn epsilon_list_must_decrease() {
    let c = RunConfig::from_toml("experiment = \"weak-decay\"\n[params]\nepsilon_list = [0.1, 0.2]\n").unwrap();
    let err = c.resolve().unwrap_err().to_string();
    assert!(err.contains("epsilon_list") && err.contains("decreasing"), "{err}");
}

#[test]
fn unknown_keys_are_rejected() {
    assert!(RunConfig::from_toml("experiment = \"null-check\"\nfoo = 1\n").is_err());
    assert!(RunConfig::from_toml("experiment = \"null-check\"\n[grid]\nnx = 64\n").is_err());
    assert!(RunConfig::from_toml("experiment = \"no-such\"\n").is_err());
}

#[test]
fn bad_grid_and_mode_are_rejected() {
    let c = RunConfig::from_toml("experiment = \"conservation\"\n[grid]\nn = 48\n").unwrap();
    assert!(c.resolve().unwrap_err().to_string().contains("grid.n"));
    let c = RunConfig::from_toml("experiment = \"conservation\"\n[solver]\ndn_mode = \"flat\"\n").unwrap();
    assert!(c.resolve().is_err());
}

#[test]
fn config_round_trips() {
    let text = r#"
experiment = "lin-vs-nonlin"
seed = 7

[params]
epsilon_list = [0.2, 0.1]
mu = 0.5

[grid]
length = 64.0
n = 256
n_z = 16

[solver]
dt = 0.02
T = 0.5
dn_mode = "expansion1"
N = 2

[data]
family = "gaussian"
amplitude = 0.5

[output]
dir = "out/x"
"#;
    let c = RunConfig::from_toml(text).unwrap();
    assert_eq!(RunConfig::from_toml(&c.to_toml()).unwrap(), c);
    let r = c.resolve().unwrap();
    let back: ResolvedConfig = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
    assert_eq!(back, r);
}

#[test]
fn csv_keeps_every_bit() {
    let mut t = Table::new("t", &["a", "b"]);
    let vals = [0.1, 1.0 / 3.0, -2.5e-300, f64::MAX, 6.02214076e23];
    for v in vals {
        t.push(vec![v.into(), "x".into()]);
    }
    let text = String::from_utf8(csv_bytes(&t).unwrap()).unwrap();
    let parsed: Vec<f64> = text.lines().skip(1).map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(parsed, vals);
}

#[test]
fn same_seed_gives_identical_csvs() {
    let tmp = tempfile::tempdir().unwrap();
    let out = |name: &str, seed: u64| {
        let dir = tmp.path().join(name);
        let mut c = resolved(Experiment::DnFidelity, &dir);
        c.seed = seed;
        run(&c).unwrap();
        csvs(&dir)
    };
    let a = out("a", 3);
    assert!(!a.is_empty());
    assert_eq!(a, out("b", 3));
    assert_ne!(a, out("c", 4));
}

#[test]
fn module_errors_mark_the_run_incomplete() {
    let tmp = tempfile::tempdir().unwrap();
    let mut c = resolved(Experiment::Reconstruct, tmp.path());
    c.n = 8;
    let m = run(&c).unwrap();
    assert!(!m.complete && !m.passed());
    assert!(m.error.as_deref().unwrap().starts_with("experiment reconstruct"));
    let json: serde_json::Value = serde_json::from_slice(&fs::read(tmp.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(json["complete"], false);
    assert_eq!(json["assertions"][0]["passed"], false);
}

#[test]
fn binary_runs_null_check() {
    let tmp = tempfile::tempdir().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_riglid"))
        .args(["run", "null-check", "--out"])
        .arg(tmp.path())
        .env_remove("RIGLID_OUT")
        .output()
        .unwrap();
    assert!(status.status.success());
    let text = fs::read_to_string(tmp.path().join("null_check.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "mu,n,n_z,residual");
    assert_eq!(lines.len(), 2);
    let r: f64 = lines[1].split(',').nth(3).unwrap().parse().unwrap();
    assert!(r <= 1e-10);
    let m: serde_json::Value = serde_json::from_slice(&fs::read(tmp.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m["assertions"][0]["id"], "rigid_lid_null_solution");
    assert_eq!(m["config"]["n_z"], 16);
}

#[test]
fn binary_env_overrides_out_and_rejects_bad_flags() {
    let tmp = tempfile::tempdir().unwrap();
    let env_dir = tmp.path().join("env");
    let status = Command::new(env!("CARGO_BIN_EXE_riglid"))
        .args(["run", "--experiment", "null-check", "--mu", "0.25", "--out"])
        .arg(tmp.path().join("flag"))
        .env("RIGLID_OUT", &env_dir)
        .output()
        .unwrap();
    assert!(status.status.success());
    assert!(env_dir.join("manifest.json").exists());
    assert!(!tmp.path().join("flag").exists());

    let bad = Command::new(env!("CARGO_BIN_EXE_riglid"))
        .args(["run", "weak-decay", "--epsilon", "0.01,0.1"])
        .env("RIGLID_OUT", tmp.path().join("bad"))
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("epsilon_list"));
}
