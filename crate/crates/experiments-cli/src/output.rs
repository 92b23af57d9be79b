use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use spectral_core::{Error, Result};

use crate::config::{Experiment, ResolvedConfig};
use crate::experiments::{assertion_id, run_experiment, Assertion, Cell, Table};

fn io_err(what: &str, path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Context(format!("{what} {}: {e}", path.display()))
}

/// Writes `bytes` to a temporary sibling, syncs it and renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    let mut f = fs::File::create(&tmp).map_err(|e| io_err("cannot create", &tmp, e))?;
    f.write_all(bytes).and_then(|_| f.sync_all()).map_err(|e| io_err("cannot write", &tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| io_err("cannot rename into", path, e))
}

/// 17 significant digits: enough to round-trip every f64.
pub fn format_num(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.16e}")
    }
}

pub fn csv_bytes(table: &Table) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| Error::Context(format!("csv {}: {e}", table.name));
    w.write_record(&table.header).map_err(fail)?;
    for row in &table.rows {
        w.write_record(row.iter().map(|c| match c {
            Cell::Num(v) => format_num(*v),
            Cell::Text(s) => s.clone(),
        }))
        .map_err(fail)?;
    }
    w.into_inner().map_err(|e| Error::Context(format!("csv {}: {e}", table.name)))
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub experiment: Experiment,
    pub config: ResolvedConfig,
    pub code_version: String,
    pub wall_time_s: f64,
    pub complete: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub flags: Vec<String>,
    pub assertions: Vec<Assertion>,
    pub artifacts: Vec<String>,
}

impl Manifest {
    pub fn passed(&self) -> bool {
        self.complete && self.assertions.iter().all(|a| a.passed)
    }
}

pub const CODE_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

/// Runs the configured experiment and writes its CSVs, field dumps and
/// `manifest.json` into `cfg.out_dir`. A failing module is recorded in the
/// manifest as an incomplete run, not returned as an error; only output
/// failures are.
pub fn run(cfg: &ResolvedConfig) -> Result<Manifest> {
    let dir = &cfg.out_dir;
    fs::create_dir_all(dir).map_err(|e| io_err("cannot create", dir, e))?;
    let start = Instant::now();
    let result = run_experiment(cfg);
    let wall = start.elapsed().as_secs_f64();

    let mut manifest = Manifest {
        experiment: cfg.experiment,
        config: cfg.clone(),
        code_version: CODE_VERSION.into(),
        wall_time_s: wall,
        complete: true,
        error: None,
        flags: Vec::new(),
        assertions: Vec::new(),
        artifacts: Vec::new(),
    };
    match result {
        Ok(out) => {
            for t in &out.tables {
                let name = format!("{}.csv", t.name);
                write_atomic(&dir.join(&name), &csv_bytes(t)?)?;
                manifest.artifacts.push(name);
            }
            for d in &out.dumps {
                euler_fields::dump_fields(dir, &d.stem, &d.grid, &d.fields)?;
                manifest.artifacts.push(format!("{}.bin", d.stem));
                manifest.artifacts.push(format!("{}.json", d.stem));
            }
            manifest.complete = !out.incomplete;
            manifest.flags = out.flags;
            manifest.assertions.push(out.assertion);
        }
        Err(e) => {
            let msg = format!("experiment {}: {e}", cfg.experiment);
            manifest.complete = false;
            manifest.assertions.push(Assertion {
                id: assertion_id(cfg.experiment).into(),
                criterion: cfg.experiment.criterion(),
                passed: false,
                summary: msg.clone(),
                metrics: Default::default(),
            });
            manifest.error = Some(msg);
        }
    }
    let json = serde_json::to_vec_pretty(&manifest).map_err(|e| Error::Context(format!("manifest: {e}")))?;
    write_atomic(&dir.join("manifest.json"), &json)?;
    Ok(manifest)
}

pub fn manifest_path(dir: &Path) -> PathBuf {
    dir.join("manifest.json")
}
