use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use spectral_core::{Error, Result, SpectralGrid};

use crate::{FluidFields, StripIndices};

/// JSON sidecar describing a binary field dump.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldDumpHeader {
    pub length: f64,
    pub nx: usize,
    pub z0: f64,
    pub dz: f64,
    pub nlev: usize,
    pub epsilon: f64,
    pub mu: f64,
    pub time: f64,
    pub indices: StripIndices,
    /// Field order in the binary file; each is nlev·nx little-endian f64,
    /// level-major.
    pub fields: Vec<String>,
}

/// Writes `<stem>.bin` (V, w, P, then ζ) and `<stem>.json` into `dir`.
pub fn dump_fields(dir: &Path, stem: &str, grid: &SpectralGrid, fields: &FluidFields) -> Result<FieldDumpHeader> {
    let c = fields.centre();
    let header = FieldDumpHeader {
        length: grid.length(),
        nx: c.v.nx,
        z0: c.v.z0,
        dz: c.v.dz,
        nlev: c.v.nlev,
        epsilon: fields.epsilon,
        mu: fields.mu,
        time: c.time,
        indices: fields.indices,
        fields: vec!["V".into(), "w".into(), "P".into(), "zeta".into()],
    };
    let io = |e: std::io::Error| Error::Context(format!("field dump: {e}"));
    fs::create_dir_all(dir).map_err(io)?;
    let mut bytes = Vec::with_capacity(8 * (3 * c.v.values.len() + c.zeta.len()));
    for v in c.v.values.iter().chain(&c.w.values).chain(&fields.p.values).chain(&c.zeta) {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    let json = serde_json::to_vec_pretty(&header).map_err(|e| Error::Context(e.to_string()))?;
    for (name, data) in [(format!("{stem}.bin"), bytes), (format!("{stem}.json"), json)] {
        let tmp = dir.join(format!(".{name}.tmp"));
        let mut f = fs::File::create(&tmp).map_err(io)?;
        f.write_all(&data).map_err(io)?;
        f.sync_all().map_err(io)?;
        fs::rename(&tmp, dir.join(name)).map_err(io)?;
    }
    Ok(header)
}
