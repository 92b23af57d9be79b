use std::{
    fs,
    io::{Read, Write},
    path::Path,
};

use serde::{Deserialize, Serialize};
use spectral_core::{Error, PhysicalParams, Result, SpectralGrid, SurfaceState};

/// JSON header of a checkpoint file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckpointHeader {
    pub length: f64,
    pub n: usize,
    pub params: PhysicalParams,
    pub time: f64,
}

fn io(e: std::io::Error) -> Error {
    Error::Context(format!("checkpoint i/o: {e}"))
}

/// Layout: u64 LE header length, JSON header, then ζ and ψ as n
/// little-endian f64 each.
pub fn dump_checkpoint(
    path: &Path,
    state: &SurfaceState,
    grid: &SpectralGrid,
    params: &PhysicalParams,
    time: f64,
) -> Result<()> {
    state.check_len(grid.len())?;
    let header = CheckpointHeader { length: grid.length(), n: grid.len(), params: *params, time };
    let json = serde_json::to_vec(&header).map_err(|e| Error::Context(e.to_string()))?;
    let mut buf = Vec::with_capacity(8 + json.len() + 16 * grid.len());
    buf.extend_from_slice(&(json.len() as u64).to_le_bytes());
    buf.extend_from_slice(&json);
    for v in state.zeta.iter().chain(&state.psi) {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    let tmp = path.with_extension("tmp");
    fs::File::create(&tmp).and_then(|mut f| f.write_all(&buf)).map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}

pub fn restore_checkpoint(path: &Path) -> Result<(CheckpointHeader, SurfaceState)> {
    let mut bytes = Vec::new();
    fs::File::open(path).and_then(|mut f| f.read_to_end(&mut bytes)).map_err(io)?;
    let bad = || Error::Context(format!("{} is not a checkpoint", path.display()));
    let hl = u64::from_le_bytes(bytes.get(..8).ok_or_else(bad)?.try_into().unwrap()) as usize;
    let json = bytes.get(8..8 + hl).ok_or_else(bad)?;
    let header: CheckpointHeader = serde_json::from_slice(json).map_err(|e| Error::Context(e.to_string()))?;
    let body = &bytes[8 + hl..];
    if body.len() != 16 * header.n {
        return Err(bad());
    }
    let vals: Vec<f64> = body.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
    let (z, p) = vals.split_at(header.n);
    Ok((header, SurfaceState::new(z.to_vec(), p.to_vec())?))
}
