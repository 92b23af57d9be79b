use dirichlet_neumann::StripField;
use serde::{Deserialize, Serialize};
use spectral_core::{Error, Result};

use crate::interp::{eval_column, segment_of, weights_in};

/// Strip indices: φ is extended to S_l, and Φ̃ = φ̃∘Σ⁻¹ is sampled on
/// S* = S_k. S_j only enters the containment S_l ⊂ Σ(S_j).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StripIndices {
    pub j: usize,
    pub l: usize,
    pub k: usize,
}

impl StripIndices {
    /// Smallest indices with Ω ⊂ S_k, S_k ⊂ Σ(S_l) and S_l ⊂ Σ(S_j) for
    /// every surface with sup|εζ| ≤ m. Σ(S_i) ⊃ (−(i+1) + i·m, i − (i+1)m).
    pub fn for_amplitude(m: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&m) {
            return Err(Error::Geometry(format!("sup|εζ| = {m} leaves no admissible strip")));
        }
        let k = 1;
        let next = |inner: usize| ((inner as f64 + m) / (1.0 - m) - 1e-12).ceil().max(inner as f64) as usize;
        let l = next(k).max(k);
        let j = next(l).max(l);
        Ok(StripIndices { j, l, k })
    }
}

/// Σ(X, z) = (X, (1 + εζ)z + εζ) column by column.
#[derive(Debug, Clone, PartialEq)]
pub struct StripDiffeo {
    pub eps_zeta: Vec<f64>,
}

pub fn build_diffeo(zeta: &[f64], epsilon: f64) -> Result<StripDiffeo> {
    let eps_zeta: Vec<f64> = zeta.iter().map(|z| epsilon * z).collect();
    if let Some(h) = eps_zeta.iter().map(|e| 1.0 + e).find(|h| *h <= 0.0) {
        return Err(Error::Precondition(format!("water height {h} is not positive")));
    }
    Ok(StripDiffeo { eps_zeta })
}

impl StripDiffeo {
    pub fn forward(&self, i: usize, z: f64) -> f64 {
        let e = self.eps_zeta[i];
        (1.0 + e) * z + e
    }

    pub fn inverse(&self, i: usize, zz: f64) -> f64 {
        let e = self.eps_zeta[i];
        (zz - e) / (1.0 + e)
    }

    /// Samples f∘Σ⁻¹ on `nlev` levels Z = z0 + m·dz.
    pub fn pushforward(&self, f: &StripField, z0: f64, dz: f64, nlev: usize) -> Result<StripField> {
        self.resample(f, z0, dz, nlev, |i, zz| self.inverse(i, zz))
    }

    /// Samples F∘Σ on `nlev` levels z = z0 + m·dz.
    pub fn pullback(&self, f: &StripField, z0: f64, dz: f64, nlev: usize) -> Result<StripField> {
        self.resample(f, z0, dz, nlev, |i, z| self.forward(i, z))
    }

    /// A source point on a break is read from the segment nearer the fluid
    /// layer [−1, 0], so that boundary values keep their one-sided meaning.
    fn resample(
        &self,
        f: &StripField,
        z0: f64,
        dz: f64,
        nlev: usize,
        map: impl Fn(usize, f64) -> f64,
    ) -> Result<StripField> {
        if self.eps_zeta.len() != f.nx {
            return Err(Error::Shape { expected: f.nx, got: self.eps_zeta.len() });
        }
        let mut out = StripField::zeros(f.nx, z0, dz, nlev);
        for m in 0..nlev {
            let target = out.z(m);
            for i in 0..f.nx {
                let src = map(i, target);
                let seg = segment_of(f, src, src < -0.5).ok_or_else(|| {
                    Error::Geometry(format!(
                        "level {target:.6} maps to {src:.6}, outside the sampled strip [{}, {}]",
                        f.z0,
                        f.z_top()
                    ))
                })?;
                let (start, w) = weights_in(f, seg.0, seg.1, src);
                out.values[m * f.nx + i] = eval_column(f, i, start, &w);
            }
        }
        Ok(out)
    }
}
