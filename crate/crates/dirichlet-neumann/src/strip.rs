use serde::{Deserialize, Serialize};
use spectral_core::{Error, Result, SpectralGrid};

use crate::Stencil;

/// Scalar field on a strip: periodic in x, uniform levels z_j = z0 + j·dz.
///
/// `values[j * nx + i]` is the value at node i of level j. `breaks` lists
/// interior levels across which the field is only finitely smooth; vertical
/// stencils never cross them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StripField {
    pub nx: usize,
    pub z0: f64,
    pub dz: f64,
    pub nlev: usize,
    pub values: Vec<f64>,
    pub breaks: Vec<usize>,
}

impl StripField {
    pub fn zeros(nx: usize, z0: f64, dz: f64, nlev: usize) -> Self {
        StripField {
            nx,
            z0,
            dz,
            nlev,
            values: vec![0.0; nx * nlev],
            breaks: Vec::new(),
        }
    }

    pub fn from_fn(grid: &SpectralGrid, z0: f64, dz: f64, nlev: usize, f: impl Fn(f64, f64) -> f64) -> Self {
        let nx = grid.len();
        let mut s = Self::zeros(nx, z0, dz, nlev);
        for j in 0..nlev {
            let z = s.z(j);
            for (i, &x) in grid.nodes().iter().enumerate() {
                s.values[j * nx + i] = f(x, z);
            }
        }
        s
    }

    pub fn z(&self, j: usize) -> f64 {
        self.z0 + j as f64 * self.dz
    }

    pub fn z_top(&self) -> f64 {
        self.z(self.nlev - 1)
    }

    pub fn level(&self, j: usize) -> &[f64] {
        &self.values[j * self.nx..(j + 1) * self.nx]
    }

    pub fn level_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.values[j * self.nx..(j + 1) * self.nx]
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nx + i]
    }

    /// Level ranges [lo, hi] between breaks (end levels shared).
    pub fn segments(&self) -> Vec<(usize, usize)> {
        let mut cuts = vec![0];
        cuts.extend(self.breaks.iter().copied().filter(|&b| b > 0 && b < self.nlev - 1));
        cuts.push(self.nlev - 1);
        cuts.windows(2).map(|w| (w[0], w[1])).collect()
    }

    /// Sub-field over levels lo..=hi.
    pub fn slice_levels(&self, lo: usize, hi: usize) -> StripField {
        StripField {
            nx: self.nx,
            z0: self.z(lo),
            dz: self.dz,
            nlev: hi - lo + 1,
            values: self.values[lo * self.nx..(hi + 1) * self.nx].to_vec(),
            breaks: self
                .breaks
                .iter()
                .filter(|&&b| b > lo && b < hi)
                .map(|b| b - lo)
                .collect(),
        }
    }

    /// ∂_z^order within one segment [lo, hi], at every level of the segment,
    /// with stencils of `order + accuracy` points.
    pub fn dz_segment(&self, order: usize, accuracy: usize, lo: usize, hi: usize) -> Result<Vec<Vec<f64>>> {
        let width = order + accuracy;
        if hi - lo + 1 < width {
            return Err(Error::Precondition(format!(
                "segment [{lo}, {hi}] has fewer than {width} levels for a z-derivative of order {order}"
            )));
        }
        Ok((lo..=hi)
            .map(|j| {
                let st = Stencil::build(j, order, width, lo, hi, self.dz);
                (0..self.nx)
                    .map(|i| st.apply(|l| self.at(i, l)))
                    .collect()
            })
            .collect())
    }

    /// ∂_z^order on the whole strip. Break levels take the value from the
    /// segment below.
    pub fn dz_derivative(&self, order: usize, accuracy: usize) -> Result<StripField> {
        let mut out = StripField { values: vec![0.0; self.values.len()], ..self.clone() };
        for (lo, hi) in self.segments().into_iter().rev() {
            for (k, lev) in self.dz_segment(order, accuracy, lo, hi)?.into_iter().enumerate() {
                out.level_mut(lo + k).copy_from_slice(&lev);
            }
        }
        Ok(out)
    }

    /// |u|_{H^{s,k}} = Σ_{j≤k} |Λ^{s−j}∂_z^j u|₂, spectral in x and
    /// trapezoidal in z, each segment handled separately.
    pub fn hsk_norm(&self, grid: &SpectralGrid, s: f64, k: usize) -> Result<f64> {
        grid.check_len(self.nx)?;
        let mut total = 0.0;
        for j in 0..=k {
            let mut sq = 0.0;
            for (lo, hi) in self.segments() {
                let levels: Vec<Vec<f64>> = if j == 0 {
                    (lo..=hi).map(|l| self.level(l).to_vec()).collect()
                } else {
                    self.dz_segment(j, 4, lo, hi)?
                };
                let m = levels.len();
                for (q, lev) in levels.iter().enumerate() {
                    let w = if q == 0 || q == m - 1 { 0.5 } else { 1.0 };
                    sq += w * self.dz * spectral_core::hs_norm(lev, grid, s - j as f64).powi(2);
                }
            }
            total += sq.sqrt();
        }
        Ok(total)
    }

    /// Discrete L² norm over the strip (trapezoid in z).
    pub fn l2_norm(&self, grid: &SpectralGrid) -> Result<f64> {
        self.hsk_norm(grid, 0.0, 0)
    }
}
