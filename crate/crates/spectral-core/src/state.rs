use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Surface elevation ζ and surface potential ψ sampled on the grid nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceState {
    pub zeta: Vec<f64>,
    pub psi: Vec<f64>,
}

impl SurfaceState {
    pub fn new(zeta: Vec<f64>, psi: Vec<f64>) -> Result<Self> {
        Error::check_len(zeta.len(), psi.len())?;
        Ok(SurfaceState { zeta, psi })
    }

    pub fn zeros(n: usize) -> Self {
        SurfaceState {
            zeta: vec![0.0; n],
            psi: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.zeta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeta.is_empty()
    }

    pub fn check_len(&self, n: usize) -> Result<()> {
        Error::check_len(n, self.zeta.len())?;
        Error::check_len(n, self.psi.len())
    }

    /// min over the grid of the water height 1 + εζ.
    pub fn min_height(&self, epsilon: f64) -> f64 {
        self.zeta
            .iter()
            .fold(f64::INFINITY, |m, &z| m.min(1.0 + epsilon * z))
    }

    pub fn check_height(&self, epsilon: f64, h_min: f64) -> Result<()> {
        let h = self.min_height(epsilon);
        if h >= h_min {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "water height {h:.6} below h_min = {h_min}"
            )))
        }
    }

    pub fn scaled(&self, a: f64) -> Self {
        SurfaceState {
            zeta: self.zeta.iter().map(|v| a * v).collect(),
            psi: self.psi.iter().map(|v| a * v).collect(),
        }
    }

    /// Largest absolute componentwise difference.
    pub fn max_abs_diff(&self, other: &SurfaceState) -> f64 {
        let dz = self.zeta.iter().zip(&other.zeta).map(|(a, b)| (a - b).abs());
        let dp = self.psi.iter().zip(&other.psi).map(|(a, b)| (a - b).abs());
        dz.chain(dp).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.zeta
            .iter()
            .chain(&self.psi)
            .fold(0.0, |m, v| m.max(v.abs()))
    }
}
