use dirichlet_neumann::StripField;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use spectral_core::{Error, Result};

use crate::interp::{eval_column, weights_in};

/// Solves Σ_i c_i(−α_i)^j = 1, j = 0..k−1.
pub fn vandermonde_coeffs(k: usize, alphas: &[f64]) -> Result<Vec<f64>> {
    if k == 0 {
        return Err(Error::config("k", "must be at least 1"));
    }
    if alphas.len() != k {
        return Err(Error::config("alphas", format!("expected {k} rates, got {}", alphas.len())));
    }
    if alphas.iter().any(|a| !(*a > 0.0 && *a < 1.0)) {
        return Err(Error::config("alphas", "rates must lie strictly inside (0, 1)"));
    }
    for (i, a) in alphas.iter().enumerate() {
        if alphas[..i].iter().any(|b| (a - b).abs() <= 1e-12) {
            return Err(Error::Solver(format!("repeated reflection rate {a}: Vandermonde system is singular")));
        }
    }
    let m = DMatrix::from_fn(k, k, |j, i| (-alphas[i]).powi(j as i32));
    let c = m
        .lu()
        .solve(&DVector::from_element(k, 1.0))
        .ok_or_else(|| Error::Solver("Vandermonde system is singular".into()))?;
    Ok(c.iter().copied().collect())
}

/// Reflection extension Pu(z) = Σ c_i u(−α_i z) across each strip interface.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtensionPlan {
    pub k: usize,
    pub alphas: Vec<f64>,
    pub coeffs: Vec<f64>,
    /// Target strip S_j = (−(j+1), j).
    pub j_target: usize,
}

impl ExtensionPlan {
    /// α_i = (i+1)/(k+1).
    pub fn new(k: usize, j_target: usize) -> Result<Self> {
        let alphas: Vec<f64> = (0..k).map(|i| (i + 1) as f64 / (k + 1) as f64).collect();
        Self::with_alphas(k, alphas, j_target)
    }

    pub fn with_alphas(k: usize, alphas: Vec<f64>, j_target: usize) -> Result<Self> {
        let coeffs = vandermonde_coeffs(k, &alphas)?;
        Ok(ExtensionPlan { k, alphas, coeffs, j_target })
    }

    /// max_j |Σ c_i(−α_i)^j − 1| over j < k.
    pub fn moment_residual(&self) -> f64 {
        (0..self.k)
            .map(|j| {
                let s: f64 = self.coeffs.iter().zip(&self.alphas).map(|(c, a)| c * (-a).powi(j as i32)).sum();
                (s - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Σ|c_i|(1 + max α_i^{−1/2})(j+1): a computable stand-in for the
    /// extension constant C(k, j).
    pub fn norm_bound(&self) -> f64 {
        let csum: f64 = self.coeffs.iter().map(|c| c.abs()).sum();
        let amin = self.alphas.iter().cloned().fold(f64::INFINITY, f64::min);
        csum * (1.0 + amin.powf(-0.5)) * (self.j_target + 1) as f64
    }
}

/// Extends a field on S₀ = (−1, 0) to S_j, one unit layer at a time: the
/// layer (m−1, m] reflects (m−2, m−1] about z = m−1, and the layer
/// [−m−1, −m) reflects (−m, −m+1] about z = −m. Off-grid samples use local
/// Lagrange interpolation inside the source layer. Interface levels are
/// recorded as breaks.
pub fn extend_strip(u: &StripField, plan: &ExtensionPlan) -> Result<StripField> {
    let nz = (1.0 / u.dz).round() as usize;
    if (u.z0 + 1.0).abs() > 1e-12 || (u.z_top()).abs() > 1e-12 || u.nlev != nz + 1 {
        return Err(Error::Precondition(format!(
            "field must sample S0 = [-1, 0] on n_z + 1 levels (got z0 = {}, top = {}, {} levels)",
            u.z0,
            u.z_top(),
            u.nlev
        )));
    }
    if nz < crate::interp::INTERP_POINTS {
        return Err(Error::config("n_z", "too few levels for the extension interpolant"));
    }
    let j = plan.j_target;
    let nx = u.nx;
    let mut out = StripField::zeros(nx, -((j + 1) as f64), u.dz, (2 * j + 1) * nz + 1);
    let off = j * nz;
    out.values[off * nx..(off + nz + 1) * nx].copy_from_slice(&u.values);
    // interfaces sit at the integer levels z = −j, …, j − 1
    out.breaks = (1..=2 * j).map(|m| m * nz).collect();

    for m in 1..=j {
        let iface = off + m * nz; // z = m − 1
        let (slo, shi) = (iface - nz, iface);
        fill_layer(&mut out, plan, iface, (iface + 1..=iface + nz).collect(), slo, shi);
        let iface = off - (m - 1) * nz; // z = −m
        let (slo, shi) = (iface, iface + nz);
        fill_layer(&mut out, plan, iface, (iface - nz..iface).collect(), slo, shi);
    }
    Ok(out)
}

fn fill_layer(out: &mut StripField, plan: &ExtensionPlan, iface: usize, targets: Vec<usize>, slo: usize, shi: usize) {
    let nx = out.nx;
    let zi = out.z(iface);
    for t in targets {
        let d = out.z(t) - zi;
        let mut acc = vec![0.0; nx];
        for (c, a) in plan.coeffs.iter().zip(&plan.alphas) {
            let (start, w) = weights_in(out, slo, shi, zi - a * d);
            for (i, v) in acc.iter_mut().enumerate() {
                *v += c * eval_column(out, i, start, &w);
            }
        }
        out.level_mut(t).copy_from_slice(&acc);
    }
}
