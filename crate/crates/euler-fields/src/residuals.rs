use dirichlet_neumann::{Stencil, StripField};
use serde::{Deserialize, Serialize};
use spectral_core::SpectralGrid;

use crate::{reconstruct::centred, FluidFields};

/// Time scale of the residuals. `RigidLid` divides the momentum and
/// kinematic equations by ε and uses the pressure P/ε².
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scaling {
    Original,
    RigidLid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualEntry {
    pub name: String,
    pub sup: f64,
    pub l2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub scaling: Scaling,
    pub entries: Vec<ResidualEntry>,
    /// Number of interior nodes entering the two-dimensional residuals.
    pub interior_nodes: usize,
}

impl ResidualReport {
    pub fn get(&self, name: &str) -> Option<&ResidualEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

/// ∂_z on S* with stencils kept inside the fluid levels of each column
/// (bottom..=top[i]), since Φ̃ is only finitely smooth across the bottom and
/// the surface.
fn dz_field(f: &StripField, bottom: usize, top: &[usize]) -> StripField {
    let mut out = f.clone();
    for (i, &hi) in top.iter().enumerate() {
        for j in bottom..=hi {
            let interior = j >= bottom + 2 && j + 2 <= hi;
            let st = Stencil::build(j, 1, if interior { 5 } else { 6 }, bottom, hi, f.dz);
            out.values[j * f.nx + i] = st.apply(|l| f.at(i, l));
        }
    }
    out
}

fn dx_field(grid: &SpectralGrid, f: &StripField) -> StripField {
    let mut out = f.clone();
    out.values = f.values.chunks(f.nx).flat_map(|l| grid.derivative(l, 1)).collect();
    out
}

fn entry(name: &str, vals: &[f64], cell: f64) -> ResidualEntry {
    ResidualEntry {
        name: name.into(),
        sup: vals.iter().fold(0.0, |m, v| m.max(v.abs())),
        l2: (vals.iter().map(|v| v * v).sum::<f64>() * cell).sqrt(),
    }
}

/// Residuals of the Euler system for reconstructed fields. The momentum,
/// divergence and curl residuals are taken over the nodes strictly inside
/// the fluid and at least two levels below the surface; the kinematic,
/// bottom and surface-pressure residuals over the x grid.
pub fn euler_residuals(grid: &SpectralGrid, fields: &FluidFields, scaling: Scaling) -> ResidualReport {
    let (eps, mu) = (fields.epsilon, fields.mu);
    let [s0, c, s2] = &fields.snapshots;
    let d = centred([s0.time, c.time, s2.time]);
    let dt = |a: f64, b: f64, e: f64| d[0] * a + d[1] * b + d[2] * e;
    let (v, w) = (&c.v, &c.w);
    let nx = v.nx;
    let dx = grid.length() / nx as f64;
    let (dzs, z0) = (v.dz, v.z0);
    let bottom = ((-1.0 - z0) / dzs).round() as usize;
    let top: Vec<usize> = c.zeta.iter().map(|z| ((eps * z - z0) / dzs).floor() as usize).collect();
    let (vx, vz) = (dx_field(grid, v), dz_field(v, bottom, &top));
    let (wx, wz) = (dx_field(grid, w), dz_field(w, bottom, &top));
    let (px, pz) = (dx_field(grid, &fields.p_hydro), dz_field(&fields.p_hydro, bottom, &top));
    let (time_scale, p_scale) = match scaling {
        Scaling::Original => (1.0, 1.0),
        Scaling::RigidLid => (1.0 / eps, 1.0 / (eps * eps)),
    };

    let (mut mx, mut mz, mut div, mut curl) = (vec![], vec![], vec![], vec![]);
    for j in bottom + 1..v.nlev {
        let zz = v.z(j);
        for i in 0..nx {
            if zz >= eps * c.zeta[i] - 2.0 * dzs {
                continue;
            }
            let q = j * nx + i;
            let (vv, ww) = (v.values[q], w.values[q]);
            let vt = dt(s0.v.values[q], vv, s2.v.values[q]);
            let wt = dt(s0.w.values[q], ww, s2.w.values[q]);
            let rx = eps * vt + eps * (vv * vx.values[q] + ww * vz.values[q] / mu) + px.values[q] / eps;
            let rz = eps * wt + eps * (vv * wx.values[q] + ww * wz.values[q] / mu) + pz.values[q] / eps;
            mx.push(rx * time_scale);
            mz.push(rz * time_scale);
            div.push(mu * vx.values[q] + wz.values[q]);
            curl.push(mu.sqrt() * (vz.values[q] - wx.values[q]));
        }
    }
    let zx = grid.derivative(&c.zeta, 1);
    let kin: Vec<f64> = (0..nx)
        .map(|i| {
            let zt = dt(s0.zeta[i], c.zeta[i], s2.zeta[i]);
            (eps * zt + eps * c.v_surface[i] * zx[i] - c.w_surface[i] / mu) * time_scale
        })
        .collect();
    let bot = w.level(bottom).to_vec();
    let ps: Vec<f64> = fields.p_surface.iter().map(|p| p * p_scale).collect();
    let cell = dx * dzs;
    ResidualReport {
        scaling,
        interior_nodes: mx.len(),
        entries: vec![
            entry("momentum_x", &mx, cell),
            entry("momentum_z", &mz, cell),
            entry("divergence", &div, cell),
            entry("curl", &curl, cell),
            entry("kinematic", &kin, dx),
            entry("bottom", &bot, dx),
            entry("surface_pressure", &ps, dx),
        ],
    }
}
