use dirichlet_neumann::{DnSolver, Stencil, StripField};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use spectral_core::{Error, PhysicalParams, Result, SpectralGrid, SurfaceState};

use crate::{build_diffeo, extend_strip, interp::weights_in, ExtensionPlan, StripIndices};

/// Discretization choices for a reconstruction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionSetup {
    /// Levels per unit depth, shared by the potential solve and S*.
    pub nz: usize,
    /// Derivative-matching order of the reflection extension.
    pub extension_order: usize,
    pub indices: StripIndices,
}

impl ReconstructionSetup {
    /// Indices from the largest |εζ| over the given states.
    pub fn for_states(states: &[SurfaceState], epsilon: f64, nz: usize) -> Result<Self> {
        let m = states
            .iter()
            .flat_map(|s| s.zeta.iter())
            .fold(0.0_f64, |a, z| a.max((epsilon * z).abs()));
        Ok(ReconstructionSetup { nz, extension_order: 4, indices: StripIndices::for_amplitude(m)? })
    }
}

/// Potential and velocity sampled on S* at one time.
#[derive(Debug, Clone)]
pub struct Snapshot {
    pub time: f64,
    pub zeta: Vec<f64>,
    /// Φ̃ = φ̃∘Σ⁻¹.
    pub phi: StripField,
    /// V = ∂ₓΦ̃.
    pub v: StripField,
    /// w = ∂_zΦ̃.
    pub w: StripField,
    /// Surface traces (V̲, w̲) evaluated in the flat strip at z = 0.
    pub v_surface: Vec<f64>,
    pub w_surface: Vec<f64>,
}

/// Euler fields on S* at the middle of three consecutive times.
///
/// Velocities are V = ∂ₓΦ̃, w = ∂_zΦ̃. Time is the unscaled one, so that
/// ∂ = ε∂ₜ in trajectory time. `p` is the Bernoulli pressure
/// P = −ε∂Φ̃ − (ε²/2)(V² + w²/μ) − z, which vanishes on the free surface;
/// `p_hydro` = P + z is the hydrodynamic pressure.
#[derive(Debug, Clone)]
pub struct FluidFields {
    pub epsilon: f64,
    pub mu: f64,
    pub indices: StripIndices,
    pub snapshots: [Snapshot; 3],
    pub p: StripField,
    pub p_hydro: StripField,
    /// P on z = εζ.
    pub p_surface: Vec<f64>,
}

impl FluidFields {
    pub fn centre(&self) -> &Snapshot {
        &self.snapshots[1]
    }

    pub fn v(&self) -> &StripField {
        &self.snapshots[1].v
    }

    pub fn w(&self) -> &StripField {
        &self.snapshots[1].w
    }

    pub fn zeta(&self) -> &[f64] {
        &self.snapshots[1].zeta
    }
}

/// ∂_z within each segment, with the same five-point interior stencil and
/// six-point closures as the potential solver, so that the bottom row
/// reproduces the solver's Neumann condition exactly. On a break level the
/// value comes from the segment on the fluid side.
fn dz_by_segment(f: &StripField, fluid: (usize, usize)) -> StripField {
    let mut out = StripField { values: vec![0.0; f.values.len()], ..f.clone() };
    let mut segs = f.segments();
    // the fluid segment is written last so it owns its end levels
    segs.sort_by_key(|s| *s == fluid);
    for (lo, hi) in segs {
        for j in lo..=hi {
            let interior = j >= lo + 2 && j + 2 <= hi;
            let st = Stencil::build(j, 1, if interior { 5 } else { 6 }, lo, hi, f.dz);
            let lev: Vec<f64> = (0..f.nx).map(|i| st.apply(|l| f.at(i, l))).collect();
            out.level_mut(j).copy_from_slice(&lev);
        }
    }
    out
}

fn dx_levels(grid: &SpectralGrid, f: &StripField) -> StripField {
    let mut out = f.clone();
    out.values = f.values.par_chunks(f.nx).flat_map(|l| grid.derivative(l, 1)).collect();
    out
}

fn snapshot(
    solver: &DnSolver,
    state: &SurfaceState,
    time: f64,
    params: &PhysicalParams,
    setup: &ReconstructionSetup,
) -> Result<Snapshot> {
    let grid = solver.grid();
    let nz = setup.nz;
    let idx = setup.indices;
    let phi = solver.solve(&state.zeta, &state.psi, params)?.phi;
    let plan = ExtensionPlan::new(setup.extension_order, idx.l)?;
    let ext = extend_strip(&phi, &plan)?;
    let fluid = (idx.l * nz, (idx.l + 1) * nz);
    let ext_z = dz_by_segment(&ext, fluid);
    let ext_x = dx_levels(grid, &ext);

    let eps = params.epsilon;
    let zx = grid.derivative(&state.zeta, 1);
    let h: Vec<f64> = state.zeta.iter().map(|z| 1.0 + eps * z).collect();
    let mut v_flat = ext.clone();
    let mut w_flat = ext.clone();
    for j in 0..ext.nlev {
        let z = ext.z(j);
        for i in 0..ext.nx {
            let a = eps * zx[i] * (z + 1.0);
            let pz = ext_z.at(i, j);
            v_flat.values[j * ext.nx + i] = ext_x.at(i, j) - a * pz / h[i];
            w_flat.values[j * ext.nx + i] = pz / h[i];
        }
    }
    let top = fluid.1;
    let v_surface = v_flat.level(top).to_vec();
    let w_surface = w_flat.level(top).to_vec();

    let diffeo = build_diffeo(&state.zeta, eps)?;
    let z0 = -((idx.k + 1) as f64);
    let nlev = (2 * idx.k + 1) * nz + 1;
    let dz = 1.0 / nz as f64;
    let push = |f: &StripField| {
        diffeo.pushforward(f, z0, dz, nlev).map_err(|e| match e {
            Error::Geometry(m) => Error::Geometry(format!("at t = {time}: {m}")),
            other => other,
        })
    };
    Ok(Snapshot {
        time,
        zeta: state.zeta.clone(),
        phi: push(&ext)?,
        v: push(&v_flat)?,
        w: push(&w_flat)?,
        v_surface,
        w_surface,
    })
}

/// Centered first-derivative weights at t₀ from samples at t₋, t₀, t₊.
pub(crate) fn centred(times: [f64; 3]) -> [f64; 3] {
    let (a, b) = (times[1] - times[0], times[2] - times[1]);
    [-b / (a * (a + b)), (b - a) / (a * b), a / (b * (a + b))]
}

/// Reconstructs (U, P) at the middle of three consecutive states.
/// `times` are trajectory (rescaled) times.
pub fn reconstruct_fields(
    grid: &SpectralGrid,
    states: &[SurfaceState],
    times: &[f64],
    params: &PhysicalParams,
    setup: &ReconstructionSetup,
) -> Result<FluidFields> {
    if states.len() != 3 || times.len() != 3 {
        return Err(Error::Context(format!(
            "reconstruction needs exactly 3 consecutive states, got {} states and {} times",
            states.len(),
            times.len()
        )));
    }
    if !(times[0] < times[1] && times[1] < times[2]) {
        return Err(Error::Context("times must be strictly increasing".into()));
    }
    let solver = DnSolver::new(grid, params.mu, setup.nz)?;
    let snaps = states
        .par_iter()
        .zip(times.par_iter())
        .map(|(s, &t)| snapshot(&solver, s, t, params, setup))
        .collect::<Result<Vec<_>>>()?;
    let snapshots: [Snapshot; 3] = snaps.try_into().expect("three snapshots");
    let (eps, mu) = (params.epsilon, params.mu);
    let d = centred([times[0], times[1], times[2]]);
    let c = &snapshots[1];
    let mut p = c.phi.clone();
    let mut p_hydro = c.phi.clone();
    for (q, val) in p.values.iter_mut().enumerate() {
        let phit = d[0] * snapshots[0].phi.values[q] + d[1] * c.phi.values[q] + d[2] * snapshots[2].phi.values[q];
        let (vv, ww) = (c.v.values[q], c.w.values[q]);
        let z = c.phi.z(q / c.phi.nx);
        let hyd = -eps * eps * phit - 0.5 * eps * eps * (vv * vv + ww * ww / mu);
        p_hydro.values[q] = hyd;
        *val = hyd - z;
    }
    let p_surface = (0..p.nx)
        .map(|i| {
            let zs = eps * c.zeta[i];
            let (start, w) = weights_in(&p, 0, p.nlev - 1, zs);
            w.iter().enumerate().map(|(q, c)| c * p.at(i, start + q)).sum()
        })
        .collect();
    Ok(FluidFields { epsilon: eps, mu, indices: setup.indices, snapshots, p, p_hydro, p_surface })
}
