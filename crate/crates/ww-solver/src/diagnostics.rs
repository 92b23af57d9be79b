use spectral_core::{
    apply_multiplier, hs_norm, inner, l2_norm, Error, MultiplierSymbol, Result, SpectralGrid,
    SurfaceState,
};

use crate::{model::WwModel, Trajectory};

/// The t₀ slot of 𝓔^N; any t₀ > 1/2 is admissible in one dimension.
pub const T0_SLOT: f64 = 1.0;

/// ½|ζ|₂² + (2μ)⁻¹(Gψ, ψ)₂: the quantity conserved by the flow.
pub fn hamiltonian(model: &WwModel, state: &SurfaceState) -> Result<f64> {
    let g = model.dn(state)?;
    Ok(hamiltonian_from_g(model.grid(), model.params().mu, state, &g))
}

pub(crate) fn hamiltonian_from_g(grid: &SpectralGrid, mu: f64, state: &SurfaceState, g: &[f64]) -> f64 {
    0.5 * inner(&state.zeta, &state.zeta, grid) + inner(g, &state.psi, grid) / (2.0 * mu)
}

/// (2μ)⁻¹(Gψ, ψ)₂ + (ζ, ζ)₂, with the weight on the ζ-term exactly as
/// printed in the source formula. Not conserved unless ζ ≡ 0; kept for
/// comparison with [`hamiltonian`].
pub fn hamiltonian_printed(model: &WwModel, state: &SurfaceState) -> Result<f64> {
    let g = model.dn(state)?;
    let grid = model.grid();
    Ok(inner(&state.zeta, &state.zeta, grid) + inner(&g, &state.psi, grid) / (2.0 * model.params().mu))
}

/// ζ_(α) = ∂^αζ and ψ_(α) = ∂^αψ − εw̲∂^αζ for α = 0..=N.
#[derive(Debug, Clone)]
pub struct GoodUnknowns {
    pub zeta: Vec<Vec<f64>>,
    pub psi: Vec<Vec<f64>>,
}

pub fn good_unknowns(grid: &SpectralGrid, state: &SurfaceState, w: &[f64], epsilon: f64, n: usize) -> GoodUnknowns {
    let mut zeta = Vec::with_capacity(n + 1);
    let mut psi = Vec::with_capacity(n + 1);
    for a in 0..=n as u32 {
        let dz = grid.derivative(&state.zeta, a);
        let dp = grid.derivative(&state.psi, a);
        psi.push((0..dz.len()).map(|i| dp[i] - epsilon * w[i] * dz[i]).collect());
        zeta.push(dz);
    }
    GoodUnknowns { zeta, psi }
}

pub(crate) fn energy_from_w(grid: &SpectralGrid, mu: f64, eps: f64, state: &SurfaceState, w: &[f64], n: usize) -> Result<f64> {
    let p = |f: &[f64]| apply_multiplier(f, &MultiplierSymbol::FracP, grid, mu);
    let gu = good_unknowns(grid, state, w, eps, n);
    let mut e = hs_norm(&p(&state.psi)?, grid, T0_SLOT + 1.5);
    for (z, q) in gu.zeta.iter().zip(&gu.psi) {
        e += l2_norm(z, grid) + l2_norm(&p(q)?, grid);
    }
    Ok(e)
}

/// 𝓔^N = |𝔓ψ|_{H^{t₀+3/2}} + Σ_{α≤N} |ζ_(α)|₂ + |𝔓ψ_(α)|₂.
pub fn energy_en(model: &WwModel, state: &SurfaceState, n: usize) -> Result<f64> {
    if n > 5 {
        return Err(Error::config("N", "N ≤ 5 supported"));
    }
    let (w, _, _) = model.traces(state)?;
    let p = model.params();
    energy_from_w(model.grid(), p.mu, p.epsilon, state, &w, n)
}

/// Centered first and second derivative weights for samples at
/// t₋, t₀, t₊ (nonuniform spacing allowed).
fn centered_weights(tm: f64, t0: f64, tp: f64) -> ([f64; 3], [f64; 3]) {
    let (a, b) = (t0 - tm, tp - t0);
    let d1 = [-b / (a * (a + b)), (b - a) / (a * b), a / (b * (a + b))];
    let d2 = [2.0 / (a * (a + b)), -2.0 / (a * b), 2.0 / (b * (a + b))];
    (d1, d2)
}

fn interior(traj: &Trajectory, index: usize) -> Result<()> {
    if index == 0 || index + 1 >= traj.times.len() {
        return Err(Error::Context(format!(
            "sample {index} has no neighbours on both sides ({} samples stored)",
            traj.times.len()
        )));
    }
    Ok(())
}

fn combine(w: &[f64; 3], f: [&[f64]; 3]) -> Vec<f64> {
    (0..f[0].len()).map(|i| w[0] * f[0][i] + w[1] * f[1][i] + w[2] * f[2][i]).collect()
}

/// 𝓔₁^N at a stored sample: the squared energy with time derivatives of
/// order ≤ 2 included, |𝔓ψ|²_{H^{t₀+3/2}} + Σ_{|α|≤N} |ζ_(α)|₂² + |𝔓ψ_(α)|₂²,
/// α = (α_t, α_x). Time derivatives are taken in the unscaled time
/// (∂ = ε∂ₜ in trajectory time) by centered differences over neighbouring
/// samples.
pub fn energy_en_with_time(model: &WwModel, traj: &Trajectory, index: usize, n: usize) -> Result<f64> {
    interior(traj, index)?;
    if n > 5 {
        return Err(Error::config("N", "N ≤ 5 supported"));
    }
    let grid = model.grid();
    let p = model.params();
    let (eps, mu) = (p.epsilon, p.mu);
    let (d1, d2) = centered_weights(traj.times[index - 1], traj.times[index], traj.times[index + 1]);
    let s = |k: usize| &traj.states[k];
    let zs = [&s(index - 1).zeta[..], &s(index).zeta[..], &s(index + 1).zeta[..]];
    let ps = [&s(index - 1).psi[..], &s(index).psi[..], &s(index + 1).psi[..]];
    let time_derivs = |f: [&[f64]; 3]| -> Vec<Vec<f64>> {
        vec![
            f[1].to_vec(),
            combine(&d1, f).iter().map(|v| eps * v).collect(),
            combine(&d2, f).iter().map(|v| eps * eps * v).collect(),
        ]
    };
    let zt = time_derivs(zs);
    let pt = time_derivs(ps);
    let w = &traj.traces_w[index];
    let pm = |f: &[f64]| apply_multiplier(f, &MultiplierSymbol::FracP, grid, mu);
    let mut e = hs_norm(&pm(&s(index).psi)?, grid, T0_SLOT + 1.5).powi(2);
    for at in 0..=2.min(n) {
        for ax in 0..=(n - at) as u32 {
            let dz = grid.derivative(&zt[at], ax);
            let dp = grid.derivative(&pt[at], ax);
            let good: Vec<f64> = (0..dz.len()).map(|i| dp[i] - eps * w[i] * dz[i]).collect();
            e += l2_norm(&dz, grid).powi(2) + l2_norm(&pm(&good)?, grid).powi(2);
        }
    }
    Ok(e)
}

/// 𝔞 = 1 + ε²(∂ₜw̲ + V̲∂ₓw̲) at a stored sample, ∂ₜ by centered differences.
pub fn rayleigh_taylor(traj: &Trajectory, index: usize, epsilon: f64, grid: &SpectralGrid) -> Result<Vec<f64>> {
    interior(traj, index)?;
    let (d1, _) = centered_weights(traj.times[index - 1], traj.times[index], traj.times[index + 1]);
    let w = &traj.traces_w;
    let wt = combine(&d1, [&w[index - 1], &w[index], &w[index + 1]]);
    Ok(rt_from(epsilon, grid, &wt, &w[index], &traj.traces_v[index]))
}

fn rt_from(eps: f64, grid: &SpectralGrid, wt: &[f64], w: &[f64], v: &[f64]) -> Vec<f64> {
    let wx = grid.derivative(w, 1);
    (0..w.len()).map(|i| 1.0 + eps * eps * (wt[i] + v[i] * wx[i])).collect()
}

/// 𝔞 at a single state, with ∂ₜw̲ taken as the centered directional
/// derivative of w̲ along the tendency.
pub(crate) fn rayleigh_taylor_state(model: &WwModel, state: &SurfaceState) -> Result<Vec<f64>> {
    let eps = model.params().epsilon;
    let ut = model.tendency(state)?;
    let scale = ut.max_abs().max(1e-300);
    let delta = 1e-4 * state.max_abs().max(1e-3) / scale;
    let (w, v, _) = model.traces(state)?;
    let (wp, _, _) = model.traces(&crate::model::add(state, &ut, delta))?;
    let (wm, _, _) = model.traces(&crate::model::add(state, &ut, -delta))?;
    let wt: Vec<f64> = wp.iter().zip(&wm).map(|(a, b)| (a - b) / (2.0 * delta)).collect();
    Ok(rt_from(eps, model.grid(), &wt, &w, &v))
}
