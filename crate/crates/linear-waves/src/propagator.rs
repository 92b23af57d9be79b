use spectral_core::{
    g0_symbol, l2_norm, omega_scalar, Complex64, PhysicalParams, Result, SpectralGrid,
    SurfaceState,
};

/// The multiplier e^{−τL}, τ = t/ε, acting mode by mode on (ζ̂, ψ̂):
///
/// ```text
/// ζ̂(τ) = cos(ωτ) ζ̂ + ω sin(ωτ) ψ̂
/// ψ̂(τ) = −sin(ωτ)/ω ζ̂ + cos(ωτ) ψ̂
/// ```
///
/// At ξ = 0 the second entry of the first column is replaced by its limit −τ.
#[derive(Debug, Clone)]
pub struct LinearPropagator {
    grid: SpectralGrid,
    mu: f64,
    omega: Vec<f64>,
}

impl LinearPropagator {
    pub fn new(grid: &SpectralGrid, mu: f64) -> Self {
        let omega = grid.wavenumbers().iter().map(|&k| omega_scalar(k, mu)).collect();
        LinearPropagator {
            grid: grid.clone(),
            mu,
            omega,
        }
    }

    pub fn grid(&self) -> &SpectralGrid {
        &self.grid
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    /// The 2×2 block for coefficient `index` at rescaled time τ.
    pub fn block(&self, index: usize, tau: f64) -> [[f64; 2]; 2] {
        let w = self.omega[index];
        if w == 0.0 {
            return [[1.0, 0.0], [-tau, 1.0]];
        }
        let (s, c) = (w * tau).sin_cos();
        [[c, w * s], [-s / w, c]]
    }

    /// Applies e^{−τL} in place to a pair of spectra.
    pub fn apply_spectral(&self, zh: &mut [Complex64], ph: &mut [Complex64], tau: f64) {
        for k in 0..zh.len() {
            let m = self.block(k, tau);
            let (z, p) = (zh[k], ph[k]);
            zh[k] = z * m[0][0] + p * m[0][1];
            ph[k] = z * m[1][0] + p * m[1][1];
        }
    }

    /// Evolves a state over time `t` at nonlinearity `epsilon` (τ = t/ε).
    pub fn propagate(&self, state: &SurfaceState, t: f64, epsilon: f64) -> SurfaceState {
        let mut zh = self.grid.forward(&state.zeta);
        let mut ph = self.grid.forward(&state.psi);
        self.apply_spectral(&mut zh, &mut ph, t / epsilon);
        SurfaceState {
            zeta: self.grid.inverse(&zh),
            psi: self.grid.inverse(&ph),
        }
    }
}

pub fn propagate_linear(
    state0: &SurfaceState,
    t: f64,
    params: &PhysicalParams,
    grid: &SpectralGrid,
) -> Result<SurfaceState> {
    state0.check_len(grid.len())?;
    Ok(LinearPropagator::new(grid, params.mu).propagate(state0, t, params.epsilon))
}

/// ½μ⁻¹(G₀ψ, ψ)₂ + ½|ζ|₂², evaluated by Parseval.
pub fn linear_hamiltonian(state: &SurfaceState, grid: &SpectralGrid, mu: f64) -> Result<f64> {
    state.check_len(grid.len())?;
    let zh = grid.forward(&state.zeta);
    let ph = grid.forward(&state.psi);
    let sum: f64 = grid
        .wavenumbers()
        .iter()
        .zip(zh.iter().zip(&ph))
        .map(|(&k, (z, p))| z.norm_sqr() + g0_symbol(k, mu) / mu * p.norm_sqr())
        .sum();
    Ok(0.5 * grid.length() * sum)
}

/// ‖ε²∂ₜ²ζ + G₀ζ/μ‖₂ at time t relative to max(‖ζ‖₂, ‖G₀ζ/μ‖₂).
///
/// The second time derivative is taken from the closed form, so only
/// round-off separates ω² from the G₀/μ symbol.
pub fn wave_equation_residual(
    state0: &SurfaceState,
    t: f64,
    params: &PhysicalParams,
    grid: &SpectralGrid,
) -> Result<f64> {
    state0.check_len(grid.len())?;
    let mu = params.mu;
    let tau = t / params.epsilon;
    let zh = grid.forward(&state0.zeta);
    let ph = grid.forward(&state0.psi);
    let n = grid.len();
    let mut res = vec![Complex64::new(0.0, 0.0); n];
    let mut zt = vec![Complex64::new(0.0, 0.0); n];
    let mut gz = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n {
        let xi = grid.wavenumbers()[k];
        let w = omega_scalar(xi, mu);
        let (s, c) = (w * tau).sin_cos();
        let zeta_t = zh[k] * c + ph[k] * (w * s);
        let dtt = -(zh[k] * (w * w * c) + ph[k] * (w * w * w * s));
        let g = zeta_t * (g0_symbol(xi, mu) / mu);
        res[k] = dtt + g;
        zt[k] = zeta_t;
        gz[k] = g;
    }
    let r = l2_norm(&grid.inverse(&res), grid);
    let scale = l2_norm(&grid.inverse(&zt), grid).max(l2_norm(&grid.inverse(&gz), grid));
    Ok(if scale > 0.0 { r / scale } else { r })
}
