use dirichlet_neumann::{dn_apply, expansion_g1, trace_velocities_from_g, DnMode, DnSolver};
use linear_waves::LinearPropagator;
use spectral_core::{
    apply_multiplier, Error, MultiplierSymbol, PhysicalParams, Result, SpectralGrid, SurfaceState,
};

/// Tendency pair (∂ₜζ, ∂ₜψ).
pub type Tendency = SurfaceState;

/// Everything needed to evaluate the right-hand side at fixed (ε, μ) and grid.
#[derive(Debug)]
pub struct WwModel {
    grid: SpectralGrid,
    params: PhysicalParams,
    mode: DnMode,
    dealias: bool,
    solver: DnSolver,
    prop: LinearPropagator,
}

impl WwModel {
    pub fn new(grid: &SpectralGrid, params: PhysicalParams, mode: DnMode, nz: usize, dealias: bool) -> Result<Self> {
        params.validate()?;
        Ok(WwModel {
            grid: grid.clone(),
            params,
            mode,
            dealias,
            solver: DnSolver::new(grid, params.mu, nz)?,
            prop: LinearPropagator::new(grid, params.mu),
        })
    }

    pub fn grid(&self) -> &SpectralGrid {
        &self.grid
    }

    pub fn params(&self) -> &PhysicalParams {
        &self.params
    }

    pub fn mode(&self) -> DnMode {
        self.mode
    }

    pub fn propagator(&self) -> &LinearPropagator {
        &self.prop
    }

    pub fn dn_solver(&self) -> &DnSolver {
        &self.solver
    }

    fn admissible(&self, state: &SurfaceState) -> Result<()> {
        state.check_len(self.grid.len())?;
        let h = state.min_height(self.params.epsilon);
        if h < self.params.h_min {
            return Err(Error::Admissibility {
                time: f64::NAN,
                reason: format!("water height {h:.6} below h_min = {}", self.params.h_min),
            });
        }
        Ok(())
    }

    /// G[εζ]ψ in the model's mode.
    pub fn dn(&self, state: &SurfaceState) -> Result<Vec<f64>> {
        self.admissible(state)?;
        dn_apply(&self.solver, &state.zeta, &state.psi, &self.params, self.mode)
    }

    /// (G[εζ] − G₀)ψ, computed without forming the cancelling difference.
    fn dn_correction(&self, state: &SurfaceState) -> Result<Vec<f64>> {
        self.admissible(state)?;
        match self.mode {
            DnMode::Elliptic => Ok(self.solver.solve(&state.zeta, &state.psi, &self.params)?.delta_g),
            DnMode::Expansion1 => {
                let g1 = expansion_g1(&self.grid, &state.zeta, &state.psi, self.params.mu)?;
                Ok(g1.iter().map(|v| self.params.epsilon * v).collect())
            }
            DnMode::Flat => Ok(vec![0.0; self.grid.len()]),
        }
    }

    /// Linear tendency −ε⁻¹Lu = (G₀ψ/(εμ), −ζ/ε).
    pub fn linear_tendency(&self, state: &SurfaceState) -> Result<Tendency> {
        let (eps, mu) = (self.params.epsilon, self.params.mu);
        let g0 = apply_multiplier(&state.psi, &MultiplierSymbol::G0, &self.grid, mu)?;
        Ok(SurfaceState {
            zeta: g0.iter().map(|g| g / (eps * mu)).collect(),
            psi: state.zeta.iter().map(|z| -z / eps).collect(),
        })
    }

    /// F(u): the part of the tendency left after removing −ε⁻¹Lu.
    ///
    /// The first component is (G − G₀)ψ/(εμ) with its mean removed: the exact
    /// operator has zero mean, and the discrete one misses this by round-off
    /// amplified by 1/ε, which would otherwise leak into ∫ζ.
    pub fn nonlinear(&self, state: &SurfaceState) -> Result<Tendency> {
        let (eps, mu) = (self.params.epsilon, self.params.mu);
        let dg = self.dn_correction(state)?;
        let mut f: Vec<f64> = dg.iter().map(|v| v / (eps * mu)).collect();
        let mean = f.iter().sum::<f64>() / f.len() as f64;
        f.iter_mut().for_each(|v| *v -= mean);

        let g0 = apply_multiplier(&state.psi, &MultiplierSymbol::G0, &self.grid, mu)?;
        let gfull: Vec<f64> = g0.iter().zip(&dg).map(|(a, b)| a + b).collect();
        let g = self.bernoulli_terms(state, &gfull);
        let mut out = SurfaceState { zeta: f, psi: g };
        if self.dealias {
            out.zeta = self.grid.dealiased(&out.zeta);
            out.psi = self.grid.dealiased(&out.psi);
        }
        Ok(out)
    }

    /// −½ψₓ² + (Gψ + εμζₓψₓ)²/(2μ(1 + ε²μζₓ²)).
    fn bernoulli_terms(&self, state: &SurfaceState, g: &[f64]) -> Vec<f64> {
        let (eps, mu) = (self.params.epsilon, self.params.mu);
        let zx = self.grid.derivative(&state.zeta, 1);
        let px = self.grid.derivative(&state.psi, 1);
        (0..g.len())
            .map(|i| {
                let num = g[i] + eps * mu * zx[i] * px[i];
                -0.5 * px[i] * px[i] + num * num / (2.0 * mu * (1.0 + eps * eps * mu * zx[i] * zx[i]))
            })
            .collect()
    }

    /// Full tendency −ε⁻¹Lu + F(u).
    pub fn tendency(&self, state: &SurfaceState) -> Result<Tendency> {
        let lin = self.linear_tendency(state)?;
        let nl = self.nonlinear(state)?;
        Ok(add(&lin, &nl, 1.0))
    }

    /// The split F = B + εR with B = (G₁ψ/μ, −½ψₓ² + (G₀ψ)²/(2μ)), the
    /// ε-independent quadratic part; R is the remainder divided by ε.
    pub fn decompose(&self, state: &SurfaceState) -> Result<(Tendency, Tendency)> {
        let (eps, mu) = (self.params.epsilon, self.params.mu);
        let f = self.nonlinear(state)?;
        let g1 = expansion_g1(&self.grid, &state.zeta, &state.psi, mu)?;
        let g0 = apply_multiplier(&state.psi, &MultiplierSymbol::G0, &self.grid, mu)?;
        let px = self.grid.derivative(&state.psi, 1);
        let mut b = SurfaceState {
            zeta: g1.iter().map(|v| v / mu).collect(),
            psi: (0..g0.len()).map(|i| -0.5 * px[i] * px[i] + g0[i] * g0[i] / (2.0 * mu)).collect(),
        };
        if self.dealias {
            b.zeta = self.grid.dealiased(&b.zeta);
            b.psi = self.grid.dealiased(&b.psi);
        }
        let r = add(&f, &b, -1.0).scaled(1.0 / eps);
        Ok((b, r))
    }

    /// Surface velocities (w̲, V̲) at a state, plus the G used to get them.
    pub fn traces(&self, state: &SurfaceState) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
        let g = self.dn(state)?;
        let (w, v) = trace_velocities_from_g(&self.grid, &state.zeta, &state.psi, &g, &self.params);
        Ok((w, v, g))
    }
}

pub(crate) fn add(a: &SurfaceState, b: &SurfaceState, s: f64) -> SurfaceState {
    SurfaceState {
        zeta: a.zeta.iter().zip(&b.zeta).map(|(x, y)| x + s * y).collect(),
        psi: a.psi.iter().zip(&b.psi).map(|(x, y)| x + s * y).collect(),
    }
}

/// One-shot tendency (∂ₜζ, ∂ₜψ); builds a model, so prefer [`WwModel`] in loops.
pub fn rhs(
    state: &SurfaceState,
    params: &PhysicalParams,
    dn_mode: DnMode,
    grid: &SpectralGrid,
    nz: usize,
) -> Result<Tendency> {
    WwModel::new(grid, *params, dn_mode, nz, false)?.tendency(state)
}
