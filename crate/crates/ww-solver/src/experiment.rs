use linear_waves::{DecayReport, LinearPropagator};
use rayon::prelude::*;
use spectral_core::{
    apply_multiplier, l2_norm, Error, MultiplierSymbol, PhysicalParams, Result, SpectralGrid,
    SurfaceState,
};

use crate::{simulate, SolverConfig};

/// sup over stored samples of |(ζ^L − ζ, 𝔓(ψ^L − ψ))|₂, plus whether the run finished.
fn gap(grid: &SpectralGrid, state0: &SurfaceState, params: &PhysicalParams, config: &SolverConfig) -> Result<(f64, bool)> {
    let traj = simulate(grid, state0, params, config)?;
    let prop = LinearPropagator::new(grid, params.mu);
    let mut worst: f64 = 0.0;
    for (t, u) in traj.times.iter().zip(&traj.states) {
        let lin = prop.propagate(state0, *t, params.epsilon);
        let dz: Vec<f64> = lin.zeta.iter().zip(&u.zeta).map(|(a, b)| a - b).collect();
        let dp: Vec<f64> = lin.psi.iter().zip(&u.psi).map(|(a, b)| a - b).collect();
        let pdp = apply_multiplier(&dp, &MultiplierSymbol::FracP, grid, params.mu)?;
        worst = worst.max(l2_norm(&dz, grid).hypot(l2_norm(&pdp, grid)));
    }
    Ok((worst, traj.complete))
}

/// Linear vs nonlinear gap over an ε sweep.
///
/// Columns: epsilon, error, bound, where bound is the curve
/// C(ε^{1/8}μ^{−3/16} + ε^{1/2}μ^{1/4}) with C fixed at the first (largest)
/// ε. The extra column `eighth_bound` is Cε^{1/8} calibrated the same way;
/// `complete` is 1 for runs that reached T.
pub fn lin_vs_nonlin_experiment(
    grid: &SpectralGrid,
    state0: &SurfaceState,
    t_final: f64,
    eps_list: &[f64],
    mu: f64,
    config: &SolverConfig,
) -> Result<DecayReport> {
    if eps_list.is_empty() || eps_list.windows(2).any(|w| w[1] >= w[0]) || eps_list.iter().any(|e| !(*e > 0.0)) {
        return Err(Error::config("epsilon_list", "must be a nonempty, strictly decreasing list of positive values"));
    }
    let config = SolverConfig { t_final, ..config.clone() };
    let runs = eps_list
        .par_iter()
        .map(|&e| gap(grid, state0, &PhysicalParams::new(e, mu)?, &config))
        .collect::<Result<Vec<_>>>()?;
    let shape = |e: f64| e.powf(0.125) / mu.powf(3.0 / 16.0) + e.sqrt() * mu.powf(0.25);
    let errs: Vec<f64> = runs.iter().map(|r| r.0).collect();
    let c_bound = errs[0] / shape(eps_list[0]);
    let c_eighth = errs[0] / eps_list[0].powf(0.125);
    let mut rep = DecayReport::new("epsilon", "error", "bound");
    rep.abscissae = eps_list.to_vec();
    rep.measured = errs;
    rep.reference = eps_list.iter().map(|&e| c_bound * shape(e)).collect();
    rep.push_extra("eighth_bound", eps_list.iter().map(|e| c_eighth * e.powf(0.125)).collect());
    rep.push_extra("complete", runs.iter().map(|r| if r.1 { 1.0 } else { 0.0 }).collect());
    for (e, r) in eps_list.iter().zip(&runs) {
        if !r.1 {
            rep.flags.push(format!("run at epsilon = {e} stopped before T"));
        }
    }
    rep.fit_slope();
    Ok(rep)
}
