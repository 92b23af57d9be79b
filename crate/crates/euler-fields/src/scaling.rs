use linear_waves::DecayReport;
use rayon::prelude::*;
use spectral_core::{Error, PhysicalParams, Result, SpectralGrid, SurfaceState};
use ww_solver::{if_rk4_step, simulate, SolverConfig, WwModel};

use crate::{reconstruct_fields, FluidFields, ReconstructionSetup};

/// Fields at `state`, with the time derivatives taken from IF-RK4 steps of
/// ±`config.dt` around it. Uses `config.n_z` levels for both the potential
/// and S*.
pub fn reconstruct_at(
    grid: &SpectralGrid,
    state: &SurfaceState,
    time: f64,
    params: &PhysicalParams,
    config: &SolverConfig,
) -> Result<FluidFields> {
    config.validate()?;
    let model = WwModel::new(grid, *params, config.dn_mode, config.n_z, config.dealias)?;
    let step = |dt: f64| if_rk4_step(model.propagator(), params.epsilon, state, dt, |u| model.nonlinear(u));
    let states = [step(-config.dt)?, state.clone(), step(config.dt)?];
    let times = [time - config.dt, time, time + config.dt];
    let setup = ReconstructionSetup::for_states(&states, params.epsilon, config.n_z)?;
    reconstruct_fields(grid, &states, &times, params, &setup)
}

/// sup|w̲| at T over an ε sweep, against Cε² with C fixed at the first ε.
/// Extra columns: `v_sup` (sup|V̲| at T) and `complete`.
pub fn rigid_lid_scaling_experiment(
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
    let sup = |v: &[f64]| v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let runs = eps_list
        .par_iter()
        .map(|&e| -> Result<(f64, f64, bool)> {
            let traj = simulate(grid, state0, &PhysicalParams::new(e, mu)?, &config)?;
            let w = traj.traces_w.last().map_or(f64::NAN, |w| sup(w));
            let v = traj.traces_v.last().map_or(f64::NAN, |v| sup(v));
            Ok((w, v, traj.complete))
        })
        .collect::<Result<Vec<_>>>()?;
    let c = runs[0].0 / (eps_list[0] * eps_list[0]);
    let mut rep = DecayReport::new("epsilon", "w_sup", "reference");
    rep.abscissae = eps_list.to_vec();
    rep.measured = runs.iter().map(|r| r.0).collect();
    rep.reference = eps_list.iter().map(|e| c * e * e).collect();
    rep.push_extra("v_sup", runs.iter().map(|r| r.1).collect());
    rep.push_extra("complete", runs.iter().map(|r| if r.2 { 1.0 } else { 0.0 }).collect());
    for (e, r) in eps_list.iter().zip(&runs) {
        if !r.2 {
            rep.flags.push(format!("run at epsilon = {e} stopped before T"));
        }
    }
    rep.fit_slope();
    Ok(rep)
}
