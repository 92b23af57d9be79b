use serde::Serialize;
use spectral_core::{Error, PhysicalParams, Result, SpectralGrid, SurfaceState};

use crate::{
    diagnostics::{energy_from_w, hamiltonian_from_g, rayleigh_taylor, rayleigh_taylor_state},
    model::WwModel,
    step::if_rk4_step,
    SolverConfig,
};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AdmissibilityFlag {
    /// A step needed dt halving to keep 1 + εζ ≥ h_min.
    StepHalved { time: f64, dt: f64 },
    /// min 𝔞 fell below a₀ at a stored sample.
    RayleighTaylor { time: f64, min_a: f64 },
    /// The run stopped early; the trajectory ends at the last good state.
    Aborted { time: f64, reason: String },
}

/// Sampled solution on [0, T] with its monitors.
#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    #[serde(skip)]
    pub states: Vec<SurfaceState>,
    /// Surface vertical velocity w̲ at each sample.
    #[serde(skip)]
    pub traces_w: Vec<Vec<f64>>,
    /// Surface horizontal velocity V̲ at each sample.
    #[serde(skip)]
    pub traces_v: Vec<Vec<f64>>,
    pub hamiltonian: Vec<f64>,
    pub energy: Vec<f64>,
    pub min_height: Vec<f64>,
    /// min 𝔞 at interior samples; NaN at the two ends.
    pub min_rt: Vec<f64>,
    pub flags: Vec<AdmissibilityFlag>,
    pub complete: bool,
    pub steps: usize,
}

impl Trajectory {
    pub fn header() -> Vec<String> {
        ["time", "hamiltonian", "energy", "min_height", "min_rayleigh_taylor"]
            .iter()
            .map(|s| s.to_string())
            .collect()
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.times.len())
            .map(|k| vec![self.times[k], self.hamiltonian[k], self.energy[k], self.min_height[k], self.min_rt[k]])
            .collect()
    }

    pub fn last(&self) -> &SurfaceState {
        self.states.last().expect("trajectory holds at least the initial state")
    }

    /// Largest relative Hamiltonian change from the initial value.
    pub fn hamiltonian_drift(&self) -> f64 {
        let h0 = self.hamiltonian[0];
        let scale = h0.abs().max(1e-300);
        self.hamiltonian.iter().fold(0.0_f64, |m, h| m.max((h - h0).abs() / scale))
    }

    fn record(&mut self, model: &WwModel, t: f64, state: SurfaceState, n: usize) -> Result<()> {
        let (w, v, g) = model.traces(&state)?;
        let p = model.params();
        self.hamiltonian.push(hamiltonian_from_g(model.grid(), p.mu, &state, &g));
        self.energy.push(energy_from_w(model.grid(), p.mu, p.epsilon, &state, &w, n)?);
        self.min_height.push(state.min_height(p.epsilon));
        self.times.push(t);
        self.states.push(state);
        self.traces_w.push(w);
        self.traces_v.push(v);
        Ok(())
    }
}

fn is_admissibility(e: &Error) -> bool {
    matches!(e, Error::Admissibility { .. })
}

/// Advances by `dt`, halving on admissibility loss up to `depth` times.
fn guarded_step(
    model: &WwModel,
    state: &SurfaceState,
    t: f64,
    dt: f64,
    depth: u32,
    flags: &mut Vec<AdmissibilityFlag>,
) -> Result<SurfaceState> {
    let p = model.params();
    let attempt = if_rk4_step(model.propagator(), p.epsilon, state, dt, |u| model.nonlinear(u)).and_then(|u| {
        let h = u.min_height(p.epsilon);
        if h < p.h_min {
            Err(Error::Admissibility { time: t + dt, reason: format!("water height {h:.6} below h_min = {}", p.h_min) })
        } else {
            Ok(u)
        }
    });
    match attempt {
        Err(e) if is_admissibility(&e) && depth > 0 => {
            flags.push(AdmissibilityFlag::StepHalved { time: t, dt: 0.5 * dt });
            let mid = guarded_step(model, state, t, 0.5 * dt, depth - 1, flags)?;
            guarded_step(model, &mid, t + 0.5 * dt, 0.5 * dt, depth - 1, flags)
        }
        Err(Error::Admissibility { reason, .. }) => Err(Error::Admissibility { time: t, reason }),
        other => other,
    }
}

/// Runs the model from `state0` to `config.t_final`.
///
/// Loss of admissibility that dt halving cannot cure ends the run early:
/// the partial trajectory is returned with `complete = false` and an
/// `Aborted` flag. Other failures are returned as errors.
pub fn simulate(
    grid: &SpectralGrid,
    state0: &SurfaceState,
    params: &PhysicalParams,
    config: &SolverConfig,
) -> Result<Trajectory> {
    config.validate()?;
    let model = WwModel::new(grid, *params, config.dn_mode, config.n_z, config.dealias)?;
    simulate_model(&model, state0, config)
}

pub(crate) fn simulate_model(model: &WwModel, state0: &SurfaceState, config: &SolverConfig) -> Result<Trajectory> {
    let p = *model.params();
    state0.check_len(model.grid().len())?;
    state0
        .check_height(p.epsilon, p.h_min)
        .map_err(|e| Error::Admissibility { time: 0.0, reason: e.to_string() })?;
    let a = rayleigh_taylor_state(model, state0)?;
    let amin = a.iter().cloned().fold(f64::INFINITY, f64::min);
    if amin < p.a0 {
        return Err(Error::Admissibility {
            time: 0.0,
            reason: format!("Rayleigh–Taylor coefficient {amin:.6} below a0 = {}", p.a0),
        });
    }

    let nsteps = ((config.t_final / config.dt) - 1e-9).ceil().max(1.0) as usize;
    let dt = config.t_final / nsteps as f64;
    let mut traj = Trajectory {
        times: vec![],
        states: vec![],
        traces_w: vec![],
        traces_v: vec![],
        hamiltonian: vec![],
        energy: vec![],
        min_height: vec![],
        min_rt: vec![],
        flags: vec![],
        complete: true,
        steps: 0,
    };
    traj.record(model, 0.0, state0.clone(), config.energy_order)?;
    let mut u = state0.clone();
    for k in 0..nsteps {
        let t = k as f64 * dt;
        match guarded_step(model, &u, t, dt, config.max_halvings, &mut traj.flags) {
            Ok(next) => u = next,
            Err(Error::Admissibility { time, reason }) => {
                traj.flags.push(AdmissibilityFlag::Aborted { time, reason });
                traj.complete = false;
                if *traj.times.last().unwrap() < t {
                    traj.record(model, t, u.clone(), config.energy_order)?;
                }
                break;
            }
            Err(e) => return Err(e),
        }
        traj.steps += 1;
        if (k + 1) % config.monitor_every == 0 || k + 1 == nsteps {
            traj.record(model, (k + 1) as f64 * dt, u.clone(), config.energy_order)?;
        }
    }

    let m = traj.times.len();
    traj.min_rt = vec![f64::NAN; m];
    for i in 1..m.saturating_sub(1) {
        let a = rayleigh_taylor(&traj, i, p.epsilon, model.grid())?;
        let amin = a.iter().cloned().fold(f64::INFINITY, f64::min);
        traj.min_rt[i] = amin;
        if amin < p.a0 {
            traj.flags.push(AdmissibilityFlag::RayleighTaylor { time: traj.times[i], min_a: amin });
        }
    }
    Ok(traj)
}
