use dirichlet_neumann::DnMode;
use serde::{Deserialize, Serialize};
use spectral_core::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    /// Time step in rescaled units.
    pub dt: f64,
    /// Final rescaled time.
    #[serde(rename = "T")]
    pub t_final: f64,
    pub dn_mode: DnMode,
    pub n_z: usize,
    pub dealias: bool,
    /// Steps between stored samples.
    pub monitor_every: usize,
    /// How many times a rejected step may be halved before giving up.
    pub max_halvings: u32,
    /// Order N of the energy 𝓔^N recorded along trajectories.
    pub energy_order: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            dt: 1e-3,
            t_final: 1.0,
            dn_mode: DnMode::Elliptic,
            n_z: 32,
            dealias: true,
            monitor_every: 10,
            max_halvings: 6,
            energy_order: 3,
        }
    }
}

impl SolverConfig {
    /// Default config for a run to time `t_final` with dt = 10⁻³·T.
    pub fn for_final_time(t_final: f64) -> Self {
        SolverConfig { dt: 1e-3 * t_final, t_final, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::config("dt", format!("must be positive, got {}", self.dt)));
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return Err(Error::config("T", format!("must be positive, got {}", self.t_final)));
        }
        if self.monitor_every == 0 {
            return Err(Error::config("monitor_every", "must be at least 1"));
        }
        if self.n_z < 8 {
            return Err(Error::config("n_z", format!("must be at least 8, got {}", self.n_z)));
        }
        if self.energy_order > 5 {
            return Err(Error::config("energy_order", "N ≤ 5 supported"));
        }
        if self.dn_mode == DnMode::Flat {
            return Err(Error::config("dn_mode", "flat mode drops the nonlinearity; use elliptic or expansion1"));
        }
        Ok(())
    }
}
