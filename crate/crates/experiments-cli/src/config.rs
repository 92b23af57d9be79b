use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use dirichlet_neumann::DnMode;
use serde::{Deserialize, Serialize};
use spectral_core::{Error, Result};

/// Experiment names. Each acceptance criterion belongs to exactly one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Propagator,
    LinearHamiltonian,
    LinearLimit,
    WeakDecay,
    Dispersion,
    DnFidelity,
    DnExpansion,
    ShapeDerivative,
    LinVsNonlin,
    Conservation,
    RigidLidScaling,
    Extension,
    NullCheck,
    Reconstruct,
}

impl Experiment {
    pub const ALL: [Experiment; 14] = [
        Experiment::Propagator,
        Experiment::LinearHamiltonian,
        Experiment::LinearLimit,
        Experiment::WeakDecay,
        Experiment::Dispersion,
        Experiment::DnFidelity,
        Experiment::DnExpansion,
        Experiment::ShapeDerivative,
        Experiment::LinVsNonlin,
        Experiment::Conservation,
        Experiment::RigidLidScaling,
        Experiment::Extension,
        Experiment::NullCheck,
        Experiment::Reconstruct,
    ];

    /// Acceptance criterion checked by this experiment.
    pub fn criterion(self) -> u32 {
        Self::ALL.iter().position(|e| *e == self).expect("listed") as u32 + 1
    }

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Propagator => "propagator",
            Experiment::LinearHamiltonian => "linear-hamiltonian",
            Experiment::LinearLimit => "linear-limit",
            Experiment::WeakDecay => "weak-decay",
            Experiment::Dispersion => "dispersion",
            Experiment::DnFidelity => "dn-fidelity",
            Experiment::DnExpansion => "dn-expansion",
            Experiment::ShapeDerivative => "shape-derivative",
            Experiment::LinVsNonlin => "lin-vs-nonlin",
            Experiment::Conservation => "conservation",
            Experiment::RigidLidScaling => "rigid-lid-scaling",
            Experiment::Extension => "extension",
            Experiment::NullCheck => "null-check",
            Experiment::Reconstruct => "reconstruct",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.iter().copied().find(|e| e.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Self::ALL.iter().map(|e| e.name()).collect();
            Error::config("experiment", format!("unknown experiment {s:?}; expected one of {}", names.join(", ")))
        })
    }
}

/// Initial-condition families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DataFamily {
    /// ζ₀ = A e^{−x²}, ψ₀ = 0.
    Gaussian,
    /// ζ₀ = A cos(2πx/L), ψ₀ = (A/2) sin(2πx/L + 0.3).
    Cosine,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon_list: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu_list: Option<Vec<f64>>,
    /// ε at which the conservation experiment measures the drift order.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order_epsilon: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub length: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_z: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt_list: Option<Vec<f64>>,
    #[serde(rename = "T", skip_serializing_if = "Option::is_none")]
    pub t_final: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dn_mode: Option<DnMode>,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub energy_order: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<DataFamily>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
}

/// Run configuration as written by the user; unset values take the
/// experiment's defaults in [`RunConfig::resolve`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: Experiment,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default)]
    pub params: ParamsSection,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub data: DataSection,
    #[serde(default)]
    pub output: OutputSection,
}

/// Fully specified configuration, echoed verbatim into the manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResolvedConfig {
    pub experiment: Experiment,
    pub seed: u64,
    pub epsilon: f64,
    pub epsilon_list: Vec<f64>,
    pub mu: f64,
    pub mu_list: Vec<f64>,
    pub order_epsilon: f64,
    pub length: f64,
    pub n: usize,
    pub n_z: usize,
    pub dt: f64,
    pub dt_list: Vec<f64>,
    #[serde(rename = "T")]
    pub t_final: f64,
    pub dn_mode: DnMode,
    #[serde(rename = "N")]
    pub energy_order: usize,
    pub family: DataFamily,
    pub amplitude: f64,
    pub out_dir: PathBuf,
}

impl RunConfig {
    pub fn new(experiment: Experiment) -> Self {
        RunConfig {
            experiment,
            seed: None,
            params: ParamsSection::default(),
            grid: GridSection::default(),
            solver: SolverSection::default(),
            data: DataSection::default(),
            output: OutputSection::default(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::config("config", e.message().to_string()))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config("config", format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is plain data")
    }

    /// Fills unset values with the experiment's defaults and validates.
    pub fn resolve(&self) -> Result<ResolvedConfig> {
        let d = defaults(self.experiment);
        let p = &self.params;
        let epsilon = p.epsilon.unwrap_or(d.epsilon);
        let r = ResolvedConfig {
            experiment: self.experiment,
            seed: self.seed.unwrap_or(0),
            epsilon,
            epsilon_list: p.epsilon_list.clone().unwrap_or_else(|| {
                if p.epsilon.is_some() { vec![epsilon] } else { d.epsilon_list.to_vec() }
            }),
            mu: p.mu.unwrap_or(d.mu),
            mu_list: p.mu_list.clone().unwrap_or_else(|| match p.mu {
                Some(m) => vec![m],
                None => d.mu_list.to_vec(),
            }),
            order_epsilon: p.order_epsilon.unwrap_or(d.order_epsilon),
            length: self.grid.length.unwrap_or(d.length),
            n: self.grid.n.unwrap_or(d.n),
            n_z: self.grid.n_z.unwrap_or(d.n_z),
            dt: self.solver.dt.unwrap_or(d.dt),
            dt_list: self.solver.dt_list.clone().unwrap_or_else(|| d.dt_list.to_vec()),
            t_final: self.solver.t_final.unwrap_or(d.t_final),
            dn_mode: self.solver.dn_mode.unwrap_or(DnMode::Elliptic),
            energy_order: self.solver.energy_order.unwrap_or(3),
            family: self.data.family.unwrap_or(d.family),
            amplitude: self.data.amplitude.unwrap_or(1.0),
            out_dir: self.output.dir.clone().unwrap_or_else(|| PathBuf::from("out").join(self.experiment.name())),
        };
        r.validate()?;
        Ok(r)
    }
}

fn positive(field: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::config(field, format!("must be > 0, got {v}")))
    }
}

fn decreasing(field: &str, v: &[f64]) -> Result<()> {
    if v.is_empty() {
        return Err(Error::config(field, "must not be empty"));
    }
    for x in v {
        positive(field, *x)?;
    }
    if let Some(w) = v.windows(2).find(|w| w[1] >= w[0]) {
        return Err(Error::config(field, format!("must be strictly decreasing, but {} is followed by {}", w[0], w[1])));
    }
    Ok(())
}

impl ResolvedConfig {
    pub fn validate(&self) -> Result<()> {
        positive("params.epsilon", self.epsilon)?;
        decreasing("params.epsilon_list", &self.epsilon_list)?;
        positive("params.mu", self.mu)?;
        for m in &self.mu_list {
            positive("params.mu_list", *m)?;
        }
        positive("params.order_epsilon", self.order_epsilon)?;
        positive("grid.length", self.length)?;
        if self.n < 8 || !self.n.is_power_of_two() {
            return Err(Error::config("grid.n", format!("must be a power of two >= 8, got {}", self.n)));
        }
        if self.n_z < 8 {
            return Err(Error::config("grid.n_z", format!("must be at least 8, got {}", self.n_z)));
        }
        positive("solver.dt", self.dt)?;
        decreasing("solver.dt_list", &self.dt_list)?;
        positive("solver.T", self.t_final)?;
        if self.dn_mode == DnMode::Flat {
            return Err(Error::config("solver.dn_mode", "flat mode drops the nonlinear DN correction; use elliptic or expansion1"));
        }
        if self.energy_order > 5 {
            return Err(Error::config("solver.N", format!("must be at most 5, got {}", self.energy_order)));
        }
        if !(self.amplitude >= 0.0 && self.amplitude.is_finite()) {
            return Err(Error::config("data.amplitude", format!("must be >= 0, got {}", self.amplitude)));
        }
        Ok(())
    }
}

struct Defaults {
    epsilon: f64,
    epsilon_list: &'static [f64],
    mu: f64,
    mu_list: &'static [f64],
    order_epsilon: f64,
    length: f64,
    n: usize,
    n_z: usize,
    dt: f64,
    dt_list: &'static [f64],
    t_final: f64,
    family: DataFamily,
}

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

fn defaults(e: Experiment) -> Defaults {
    let base = Defaults {
        epsilon: 0.1,
        epsilon_list: &[0.2, 0.1, 0.05, 0.025],
        mu: 0.5,
        mu_list: &[0.5],
        order_epsilon: 0.7,
        length: TWO_PI,
        n: 64,
        n_z: 32,
        dt: 1e-3,
        dt_list: &[0.01, 0.005, 0.0025, 0.00125],
        t_final: 1.0,
        family: DataFamily::Cosine,
    };
    match e {
        Experiment::Propagator => base,
        Experiment::LinearHamiltonian => Defaults { length: 100.0, n: 1024, t_final: 10.0, family: DataFamily::Gaussian, ..base },
        Experiment::LinearLimit => Defaults {
            epsilon_list: &[0.1, 0.01, 0.001],
            mu: 1.0,
            length: 200.0,
            n: 4096,
            family: DataFamily::Gaussian,
            ..base
        },
        Experiment::WeakDecay => Defaults {
            epsilon_list: &[0.1, 0.05, 0.02, 0.01],
            mu: 1.0,
            length: 200.0,
            n: 4096,
            family: DataFamily::Gaussian,
            ..base
        },
        Experiment::Dispersion => Defaults {
            mu_list: &[0.25, 1.0],
            length: 512.0,
            n: 4096,
            t_final: 100.0,
            family: DataFamily::Gaussian,
            ..base
        },
        Experiment::DnFidelity => Defaults { epsilon: 1.0, n: 32, n_z: 64, ..base },
        Experiment::DnExpansion => Defaults { epsilon_list: &[0.1, 0.03, 0.01, 0.003, 0.001], n_z: 64, ..base },
        Experiment::ShapeDerivative => Defaults { epsilon: 0.2, n_z: 64, ..base },
        Experiment::LinVsNonlin | Experiment::RigidLidScaling => {
            Defaults { length: 128.0, n: 1024, dt: 0.01, family: DataFamily::Gaussian, ..base }
        }
        Experiment::Conservation => base,
        Experiment::Extension => Defaults { n: 16, ..base },
        Experiment::NullCheck => Defaults { n: 32, n_z: 16, ..base },
        Experiment::Reconstruct => Defaults { dt: 0.01, ..base },
    }
}
