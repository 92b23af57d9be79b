//! Exact linear water-wave flow and the linear-theory experiments.

mod experiments;
mod propagator;
mod quadrature;
mod report;
mod spectrum;

pub use experiments::{
    dispersive_bound_shape, dispersive_decay_experiment, l2_limit_experiment, weak_pairing,
    weak_pairing_decay,
};
pub use propagator::{linear_hamiltonian, propagate_linear, wave_equation_residual, LinearPropagator};
pub use quadrature::{gauss_legendre, oscillatory_integral, OscillatoryOptions};
pub use report::{loglog_slope, DecayReport};
pub use spectrum::WholeLineSpectrum;
