//! Time integration of the water-waves system in the rigid-lid scaling
//!
//! ```text
//! ∂ₜζ = G[εζ]ψ/(εμ)
//! ∂ₜψ = −ζ/ε − ½ψₓ² + (G[εζ]ψ + εμζₓψₓ)²/(2μ(1 + ε²μζₓ²))
//! ```
//!
//! written as ∂ₜu = −ε⁻¹Lu + F(u) and advanced with an integrating-factor
//! RK4 scheme built on the exact linear propagator.

mod checkpoint;
mod config;
mod diagnostics;
mod experiment;
mod model;
mod simulate;
mod step;

pub use checkpoint::{dump_checkpoint, restore_checkpoint, CheckpointHeader};
pub use config::SolverConfig;
pub use diagnostics::{
    energy_en, energy_en_with_time, good_unknowns, hamiltonian, hamiltonian_printed,
    rayleigh_taylor, GoodUnknowns, T0_SLOT,
};
pub use experiment::lin_vs_nonlin_experiment;
pub use model::{rhs, Tendency, WwModel};
pub use simulate::{simulate, AdmissibilityFlag, Trajectory};
pub use step::if_rk4_step;
