//! Reconstruction of the velocity and pressure fields below and above the
//! free surface from a water-waves state, and the Euler residuals.

mod diffeo;
mod dump;
mod extension;
mod interp;
mod reconstruct;
mod residuals;
mod scaling;

pub use diffeo::{build_diffeo, StripDiffeo, StripIndices};
pub use dump::{dump_fields, FieldDumpHeader};
pub use extension::{extend_strip, vandermonde_coeffs, ExtensionPlan};
pub use interp::INTERP_POINTS;
pub use reconstruct::{reconstruct_fields, FluidFields, ReconstructionSetup, Snapshot};
pub use residuals::{euler_residuals, ResidualEntry, ResidualReport, Scaling};
pub use scaling::{reconstruct_at, rigid_lid_scaling_experiment};
