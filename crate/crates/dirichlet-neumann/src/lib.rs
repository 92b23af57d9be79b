//! Dirichlet–Neumann operator G[εζ]ψ on the flattened strip, its first-order
//! expansion and shape derivative, trace velocities, and the rigid-lid null
//! problem.

mod fd;
mod gmres;
mod ops;
mod solver;
mod strip;

pub use fd::{fornberg_weights, Stencil};
pub use gmres::{gmres, GmresOutcome};
pub use ops::{
    dn_apply, dn_shape_derivative, expansion_g1, rigid_lid_null_check, solve_potential, trace_velocities_from_g,
    trace_velocities, DnMode,
};
pub use solver::{DnSolver, Potential, StripCoefficients};
pub use strip::StripField;
