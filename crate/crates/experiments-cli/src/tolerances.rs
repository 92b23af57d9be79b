//! Pass/fail thresholds of the acceptance experiments, one place only.

/// Single-mode evolution against the closed form, relative.
pub const PROPAGATOR_EXACT: f64 = 1e-13;
/// Group law and reversibility of the linear flow, relative.
pub const PROPAGATOR_GROUP: f64 = 1e-12;
/// Linear Hamiltonian drift over [0, T], relative.
pub const LINEAR_HAMILTONIAN_DRIFT: f64 = 1e-12;
/// | |ζ(1)|² − limit | / limit at the smallest ε.
pub const L2_LIMIT_DEVIATION: f64 = 0.05;
/// Minimum fitted slope of the weak pairing in ε.
pub const WEAK_DECAY_SLOPE: f64 = 0.9;
/// Flat elliptic solve against the G₀ multiplier, relative.
pub const DN_FLAT: f64 = 1e-8;
/// (Gψ₁, ψ₂) − (ψ₁, Gψ₂), relative to the product of norms.
pub const DN_SYMMETRY: f64 = 1e-8;
/// Lower bound for (Gψ, ψ)/|ψ|².
pub const DN_POSITIVITY: f64 = -1e-10;
/// Minimum observed order of the flat solve in n_z.
pub const DN_VERTICAL_ORDER: f64 = 3.8;
/// Slope 2 of the first-order expansion remainder, ± this.
pub const EXPANSION_SLOPE_TOL: f64 = 0.1;
/// Shape derivative against Richardson-extrapolated differences.
pub const SHAPE_DERIVATIVE: f64 = 1e-6;
/// Full-solver Hamiltonian drift over [0, 1] at dt = 1e-3, relative.
pub const NONLINEAR_HAMILTONIAN_DRIFT: f64 = 1e-6;
/// Drift order 4 under dt-halving, ± this.
pub const DRIFT_ORDER_TOL: f64 = 0.3;
/// Rigid-lid slope 2 of |w̲|∞ in ε, ± this.
pub const RIGID_LID_SLOPE_TOL: f64 = 0.3;
/// Vandermonde moment identities.
pub const EXTENSION_MOMENTS: f64 = 1e-10;
/// Trace matching and agreement with the reflection formula.
pub const EXTENSION_TRACE: f64 = 1e-8;
/// Norm ratio change under n_z doubling.
pub const EXTENSION_NORM_STABILITY: f64 = 0.05;
/// ‖∇^μΦ‖₂ of the double-Neumann solve.
pub const NULL_SOLUTION: f64 = 1e-10;
/// Minimum observed order of the Euler residuals under (dt, h) halving.
pub const EULER_ORDER: f64 = 1.8;
/// Residuals at or below this are at the linear-solver floor and carry no order.
pub const EULER_FLOOR: f64 = 1e-9;
/// Values below this are round-off when checking monotone decay.
pub const ROUNDOFF_FLOOR: f64 = 1e-12;
