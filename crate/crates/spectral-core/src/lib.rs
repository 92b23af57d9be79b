//! Periodic spectral grid, Fourier multipliers and norms shared by the
//! water-wave lab.

mod error;
mod grid;
mod norms;
mod params;
mod state;
mod symbols;

pub use error::{Error, Result};
pub use grid::{make_grid, SpectralGrid};
pub use norms::{hs_norm, inner, l2_norm, sup_norm, weighted_norm};
pub use params::PhysicalParams;
pub use state::SurfaceState;
pub use symbols::{apply_multiplier, frac_p, g0_symbol, lambda_s, omega_scalar, MultiplierSymbol};

pub use num_complex::Complex64;
