use serde::{Deserialize, Serialize};

use crate::{Error, Result, SpectralGrid};

/// Diagonal Fourier multipliers. Built-in symbols are real and even in ξ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum MultiplierSymbol {
    /// Λ^s = (1 + ξ²)^{s/2}.
    LambdaS(f64),
    /// 𝔓 = |ξ| / (1 + √μ|ξ|)^{1/2}.
    FracP,
    /// ω = (|ξ| tanh(√μ|ξ|) / √μ)^{1/2}.
    Omega,
    /// G₀ = √μ|ξ| tanh(√μ|ξ|).
    G0,
    AbsD,
    /// Tabulated values in FFT order.
    Custom(Vec<f64>),
}

pub fn omega_scalar(xi: f64, mu: f64) -> f64 {
    let a = xi.abs();
    let sm = mu.sqrt();
    (a * (sm * a).tanh() / sm).sqrt()
}

pub fn g0_symbol(xi: f64, mu: f64) -> f64 {
    let a = xi.abs();
    let sm = mu.sqrt();
    sm * a * (sm * a).tanh()
}

pub fn frac_p(xi: f64, mu: f64) -> f64 {
    let a = xi.abs();
    a / (1.0 + mu.sqrt() * a).sqrt()
}

pub fn lambda_s(xi: f64, s: f64) -> f64 {
    (1.0 + xi * xi).powf(0.5 * s)
}

impl MultiplierSymbol {
    /// Symbol value at a single wavenumber. `Custom` has no pointwise value.
    pub fn value(&self, xi: f64, mu: f64) -> Option<f64> {
        match self {
            MultiplierSymbol::LambdaS(s) => Some(lambda_s(xi, *s)),
            MultiplierSymbol::FracP => Some(frac_p(xi, mu)),
            MultiplierSymbol::Omega => Some(omega_scalar(xi, mu)),
            MultiplierSymbol::G0 => Some(g0_symbol(xi, mu)),
            MultiplierSymbol::AbsD => Some(xi.abs()),
            MultiplierSymbol::Custom(_) => None,
        }
    }

    /// Symbol values on the grid wavenumbers, FFT order.
    pub fn on_grid(&self, grid: &SpectralGrid, mu: f64) -> Result<Vec<f64>> {
        match self {
            MultiplierSymbol::Custom(v) => {
                grid.check_len(v.len())?;
                Ok(v.clone())
            }
            _ => Ok(grid
                .wavenumbers()
                .iter()
                .map(|&xi| self.value(xi, mu).unwrap_or(0.0))
                .collect()),
        }
    }
}

pub fn apply_multiplier(
    field: &[f64],
    symbol: &MultiplierSymbol,
    grid: &SpectralGrid,
    mu: f64,
) -> Result<Vec<f64>> {
    grid.check_len(field.len())?;
    if !(mu > 0.0) {
        return Err(Error::config("mu", "must be positive"));
    }
    let sym = symbol.on_grid(grid, mu)?;
    let mut c = grid.forward(field);
    c.iter_mut().zip(&sym).for_each(|(c, s)| *c *= *s);
    Ok(grid.inverse(&c))
}
