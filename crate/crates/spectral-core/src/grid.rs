use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::{Error, Result};

/// Periodic grid on [−L/2, L/2) with n nodes.
///
/// Coefficient arrays are kept in FFT order: index k holds the mode k for
/// k < n/2 and k − n otherwise, so index n/2 is the single Nyquist mode
/// −n/2. The forward transform carries the 1/n factor.
#[derive(Clone)]
pub struct SpectralGrid {
    length: f64,
    n: usize,
    nodes: Vec<f64>,
    xi: Vec<f64>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for SpectralGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralGrid")
            .field("length", &self.length)
            .field("n", &self.n)
            .finish()
    }
}

impl PartialEq for SpectralGrid {
    fn eq(&self, other: &Self) -> bool {
        self.length == other.length && self.n == other.n
    }
}

pub fn make_grid(domain_length: f64, n: usize) -> Result<SpectralGrid> {
    SpectralGrid::new(domain_length, n)
}

impl SpectralGrid {
    pub fn new(length: f64, n: usize) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::config("domain_length", format!("must be positive, got {length}")));
        }
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::config("n", format!("must be a power of two >= 8, got {n}")));
        }
        let dx = length / n as f64;
        let nodes = (0..n).map(|i| -0.5 * length + i as f64 * dx).collect();
        let xi = (0..n)
            .map(|k| 2.0 * PI * Self::signed(k, n) as f64 / length)
            .collect();
        let mut planner = FftPlanner::new();
        Ok(SpectralGrid {
            length,
            n,
            nodes,
            xi,
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
        })
    }

    fn signed(k: usize, n: usize) -> i64 {
        if k < n / 2 {
            k as i64
        } else {
            k as i64 - n as i64
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dx(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Wavenumbers ξ_k in FFT order.
    pub fn wavenumbers(&self) -> &[f64] {
        &self.xi
    }

    /// Wavenumbers ordered from −n/2 to n/2 − 1.
    pub fn sorted_wavenumbers(&self) -> Vec<f64> {
        let h = self.n / 2;
        self.xi[h..].iter().chain(&self.xi[..h]).copied().collect()
    }

    /// Integer mode number of the coefficient at `index`.
    pub fn mode(&self, index: usize) -> i64 {
        Self::signed(index, self.n)
    }

    pub fn nyquist_index(&self) -> usize {
        self.n / 2
    }

    pub fn check_len(&self, got: usize) -> Result<()> {
        Error::check_len(self.n, got)
    }

    pub fn forward(&self, f: &[f64]) -> Vec<Complex64> {
        assert_eq!(f.len(), self.n, "field length does not match grid");
        let mut buf: Vec<Complex64> = f.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.forward_in_place(&mut buf);
        buf
    }

    pub fn forward_in_place(&self, buf: &mut [Complex64]) {
        self.fwd.process(buf);
        let s = 1.0 / self.n as f64;
        buf.iter_mut().for_each(|c| *c *= s);
    }

    /// Inverse transform of a Hermitian spectrum; the imaginary residue is dropped.
    pub fn inverse(&self, coeffs: &[Complex64]) -> Vec<f64> {
        let mut buf = coeffs.to_vec();
        self.inverse_in_place(&mut buf);
        buf.into_iter().map(|c| c.re).collect()
    }

    pub fn inverse_complex(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        let mut buf = coeffs.to_vec();
        self.inverse_in_place(&mut buf);
        buf
    }

    pub fn inverse_in_place(&self, buf: &mut [Complex64]) {
        assert_eq!(buf.len(), self.n, "spectrum length does not match grid");
        self.inv.process(buf);
    }

    /// Multiplies a spectrum by (iξ)^order; the Nyquist mode is zeroed for odd orders.
    pub fn differentiate_spectrum(&self, coeffs: &mut [Complex64], order: u32) {
        if order == 0 {
            return;
        }
        let i_pow = Complex64::i().powu(order);
        for (c, &xi) in coeffs.iter_mut().zip(&self.xi) {
            *c *= i_pow * xi.powi(order as i32);
        }
        if order % 2 == 1 {
            coeffs[self.n / 2] = Complex64::new(0.0, 0.0);
        }
    }

    pub fn derivative(&self, f: &[f64], order: u32) -> Vec<f64> {
        let mut c = self.forward(f);
        self.differentiate_spectrum(&mut c, order);
        self.inverse(&c)
    }

    /// Zeroes every mode with |k| > n/3 (two-thirds rule).
    pub fn dealias(&self, coeffs: &mut [Complex64]) {
        let cut = (self.n / 3) as i64;
        for (k, c) in coeffs.iter_mut().enumerate() {
            if self.mode(k).abs() > cut {
                *c = Complex64::new(0.0, 0.0);
            }
        }
    }

    pub fn dealiased(&self, f: &[f64]) -> Vec<f64> {
        let mut c = self.forward(f);
        self.dealias(&mut c);
        self.inverse(&c)
    }

    /// Largest |ξ| whose coefficient exceeds `rel` times the largest coefficient.
    pub fn spectral_extent(&self, coeffs: &[Complex64], rel: f64) -> f64 {
        let max = coeffs.iter().fold(0.0_f64, |m, c| m.max(c.norm()));
        if max == 0.0 {
            return 0.0;
        }
        coeffs
            .iter()
            .zip(&self.xi)
            .filter(|(c, _)| c.norm() > rel * max)
            .fold(0.0, |m, (_, xi)| m.max(xi.abs()))
    }
}
