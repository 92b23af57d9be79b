use spectral_core::{Complex64, SpectralGrid};

/// Whole-line Fourier transform f̂(ξ) = ∫ f e^{−iξx} dx of a localized grid
/// function, by the trapezoid rule (spectrally accurate for such data).
#[derive(Debug, Clone)]
pub struct WholeLineSpectrum {
    x0: f64,
    dx: f64,
    values: Vec<f64>,
}

const RESEED: usize = 32;

impl WholeLineSpectrum {
    /// Samples below 1e-18 of the peak at either end are trimmed.
    pub fn from_samples(grid: &SpectralGrid, f: &[f64]) -> Self {
        let peak = f.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let keep = |v: &f64| v.abs() > 1e-18 * peak;
        let (first, last) = match (f.iter().position(keep), f.iter().rposition(keep)) {
            (Some(a), Some(b)) => (a, b),
            _ => (0, 0),
        };
        let values = if peak == 0.0 {
            Vec::new()
        } else {
            f[first..=last].to_vec()
        };
        WholeLineSpectrum {
            x0: grid.nodes()[first],
            dx: grid.dx(),
            values,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn eval(&self, xi: f64) -> Complex64 {
        let step = Complex64::from_polar(1.0, -xi * self.dx);
        let mut acc = Complex64::new(0.0, 0.0);
        for (c, chunk) in self.values.chunks(RESEED).enumerate() {
            let x = self.x0 + (c * RESEED) as f64 * self.dx;
            let mut e = Complex64::from_polar(1.0, -xi * x);
            for &v in chunk {
                acc += e * v;
                e *= step;
            }
        }
        acc * self.dx
    }
}
