use crate::{Error, Result, SpectralGrid};

/// Discrete L² inner product dx·Σ f g.
pub fn inner(f: &[f64], g: &[f64], grid: &SpectralGrid) -> f64 {
    grid.dx() * f.iter().zip(g).map(|(a, b)| a * b).sum::<f64>()
}

pub fn l2_norm(f: &[f64], grid: &SpectralGrid) -> f64 {
    inner(f, f, grid).sqrt()
}

pub fn sup_norm(f: &[f64]) -> f64 {
    f.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// |Λ^s f|₂ evaluated from the spectrum by Parseval.
pub fn hs_norm(f: &[f64], grid: &SpectralGrid, s: f64) -> f64 {
    let c = grid.forward(f);
    let sum: f64 = c
        .iter()
        .zip(grid.wavenumbers())
        .map(|(c, &xi)| c.norm_sqr() * (1.0 + xi * xi).powf(s))
        .sum();
    (grid.length() * sum).sqrt()
}

/// |x ∂ₓ f|₂. The field must be concentrated in the central half of the cell.
pub fn weighted_norm(f: &[f64], grid: &SpectralGrid) -> Result<f64> {
    grid.check_len(f.len())?;
    let quarter = 0.25 * grid.length();
    let (mut outside, mut total) = (0.0, 0.0);
    for (&x, &v) in grid.nodes().iter().zip(f) {
        total += v * v;
        if x.abs() > quarter {
            outside += v * v;
        }
    }
    if total > 0.0 && outside > 1e-8 * total {
        return Err(Error::Precondition(format!(
            "weighted norm needs a localized field; mass fraction outside the central half is {:.3e}",
            outside / total
        )));
    }
    let d = grid.derivative(f, 1);
    let s: f64 = grid
        .nodes()
        .iter()
        .zip(&d)
        .map(|(x, v)| (x * v).powi(2))
        .sum();
    Ok((grid.dx() * s).sqrt())
}
