use std::f64::consts::PI;

use rayon::prelude::*;
use spectral_core::{
    hs_norm, l2_norm, omega_scalar, weighted_norm, Complex64, Error, MultiplierSymbol, Result,
    SpectralGrid, SurfaceState,
};

use crate::{
    oscillatory_integral, DecayReport, LinearPropagator, OscillatoryOptions, WholeLineSpectrum,
};

fn check_decreasing(name: &str, v: &[f64]) -> Result<()> {
    if v.is_empty() || v.iter().any(|e| !(*e > 0.0)) {
        return Err(Error::config(name, "must be a nonempty list of positive values"));
    }
    if v.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::config(name, "must be strictly decreasing"));
    }
    Ok(())
}

/// Largest resolved |ξ| among the given fields, from their grid spectra.
fn resolved_extent(grid: &SpectralGrid, fields: &[&[f64]]) -> f64 {
    let ext = fields
        .iter()
        .map(|f| grid.spectral_extent(&grid.forward(f), 1e-17))
        .fold(0.0, f64::max);
    let nyq = PI * grid.len() as f64 / grid.length();
    (ext + 2.0 * PI / grid.length()).min(nyq)
}

/// (ζ^ε(t), φ)₂ on the whole line, from the closed-form spectrum
/// ζ̂ = ½(ζ̂₀ − iωψ̂₀)e^{iωτ} + ½(ζ̂₀ + iωψ̂₀)e^{−iωτ}.
pub fn weak_pairing(
    grid: &SpectralGrid,
    state0: &SurfaceState,
    phi: &[f64],
    t: f64,
    epsilon: f64,
    mu: f64,
) -> Result<f64> {
    state0.check_len(grid.len())?;
    grid.check_len(phi.len())?;
    let zs = WholeLineSpectrum::from_samples(grid, &state0.zeta);
    let ps = WholeLineSpectrum::from_samples(grid, &state0.psi);
    let fs = WholeLineSpectrum::from_samples(grid, phi);
    if fs.is_zero() || (zs.is_zero() && ps.is_zero()) {
        return Ok(0.0);
    }
    let xmax = resolved_extent(grid, &[&state0.zeta, &state0.psi]).min(resolved_extent(grid, &[phi]));
    let parts = |xi: f64| {
        let w = omega_scalar(xi, mu);
        let z = zs.eval(xi);
        let p = ps.eval(xi) * Complex64::new(0.0, w);
        (z, p, fs.eval(xi).conj())
    };
    let opts = OscillatoryOptions::default();
    let plus = oscillatory_integral(
        |xi| {
            let (z, p, f) = parts(xi);
            0.5 * (z - p) * f
        },
        (-xmax, xmax),
        t,
        epsilon,
        mu,
        &opts,
    )?;
    let minus = oscillatory_integral(
        |xi| {
            let (z, p, f) = parts(xi);
            (0.5 * (z + p) * f).conj()
        },
        (-xmax, xmax),
        t,
        epsilon,
        mu,
        &opts,
    )?;
    Ok((plus + minus.conj()).re / (2.0 * PI))
}

pub fn weak_pairing_decay(
    grid: &SpectralGrid,
    state0: &SurfaceState,
    phi: &[f64],
    t: f64,
    eps_list: &[f64],
    mu: f64,
) -> Result<DecayReport> {
    check_decreasing("epsilon_list", eps_list)?;
    let pairings = eps_list
        .par_iter()
        .map(|&e| weak_pairing(grid, state0, phi, t, e, mu))
        .collect::<Result<Vec<f64>>>()?;
    let mut rep = DecayReport::new("epsilon", "abs_pairing", "bound");
    let c = pairings[0].abs() / eps_list[0];
    rep.abscissae = eps_list.to_vec();
    rep.measured = pairings.iter().map(|p| p.abs()).collect();
    rep.reference = eps_list.iter().map(|e| c * e).collect();
    rep.push_extra("pairing", pairings);
    rep.fit_slope();
    Ok(rep)
}

/// |ζ^ε(t)|₂² on the whole line against ½(|ζ₀|₂² + |ω(D)ψ₀|₂²).
///
/// The oscillating part (1/2π)Re∫e^{2iωτ}[½(|ζ̂₀|² − ω²|ψ̂₀|²) − iωRe(ζ̂₀ψ̂₀*)]dξ
/// is integrated by quadrature so that long times do not see the periodic
/// images of the cell. The periodic-cell value is reported alongside.
pub fn l2_limit_experiment(
    grid: &SpectralGrid,
    state0: &SurfaceState,
    t: f64,
    eps_list: &[f64],
    mu: f64,
) -> Result<DecayReport> {
    state0.check_len(grid.len())?;
    check_decreasing("epsilon_list", eps_list)?;
    let w_psi = spectral_core::apply_multiplier(&state0.psi, &MultiplierSymbol::Omega, grid, mu)?;
    let reference = 0.5 * (l2_norm(&state0.zeta, grid).powi(2) + l2_norm(&w_psi, grid).powi(2));
    let zs = WholeLineSpectrum::from_samples(grid, &state0.zeta);
    let ps = WholeLineSpectrum::from_samples(grid, &state0.psi);
    let xmax = resolved_extent(grid, &[&state0.zeta, &state0.psi]);
    let prop = LinearPropagator::new(grid, mu);
    let rows = eps_list
        .par_iter()
        .map(|&eps| -> Result<(f64, f64)> {
            let osc = if zs.is_zero() && ps.is_zero() {
                0.0
            } else {
                let u = |xi: f64| {
                    let w = omega_scalar(xi, mu);
                    let z = zs.eval(xi);
                    let p = ps.eval(xi);
                    let a = 0.5 * (z.norm_sqr() - w * w * p.norm_sqr());
                    let b = w * (z * p.conj()).re;
                    Complex64::new(a, -b)
                };
                let opts = OscillatoryOptions::default();
                oscillatory_integral(u, (-xmax, xmax), 2.0 * t, eps, mu, &opts)?.re / (2.0 * PI)
            };
            let periodic = l2_norm(&prop.propagate(state0, t, eps).zeta, grid).powi(2);
            Ok((reference + osc, periodic))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rep = DecayReport::new("epsilon", "l2_sq", "reference");
    rep.abscissae = eps_list.to_vec();
    rep.measured = rows.iter().map(|r| r.0).collect();
    rep.reference = vec![reference; eps_list.len()];
    let dev = rep
        .measured
        .iter()
        .map(|m| if reference > 0.0 { (m - reference).abs() / reference } else { m.abs() })
        .collect();
    rep.push_extra("deviation", dev);
    rep.push_extra("l2_sq_periodic", rows.iter().map(|r| r.1).collect());
    Ok(rep)
}

/// μ^{−1/4}(t/√μ)^{−1/8} + (t/√μ)^{−1/2}.
pub fn dispersive_bound_shape(t: f64, mu: f64) -> f64 {
    let s = t / mu.sqrt();
    mu.powf(-0.25) * s.powf(-0.125) + s.powf(-0.5)
}

/// sup|e^{itω(D)}φ| against C·shape(t)·(|φ|_{H¹} + |x∂ₓφ|₂), C fixed at the first time.
pub fn dispersive_decay_experiment(
    grid: &SpectralGrid,
    phi: &[f64],
    mu: f64,
    t_list: &[f64],
) -> Result<DecayReport> {
    grid.check_len(phi.len())?;
    if t_list.is_empty() || t_list[0] < 1.0 || t_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::config("t_list", "must be increasing with t >= 1"));
    }
    let data_norm = hs_norm(phi, grid, 1.0) + weighted_norm(phi, grid)?;
    let ph = grid.forward(phi);
    let omega: Vec<f64> = grid.wavenumbers().iter().map(|&k| omega_scalar(k, mu)).collect();
    let sups: Vec<f64> = t_list
        .par_iter()
        .map(|&t| {
            let c: Vec<Complex64> = ph
                .iter()
                .zip(&omega)
                .map(|(p, w)| p * Complex64::from_polar(1.0, t * w))
                .collect();
            grid.inverse_complex(&c)
                .iter()
                .fold(0.0_f64, |m, v| m.max(v.norm()))
        })
        .collect();
    let shape: Vec<f64> = t_list.iter().map(|&t| dispersive_bound_shape(t, mu)).collect();
    let c = if data_norm > 0.0 { sups[0] / (shape[0] * data_norm) } else { 0.0 };
    let mut rep = DecayReport::new("t", "sup_norm", "bound");
    rep.abscissae = t_list.to_vec();
    rep.reference = shape.iter().map(|s| c * s * data_norm).collect();
    rep.push_extra(
        "envelope",
        sups.iter().zip(t_list).map(|(s, t)| s * t.powf(0.125)).collect(),
    );
    rep.push_extra("bound_shape", shape);
    rep.measured = sups;
    for (i, (m, r)) in rep.measured.iter().zip(&rep.reference).enumerate() {
        if *m > r * (1.0 + 1e-12) {
            rep.flags.push(format!("bound exceeded at t = {}", t_list[i]));
        }
    }
    rep.fit_slope();
    Ok(rep)
}
