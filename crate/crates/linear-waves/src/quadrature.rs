use std::f64::consts::PI;

use rayon::prelude::*;
use spectral_core::{omega_scalar, Complex64, Error, Result};

/// Gauss–Legendre nodes and weights on [−1, 1].
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=m {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

#[derive(Debug, Clone, Copy)]
pub struct OscillatoryOptions {
    /// Upper bound on the difference between successive refinements.
    pub tol: f64,
    /// Relative tolerance against ∫|u|, applied when tighter than `tol`.
    pub rel_tol: f64,
    pub order: usize,
    pub max_nodes: usize,
}

impl Default for OscillatoryOptions {
    fn default() -> Self {
        OscillatoryOptions {
            tol: 1e-8,
            rel_tol: 1e-12,
            order: 20,
            max_nodes: 1 << 23,
        }
    }
}

/// ∫_a^b e^{i(t/ε)ω(ξ)} u(ξ) dξ by composite Gauss–Legendre, doubling the
/// panel count until two successive values agree.
pub fn oscillatory_integral<F>(
    u: F,
    interval: (f64, f64),
    t: f64,
    epsilon: f64,
    mu: f64,
    opts: &OscillatoryOptions,
) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64 + Sync,
{
    let (a, b) = interval;
    if !(t >= 0.0 && epsilon > 0.0 && mu > 0.0) || !(b >= a) {
        return Err(Error::Precondition(format!(
            "oscillatory integral needs t >= 0, epsilon > 0, a <= b (t={t}, eps={epsilon}, [{a}, {b}])"
        )));
    }
    let tau = t / epsilon;
    let pieces: Vec<(f64, f64)> = if a < 0.0 && b > 0.0 {
        vec![(a, 0.0), (0.0, b)]
    } else {
        vec![(a, b)]
    };
    let (gx, gw) = gauss_legendre(opts.order);
    let mut total = Complex64::new(0.0, 0.0);
    for (lo, hi) in pieces {
        if hi <= lo {
            continue;
        }
        let spread = tau * (omega_scalar(hi, mu) - omega_scalar(lo, mu)).abs();
        let mut panels = ((spread / (0.5 * PI)).ceil() as usize).max(2);
        let integrate = |panels: usize| -> (Complex64, f64) {
            let h = (hi - lo) / panels as f64;
            (0..panels)
                .into_par_iter()
                .map(|p| {
                    let mid = lo + (p as f64 + 0.5) * h;
                    let mut acc = Complex64::new(0.0, 0.0);
                    let mut mag = 0.0;
                    for (x, w) in gx.iter().zip(&gw) {
                        let xi = mid + 0.5 * h * x;
                        let v = u(xi);
                        let phase = Complex64::from_polar(1.0, tau * omega_scalar(xi, mu));
                        acc += v * phase * *w;
                        mag += v.norm() * w;
                    }
                    (acc * (0.5 * h), mag * 0.5 * h)
                })
                .reduce(|| (Complex64::new(0.0, 0.0), 0.0), |x, y| (x.0 + y.0, x.1 + y.1))
        };
        let (mut prev, scale) = integrate(panels);
        let tol = opts.tol.min(opts.rel_tol * scale);
        loop {
            panels *= 2;
            if panels * opts.order > opts.max_nodes {
                return Err(Error::Quadrature(format!(
                    "no convergence on [{lo}, {hi}] within {} nodes at t/eps = {tau}",
                    opts.max_nodes
                )));
            }
            let (next, _) = integrate(panels);
            let done = (next - prev).norm() <= tol;
            prev = next;
            if done {
                break;
            }
        }
        total += prev;
    }
    Ok(total)
}
