use spectral_core::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GmresOutcome {
    pub iterations: usize,
    pub residual: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Restarted GMRES with right preconditioning: solves A x = b through
/// A M⁻¹ y = b, x = M⁻¹ y. Stops when ‖b − A x‖₂ ≤ `atol`.
pub fn gmres<A, M>(
    apply_a: A,
    apply_m: M,
    b: &[f64],
    x0: Option<Vec<f64>>,
    restart: usize,
    atol: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, GmresOutcome)>
where
    A: Fn(&[f64]) -> Vec<f64>,
    M: Fn(&[f64]) -> Vec<f64>,
{
    let n = b.len();
    let mut x = x0.unwrap_or_else(|| vec![0.0; n]);
    let mut iterations = 0;
    loop {
        let ax = apply_a(&x);
        let r: Vec<f64> = b.iter().zip(&ax).map(|(b, a)| b - a).collect();
        let beta = norm(&r);
        if beta <= atol {
            return Ok((x, GmresOutcome { iterations, residual: beta }));
        }
        if iterations >= max_iter {
            return Err(Error::Solver(format!(
                "GMRES stalled after {iterations} iterations, residual {beta:.3e} > {atol:.3e}"
            )));
        }
        let mut v: Vec<Vec<f64>> = vec![r.iter().map(|x| x / beta).collect()];
        let mut h = vec![vec![0.0; restart]; restart + 1];
        let (mut cs, mut sn) = (vec![0.0; restart], vec![0.0; restart]);
        let mut g = vec![0.0; restart + 1];
        g[0] = beta;
        let mut k = 0;
        while k < restart && iterations < max_iter {
            let mut w = apply_a(&apply_m(&v[k]));
            for (i, vi) in v.iter().enumerate() {
                let hij = dot(&w, vi);
                h[i][k] = hij;
                w.iter_mut().zip(vi).for_each(|(w, v)| *w -= hij * v);
            }
            let hn = norm(&w);
            h[k + 1][k] = hn;
            for i in 0..k {
                let t = cs[i] * h[i][k] + sn[i] * h[i + 1][k];
                h[i + 1][k] = -sn[i] * h[i][k] + cs[i] * h[i + 1][k];
                h[i][k] = t;
            }
            let d = h[k][k].hypot(h[k + 1][k]);
            cs[k] = h[k][k] / d;
            sn[k] = h[k + 1][k] / d;
            h[k][k] = d;
            h[k + 1][k] = 0.0;
            g[k + 1] = -sn[k] * g[k];
            g[k] *= cs[k];
            iterations += 1;
            k += 1;
            if g[k].abs() <= atol || hn == 0.0 {
                break;
            }
            v.push(w.iter().map(|x| x / hn).collect());
        }
        let mut y = vec![0.0; k];
        for i in (0..k).rev() {
            let s: f64 = (i + 1..k).map(|j| h[i][j] * y[j]).sum();
            y[i] = (g[i] - s) / h[i][i];
        }
        let mut u = vec![0.0; n];
        for (yi, vi) in y.iter().zip(&v) {
            u.iter_mut().zip(vi).for_each(|(u, v)| *u += yi * v);
        }
        let du = apply_m(&u);
        x.iter_mut().zip(&du).for_each(|(x, d)| *x += d);
    }
}
