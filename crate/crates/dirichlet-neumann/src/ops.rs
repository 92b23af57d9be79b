use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use spectral_core::{
    apply_multiplier, Complex64, Error, MultiplierSymbol, PhysicalParams, Result, SpectralGrid,
};

use crate::{fd::vertical_stencils, gmres, DnSolver, StripField};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DnMode {
    /// G₀ψ plus the strip-solve correction G_h(εζ)ψ − G_h(0)ψ.
    Elliptic,
    /// G₀ψ + εG₁ψ.
    Expansion1,
    /// G₀ψ.
    Flat,
}

impl FromStr for DnMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "elliptic" => Ok(DnMode::Elliptic),
            "expansion1" => Ok(DnMode::Expansion1),
            "flat" => Ok(DnMode::Flat),
            other => Err(Error::config(
                "dn_mode",
                format!("unknown mode {other:?}; expected elliptic, expansion1 or flat"),
            )),
        }
    }
}

/// Potential on the flattened strip (levels −1..=0, n_z + 1 of them).
pub fn solve_potential(
    grid: &SpectralGrid,
    zeta: &[f64],
    psi: &[f64],
    params: &PhysicalParams,
    nz: usize,
) -> Result<StripField> {
    Ok(DnSolver::new(grid, params.mu, nz)?.solve(zeta, psi, params)?.phi)
}

fn g0(grid: &SpectralGrid, f: &[f64], mu: f64) -> Result<Vec<f64>> {
    apply_multiplier(f, &MultiplierSymbol::G0, grid, mu)
}

/// G₁ψ = −G₀(ζG₀ψ) − μ∂ₓ(ζ∂ₓψ).
pub fn expansion_g1(grid: &SpectralGrid, zeta: &[f64], psi: &[f64], mu: f64) -> Result<Vec<f64>> {
    grid.check_len(zeta.len())?;
    let g0psi = g0(grid, psi, mu)?;
    let prod: Vec<f64> = zeta.iter().zip(&g0psi).map(|(z, g)| z * g).collect();
    let a = g0(grid, &prod, mu)?;
    let px = grid.derivative(psi, 1);
    let flux: Vec<f64> = zeta.iter().zip(&px).map(|(z, p)| z * p).collect();
    let b = grid.derivative(&flux, 1);
    Ok(a.iter().zip(&b).map(|(a, b)| -a - mu * b).collect())
}

pub fn dn_apply(
    solver: &DnSolver,
    zeta: &[f64],
    psi: &[f64],
    params: &PhysicalParams,
    mode: DnMode,
) -> Result<Vec<f64>> {
    let grid = solver.grid();
    grid.check_len(zeta.len())?;
    let base = g0(grid, psi, params.mu)?;
    match mode {
        DnMode::Flat => Ok(base),
        DnMode::Expansion1 => {
            let g1 = expansion_g1(grid, zeta, psi, params.mu)?;
            Ok(base.iter().zip(&g1).map(|(g, h)| g + params.epsilon * h).collect())
        }
        DnMode::Elliptic => {
            let pot = solver.solve(zeta, psi, params)?;
            Ok(base.iter().zip(&pot.delta_g).map(|(g, d)| g + d).collect())
        }
    }
}

/// (w̲, V̲) from an already evaluated Gψ:
/// w̲ = (Gψ + εμζₓψₓ)/(1 + ε²μζₓ²), V̲ = ψₓ − εw̲ζₓ.
pub fn trace_velocities_from_g(
    grid: &SpectralGrid,
    zeta: &[f64],
    psi: &[f64],
    g: &[f64],
    params: &PhysicalParams,
) -> (Vec<f64>, Vec<f64>) {
    let (eps, mu) = (params.epsilon, params.mu);
    let zx = grid.derivative(zeta, 1);
    let px = grid.derivative(psi, 1);
    let w: Vec<f64> = (0..zeta.len())
        .map(|i| (g[i] + eps * mu * zx[i] * px[i]) / (1.0 + eps * eps * mu * zx[i] * zx[i]))
        .collect();
    let v = (0..zeta.len()).map(|i| px[i] - eps * w[i] * zx[i]).collect();
    (w, v)
}

pub fn trace_velocities(
    solver: &DnSolver,
    zeta: &[f64],
    psi: &[f64],
    params: &PhysicalParams,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let g = dn_apply(solver, zeta, psi, params, DnMode::Elliptic)?;
    Ok(trace_velocities_from_g(solver.grid(), zeta, psi, &g, params))
}

/// dG(h)ψ = −εG(h w̲) − εμ∂ₓ(h V̲), the derivative of ζ ↦ G[εζ]ψ along h.
pub fn dn_shape_derivative(
    solver: &DnSolver,
    zeta: &[f64],
    psi: &[f64],
    h: &[f64],
    params: &PhysicalParams,
) -> Result<Vec<f64>> {
    let grid = solver.grid();
    grid.check_len(h.len())?;
    let (w, v) = trace_velocities(solver, zeta, psi, params)?;
    let hw: Vec<f64> = h.iter().zip(&w).map(|(a, b)| a * b).collect();
    let ghw = dn_apply(solver, zeta, &hw, params, DnMode::Elliptic)?;
    let hv: Vec<f64> = h.iter().zip(&v).map(|(a, b)| a * b).collect();
    let dhv = grid.derivative(&hv, 1);
    let (eps, mu) = (params.epsilon, params.mu);
    Ok(ghw.iter().zip(&dhv).map(|(g, d)| -eps * g - eps * mu * d).collect())
}

/// Laplace problem on the flat strip with homogeneous Neumann data at both
/// z = 0 and z = −1, solved by GMRES from `initial` (zero if absent).
/// Returns ‖∇^μφ‖₂ of the converged iterate, relative to that of the
/// initial guess when the guess is nonzero.
pub fn rigid_lid_null_check(
    grid: &SpectralGrid,
    mu: f64,
    nz: usize,
    initial: Option<&StripField>,
) -> Result<f64> {
    if nz < 8 {
        return Err(Error::config("n_z", format!("must be at least 8, got {nz}")));
    }
    let nx = grid.len();
    let nl = nz + 1;
    let dz = 1.0 / nz as f64;
    let (d1, d2) = vertical_stencils(nz, dz);
    let x0 = match initial {
        Some(f) => {
            if f.nx != nx || f.nlev != nl {
                return Err(Error::Shape { expected: nx * nl, got: f.values.len() });
            }
            f.values.clone()
        }
        None => vec![0.0; nx * nl],
    };
    let apply = |v: &[f64]| -> Vec<f64> {
        let mut out = vec![0.0; nx * nl];
        for j in 0..nl {
            let lev = &v[j * nx..(j + 1) * nx];
            let xx = grid.derivative(lev, 2);
            for i in 0..nx {
                let col = |l: usize| v[l * nx + i];
                out[j * nx + i] = if j == 0 || j == nz {
                    d1[j].apply(col)
                } else {
                    d2[j].apply(col) + mu * xx[i]
                };
            }
        }
        out
    };
    // preconditioner: per-mode direct solve, the k = 0 block pinned at the bottom
    let lus: Vec<_> = (0..=nx / 2)
        .map(|m| {
            let xi = grid.wavenumbers()[m].abs();
            let mut a = DMatrix::<f64>::zeros(nl, nl);
            for c in 0..nl {
                a[(0, c)] = d1[0].weight(c);
                a[(nz, c)] = d1[nz].weight(c);
            }
            for j in 1..nz {
                for c in 0..nl {
                    a[(j, c)] = d2[j].weight(c);
                }
                a[(j, j)] -= mu * xi * xi;
            }
            if m == 0 {
                a.row_mut(0).fill(0.0);
                a[(0, 0)] = 1.0;
            }
            a.lu()
        })
        .collect();
    let precond = |r: &[f64]| -> Vec<f64> {
        let spectra: Vec<Vec<Complex64>> = r.chunks(nx).map(|l| grid.forward(l)).collect();
        let mut sol = vec![vec![Complex64::new(0.0, 0.0); nx]; nl];
        for k in 0..nx {
            let lu = &lus[grid.mode(k).unsigned_abs() as usize];
            let re = DVector::from_iterator(nl, (0..nl).map(|j| spectra[j][k].re));
            let im = DVector::from_iterator(nl, (0..nl).map(|j| spectra[j][k].im));
            let sr = lu.solve(&re).expect("pinned Neumann block is nonsingular");
            let si = lu.solve(&im).expect("pinned Neumann block is nonsingular");
            for j in 0..nl {
                sol[j][k] = Complex64::new(sr[j], si[j]);
            }
        }
        sol.iter().flat_map(|c| grid.inverse(c)).collect()
    };
    let grad_norm = |v: &[f64]| -> f64 {
        let f = StripField { nx, z0: -1.0, dz, nlev: nl, values: v.to_vec(), breaks: vec![] };
        let mut sq = 0.0;
        for j in 0..nl {
            let fx = grid.derivative(f.level(j), 1);
            let w = if j == 0 || j == nz { 0.5 } else { 1.0 };
            for i in 0..nx {
                let fz = d1[j].apply(|l| f.at(i, l));
                sq += w * dz * grid.dx() * (mu * fx[i] * fx[i] + fz * fz);
            }
        }
        sq.sqrt()
    };
    let g0n = grad_norm(&x0);
    if g0n == 0.0 {
        return Ok(0.0);
    }
    let r0 = apply(&x0).iter().map(|v| v * v).sum::<f64>().sqrt();
    let b = vec![0.0; nx * nl];
    let (x, _) = gmres(apply, precond, &b, Some(x0), 30, 1e-11 * r0, 300)?;
    Ok(grad_norm(&x) / g0n)
}
