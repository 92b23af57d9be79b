use nalgebra::{DMatrix, DVector, Dyn, LU};
use rayon::prelude::*;
use spectral_core::{Complex64, Error, PhysicalParams, Result, SpectralGrid};

use crate::{fd::vertical_stencils, gmres, GmresOutcome, Stencil, StripField};

/// Variable coefficients of the transformed Laplacian on the strip
/// (X, z) ∈ ℝ × (−1, 0), for the map Σ(X, z) = (X, (1 + εζ)z + εζ).
///
/// With h = 1 + εζ and a = εζₓ(z + 1) the operator is
/// μhφₓₓ − 2μaφₓ_z − μaₓφ_z + cφ_zz + c_zφ_z, c = (1 + μa²)/h.
#[derive(Debug, Clone)]
pub struct StripCoefficients {
    pub mu: f64,
    /// εζ, εζₓ, εζₓₓ at the grid nodes.
    pub ez: Vec<f64>,
    pub ezx: Vec<f64>,
    pub ezxx: Vec<f64>,
}

impl StripCoefficients {
    pub fn new(grid: &SpectralGrid, zeta: &[f64], params: &PhysicalParams) -> Self {
        let eps = params.epsilon;
        let ez: Vec<f64> = zeta.iter().map(|z| eps * z).collect();
        let mut c = grid.forward(&ez);
        let mut cx = c.clone();
        grid.differentiate_spectrum(&mut cx, 1);
        grid.differentiate_spectrum(&mut c, 2);
        StripCoefficients {
            mu: params.mu,
            ezx: grid.inverse(&cx),
            ezxx: grid.inverse(&c),
            ez,
        }
    }

    pub fn is_flat(&self) -> bool {
        self.ez.iter().all(|v| *v == 0.0)
    }

    pub fn h(&self, i: usize) -> f64 {
        1.0 + self.ez[i]
    }

    pub fn a(&self, i: usize, z: f64) -> f64 {
        self.ezx[i] * (z + 1.0)
    }

    /// c − 1 = (μa² − εζ)/h, formed without cancellation.
    pub fn c_minus_one(&self, i: usize, z: f64) -> f64 {
        let a = self.a(i, z);
        (self.mu * a * a - self.ez[i]) / self.h(i)
    }

    pub fn c_z(&self, i: usize, z: f64) -> f64 {
        2.0 * self.mu * self.a(i, z) * self.ezx[i] / self.h(i)
    }
}

/// Result of a potential solve.
#[derive(Debug, Clone)]
pub struct Potential {
    /// φ on levels z_j = −1 + j/n_z, j = 0..=n_z; the top level is ψ.
    pub phi: StripField,
    /// G_h(0)ψ: the discrete flat-strip Dirichlet–Neumann map.
    pub flat_g: Vec<f64>,
    /// G_h(εζ)ψ − G_h(0)ψ.
    pub delta_g: Vec<f64>,
    pub gmres: GmresOutcome,
}

/// Dirichlet–Neumann solver on n_z + 1 uniform levels, spectral in x.
///
/// The flat operator μ∂ₓ² + ∂_z² is factored once per |k|; it solves the
/// ζ = 0 problem directly and preconditions GMRES otherwise. The nonflat
/// solve is written for the correction δ = φ − φ₀ to the flat solution φ₀,
/// which keeps G(εζ) − G(0) free of cancellation when ε is small.
pub struct DnSolver {
    grid: SpectralGrid,
    mu: f64,
    nz: usize,
    dz: f64,
    d1: Vec<Stencil>,
    d2: Vec<Stencil>,
    flat: Vec<LU<f64, Dyn, Dyn>>,
    top: Vec<f64>,
    pub tol: f64,
    pub restart: usize,
    pub max_iter: usize,
}

impl std::fmt::Debug for DnSolver {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DnSolver")
            .field("grid", &self.grid)
            .field("mu", &self.mu)
            .field("nz", &self.nz)
            .finish()
    }
}

type Levels = Vec<Vec<f64>>;

impl DnSolver {
    pub fn new(grid: &SpectralGrid, mu: f64, nz: usize) -> Result<Self> {
        if nz < 8 {
            return Err(Error::config("n_z", format!("must be at least 8, got {nz}")));
        }
        if !(mu > 0.0) {
            return Err(Error::config("mu", "must be positive"));
        }
        let dz = 1.0 / nz as f64;
        let (d1, d2) = vertical_stencils(nz, dz);
        let top: Vec<f64> = (0..nz)
            .map(|j| if j == 0 { d1[0].weight(nz) } else { d2[j].weight(nz) })
            .collect();
        let nx = grid.len();
        let flat = (0..=nx / 2)
            .into_par_iter()
            .map(|m| {
                let xi = grid.wavenumbers()[m].abs();
                let mut a = DMatrix::<f64>::zeros(nz, nz);
                for c in 0..nz {
                    a[(0, c)] = d1[0].weight(c);
                }
                for j in 1..nz {
                    for c in 0..nz {
                        a[(j, c)] = d2[j].weight(c);
                    }
                    a[(j, j)] -= mu * xi * xi;
                }
                a.lu()
            })
            .collect();
        Ok(DnSolver {
            grid: grid.clone(),
            mu,
            nz,
            dz,
            d1,
            d2,
            flat,
            top,
            tol: 1e-12,
            restart: 40,
            max_iter: 400,
        })
    }

    pub fn grid(&self) -> &SpectralGrid {
        &self.grid
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn nz(&self) -> usize {
        self.nz
    }

    pub fn dz(&self) -> f64 {
        self.dz
    }

    pub fn level_z(&self, j: usize) -> f64 {
        -1.0 + j as f64 * self.dz
    }

    pub fn d1(&self, j: usize) -> &Stencil {
        &self.d1[j]
    }

    fn check_inputs(&self, zeta: &[f64], psi: &[f64], params: &PhysicalParams) -> Result<()> {
        self.grid.check_len(zeta.len())?;
        self.grid.check_len(psi.len())?;
        if (params.mu - self.mu).abs() > 1e-15 * self.mu {
            return Err(Error::Precondition(format!(
                "solver built for mu = {}, called with mu = {}",
                self.mu, params.mu
            )));
        }
        let hmin = zeta.iter().fold(f64::INFINITY, |m, z| m.min(1.0 + params.epsilon * z));
        if hmin < params.h_min {
            return Err(Error::Precondition(format!(
                "water height {hmin:.6} below h_min = {}",
                params.h_min
            )));
        }
        Ok(())
    }

    fn mode_index(&self, k: usize) -> usize {
        self.grid.mode(k).unsigned_abs() as usize
    }

    /// Solves the flat system level-spectrum by level-spectrum. `rhs[j][k]`
    /// is row j (j = 0 the bottom Neumann row) at Fourier index k.
    fn flat_solve_spectral(&self, rhs: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
        let nx = self.grid.len();
        let nz = self.nz;
        let cols: Vec<Vec<Complex64>> = (0..nx)
            .into_par_iter()
            .map(|k| {
                let lu = &self.flat[self.mode_index(k)];
                let re = DVector::from_iterator(nz, (0..nz).map(|j| rhs[j][k].re));
                let im = DVector::from_iterator(nz, (0..nz).map(|j| rhs[j][k].im));
                let sr = lu.solve(&re).expect("flat strip operator is nonsingular");
                let si = lu.solve(&im).expect("flat strip operator is nonsingular");
                (0..nz).map(|j| Complex64::new(sr[j], si[j])).collect()
            })
            .collect();
        (0..nz)
            .map(|j| (0..nx).map(|k| cols[k][j]).collect())
            .collect()
    }

    fn forward_levels(&self, levels: &[Vec<f64>]) -> Vec<Vec<Complex64>> {
        levels.par_iter().map(|l| self.grid.forward(l)).collect()
    }

    fn inverse_levels(&self, spectra: &[Vec<Complex64>]) -> Levels {
        spectra.par_iter().map(|c| self.grid.inverse(c)).collect()
    }

    /// Flat preconditioner on a residual vector (n_z levels, level-major).
    fn precondition(&self, r: &[f64]) -> Vec<f64> {
        let nx = self.grid.len();
        let levels: Levels = r.chunks(nx).map(|c| c.to_vec()).collect();
        let sol = self.flat_solve_spectral(&self.forward_levels(&levels));
        self.inverse_levels(&sol).concat()
    }

    /// Flat Dirichlet solve with surface data ψ: levels 0..=n_z.
    pub fn flat_potential(&self, psi: &[f64]) -> Levels {
        let ph = self.grid.forward(psi);
        let rhs: Vec<Vec<Complex64>> = (0..self.nz)
            .map(|j| ph.iter().map(|p| -p * self.top[j]).collect())
            .collect();
        let mut levels = self.inverse_levels(&self.flat_solve_spectral(&rhs));
        levels.push(psi.to_vec());
        levels
    }

    /// G_h(0)ψ: the discrete conormal derivative of the flat solution.
    pub fn flat_dn(&self, psi: &[f64]) -> Vec<f64> {
        let phi = self.flat_potential(psi);
        self.surface_dz(&phi)
    }

    pub fn surface_dz(&self, levels: &[Vec<f64>]) -> Vec<f64> {
        let st = &self.d1[self.nz];
        (0..self.grid.len())
            .map(|i| st.apply(|l| levels[l][i]))
            .collect()
    }

    fn x_derivatives(&self, levels: &[Vec<f64>]) -> (Levels, Levels) {
        levels
            .par_iter()
            .map(|l| {
                let c = self.grid.forward(l);
                let mut c1 = c.clone();
                let mut c2 = c;
                self.grid.differentiate_spectrum(&mut c1, 1);
                self.grid.differentiate_spectrum(&mut c2, 2);
                (self.grid.inverse(&c1), self.grid.inverse(&c2))
            })
            .unzip()
    }

    fn z_apply(&self, st: &Stencil, levels: &[Vec<f64>], i: usize) -> f64 {
        st.apply(|l| levels[l][i])
    }

    /// Rows of the discrete operator applied to φ given on all levels:
    /// row 0 is the bottom Neumann row, rows 1..n_z the interior equation.
    /// With `full = false` only the variable-coefficient part (A − A₀) is
    /// applied and row 0 vanishes.
    fn apply_rows(&self, coef: &StripCoefficients, levels: &[Vec<f64>], full: bool) -> Vec<f64> {
        let nx = self.grid.len();
        let nz = self.nz;
        let mu = self.mu;
        let (px, pxx) = self.x_derivatives(levels);
        let flat_coef = coef.is_flat();
        let mut out = vec![0.0; nz * nx];
        out.par_chunks_mut(nx).enumerate().for_each(|(j, row)| {
            if j == 0 {
                if full {
                    for (i, r) in row.iter_mut().enumerate() {
                        *r = self.z_apply(&self.d1[0], levels, i);
                    }
                }
                return;
            }
            let z = self.level_z(j);
            for (i, r) in row.iter_mut().enumerate() {
                let fz = self.z_apply(&self.d1[j], levels, i);
                let fzz = self.z_apply(&self.d2[j], levels, i);
                let mut v = 0.0;
                if !flat_coef {
                    let fxz = self.z_apply(&self.d1[j], &px, i);
                    let a = coef.a(i, z);
                    let ax = coef.ezxx[i] * (z + 1.0);
                    v = mu * coef.ez[i] * pxx[j][i] - 2.0 * mu * a * fxz - mu * ax * fz
                        + coef.c_minus_one(i, z) * fzz
                        + coef.c_z(i, z) * fz;
                }
                if full {
                    v += mu * pxx[j][i] + fzz;
                }
                *r = v;
            }
        });
        out
    }

    fn with_surface(&self, interior: &[f64], surface: &[f64]) -> Levels {
        let nx = self.grid.len();
        let mut levels: Levels = interior.chunks(nx).map(|c| c.to_vec()).collect();
        levels.push(surface.to_vec());
        levels
    }

    /// Solves the transformed Laplace problem with φ = ψ at z = 0 and
    /// homogeneous Neumann data at z = −1.
    pub fn solve(&self, zeta: &[f64], psi: &[f64], params: &PhysicalParams) -> Result<Potential> {
        self.check_inputs(zeta, psi, params)?;
        let nx = self.grid.len();
        let nz = self.nz;
        let coef = StripCoefficients::new(&self.grid, zeta, params);
        let phi0 = self.flat_potential(psi);
        let flat_g = self.surface_dz(&phi0);
        let zero_top = vec![0.0; nx];
        let (delta, outcome) = if coef.is_flat() {
            (vec![0.0; nz * nx], GmresOutcome { iterations: 0, residual: 0.0 })
        } else {
            let b: Vec<f64> = self.apply_rows(&coef, &phi0, false).iter().map(|v| -v).collect();
            let bn = b.iter().map(|v| v * v).sum::<f64>().sqrt();
            gmres(
                |d| self.apply_rows(&coef, &self.with_surface(d, &zero_top), true),
                |r| self.precondition(r),
                &b,
                None,
                self.restart,
                self.tol * bn,
                self.max_iter,
            )?
        };
        let delta_levels = self.with_surface(&delta, &zero_top);
        let d_phi0 = &flat_g;
        let d_delta = self.surface_dz(&delta_levels);
        let psi_x = self.grid.derivative(psi, 1);
        let delta_g = (0..nx)
            .map(|i| {
                let c1 = coef.c_minus_one(i, 0.0);
                c1 * d_phi0[i] + (1.0 + c1) * d_delta[i] - self.mu * coef.ezx[i] * psi_x[i]
            })
            .collect();
        let mut phi = StripField::zeros(nx, -1.0, self.dz, nz + 1);
        for j in 0..=nz {
            let lev = phi.level_mut(j);
            for i in 0..nx {
                lev[i] = phi0[j][i] + delta_levels[j][i];
            }
        }
        Ok(Potential {
            phi,
            flat_g: flat_g.clone(),
            delta_g,
            gmres: outcome,
        })
    }

    /// Largest discrete residual of the transformed equation (and bottom
    /// condition) relative to the largest individual term.
    pub fn pde_residual(&self, zeta: &[f64], params: &PhysicalParams, phi: &StripField) -> Result<f64> {
        self.grid.check_len(zeta.len())?;
        let coef = StripCoefficients::new(&self.grid, zeta, params);
        let levels: Levels = (0..=self.nz).map(|j| phi.level(j).to_vec()).collect();
        let rows = self.apply_rows(&coef, &levels, true);
        let (px, pxx) = self.x_derivatives(&levels);
        let mu = self.mu;
        let mut scale: f64 = 0.0;
        for j in 1..self.nz {
            let z = self.level_z(j);
            for i in 0..self.grid.len() {
                let fz = self.z_apply(&self.d1[j], &levels, i).abs();
                let fzz = self.z_apply(&self.d2[j], &levels, i).abs();
                let fxz = self.z_apply(&self.d1[j], &px, i).abs();
                let a = coef.a(i, z).abs();
                let h = coef.h(i);
                let c = 1.0 + coef.c_minus_one(i, z);
                let t = mu * h * pxx[j][i].abs()
                    + 2.0 * mu * a * fxz
                    + mu * (coef.ezxx[i] * (z + 1.0)).abs() * fz
                    + c * fzz
                    + coef.c_z(i, z).abs() * fz;
                scale = scale.max(t);
            }
        }
        let res = rows.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        Ok(if scale > 0.0 { res / scale } else { res })
    }
}
