use dirichlet_neumann::*;
use proptest::prelude::*;
use spectral_core::*;

fn band(g: &SpectralGrid, c: &[(f64, f64)], amp: f64) -> Vec<f64> {
    g.nodes()
        .iter()
        .map(|&x| {
            c.iter()
                .enumerate()
                .map(|(j, (a, b))| {
                    let k = (j + 1) as f64;
                    amp * (a * (k * x).cos() + b * (k * x).sin()) / (k * k)
                })
                .sum()
        })
        .collect()
}

fn coeffs() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..5)
}

fn grid() -> SpectralGrid {
    make_grid(2.0 * std::f64::consts::PI, 32).unwrap()
}

fn scale_to(v: Vec<f64>, target: f64) -> Vec<f64> {
    let m = sup_norm(&v);
    if m == 0.0 { v } else { v.iter().map(|x| x * target / m).collect() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn symmetric(zc in coeffs(), a in coeffs(), b in coeffs(), amp in 0.0..0.3f64, mu in 0.1..1.0f64) {
        let g = grid();
        let zeta = scale_to(band(&g, &zc, 1.0), amp);
        let p1 = band(&g, &a, 1.0);
        let p2 = band(&g, &b, 1.0);
        let params = PhysicalParams::new(1.0, mu).unwrap();
        let s = DnSolver::new(&g, mu, 64).unwrap();
        let g1 = dn_apply(&s, &zeta, &p1, &params, DnMode::Elliptic).unwrap();
        let g2 = dn_apply(&s, &zeta, &p2, &params, DnMode::Elliptic).unwrap();
        let lhs = inner(&g1, &p2, &g);
        let rhs = inner(&p1, &g2, &g);
        let scale = l2_norm(&g1, &g) * l2_norm(&p2, &g) + l2_norm(&p1, &g) * l2_norm(&g2, &g);
        prop_assert!((lhs - rhs).abs() <= 1e-8 * scale.max(1e-300), "{} {}", lhs, rhs);
    }

    #[test]
    fn positive(zc in coeffs(), a in coeffs(), amp in 0.0..0.3f64, mu in 0.1..1.0f64) {
        let g = grid();
        let zeta = scale_to(band(&g, &zc, 1.0), amp);
        let psi = band(&g, &a, 1.0);
        let params = PhysicalParams::new(1.0, mu).unwrap();
        let s = DnSolver::new(&g, mu, 32).unwrap();
        let gp = dn_apply(&s, &zeta, &psi, &params, DnMode::Elliptic).unwrap();
        prop_assert!(inner(&gp, &psi, &g) >= -1e-10);
    }

    // flat bracket [1, 1.55] widened by (1 ± 2|εζ|∞)
    #[test]
    fn frac_p_equivalence_nonflat(zc in coeffs(), a in coeffs(), amp in 0.0..0.3f64, mu in 0.1..1.0f64) {
        let g = grid();
        let zeta = scale_to(band(&g, &zc, 1.0), amp);
        let psi = band(&g, &a, 1.0);
        let params = PhysicalParams::new(1.0, mu).unwrap();
        let s = DnSolver::new(&g, mu, 32).unwrap();
        let gp = dn_apply(&s, &zeta, &psi, &params, DnMode::Elliptic).unwrap();
        let pp = apply_multiplier(&psi, &MultiplierSymbol::FracP, &g, mu).unwrap();
        let ratio = inner(&gp, &psi, &g) / mu / l2_norm(&pp, &g).powi(2);
        let m = sup_norm(&zeta);
        prop_assert!(ratio >= 1.0 - 2.0 * m && ratio <= 1.55 * (1.0 + 2.0 * m), "ratio {} at |εζ| {}", ratio, m);
    }
}

// |Gψ|_{H^{s−1/2}} / |𝔓ψ|_{H^s} for fixed (ζ, μ) does not move under grid refinement.
#[test]
fn mapping_constant_is_grid_stable() {
    let mu = 0.5;
    let params = PhysicalParams::new(0.2, mu).unwrap();
    let s_idx = 1.0;
    let ratio = |nx: usize, nz: usize| {
        let g = make_grid(2.0 * std::f64::consts::PI, nx).unwrap();
        let zeta: Vec<f64> = g.nodes().iter().map(|x| x.cos() + 0.2 * (2.0 * x).sin()).collect();
        let psi: Vec<f64> = g.nodes().iter().map(|x| (3.0 * x).sin() + (x + 0.1).cos()).collect();
        let s = DnSolver::new(&g, mu, nz).unwrap();
        let gp = dn_apply(&s, &zeta, &psi, &params, DnMode::Elliptic).unwrap();
        let pp = apply_multiplier(&psi, &MultiplierSymbol::FracP, &g, mu).unwrap();
        hs_norm(&gp, &g, s_idx - 0.5) / hs_norm(&pp, &g, s_idx)
    };
    let coarse = ratio(32, 32);
    let fine = ratio(64, 64);
    assert!((coarse - fine).abs() <= 1e-3 * fine, "{coarse} {fine}");
}
