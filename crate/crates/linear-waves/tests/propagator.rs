use std::f64::consts::PI;

use linear_waves::*;
use proptest::prelude::*;
use spectral_core::*;

fn params(eps: f64, mu: f64) -> PhysicalParams {
    PhysicalParams::new(eps, mu).unwrap()
}

fn random_state(grid: &SpectralGrid, a: &[(f64, f64, f64, f64)]) -> SurfaceState {
    let l = grid.length();
    let mut z = vec![0.0; grid.len()];
    let mut p = vec![0.0; grid.len()];
    for (j, (za, zb, pa, pb)) in a.iter().enumerate() {
        let k = 2.0 * PI * j as f64 / l;
        for (i, &x) in grid.nodes().iter().enumerate() {
            z[i] += za * (k * x).cos() + zb * (k * x).sin();
            p[i] += pa * (k * x).cos() + pb * (k * x).sin();
        }
    }
    SurfaceState::new(z, p).unwrap()
}

fn rel_diff(a: &SurfaceState, b: &SurfaceState) -> f64 {
    a.max_abs_diff(b) / b.max_abs().max(1e-300)
}

#[test]
fn single_mode_matches_closed_form() {
    let g = make_grid(2.0 * PI, 64).unwrap();
    for (k, mu, eps, t) in [(1.0, 1.0, 0.1, 1.0), (3.0, 0.25, 0.05, 0.7), (5.0, 0.8, 1.0, 3.3)] {
        let z0: Vec<f64> = g.nodes().iter().map(|x| (k * x).cos()).collect();
        let s0 = SurfaceState::new(z0, vec![0.0; 64]).unwrap();
        let s = propagate_linear(&s0, t, &params(eps, mu), &g).unwrap();
        let w = omega_scalar(k, mu);
        let tau = t / eps;
        for (i, &x) in g.nodes().iter().enumerate() {
            let ez = (k * x).cos() * (w * tau).cos();
            let ep = -(k * x).cos() * (w * tau).sin() / w;
            assert!((s.zeta[i] - ez).abs() < 1e-13, "zeta {k} {i}");
            assert!((s.psi[i] - ep).abs() < 1e-13, "psi {k} {i}");
        }
    }
}

#[test]
fn zero_time_is_identity() {
    let g = make_grid(10.0, 64).unwrap();
    let s0 = random_state(&g, &[(0.3, 0.0, 1.0, 0.2), (0.1, -0.4, 0.5, 0.5), (0.2, 0.2, -0.3, 0.1)]);
    let s = propagate_linear(&s0, 0.0, &params(0.1, 0.5), &g).unwrap();
    assert!(rel_diff(&s, &s0) < 1e-15);
}

#[test]
fn zero_mode_drifts_linearly() {
    let g = make_grid(10.0, 32).unwrap();
    let (a, b) = (0.7, -0.2);
    let s0 = SurfaceState::new(vec![a; 32], vec![b; 32]).unwrap();
    let (t, eps) = (2.5, 0.1);
    let s = propagate_linear(&s0, t, &params(eps, 0.5), &g).unwrap();
    for i in 0..32 {
        assert!((s.zeta[i] - a).abs() < 1e-14);
        assert!((s.psi[i] - (b - t / eps * a)).abs() < 1e-13);
    }
}

#[test]
fn blocks_are_unimodular() {
    let g = make_grid(30.0, 256).unwrap();
    let p = LinearPropagator::new(&g, 0.3);
    for tau in [0.0, 0.1, 7.0, 123.4] {
        for k in 0..256 {
            let m = p.block(k, tau);
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            assert!((det - 1.0).abs() < 1e-12, "k {k} tau {tau}");
        }
    }
    let id = p.block(17, 0.0);
    assert_eq!(id, [[1.0, 0.0], [0.0, 1.0]]);
}

#[test]
fn hamiltonian_examples() {
    let g = make_grid(2.0 * PI, 64).unwrap();
    assert_eq!(linear_hamiltonian(&SurfaceState::zeros(64), &g, 0.5).unwrap(), 0.0);
    for k in [1.0, 2.0, 7.0] {
        let z: Vec<f64> = g.nodes().iter().map(|x| (k * x).cos()).collect();
        let s = SurfaceState::new(z, vec![0.0; 64]).unwrap();
        let h = linear_hamiltonian(&s, &g, 0.5).unwrap();
        assert!((h - PI / 2.0).abs() < 1e-13);
    }
}

#[test]
fn wave_residual_vanishes() {
    let g = make_grid(2.0 * PI, 64).unwrap();
    let z: Vec<f64> = g.nodes().iter().map(|x| (4.0 * x).cos()).collect();
    let single = SurfaceState::new(z, vec![0.0; 64]).unwrap();
    let r = wave_equation_residual(&single, 0.9, &params(0.1, 0.6), &g).unwrap();
    assert!(r < 1e-13, "{r}");
    let psi_only = SurfaceState::new(vec![0.0; 64], g.nodes().iter().map(|x| x.sin()).collect()).unwrap();
    assert!(wave_equation_residual(&psi_only, 0.3, &params(0.2, 0.6), &g).unwrap() < 1e-13);
    let g = make_grid(20.0, 128).unwrap();
    let s = random_state(&g, &[(0.0, 0.0, 0.0, 0.0), (0.3, 0.1, -0.2, 0.4), (0.5, -0.5, 0.1, 0.9), (0.2, 0.2, 0.3, -0.3)]);
    assert!(wave_equation_residual(&s, 1.7, &params(0.05, 0.3), &g).unwrap() < 1e-10);
}

fn modes() -> impl Strategy<Value = Vec<(f64, f64, f64, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64), 1..12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn group_property(a in modes(), t1 in -5.0..5.0f64, t2 in -5.0..5.0f64, mu in 0.05..1.0f64, eps in 0.05..1.0f64) {
        let g = make_grid(20.0, 64).unwrap();
        let s0 = random_state(&g, &a);
        let p = LinearPropagator::new(&g, mu);
        let two = p.propagate(&p.propagate(&s0, t1, eps), t2, eps);
        let one = p.propagate(&s0, t1 + t2, eps);
        prop_assert!(two.max_abs_diff(&one) <= 1e-12 * (1.0 + (t1.abs() + t2.abs()) / eps) * s0.max_abs().max(1e-300));
    }

    #[test]
    fn reversibility(a in modes(), t in -5.0..5.0f64, mu in 0.05..1.0f64, eps in 0.05..1.0f64) {
        let g = make_grid(20.0, 64).unwrap();
        let s0 = random_state(&g, &a);
        let p = LinearPropagator::new(&g, mu);
        let back = p.propagate(&p.propagate(&s0, t, eps), -t, eps);
        prop_assert!(back.max_abs_diff(&s0) <= 1e-12 * (1.0 + t.abs() / eps) * s0.max_abs().max(1e-300));
    }

    #[test]
    fn hamiltonian_is_conserved(a in modes(), t in 0.0..10.0f64, mu in 0.05..1.0f64) {
        let g = make_grid(20.0, 64).unwrap();
        let s0 = random_state(&g, &a);
        let p = LinearPropagator::new(&g, mu);
        let h0 = linear_hamiltonian(&s0, &g, mu).unwrap();
        let h1 = linear_hamiltonian(&p.propagate(&s0, t, 0.1), &g, mu).unwrap();
        prop_assert!((h1 - h0).abs() <= 1e-12 * h0.max(1e-300));
    }

    #[test]
    fn commutes_with_multipliers(a in modes(), t in 0.0..3.0f64, s in -1.0..1.0f64, which in 0usize..5) {
        let mu = 0.4;
        let g = make_grid(20.0, 64).unwrap();
        let sym = [MultiplierSymbol::LambdaS(s), MultiplierSymbol::FracP, MultiplierSymbol::Omega, MultiplierSymbol::G0, MultiplierSymbol::AbsD][which].clone();
        let s0 = random_state(&g, &a);
        let p = LinearPropagator::new(&g, mu);
        let apply = |st: &SurfaceState| SurfaceState {
            zeta: apply_multiplier(&st.zeta, &sym, &g, mu).unwrap(),
            psi: apply_multiplier(&st.psi, &sym, &g, mu).unwrap(),
        };
        let lhs = p.propagate(&apply(&s0), t, 0.2);
        let rhs = apply(&p.propagate(&s0, t, 0.2));
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-11 * (1.0 + rhs.max_abs()));
    }
}
