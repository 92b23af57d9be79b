use proptest::prelude::*;
use spectral_core::*;

fn band_limited(grid: &SpectralGrid, coeffs: &[(f64, f64)], zero_mean: bool) -> Vec<f64> {
    let l = grid.length();
    grid.nodes()
        .iter()
        .map(|&x| {
            let mut v = 0.0;
            for (j, (a, b)) in coeffs.iter().enumerate() {
                let k = 2.0 * std::f64::consts::PI * j as f64 / l;
                if j == 0 {
                    if !zero_mean {
                        v += a;
                    }
                } else {
                    v += a * (k * x).cos() + b * (k * x).sin();
                }
            }
            v
        })
        .collect()
}

fn coeffs() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 2..20)
}

fn symbols() -> impl Strategy<Value = MultiplierSymbol> {
    prop_oneof![
        (-2.0..2.0f64).prop_map(MultiplierSymbol::LambdaS),
        Just(MultiplierSymbol::FracP),
        Just(MultiplierSymbol::Omega),
        Just(MultiplierSymbol::G0),
        Just(MultiplierSymbol::AbsD),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn round_trip_is_identity(v in prop::collection::vec(-10.0..10.0f64, 64)) {
        let g = make_grid(7.0, 64).unwrap();
        let back = g.inverse(&g.forward(&v));
        let scale = v.iter().fold(1e-300f64, |m, x| m.max(x.abs()));
        for (a, b) in v.iter().zip(&back) {
            prop_assert!((a - b).abs() <= 1e-13 * scale);
        }
    }

    #[test]
    fn spectrum_round_trip(re in prop::collection::vec(-1.0..1.0f64, 32), im in prop::collection::vec(-1.0..1.0f64, 32)) {
        let g = make_grid(3.0, 32).unwrap();
        let c: Vec<Complex64> = re.iter().zip(&im).map(|(&a, &b)| Complex64::new(a, b)).collect();
        let mut back = g.inverse_complex(&c);
        g.forward_in_place(&mut back);
        for (a, b) in c.iter().zip(&back) {
            prop_assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn multipliers_are_self_adjoint(s in symbols(), a in coeffs(), b in coeffs(), mu in 0.01..1.0f64) {
        let g = make_grid(20.0, 128).unwrap();
        let f = band_limited(&g, &a, false);
        let h = band_limited(&g, &b, false);
        let af = apply_multiplier(&f, &s, &g, mu).unwrap();
        let ah = apply_multiplier(&h, &s, &g, mu).unwrap();
        let lhs = inner(&af, &h, &g);
        let rhs = inner(&f, &ah, &g);
        let scale = l2_norm(&af, &g) * l2_norm(&h, &g) + l2_norm(&f, &g) * l2_norm(&ah, &g);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * scale.max(1e-300));
    }

    #[test]
    fn g0_is_nonnegative(a in coeffs(), mu in 0.01..1.0f64) {
        let g = make_grid(20.0, 128).unwrap();
        let f = band_limited(&g, &a, false);
        let gf = apply_multiplier(&f, &MultiplierSymbol::G0, &g, mu).unwrap();
        prop_assert!(inner(&gf, &f, &g) >= -1e-13 * l2_norm(&f, &g).powi(2));
    }

    // Per mode the ratio is tanh(s)(1+s)/s with s = √μ|ξ|, which sweeps [1, 1.529].
    #[test]
    fn frac_p_equivalence(a in coeffs(), mu in 0.01..1.0f64) {
        let g = make_grid(20.0, 128).unwrap();
        let f = band_limited(&g, &a, true);
        let gf = apply_multiplier(&f, &MultiplierSymbol::G0, &g, mu).unwrap();
        let pf = apply_multiplier(&f, &MultiplierSymbol::FracP, &g, mu).unwrap();
        let ratio = inner(&gf, &f, &g) / mu / l2_norm(&pf, &g).powi(2);
        prop_assert!((1.0..=1.55).contains(&ratio), "ratio {}", ratio);
    }

    #[test]
    fn omega_squared_is_g0_over_mu(xi in -200.0..200.0f64, mu in 1e-4..1.0f64) {
        let w = omega_scalar(xi, mu);
        let lhs = w * w;
        let rhs = g0_symbol(xi, mu) / mu;
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1e-300));
    }

    #[test]
    fn omega_operator_squared(a in coeffs(), mu in 0.01..1.0f64) {
        let g = make_grid(20.0, 128).unwrap();
        let f = band_limited(&g, &a, false);
        let w = apply_multiplier(&f, &MultiplierSymbol::Omega, &g, mu).unwrap();
        let ww = apply_multiplier(&w, &MultiplierSymbol::Omega, &g, mu).unwrap();
        let g0 = apply_multiplier(&f, &MultiplierSymbol::G0, &g, mu).unwrap();
        let scale = sup_norm(&g0).max(1e-300);
        for (x, y) in ww.iter().zip(&g0) {
            prop_assert!((x - y / mu).abs() <= 1e-12 * scale / mu);
        }
    }
}

#[test]
fn frac_p_ratio_range_by_scalar_sweep() {
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for i in 1..200_000 {
        let s = 1e-4 * i as f64;
        let r = s.tanh() * (1.0 + s) / s;
        lo = lo.min(r);
        hi = hi.max(r);
    }
    assert!(lo >= 1.0 - 1e-9 && hi < 1.53, "{lo} {hi}");
}
