use std::f64::consts::PI;

use dirichlet_neumann::DnSolver;
use euler_fields::{
    dump_fields, euler_residuals, reconstruct_at, reconstruct_fields, rigid_lid_scaling_experiment, FieldDumpHeader,
    ReconstructionSetup, ResidualReport, Scaling,
};
use spectral_core::{Error, PhysicalParams, SpectralGrid, SurfaceState};
use ww_solver::SolverConfig;

fn wave(n: usize, amp: f64) -> (SpectralGrid, SurfaceState) {
    let g = SpectralGrid::new(2.0 * PI, n).unwrap();
    let x = g.nodes();
    let st = SurfaceState {
        zeta: x.iter().map(|x| amp * x.cos()).collect(),
        psi: x.iter().map(|x| 0.5 * amp * (x + 0.3).sin()).collect(),
    };
    (g, st)
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn config(dt: f64, nz: usize) -> SolverConfig {
    SolverConfig { dt, n_z: nz, ..SolverConfig::default() }
}

fn residuals_at(n: usize, nz: usize, dt: f64, eps: f64) -> ResidualReport {
    let (g, st) = wave(n, 1.0);
    let p = PhysicalParams::new(eps, 0.5).unwrap();
    let f = reconstruct_at(&g, &st, 0.0, &p, &config(dt, nz)).unwrap();
    euler_residuals(&g, &f, Scaling::Original)
}

#[test]
fn rest_state_has_no_motion() {
    let g = SpectralGrid::new(2.0 * PI, 16).unwrap();
    let st = SurfaceState { zeta: vec![0.0; 16], psi: vec![0.0; 16] };
    let f = reconstruct_at(&g, &st, 0.0, &PhysicalParams::new(0.1, 0.5).unwrap(), &config(0.01, 16)).unwrap();
    assert_eq!(sup(&f.v().values), 0.0);
    assert_eq!(sup(&f.w().values), 0.0);
    // hydrostatic: P = −z
    for j in 0..f.p.nlev {
        assert!(f.p.level(j).iter().all(|p| (p + f.p.z(j)).abs() < 1e-15));
    }
    for e in euler_residuals(&g, &f, Scaling::Original).entries {
        assert!(e.sup < 1e-14, "{} = {}", e.name, e.sup);
    }
}

#[test]
fn flat_surface_matches_the_exact_potential() {
    let mu: f64 = 0.5;
    let g = SpectralGrid::new(2.0 * PI, 32).unwrap();
    let st = SurfaceState { zeta: vec![0.0; 32], psi: g.nodes().iter().map(|x| x.cos()).collect() };
    let f = reconstruct_at(&g, &st, 0.0, &PhysicalParams::new(0.05, mu).unwrap(), &config(1e-3, 64)).unwrap();
    let s = mu.sqrt();
    let (v, w) = (f.v(), f.w());
    let mut err: f64 = 0.0;
    for j in 0..v.nlev {
        let z = v.z(j);
        if !(-1.0..=0.0).contains(&z) {
            continue;
        }
        for (i, x) in g.nodes().iter().enumerate() {
            let ve = -x.sin() * (s * (z + 1.0)).cosh() / s.cosh();
            let we = x.cos() * s * (s * (z + 1.0)).sinh() / s.cosh();
            err = err.max((v.at(i, j) - ve).abs()).max((w.at(i, j) - we).abs());
        }
    }
    assert!(err < 1e-7, "velocity error {err}");
}

#[test]
fn bottom_is_impermeable() {
    let (g, st) = wave(64, 1.0);
    let f = reconstruct_at(&g, &st, 0.0, &PhysicalParams::new(0.2, 0.5).unwrap(), &config(0.01, 32)).unwrap();
    let r = euler_residuals(&g, &f, Scaling::Original);
    let rel = r.get("bottom").unwrap().sup / sup(&f.w().values);
    assert!(rel < 1e-10, "bottom flux {rel}");
}

#[test]
fn kinematic_residual_matches_the_dirichlet_neumann_form() {
    let (g, st) = wave(64, 1.0);
    let (eps, mu, dt) = (0.1, 0.5, 0.01);
    let p = PhysicalParams::new(eps, mu).unwrap();
    let f = reconstruct_at(&g, &st, 0.0, &p, &config(dt, 32)).unwrap();
    let pot = DnSolver::new(&g, mu, 32).unwrap().solve(&st.zeta, &st.psi, &p).unwrap();
    let [a, _, c] = &f.snapshots;
    let kin = euler_residuals(&g, &f, Scaling::Original);
    let expected: f64 = (0..64)
        .map(|i| {
            let gh = pot.flat_g[i] + pot.delta_g[i];
            let zt = (c.zeta[i] - a.zeta[i]) / (2.0 * dt);
            (eps * zt - gh / mu).abs()
        })
        .fold(0.0, f64::max);
    assert!((kin.get("kinematic").unwrap().sup - expected).abs() < 1e-10);
}

#[test]
fn residuals_converge_at_second_order() {
    const NAMES: [&str; 6] = ["momentum_x", "momentum_z", "divergence", "curl", "kinematic", "surface_pressure"];
    // below this the residual is at the level of the linear-solver tolerance
    const FLOOR: f64 = 1e-9;
    let runs: Vec<ResidualReport> = [(0.02, 32, 16), (0.01, 64, 32), (0.005, 128, 64)]
        .iter()
        .map(|&(dt, n, nz)| residuals_at(n, nz, dt, 0.1))
        .collect();
    for name in NAMES {
        let r: Vec<f64> = runs.iter().map(|x| x.get(name).unwrap().l2).collect();
        for w in r.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!(order >= 1.8 || w[1] <= FLOOR, "{name}: {r:?}");
        }
    }
}

#[test]
fn rigid_lid_scaling_divides_by_epsilon() {
    let (g, st) = wave(32, 1.0);
    let eps = 0.2;
    let f = reconstruct_at(&g, &st, 0.0, &PhysicalParams::new(eps, 0.5).unwrap(), &config(0.01, 16)).unwrap();
    let (o, r) = (euler_residuals(&g, &f, Scaling::Original), euler_residuals(&g, &f, Scaling::RigidLid));
    for (name, factor) in [("momentum_x", 1.0 / eps), ("kinematic", 1.0 / eps), ("surface_pressure", 1.0 / (eps * eps)), ("divergence", 1.0)] {
        let (a, b) = (o.get(name).unwrap().sup, r.get(name).unwrap().sup);
        assert!((b - factor * a).abs() <= 1e-12 * b.abs().max(1e-300), "{name}: {a} {b}");
    }
}

#[test]
fn net_surface_flux_vanishes() {
    let (g, st) = wave(64, 1.0);
    let (eps, mu) = (0.2, 0.5);
    let f = reconstruct_at(&g, &st, 0.0, &PhysicalParams::new(eps, mu).unwrap(), &config(0.01, 32)).unwrap();
    let c = f.centre();
    let zx = g.derivative(&c.zeta, 1);
    let flux: f64 = (0..64).map(|i| c.w_surface[i] / mu - eps * zx[i] * c.v_surface[i]).sum::<f64>() * g.dx();
    assert!(flux.abs() < 1e-10, "net flux {flux}");
}

#[test]
fn reconstruction_checks_its_inputs() {
    let (g, st) = wave(16, 1.0);
    let p = PhysicalParams::new(0.1, 0.5).unwrap();
    let setup = ReconstructionSetup::for_states(&[st.clone()], 0.1, 16).unwrap();
    assert!(matches!(
        reconstruct_fields(&g, &[st.clone(), st.clone()], &[0.0, 1.0], &p, &setup),
        Err(Error::Context(_))
    ));
    let three = [st.clone(), st.clone(), st.clone()];
    assert!(reconstruct_fields(&g, &three, &[0.0, 0.0, 1.0], &p, &setup).is_err());
    assert!(ReconstructionSetup::for_states(&[st], 1.5, 16).is_err());
}

#[test]
fn field_dump_round_trips() {
    let (g, st) = wave(16, 1.0);
    let f = reconstruct_at(&g, &st, 0.0, &PhysicalParams::new(0.1, 0.5).unwrap(), &config(0.01, 16)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let h = dump_fields(dir.path(), "fields", &g, &f).unwrap();
    let back: FieldDumpHeader = serde_json::from_slice(&std::fs::read(dir.path().join("fields.json")).unwrap()).unwrap();
    assert_eq!(h, back);
    let bytes = std::fs::read(dir.path().join("fields.bin")).unwrap();
    assert_eq!(bytes.len(), 8 * (3 * h.nx * h.nlev + h.nx));
    let q = 5 * h.nx + 3;
    let v = f64::from_le_bytes(bytes[8 * q..8 * q + 8].try_into().unwrap());
    assert_eq!(v, f.v().values[q]);
}

#[test]
fn rigid_lid_experiment_on_still_water() {
    let g = SpectralGrid::new(2.0 * PI, 16).unwrap();
    let st = SurfaceState { zeta: vec![0.0; 16], psi: vec![0.0; 16] };
    let cfg = SolverConfig { dt: 0.01, n_z: 16, ..SolverConfig::default() };
    let rep = rigid_lid_scaling_experiment(&g, &st, 0.1, &[0.2, 0.1], 0.5, &cfg).unwrap();
    assert!(rep.measured.iter().all(|w| *w == 0.0));
    assert!(rigid_lid_scaling_experiment(&g, &st, 0.1, &[0.1, 0.2], 0.5, &cfg).is_err());
}

#[test]
fn surface_velocity_grows_with_amplitude() {
    let cfg = SolverConfig { dt: 0.01, n_z: 16, ..SolverConfig::default() };
    let w: Vec<f64> = [0.25, 0.5, 1.0]
        .iter()
        .map(|&a| {
            let (g, st) = wave(32, a);
            rigid_lid_scaling_experiment(&g, &st, 0.2, &[0.1], 0.5, &cfg).unwrap().measured[0]
        })
        .collect();
    assert!(w[0] < w[1] && w[1] < w[2], "{w:?}");
}
