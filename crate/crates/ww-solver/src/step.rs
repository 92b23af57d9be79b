use linear_waves::LinearPropagator;
use spectral_core::{Result, SurfaceState};

use crate::model::add;

/// One integrating-factor RK4 step of ∂ₜu = −ε⁻¹Lu + F(u).
///
/// In the frame v = e^{tL/ε}u the equation reads ∂ₜv = e^{tL/ε}F(e^{−tL/ε}v);
/// classical RK4 on v, mapped back, gives the update below. With F ≡ 0 it
/// is the exact linear flow, for either sign of dt.
pub fn if_rk4_step<F>(
    prop: &LinearPropagator,
    epsilon: f64,
    state: &SurfaceState,
    dt: f64,
    mut f: F,
) -> Result<SurfaceState>
where
    F: FnMut(&SurfaceState) -> Result<SurfaceState>,
{
    let h = 0.5 * dt;
    let e_half = |u: &SurfaceState| prop.propagate(u, h, epsilon);
    let e_full = |u: &SurfaceState| prop.propagate(u, dt, epsilon);

    let k1 = f(state)?;
    let k2 = f(&e_half(&add(state, &k1, h)))?;
    let u_half = e_half(state);
    let k3 = f(&add(&u_half, &k2, h))?;
    let u_full = e_full(state);
    let k4 = f(&add(&u_full, &e_half(&k3), dt))?;

    let mid = e_half(&add(&k2, &k3, 1.0));
    let mut incr = add(&e_full(&k1), &mid, 2.0);
    incr = add(&incr, &k4, 1.0);
    Ok(add(&u_full, &incr, dt / 6.0))
}
