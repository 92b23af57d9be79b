use dirichlet_neumann::{fornberg_weights, StripField};

/// Points in the local Lagrange interpolant (degree 9). Fewer points make
/// the interpolation error, which is only piecewise smooth, dominate the
/// derivative jumps across layer interfaces.
pub const INTERP_POINTS: usize = 10;

/// Lagrange weights for the value at `z` from the `INTERP_POINTS` levels of
/// `f` nearest to z inside levels lo..=hi. Returns the first level used.
pub(crate) fn weights_in(f: &StripField, lo: usize, hi: usize, z: f64) -> (usize, Vec<f64>) {
    let npts = INTERP_POINTS.min(hi - lo + 1);
    let pos = (z - f.z0) / f.dz;
    let centre = pos.floor() as isize - (npts as isize - 1) / 2;
    let start = centre.clamp(lo as isize, (hi + 1 - npts) as isize) as usize;
    let xs: Vec<f64> = (start..start + npts).map(|j| f.z(j)).collect();
    (start, fornberg_weights(z, &xs, 0).swap_remove(0))
}

/// Segment of `f` containing z; on a break the segment below is used
/// unless `prefer_upper`.
pub(crate) fn segment_of(f: &StripField, z: f64, prefer_upper: bool) -> Option<(usize, usize)> {
    let tol = 1e-12 * f.dz;
    let segs = f.segments();
    let pick = |&(lo, hi): &(usize, usize)| z >= f.z(lo) - tol && z <= f.z(hi) + tol;
    if prefer_upper {
        segs.iter().rev().find(|s| pick(s)).copied()
    } else {
        segs.iter().find(|s| pick(s)).copied()
    }
}

pub(crate) fn eval_column(f: &StripField, i: usize, start: usize, w: &[f64]) -> f64 {
    w.iter().enumerate().map(|(q, c)| c * f.at(i, start + q)).sum()
}
