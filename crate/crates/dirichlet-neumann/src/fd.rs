/// Finite-difference weights for derivatives of order 0..=m at x0 from the
/// nodes xs (Fornberg's recursion). Row d holds the weights for ∂^d.
pub fn fornberg_weights(x0: f64, xs: &[f64], m: usize) -> Vec<Vec<f64>> {
    let n = xs.len();
    let mut c = vec![vec![0.0; n]; m + 1];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] *= c4 / c3;
        }
        c1 = c2;
    }
    c
}

/// Weights over the contiguous level range start..start+w.len().
#[derive(Debug, Clone, PartialEq)]
pub struct Stencil {
    pub start: usize,
    pub w: Vec<f64>,
}

impl Stencil {
    /// Stencil for ∂^order at level j using `width` uniformly spaced levels
    /// inside [lo, hi], as centered as the range allows.
    pub fn build(j: usize, order: usize, width: usize, lo: usize, hi: usize, dz: f64) -> Stencil {
        assert!(hi - lo + 1 >= width, "segment too short for stencil");
        let start = j.saturating_sub(width / 2).max(lo).min(hi + 1 - width);
        let xs: Vec<f64> = (start..start + width).map(|i| i as f64 - j as f64).collect();
        let w = fornberg_weights(0.0, &xs, order)[order]
            .iter()
            .map(|c| c / dz.powi(order as i32))
            .collect();
        Stencil { start, w }
    }

    pub fn end(&self) -> usize {
        self.start + self.w.len()
    }

    pub fn apply(&self, f: impl Fn(usize) -> f64) -> f64 {
        self.w
            .iter()
            .enumerate()
            .map(|(i, c)| c * f(self.start + i))
            .sum()
    }

    /// Weight attached to level `j`, zero if outside the stencil.
    pub fn weight(&self, j: usize) -> f64 {
        if j >= self.start && j < self.end() {
            self.w[j - self.start]
        } else {
            0.0
        }
    }
}

/// First- and second-derivative stencils on levels 0..=nz: centered
/// five-point stencils in the interior, wider one-sided closures near the
/// ends so that the closure error stays below the interior error.
pub fn vertical_stencils(nz: usize, dz: f64) -> (Vec<Stencil>, Vec<Stencil>) {
    let interior = |j: usize| j >= 2 && j + 2 <= nz;
    let d1 = (0..=nz)
        .map(|j| Stencil::build(j, 1, if interior(j) { 5 } else { D1_CLOSURE }, 0, nz, dz))
        .collect();
    let d2 = (0..=nz)
        .map(|j| Stencil::build(j, 2, if interior(j) { 5 } else { D2_CLOSURE }, 0, nz, dz))
        .collect();
    (d1, d2)
}
const D1_CLOSURE: usize = 6;
const D2_CLOSURE: usize = 7;
