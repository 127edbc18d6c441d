//! Gauss–Legendre rules used for edge fluxes, cell sources and exact-solution
//! cell averages. The number of points depends only on the reconstruction
//! degree: N_G = 1 + floor(d/2).

/// 1D Gauss–Legendre rule on the reference interval [-1, 1], with weights
/// normalized to sum to 1 (so a rule application is an interval *average*).
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Average of `f` over [lo, hi].
    pub fn average<F: FnMut(f64) -> f64>(&self, lo: f64, hi: f64, mut f: F) -> f64 {
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&n, &w)| w * f(mid + half * n))
            .sum()
    }

    /// Average of `f` over the rectangle [xlo,xhi]x[ylo,yhi] (tensor rule).
    pub fn average_2d<F: FnMut(f64, f64) -> f64>(
        &self,
        xlo: f64,
        xhi: f64,
        ylo: f64,
        yhi: f64,
        mut f: F,
    ) -> f64 {
        let xm = 0.5 * (xlo + xhi);
        let xh = 0.5 * (xhi - xlo);
        let ym = 0.5 * (ylo + yhi);
        let yh = 0.5 * (yhi - ylo);
        let mut acc = 0.0;
        for (&nx, &wx) in self.nodes.iter().zip(&self.weights) {
            for (&ny, &wy) in self.nodes.iter().zip(&self.weights) {
                acc += wx * wy * f(xm + xh * nx, ym + yh * ny);
            }
        }
        acc
    }
}

/// Number of Gauss points per edge (and per cell direction) for degree d.
pub fn gauss_point_count(d: u32) -> usize {
    1 + (d as usize) / 2
}

/// Gauss–Legendre rule matching degree d (exact for polynomials of degree
/// 2 N_G - 1 on the reference interval).
pub fn gauss_rule(d: u32) -> GaussRule {
    match gauss_point_count(d) {
        1 => GaussRule {
            nodes: vec![0.0],
            weights: vec![1.0],
        },
        2 => {
            let a = 1.0 / 3.0_f64.sqrt();
            GaussRule {
                nodes: vec![-a, a],
                weights: vec![0.5, 0.5],
            }
        }
        3 => {
            let a = (3.0 / 5.0_f64).sqrt();
            GaussRule {
                nodes: vec![-a, 0.0, a],
                weights: vec![5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0],
            }
        }
        n => unreachable!("no rule tabulated for {n} points"),
    }
}
