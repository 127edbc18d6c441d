//! Conservative least-squares polynomial reconstruction on Cartesian
//! stencils.
//!
//! A degree-d reconstruction of a variable φ in cell c is
//!
//!   φ̂(x, y) = φ_c + Σ_α R^α ((x-x_c)^{α₁} (y-y_c)^{α₂} - M^α),  1 <= |α| <= d,
//!
//! where M^α makes the polynomial's own cell average equal φ_c exactly. The
//! coefficients R minimize the mismatch with the stencil cell averages; the
//! normal-equation solve is precomputed as a pseudoinverse so the per-cell
//! work is a dense matrix-vector product.

use nalgebra::DMatrix;

use crate::error::{Result, SwellError};
use crate::quadrature::{gauss_rule, GaussRule};

pub use crate::quadrature::gauss_point_count;

/// Maximum number of polynomial coefficients (degree 5: 20).
pub const MAX_COEFFS: usize = 20;

/// Multi-indices (α₁, α₂) with 1 <= |α| <= d, ordered by |α| then α₁
/// descending. Deterministic across the whole crate.
pub fn multi_indices(d: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for total in 1..=d {
        for a1 in (0..=total).rev() {
            out.push((a1, total - a1));
        }
    }
    out
}

/// Number of coefficients for degree d: (d+1)(d+2)/2 - 1.
pub fn n_coeffs(d: u32) -> usize {
    ((d + 1) * (d + 2) / 2 - 1) as usize
}

/// One-dimensional bracket factor: the exact average of x^a over the cell at
/// integer offset σ (in units of (Δ/2)^a).
fn bracket(sigma: i32, a: u32) -> f64 {
    let s = 2 * sigma;
    let p = a as i32 + 1;
    (((s + 1) as f64).powi(p) - ((s - 1) as f64).powi(p)) / (2.0 * p as f64)
}

/// Conservation moment M^α for a cell of size (dx, dy).
pub fn moments(alpha: (u32, u32), dx: f64, dy: f64) -> f64 {
    let (a1, a2) = alpha;
    bracket(0, a1) * (0.5 * dx).powi(a1 as i32) * bracket(0, a2) * (0.5 * dy).powi(a2 as i32)
}

/// Fixed stencil family: the smallest symmetric Cartesian neighborhoods
/// satisfying the size bound, nested across degrees.
pub fn stencil_offsets(d: u32) -> Vec<(i32, i32)> {
    match d {
        0 => vec![],
        1 => vec![(-1, 0), (1, 0), (0, -1), (0, 1)],
        2 | 3 => {
            let mut s = stencil_offsets(1);
            s.extend([(-1, -1), (1, -1), (-1, 1), (1, 1)]);
            if d == 3 {
                s.extend([(-2, 0), (2, 0), (0, -2), (0, 2)]);
            }
            s
        }
        4 | 5 => {
            let mut s = stencil_offsets(3);
            for &(sx, sy) in &[
                (-1, -2),
                (1, -2),
                (-2, -1),
                (2, -1),
                (-2, 1),
                (2, 1),
                (-1, 2),
                (1, 2),
                (-2, -2),
                (2, -2),
                (-2, 2),
                (2, 2),
            ] {
                s.push((sx, sy));
            }
            if d == 5 {
                // A radius-2 stencil cannot resolve degree 5: a pure-x
                // quintic with equal cell averages on the five columns
                // always exists (four constraints on five coefficients),
                // and similarly in y. The axial distance-3 cells remove
                // both null vectors.
                s.extend([(-3, 0), (3, 0), (0, -3), (0, 3)]);
            }
            s
        }
        _ => panic!("reconstruction degree {d} out of range"),
    }
}

/// Chebyshev radius of the degree-d stencil.
pub fn plan_radius(d: u32) -> usize {
    stencil_offsets(d)
        .iter()
        .map(|&(x, y)| x.abs().max(y.abs()) as usize)
        .max()
        .unwrap_or(0)
}

/// Precomputed reconstruction operator for one (degree, dx, dy) triple.
#[derive(Debug, Clone)]
pub struct ReconstructionPlan {
    pub degree: u32,
    pub dx: f64,
    pub dy: f64,
    pub stencil: Vec<(i32, i32)>,
    pub alphas: Vec<(u32, u32)>,
    pub moments: Vec<f64>,
    /// Row-major (n_alpha x n_stencil) least-squares solve operator.
    solve: Vec<f64>,
    /// Edge / cell Gauss rule matching the degree.
    pub rule: GaussRule,
}

/// A reconstructed cell polynomial: the conserved mean plus coefficients in
/// the plan's multi-index order.
#[derive(Debug, Clone, Copy)]
pub struct CellPolynomial {
    pub mean: f64,
    pub n: usize,
    pub coeffs: [f64; MAX_COEFFS],
}

impl CellPolynomial {
    pub fn constant(mean: f64) -> Self {
        Self {
            mean,
            n: 0,
            coeffs: [0.0; MAX_COEFFS],
        }
    }
}

/// Build the reconstruction operator. The geometry matrix factors into a
/// dimensionless integer part and a diagonal (Δ/2)^α scaling, so the
/// pseudoinverse is computed on the well-conditioned dimensionless part.
pub fn build_plan(d: u32, dx: f64, dy: f64) -> Result<ReconstructionPlan> {
    let stencil = stencil_offsets(d);
    let alphas = multi_indices(d);
    let na = alphas.len();
    let ns = stencil.len();
    debug_assert!(d == 0 || ns > na);
    let rule = gauss_rule(d);
    let mut mom = Vec::with_capacity(na);
    for &a in &alphas {
        mom.push(moments(a, dx, dy));
    }
    if d == 0 {
        return Ok(ReconstructionPlan {
            degree: d,
            dx,
            dy,
            stencil,
            alphas,
            moments: mom,
            solve: Vec::new(),
            rule,
        });
    }

    let xt = DMatrix::from_fn(ns, na, |l, c| {
        let (sx, sy) = stencil[l];
        let (a1, a2) = alphas[c];
        bracket(sx, a1) * bracket(sy, a2) - bracket(0, a1) * bracket(0, a2)
    });
    let svd = xt.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let eps = 1e-12 * smax;
    if svd.rank(eps) < na {
        return Err(SwellError::RankDeficient {
            degree: d,
            rows: ns,
            cols: na,
        });
    }
    let pinv = svd
        .pseudo_inverse(eps)
        .expect("svd computed with u/v requested");

    // undo the (Δ/2)^α column scaling on the way out
    let mut solve = vec![0.0; na * ns];
    for r in 0..na {
        let (a1, a2) = alphas[r];
        let scale = (0.5 * dx).powi(a1 as i32) * (0.5 * dy).powi(a2 as i32);
        for l in 0..ns {
            solve[r * ns + l] = pinv[(r, l)] / scale;
        }
    }

    Ok(ReconstructionPlan {
        degree: d,
        dx,
        dy,
        stencil,
        alphas,
        moments: mom,
        solve,
        rule,
    })
}

impl ReconstructionPlan {
    pub fn n_alpha(&self) -> usize {
        self.alphas.len()
    }

    /// Least-squares fit from the center value and the stencil values
    /// (in `self.stencil` order).
    pub fn reconstruct(&self, center: f64, stencil_values: &[f64]) -> CellPolynomial {
        debug_assert_eq!(stencil_values.len(), self.stencil.len());
        let na = self.n_alpha();
        let ns = self.stencil.len();
        let mut poly = CellPolynomial::constant(center);
        poly.n = na;
        for r in 0..na {
            let row = &self.solve[r * ns..(r + 1) * ns];
            let mut acc = 0.0;
            for (l, &v) in stencil_values.iter().enumerate() {
                acc += row[l] * (v - center);
            }
            poly.coeffs[r] = acc;
        }
        poly
    }

    /// Evaluate at offsets (x - x_c, y - y_c) from the cell center.
    pub fn eval(&self, poly: &CellPolynomial, xo: f64, yo: f64) -> f64 {
        let mut v = poly.mean;
        for (r, &(a1, a2)) in self.alphas.iter().enumerate().take(poly.n) {
            v += poly.coeffs[r] * (xo.powi(a1 as i32) * yo.powi(a2 as i32) - self.moments[r]);
        }
        v
    }

    /// x-derivative at offsets from the cell center.
    pub fn eval_dx(&self, poly: &CellPolynomial, xo: f64, yo: f64) -> f64 {
        let mut v = 0.0;
        for (r, &(a1, a2)) in self.alphas.iter().enumerate().take(poly.n) {
            if a1 > 0 {
                v += poly.coeffs[r] * a1 as f64 * xo.powi(a1 as i32 - 1) * yo.powi(a2 as i32);
            }
        }
        v
    }

    /// y-derivative at offsets from the cell center.
    pub fn eval_dy(&self, poly: &CellPolynomial, xo: f64, yo: f64) -> f64 {
        let mut v = 0.0;
        for (r, &(a1, a2)) in self.alphas.iter().enumerate().take(poly.n) {
            if a2 > 0 {
                v += poly.coeffs[r] * a2 as f64 * xo.powi(a1 as i32) * yo.powi(a2 as i32 - 1);
            }
        }
        v
    }

    /// Constant second x-derivative of a degree-2 polynomial.
    pub fn curvature_xx(&self, poly: &CellPolynomial) -> f64 {
        debug_assert_eq!(self.degree, 2);
        for (r, &(a1, a2)) in self.alphas.iter().enumerate() {
            if a1 == 2 && a2 == 0 {
                return 2.0 * poly.coeffs[r];
            }
        }
        0.0
    }

    /// Constant second y-derivative of a degree-2 polynomial.
    pub fn curvature_yy(&self, poly: &CellPolynomial) -> f64 {
        debug_assert_eq!(self.degree, 2);
        for (r, &(a1, a2)) in self.alphas.iter().enumerate() {
            if a1 == 0 && a2 == 2 {
                return 2.0 * poly.coeffs[r];
            }
        }
        0.0
    }
}

/// Topography polynomial as the coefficient-wise difference of the h+Z and
/// h reconstructions.
pub fn reconstruct_topography(h: &CellPolynomial, hz: &CellPolynomial) -> CellPolynomial {
    let mut z = CellPolynomial::constant(hz.mean - h.mean);
    z.n = h.n.max(hz.n);
    for r in 0..z.n {
        z.coeffs[r] = hz.coeffs[r] - h.coeffs[r];
    }
    z
}

/// Gauss data for degree d: point count plus the reference rule (edge rules
/// use it in 1D, cell rules as a tensor product).
pub fn gauss_nodes(d: u32) -> (usize, GaussRule) {
    (gauss_point_count(d), gauss_rule(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exact average of x^p over [c - w/2, c + w/2].
    fn avg_pow(c: f64, w: f64, p: u32) -> f64 {
        let hi = c + 0.5 * w;
        let lo = c - 0.5 * w;
        (hi.powi(p as i32 + 1) - lo.powi(p as i32 + 1)) / ((p as f64 + 1.0) * w)
    }

    /// Exact cell average of a polynomial given by (coeff, a1, a2) terms, on
    /// the cell at offset (sx, sy) from the origin cell.
    fn cell_avg_poly(terms: &[(f64, u32, u32)], sx: i32, sy: i32, dx: f64, dy: f64) -> f64 {
        terms
            .iter()
            .map(|&(c, a1, a2)| c * avg_pow(sx as f64 * dx, dx, a1) * avg_pow(sy as f64 * dy, dy, a2))
            .sum()
    }

    #[test]
    fn moment_examples() {
        assert_eq!(moments((1, 0), 0.2, 0.2), 0.0);
        assert_eq!(moments((1, 1), 0.2, 0.2), 0.0);
        let m = moments((2, 0), 0.2, 1.0);
        assert!((m - 0.01 / 3.0).abs() < 1e-18);
    }

    #[test]
    fn stencil_sizes_and_counts() {
        assert_eq!(stencil_offsets(1).len(), 4);
        assert_eq!(stencil_offsets(2).len(), 8);
        assert_eq!(stencil_offsets(3).len(), 12);
        assert_eq!(stencil_offsets(4).len(), 24);
        assert_eq!(stencil_offsets(5).len(), 28);
        for d in 1..=5 {
            assert!(stencil_offsets(d).len() > n_coeffs(d));
            // nesting: lower-degree stencils prefix the higher ones
            if d > 1 {
                let lo = stencil_offsets(d - 1);
                let hi = stencil_offsets(d);
                assert_eq!(&hi[..lo.len()], &lo[..]);
            }
        }
        assert_eq!(n_coeffs(5), 20);
    }

    #[test]
    fn plans_build_with_full_rank() {
        for d in 1..=5 {
            let plan = build_plan(d, 0.05, 0.08).unwrap();
            assert_eq!(plan.n_alpha(), n_coeffs(d));
        }
    }

    #[test]
    fn constant_field_zero_coefficients() {
        let plan = build_plan(3, 0.1, 0.1).unwrap();
        let vals = vec![4.2; plan.stencil.len()];
        let p = plan.reconstruct(4.2, &vals);
        for r in 0..p.n {
            assert!(p.coeffs[r].abs() < 1e-12);
        }
    }

    #[test]
    fn linear_reproduction() {
        let (dx, dy) = (0.1, 0.1);
        let plan = build_plan(1, dx, dy).unwrap();
        // φ(x, y) = x sampled as exact cell averages around the origin cell
        let vals: Vec<f64> = plan
            .stencil
            .iter()
            .map(|&(sx, sy)| cell_avg_poly(&[(1.0, 1, 0)], sx, sy, dx, dy))
            .collect();
        let p = plan.reconstruct(0.0, &vals);
        assert!((p.coeffs[0] - 1.0).abs() < 1e-12); // R^(1,0)
        assert!(p.coeffs[1].abs() < 1e-12); // R^(0,1)
        for &(xo, yo) in &[(0.03, -0.02), (0.05, 0.05), (-0.049, 0.01)] {
            assert!((plan.eval(&p, xo, yo) - xo).abs() < 1e-13);
        }
    }

    #[test]
    fn polynomial_exactness_all_degrees() {
        // Reconstructing from exact cell averages of any polynomial of total
        // degree <= d reproduces it pointwise to round-off.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for d in 1..=5u32 {
            let (dx, dy) = (0.0125, 0.02);
            let plan = build_plan(d, dx, dy).unwrap();
            for _ in 0..20 {
                let mut terms = vec![(rng.gen_range(-1.0..1.0), 0, 0)];
                for (a1, a2) in multi_indices(d) {
                    terms.push((rng.gen_range(-1.0..1.0), a1, a2));
                }
                let center = cell_avg_poly(&terms, 0, 0, dx, dy);
                let vals: Vec<f64> = plan
                    .stencil
                    .iter()
                    .map(|&(sx, sy)| cell_avg_poly(&terms, sx, sy, dx, dy))
                    .collect();
                let p = plan.reconstruct(center, &vals);
                for _ in 0..10 {
                    let xo = rng.gen_range(-0.5 * dx..0.5 * dx);
                    let yo = rng.gen_range(-0.5 * dy..0.5 * dy);
                    let exact: f64 = terms
                        .iter()
                        .map(|&(c, a1, a2)| c * xo.powi(a1 as i32) * yo.powi(a2 as i32))
                        .sum();
                    let got = plan.eval(&p, xo, yo);
                    assert!(
                        (got - exact).abs() < 1e-10 * exact.abs().max(1.0),
                        "d={d}: {got} vs {exact}"
                    );
                }
            }
        }
    }

    #[test]
    fn conservation_of_cell_average() {
        // The quadrature average of the reconstruction over its own cell is
        // the stored mean, whatever the input data.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for d in 1..=5u32 {
            let (dx, dy) = (0.3, 0.2);
            let plan = build_plan(d, dx, dy).unwrap();
            let vals: Vec<f64> = (0..plan.stencil.len())
                .map(|_| rng.gen_range(-2.0..2.0))
                .collect();
            let p = plan.reconstruct(0.37, &vals);
            let rule = gauss_rule(5); // exact for degree 5
            let avg = rule.average_2d(-0.5 * dx, 0.5 * dx, -0.5 * dy, 0.5 * dy, |x, y| {
                plan.eval(&p, x, y)
            });
            assert!((avg - 0.37).abs() < 1e-13);
        }
    }

    #[test]
    fn least_squares_optimality() {
        // Perturbing any coefficient of the fit strictly increases the
        // quadratic mismatch with the stencil averages.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        let (dx, dy) = (0.1, 0.1);
        let plan = build_plan(2, dx, dy).unwrap();
        let vals: Vec<f64> = (0..plan.stencil.len())
            .map(|_| rng.gen_range(-1.0..1.0))
            .collect();
        let p = plan.reconstruct(0.0, &vals);
        let rule = gauss_rule(5);
        let energy = |poly: &CellPolynomial| -> f64 {
            plan.stencil
                .iter()
                .zip(&vals)
                .map(|(&(sx, sy), &v)| {
                    let (cx, cy) = (sx as f64 * dx, sy as f64 * dy);
                    let avg = rule.average_2d(
                        cx - 0.5 * dx,
                        cx + 0.5 * dx,
                        cy - 0.5 * dy,
                        cy + 0.5 * dy,
                        |x, y| plan.eval(poly, x, y),
                    );
                    (avg - v) * (avg - v)
                })
                .sum()
        };
        let e0 = energy(&p);
        for r in 0..p.n {
            for delta in [1e-3, -1e-3] {
                let mut q = p;
                q.coeffs[r] += delta / (dx.powi(plan.alphas[r].0 as i32) * dy.powi(plan.alphas[r].1 as i32));
                assert!(energy(&q) > e0);
            }
        }
    }

    #[test]
    fn topography_difference() {
        let plan = build_plan(2, 0.1, 0.1).unwrap();
        let vals_h: Vec<f64> = plan.stencil.iter().map(|&(sx, sy)| 1.0 - 0.1 * sx as f64 - 0.05 * sy as f64).collect();
        // h + Z constant: Z poly must be const - h poly
        let vals_hz = vec![2.0; plan.stencil.len()];
        let ph = plan.reconstruct(1.0, &vals_h);
        let phz = plan.reconstruct(2.0, &vals_hz);
        let pz = reconstruct_topography(&ph, &phz);
        for &(xo, yo) in &[(0.05, 0.0), (-0.03, 0.04)] {
            let z = plan.eval(&pz, xo, yo);
            let h = plan.eval(&ph, xo, yo);
            assert!((z + h - 2.0).abs() < 1e-13);
        }
    }

    #[test]
    fn gauss_counts_match_degree() {
        assert_eq!(gauss_nodes(0).0, 1);
        assert_eq!(gauss_nodes(2).0, 2);
        assert_eq!(gauss_nodes(5).0, 3);
    }
}
