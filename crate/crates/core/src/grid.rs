//! Uniform Cartesian grid with a ghost frame, the per-cell field arrays and
//! the boundary fill.

use crate::error::{Result, SwellError};
use crate::quadrature::{gauss_rule, GaussRule};
use crate::state::ConservedState;

/// Width of the ghost frame needed by a reconstruction of degree d.
pub fn stencil_radius(d: u32) -> usize {
    match d {
        0..=2 => 1,
        3 | 4 => 2,
        _ => 3,
    }
}

/// Uniform Cartesian mesh metadata. Interior cells are indexed
/// (i, j) in [0, nx) x [0, ny); ghost cells use negative / overflowing
/// indices up to the ghost width.
#[derive(Debug, Clone)]
pub struct Grid2D {
    pub nx: usize,
    pub ny: usize,
    pub dx: f64,
    pub dy: f64,
    /// Lower-left corner of the interior domain.
    pub x0: f64,
    pub y0: f64,
    pub ghost: usize,
}

impl Grid2D {
    /// Grid over [x0, x1] x [y0, y1]; the ghost width is fixed at
    /// construction from the reconstruction degree (never below 2, so the
    /// degree-2 reconstructions used by the MOOD detectors always fit).
    pub fn new(domain: (f64, f64, f64, f64), nx: usize, ny: usize, degree: u32) -> Self {
        let (x0, x1, y0, y1) = domain;
        assert!(nx >= 1 && ny >= 1 && x1 > x0 && y1 > y0);
        Self {
            nx,
            ny,
            dx: (x1 - x0) / nx as f64,
            dy: (y1 - y0) / ny as f64,
            x0,
            y0,
            ghost: stencil_radius(degree).max(2),
        }
    }

    pub fn cell_center(&self, i: isize, j: isize) -> (f64, f64) {
        (
            self.x0 + (i as f64 + 0.5) * self.dx,
            self.y0 + (j as f64 + 0.5) * self.dy,
        )
    }

    /// (xlo, xhi, ylo, yhi) bounds of cell (i, j).
    pub fn cell_rect(&self, i: isize, j: isize) -> (f64, f64, f64, f64) {
        let (xc, yc) = self.cell_center(i, j);
        (
            xc - 0.5 * self.dx,
            xc + 0.5 * self.dx,
            yc - 0.5 * self.dy,
            yc + 0.5 * self.dy,
        )
    }

    pub fn min_step(&self) -> f64 {
        self.dx.min(self.dy)
    }

    /// Linear index over interior cells (row-major).
    pub fn lin(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn n_interior(&self) -> usize {
        self.nx * self.ny
    }
}

/// Per-cell state and topography arrays over the interior plus ghost frame,
/// stored row-major.
#[derive(Debug, Clone)]
pub struct FieldSet {
    pub nx: usize,
    pub ny: usize,
    pub ghost: usize,
    stride: usize,
    pub state: Vec<ConservedState>,
    pub z: Vec<f64>,
    pub time: f64,
}

impl FieldSet {
    pub fn new(grid: &Grid2D) -> Self {
        let stride = grid.nx + 2 * grid.ghost;
        let n = stride * (grid.ny + 2 * grid.ghost);
        Self {
            nx: grid.nx,
            ny: grid.ny,
            ghost: grid.ghost,
            stride,
            state: vec![ConservedState::ZERO; n],
            z: vec![0.0; n],
            time: 0.0,
        }
    }

    #[inline]
    pub fn idx(&self, i: isize, j: isize) -> usize {
        debug_assert!(i >= -(self.ghost as isize) && i < (self.nx + self.ghost) as isize);
        debug_assert!(j >= -(self.ghost as isize) && j < (self.ny + self.ghost) as isize);
        (j + self.ghost as isize) as usize * self.stride + (i + self.ghost as isize) as usize
    }

    #[inline]
    pub fn s(&self, i: isize, j: isize) -> ConservedState {
        self.state[self.idx(i, j)]
    }

    #[inline]
    pub fn zc(&self, i: isize, j: isize) -> f64 {
        self.z[self.idx(i, j)]
    }

    #[inline]
    pub fn set_s(&mut self, i: isize, j: isize, s: ConservedState) {
        let k = self.idx(i, j);
        self.state[k] = s;
    }

    #[inline]
    pub fn set_z(&mut self, i: isize, j: isize, z: f64) {
        let k = self.idx(i, j);
        self.z[k] = z;
    }

    /// Free surface h + Z.
    #[inline]
    pub fn eta(&self, i: isize, j: isize) -> f64 {
        let k = self.idx(i, j);
        self.state[k].h + self.z[k]
    }

    pub fn interior(&self) -> impl Iterator<Item = (usize, usize)> {
        let (nx, ny) = (self.nx, self.ny);
        (0..ny).flat_map(move |j| (0..nx).map(move |i| (i, j)))
    }

    pub fn min_interior_h(&self) -> f64 {
        self.interior()
            .map(|(i, j)| self.s(i as isize, j as isize).h)
            .fold(f64::INFINITY, f64::min)
    }

    /// Total water volume over the interior.
    pub fn total_mass(&self, grid: &Grid2D) -> f64 {
        self.interior()
            .map(|(i, j)| self.s(i as isize, j as isize).h)
            .sum::<f64>()
            * grid.dx
            * grid.dy
    }
}

/// Analytic solution handle used for Dirichlet boundaries, initial data and
/// error norms. Implementations provide pointwise values; the cell-average
/// defaults to the tensor Gauss rule of matching order.
pub trait AnalyticSolution {
    fn state(&self, x: f64, y: f64, t: f64) -> ConservedState;

    fn topography(&self, x: f64, y: f64) -> f64;

    fn state_cell_average(
        &self,
        rect: (f64, f64, f64, f64),
        t: f64,
        rule: &GaussRule,
    ) -> ConservedState {
        let (xlo, xhi, ylo, yhi) = rect;
        let h = rule.average_2d(xlo, xhi, ylo, yhi, |x, y| self.state(x, y, t).h);
        let qx = rule.average_2d(xlo, xhi, ylo, yhi, |x, y| self.state(x, y, t).qx);
        let qy = rule.average_2d(xlo, xhi, ylo, yhi, |x, y| self.state(x, y, t).qy);
        ConservedState::new(h, qx, qy)
    }

    fn topography_cell_average(&self, rect: (f64, f64, f64, f64), rule: &GaussRule) -> f64 {
        let (xlo, xhi, ylo, yhi) = rect;
        rule.average_2d(xlo, xhi, ylo, yhi, |x, y| self.topography(x, y))
    }
}

/// Boundary condition kind for one side of the domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BcKind {
    /// Copy the nearest interior value.
    Neumann,
    /// Mirror the state, negating the wall-normal discharge; topography is
    /// mirrored too so a lake at rest stays exact at walls.
    Wall,
    /// Wrap around the opposite side.
    Periodic,
    /// Cell averages of the analytic solution handle.
    DirichletAnalytic,
    /// Pin selected components, copy the rest from the nearest interior cell.
    DirichletFixed {
        h: Option<f64>,
        qx: Option<f64>,
        qy: Option<f64>,
    },
}

/// Per-side boundary specification (left/right = x, bottom/top = y).
#[derive(Debug, Clone, Copy)]
pub struct BoundarySpec {
    pub left: BcKind,
    pub right: BcKind,
    pub bottom: BcKind,
    pub top: BcKind,
}

impl BoundarySpec {
    pub fn all(kind: BcKind) -> Self {
        Self {
            left: kind,
            right: kind,
            bottom: kind,
            top: kind,
        }
    }

    pub fn needs_handle(&self) -> bool {
        [self.left, self.right, self.bottom, self.top]
            .iter()
            .any(|k| matches!(k, BcKind::DirichletAnalytic))
    }
}

fn fixed_state(
    interior: ConservedState,
    h: Option<f64>,
    qx: Option<f64>,
    qy: Option<f64>,
) -> ConservedState {
    ConservedState::new(
        h.unwrap_or(interior.h),
        qx.unwrap_or(interior.qx),
        qy.unwrap_or(interior.qy),
    )
}

/// Fill the ghost frame of `fields` according to `bc`. Interior cells are
/// never modified. The x-sides are filled first over interior rows, then the
/// y-sides over all columns (including ghost columns), which also populates
/// the corner ghosts.
pub fn fill_ghosts(
    fields: &mut FieldSet,
    grid: &Grid2D,
    bc: &BoundarySpec,
    degree: u32,
    exact: Option<&dyn AnalyticSolution>,
) -> Result<()> {
    if bc.needs_handle() && exact.is_none() {
        return Err(SwellError::MissingAnalyticHandle);
    }
    let g = grid.ghost as isize;
    let (nx, ny) = (grid.nx as isize, grid.ny as isize);
    let rule = gauss_rule(degree);
    let t = fields.time;

    let fill_one = |fields: &mut FieldSet,
                    kind: BcKind,
                    gi: isize,
                    gj: isize,
                    ni: isize,
                    nj: isize,
                    wi: isize,
                    wj: isize,
                    normal_x: bool|
     -> Result<()> {
        match kind {
            BcKind::Neumann => {
                let s = fields.s(ni, nj);
                let z = fields.zc(ni, nj);
                fields.set_s(gi, gj, s);
                fields.set_z(gi, gj, z);
            }
            BcKind::Wall => {
                let mut s = fields.s(wi, wj);
                if normal_x {
                    s.qx = -s.qx;
                } else {
                    s.qy = -s.qy;
                }
                let z = fields.zc(wi, wj);
                fields.set_s(gi, gj, s);
                fields.set_z(gi, gj, z);
            }
            BcKind::Periodic => {
                let s = fields.s(wi, wj);
                let z = fields.zc(wi, wj);
                fields.set_s(gi, gj, s);
                fields.set_z(gi, gj, z);
            }
            BcKind::DirichletAnalytic => {
                let handle = exact.unwrap();
                let rect = grid.cell_rect(gi, gj);
                let s = handle.state_cell_average(rect, t, &rule);
                let z = handle.topography_cell_average(rect, &rule);
                fields.set_s(gi, gj, s);
                fields.set_z(gi, gj, z);
            }
            BcKind::DirichletFixed { h, qx, qy } => {
                let s = fixed_state(fields.s(ni, nj), h, qx, qy);
                let z = fields.zc(ni, nj);
                fields.set_s(gi, gj, s);
                fields.set_z(gi, gj, z);
            }
        }
        Ok(())
    };

    // x-sides over interior rows
    for j in 0..ny {
        for l in 1..=g {
            // left ghost i = -l: wall mirror partner l-1, periodic partner nx-l
            fill_one(fields, bc.left, -l, j, 0, j, if bc.left == BcKind::Periodic { nx - l } else { l - 1 }, j, true)?;
            // right ghost i = nx-1+l
            fill_one(fields, bc.right, nx - 1 + l, j, nx - 1, j, if bc.right == BcKind::Periodic { l - 1 } else { nx - l }, j, true)?;
        }
    }
    // y-sides over all columns (corners included)
    for i in -g..nx + g {
        for l in 1..=g {
            fill_one(fields, bc.bottom, i, -l, i, 0, i, if bc.bottom == BcKind::Periodic { ny - l } else { l - 1 }, false)?;
            fill_one(fields, bc.top, i, ny - 1 + l, i, ny - 1, i, if bc.top == BcKind::Periodic { l - 1 } else { ny - l }, false)?;
        }
    }
    Ok(())
}
