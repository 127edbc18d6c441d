//! First-order 2D two-step scheme: explicit transport + topography update,
//! then the semi-implicit well-balanced friction update, under the CFL
//! time-step restriction.

use crate::error::{Result, SwellError};
use crate::grid::{fill_ghosts, AnalyticSolution, BoundarySpec, FieldSet, Grid2D};
use crate::riemann::{numerical_flux, wave_speeds, InterfaceFlux, EPS_LAMBDA};
use crate::state::{sgn, ConservedState, PhysParams, H_DRY};

/// Summary of one time step.
#[derive(Debug, Clone, Copy)]
pub struct StepReport {
    pub dt_used: f64,
    pub lambda_max: f64,
    pub n_dry_cells: usize,
}

/// Largest characteristic speed over all x- and y-interfaces (ghosts
/// included), never below the wave-speed floor.
pub fn lambda_max(fields: &FieldSet, grid: &Grid2D, params: &PhysParams) -> f64 {
    let (nx, ny) = (grid.nx as isize, grid.ny as isize);
    let mut lam: f64 = EPS_LAMBDA;
    for j in 0..ny {
        for i in 0..=nx {
            let sp = wave_speeds(fields.s(i - 1, j), fields.s(i, j), params.g);
            lam = lam.max(sp.lam_l.abs()).max(sp.lam_r);
        }
    }
    for j in 0..=ny {
        for i in 0..nx {
            let sp = wave_speeds(
                fields.s(i, j - 1).rotated(),
                fields.s(i, j).rotated(),
                params.g,
            );
            lam = lam.max(sp.lam_l.abs()).max(sp.lam_r);
        }
    }
    lam
}

/// CFL time step: cfl·δ^(max(d,3)/3) / (2Λ) with δ = min(dx, dy). The
/// exponent correction keeps the 4th-order SSPRK(5,4) integrator from
/// limiting the spatial order at degrees 4 and 5.
pub fn cfl_dt(fields: &FieldSet, grid: &Grid2D, params: &PhysParams, degree: u32, cfl: f64) -> f64 {
    debug_assert!(cfl > 0.0 && cfl <= 1.0);
    let lam = lambda_max(fields, grid, params);
    let delta = grid.min_step();
    let exponent = (degree.max(3) as f64) / 3.0;
    cfl * delta.powf(exponent) / (2.0 * lam)
}

/// First-order interface fluxes for both directions, each interface computed
/// once. x-interface (i, j) sits between cells (i-1, j) and (i, j) for
/// i in 0..=nx; y-interface (i, j) between (i, j-1) and (i, j) for
/// j in 0..=ny.
pub struct FoSweeps {
    pub fx: Vec<InterfaceFlux>,
    pub fy: Vec<InterfaceFlux>,
    nx: usize,
}

impl FoSweeps {
    #[inline]
    pub fn x(&self, i: usize, j: usize) -> &InterfaceFlux {
        &self.fx[j * (self.nx + 1) + i]
    }

    #[inline]
    pub fn y(&self, i: usize, j: usize) -> &InterfaceFlux {
        &self.fy[j * self.nx + i]
    }
}

/// Run the two first-order flux sweeps. Ghosts must be filled.
pub fn fo_sweeps(fields: &FieldSet, grid: &Grid2D, params: &PhysParams, cutoff_c: f64) -> FoSweeps {
    let (nx, ny) = (grid.nx, grid.ny);
    let mut fx = Vec::with_capacity((nx + 1) * ny);
    for j in 0..ny as isize {
        for i in 0..=nx as isize {
            fx.push(numerical_flux(
                fields.s(i - 1, j),
                fields.s(i, j),
                fields.zc(i - 1, j),
                fields.zc(i, j),
                grid.dx,
                params,
                cutoff_c,
                0,
            ));
        }
    }
    let mut fy = Vec::with_capacity(nx * (ny + 1));
    for j in 0..=ny as isize {
        for i in 0..nx as isize {
            fy.push(numerical_flux(
                fields.s(i, j - 1).rotated(),
                fields.s(i, j).rotated(),
                fields.zc(i, j - 1),
                fields.zc(i, j),
                grid.dy,
                params,
                cutoff_c,
                0,
            ));
        }
    }
    FoSweeps { fx, fy, nx }
}

/// Flux of an x-interface in (h, qx, qy) components.
#[inline]
pub fn flux_x_components(f: &InterfaceFlux) -> [f64; 3] {
    f.flux
}

/// Flux of a y-interface rotated back to (h, qx, qy) components.
#[inline]
pub fn flux_y_components(f: &InterfaceFlux) -> [f64; 3] {
    [f.flux[0], f.flux[2], f.flux[1]]
}

/// Explicit transport + topography half step (first step of the two-step
/// scheme). Ghosts of `fields` must be filled. A negative updated height is
/// a positivity fault of the first-order theory and is reported as an error.
pub fn explicit_step(
    fields: &FieldSet,
    grid: &Grid2D,
    params: &PhysParams,
    dt: f64,
    cutoff_c: f64,
) -> Result<FieldSet> {
    let sweeps = fo_sweeps(fields, grid, params, cutoff_c);
    let mut out = fields.clone();
    out.time = fields.time + dt;
    let rx = dt / grid.dx;
    let ry = dt / grid.dy;
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            let w = fields.s(i as isize, j as isize);
            let fw = flux_x_components(sweeps.x(i, j));
            let fe = flux_x_components(sweeps.x(i + 1, j));
            let fs = flux_y_components(sweeps.y(i, j));
            let fn_ = flux_y_components(sweeps.y(i, j + 1));
            let sx = 0.5 * (sweeps.x(i, j).topo.s_dx + sweeps.x(i + 1, j).topo.s_dx) / grid.dx;
            let sy = 0.5 * (sweeps.y(i, j).topo.s_dx + sweeps.y(i, j + 1).topo.s_dx) / grid.dy;
            let h = w.h - rx * (fe[0] - fw[0]) - ry * (fn_[0] - fs[0]);
            let qx = w.qx - rx * (fe[1] - fw[1]) - ry * (fn_[1] - fs[1]) + dt * sx;
            let qy = w.qy - rx * (fe[2] - fw[2]) - ry * (fn_[2] - fs[2]) + dt * sy;
            if h < 0.0 {
                return Err(SwellError::NegativeHeight {
                    i,
                    j,
                    h,
                    time: fields.time,
                    step: 0,
                });
            }
            out.set_s(i as isize, j as isize, ConservedState::new(h, qx, qy));
        }
    }
    Ok(out)
}

/// β ratio of one interface, with its equal-height limit.
fn beta(ha: f64, hb: f64, eta: f64) -> f64 {
    if (hb - ha).abs() < 1e-12 * ha.max(hb) {
        (0.5 * (ha + hb)).powf(-eta)
    } else {
        0.5 * (eta + 2.0) * (hb * hb - ha * ha) / (hb.powf(eta + 2.0) - ha.powf(eta + 2.0))
    }
}

/// γ of one interface (left-to-right orientation), zero in the equal-height
/// limit.
fn gamma(ha: f64, hb: f64, eta: f64) -> f64 {
    if (hb - ha).abs() < 1e-12 * ha.max(hb) {
        0.0
    } else {
        1.0 / hb - 1.0 / ha
            + beta(ha, hb, eta) * (hb.powf(eta - 1.0) - ha.powf(eta - 1.0)) / (eta - 1.0)
    }
}

/// Plain analytic friction decay (exact solution of q' = -k q ‖q‖ h^-η).
fn plain_friction(h: f64, q_comp: f64, q_norm: f64, k: f64, dt: f64, eta: f64) -> f64 {
    if h <= H_DRY {
        return 0.0;
    }
    let he = h.powf(eta);
    he * q_comp / (he + k * dt * q_norm)
}

/// Directional well-balanced friction average; `None` requests the plain
/// update. The average is only meaningful on a moving wet configuration
/// with height variation, so zero signs, dry neighbors, a vanishing γ sum
/// or a non-positive result all fall back.
#[allow(clippy::too_many_arguments)]
fn wb_h_eta(
    h_prev: f64,
    h_this: f64,
    h_next: f64,
    q_half: f64,
    q_n: f64,
    k: f64,
    dt: f64,
    dw: f64,
    eta: f64,
) -> Option<f64> {
    let mu_n = sgn(q_n);
    let mu_half = sgn(q_half);
    if mu_n == 0.0 || mu_half == 0.0 {
        return None;
    }
    if h_prev <= H_DRY || h_this <= H_DRY || h_next <= H_DRY {
        return None;
    }
    let beta_sum = beta(h_prev, h_this, eta) + beta(h_this, h_next, eta);
    let gamma_sum = gamma(h_prev, h_this, eta) + gamma(h_this, h_next, eta);
    if gamma_sum == 0.0 {
        return None;
    }
    let den = k * mu_n * dw * beta_sum - gamma_sum;
    let h_eta = 2.0 * k * mu_half * dw / den + k * dt * mu_half * q_n;
    if !h_eta.is_finite() || h_eta <= 0.0 {
        return None;
    }
    Some(h_eta)
}

/// Semi-implicit friction update (second step). Heights are kept from the
/// half state; each discharge component is damped either by the plain
/// analytic solution or, on moving wet configurations, by the consistent
/// average that restores the well-balancedness of moving friction steady
/// states. Ghosts of `half` must be filled.
pub fn friction_implicit_step(
    half: &FieldSet,
    fields_n: &FieldSet,
    grid: &Grid2D,
    params: &PhysParams,
    dt: f64,
) -> FieldSet {
    let mut out = half.clone();
    let k = params.k_manning;
    let eta = params.eta;
    for j in 0..grid.ny as isize {
        for i in 0..grid.nx as isize {
            let w = half.s(i, j);
            let wn = fields_n.s(i, j);
            if w.h <= H_DRY {
                out.set_s(i, j, ConservedState::new(w.h, 0.0, 0.0));
                continue;
            }
            if k == 0.0 {
                continue;
            }
            let q_norm = (w.qx * w.qx + w.qy * w.qy).sqrt();
            let qx = match wb_h_eta(
                half.s(i - 1, j).h,
                w.h,
                half.s(i + 1, j).h,
                w.qx,
                wn.qx,
                k,
                dt,
                grid.dx,
                eta,
            ) {
                Some(h_eta) => h_eta * w.qx / (h_eta + k * dt * q_norm),
                None => plain_friction(w.h, w.qx, q_norm, k, dt, eta),
            };
            let qy = match wb_h_eta(
                half.s(i, j - 1).h,
                w.h,
                half.s(i, j + 1).h,
                w.qy,
                wn.qy,
                k,
                dt,
                grid.dy,
                eta,
            ) {
                Some(h_eta) => h_eta * w.qy / (h_eta + k * dt * q_norm),
                None => plain_friction(w.h, w.qy, q_norm, k, dt, eta),
            };
            out.set_s(i, j, ConservedState::new(w.h, qx, qy));
        }
    }
    out
}

/// One full first-order step (explicit + friction) including the ghost fill
/// of the intermediate state. `fields` must already have filled ghosts.
pub fn fo_step(
    fields: &FieldSet,
    grid: &Grid2D,
    params: &PhysParams,
    bc: &BoundarySpec,
    exact: Option<&dyn AnalyticSolution>,
    dt: f64,
    cutoff_c: f64,
) -> Result<FieldSet> {
    let mut half = explicit_step(fields, grid, params, dt, cutoff_c)?;
    fill_ghosts(&mut half, grid, bc, 0, exact)?;
    Ok(friction_implicit_step(&half, fields, grid, params, dt))
}
