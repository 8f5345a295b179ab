//! Time integration of the regional field.
//!
//! Every cell is advanced through the signed local level set of its primary
//! region. Cells whose near neighborhood holds one region keep their
//! indicator, two-region neighborhoods switch to the secondary indicator on a
//! sign change, and complex neighborhoods advect every local region and
//! reassemble the result with the reconstruction operator.

mod velocity;

use std::fmt;
use std::str::FromStr;

pub use velocity::{partner_map, Operator, VelocityContext, VelocitySpec};

use crate::error::Result;
use crate::grid::NarrowBand;
use crate::regional::{local_index_set, reconstruct_unchecked, Indicator, LocalIndexSet, RegionalField};
use crate::schemes::{hj_upwind_gradient, semi_lagrangian_advect, SchemeKind};

/// Strong-stability-preserving Runge-Kutta variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RkOrder {
    Euler,
    Ssp2,
    Ssp3,
}

impl RkOrder {
    /// Weight of the step-start state in each sub-step.
    pub fn alphas(self) -> &'static [f64] {
        match self {
            RkOrder::Euler => &[0.0],
            RkOrder::Ssp2 => &[0.0, 0.5],
            RkOrder::Ssp3 => &[0.0, 0.75, 1.0 / 3.0],
        }
    }
}

impl FromStr for RkOrder {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "1" | "euler" => Ok(RkOrder::Euler),
            "2" | "ssp2" => Ok(RkOrder::Ssp2),
            "3" | "ssp3" => Ok(RkOrder::Ssp3),
            _ => Err(format!("unknown rk order `{s}` (expected 1, 2 or 3)")),
        }
    }
}

impl fmt::Display for RkOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RkOrder::Euler => "1",
            RkOrder::Ssp2 => "2",
            RkOrder::Ssp3 => "3",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepPlan {
    pub dt: f64,
    pub rk: RkOrder,
    pub scheme: SchemeKind,
    pub operator: Operator,
}

/// Stable time step: `cfl h / max|v|` for advection, `h^2 / (4 gamma)` for
/// curvature flow, `dt_max` when nothing moves. Never exceeds `dt_max`.
pub fn compute_dt(max_speed: f64, h: f64, cfl: f64, curvature_gamma: Option<f64>, dt_max: f64) -> f64 {
    let dt = match curvature_gamma {
        Some(g) if g > 0.0 => h * h / (4.0 * g),
        Some(_) => dt_max,
        None if max_speed > 0.0 => cfl * h / max_speed,
        None => dt_max,
    };
    dt.min(dt_max)
}

/// Largest velocity magnitude over the interior (or the band) at time `t`.
pub fn max_speed(spec: &VelocitySpec, field: &RegionalField, t: f64, band: Option<&NarrowBand>) -> f64 {
    match spec {
        VelocitySpec::NormalDriven { .. } => 1.0,
        VelocitySpec::MeanCurvature { gamma } => gamma.abs() / field.grid().h,
        _ => {
            let grid = field.grid();
            let mut m = 0.0f64;
            for (i, j) in grid.interior_cells() {
                if band.is_some_and(|b| !b.contains(grid.idx(i, j))) {
                    continue;
                }
                let v = spec.analytic(grid.center(i, j), t).unwrap_or([0.0, 0.0]);
                m = m.max(v[0].hypot(v[1]));
            }
            m
        }
    }
}

/// Inputs shared by all cells of one Runge-Kutta sub-step.
pub struct Substep<'a> {
    /// State at the start of the time step.
    pub base: &'a RegionalField,
    /// Current sub-step input.
    pub stage: &'a RegionalField,
    pub velocity: VelocityContext<'a>,
    pub dt: f64,
    pub alpha: f64,
    pub scheme: SchemeKind,
}

impl Substep<'_> {
    /// Updated value of the local level set of `region` at `(i, j)`.
    #[inline]
    pub fn advect(&self, i: isize, j: isize, region: Indicator) -> f64 {
        let f = self.stage;
        let grid = f.grid();
        let k = grid.idx(i, j);
        let sx: [f64; 7] = std::array::from_fn(|t| f.signed(k + t - 3, region));
        let stride = grid.stride();
        let sy: [f64; 7] = std::array::from_fn(|t| f.signed(k + t * stride - 3 * stride, region));
        let v = self.velocity.eval(i, j, region);
        let euler = sx[3] - self.dt * hj_upwind_gradient(&sx, &sy, v, self.scheme, grid.h);
        if self.alpha == 0.0 {
            euler
        } else {
            self.alpha * self.base.signed(k, region) + (1.0 - self.alpha) * euler
        }
    }
}

/// Update of a cell whose near neighborhood holds a single region.
pub fn substep_full(sub: &Substep<'_>, i: isize, j: isize, set: &LocalIndexSet) -> (f64, Indicator) {
    let chi = set.primary();
    (sub.advect(i, j, chi).max(0.0), chi)
}

/// Update of a cell whose near neighborhood holds exactly two regions.
pub fn substep_two_region(sub: &Substep<'_>, i: isize, j: isize, set: &LocalIndexSet) -> (f64, Indicator) {
    let s = set.as_slice();
    let phi = sub.advect(i, j, s[0]);
    if phi >= 0.0 {
        (phi, s[0])
    } else {
        (-phi, s[1])
    }
}

/// Update of a cell whose near neighborhood holds three or more regions.
pub fn substep_complex(sub: &Substep<'_>, i: isize, j: isize, set: &LocalIndexSet) -> (f64, Indicator) {
    let s = set.as_slice();
    let phi = sub.advect(i, j, s[0]);
    if phi >= 0.0 {
        return (phi, s[0]);
    }
    let mut vals = [0.0; 9];
    vals[0] = phi;
    for (m, &r) in s.iter().enumerate().skip(1) {
        vals[m] = sub.advect(i, j, r);
    }
    reconstruct_unchecked(&vals[..s.len()], s)
}

fn run_substep(sub: &Substep<'_>, band: Option<&NarrowBand>) -> RegionalField {
    let stage = sub.stage;
    let grid = *stage.grid();
    let mut out = stage.clone();
    let mut update = |i: isize, j: isize| {
        let set = local_index_set(stage, i, j);
        let (d, c) = match set.len() {
            1 => substep_full(sub, i, j, &set),
            2 => substep_two_region(sub, i, j, &set),
            _ => substep_complex(sub, i, j, &set),
        };
        let k = grid.idx(i, j);
        out.varphi[k] = d;
        out.chi[k] = c;
    };
    match band {
        Some(b) => {
            for &k in &b.active {
                let (i, j) = grid.ij(k);
                update(i, j);
            }
        }
        None => {
            for (i, j) in grid.interior_cells() {
                update(i, j);
            }
        }
    }
    out.fill_ghosts();
    out
}

/// Advance the field by one time step starting at time `t`.
pub fn advance(
    field: &RegionalField,
    spec: &VelocitySpec,
    plan: &StepPlan,
    t: f64,
    band: Option<&NarrowBand>,
) -> Result<RegionalField> {
    if plan.scheme == SchemeKind::SemiLagrangian {
        return advance_semi_lagrangian(field, spec, plan, t, band);
    }
    let mut stage = field.clone();
    for &alpha in plan.rk.alphas() {
        let partner = matches!(spec, VelocitySpec::NormalDriven { .. }).then(|| partner_map(&stage));
        let sub = Substep {
            base: field,
            stage: &stage,
            velocity: VelocityContext {
                spec,
                field: &stage,
                t,
                operator: plan.operator,
                partner: partner.as_deref(),
            },
            dt: plan.dt,
            alpha,
            scheme: plan.scheme,
        };
        let next = run_substep(&sub, band);
        stage = next;
    }
    Ok(stage)
}

fn advance_semi_lagrangian(
    field: &RegionalField,
    spec: &VelocitySpec,
    plan: &StepPlan,
    t: f64,
    band: Option<&NarrowBand>,
) -> Result<RegionalField> {
    let grid = *field.grid();
    let partner = matches!(spec, VelocitySpec::NormalDriven { .. }).then(|| partner_map(field));
    let ctx = VelocityContext { spec, field, t, operator: plan.operator, partner: partner.as_deref() };
    semi_lagrangian_advect(
        field,
        |p| match spec.analytic(p, t) {
            Some(v) => v,
            None => {
                let (i, j) = grid.cell_of(p);
                ctx.eval(i, j, field.chi[grid.idx(i, j)])
            }
        },
        plan.dt,
        band,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{rebuild_narrow_band, BoundarySpec, Grid};

    fn plan(scheme: SchemeKind, dt: f64) -> StepPlan {
        StepPlan { dt, rk: RkOrder::Euler, scheme, operator: Operator::Cr }
    }

    fn three_sector(n: usize) -> RegionalField {
        let g = Grid::unit_square(n, BoundarySpec::symmetry()).unwrap();
        let o = [0.4, 0.5];
        RegionalField::from_fn(g, |p| {
            let v = [p[0] - o[0], p[1] - o[1]];
            let rays = [0.0f64, 120.0, 240.0].map(|a| [a.to_radians().cos(), a.to_radians().sin()]);
            let d = rays
                .iter()
                .map(|u| {
                    let t = (v[0] * u[0] + v[1] * u[1]).max(0.0);
                    (v[0] - t * u[0]).hypot(v[1] - t * u[1])
                })
                .fold(f64::INFINITY, f64::min);
            let a = v[1].atan2(v[0]).to_degrees().rem_euclid(360.0);
            (d, 1 + (a / 120.0).floor() as u32)
        })
    }

    #[test]
    fn dt_rules() {
        assert_eq!(compute_dt(1.0, 1.0 / 64.0, 0.6, None, 1.0), 0.6 / 64.0);
        assert_eq!(compute_dt(5.0, 1.0 / 128.0, 0.6, Some(1.0), 1.0), 1.0 / 65536.0);
        assert_eq!(compute_dt(0.0, 1.0 / 64.0, 0.6, None, 0.25), 0.25);
    }

    #[test]
    fn zero_velocity_is_identity() {
        let f = three_sector(32);
        for s in SchemeKind::ALL {
            let out = advance(&f, &VelocitySpec::Uniform([0.0, 0.0]), &plan(s, 0.01), 0.0, None).unwrap();
            assert_eq!(out, f, "{s}");
        }
    }

    #[test]
    fn linear_profile_drops_by_dt() {
        let g = Grid::unit_square(32, BoundarySpec::symmetry()).unwrap();
        // Single region with varphi = x + 1: stays single-region.
        let f = RegionalField::from_fn(g, |p| (p[0] + 1.0, 1));
        let dt = 0.25 * g.h;
        let out = advance(&f, &VelocitySpec::Uniform([1.0, 0.0]), &plan(SchemeKind::Weno5, dt), 0.0, None).unwrap();
        for (i, j) in g.interior_cells().filter(|&(i, _)| (4..28).contains(&i)) {
            assert!((out.at(i, j).0 - (f.at(i, j).0 - dt)).abs() < 1e-13);
        }
    }

    #[test]
    fn two_region_flip() {
        let g = Grid::unit_square(32, BoundarySpec::symmetry()).unwrap();
        // Interface just left of the center of column 16.
        let xi = g.center(16, 0)[0] - 0.1 * g.h;
        let f = RegionalField::from_fn(g, |p| ((p[0] - xi).abs(), if p[0] < xi { 1 } else { 2 }));
        let dt = 0.5 * g.h;
        let out = advance(&f, &VelocitySpec::Uniform([1.0, 0.0]), &plan(SchemeKind::Weno5, dt), 0.0, None).unwrap();
        let (d, c) = out.at(16, 10);
        assert_eq!(c, 1);
        assert!((d - 0.4 * g.h).abs() < 1e-12);
        assert_eq!(out.at(20, 10).1, 2);
    }

    #[test]
    fn indicators_stay_local() {
        let f = three_sector(48);
        let spec = VelocitySpec::Rotation { center: [0.5, 0.5], omega: 1.0 };
        let g = *f.grid();
        let dt = 0.9 * g.h / max_speed(&spec, &f, 0.0, None);
        for s in [SchemeKind::Upwind1, SchemeKind::Weno5, SchemeKind::WenoCu6, SchemeKind::SemiLagrangian] {
            let out = advance(&f, &spec, &plan(s, dt), 0.0, None).unwrap();
            for (i, j) in g.interior_cells() {
                assert!(local_index_set(&f, i, j).contains(out.at(i, j).1), "{s} at {i},{j}");
                assert!(out.at(i, j).0 >= 0.0);
            }
        }
    }

    #[test]
    fn narrow_band_matches_full_update_inside_band() {
        let f = three_sector(48);
        let spec = VelocitySpec::Uniform([0.7, -0.3]);
        let g = *f.grid();
        let band = rebuild_narrow_band(&f, 8).unwrap();
        let p = StepPlan { dt: 0.5 * g.h, rk: RkOrder::Ssp2, scheme: SchemeKind::Weno5, operator: Operator::Cr };
        let full = advance(&f, &spec, &p, 0.0, None).unwrap();
        let banded = advance(&f, &spec, &p, 0.0, Some(&band)).unwrap();
        // Stage one changes the band's outer rim, so compare on the core only.
        for &k in &band.core {
            let (i, j) = g.ij(k);
            if f.varphi[k] < 4.0 * g.h {
                assert_eq!(full.at(i, j), banded.at(i, j));
            }
        }
    }
}
