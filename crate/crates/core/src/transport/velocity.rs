use std::collections::VecDeque;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::geometry::{normal_curvature, DEGENERATE_GRADIENT};
use crate::grid::{BoundaryCondition, Grid};
use crate::regional::{construct_block, construct_local_star, Indicator, RegionalField};

/// Which construction operator feeds geometric quantities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operator {
    Cr,
    CrStar,
}

impl FromStr for Operator {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "cr" => Ok(Operator::Cr),
            "crstar" | "cr*" => Ok(Operator::CrStar),
            _ => Err(format!("unknown operator `{s}` (expected cr or crstar)")),
        }
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Operator::Cr => "cr",
            Operator::CrStar => "crstar",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum VelocitySpec {
    Uniform([f64; 2]),
    /// Rigid rotation with angular velocity `omega` (counter-clockwise positive).
    Rotation { center: [f64; 2], omega: f64 },
    /// Deformation field on the unit square, reversed from `reversal` on.
    SingleVortex { reversal: f64 },
    /// Radial field of constant magnitude pointing away from `center`.
    Expansion { center: [f64; 2], speed: f64 },
    /// `u = gamma kappa n`, taken from the region that owns the cell and shared
    /// by every level set advected there.
    MeanCurvature { gamma: f64 },
    /// Unit normal speed; the interface between a pair of regions moves along
    /// the normal of the listed governing region.
    NormalDriven { rules: Vec<((Indicator, Indicator), Indicator)> },
}

impl VelocitySpec {
    /// Analytic fields depend only on position and time.
    pub fn is_analytic(&self) -> bool {
        !matches!(self, VelocitySpec::MeanCurvature { .. } | VelocitySpec::NormalDriven { .. })
    }

    pub fn is_curvature(&self) -> bool {
        matches!(self, VelocitySpec::MeanCurvature { .. })
    }

    /// Analytic velocity at a point; `None` for geometry-driven kinds.
    pub fn analytic(&self, p: [f64; 2], t: f64) -> Option<[f64; 2]> {
        match *self {
            VelocitySpec::Uniform(v) => Some(v),
            VelocitySpec::Rotation { center, omega } => {
                Some([-omega * (p[1] - center[1]), omega * (p[0] - center[0])])
            }
            VelocitySpec::SingleVortex { reversal } => {
                let (x, y) = (p[0], p[1]);
                let s = if t >= reversal { -1.0 } else { 1.0 };
                Some([
                    -s * 2.0 * (PI * x).sin().powi(2) * (2.0 * PI * y).sin(),
                    s * 2.0 * (PI * y).sin().powi(2) * (2.0 * PI * x).sin(),
                ])
            }
            VelocitySpec::Expansion { center, speed } => {
                let d = [p[0] - center[0], p[1] - center[1]];
                let r = d[0].hypot(d[1]);
                if r < DEGENERATE_GRADIENT {
                    Some([0.0, 0.0])
                } else {
                    Some([speed * d[0] / r, speed * d[1] / r])
                }
            }
            VelocitySpec::MeanCurvature { .. } | VelocitySpec::NormalDriven { .. } => None,
        }
    }

    fn governing(&self, a: Indicator, b: Indicator) -> Option<Indicator> {
        match self {
            VelocitySpec::NormalDriven { rules } => rules
                .iter()
                .find(|((p, q), _)| (*p == a && *q == b) || (*p == b && *q == a))
                .map(|r| r.1),
            _ => None,
        }
    }
}

/// Everything needed to evaluate the velocity acting on one local level set.
pub struct VelocityContext<'a> {
    pub spec: &'a VelocitySpec,
    pub field: &'a RegionalField,
    pub t: f64,
    pub operator: Operator,
    /// Region across the nearest interface, per padded cell (normal-driven flow).
    pub partner: Option<&'a [Indicator]>,
}

impl VelocityContext<'_> {
    /// Velocity advecting the level set of `region` at cell `(i, j)`.
    pub fn eval(&self, i: isize, j: isize, region: Indicator) -> [f64; 2] {
        let grid = self.field.grid();
        if let Some(v) = self.spec.analytic(grid.center(i, j), self.t) {
            return v;
        }
        match self.spec {
            VelocitySpec::MeanCurvature { gamma } => {
                // One velocity per cell, from the level set of the region that owns it.
                let own = self.field.chi[grid.idx(i, j)];
                let block = self.block(i, j, own);
                match normal_curvature(&block, grid.h) {
                    Some(g) => {
                        let cap = 1.0 / grid.h;
                        let k = gamma * g.curvature.clamp(-cap, cap);
                        [k * g.normal[0], k * g.normal[1]]
                    }
                    None => [0.0, 0.0],
                }
            }
            VelocitySpec::NormalDriven { .. } => {
                let k = grid.idx(i, j);
                let chi = self.field.chi[k];
                let other = if chi != region {
                    chi
                } else {
                    match self.partner {
                        Some(p) => p[k],
                        None => return [0.0, 0.0],
                    }
                };
                let Some(gov) = self.spec.governing(region, other) else {
                    return [0.0, 0.0];
                };
                let block = self.block(i, j, gov);
                normal_curvature(&block, grid.h).map_or([0.0, 0.0], |g| g.normal)
            }
            _ => unreachable!("analytic kinds handled above"),
        }
    }

    fn block(&self, i: isize, j: isize, region: Indicator) -> [[f64; 3]; 3] {
        match self.operator {
            Operator::CrStar => construct_local_star(self.field, i, j, region)
                .unwrap_or_else(|_| construct_block(self.field, i, j, region)),
            Operator::Cr => construct_block(self.field, i, j, region),
        }
    }
}

/// For every interior cell, the indicator on the other side of the nearest
/// interface, by breadth-first search from the cells adjacent to another region.
pub fn partner_map(field: &RegionalField) -> Vec<Indicator> {
    let grid = *field.grid();
    let n = grid.padded_len();
    let mut partner = vec![0 as Indicator; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for (i, j) in grid.interior_cells() {
        let k = grid.idx(i, j);
        let c = field.chi[k];
        // Nearest foreign cell in the 3x3 neighborhood, edge neighbors first.
        let order = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, 1), (1, -1), (-1, -1)];
        if let Some(&(di, dj)) = order.iter().find(|&&(di, dj)| field.chi[grid.idx(i + di, j + dj)] != c) {
            partner[k] = field.chi[grid.idx(i + di, j + dj)];
            seen[k] = true;
            queue.push_back((i, j));
        }
    }
    while let Some((i, j)) = queue.pop_front() {
        let k = grid.idx(i, j);
        for (di, dj) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
            let Some((ni, nj)) = neighbor(&grid, i + di, j + dj) else { continue };
            let nk = grid.idx(ni, nj);
            if !seen[nk] && field.chi[nk] == field.chi[k] {
                seen[nk] = true;
                partner[nk] = partner[k];
                queue.push_back((ni, nj));
            }
        }
    }
    for (i, j) in grid.interior_cells() {
        let k = grid.idx(i, j);
        if !seen[k] {
            partner[k] = field.chi[k];
        }
    }
    grid.fill_ghosts(&mut partner);
    partner
}

fn neighbor(grid: &Grid, i: isize, j: isize) -> Option<(isize, isize)> {
    let wrap = |a: isize, n: usize, bc: BoundaryCondition| match bc {
        BoundaryCondition::Periodic => Some(a.rem_euclid(n as isize)),
        BoundaryCondition::Symmetry => (a >= 0 && a < n as isize).then_some(a),
    };
    Some((wrap(i, grid.nx, grid.boundary.x)?, wrap(j, grid.ny, grid.boundary.y)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::BoundarySpec;

    #[test]
    fn single_vortex_values() {
        let v = VelocitySpec::SingleVortex { reversal: 3.0 };
        let a = v.analytic([0.5, 0.25], 0.0).unwrap();
        assert!((a[0] + 2.0).abs() < 1e-12 && a[1].abs() < 1e-12);
        let b = v.analytic([0.25, 0.5], 0.0).unwrap();
        assert!(b[0].abs() < 1e-12 && (b[1] - 2.0).abs() < 1e-12);
        let p = [0.3, 0.7];
        let before = v.analytic(p, 1.0).unwrap();
        let after = v.analytic(p, 3.5).unwrap();
        assert_eq!(after, [-before[0], -before[1]]);
    }

    #[test]
    fn rotation_fixed_point() {
        let v = VelocitySpec::Rotation { center: [0.5, 0.5], omega: 1.0 };
        assert_eq!(v.analytic([0.5, 0.5], 0.0).unwrap(), [0.0, 0.0]);
        assert!((v.analytic([0.6, 0.5], 0.0).unwrap()[1] - 0.1).abs() < 1e-15);
    }

    #[test]
    fn curvature_velocity_shrinks_disk() {
        let g = Grid::unit_square(64, BoundarySpec::symmetry()).unwrap();
        let c = [0.5, 0.5];
        let f = RegionalField::from_fn(g, |p| {
            let d = (p[0] - c[0]).hypot(p[1] - c[1]) - 0.25;
            (d.abs(), if d < 0.0 { 2 } else { 1 })
        });
        let spec = VelocitySpec::MeanCurvature { gamma: 1.0 };
        let ctx = VelocityContext { spec: &spec, field: &f, t: 0.0, operator: Operator::CrStar, partner: None };
        // Cell just right of the center, inside the disk at distance ~0.2 from c.
        let (i, j) = g.cell_of([0.7, 0.5]);
        for r in [1, 2] {
            let v = ctx.eval(i, j, r);
            assert!(v[0] < 0.0, "region {r}: {v:?}");
        }
    }

    #[test]
    fn partners_across_interfaces() {
        let g = Grid::unit_square(16, BoundarySpec::symmetry()).unwrap();
        let f = RegionalField::from_fn(g, |p| {
            if p[0] < 0.5 {
                (0.5 - p[0], 1)
            } else if p[1] < 0.5 {
                (0.1, 2)
            } else {
                (0.1, 3)
            }
        });
        let pm = partner_map(&f);
        assert_eq!(pm[g.idx(0, 2)], 2);
        assert_eq!(pm[g.idx(0, 13)], 3);
        assert_eq!(pm[g.idx(15, 6)], 3);
        assert_eq!(pm[g.idx(15, 9)], 2);
        assert_eq!(pm[g.idx(8, 1)], 1);
    }

    #[test]
    fn normal_driven_follows_rule() {
        let g = Grid::unit_square(32, BoundarySpec::symmetry()).unwrap();
        let f = RegionalField::from_fn(g, |p| ((p[0] - 0.5).abs(), if p[0] < 0.5 { 1 } else { 2 }));
        let spec = VelocitySpec::NormalDriven { rules: vec![((1, 2), 2)] };
        let pm = partner_map(&f);
        let ctx = VelocityContext { spec: &spec, field: &f, t: 0.0, operator: Operator::Cr, partner: Some(&pm) };
        for (i, r) in [(3, 1), (15, 1), (16, 2), (28, 2), (16, 1)] {
            let v = ctx.eval(i, 10, r);
            assert!((v[0] - 1.0).abs() < 1e-12 && v[1].abs() < 1e-12, "{i} {r} {v:?}");
        }
    }
}
