//! Initial conditions and analytic interface networks.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{dist, point_segment_distance};
use crate::grid::{Domain, Grid};
use crate::regional::{Indicator, RegionalField};

/// A straight segment or a circular arc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Primitive {
    Segment([f64; 2], [f64; 2]),
    /// Counter-clockwise arc from angle `start` over `sweep` radians.
    Arc { center: [f64; 2], radius: f64, start: f64, sweep: f64 },
}

impl Primitive {
    pub fn circle(center: [f64; 2], radius: f64) -> Self {
        Primitive::Arc { center, radius, start: 0.0, sweep: 2.0 * PI }
    }

    pub fn distance(&self, p: [f64; 2]) -> f64 {
        match *self {
            Primitive::Segment(a, b) => point_segment_distance(p, a, b),
            Primitive::Arc { center, radius, start, sweep } => {
                let d = [p[0] - center[0], p[1] - center[1]];
                let r = d[0].hypot(d[1]);
                if sweep >= 2.0 * PI || angle_in(d[1].atan2(d[0]), start, sweep) {
                    (r - radius).abs()
                } else {
                    let e0 = self.point_at(0.0);
                    let e1 = self.point_at(1.0);
                    dist(p, e0).min(dist(p, e1))
                }
            }
        }
    }

    fn point_at(&self, t: f64) -> [f64; 2] {
        match *self {
            Primitive::Segment(a, b) => [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])],
            Primitive::Arc { center, radius, start, sweep } => {
                let a = start + t * sweep;
                [center[0] + radius * a.cos(), center[1] + radius * a.sin()]
            }
        }
    }

    fn length(&self) -> f64 {
        match *self {
            Primitive::Segment(a, b) => dist(a, b),
            Primitive::Arc { radius, sweep, .. } => radius * sweep.abs(),
        }
    }

    fn map(&self, f: &impl Fn([f64; 2]) -> [f64; 2], rot: f64) -> Self {
        match *self {
            Primitive::Segment(a, b) => Primitive::Segment(f(a), f(b)),
            Primitive::Arc { center, radius, start, sweep } => {
                Primitive::Arc { center: f(center), radius, start: start + rot, sweep }
            }
        }
    }
}

fn angle_in(a: f64, start: f64, sweep: f64) -> bool {
    (a - start).rem_euclid(2.0 * PI) <= sweep
}

/// Exact interface network made of primitives, with its junction points.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AnalyticNetwork {
    pub primitives: Vec<Primitive>,
    pub junctions: Vec<[f64; 2]>,
}

impl AnalyticNetwork {
    pub fn distance(&self, p: [f64; 2]) -> f64 {
        self.primitives.iter().map(|q| q.distance(p)).fold(f64::INFINITY, f64::min)
    }

    /// Points along the network inside `domain`, spaced at most `spacing`.
    pub fn sample(&self, spacing: f64, domain: &Domain) -> Vec<[f64; 2]> {
        let mut out = Vec::new();
        for q in &self.primitives {
            let n = ((q.length() / spacing).ceil() as usize).max(1);
            for k in 0..=n {
                let p = q.point_at(k as f64 / n as f64);
                if domain.contains(p) {
                    out.push(p);
                }
            }
        }
        out
    }

    pub fn translated(&self, d: [f64; 2]) -> Self {
        let f = |p: [f64; 2]| [p[0] + d[0], p[1] + d[1]];
        self.mapped(&f, 0.0)
    }

    /// Counter-clockwise rotation by `theta` about `c`.
    pub fn rotated(&self, c: [f64; 2], theta: f64) -> Self {
        let (s, co) = theta.sin_cos();
        let f = |p: [f64; 2]| {
            let d = [p[0] - c[0], p[1] - c[1]];
            [c[0] + co * d[0] - s * d[1], c[1] + s * d[0] + co * d[1]]
        };
        self.mapped(&f, theta)
    }

    fn mapped(&self, f: &impl Fn([f64; 2]) -> [f64; 2], rot: f64) -> Self {
        Self {
            primitives: self.primitives.iter().map(|q| q.map(f, rot)).collect(),
            junctions: self.junctions.iter().map(|&p| f(p)).collect(),
        }
    }
}

fn sample(grid: Grid, net: &AnalyticNetwork, region: impl Fn([f64; 2]) -> Indicator) -> RegionalField {
    RegionalField::from_fn(grid, |p| (net.distance(p), region(p)))
}

pub fn circle_network(center: [f64; 2], r: f64) -> AnalyticNetwork {
    AnalyticNetwork { primitives: vec![Primitive::circle(center, r)], junctions: vec![] }
}

/// Two regions: 2 inside the circle, 1 outside.
pub fn init_circle_two_region(r: f64, center: [f64; 2], grid: Grid) -> RegionalField {
    let net = circle_network(center, r);
    sample(grid, &net, |p| if dist(p, center) < r { 2 } else { 1 })
}

/// Disk cut along a diameter with direction angle `angle`.
pub fn split_disk_network(r0: f64, center: [f64; 2], angle: f64) -> AnalyticNetwork {
    let u = [angle.cos(), angle.sin()];
    let a = [center[0] - r0 * u[0], center[1] - r0 * u[1]];
    let b = [center[0] + r0 * u[0], center[1] + r0 * u[1]];
    AnalyticNetwork {
        primitives: vec![Primitive::circle(center, r0), Primitive::Segment(a, b)],
        junctions: vec![a, b],
    }
}

/// Background 1, half-disk 2 on the left of the diameter direction, half-disk 3 on its right.
pub fn init_split_disk(r0: f64, center: [f64; 2], angle: f64, grid: Grid) -> RegionalField {
    let net = split_disk_network(r0, center, angle);
    let u = [angle.cos(), angle.sin()];
    sample(grid, &net, |p| split_disk_region(p, r0, center, u))
}

fn split_disk_region(p: [f64; 2], r0: f64, c: [f64; 2], u: [f64; 2]) -> Indicator {
    let d = [p[0] - c[0], p[1] - c[1]];
    if d[0].hypot(d[1]) >= r0 {
        1
    } else if u[0] * d[1] - u[1] * d[0] >= 0.0 {
        2
    } else {
        3
    }
}

/// Three rays from `o` at 180, 60 and -60 degrees.
pub fn triple_point_network(o: [f64; 2]) -> AnalyticNetwork {
    let ray = |deg: f64| {
        let a = deg.to_radians();
        Primitive::Segment(o, [o[0] + 2.0 * a.cos(), o[1] + 2.0 * a.sin()])
    };
    AnalyticNetwork { primitives: vec![ray(180.0), ray(60.0), ray(-60.0)], junctions: vec![o] }
}

/// Region 1 to the right of the junction, 2 above-left, 3 below-left.
pub fn init_triple_point(o: [f64; 2], grid: Grid) -> RegionalField {
    let net = triple_point_network(o);
    sample(grid, &net, |p| {
        let a = (p[1] - o[1]).atan2(p[0] - o[0]).to_degrees().rem_euclid(360.0);
        if (60.0..180.0).contains(&a) {
            2
        } else if (180.0..300.0).contains(&a) {
            3
        } else {
            1
        }
    })
}

/// Circle of radius `r0` centered at `center`, halved by a vertical diameter.
pub fn init_double_triple(r0: f64, center: [f64; 2], grid: Grid) -> RegionalField {
    init_split_disk(r0, center, 0.5 * std::f64::consts::PI, grid)
}

pub fn t_junction_network() -> AnalyticNetwork {
    AnalyticNetwork {
        primitives: vec![
            Primitive::Segment([-1.0, 0.5], [2.0, 0.5]),
            Primitive::Segment([0.5, 0.5], [0.5, 2.0]),
        ],
        junctions: vec![[0.5, 0.5]],
    }
}

/// Region 1 below `y = 0.5`; above it region 2 left and 3 right of `x = 0.5`.
pub fn init_t_junction(grid: Grid) -> RegionalField {
    sample(grid, &t_junction_network(), |p| {
        if p[1] < 0.5 {
            1
        } else if p[0] < 0.5 {
            2
        } else {
            3
        }
    })
}

pub fn concentric_network(center: [f64; 2], r_inner: f64, r_outer: f64) -> AnalyticNetwork {
    AnalyticNetwork {
        primitives: vec![Primitive::circle(center, r_inner), Primitive::circle(center, r_outer)],
        junctions: vec![],
    }
}

/// Background 1, annulus 2, core 3.
pub fn init_concentric_circles(center: [f64; 2], r_inner: f64, r_outer: f64, grid: Grid) -> RegionalField {
    let net = concentric_network(center, r_inner, r_outer);
    sample(grid, &net, |p| {
        let r = dist(p, center);
        if r < r_inner {
            3
        } else if r < r_outer {
            2
        } else {
            1
        }
    })
}

/// Background `a = 1` around a disk split vertically into `b = 2` (left) and `c = 3` (right).
pub fn init_three_region_spiral(r: f64, center: [f64; 2], grid: Grid) -> RegionalField {
    init_split_disk(r, center, 0.5 * PI, grid)
}

/// Seeded random sites in the domain, at least `min_sep` apart (periodic metric).
pub fn voronoi_sites(n: usize, seed: u64, domain: &Domain, min_sep: f64) -> Vec<[f64; 2]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sites: Vec<[f64; 2]> = Vec::with_capacity(n);
    let mut sep = min_sep;
    let mut attempts = 0;
    while sites.len() < n {
        let p = [domain.x0 + rng.gen::<f64>() * domain.lx, domain.y0 + rng.gen::<f64>() * domain.ly];
        if sites.iter().all(|&q| periodic_dist(p, q, domain) >= sep) {
            sites.push(p);
        }
        attempts += 1;
        if attempts % 10_000 == 0 {
            sep *= 0.9;
        }
    }
    sites
}

fn periodic_dist(p: [f64; 2], q: [f64; 2], d: &Domain) -> f64 {
    let dx = (p[0] - q[0]).abs();
    let dy = (p[1] - q[1]).abs();
    dx.min(d.lx - dx).hypot(dy.min(d.ly - dy))
}

/// Periodic Voronoi partition of seeded random sites. Region `k + 1` belongs
/// to site `k`; distances are exact distances to the cell boundary.
pub fn init_voronoi_regions(n_regions: usize, seed: u64, grid: Grid) -> RegionalField {
    let domain = grid.domain();
    let min_sep = 0.5 * (domain.lx * domain.ly / n_regions as f64).sqrt();
    let sites = voronoi_sites(n_regions, seed, &domain, min_sep);
    voronoi_field(&sites, grid)
}

pub fn voronoi_field(sites: &[[f64; 2]], grid: Grid) -> RegionalField {
    let d = grid.domain();
    let images: Vec<([f64; 2], usize)> = sites
        .iter()
        .enumerate()
        .flat_map(|(k, s)| {
            (-1..=1).flat_map(move |a| {
                (-1..=1).map(move |b| ([s[0] + a as f64 * d.lx, s[1] + b as f64 * d.ly], k))
            })
        })
        .collect();
    RegionalField::from_fn(grid, |p| {
        let (best, _) = images
            .iter()
            .enumerate()
            .map(|(m, (s, _))| (m, dist(p, *s)))
            .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
        let (s1, k1) = images[best];
        let d1 = dist(p, s1).powi(2);
        let mut dmin = f64::INFINITY;
        for (m, &(s, _)) in images.iter().enumerate() {
            if m == best {
                continue;
            }
            let sep = dist(s, s1);
            if sep <= 0.0 {
                continue;
            }
            dmin = dmin.min((dist(p, s).powi(2) - d1) / (2.0 * sep));
        }
        (dmin, k1 as Indicator + 1)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{extract_interface, region_areas};
    use crate::grid::BoundarySpec;

    fn unit(n: usize) -> Grid {
        Grid::unit_square(n, BoundarySpec::symmetry()).unwrap()
    }

    #[test]
    fn circle_values() {
        let g = unit(64);
        let f = init_circle_two_region(0.2, [0.5, 0.5], g);
        let (i, j) = g.cell_of([0.5, 0.5]);
        assert!((f.at(i, j).0 - (0.2 - dist(g.center(i, j), [0.5, 0.5]))).abs() < 1e-15);
        assert_eq!(f.at(i, j).1, 2);
        let (i, j) = g.cell_of([0.7, 0.5]);
        assert!(f.at(i, j).0 < g.h);
    }

    #[test]
    fn split_disk_geometry() {
        let g = unit(128);
        let f = init_split_disk(0.3, [0.5, 0.5], 0.0, g);
        let a = region_areas(&f);
        let half = 0.5 * PI * 0.09;
        assert!((a[&2] - half).abs() / half < 2e-3);
        assert!((a[&3] - half).abs() / half < 2e-3);
        let graph = extract_interface(&f);
        assert_eq!(graph.junctions.len(), 2, "{:?}", graph.junctions);
        for p in [[0.2, 0.5], [0.8, 0.5]] {
            assert!(graph.junctions.iter().any(|j| dist(j.point, p) < g.h));
        }
        // Inside the disk on the diameter.
        let (i, j) = g.cell_of([0.5, 0.51]);
        let c = g.center(i, j);
        assert!((f.at(i, j).0 - (c[1] - 0.5).abs()).abs() < 1e-15);
    }

    #[test]
    fn triple_point_sectors() {
        let g = unit(64);
        let f = init_triple_point([0.2, 0.5], g);
        assert_eq!(f.at(g.cell_of([0.8, 0.5]).0, g.cell_of([0.8, 0.5]).1).1, 1);
        assert_eq!(f.at(g.cell_of([0.1, 0.6]).0, g.cell_of([0.1, 0.6]).1).1, 2);
        assert_eq!(f.at(g.cell_of([0.1, 0.4]).0, g.cell_of([0.1, 0.4]).1).1, 3);
        let net = triple_point_network([0.2, 0.5]).translated([0.4, 0.0]);
        assert_eq!(net.junctions, vec![[0.6000000000000001, 0.5]]);
    }

    #[test]
    fn voronoi_partition() {
        let g = Grid::unit_square(64, BoundarySpec::periodic()).unwrap();
        let a = init_voronoi_regions(15, 7, g);
        let b = init_voronoi_regions(15, 7, g);
        assert_eq!(a, b);
        assert_eq!(a.regions().len(), 15);
        let areas = region_areas(&a);
        assert!((areas.values().sum::<f64>() - 1.0).abs() < 1e-12);
        let sites = voronoi_sites(15, 7, &g.domain(), 0.5 * (1.0f64 / 15.0).sqrt());
        for (i, j) in g.interior_cells() {
            let p = g.center(i, j);
            let nearest = (0..15)
                .min_by(|&x, &y| periodic_dist(p, sites[x], &g.domain()).total_cmp(&periodic_dist(p, sites[y], &g.domain())))
                .unwrap();
            assert_eq!(a.at(i, j).1, nearest as u32 + 1);
        }
    }

    #[test]
    fn concentric_and_rotation() {
        let g = unit(64);
        let f = init_concentric_circles([0.5, 0.75], 0.08, 0.22, g);
        assert_eq!(f.regions(), vec![1, 2, 3]);
        let net = split_disk_network(0.3, [0.5, 0.5], 0.0).rotated([0.5, 0.5], 0.5 * PI);
        assert!(dist(net.junctions[0], [0.5, 0.2]) < 1e-12);
        assert!(net.distance([0.5, 0.5]) < 1e-12);
        assert!((net.distance([0.5, 0.9]) - 0.1).abs() < 1e-12);
    }
}
