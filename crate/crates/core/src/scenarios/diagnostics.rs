//! Area tracking, edge counting and band counting.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::geometry::{dist, extract_interface, point_segment_distance, region_areas, InterfaceGraph};
use crate::grid::Domain;
use crate::regional::{Indicator, RegionalField};
use crate::scenarios::init::AnalyticNetwork;

/// Predicted area rate of an `n`-edged region under curvature flow.
pub fn mullins_rate(edges: usize, gamma: f64) -> f64 {
    2.0 * PI * gamma * (edges as f64 / 6.0 - 1.0)
}

/// Number of distinct neighbors of each region sharing more than `min_length` of interface.
pub fn edge_counts(graph: &InterfaceGraph, min_length: f64) -> BTreeMap<Indicator, usize> {
    let mut shared: BTreeMap<(Indicator, Indicator), f64> = BTreeMap::new();
    for s in &graph.segments {
        *shared.entry(s.pair).or_default() += s.length();
    }
    let mut out: BTreeMap<Indicator, usize> = BTreeMap::new();
    for (&(a, b), &len) in &shared {
        out.entry(a).or_default();
        out.entry(b).or_default();
        if len > min_length {
            *out.get_mut(&a).unwrap() += 1;
            *out.get_mut(&b).unwrap() += 1;
        }
    }
    out
}

/// Areas and edge counts of every region at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct AreaSample {
    pub t: f64,
    pub areas: BTreeMap<Indicator, f64>,
    pub edges: BTreeMap<Indicator, usize>,
}

impl AreaSample {
    pub fn measure(t: f64, field: &RegionalField, min_edge_length: f64) -> Self {
        let graph = extract_interface(field);
        Self { t, areas: region_areas(field), edges: edge_counts(&graph, min_edge_length) }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RegionSeries {
    pub region: Indicator,
    pub times: Vec<f64>,
    pub areas: Vec<f64>,
    pub edges: Vec<usize>,
}

/// Per-region time series; a region that vanishes contributes area 0 and 0 edges afterwards.
pub fn track_region_areas(samples: &[AreaSample]) -> Vec<RegionSeries> {
    let mut regions: Vec<Indicator> = samples.iter().flat_map(|s| s.areas.keys().copied()).collect();
    regions.sort_unstable();
    regions.dedup();
    regions
        .into_iter()
        .map(|r| RegionSeries {
            region: r,
            times: samples.iter().map(|s| s.t).collect(),
            areas: samples.iter().map(|s| s.areas.get(&r).copied().unwrap_or(0.0)).collect(),
            edges: samples.iter().map(|s| s.edges.get(&r).copied().unwrap_or(0)).collect(),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeOptions {
    /// Time dropped after the start and after every topology event.
    pub settle: f64,
    /// Shortest interval worth fitting, after trimming.
    pub min_duration: f64,
    /// Fewest samples per fit.
    pub min_points: usize,
    /// Samples with a smaller area are ignored.
    pub min_area: f64,
}

/// Least-squares `dA/dt` over one interval of constant edge count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeFit {
    pub region: Indicator,
    pub edges: usize,
    pub t0: f64,
    pub t1: f64,
    pub slope: f64,
}

impl SlopeFit {
    pub fn relative_error(&self, gamma: f64) -> f64 {
        let expected = mullins_rate(self.edges, gamma);
        (self.slope - expected).abs() / expected.abs().max(2.0 * PI * gamma / 6.0)
    }
}

/// Splits each series at changes of any region's edge count (topology events)
/// and fits a line to every remaining interval.
pub fn fit_area_slopes(series: &[RegionSeries], opts: &SlopeOptions) -> Vec<SlopeFit> {
    let Some(first) = series.first() else { return Vec::new() };
    let times = &first.times;
    let m = times.len();
    let mut events = vec![times.first().copied().unwrap_or(0.0)];
    for k in 1..m {
        if series.iter().any(|s| s.edges[k] != s.edges[k - 1]) {
            events.push(times[k]);
        }
    }
    let mut fits = Vec::new();
    for s in series {
        let mut start = 0;
        while start < m {
            let mut end = start + 1;
            while end < m && !events.iter().any(|&e| e == times[end]) {
                end += 1;
            }
            let settle_from = times[start] + opts.settle;
            let idx: Vec<usize> = (start..end)
                .filter(|&k| times[k] >= settle_from && s.areas[k] > opts.min_area && s.edges[k] > 0)
                .collect();
            if idx.len() >= opts.min_points {
                let (t0, t1) = (times[idx[0]], times[*idx.last().unwrap()]);
                if t1 - t0 >= opts.min_duration {
                    fits.push(SlopeFit {
                        region: s.region,
                        edges: s.edges[idx[0]],
                        t0,
                        t1,
                        slope: linear_slope(idx.iter().map(|&k| (times[k], s.areas[k]))),
                    });
                }
            }
            start = end;
        }
    }
    fits
}

fn linear_slope(points: impl Iterator<Item = (f64, f64)>) -> f64 {
    let pts: Vec<(f64, f64)> = points.collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Indicator changes met walking from `origin` along `dir` for `length`,
/// sampling the containing cell every half cell.
pub fn count_bands(field: &RegionalField, origin: [f64; 2], dir: [f64; 2], length: f64) -> usize {
    let grid = field.grid();
    let norm = dir[0].hypot(dir[1]);
    let steps = (2.0 * length / grid.h).ceil() as usize;
    let mut last: Option<Indicator> = None;
    let mut changes = 0;
    for s in 0..=steps {
        let d = length * s as f64 / steps as f64 / norm;
        let p = [origin[0] + d * dir[0], origin[1] + d * dir[1]];
        if !grid.domain().contains(p) {
            continue;
        }
        let (i, j) = grid.cell_of(p);
        let c = field.chi[grid.idx(i, j)];
        if last.is_some_and(|l| l != c) {
            changes += 1;
        }
        last = Some(c);
    }
    changes
}

/// Two-sided Hausdorff distance between an extracted network and an exact one.
/// Extracted vertices are measured against the exact curves and exact samples
/// (spaced by `spacing`, inside `domain`) against the extracted segments.
pub fn interface_hausdorff(
    graph: &InterfaceGraph,
    exact: &AnalyticNetwork,
    domain: &Domain,
    spacing: f64,
) -> Option<f64> {
    let samples = exact.sample(spacing, domain);
    if graph.segments.is_empty() || samples.is_empty() {
        return None;
    }
    let mut worst = 0.0f64;
    for s in &graph.segments {
        worst = worst.max(exact.distance(s.a)).max(exact.distance(s.b));
    }
    for y in samples {
        let mut best = f64::INFINITY;
        for s in &graph.segments {
            best = best.min(point_segment_distance(y, s.a, s.b));
            if best <= worst {
                break;
            }
        }
        worst = worst.max(best);
    }
    Some(worst)
}

/// Direction (radians, modulo pi) of the principal axis of the segments between `a` and `b`.
pub fn principal_axis_angle(graph: &InterfaceGraph, a: Indicator, b: Indicator) -> Option<f64> {
    let segs: Vec<_> = graph.pair_segments(a, b).collect();
    let w: f64 = segs.iter().map(|s| s.length()).sum();
    if w <= 0.0 {
        return None;
    }
    let mut c = [0.0; 2];
    for s in &segs {
        let m = s.midpoint();
        c[0] += s.length() * m[0] / w;
        c[1] += s.length() * m[1] / w;
    }
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for s in &segs {
        // Exact second moments of each segment about the centroid.
        let (p, q) = ([s.a[0] - c[0], s.a[1] - c[1]], [s.b[0] - c[0], s.b[1] - c[1]]);
        let l = s.length() / 3.0;
        sxx += l * (p[0] * p[0] + p[0] * q[0] + q[0] * q[0]);
        syy += l * (p[1] * p[1] + p[1] * q[1] + q[1] * q[1]);
        sxy += l * (p[0] * q[1] + q[0] * p[1]) * 0.5 + l * (p[0] * p[1] + q[0] * q[1]);
    }
    Some((0.5 * (2.0 * sxy).atan2(sxx - syy)).rem_euclid(std::f64::consts::PI))
}

/// Direction of every pairwise interface leaving `center`, from the
/// length-weighted mean unit vector of its segments in the annulus
/// `r_min..r_max`. Sorted by angle in `[0, 2 pi)`.
pub fn junction_arms(graph: &InterfaceGraph, center: [f64; 2], r_min: f64, r_max: f64) -> Vec<((Indicator, Indicator), f64)> {
    let mut sums: BTreeMap<(Indicator, Indicator), [f64; 2]> = BTreeMap::new();
    for s in &graph.segments {
        let m = s.midpoint();
        let r = dist(m, center);
        if r < r_min || r > r_max {
            continue;
        }
        let e = sums.entry(s.pair).or_default();
        e[0] += s.length() * (m[0] - center[0]) / r;
        e[1] += s.length() * (m[1] - center[1]) / r;
    }
    let mut arms: Vec<_> = sums.into_iter().map(|(k, v)| (k, v[1].atan2(v[0]).rem_euclid(2.0 * PI))).collect();
    arms.sort_by(|x, y| x.1.total_cmp(&y.1));
    arms
}

/// Angles in degrees between consecutive arms around a junction.
pub fn arm_angles(arms: &[((Indicator, Indicator), f64)]) -> Vec<f64> {
    let n = arms.len();
    (0..n)
        .map(|k| {
            let next = if k + 1 < n { arms[k + 1].1 } else { arms[0].1 + 2.0 * PI };
            (next - arms[k].1).to_degrees()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{BoundarySpec, Grid};
    use crate::scenarios::init::{init_split_disk, init_voronoi_regions};

    #[test]
    fn hausdorff_against_exact_split_disk() {
        use crate::scenarios::init::split_disk_network;
        let g = Grid::unit_square(128, BoundarySpec::symmetry()).unwrap();
        let f = init_split_disk(0.3, [0.5, 0.5], 0.0, g);
        let graph = extract_interface(&f);
        let net = split_disk_network(0.3, [0.5, 0.5], 0.0);
        let d = interface_hausdorff(&graph, &net, &g.domain(), 0.5 * g.h).unwrap();
        assert!(d < 0.5 * g.h, "{}", d / g.h);
        let shifted = net.translated([0.1, 0.0]);
        let d2 = interface_hausdorff(&graph, &shifted, &g.domain(), 0.5 * g.h).unwrap();
        assert!((d2 - 0.1).abs() < g.h);
    }

    #[test]
    fn axis_and_arms_of_split_disk() {
        let g = Grid::unit_square(128, BoundarySpec::symmetry()).unwrap();
        let angle = 0.3;
        let f = init_split_disk(0.3, [0.5, 0.5], angle, g);
        let graph = extract_interface(&f);
        let a = principal_axis_angle(&graph, 2, 3).unwrap();
        assert!((a - angle).abs() < 0.01, "{a}");
        let j = [0.5 + 0.3 * angle.cos(), 0.5 + 0.3 * angle.sin()];
        let arms = junction_arms(&graph, j, 2.0 * g.h, 0.03);
        assert_eq!(arms.len(), 3);
        let angles = arm_angles(&arms);
        assert!((angles.iter().sum::<f64>() - 360.0).abs() < 1e-9);
        // Diameter meets the circle at a right angle.
        assert!(angles.iter().filter(|&&x| (x - 90.0).abs() < 5.0).count() == 2, "{angles:?}");
    }

    #[test]
    fn mullins_law_values() {
        assert_eq!(mullins_rate(6, 1.0), 0.0);
        assert!((mullins_rate(5, 1.0) + PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn uniform_and_annuli_band_counts() {
        let g = Grid::unit_square(64, BoundarySpec::symmetry()).unwrap();
        let u = RegionalField::uniform(g, 1.0, 1);
        assert_eq!(count_bands(&u, [0.5, 0.5], [1.0, 0.0], 0.5), 0);
        let f = RegionalField::from_fn(g, |p| {
            let r = (p[0] - 0.5).hypot(p[1] - 0.5);
            let radii = [0.1, 0.2, 0.3];
            let d = radii.iter().map(|&q| (r - q).abs()).fold(f64::INFINITY, f64::min);
            (d, 1 + radii.iter().filter(|&&q| r > q).count() as u32)
        });
        assert_eq!(count_bands(&f, [0.5, 0.5], [1.0, 0.0], 0.49), 3);
    }

    #[test]
    fn split_disk_edges() {
        let g = Grid::unit_square(64, BoundarySpec::symmetry()).unwrap();
        let f = init_split_disk(0.3, [0.5, 0.5], 0.0, g);
        let e = edge_counts(&extract_interface(&f), g.h);
        assert_eq!(e[&1], 2);
        assert_eq!(e[&2], 2);
        assert_eq!(e[&3], 2);
    }

    #[test]
    fn voronoi_edge_counts() {
        let g = Grid::unit_square(128, BoundarySpec::periodic()).unwrap();
        let f = init_voronoi_regions(15, 3, g);
        let e = edge_counts(&extract_interface(&f), 2.0 * g.h);
        assert_eq!(e.len(), 15);
        // A trivalent network on the torus averages six edges; distinct
        // neighbors can only be fewer since a pair may share two edges.
        let mean = e.values().sum::<usize>() as f64 / e.len() as f64;
        assert!(e.values().all(|&n| n >= 3), "{e:?}");
        assert!(mean <= 6.0 && mean > 4.5, "{e:?}");
    }

    #[test]
    fn slopes_on_synthetic_series() {
        let times: Vec<f64> = (0..40).map(|k| k as f64 * 0.01).collect();
        let mk = |region, rate: f64, edges: Vec<usize>| RegionSeries {
            region,
            times: times.clone(),
            areas: times.iter().map(|t| 0.5 + rate * t).collect(),
            edges,
        };
        let mut e = vec![5; 40];
        e[20..].fill(4);
        let series = vec![mk(1, -1.0, e), mk(2, 0.2, vec![6; 40])];
        let opts = SlopeOptions { settle: 0.02, min_duration: 0.05, min_points: 5, min_area: 0.0 };
        let fits = fit_area_slopes(&series, &opts);
        assert_eq!(fits.len(), 4);
        assert!(fits.iter().all(|f| (f.slope - if f.region == 1 { -1.0 } else { 0.2 }).abs() < 1e-9));
        assert_eq!(fits[0].edges, 5);
        assert_eq!(fits[1].edges, 4);
        assert!(fits[1].t0 >= 0.22 - 1e-12);
    }
}
