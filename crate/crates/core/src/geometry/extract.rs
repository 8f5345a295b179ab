//! Interface-network extraction.
//!
//! Each dual square (the square spanned by four neighboring cell centers) is
//! split into four triangles around its midpoint. On every triangle the
//! constructed level sets of the regions present at the square's corners are
//! linear, so the argmax partition used by reconstruction is a set of convex
//! polygons. Their shared edges form the interface network, their areas the
//! region areas, and the points where three of them meet are the junctions.

use std::collections::{BTreeMap, HashMap};

use super::dist;
use crate::regional::{Indicator, RegionalField};

/// Maximum number of regions on a dual square (one per corner).
const MAX_LOCAL: usize = 4;

/// Junction points closer than this are merged.
const JUNCTION_MERGE: f64 = 1e-9;

/// Straight piece of the pairwise interface between `pair.0 < pair.1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub a: [f64; 2],
    pub b: [f64; 2],
    pub pair: (Indicator, Indicator),
}

impl Segment {
    pub fn length(&self) -> f64 {
        dist(self.a, self.b)
    }

    pub fn midpoint(&self) -> [f64; 2] {
        [0.5 * (self.a[0] + self.b[0]), 0.5 * (self.a[1] + self.b[1])]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Junction {
    pub point: [f64; 2],
    /// Sorted indicators of three regions meeting here.
    pub regions: [Indicator; 3],
}

#[derive(Debug, Clone, Default)]
pub struct InterfaceGraph {
    pub segments: Vec<Segment>,
    pub junctions: Vec<Junction>,
}

/// Polyline of one pairwise interface.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    pub pair: (Indicator, Indicator),
    pub points: Vec<[f64; 2]>,
}

impl InterfaceGraph {
    pub fn total_length(&self) -> f64 {
        self.segments.iter().map(Segment::length).sum()
    }

    pub fn pair_length(&self, a: Indicator, b: Indicator) -> f64 {
        let key = ordered(a, b);
        self.segments.iter().filter(|s| s.pair == key).map(Segment::length).sum()
    }

    /// Segments of the interface between `a` and `b`.
    pub fn pair_segments(&self, a: Indicator, b: Indicator) -> impl Iterator<Item = &Segment> {
        let key = ordered(a, b);
        self.segments.iter().filter(move |s| s.pair == key)
    }

    /// Length of boundary shared with each neighboring region.
    pub fn neighbor_lengths(&self, region: Indicator) -> BTreeMap<Indicator, f64> {
        let mut out = BTreeMap::new();
        for s in &self.segments {
            let other = if s.pair.0 == region {
                s.pair.1
            } else if s.pair.1 == region {
                s.pair.0
            } else {
                continue;
            };
            *out.entry(other).or_insert(0.0) += s.length();
        }
        out
    }

    pub fn junction_points(&self) -> Vec<[f64; 2]> {
        self.junctions.iter().map(|j| j.point).collect()
    }

    /// Points along every segment with spacing at most `spacing`.
    pub fn sample_points(&self, spacing: f64) -> Vec<[f64; 2]> {
        sample_segments(self.segments.iter(), spacing)
    }

    pub fn sample_pair(&self, a: Indicator, b: Indicator, spacing: f64) -> Vec<[f64; 2]> {
        sample_segments(self.pair_segments(a, b), spacing)
    }

    /// Stitch segments into polylines, one chain per connected piece of each
    /// pairwise interface.
    pub fn polylines(&self) -> Vec<Polyline> {
        let mut by_pair: BTreeMap<(Indicator, Indicator), Vec<&Segment>> = BTreeMap::new();
        for s in &self.segments {
            by_pair.entry(s.pair).or_default().push(s);
        }
        let mut out = Vec::new();
        for (pair, segs) in by_pair {
            for points in stitch(&segs) {
                out.push(Polyline { pair, points });
            }
        }
        out
    }
}

fn sample_segments<'a>(segs: impl Iterator<Item = &'a Segment>, spacing: f64) -> Vec<[f64; 2]> {
    let mut pts = Vec::new();
    for s in segs {
        let n = ((s.length() / spacing).ceil() as usize).max(1);
        for k in 0..=n {
            let t = k as f64 / n as f64;
            pts.push([s.a[0] + t * (s.b[0] - s.a[0]), s.a[1] + t * (s.b[1] - s.a[1])]);
        }
    }
    pts
}

type Key = (i64, i64);

fn key_of(p: [f64; 2]) -> Key {
    ((p[0] / JUNCTION_MERGE).round() as i64, (p[1] / JUNCTION_MERGE).round() as i64)
}

fn stitch(segs: &[&Segment]) -> Vec<Vec<[f64; 2]>> {
    // Endpoint index with tolerance: look up the 3x3 key neighborhood.
    let mut nodes: HashMap<Key, usize> = HashMap::new();
    let mut pos: Vec<[f64; 2]> = Vec::new();
    let mut node_of = |p: [f64; 2], nodes: &mut HashMap<Key, usize>| -> usize {
        let (kx, ky) = key_of(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(&n) = nodes.get(&(kx + dx, ky + dy)) {
                    return n;
                }
            }
        }
        let n = pos.len();
        pos.push(p);
        nodes.insert((kx, ky), n);
        n
    };
    let mut adj: Vec<Vec<(usize, usize)>> = Vec::new();
    for (e, s) in segs.iter().enumerate() {
        let u = node_of(s.a, &mut nodes);
        let v = node_of(s.b, &mut nodes);
        if u == v {
            continue;
        }
        let need = u.max(v) + 1;
        if adj.len() < need {
            adj.resize(need, Vec::new());
        }
        adj[u].push((v, e));
        adj[v].push((u, e));
    }
    adj.resize(pos.len(), Vec::new());
    let mut used = vec![false; segs.len()];
    let mut chains = Vec::new();
    // Open chains start at nodes of odd degree, closed loops anywhere.
    let mut starts: Vec<usize> = (0..pos.len()).filter(|&n| adj[n].len() % 2 == 1).collect();
    starts.extend(0..pos.len());
    for start in starts {
        while let Some(&(next, e)) = adj[start].iter().find(|&&(_, e)| !used[e]) {
            used[e] = true;
            let mut chain = vec![pos[start], pos[next]];
            let mut cur = next;
            while let Some(&(n2, e2)) = adj[cur].iter().find(|&&(_, e)| !used[e]) {
                used[e2] = true;
                chain.push(pos[n2]);
                cur = n2;
            }
            chains.push(chain);
        }
    }
    chains
}

#[inline]
fn ordered(a: Indicator, b: Indicator) -> (Indicator, Indicator) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Clone, Copy)]
struct Vtx {
    p: [f64; 2],
    v: [f64; MAX_LOCAL],
}

impl Vtx {
    fn lerp(&self, o: &Vtx, t: f64) -> Vtx {
        let mut v = [0.0; MAX_LOCAL];
        for k in 0..MAX_LOCAL {
            v[k] = self.v[k] + t * (o.v[k] - self.v[k]);
        }
        Vtx { p: [self.p[0] + t * (o.p[0] - self.p[0]), self.p[1] + t * (o.p[1] - self.p[1])], v }
    }
}

/// Sutherland-Hodgman clip of a convex polygon against `f >= 0`, `f` linear.
fn clip(poly: &[Vtx], f: impl Fn(&Vtx) -> f64) -> Vec<Vtx> {
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 2);
    if n == 0 {
        return out;
    }
    let vals: Vec<f64> = poly.iter().map(&f).collect();
    for k in 0..n {
        let (a, b) = (&poly[k], &poly[(k + 1) % n]);
        let (fa, fb) = (vals[k], vals[(k + 1) % n]);
        if fa >= 0.0 {
            out.push(*a);
        }
        if (fa > 0.0 && fb < 0.0) || (fa < 0.0 && fb > 0.0) {
            out.push(crossing(a, b, fa, fb));
        }
    }
    out
}

/// Zero of a linear function on an edge, computed in a direction-independent
/// way so both triangles sharing the edge get bitwise-equal points.
fn crossing(a: &Vtx, b: &Vtx, fa: f64, fb: f64) -> Vtx {
    if (a.p[0], a.p[1]) <= (b.p[0], b.p[1]) {
        a.lerp(b, fa / (fa - fb))
    } else {
        b.lerp(a, fb / (fb - fa))
    }
}

fn poly_area(poly: &[Vtx]) -> f64 {
    let n = poly.len();
    if n < 3 {
        return 0.0;
    }
    let o = poly[0].p;
    let mut s = 0.0;
    for k in 1..n - 1 {
        let (a, b) = (poly[k].p, poly[k + 1].p);
        s += (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    }
    0.5 * s.abs()
}

struct Sink<'a> {
    graph: Option<&'a mut InterfaceGraph>,
    areas: Option<&'a mut BTreeMap<Indicator, f64>>,
}

/// Visit every dual square overlapping the domain.
fn partition(field: &RegionalField, mut sink: Sink<'_>) {
    let grid = *field.grid();
    let (x0, y0) = (grid.x0, grid.y0);
    let (x1, y1) = (grid.x0 + grid.lx, grid.y0 + grid.ly);
    let clip_domain = |poly: Vec<Vtx>| -> Vec<Vtx> {
        let poly = clip(&poly, |v| v.p[0] - x0);
        let poly = clip(&poly, |v| x1 - v.p[0]);
        let poly = clip(&poly, |v| v.p[1] - y0);
        clip(&poly, |v| y1 - v.p[1])
    };
    let h = grid.h;
    for j in -1..grid.ny as isize {
        for i in -1..grid.nx as isize {
            let corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
            let ks = corners.map(|(a, b)| grid.idx(a, b));
            let mut regions: Vec<Indicator> = Vec::with_capacity(MAX_LOCAL);
            for &k in &ks {
                if !regions.contains(&field.chi[k]) {
                    regions.push(field.chi[k]);
                }
            }
            regions.sort_unstable();
            let pts = corners.map(|(a, b)| grid.center(a, b));
            if regions.len() == 1 {
                if let Some(areas) = sink.areas.as_deref_mut() {
                    let sq: Vec<Vtx> = pts.iter().map(|&p| Vtx { p, v: [0.0; MAX_LOCAL] }).collect();
                    let a = poly_area(&clip_domain(sq));
                    if a > 0.0 {
                        *areas.entry(regions[0]).or_insert(0.0) += a;
                    }
                }
                continue;
            }
            let m = regions.len();
            let mut cv = [Vtx { p: [0.0; 2], v: [f64::NEG_INFINITY; MAX_LOCAL] }; 4];
            for c in 0..4 {
                cv[c].p = pts[c];
                for (r, &reg) in regions.iter().enumerate() {
                    cv[c].v[r] = field.signed(ks[c], reg);
                }
            }
            let mut mid = Vtx {
                p: [pts[0][0] + 0.5 * h, pts[0][1] + 0.5 * h],
                v: [f64::NEG_INFINITY; MAX_LOCAL],
            };
            for r in 0..m {
                mid.v[r] = 0.25 * (cv[0].v[r] + cv[1].v[r] + cv[2].v[r] + cv[3].v[r]);
            }
            for t in 0..4 {
                let tri = [mid, cv[t], cv[(t + 1) % 4]];
                if let Some(areas) = sink.areas.as_deref_mut() {
                    for r in 0..m {
                        let mut poly = tri.to_vec();
                        for s in (0..m).filter(|&s| s != r) {
                            poly = clip(&poly, |v| v.v[r] - v.v[s]);
                        }
                        let a = poly_area(&clip_domain(poly));
                        if a > 0.0 {
                            *areas.entry(regions[r]).or_insert(0.0) += a;
                        }
                    }
                }
                if let Some(graph) = sink.graph.as_deref_mut() {
                    triangle_segments(&tri, &regions, &clip_domain, graph);
                    if m >= 3 {
                        triangle_junctions(&tri, &regions, [x0, y0, x1, y1], graph);
                    }
                }
            }
        }
    }
}

fn triangle_segments(
    tri: &[Vtx; 3],
    regions: &[Indicator],
    clip_domain: &impl Fn(Vec<Vtx>) -> Vec<Vtx>,
    graph: &mut InterfaceGraph,
) {
    let m = regions.len();
    for a in 0..m {
        for b in a + 1..m {
            let mut poly = tri.to_vec();
            for s in (0..m).filter(|&s| s != a && s != b) {
                poly = clip(&poly, |v| v.v[a] - v.v[s]);
                poly = clip(&poly, |v| v.v[b] - v.v[s]);
            }
            let poly = clip_domain(poly);
            if poly.len() < 2 {
                continue;
            }
            let g: Vec<f64> = poly.iter().map(|v| v.v[a] - v.v[b]).collect();
            if g.iter().all(|&x| x == 0.0) {
                continue;
            }
            let n = poly.len();
            let mut hits: Vec<[f64; 2]> = Vec::with_capacity(4);
            for k in 0..n {
                let k2 = (k + 1) % n;
                if g[k] == 0.0 {
                    hits.push(poly[k].p);
                } else if (g[k] > 0.0 && g[k2] < 0.0) || (g[k] < 0.0 && g[k2] > 0.0) {
                    hits.push(crossing(&poly[k], &poly[k2], g[k], g[k2]).p);
                }
            }
            let Some((p, q)) = farthest_pair(&hits) else { continue };
            if dist(p, q) <= 1e-14 {
                continue;
            }
            if let Some(keep) = on_shared_edge(tri, p, q) {
                if !keep {
                    continue;
                }
            }
            graph.segments.push(Segment { a: p, b: q, pair: (regions[a], regions[b]) });
        }
    }
}

fn farthest_pair(pts: &[[f64; 2]]) -> Option<([f64; 2], [f64; 2])> {
    let mut best: Option<([f64; 2], [f64; 2], f64)> = None;
    for (k, &p) in pts.iter().enumerate() {
        for &q in &pts[k + 1..] {
            let d = dist(p, q);
            if best.map_or(true, |b| d > b.2) {
                best = Some((p, q, d));
            }
        }
    }
    best.map(|b| (b.0, b.1))
}

/// If `p` and `q` both lie on an edge of the triangle, the same segment is
/// produced by the neighbor across that edge; keep it on one side only.
fn on_shared_edge(tri: &[Vtx; 3], p: [f64; 2], q: [f64; 2]) -> Option<bool> {
    for e in 0..3 {
        let (u, w, other) = (tri[e].p, tri[(e + 1) % 3].p, tri[(e + 2) % 3].p);
        let (lo, hi) = if (u[0], u[1]) <= (w[0], w[1]) { (u, w) } else { (w, u) };
        let d = [hi[0] - lo[0], hi[1] - lo[1]];
        let len = d[0].hypot(d[1]);
        let side = |z: [f64; 2]| (d[0] * (z[1] - lo[1]) - d[1] * (z[0] - lo[0])) / len;
        let tol = 1e-12 * len.max(1e-300).max(1.0);
        if side(p).abs() <= tol && side(q).abs() <= tol {
            return Some(side(other) > 0.0);
        }
    }
    None
}

fn triangle_junctions(
    tri: &[Vtx; 3],
    regions: &[Indicator],
    bbox: [f64; 4],
    graph: &mut InterfaceGraph,
) {
    let m = regions.len();
    for a in 0..m {
        for b in a + 1..m {
            for c in b + 1..m {
                // Barycentric l with l . (va - vb) = 0, l . (va - vc) = 0, sum l = 1.
                let d1: [f64; 3] = std::array::from_fn(|k| tri[k].v[a] - tri[k].v[b]);
                let d2: [f64; 3] = std::array::from_fn(|k| tri[k].v[a] - tri[k].v[c]);
                let rows = [d1, d2, [1.0; 3]];
                let Some(l) = solve3(rows, [0.0, 0.0, 1.0]) else { continue };
                if l.iter().any(|&x| x < -1e-10) {
                    continue;
                }
                let p = [
                    l[0] * tri[0].p[0] + l[1] * tri[1].p[0] + l[2] * tri[2].p[0],
                    l[0] * tri[0].p[1] + l[1] * tri[1].p[1] + l[2] * tri[2].p[1],
                ];
                if p[0] < bbox[0] || p[0] > bbox[2] || p[1] < bbox[1] || p[1] > bbox[3] {
                    continue;
                }
                let val = |r: usize| l[0] * tri[0].v[r] + l[1] * tri[1].v[r] + l[2] * tri[2].v[r];
                let va = val(a);
                let scale = tri.iter().flat_map(|t| t.v[..m].iter()).fold(0.0f64, |s, x| s.max(x.abs()));
                if (0..m).any(|s| s != a && s != b && s != c && val(s) > va + 1e-12 * scale.max(1e-300)) {
                    continue;
                }
                if graph.junctions.iter().any(|j| dist(j.point, p) < JUNCTION_MERGE) {
                    continue;
                }
                graph.junctions.push(Junction { point: p, regions: [regions[a], regions[b], regions[c]] });
            }
        }
    }
}

fn solve3(m: [[f64; 3]; 3], rhs: [f64; 3]) -> Option<[f64; 3]> {
    let det3 = |m: &[[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let det = det3(&m);
    let scale = m.iter().flatten().fold(0.0f64, |s, x| s.max(x.abs()));
    if det.abs() <= 1e-14 * scale.powi(2).max(1e-300) {
        return None;
    }
    let mut out = [0.0; 3];
    for col in 0..3 {
        let mut mc = m;
        for row in 0..3 {
            mc[row][col] = rhs[row];
        }
        out[col] = det3(&mc) / det;
    }
    Some(out)
}

/// Extract the interface network as pairwise segments plus junction points.
pub fn extract_interface(field: &RegionalField) -> InterfaceGraph {
    let mut graph = InterfaceGraph::default();
    partition(field, Sink { graph: Some(&mut graph), areas: None });
    merge_close_junctions(&mut graph.junctions, field.grid().h);
    graph
}

/// Junctions of the same three regions closer than `radius` collapse to their centroid.
/// A network sitting exactly on cell faces otherwise yields pairs of them.
fn merge_close_junctions(junctions: &mut Vec<Junction>, radius: f64) {
    let key = |j: &Junction| {
        let mut r = j.regions;
        r.sort_unstable();
        r
    };
    let mut clusters: Vec<(Junction, [Indicator; 3], f64)> = Vec::new();
    for j in junctions.drain(..) {
        let kj = key(&j);
        match clusters.iter_mut().find(|(c, kc, w)| {
            *kc == kj && dist([c.point[0] / w, c.point[1] / w], j.point) < radius
        }) {
            Some((c, _, w)) => {
                c.point[0] += j.point[0];
                c.point[1] += j.point[1];
                *w += 1.0;
            }
            None => clusters.push((j, kj, 1.0)),
        }
    }
    junctions.extend(clusters.into_iter().map(|(mut c, _, w)| {
        c.point = [c.point[0] / w, c.point[1] / w];
        c
    }));
}

/// Area of every region, from the same partition as [`extract_interface`].
pub fn region_areas(field: &RegionalField) -> BTreeMap<Indicator, f64> {
    let mut areas = BTreeMap::new();
    partition(field, Sink { graph: None, areas: Some(&mut areas) });
    areas
}

/// Area of one region; zero when it is absent.
pub fn region_area(field: &RegionalField, chi: Indicator) -> f64 {
    region_areas(field).get(&chi).copied().unwrap_or(0.0)
}
