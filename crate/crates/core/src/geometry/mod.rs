//! Differential geometry of local level sets, interface-network extraction and
//! error metrics.

mod extract;
mod metrics;

pub use extract::{extract_interface, region_area, region_areas, InterfaceGraph, Segment};
pub use metrics::{error_norms, hausdorff, BandSpec};

/// Gradients smaller than this are treated as degenerate.
pub const DEGENERATE_GRADIENT: f64 = 1e-9;

/// Unit normal and curvature at a cell center.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryAtCell {
    /// `grad(phi) / |grad(phi)|`; points into the region the level set belongs to.
    pub normal: [f64; 2],
    /// Positive where the region is convex, so that `u = kappa n` shrinks a disk.
    pub curvature: f64,
}

/// Normal and curvature from central differences over a 3x3 block
/// (`block[row][col]`, row 0 below the center).
///
/// Returns `None` when the gradient is degenerate.
pub fn normal_curvature(block: &[[f64; 3]; 3], h: f64) -> Option<GeometryAtCell> {
    let px = (block[1][2] - block[1][0]) / (2.0 * h);
    let py = (block[2][1] - block[0][1]) / (2.0 * h);
    let g2 = px * px + py * py;
    let g = g2.sqrt();
    if !(g >= DEGENERATE_GRADIENT) {
        return None;
    }
    let h2 = h * h;
    let pxx = (block[1][2] - 2.0 * block[1][1] + block[1][0]) / h2;
    let pyy = (block[2][1] - 2.0 * block[1][1] + block[0][1]) / h2;
    let pxy = (block[2][2] - block[2][0] - block[0][2] + block[0][0]) / (4.0 * h2);
    let div_n = (pxx * py * py - 2.0 * px * py * pxy + pyy * px * px) / (g2 * g);
    Some(GeometryAtCell { normal: [px / g, py / g], curvature: -div_n })
}

#[inline]
pub fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Euclidean distance from `p` to the segment `[a, b]`.
#[inline]
pub fn point_segment_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1]];
    let len2 = d[0] * d[0] + d[1] * d[1];
    let t = if len2 > 0.0 {
        (((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    dist(p, [a[0] + t * d[0], a[1] + t * d[1]])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(h: f64, c: [f64; 2], f: impl Fn(f64, f64) -> f64) -> [[f64; 3]; 3] {
        std::array::from_fn(|r| {
            std::array::from_fn(|q| f(c[0] + (q as f64 - 1.0) * h, c[1] + (r as f64 - 1.0) * h))
        })
    }

    #[test]
    fn planar_interface() {
        let b = sample(0.01, [0.3, 0.7], |x, _| x - 0.5);
        let g = normal_curvature(&b, 0.01).unwrap();
        assert!((g.normal[0] - 1.0).abs() < 1e-12 && g.normal[1].abs() < 1e-12);
        assert!(g.curvature.abs() < 1e-9);
    }

    #[test]
    fn circle_curvature_converges_at_second_order() {
        let r = 0.2;
        let c = [0.5, 0.5];
        // Point on the circle off the grid axes; inside-positive signed distance.
        let p = [c[0] + r * 0.6, c[1] + r * 0.8];
        let mut errs = Vec::new();
        for h in [0.02, 0.01, 0.005] {
            let b = sample(h, p, |x, y| r - (x - c[0]).hypot(y - c[1]));
            let g = normal_curvature(&b, h).unwrap();
            // Normal points toward the enclosed region.
            assert!((g.normal[0] + 0.6).abs() < 1e-3 && (g.normal[1] + 0.8).abs() < 1e-3);
            errs.push((g.curvature - 1.0 / r).abs());
        }
        for w in errs.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!(order > 1.8, "order {order}, errors {errs:?}");
        }
    }

    #[test]
    fn degenerate_gradient() {
        assert!(normal_curvature(&[[1.0; 3]; 3], 0.1).is_none());
    }

    #[test]
    fn segment_distance() {
        assert_eq!(point_segment_distance([0.0, 1.0], [-1.0, 0.0], [1.0, 0.0]), 1.0);
        assert_eq!(point_segment_distance([3.0, 4.0], [0.0, 0.0], [0.0, 0.0]), 5.0);
        assert_eq!(point_segment_distance([2.0, 0.0], [-1.0, 0.0], [1.0, 0.0]), 1.0);
    }
}
