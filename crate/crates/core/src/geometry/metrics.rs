use super::dist;
use crate::error::{Error, Result};
use crate::regional::RegionalField;

/// Symmetric Hausdorff distance between two point sets.
pub fn hausdorff(a: &[[f64; 2]], b: &[[f64; 2]]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let d = directed(a, b, 0.0);
    Ok(directed(b, a, d))
}

/// `max(lower, sup_p inf_q |p - q|)`; the inner scan stops as soon as a
/// point cannot raise the running maximum.
fn directed(a: &[[f64; 2]], b: &[[f64; 2]], lower: f64) -> f64 {
    let mut cmax2 = lower * lower;
    for p in a {
        let mut cmin2 = f64::INFINITY;
        for q in b {
            let dx = p[0] - q[0];
            let dy = p[1] - q[1];
            let d2 = dx * dx + dy * dy;
            if d2 < cmin2 {
                cmin2 = d2;
                if cmin2 <= cmax2 {
                    break;
                }
            }
        }
        if cmin2 > cmax2 {
            cmax2 = cmin2;
        }
    }
    cmax2.sqrt()
}

/// Cells over which field errors are measured.
#[derive(Debug, Clone, PartialEq)]
pub enum BandSpec {
    /// Cells with `varphi < width`.
    Distance(f64),
    /// Cells with `varphi < width` that lie within `radius` of one of the points.
    JunctionWindow { width: f64, radius: f64, junctions: Vec<[f64; 2]> },
}

/// Mean and maximum of `|varphi - exact|` over the band.
pub fn error_norms(
    field: &RegionalField,
    exact: impl Fn([f64; 2]) -> f64,
    band: &BandSpec,
) -> Result<(f64, f64)> {
    let grid = field.grid();
    let mut sum = 0.0;
    let mut max = 0.0f64;
    let mut count = 0usize;
    for (i, j) in grid.interior_cells() {
        let k = grid.idx(i, j);
        let v = field.varphi[k];
        let p = grid.center(i, j);
        let inside = match band {
            BandSpec::Distance(w) => v < *w,
            BandSpec::JunctionWindow { width, radius, junctions } => {
                v < *width && junctions.iter().any(|&q| dist(p, q) <= *radius)
            }
        };
        if !inside {
            continue;
        }
        let e = (v - exact(p).abs()).abs();
        sum += e;
        max = max.max(e);
        count += 1;
    }
    if count == 0 {
        return Err(Error::EmptyBand);
    }
    Ok((sum / count as f64, max))
}
