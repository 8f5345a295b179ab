//! Region-by-region re-initialization of the distance field.
//!
//! For each region the signed local level set is rebuilt over the whole grid
//! and relaxed towards a signed distance with the pseudo-time equation
//! `phi_tau = S(phi0) (1 - |grad phi|)`, first-order Godunov upwinding and a
//! smoothed sign. Cells next to the zero contour use the subcell fix of Russo
//! and Smereka so that the contour itself does not drift. Indicators are never
//! changed; every cell takes the magnitude of its own region's result.

use std::sync::atomic::{AtomicBool, Ordering};

use crate::grid::Grid;
use crate::regional::{Indicator, RegionalField};

static WARNED: AtomicBool = AtomicBool::new(false);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReinitPlan {
    /// Pseudo-time step in units of `h`; at most 0.5.
    pub dtau_factor: f64,
    pub max_iters: usize,
    /// Convergence tolerance on the largest update, in units of `h`.
    pub tol_factor: f64,
    /// Only cells within `band` cells of a region boundary are relaxed.
    pub band: usize,
}

impl Default for ReinitPlan {
    fn default() -> Self {
        Self { dtau_factor: 0.5, max_iters: 60, tol_factor: 1e-4, band: 10 }
    }
}

/// Outcome of one call to [`reinitialize`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ReinitStats {
    pub regions: usize,
    pub max_iterations: usize,
    pub converged: bool,
}

pub fn reinitialize(field: &RegionalField, plan: &ReinitPlan) -> RegionalField {
    reinitialize_with_stats(field, plan).0
}

pub fn reinitialize_with_stats(field: &RegionalField, plan: &ReinitPlan) -> (RegionalField, ReinitStats) {
    let regions = field.regions();
    let mut out = field.clone();
    let mut stats = ReinitStats { regions: regions.len(), max_iterations: 0, converged: true };
    if regions.len() < 2 {
        return (out, stats);
    }
    let grid = *field.grid();
    for &r in &regions {
        let (phi, iters, converged) = relax_region(field, r, plan);
        stats.max_iterations = stats.max_iterations.max(iters);
        stats.converged &= converged;
        for (i, j) in grid.interior_cells() {
            let k = grid.idx(i, j);
            if field.chi[k] == r {
                out.varphi[k] = phi[k].abs();
            }
        }
    }
    out.fill_ghosts();
    if !stats.converged {
        let msg = format!("re-initialization stopped after {} iterations without reaching tolerance", plan.max_iters);
        // Warn once per process.
        if WARNED.swap(true, Ordering::Relaxed) {
            log::debug!("{msg}");
        } else {
            log::warn!("{msg}");
        }
    }
    (out, stats)
}

/// Cells at most `band` cells (Chebyshev) from the boundary of `r`.
///
/// Counted in cells rather than by `varphi`, which can be far from a distance
/// after stretching flows.
fn active_cells(field: &RegionalField, r: Indicator, band: usize) -> Vec<usize> {
    let grid = field.grid();
    let s = grid.stride();
    let mut depth = vec![usize::MAX; grid.padded_len()];
    let mut front = Vec::new();
    for (i, j) in grid.interior_cells() {
        let k = grid.idx(i, j);
        let inside = field.chi[k] == r;
        if [k - 1, k + 1, k - s, k + s].iter().any(|&q| (field.chi[q] == r) != inside) {
            depth[k] = 0;
            front.push((i, j));
        }
    }
    let mut active: Vec<usize> = front.iter().map(|&(i, j)| grid.idx(i, j)).collect();
    for d in 1..=band {
        let mut next = Vec::new();
        for &(i, j) in &front {
            for dj in -1..=1 {
                for di in -1..=1 {
                    let (si, sj) = grid.source_of(i + di, j + dj);
                    let k = grid.idx(si, sj);
                    if depth[k] == usize::MAX {
                        depth[k] = d;
                        next.push((si, sj));
                        active.push(k);
                    }
                }
            }
        }
        front = next;
    }
    active.sort_unstable();
    active
}

fn relax_region(field: &RegionalField, r: Indicator, plan: &ReinitPlan) -> (Vec<f64>, usize, bool) {
    let grid = *field.grid();
    let h = grid.h;
    let phi0: Vec<f64> = (0..grid.padded_len()).map(|k| field.signed(k, r)).collect();
    let active = active_cells(field, r, plan.band);
    let s = grid.stride();
    // Subcell distance estimates for cells adjacent to the zero contour.
    let subcell: Vec<Option<f64>> = active.iter().map(|&k| subcell_distance(&phi0, k, s, h)).collect();
    let dtau = plan.dtau_factor.min(0.5) * h;
    let tol = plan.tol_factor * h;
    let mut phi = phi0.clone();
    let mut next = phi.clone();
    for it in 0..plan.max_iters {
        let mut max_change = 0.0f64;
        for (a, &k) in active.iter().enumerate() {
            let p0 = phi0[k];
            let p = phi[k];
            let new = if let Some(d) = subcell[a] {
                p - dtau / h * (p0.signum() * p.abs() - d)
            } else {
                let sgn = p0 / (p0 * p0 + h * h).sqrt();
                p - dtau * sgn * (godunov_norm(&phi, k, s, h, p0) - 1.0)
            };
            max_change = max_change.max((new - p).abs());
            next[k] = new;
        }
        for &k in &active {
            phi[k] = next[k];
        }
        fill(&grid, &mut phi);
        if max_change < tol {
            return (phi, it + 1, true);
        }
    }
    (phi, plan.max_iters, false)
}

fn fill(grid: &Grid, phi: &mut [f64]) {
    grid.fill_ghosts(phi);
}

/// Signed distance to the zero contour from a local linear estimate, for cells
/// with a sign change towards an edge neighbor.
fn subcell_distance(phi0: &[f64], k: usize, s: usize, h: f64) -> Option<f64> {
    let p = phi0[k];
    let (l, r, d, u) = (phi0[k - 1], phi0[k + 1], phi0[k - s], phi0[k + s]);
    let crosses = |q: f64| (p > 0.0) != (q > 0.0);
    if !(crosses(l) || crosses(r) || crosses(d) || crosses(u)) {
        return None;
    }
    let grad = [
        0.5 * (r - l).abs(),
        (r - p).abs(),
        (p - l).abs(),
        0.5 * (u - d).abs(),
        (u - p).abs(),
        (p - d).abs(),
    ];
    let gx = grad[0].max(grad[1]).max(grad[2]);
    let gy = grad[3].max(grad[4]).max(grad[5]);
    let g = gx.hypot(gy).max(1e-12 * h);
    Some(h * p / g)
}

#[inline]
fn godunov_norm(phi: &[f64], k: usize, s: usize, h: f64, sign: f64) -> f64 {
    let p = phi[k];
    let a = (p - phi[k - 1]) / h;
    let b = (phi[k + 1] - p) / h;
    let c = (p - phi[k - s]) / h;
    let d = (phi[k + s] - p) / h;
    let (gx, gy) = if sign > 0.0 {
        (a.max(0.0).powi(2).max(b.min(0.0).powi(2)), c.max(0.0).powi(2).max(d.min(0.0).powi(2)))
    } else {
        (a.min(0.0).powi(2).max(b.max(0.0).powi(2)), c.min(0.0).powi(2).max(d.max(0.0).powi(2)))
    };
    (gx + gy).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::BoundarySpec;

    fn circle(n: usize, scale: f64) -> RegionalField {
        let g = Grid::unit_square(n, BoundarySpec::symmetry()).unwrap();
        RegionalField::from_fn(g, |p| {
            let d = (p[0] - 0.5).hypot(p[1] - 0.5) - 0.25;
            (scale * d.abs(), if d < 0.0 { 2 } else { 1 })
        })
    }

    fn exact(p: [f64; 2]) -> f64 {
        ((p[0] - 0.5).hypot(p[1] - 0.5) - 0.25).abs()
    }

    #[test]
    fn single_region_is_noop() {
        let g = Grid::unit_square(16, BoundarySpec::symmetry()).unwrap();
        let f = RegionalField::from_fn(g, |p| (p[0] * 3.0, 4));
        assert_eq!(reinitialize(&f, &ReinitPlan::default()), f);
    }

    #[test]
    fn exact_distance_nearly_fixed() {
        let f = circle(64, 1.0);
        let out = reinitialize(&f, &ReinitPlan::default());
        let g = f.grid();
        assert_eq!(out.chi, f.chi);
        for (i, j) in g.interior_cells() {
            let k = g.idx(i, j);
            if f.varphi[k] < 6.0 * g.h {
                // First-order relaxation of a curved front: O(h) drift away from it.
                assert!((out.varphi[k] - f.varphi[k]).abs() < 0.2 * g.h, "{i} {j}");
            }
        }
    }

    #[test]
    fn doubled_distance_recovered() {
        let f = circle(64, 2.0);
        let out = reinitialize(&f, &ReinitPlan::default());
        let g = f.grid();
        let mut worst = 0.0f64;
        for (i, j) in g.interior_cells() {
            let k = g.idx(i, j);
            let e = exact(g.center(i, j));
            // The doubled input only reaches half as far into the relaxed band.
            if e < 4.0 * g.h {
                worst = worst.max((out.varphi[k] - e).abs());
            }
        }
        assert!(worst < 0.2 * g.h, "worst {}", worst / g.h);
    }
}
