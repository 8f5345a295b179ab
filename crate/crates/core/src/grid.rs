//! Uniform cell-centered Cartesian grid with ghost layers.
//!
//! All per-cell arrays in the crate are stored padded: `ghost` extra cells on
//! every side, row-major with `x` varying fastest. Interior cells are indexed
//! by `(i, j)` with `0 <= i < nx`, ghost cells by negative indices or indices
//! past the end.

use crate::error::{Error, Result};
use crate::regional::RegionalField;

/// Stencil half-width of the widest transport scheme (5th/6th-order WENO).
pub const STENCIL_HALF_WIDTH: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryCondition {
    /// Mirror across the wall: ghost `-1 - m` copies interior `m`.
    Symmetry,
    /// Wrap indices modulo the cell count.
    Periodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundarySpec {
    pub x: BoundaryCondition,
    pub y: BoundaryCondition,
}

impl BoundarySpec {
    pub fn symmetry() -> Self {
        Self { x: BoundaryCondition::Symmetry, y: BoundaryCondition::Symmetry }
    }

    pub fn periodic() -> Self {
        Self { x: BoundaryCondition::Periodic, y: BoundaryCondition::Periodic }
    }
}

/// Rectangular domain `[x0, x0 + lx] x [y0, y0 + ly]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub x0: f64,
    pub y0: f64,
    pub lx: f64,
    pub ly: f64,
}

impl Domain {
    pub fn unit() -> Self {
        Self { x0: 0.0, y0: 0.0, lx: 1.0, ly: 1.0 }
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        p[0] >= self.x0 && p[0] <= self.x0 + self.lx && p[1] >= self.y0 && p[1] <= self.y0 + self.ly
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub nx: usize,
    pub ny: usize,
    pub x0: f64,
    pub y0: f64,
    pub lx: f64,
    pub ly: f64,
    pub h: f64,
    pub ghost: usize,
    pub boundary: BoundarySpec,
}

impl Grid {
    pub fn new(
        nx: usize,
        ny: usize,
        domain: Domain,
        boundary: BoundarySpec,
        ghost: usize,
    ) -> Result<Self> {
        if nx < 8 || ny < 8 {
            return Err(Error::GridTooSmall { nx, ny });
        }
        if !(domain.lx > 0.0 && domain.ly > 0.0) {
            return Err(Error::InvalidDomain { lx: domain.lx, ly: domain.ly });
        }
        if ghost < STENCIL_HALF_WIDTH {
            return Err(Error::GhostTooSmall { ghost, required: STENCIL_HALF_WIDTH });
        }
        let dx = domain.lx / nx as f64;
        let dy = domain.ly / ny as f64;
        if (dx - dy).abs() > 1e-12 * dx.max(dy) {
            return Err(Error::NonSquareCells { dx, dy });
        }
        Ok(Self {
            nx,
            ny,
            x0: domain.x0,
            y0: domain.y0,
            lx: domain.lx,
            ly: domain.ly,
            h: dx,
            ghost,
            boundary,
        })
    }

    /// Unit square with `n x n` cells and the default ghost width.
    pub fn unit_square(n: usize, boundary: BoundarySpec) -> Result<Self> {
        Self::new(n, n, Domain::unit(), boundary, STENCIL_HALF_WIDTH)
    }

    pub fn domain(&self) -> Domain {
        Domain { x0: self.x0, y0: self.y0, lx: self.lx, ly: self.ly }
    }

    #[inline]
    pub fn stride(&self) -> usize {
        self.nx + 2 * self.ghost
    }

    /// Number of padded cells (interior plus ghosts).
    #[inline]
    pub fn padded_len(&self) -> usize {
        self.stride() * (self.ny + 2 * self.ghost)
    }

    #[inline]
    pub fn interior_len(&self) -> usize {
        self.nx * self.ny
    }

    /// Flat padded index of cell `(i, j)`; valid for `-ghost <= i < nx + ghost`.
    #[inline]
    pub fn idx(&self, i: isize, j: isize) -> usize {
        let g = self.ghost as isize;
        debug_assert!(i >= -g && i < self.nx as isize + g);
        debug_assert!(j >= -g && j < self.ny as isize + g);
        ((j + g) as usize) * self.stride() + (i + g) as usize
    }

    /// Inverse of [`Grid::idx`].
    #[inline]
    pub fn ij(&self, idx: usize) -> (isize, isize) {
        let s = self.stride();
        let g = self.ghost as isize;
        ((idx % s) as isize - g, (idx / s) as isize - g)
    }

    #[inline]
    pub fn is_interior(&self, i: isize, j: isize) -> bool {
        i >= 0 && j >= 0 && (i as usize) < self.nx && (j as usize) < self.ny
    }

    #[inline]
    pub fn center(&self, i: isize, j: isize) -> [f64; 2] {
        [
            self.x0 + (i as f64 + 0.5) * self.h,
            self.y0 + (j as f64 + 0.5) * self.h,
        ]
    }

    /// Continuous cell coordinates of a point: cell `(i, j)` has its center at `(i, j)`.
    #[inline]
    pub fn to_cell_coords(&self, p: [f64; 2]) -> [f64; 2] {
        [(p[0] - self.x0) / self.h - 0.5, (p[1] - self.y0) / self.h - 0.5]
    }

    /// Interior cell containing `p`, folded back into the domain by the boundary rule.
    pub fn cell_of(&self, p: [f64; 2]) -> (isize, isize) {
        let c = self.to_cell_coords(p);
        let i = (c[0] + 0.5).floor() as isize;
        let j = (c[1] + 0.5).floor() as isize;
        (
            fold(i, self.nx, self.boundary.x),
            fold(j, self.ny, self.boundary.y),
        )
    }

    pub fn interior_cells(&self) -> impl Iterator<Item = (isize, isize)> + '_ {
        (0..self.ny as isize).flat_map(move |j| (0..self.nx as isize).map(move |i| (i, j)))
    }

    /// Interior source cell that a (possibly ghost) index maps to.
    #[inline]
    pub fn source_of(&self, i: isize, j: isize) -> (isize, isize) {
        (fold(i, self.nx, self.boundary.x), fold(j, self.ny, self.boundary.y))
    }

    /// Populate the ghost layers of a padded array from its interior.
    pub fn fill_ghosts<T: Copy>(&self, data: &mut [T]) {
        debug_assert_eq!(data.len(), self.padded_len());
        let g = self.ghost as isize;
        let nx = self.nx as isize;
        let ny = self.ny as isize;
        for j in 0..ny {
            for i in (-g..0).chain(nx..nx + g) {
                let src = fold(i, self.nx, self.boundary.x);
                data[self.idx(i, j)] = data[self.idx(src, j)];
            }
        }
        // Rows last so the corner blocks pick up the already-filled x-ghosts.
        for j in (-g..0).chain(ny..ny + g) {
            let src = fold(j, self.ny, self.boundary.y);
            for i in -g..nx + g {
                data[self.idx(i, j)] = data[self.idx(i, src)];
            }
        }
    }
}

#[inline]
fn fold(i: isize, n: usize, bc: BoundaryCondition) -> isize {
    let n = n as isize;
    match bc {
        BoundaryCondition::Periodic => i.rem_euclid(n),
        BoundaryCondition::Symmetry => {
            // Reflection about the faces; repeated for indices beyond one width.
            let period = 2 * n;
            let m = i.rem_euclid(period);
            if m < n {
                m
            } else {
                period - 1 - m
            }
        }
    }
}

/// Cells near the interface network that are updated during transport.
#[derive(Debug, Clone)]
pub struct NarrowBand {
    pub k: usize,
    /// Interior cells with `varphi < k h` (padded indices).
    pub core: Vec<usize>,
    /// Core plus its stencil closure; these are the cells that get updated.
    pub active: Vec<usize>,
    /// Padded mask of `active`.
    pub mask: Vec<bool>,
}

impl NarrowBand {
    pub fn is_empty(&self) -> bool {
        self.active.is_empty()
    }

    #[inline]
    pub fn contains(&self, idx: usize) -> bool {
        self.mask[idx]
    }
}

pub fn rebuild_narrow_band(field: &RegionalField, k: usize) -> Result<NarrowBand> {
    let grid = field.grid();
    let min = grid.ghost + 2;
    if k < min {
        return Err(Error::BandTooNarrow { k, min });
    }
    let threshold = k as f64 * grid.h;
    let core: Vec<usize> = grid
        .interior_cells()
        .map(|(i, j)| grid.idx(i, j))
        .filter(|&c| field.varphi[c] < threshold)
        .collect();

    // Dilate the core by the stencil half-width (square closure).
    let g = grid.ghost as isize;
    let mut mask = vec![false; grid.padded_len()];
    for &c in &core {
        let (i, j) = grid.ij(c);
        for dj in -g..=g {
            for di in -g..=g {
                let (ii, jj) = (i + di, j + dj);
                let inside_x = match grid.boundary.x {
                    BoundaryCondition::Periodic => true,
                    BoundaryCondition::Symmetry => ii >= 0 && ii < grid.nx as isize,
                };
                let inside_y = match grid.boundary.y {
                    BoundaryCondition::Periodic => true,
                    BoundaryCondition::Symmetry => jj >= 0 && jj < grid.ny as isize,
                };
                if inside_x && inside_y {
                    let (si, sj) = grid.source_of(ii, jj);
                    mask[grid.idx(si, sj)] = true;
                }
            }
        }
    }
    let active = grid
        .interior_cells()
        .map(|(i, j)| grid.idx(i, j))
        .filter(|&c| mask[c])
        .collect();
    Ok(NarrowBand { k, core, active, mask })
}
