//! Regional level-set representation: one unsigned distance plus one integer
//! region indicator per cell, with the local construction and reconstruction
//! operators that turn it into signed level sets and back.

use crate::error::{Error, Result};
use crate::geometry::point_segment_distance;
use crate::grid::Grid;

/// Region indicator. Valid indicators are positive.
pub type Indicator = u32;

/// Per-cell `(varphi, chi)` pairs on a padded grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionalField {
    grid: Grid,
    pub varphi: Vec<f64>,
    pub chi: Vec<Indicator>,
}

impl RegionalField {
    /// Single-region field with constant distance.
    pub fn uniform(grid: Grid, varphi: f64, chi: Indicator) -> Self {
        let n = grid.padded_len();
        Self { grid, varphi: vec![varphi; n], chi: vec![chi; n] }
    }

    /// Sample `(distance, indicator)` at every interior cell center, then fill ghosts.
    pub fn from_fn(grid: Grid, mut f: impl FnMut([f64; 2]) -> (f64, Indicator)) -> Self {
        let mut field = Self::uniform(grid, 0.0, 1);
        for (i, j) in grid.interior_cells() {
            let (d, c) = f(grid.center(i, j));
            let k = grid.idx(i, j);
            field.varphi[k] = d.abs();
            field.chi[k] = c;
        }
        field.fill_ghosts();
        field
    }

    #[inline]
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    #[inline]
    pub fn at(&self, i: isize, j: isize) -> (f64, Indicator) {
        let k = self.grid.idx(i, j);
        (self.varphi[k], self.chi[k])
    }

    #[inline]
    pub fn set(&mut self, i: isize, j: isize, varphi: f64, chi: Indicator) {
        let k = self.grid.idx(i, j);
        self.varphi[k] = varphi;
        self.chi[k] = chi;
    }

    /// Extend both distance and indicator into the ghost layers.
    pub fn fill_ghosts(&mut self) {
        let grid = self.grid;
        grid.fill_ghosts(&mut self.varphi);
        grid.fill_ghosts(&mut self.chi);
    }

    /// Sorted distinct indicators over the interior.
    pub fn regions(&self) -> Vec<Indicator> {
        let mut r: Vec<Indicator> = self
            .grid
            .interior_cells()
            .map(|(i, j)| self.chi[self.grid.idx(i, j)])
            .collect();
        r.sort_unstable();
        r.dedup();
        r
    }

    pub fn is_finite(&self) -> bool {
        self.grid
            .interior_cells()
            .all(|(i, j)| self.varphi[self.grid.idx(i, j)].is_finite())
    }

    /// Signed value of the local level set of region `r` at a cell.
    #[inline]
    pub fn signed(&self, k: usize, r: Indicator) -> f64 {
        construct(self.varphi[k], self.chi[k], r)
    }
}

/// Construction operator `C_r` for a single cell value.
#[inline]
pub fn construct(varphi: f64, chi: Indicator, r: Indicator) -> f64 {
    if chi == r {
        varphi
    } else {
        -varphi
    }
}

/// Distinct indicators of the 3x3 near neighborhood, primary indicator first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalIndexSet {
    items: [Indicator; 9],
    len: usize,
}

impl LocalIndexSet {
    pub fn single(chi: Indicator) -> Self {
        let mut items = [0; 9];
        items[0] = chi;
        Self { items, len: 1 }
    }

    #[inline]
    fn push_unique(&mut self, chi: Indicator) {
        if !self.as_slice().contains(&chi) {
            self.items[self.len] = chi;
            self.len += 1;
        }
    }

    #[inline]
    pub fn as_slice(&self) -> &[Indicator] {
        &self.items[..self.len]
    }

    #[inline]
    pub fn primary(&self) -> Indicator {
        self.items[0]
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, chi: Indicator) -> bool {
        self.as_slice().contains(&chi)
    }
}

/// Index set of the near neighborhood of `(i, j)`. Secondary indicators are
/// ordered by first occurrence in a row-major scan (rows bottom to top, `i`
/// increasing within a row). Ghost cells must be filled.
#[inline]
pub fn local_index_set(field: &RegionalField, i: isize, j: isize) -> LocalIndexSet {
    let grid = field.grid();
    let mut set = LocalIndexSet::single(field.chi[grid.idx(i, j)]);
    for dj in -1..=1 {
        let row = grid.idx(i - 1, j + dj);
        for c in &field.chi[row..row + 3] {
            set.push_unique(*c);
        }
    }
    set
}

/// A signed local level set over a neighborhood of cells.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalLevelSet {
    pub region: Indicator,
    /// Padded indices of the cells.
    pub cells: Vec<usize>,
    pub values: Vec<f64>,
}

/// Apply `C_r` to each listed cell.
pub fn construct_local(field: &RegionalField, cells: &[usize], r: Indicator) -> LocalLevelSet {
    LocalLevelSet {
        region: r,
        cells: cells.to_vec(),
        values: cells.iter().map(|&k| field.signed(k, r)).collect(),
    }
}

/// Padded indices of the 3x3 near neighborhood, row-major.
pub fn near_neighborhood(grid: &Grid, i: isize, j: isize) -> [usize; 9] {
    let mut out = [0; 9];
    for dj in 0..3 {
        for di in 0..3 {
            out[dj * 3 + di] = grid.idx(i + di as isize - 1, j + dj as isize - 1);
        }
    }
    out
}

/// `C_r` over the 3x3 near neighborhood as a `[row][col]` block, row 0 at `j - 1`.
#[inline]
pub fn construct_block(field: &RegionalField, i: isize, j: isize, r: Indicator) -> [[f64; 3]; 3] {
    let grid = field.grid();
    let mut out = [[0.0; 3]; 3];
    for (dj, row) in out.iter_mut().enumerate() {
        let base = grid.idx(i - 1, j + dj as isize - 1);
        for (di, v) in row.iter_mut().enumerate() {
            *v = field.signed(base + di, r);
        }
    }
    out
}

/// Construction operator `C_r*` on the near neighborhood of `(i, j)`.
///
/// Cells of region `r` keep their `C_r` value. Every other cell gets
/// `-min(h, d_s)`, with `d_s` the distance from its center to the zero contour
/// of the `C_r` field inside the neighborhood (bilinear edge crossings joined
/// by marching squares).
pub fn construct_local_star(
    field: &RegionalField,
    i: isize,
    j: isize,
    r: Indicator,
) -> Result<[[f64; 3]; 3]> {
    let grid = field.grid();
    let cells = near_neighborhood(grid, i, j);
    if !cells.iter().any(|&k| field.chi[k] == r) {
        return Err(Error::MissingRegion(r));
    }
    let mut block = construct_block(field, i, j, r);
    let inside: [[bool; 3]; 3] = std::array::from_fn(|dj| {
        std::array::from_fn(|di| field.chi[cells[dj * 3 + di]] == r)
    });
    if inside.iter().flatten().all(|&b| b) {
        return Ok(block);
    }
    let segments = zero_contour_3x3(&block, &inside, grid.h);
    if segments.is_empty() {
        return Ok(block);
    }
    let h = grid.h;
    for dj in 0..3 {
        for di in 0..3 {
            if inside[dj][di] {
                continue;
            }
            let p = [(di as f64 - 1.0) * h, (dj as f64 - 1.0) * h];
            let ds = segments
                .iter()
                .map(|s| point_segment_distance(p, s[0], s[1]))
                .fold(f64::INFINITY, f64::min);
            block[dj][di] = -ds.min(h);
        }
    }
    Ok(block)
}

/// Marching-squares zero contour of a 3x3 block of signed values, in
/// coordinates relative to the block center.
fn zero_contour_3x3(
    vals: &[[f64; 3]; 3],
    inside: &[[bool; 3]; 3],
    h: f64,
) -> Vec<[[f64; 2]; 2]> {
    let mut segs = Vec::new();
    for b in 0..2 {
        for a in 0..2 {
            // Counter-clockwise corners.
            let corners = [(a, b), (a + 1, b), (a + 1, b + 1), (a, b + 1)];
            let pos = |c: (usize, usize)| [(c.0 as f64 - 1.0) * h, (c.1 as f64 - 1.0) * h];
            let ins: [bool; 4] = std::array::from_fn(|m| inside[corners[m].1][corners[m].0]);
            let val: [f64; 4] = std::array::from_fn(|m| vals[corners[m].1][corners[m].0]);
            let mut cross: [Option<[f64; 2]>; 4] = [None; 4];
            for e in 0..4 {
                let (p, q) = (e, (e + 1) % 4);
                if ins[p] != ins[q] {
                    let (vp, vq) = (val[p].abs(), val[q].abs());
                    let t = if vp + vq > 0.0 { vp / (vp + vq) } else { 0.5 };
                    let (pp, pq) = (pos(corners[p]), pos(corners[q]));
                    cross[e] = Some([pp[0] + t * (pq[0] - pp[0]), pp[1] + t * (pq[1] - pp[1])]);
                }
            }
            let found: Vec<usize> = (0..4).filter(|&e| cross[e].is_some()).collect();
            match found.len() {
                2 => segs.push([cross[found[0]].unwrap(), cross[found[1]].unwrap()]),
                4 => {
                    let center_inside = val.iter().sum::<f64>() > 0.0;
                    // Cut off the two corners whose side differs from the center.
                    for m in 0..4 {
                        if ins[m] != center_inside {
                            let e_in = (m + 3) % 4;
                            segs.push([cross[e_in].unwrap(), cross[m].unwrap()]);
                        }
                    }
                }
                _ => {}
            }
        }
    }
    segs
}

/// Number of separate regions touching a cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellType {
    Full,
    TwoRegion,
    ComplexRegion,
}

/// Type of the near neighborhood, from the number of distinct indicators in it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NeighborhoodType {
    Full,
    TwoRegion,
    ComplexRegion,
}

impl NeighborhoodType {
    pub fn from_count(n: usize) -> Self {
        match n {
            0 | 1 => Self::Full,
            2 => Self::TwoRegion,
            _ => Self::ComplexRegion,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellClass {
    pub cell: CellType,
    pub neighborhood: NeighborhoodType,
    /// Regions whose local zero contour crosses the cell boundary.
    pub crossing: usize,
}

/// Cell type determination.
///
/// For every region of the near neighborhood the `C_r` field is evaluated at
/// the four cell corners (mean of the four adjacent centers); the region's
/// zero contour meets the cell boundary when those corner values do not share
/// a strict sign, since the bilinear interpolant is linear along each edge.
pub fn classify_cell(field: &RegionalField, i: isize, j: isize) -> CellClass {
    let set = local_index_set(field, i, j);
    let neighborhood = NeighborhoodType::from_count(set.len());
    if set.len() == 1 {
        return CellClass { cell: CellType::Full, neighborhood, crossing: 0 };
    }
    let mut crossing = 0;
    for &r in set.as_slice() {
        let b = construct_block(field, i, j, r);
        let corner = |a: usize, c: usize| 0.25 * (b[c][a] + b[c][a + 1] + b[c + 1][a] + b[c + 1][a + 1]);
        let vals = [corner(0, 0), corner(1, 0), corner(1, 1), corner(0, 1)];
        let all_pos = vals.iter().all(|&v| v > 0.0);
        let all_neg = vals.iter().all(|&v| v < 0.0);
        if !(all_pos || all_neg) {
            crossing += 1;
        }
    }
    let cell = match crossing {
        0 => CellType::Full,
        // A crossing contour separates the cell into at least two regions.
        1 | 2 => CellType::TwoRegion,
        _ => CellType::ComplexRegion,
    };
    CellClass { cell, neighborhood, crossing }
}

/// Reconstruction operator `R`: `(|max phi_r|, argmax)`; ties go to the
/// smallest indicator.
pub fn reconstruct(values: &[f64], indicators: &[Indicator]) -> Result<(f64, Indicator)> {
    if values.is_empty() || values.len() != indicators.len() {
        return Err(Error::EmptyCandidates);
    }
    Ok(reconstruct_unchecked(values, indicators))
}

#[inline]
pub(crate) fn reconstruct_unchecked(values: &[f64], indicators: &[Indicator]) -> (f64, Indicator) {
    let mut best = values[0];
    let mut arg = indicators[0];
    for (&v, &c) in values.iter().zip(indicators).skip(1) {
        if v > best || (v == best && c < arg) {
            best = v;
            arg = c;
        }
    }
    (best.abs(), arg)
}
