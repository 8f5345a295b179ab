use crate::error::{Error, Result};
use crate::grid::NarrowBand;
use crate::regional::{local_index_set, reconstruct_unchecked, Indicator, RegionalField};

/// One first-order semi-Lagrangian step.
///
/// Each cell is traced back along the velocity at its center. The local level
/// sets of all regions around the donor cell are bilinearly interpolated at the
/// departure point and recombined with the reconstruction operator. Cells
/// outside `band` (when given) keep their values.
pub fn semi_lagrangian_advect(
    field: &RegionalField,
    velocity: impl Fn([f64; 2]) -> [f64; 2],
    dt: f64,
    band: Option<&NarrowBand>,
) -> Result<RegionalField> {
    let grid = *field.grid();
    let g = grid.ghost as isize;
    let (nx, ny) = (grid.nx as isize, grid.ny as isize);
    let mut out = field.clone();
    for (i, j) in grid.interior_cells() {
        let k = grid.idx(i, j);
        if band.is_some_and(|b| !b.contains(k)) {
            continue;
        }
        let p = grid.center(i, j);
        let v = velocity(p);
        if v[0] == 0.0 && v[1] == 0.0 {
            continue;
        }
        let c = grid.to_cell_coords([p[0] - dt * v[0], p[1] - dt * v[1]]);
        let (fx, fy) = (c[0].floor(), c[1].floor());
        let (i0, j0) = (fx as isize, fy as isize);
        let (di, dj) = (c[0].round() as isize, c[1].round() as isize);
        let ok = |a: isize, n: isize| a - 1 >= -g && a + 1 < n + g;
        if !(c[0].is_finite() && c[1].is_finite() && ok(i0.min(di), nx) && ok(i0.max(di), nx))
            || !(ok(j0.min(dj), ny) && ok(j0.max(dj), ny))
        {
            return Err(Error::BacktraceOutOfRange { i, j });
        }
        let (tx, ty) = (c[0] - fx, c[1] - fy);
        let nodes = [
            (grid.idx(i0, j0), (1.0 - tx) * (1.0 - ty)),
            (grid.idx(i0 + 1, j0), tx * (1.0 - ty)),
            (grid.idx(i0, j0 + 1), (1.0 - tx) * ty),
            (grid.idx(i0 + 1, j0 + 1), tx * ty),
        ];
        let set = local_index_set(field, di, dj);
        let regions: &[Indicator] = set.as_slice();
        let mut vals = [0.0; 9];
        for (r, &reg) in regions.iter().enumerate() {
            vals[r] = nodes.iter().map(|&(n, w)| w * field.signed(n, reg)).sum();
        }
        let (d, chi) = reconstruct_unchecked(&vals[..regions.len()], regions);
        out.varphi[k] = d;
        out.chi[k] = chi;
    }
    out.fill_ghosts();
    Ok(out)
}
