//! Plain-text artifacts: metrics, snapshots, summaries and study tables.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::geometry::InterfaceGraph;
use crate::regional::{Indicator, RegionalField};
use crate::Result;

use super::{MetricsRow, RunReport, StudyTable};

/// Seventeen significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// Name fragment for a snapshot time.
pub fn time_tag(t: f64) -> String {
    format!("{t:.6}")
}

pub fn metrics_csv(rows: &[MetricsRow], regions: &[Indicator]) -> String {
    let mut s = String::from("t,step,eps1,epsinf,epsd,hausdorff,bands");
    for r in regions {
        write!(s, ",area_{r}").unwrap();
    }
    for r in regions {
        write!(s, ",edges_{r}").unwrap();
    }
    s.push_str(",junctions\n");
    for row in rows {
        write!(
            s,
            "{},{},{},{},{},{},{}",
            num(row.t),
            row.step,
            opt(row.eps1),
            opt(row.eps_inf),
            opt(row.eps_d),
            opt(row.hausdorff),
            row.bands.map(|b| b.to_string()).unwrap_or_default()
        )
        .unwrap();
        for r in regions {
            write!(s, ",{}", num(row.areas.get(r).copied().unwrap_or(0.0))).unwrap();
        }
        for r in regions {
            write!(s, ",{}", row.edges.get(r).copied().unwrap_or(0)).unwrap();
        }
        let j: Vec<String> = row.junctions.iter().map(|p| format!("{}:{}", num(p[0]), num(p[1]))).collect();
        writeln!(s, ",{}", j.join(";")).unwrap();
    }
    s
}

pub fn interface_csv(graph: &InterfaceGraph) -> String {
    let mut s = String::from("x0,y0,x1,y1,region_a,region_b\n");
    for g in &graph.segments {
        writeln!(s, "{},{},{},{},{},{}", num(g.a[0]), num(g.a[1]), num(g.b[0]), num(g.b[1]), g.pair.0, g.pair.1)
            .unwrap();
    }
    s
}

/// Header `nx ny h t`, then `varphi chi` per interior cell, x fastest.
pub fn field_dat(field: &RegionalField, t: f64) -> String {
    let g = field.grid();
    let mut s = format!("{} {} {} {}\n", g.nx, g.ny, num(g.h), num(t));
    for (i, j) in g.interior_cells() {
        let (v, c) = field.at(i, j);
        writeln!(s, "{} {}", num(v), c).unwrap();
    }
    s
}

/// Reads a file written by [`field_dat`] back into `(nx, ny, h, t, cells)`.
pub fn parse_field_dat(text: &str) -> Option<(usize, usize, f64, f64, Vec<(f64, Indicator)>)> {
    let mut lines = text.lines();
    let head: Vec<&str> = lines.next()?.split_whitespace().collect();
    let (nx, ny) = (head.first()?.parse().ok()?, head.get(1)?.parse().ok()?);
    let (h, t) = (head.get(2)?.parse().ok()?, head.get(3)?.parse().ok()?);
    let cells = lines
        .map(|l| {
            let mut it = l.split_whitespace();
            Some((it.next()?.parse().ok()?, it.next()?.parse().ok()?))
        })
        .collect::<Option<Vec<_>>>()?;
    Some((nx, ny, h, t, cells))
}

pub fn summary_txt(report: &RunReport) -> String {
    let c = &report.config;
    let last = report.rows.last();
    let mut s = String::new();
    writeln!(s, "scenario: {}", c.scenario).unwrap();
    writeln!(s, "n: {}", c.n).unwrap();
    writeln!(s, "scheme: {}", c.scheme).unwrap();
    writeln!(s, "rk: {}", c.rk).unwrap();
    writeln!(s, "cfl: {}", c.cfl).unwrap();
    writeln!(s, "operator: {}", c.operator).unwrap();
    writeln!(s, "reinit_every: {}", c.reinit_every).unwrap();
    writeln!(s, "band: {}", c.band.map(|b| b.to_string()).unwrap_or_else(|| "off".into())).unwrap();
    writeln!(s, "seed: {}", c.seed).unwrap();
    writeln!(s, "end_time: {}", num(report.final_time)).unwrap();
    writeln!(s, "steps: {}", report.steps).unwrap();
    if let Some(r) = last {
        writeln!(s, "eps1: {}", opt(r.eps1)).unwrap();
        writeln!(s, "epsinf: {}", opt(r.eps_inf)).unwrap();
        writeln!(s, "epsd: {}", opt(r.eps_d)).unwrap();
        for (k, a) in &r.areas {
            writeln!(s, "area_{k}: {}", num(*a)).unwrap();
        }
    }
    s
}

pub fn timing_csv(report: &RunReport) -> String {
    let per_step = if report.steps > 0 { report.wall_seconds / report.steps as f64 } else { 0.0 };
    format!("steps,wall_seconds,seconds_per_step\n{},{},{}\n", report.steps, num(report.wall_seconds), num(per_step))
}

pub fn study_csv(table: &StudyTable) -> String {
    let mut s = String::from("n,eps1,epsinf,epsd,order_eps1,order_epsinf,order_epsd\n");
    for (k, row) in table.rows.iter().enumerate() {
        let o = if k == 0 { [None; 3] } else { table.orders[k - 1] };
        writeln!(
            s,
            "{},{},{},{},{},{},{}",
            row.n,
            opt(row.eps1),
            opt(row.eps_inf),
            opt(row.eps_d),
            opt(o[0]),
            opt(o[1]),
            opt(o[2])
        )
        .unwrap();
    }
    s
}

/// Writes every artifact of a finished run into `dir`.
pub fn write_run(report: &RunReport, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("metrics.csv"), metrics_csv(&report.rows, &report.regions))?;
    for snap in &report.snapshots {
        let tag = time_tag(snap.t);
        fs::write(dir.join(format!("interface_{tag}.csv")), interface_csv(&snap.graph))?;
        fs::write(dir.join(format!("field_{tag}.dat")), field_dat(&snap.field, snap.t))?;
    }
    fs::write(dir.join("summary.txt"), summary_txt(report))?;
    fs::write(dir.join("timing.csv"), timing_csv(report))?;
    Ok(())
}
