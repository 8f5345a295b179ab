//! Scenario runs, metrics collection and convergence studies.

pub mod config;
pub mod io;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use crate::geometry::{error_norms, extract_interface, region_areas, InterfaceGraph};
use crate::regional::{Indicator, RegionalField};
use crate::scenarios::{count_bands, edge_counts, interface_hausdorff, Scenario};
use crate::simulation::Simulation;
use crate::{Error, Result};

pub use config::RunConfig;

/// One line of `metrics.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRow {
    pub t: f64,
    pub step: usize,
    pub areas: BTreeMap<Indicator, f64>,
    /// Neighbors sharing more than one cell width of interface.
    pub edges: BTreeMap<Indicator, usize>,
    /// Time integral of the mean field error over the error band.
    pub eps1: Option<f64>,
    /// Time integral of the maximum field error over the error band.
    pub eps_inf: Option<f64>,
    /// Time integral of the Hausdorff distance to the exact network.
    pub eps_d: Option<f64>,
    pub hausdorff: Option<f64>,
    pub junctions: Vec<[f64; 2]>,
    pub bands: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct Snapshot {
    pub t: f64,
    pub field: RegionalField,
    pub graph: InterfaceGraph,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub config: RunConfig,
    pub regions: Vec<Indicator>,
    pub rows: Vec<MetricsRow>,
    pub snapshots: Vec<Snapshot>,
    pub final_field: RegionalField,
    pub final_time: f64,
    pub steps: usize,
    pub wall_seconds: f64,
}

#[derive(Debug, Clone, Copy, Default)]
struct Accum {
    eps1: f64,
    eps_inf: f64,
    eps_d: f64,
}

/// Instantaneous field and interface errors against the exact solution.
fn instant_errors(s: &Scenario, field: &RegionalField, t: f64) -> Result<Option<(f64, f64, Option<f64>)>> {
    let (Some(net), Some(band)) = (s.exact_network(t), s.error_band(t, field.grid().h)) else {
        return Ok(None);
    };
    let (mean, max) = error_norms(field, |p| net.distance(p), &band)?;
    let graph = extract_interface(field);
    let d = interface_hausdorff(&graph, &net, &s.domain, 0.5 * field.grid().h);
    Ok(Some((mean, max, d)))
}

fn measure(s: &Scenario, sim: &Simulation, acc: Option<&Accum>, d_now: Option<f64>) -> MetricsRow {
    let field = &sim.field;
    let graph = extract_interface(field);
    MetricsRow {
        t: sim.t,
        step: sim.steps,
        areas: region_areas(field),
        edges: edge_counts(&graph, field.grid().h),
        eps1: acc.map(|a| a.eps1),
        eps_inf: acc.map(|a| a.eps_inf),
        eps_d: acc.map(|a| a.eps_d),
        hausdorff: d_now,
        junctions: graph.junction_points(),
        bands: s.band_ray().map(|(o, d, l)| count_bands(field, o, d, l)),
    }
}

/// Runs one scenario to its end time and, if an output directory is set, writes all artifacts.
pub fn run(cfg: &RunConfig) -> Result<RunReport> {
    cfg.validate()?;
    let scenario = Scenario::preset(cfg.scenario)?;
    let grid = scenario.grid(cfg.n)?;
    let field = scenario.initial_field(grid, cfg.seed);
    let regions = field.regions();
    let mut sim = Simulation::new(field, scenario.velocity.clone(), cfg.settings())?;

    let mut targets: Vec<f64> = scenario
        .measure_times
        .iter()
        .chain(cfg.snapshot_times.iter())
        .copied()
        .filter(|&t| t > 0.0 && t < cfg.end_time)
        .collect();
    targets.push(cfg.end_time);
    targets.sort_by(f64::total_cmp);
    targets.dedup();
    let is_row = |t: f64| t == cfg.end_time || scenario.measure_times.contains(&t);
    let is_snap = |t: f64| cfg.snapshot_times.contains(&t);

    let exact = scenario.exact_network(0.0).is_some();
    let mut acc = exact.then(Accum::default);
    let mut d_now = if exact { instant_errors(&scenario, &sim.field, 0.0)?.and_then(|e| e.2) } else { None };
    let mut rows = vec![measure(&scenario, &sim, acc.as_ref(), d_now)];
    let mut snapshots = Vec::new();
    if is_snap(0.0) {
        snapshots.push(Snapshot { t: 0.0, field: sim.field.clone(), graph: extract_interface(&sim.field) });
    }

    let start = Instant::now();
    let mut failure: Option<Error> = None;
    for &target in &targets {
        sim.run_until(target, |s, dt| {
            if failure.is_some() {
                return;
            }
            if let Some(a) = acc.as_mut() {
                match instant_errors(&scenario, &s.field, s.t) {
                    Ok(Some((mean, max, d))) => {
                        a.eps1 += mean * dt;
                        a.eps_inf += max * dt;
                        a.eps_d += d.unwrap_or(f64::NAN) * dt;
                        d_now = d;
                    }
                    Ok(None) => {}
                    Err(e) => failure = Some(e),
                }
            }
        })?;
        if let Some(e) = failure.take() {
            return Err(e);
        }
        if is_row(target) {
            rows.push(measure(&scenario, &sim, acc.as_ref(), d_now));
        }
        if is_snap(target) {
            snapshots.push(Snapshot { t: target, field: sim.field.clone(), graph: extract_interface(&sim.field) });
        }
    }
    let wall_seconds = start.elapsed().as_secs_f64();
    log::info!("{} n={} finished {} steps in {:.2}s", cfg.scenario, cfg.n, sim.steps, wall_seconds);

    let report = RunReport {
        config: cfg.clone(),
        regions,
        rows,
        snapshots,
        final_time: sim.t,
        steps: sim.steps,
        final_field: sim.field,
        wall_seconds,
    };
    if let Some(dir) = &cfg.out_dir {
        io::write_run(&report, dir)?;
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyRow {
    pub n: usize,
    pub eps1: Option<f64>,
    pub eps_inf: Option<f64>,
    pub eps_d: Option<f64>,
}

/// Final errors per resolution and observed orders between successive ones.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyTable {
    pub rows: Vec<StudyRow>,
    /// `orders[k]` compares `rows[k]` with `rows[k + 1]`.
    pub orders: Vec<[Option<f64>; 3]>,
}

/// `log2(coarse / fine)` scaled by the refinement ratio.
pub fn observed_order(coarse: f64, fine: f64, ratio: f64) -> f64 {
    (coarse / fine).ln() / ratio.ln()
}

/// Runs the scenario at every resolution; per-run artifacts go to `<out>/n<N>`.
pub fn convergence_study(cfg: &RunConfig, resolutions: &[usize]) -> Result<StudyTable> {
    if resolutions.len() < 3 {
        return Err(Error::Config(format!("a study needs at least 3 resolutions, got {}", resolutions.len())));
    }
    let mut rows = Vec::new();
    for &n in resolutions {
        let mut c = cfg.clone();
        c.n = n;
        c.out_dir = cfg.out_dir.as_ref().map(|d| d.join(format!("n{n}")));
        let report = run(&c).map_err(|e| Error::StudyFailed { n, source: Box::new(e) })?;
        let last = report.rows.last().expect("a run always has a final row");
        rows.push(StudyRow { n, eps1: last.eps1, eps_inf: last.eps_inf, eps_d: last.eps_d });
    }
    let orders = rows
        .windows(2)
        .map(|w| {
            let ratio = w[1].n as f64 / w[0].n as f64;
            let o = |a: Option<f64>, b: Option<f64>| Some(observed_order(a?, b?, ratio));
            [o(w[0].eps1, w[1].eps1), o(w[0].eps_inf, w[1].eps_inf), o(w[0].eps_d, w[1].eps_d)]
        })
        .collect();
    let table = StudyTable { rows, orders };
    if let Some(dir) = &cfg.out_dir {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("convergence.csv"), io::study_csv(&table))?;
    }
    Ok(table)
}

/// Output directory from the environment, if set.
pub fn env_out_dir() -> Option<PathBuf> {
    std::env::var_os("RLSNET_OUT").filter(|v| !v.is_empty()).map(PathBuf::from)
}
