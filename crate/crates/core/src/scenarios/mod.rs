//! Benchmark problems: initial networks, velocity fields, schedules and
//! default numerical settings.

pub mod diagnostics;
pub mod init;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::geometry::BandSpec;
use crate::grid::{BoundarySpec, Domain, Grid, STENCIL_HALF_WIDTH};
use crate::regional::RegionalField;
use crate::schemes::SchemeKind;
use crate::transport::{Operator, RkOrder, VelocitySpec};
use crate::{Error, Result};

pub use diagnostics::{
    arm_angles, count_bands, edge_counts, fit_area_slopes, interface_hausdorff, junction_arms, mullins_rate,
    principal_axis_angle, track_region_areas, AreaSample, RegionSeries, SlopeFit, SlopeOptions,
};
pub use init::{
    init_circle_two_region, init_concentric_circles, init_double_triple, init_split_disk, init_t_junction,
    init_three_region_spiral, init_triple_point, init_voronoi_regions, AnalyticNetwork, Primitive,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScenarioKind {
    CircleExpansion,
    TriplePoint,
    DoubleTriplePoint,
    Rotation,
    TJunction,
    SingleVortex,
    NormalFlow,
    Mullins,
    Foam,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 9] = [
        ScenarioKind::CircleExpansion,
        ScenarioKind::TriplePoint,
        ScenarioKind::DoubleTriplePoint,
        ScenarioKind::Rotation,
        ScenarioKind::TJunction,
        ScenarioKind::SingleVortex,
        ScenarioKind::NormalFlow,
        ScenarioKind::Mullins,
        ScenarioKind::Foam,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::CircleExpansion => "circle_expansion",
            ScenarioKind::TriplePoint => "triple_point",
            ScenarioKind::DoubleTriplePoint => "double_triple_point",
            ScenarioKind::Rotation => "rotation",
            ScenarioKind::TJunction => "t_junction",
            ScenarioKind::SingleVortex => "single_vortex",
            ScenarioKind::NormalFlow => "normal_flow",
            ScenarioKind::Mullins => "mullins",
            ScenarioKind::Foam => "foam",
        }
    }

    pub fn valid_names() -> String {
        Self::ALL.iter().map(|k| k.name()).collect::<Vec<_>>().join(", ")
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownScenario { name: s.to_string(), valid: Self::valid_names() })
    }
}

/// Numerical settings a scenario runs with unless overridden.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Defaults {
    pub n: usize,
    pub scheme: SchemeKind,
    pub rk: RkOrder,
    pub cfl: f64,
    pub operator: Operator,
    /// Steps between re-initializations; 0 disables it.
    pub reinit_every: usize,
    /// Narrow-band half width in cells; `None` updates the whole grid.
    pub band: Option<usize>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub kind: ScenarioKind,
    pub domain: Domain,
    pub boundary: BoundarySpec,
    pub velocity: VelocitySpec,
    pub end_time: f64,
    /// Times at which metrics rows and snapshots are written.
    pub measure_times: Vec<f64>,
    pub defaults: Defaults,
}

const SPLIT_RADIUS: f64 = 0.3;
const CENTER: [f64; 2] = [0.5, 0.5];
const TRIPLE_ORIGIN: [f64; 2] = [0.2, 0.5];
const DOUBLE_CENTER: [f64; 2] = [0.31, 0.5];
const VORTEX_CENTER: [f64; 2] = [0.5, 0.75];
const VORTEX_RADII: (f64, f64) = (0.08, 0.22);
const SPIRAL_RADIUS: f64 = 0.25;
const MULLINS_REGIONS: usize = 15;

fn schedule(end: f64, count: usize) -> Vec<f64> {
    (1..=count).map(|k| end * k as f64 / count as f64).collect()
}

impl Scenario {
    pub fn preset(kind: ScenarioKind) -> Result<Self> {
        let base = Defaults {
            n: 64,
            scheme: SchemeKind::Weno5,
            rk: RkOrder::Euler,
            cfl: 0.6,
            operator: Operator::Cr,
            reinit_every: 0,
            band: None,
            seed: 1,
        };
        let sym = BoundarySpec::symmetry();
        let (boundary, velocity, end_time, measure_times, defaults) = match kind {
            ScenarioKind::CircleExpansion => (
                sym,
                VelocitySpec::Expansion { center: CENTER, speed: 1.0 },
                0.2,
                schedule(0.2, 4),
                Defaults { cfl: 0.25, ..base },
            ),
            ScenarioKind::TriplePoint | ScenarioKind::DoubleTriplePoint => {
                (sym, VelocitySpec::Uniform([1.0, 0.0]), 0.4, schedule(0.4, 4), Defaults { cfl: 0.3, ..base })
            }
            ScenarioKind::Rotation => (
                sym,
                VelocitySpec::Rotation { center: CENTER, omega: 1.0 },
                0.5 * PI,
                vec![PI / 8.0, PI / 4.0, PI / 2.0],
                base,
            ),
            ScenarioKind::TJunction => (
                sym,
                VelocitySpec::MeanCurvature { gamma: 1.0 },
                0.02,
                schedule(0.02, 4),
                Defaults { n: 128, operator: Operator::CrStar, reinit_every: 5, band: Some(8), ..base },
            ),
            ScenarioKind::SingleVortex => (
                sym,
                VelocitySpec::SingleVortex { reversal: 3.0 },
                6.0,
                vec![1.5, 3.0, 4.5, 6.0],
                Defaults { n: 128, rk: RkOrder::Ssp2, reinit_every: 10, band: Some(8), ..base },
            ),
            ScenarioKind::NormalFlow => (
                sym,
                VelocitySpec::NormalDriven { rules: vec![((1, 2), 2), ((2, 3), 3), ((3, 1), 1)] },
                0.288,
                schedule(0.288, 8),
                Defaults { n: 128, operator: Operator::CrStar, reinit_every: 5, band: Some(8), ..base },
            ),
            ScenarioKind::Mullins => (
                BoundarySpec::periodic(),
                VelocitySpec::MeanCurvature { gamma: 1.0 },
                0.06,
                schedule(0.06, 60),
                Defaults { n: 128, operator: Operator::CrStar, reinit_every: 5, band: Some(8), ..base },
            ),
            ScenarioKind::Foam => return Err(Error::Unsupported(kind.name().to_string())),
        };
        Ok(Self { kind, domain: Domain::unit(), boundary, velocity, end_time, measure_times, defaults })
    }

    pub fn by_name(name: &str) -> Result<Self> {
        Self::preset(name.parse()?)
    }

    pub fn grid(&self, n: usize) -> Result<Grid> {
        Grid::new(n, n, self.domain, self.boundary, STENCIL_HALF_WIDTH)
    }

    pub fn initial_field(&self, grid: Grid, seed: u64) -> RegionalField {
        match self.kind {
            ScenarioKind::CircleExpansion => init_circle_two_region(0.2, CENTER, grid),
            ScenarioKind::TriplePoint => init_triple_point(TRIPLE_ORIGIN, grid),
            ScenarioKind::DoubleTriplePoint => init_double_triple(SPLIT_RADIUS, DOUBLE_CENTER, grid),
            ScenarioKind::Rotation => init_split_disk(SPLIT_RADIUS, CENTER, 0.0, grid),
            ScenarioKind::TJunction => init_t_junction(grid),
            ScenarioKind::SingleVortex => init_concentric_circles(VORTEX_CENTER, VORTEX_RADII.0, VORTEX_RADII.1, grid),
            ScenarioKind::NormalFlow => init_three_region_spiral(SPIRAL_RADIUS, CENTER, grid),
            ScenarioKind::Mullins => init_voronoi_regions(MULLINS_REGIONS, seed, grid),
            ScenarioKind::Foam => unreachable!("foam presets are rejected"),
        }
    }

    /// Exact interface network at time `t`, when one is known.
    pub fn exact_network(&self, t: f64) -> Option<AnalyticNetwork> {
        match self.kind {
            ScenarioKind::CircleExpansion => Some(init::circle_network(CENTER, 0.2 + t)),
            ScenarioKind::TriplePoint => Some(init::triple_point_network(TRIPLE_ORIGIN).translated([t, 0.0])),
            ScenarioKind::DoubleTriplePoint => {
                Some(init::split_disk_network(SPLIT_RADIUS, DOUBLE_CENTER, 0.5 * PI).translated([t, 0.0]))
            }
            ScenarioKind::Rotation => {
                Some(init::split_disk_network(SPLIT_RADIUS, CENTER, 0.0).rotated(CENTER, t))
            }
            _ => None,
        }
    }

    /// Cells over which field errors are measured at time `t`.
    pub fn error_band(&self, t: f64, h: f64) -> Option<BandSpec> {
        match self.kind {
            ScenarioKind::CircleExpansion | ScenarioKind::Rotation => Some(BandSpec::Distance(10.0 * h)),
            ScenarioKind::TriplePoint | ScenarioKind::DoubleTriplePoint => Some(BandSpec::JunctionWindow {
                width: 1.2 * h,
                radius: 0.05 * self.domain.lx,
                junctions: self.exact_network(t)?.junctions,
            }),
            _ => None,
        }
    }

    /// Sampling line for band counting: origin, direction and length. The line
    /// is horizontal through the upper junction, where the spiral winds.
    pub fn band_ray(&self) -> Option<([f64; 2], [f64; 2], f64)> {
        (self.kind == ScenarioKind::NormalFlow)
            .then_some(([self.domain.x0, CENTER[1] + SPIRAL_RADIUS], [1.0, 0.0], self.domain.lx))
    }

    /// Initial radii of the outer and inner circles for the vortex problem.
    pub fn vortex_radii() -> (f64, f64) {
        (VORTEX_RADII.1, VORTEX_RADII.0)
    }

    pub fn split_radius() -> f64 {
        SPLIT_RADIUS
    }
}
