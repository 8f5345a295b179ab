//! Time loop: transport steps, narrow-band upkeep and periodic re-initialization.

use crate::grid::{rebuild_narrow_band, NarrowBand};
use crate::regional::RegionalField;
use crate::reinit::{reinitialize_with_stats, ReinitPlan};
use crate::schemes::SchemeKind;
use crate::transport::{advance, compute_dt, max_speed, Operator, RkOrder, StepPlan, VelocitySpec};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationSettings {
    pub scheme: SchemeKind,
    pub rk: RkOrder,
    pub cfl: f64,
    pub operator: Operator,
    /// Steps between re-initializations; 0 disables it.
    pub reinit_every: usize,
    pub reinit: ReinitPlan,
    pub band: Option<usize>,
    pub dt_max: f64,
}

pub struct Simulation {
    pub field: RegionalField,
    pub t: f64,
    pub steps: usize,
    pub velocity: VelocitySpec,
    pub settings: SimulationSettings,
    band: Option<NarrowBand>,
}

/// Relative slack when deciding that a target time has been reached.
const TIME_EPS: f64 = 1e-12;

impl Simulation {
    pub fn new(field: RegionalField, velocity: VelocitySpec, settings: SimulationSettings) -> Result<Self> {
        let band = settings.band.map(|k| rebuild_narrow_band(&field, k)).transpose()?;
        Ok(Self { field, t: 0.0, steps: 0, velocity, settings, band })
    }

    /// Stable step size at the current state.
    pub fn stable_dt(&self) -> f64 {
        let h = self.field.grid().h;
        let gamma = match self.velocity {
            VelocitySpec::MeanCurvature { gamma } => Some(gamma),
            _ => None,
        };
        let speed = max_speed(&self.velocity, &self.field, self.t, self.band.as_ref());
        compute_dt(speed, h, self.settings.cfl, gamma, self.settings.dt_max)
    }

    /// One step, shortened so as not to pass `limit`. Returns the step size.
    pub fn step(&mut self, limit: f64) -> Result<f64> {
        let dt = self.stable_dt().min(limit - self.t);
        if dt <= 0.0 {
            return Ok(0.0);
        }
        let s = &self.settings;
        let plan = StepPlan { dt, rk: s.rk, scheme: s.scheme, operator: s.operator };
        let mut next = advance(&self.field, &self.velocity, &plan, self.t, self.band.as_ref())?;
        self.steps += 1;
        self.t = if limit - (self.t + dt) <= TIME_EPS * limit.abs().max(1.0) { limit } else { self.t + dt };
        if s.reinit_every > 0 && self.steps % s.reinit_every == 0 {
            next = reinitialize_with_stats(&next, &s.reinit).0;
        }
        if !next.is_finite() {
            return Err(Error::NonFinite { step: self.steps, time: self.t });
        }
        self.field = next;
        if let Some(k) = s.band {
            self.band = Some(rebuild_narrow_band(&self.field, k)?);
        }
        Ok(dt)
    }

    /// Steps until `target`, calling `after_step(self, dt)` after each one.
    pub fn run_until(&mut self, target: f64, mut after_step: impl FnMut(&Simulation, f64)) -> Result<()> {
        while self.t < target {
            let dt = self.step(target)?;
            if dt == 0.0 {
                break;
            }
            after_step(self, dt);
        }
        Ok(())
    }

    pub fn narrow_band(&self) -> Option<&NarrowBand> {
        self.band.as_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{BoundarySpec, Grid};

    fn settings() -> SimulationSettings {
        SimulationSettings {
            scheme: SchemeKind::Weno5,
            rk: RkOrder::Euler,
            cfl: 0.5,
            operator: Operator::Cr,
            reinit_every: 0,
            reinit: ReinitPlan::default(),
            band: None,
            dt_max: 1.0,
        }
    }

    fn disk() -> RegionalField {
        let g = Grid::unit_square(32, BoundarySpec::symmetry()).unwrap();
        RegionalField::from_fn(g, |p| {
            let d = (p[0] - 0.5).hypot(p[1] - 0.5) - 0.25;
            (d.abs(), if d < 0.0 { 2 } else { 1 })
        })
    }

    #[test]
    fn lands_exactly_on_target() {
        let mut sim = Simulation::new(disk(), VelocitySpec::Uniform([1.0, 0.0]), settings()).unwrap();
        let mut total = 0.0;
        sim.run_until(0.1, |_, dt| total += dt).unwrap();
        assert_eq!(sim.t, 0.1);
        assert!((total - 0.1).abs() < 1e-14);
        assert_eq!(sim.steps, (0.1 / (0.5 / 32.0) as f64).ceil() as usize);
    }

    #[test]
    fn non_finite_aborts() {
        let mut f = disk();
        let g = *f.grid();
        let (i, j) = g.cell_of([0.75, 0.5]);
        f.varphi[g.idx(i, j)] = f64::NAN;
        let mut sim = Simulation::new(f, VelocitySpec::Uniform([1.0, 0.0]), settings()).unwrap();
        assert!(matches!(sim.step(1.0), Err(Error::NonFinite { step: 1, .. })));
    }

    #[test]
    fn band_run_keeps_interface_cells_updated() {
        let s = SimulationSettings { band: Some(6), reinit_every: 2, ..settings() };
        let mut a = Simulation::new(disk(), VelocitySpec::Uniform([1.0, 0.5]), s).unwrap();
        let mut b = Simulation::new(disk(), VelocitySpec::Uniform([1.0, 0.5]), SimulationSettings { reinit_every: 2, ..settings() }).unwrap();
        a.run_until(0.05, |_, _| {}).unwrap();
        b.run_until(0.05, |_, _| {}).unwrap();
        let g = *a.field.grid();
        for (i, j) in g.interior_cells() {
            let k = g.idx(i, j);
            if b.field.varphi[k] < 2.0 * g.h {
                assert_eq!(a.field.chi[k], b.field.chi[k]);
                assert!((a.field.varphi[k] - b.field.varphi[k]).abs() < 1e-3 * g.h, "{i} {j}");
            }
        }
    }
}
