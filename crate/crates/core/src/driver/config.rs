//! Flat `key = value` run configuration.

use std::path::{Path, PathBuf};

use crate::reinit::ReinitPlan;
use crate::scenarios::{Scenario, ScenarioKind};
use crate::schemes::SchemeKind;
use crate::simulation::SimulationSettings;
use crate::transport::{Operator, RkOrder};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: ScenarioKind,
    pub n: usize,
    pub resolutions: Vec<usize>,
    pub scheme: SchemeKind,
    pub rk: RkOrder,
    pub cfl: f64,
    pub operator: Operator,
    pub reinit_every: usize,
    pub reinit: ReinitPlan,
    pub band: Option<usize>,
    pub out_dir: Option<PathBuf>,
    /// Times at which interface and field snapshots are written.
    pub snapshot_times: Vec<f64>,
    pub seed: u64,
    pub end_time: f64,
    pub dt_max: f64,
}

pub const KEYS: &[&str] = &[
    "scenario",
    "n",
    "resolutions",
    "scheme",
    "rk",
    "cfl",
    "operator",
    "reinit_every",
    "band",
    "out",
    "snapshot_times",
    "seed",
    "end_time",
    "dt_max",
    "reinit.method",
    "reinit.dtau_factor",
    "reinit.max_iters",
    "reinit.tol",
    "reinit.band",
];

impl RunConfig {
    /// Preset defaults of a scenario.
    pub fn for_scenario(name: &str) -> Result<Self> {
        let s = Scenario::by_name(name)?;
        let d = s.defaults;
        let stride = (s.measure_times.len() / 4).max(1);
        let snapshot_times = s.measure_times.iter().copied().skip(stride - 1).step_by(stride).collect();
        Ok(Self {
            scenario: s.kind,
            n: d.n,
            resolutions: vec![32, 64, 128, 256],
            scheme: d.scheme,
            rk: d.rk,
            cfl: d.cfl,
            operator: d.operator,
            reinit_every: d.reinit_every,
            reinit: ReinitPlan::default(),
            band: d.band,
            out_dir: None,
            snapshot_times,
            seed: d.seed,
            end_time: s.end_time,
            dt_max: 1.0,
        })
    }

    /// Scenario named in the file, then every other key applied on top of its defaults.
    pub fn from_text(text: &str) -> Result<Self> {
        let pairs = parse_pairs(text)?;
        let name = pairs
            .iter()
            .find(|(k, _)| k == "scenario")
            .map(|(_, v)| v.clone())
            .ok_or_else(|| Error::Config("missing `scenario` key".into()))?;
        let mut cfg = Self::for_scenario(&name)?;
        cfg.apply_pairs(&pairs)?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_text(&text)
    }

    pub fn apply_pairs(&mut self, pairs: &[(String, String)]) -> Result<()> {
        for (k, v) in pairs {
            self.set(k, v)?;
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |what: &str| Error::Config(format!("invalid value `{value}` for `{key}`: {what}"));
        match key {
            "scenario" => {
                let kind: ScenarioKind = value.parse()?;
                if kind != self.scenario {
                    return Err(Error::Config(format!(
                        "scenario `{value}` conflicts with `{}`",
                        self.scenario
                    )));
                }
            }
            "n" => self.n = value.parse().map_err(|_| bad("expected a positive integer"))?,
            "resolutions" => {
                self.resolutions = value
                    .split(',')
                    .map(|s| s.trim().parse::<usize>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| bad("expected a comma separated list of integers"))?;
            }
            "scheme" => self.scheme = value.parse().map_err(|e: String| bad(&e))?,
            "rk" => self.rk = value.parse().map_err(|e: String| bad(&e))?,
            "cfl" => self.cfl = parse_positive(value).ok_or_else(|| bad("expected a positive number"))?,
            "operator" => self.operator = value.parse().map_err(|e: String| bad(&e))?,
            "reinit_every" => self.reinit_every = value.parse().map_err(|_| bad("expected an integer"))?,
            "band" => {
                self.band = match value {
                    "off" | "none" => None,
                    v => Some(v.parse().map_err(|_| bad("expected an integer or `off`"))?),
                }
            }
            "out" => self.out_dir = Some(PathBuf::from(value)),
            "snapshot_times" => {
                self.snapshot_times = if value.trim().is_empty() {
                    Vec::new()
                } else {
                    value
                        .split(',')
                        .map(|s| s.trim().parse::<f64>())
                        .collect::<std::result::Result<_, _>>()
                        .map_err(|_| bad("expected a comma separated list of times"))?
                };
            }
            "seed" => self.seed = value.parse().map_err(|_| bad("expected an integer"))?,
            "end_time" => self.end_time = parse_positive(value).ok_or_else(|| bad("expected a positive number"))?,
            "dt_max" => self.dt_max = parse_positive(value).ok_or_else(|| bad("expected a positive number"))?,
            "reinit.method" => {
                if value != "iterative" {
                    return Err(bad("only `iterative` is available"));
                }
            }
            "reinit.dtau_factor" => {
                self.reinit.dtau_factor = parse_positive(value).ok_or_else(|| bad("expected a positive number"))?
            }
            "reinit.max_iters" => self.reinit.max_iters = value.parse().map_err(|_| bad("expected an integer"))?,
            "reinit.tol" => {
                self.reinit.tol_factor = parse_positive(value).ok_or_else(|| bad("expected a positive number"))?
            }
            "reinit.band" => self.reinit.band = value.parse().map_err(|_| bad("expected an integer"))?,
            _ => {
                return Err(Error::Config(format!("unknown key `{key}`; valid keys: {}", KEYS.join(", "))));
            }
        }
        Ok(())
    }

    /// Checks value ranges that single keys cannot.
    pub fn validate(&self) -> Result<()> {
        if self.n < 8 {
            return Err(Error::Config(format!("n = {} is below the minimum of 8", self.n)));
        }
        if self.cfl > 1.0 {
            return Err(Error::Config(format!("cfl = {} exceeds 1", self.cfl)));
        }
        if self.reinit.dtau_factor > 0.5 {
            return Err(Error::Config("reinit.dtau_factor must not exceed 0.5".into()));
        }
        if let Some(t) = self.snapshot_times.iter().find(|&&t| t < 0.0 || t > self.end_time) {
            return Err(Error::Config(format!("snapshot time {t} lies outside [0, {}]", self.end_time)));
        }
        Ok(())
    }

    pub fn settings(&self) -> SimulationSettings {
        SimulationSettings {
            scheme: self.scheme,
            rk: self.rk,
            cfl: self.cfl,
            operator: self.operator,
            reinit_every: self.reinit_every,
            reinit: self.reinit,
            band: self.band,
            dt_max: self.dt_max,
        }
    }
}

fn parse_positive(v: &str) -> Option<f64> {
    v.parse::<f64>().ok().filter(|x| x.is_finite() && *x > 0.0)
}

/// `key = value` lines; `#` starts a comment.
pub fn parse_pairs(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", no + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_overrides_defaults() {
        let cfg = RunConfig::from_text("# vortex\nscenario = single_vortex\nn = 64\nscheme = sl\nband = off\n").unwrap();
        assert_eq!(cfg.scenario, ScenarioKind::SingleVortex);
        assert_eq!(cfg.n, 64);
        assert_eq!(cfg.scheme, SchemeKind::SemiLagrangian);
        assert_eq!(cfg.band, None);
        assert_eq!(cfg.rk, RkOrder::Ssp2);
    }

    #[test]
    fn unknown_key_rejected() {
        let err = RunConfig::from_text("scenario = rotation\nfoo = 1\n").unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("foo"));
    }

    #[test]
    fn bad_values_rejected() {
        let mut cfg = RunConfig::for_scenario("rotation").unwrap();
        assert!(cfg.set("scheme", "eno").is_err());
        assert!(cfg.set("cfl", "-1").is_err());
        assert!(cfg.set("reinit.method", "explicit").is_err());
        assert!(cfg.set("scenario", "mullins").is_err());
        cfg.set("snapshot_times", "0.1, 9").unwrap();
        assert!(cfg.validate().is_err());
        assert!(parse_pairs("no equals sign").is_err());
    }

    #[test]
    fn presets_validate() {
        for k in ScenarioKind::ALL.into_iter().filter(|&k| k != ScenarioKind::Foam) {
            let cfg = RunConfig::for_scenario(k.name()).unwrap();
            cfg.validate().unwrap();
            assert!(!cfg.snapshot_times.is_empty());
            assert!(cfg.snapshot_times.len() <= 8);
        }
    }
}
