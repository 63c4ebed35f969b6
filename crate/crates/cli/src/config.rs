//! Flat key=value scenario configuration, sectioned by dotted prefixes.
//!
//! Unknown keys are rejected; every value is validated with an explicit
//! message. Lines starting with `#` (and trailing `#` comments) are ignored.

use std::collections::BTreeMap;
use std::path::PathBuf;

use nsp2d_core::init::InitProfile;
use nsp2d_core::solver::SimulationParams;
use nsp2d_core::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmplitudeTarget {
    YNorm,
    H3Norm,
}

#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub grid_n: usize,
    pub grid_length: f64,
    pub grid_dealias: f64,
    pub epsilon: f64,
    pub kappa0: f64,
    pub dt: f64,
    pub t_end: f64,
    pub theta: f64,
    pub delta: f64,
    pub sigma: f64,
    pub profile: InitProfile,
    pub target: AmplitudeTarget,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub sample_every: f64,
    pub snapshot_every: f64,
    pub sweep_epsilons: Vec<f64>,
    pub sweep_theta: f64,
    pub sweep_cap_factor: f64,
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Config(format!(
                    "line {}: expected 'key = value', got '{raw}'",
                    lineno + 1
                )));
            };
            let key = key.trim().to_string();
            if map.insert(key.clone(), value.trim().to_string()).is_some() {
                return Err(Error::Config(format!("duplicate key '{key}'")));
            }
        }
        Self::from_map(map)
    }

    fn from_map(mut map: BTreeMap<String, String>) -> Result<Self> {
        fn take(map: &mut BTreeMap<String, String>, key: &str) -> Option<String> {
            map.remove(key)
        }
        fn parse_f64(key: &str, v: &str) -> Result<f64> {
            v.parse::<f64>()
                .map_err(|_| Error::Config(format!("{key}: expected a number, got '{v}'")))
        }
        fn parse_usize(key: &str, v: &str) -> Result<usize> {
            v.parse::<usize>()
                .map_err(|_| Error::Config(format!("{key}: expected an integer, got '{v}'")))
        }

        let grid_n = match take(&mut map, "grid.n") {
            Some(v) => parse_usize("grid.n", &v)?,
            None => return Err(Error::Config("missing required key grid.n".into())),
        };
        if grid_n == 0 || grid_n % 2 != 0 {
            return Err(Error::Config(format!(
                "grid.n: must be a positive even integer, got {grid_n}"
            )));
        }
        let grid_length = match take(&mut map, "grid.length") {
            Some(v) => parse_f64("grid.length", &v)?,
            None => 64.0 * std::f64::consts::PI,
        };
        if !(grid_length > 0.0) {
            return Err(Error::Config(format!(
                "grid.length: must be positive, got {grid_length}"
            )));
        }
        let grid_dealias = match take(&mut map, "grid.dealias") {
            Some(v) => parse_f64("grid.dealias", &v)?,
            None => 2.0 / 3.0,
        };
        if !(grid_dealias > 0.0 && grid_dealias <= 1.0) {
            return Err(Error::Config(format!(
                "grid.dealias: must lie in (0, 1], got {grid_dealias}"
            )));
        }
        let epsilon = match take(&mut map, "params.epsilon") {
            Some(v) => parse_f64("params.epsilon", &v)?,
            None => return Err(Error::Config("missing required key params.epsilon".into())),
        };
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(Error::Config(format!(
                "params.epsilon: must lie in (0, 1], got {epsilon}"
            )));
        }
        let kappa0 = match take(&mut map, "params.kappa0") {
            Some(v) => parse_f64("params.kappa0", &v)?,
            None => 1.0 / 200.0,
        };
        if !(kappa0 > 0.0) {
            return Err(Error::Config(format!("params.kappa0: must be positive, got {kappa0}")));
        }
        let dt = match take(&mut map, "params.dt") {
            Some(v) => parse_f64("params.dt", &v)?,
            None => 0.05,
        };
        if !(dt > 0.0) {
            return Err(Error::Config(format!("params.dt: must be positive, got {dt}")));
        }
        let t_end = match take(&mut map, "params.t_end") {
            Some(v) => parse_f64("params.t_end", &v)?,
            None => 1.0,
        };
        if t_end < 0.0 {
            return Err(Error::Config(format!("params.t_end: must be nonnegative, got {t_end}")));
        }
        let theta = match take(&mut map, "params.theta") {
            Some(v) => parse_f64("params.theta", &v)?,
            None => 0.1,
        };
        if theta < 0.0 {
            return Err(Error::Config(format!("params.theta: must be nonnegative, got {theta}")));
        }
        let delta = match take(&mut map, "params.delta") {
            Some(v) => parse_f64("params.delta", &v)?,
            None => 1e-3,
        };
        let sigma = match take(&mut map, "params.sigma") {
            Some(v) => parse_f64("params.sigma", &v)?,
            None => 0.0,
        };
        let profile = match take(&mut map, "init.profile") {
            Some(v) => InitProfile::parse(&v)?,
            None => InitProfile::GaussianIrrotational,
        };
        let target = match take(&mut map, "init.target") {
            Some(v) => match v.as_str() {
                "y_norm" => AmplitudeTarget::YNorm,
                "h3_norm" => AmplitudeTarget::H3Norm,
                other => {
                    return Err(Error::Config(format!(
                        "init.target: expected y_norm or h3_norm, got '{other}'"
                    )))
                }
            },
            None => match profile {
                InitProfile::GaussianVortex => AmplitudeTarget::H3Norm,
                _ => AmplitudeTarget::YNorm,
            },
        };
        match (profile, target) {
            (InitProfile::GaussianIrrotational, AmplitudeTarget::H3Norm) => {
                return Err(Error::Config(
                    "init.target h3_norm calibrates the vortex; profile gaussian_irrotational has none".into(),
                ))
            }
            (InitProfile::GaussianVortex, AmplitudeTarget::YNorm) => {
                return Err(Error::Config(
                    "init.target y_norm calibrates the irrotational part; profile gaussian_vortex has none".into(),
                ))
            }
            _ => {}
        }
        let seed = match take(&mut map, "init.seed") {
            Some(v) => v
                .parse::<u64>()
                .map_err(|_| Error::Config(format!("init.seed: expected u64, got '{v}'")))?,
            None => 1,
        };
        let output_dir = PathBuf::from(take(&mut map, "output.dir").unwrap_or_else(|| "out".into()));
        let sample_every = match take(&mut map, "output.sample_every") {
            Some(v) => parse_f64("output.sample_every", &v)?,
            None => 0.5,
        };
        if !(sample_every > 0.0) {
            return Err(Error::Config(format!(
                "output.sample_every: must be positive, got {sample_every}"
            )));
        }
        let snapshot_every = match take(&mut map, "output.snapshot_every") {
            Some(v) => parse_f64("output.snapshot_every", &v)?,
            None => 0.0, // 0 disables periodic snapshots
        };
        let sweep_epsilons = match take(&mut map, "sweep.epsilons") {
            Some(v) => {
                let mut out = Vec::new();
                for piece in v.split(',') {
                    let e = parse_f64("sweep.epsilons", piece.trim())?;
                    if !(e > 0.0 && e <= 1.0) {
                        return Err(Error::Config(format!(
                            "sweep.epsilons: each value must lie in (0, 1], got {e}"
                        )));
                    }
                    out.push(e);
                }
                out
            }
            None => vec![0.2, 0.1, 0.05],
        };
        let sweep_theta = match take(&mut map, "sweep.theta") {
            Some(v) => parse_f64("sweep.theta", &v)?,
            None => theta,
        };
        let sweep_cap_factor = match take(&mut map, "sweep.cap_factor") {
            Some(v) => parse_f64("sweep.cap_factor", &v)?,
            None => 4.0,
        };

        if let Some(key) = map.keys().next() {
            return Err(Error::Config(format!("unknown key '{key}'")));
        }

        Ok(Self {
            grid_n,
            grid_length,
            grid_dealias,
            epsilon,
            kappa0,
            dt,
            t_end,
            theta,
            delta,
            sigma,
            profile,
            target,
            seed,
            output_dir,
            sample_every,
            snapshot_every,
            sweep_epsilons,
            sweep_theta,
            sweep_cap_factor,
        })
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::Config(format!("cannot read config {}: {e}", path.display()))
        })?;
        Self::parse(&text)
    }

    pub fn simulation_params(&self) -> Result<SimulationParams> {
        let mut p = SimulationParams::new(self.epsilon)?;
        p.kappa0 = self.kappa0;
        p.dt = self.dt;
        p.t_end = self.t_end;
        p.theta = self.theta;
        p.delta = self.delta;
        p.sigma = self.sigma;
        Ok(p)
    }
}
