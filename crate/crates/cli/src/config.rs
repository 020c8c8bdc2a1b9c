use std::path::{Path, PathBuf};

use serde::Deserialize;

use burstic::model::UserParams;
use burstic::numeric::db_to_linear;

use crate::{Failure, Format};

/// Top level of every config file; `params` depends on the subcommand.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig<P> {
    pub scenario: String,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub format: Option<Format>,
    pub params: P,
}

impl<P> RunConfig<P> {
    pub fn seed_or_default(&self) -> u64 {
        self.seed.unwrap_or(0)
    }
}

pub fn load<P: serde::de::DeserializeOwned>(path: &Path) -> Result<RunConfig<P>, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::config(format!("{}: {e}", path.display())))?;
    let cfg: RunConfig<P> =
        serde_json::from_str(&text).map_err(|e| Failure::config(format!("{}: {e}", path.display())))?;
    if cfg.scenario.trim().is_empty() {
        return Err(Failure::config("scenario name must not be empty"));
    }
    Ok(cfg)
}

/// A power written as `{"db": x}` or `{"linear": x}`.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum Power {
    Db(f64),
    Linear(f64),
}

impl Power {
    pub fn linear(self) -> f64 {
        match self {
            Power::Db(x) => db_to_linear(x),
            Power::Linear(x) => x,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UserCfg {
    pub k: u32,
    pub q: f64,
    pub power: Power,
    /// Power gain of this transmitter at the other receiver.
    pub cross_gain: f64,
}

impl UserCfg {
    pub fn build(&self) -> Result<UserParams, Failure> {
        Ok(UserParams::new(self.k, self.q, self.power.linear(), self.cross_gain)?)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuffersParams {
    pub user: UserCfg,
    pub n: Vec<u64>,
    pub count: u32,
    pub theta: f64,
    pub delta: f64,
    pub trials: u64,
}

/// Evenly spaced `d` values, both ends included.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DGrid {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl DGrid {
    pub fn points(&self) -> Result<Vec<f64>, Failure> {
        if self.steps == 0 || !(self.max > self.min) || !(self.min > 0.0) {
            return Err(Failure::config("d grid needs 0 < min < max and steps >= 1"));
        }
        Ok((0..=self.steps).map(|k| self.min + (self.max - self.min) * k as f64 / self.steps as f64).collect())
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignParams {
    pub users: [UserCfg; 2],
    /// Target rates as fractions of each user's arrival rate.
    pub rate_fraction: [f64; 2],
    pub d: DGrid,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionParams {
    pub users: [UserCfg; 2],
    pub count: [u32; 2],
    pub theta: [f64; 2],
    pub alpha: f64,
    pub m_grid: u32,
    pub resolution: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectParams {
    pub n: Vec<usize>,
    /// Preamble lengths to sweep; the default is `ceil(sqrt(n))`.
    #[serde(default)]
    pub nprime: Option<Vec<usize>>,
    pub theta: [f64; 2],
    pub mu: [f64; 2],
    pub nu: [f64; 2],
    pub count: [u32; 2],
    pub codewords: [usize; 2],
    pub gamma: [Power; 2],
    pub gain: [f64; 2],
    pub eps: f64,
    pub trials: u64,
}
