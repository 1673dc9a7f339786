//! Flat `key = value` experiment configuration.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use ltgmm_core::{Direction, EmConfig, EmInit, MuEstimator};

use crate::error::{HarnessError, Result};

/// Learner used to score memorization or to draw a decision boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LearnerKind {
    OracleLda,
    OracleMda,
    FittedLda,
    FittedMda,
    GenericMda,
}

impl LearnerKind {
    pub fn name(self) -> &'static str {
        match self {
            LearnerKind::OracleLda => "oracle_lda",
            LearnerKind::OracleMda => "oracle_mda",
            LearnerKind::FittedLda => "fitted_lda",
            LearnerKind::FittedMda => "fitted_mda",
            LearnerKind::GenericMda => "generic_mda",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            LearnerKind::OracleLda,
            LearnerKind::OracleMda,
            LearnerKind::FittedLda,
            LearnerKind::FittedMda,
            LearnerKind::GenericMda,
        ]
        .into_iter()
        .find(|k| k.name() == s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub d: usize,
    pub mu_norm: f64,
    pub sigma: f64,
    pub p: f64,
    pub n_train: usize,
    pub n_test: usize,
    pub replicates: usize,
    pub master_seed: u64,
    pub direction: Direction,
    /// Tail parameter for `bounds`.
    pub t: f64,
    pub k_plus: usize,
    pub k_minus: usize,
    pub em: EmConfig,
    pub grid_start: Option<f64>,
    pub grid_stop: Option<f64>,
    pub grid_step: Option<f64>,
    /// Explicit grid; takes precedence over start/stop/step.
    pub grid_values: Option<Vec<f64>>,
    /// Percentages of top-scored training points to remove.
    pub removal_fractions: Vec<f64>,
    pub out_dir: PathBuf,
    pub mu_estimator: MuEstimator,
    pub lattice_resolution: usize,
    pub boundary_classifier: LearnerKind,
    pub scorer: LearnerKind,
    pub memscore_restarts: usize,
    /// Worker threads; 0 uses every available core.
    pub workers: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            d: 50,
            mu_norm: 2.0,
            sigma: 1.0,
            p: 0.9,
            n_train: 7000,
            n_test: 3000,
            replicates: 10,
            master_seed: 20_240_601,
            direction: Direction::Fixed,
            t: 10.0,
            k_plus: 1,
            k_minus: 2,
            em: EmConfig::default(),
            grid_start: None,
            grid_stop: None,
            grid_step: None,
            grid_values: None,
            removal_fractions: vec![0.0, 5.0, 10.0, 20.0],
            out_dir: PathBuf::from("results"),
            mu_estimator: MuEstimator::default(),
            lattice_resolution: 100,
            boundary_classifier: LearnerKind::GenericMda,
            scorer: LearnerKind::FittedMda,
            memscore_restarts: 5,
            workers: 0,
        }
    }
}

pub const KEYS: &[&str] = &[
    "d",
    "mu_norm",
    "sigma",
    "p",
    "n_train",
    "n_test",
    "replicates",
    "master_seed",
    "direction",
    "t",
    "k_plus",
    "k_minus",
    "em_max_iter",
    "em_tol",
    "em_restarts",
    "em_variance_floor",
    "em_init",
    "grid_start",
    "grid_stop",
    "grid_step",
    "grid_values",
    "removal_fractions",
    "out_dir",
    "mu_estimator",
    "lattice_resolution",
    "boundary_classifier",
    "scorer",
    "memscore_restarts",
    "workers",
];

fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| HarnessError::Config(format!("{key}: cannot parse {value:?}")))
}

fn list(key: &str, value: &str) -> Result<Vec<f64>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| num(key, s))
        .collect()
}

fn opt(key: &str, value: &str) -> Result<Option<f64>> {
    if value.is_empty() || value == "none" {
        Ok(None)
    } else {
        num(key, value).map(Some)
    }
}

fn fmt_list(v: &[f64]) -> String {
    v.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
}

impl ExperimentConfig {
    /// Assign one key. Unknown keys are errors.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key {
            "d" => self.d = num(key, value)?,
            "mu_norm" => self.mu_norm = num(key, value)?,
            "sigma" => self.sigma = num(key, value)?,
            "p" => self.p = num(key, value)?,
            "n_train" => self.n_train = num(key, value)?,
            "n_test" => self.n_test = num(key, value)?,
            "replicates" => self.replicates = num(key, value)?,
            "master_seed" => self.master_seed = num(key, value)?,
            "direction" => {
                self.direction = match value {
                    "fixed" => Direction::Fixed,
                    "random" => Direction::Random,
                    _ => return Err(HarnessError::Config(format!("direction: expected fixed|random, got {value:?}"))),
                }
            }
            "t" => self.t = num(key, value)?,
            "k_plus" => self.k_plus = num(key, value)?,
            "k_minus" => self.k_minus = num(key, value)?,
            "em_max_iter" => self.em.max_iter = num(key, value)?,
            "em_tol" => self.em.tol = num(key, value)?,
            "em_restarts" => self.em.restarts = num(key, value)?,
            "em_variance_floor" => self.em.variance_floor = num(key, value)?,
            "em_init" => {
                self.em.init = match value {
                    "kmeans++" => EmInit::KMeansPlusPlus,
                    "random" => EmInit::RandomPoints,
                    _ => return Err(HarnessError::Config(format!("em_init: expected kmeans++|random, got {value:?}"))),
                }
            }
            "grid_start" => self.grid_start = opt(key, value)?,
            "grid_stop" => self.grid_stop = opt(key, value)?,
            "grid_step" => self.grid_step = opt(key, value)?,
            "grid_values" => {
                let v = list(key, value)?;
                self.grid_values = if v.is_empty() { None } else { Some(v) };
            }
            "removal_fractions" => self.removal_fractions = list(key, value)?,
            "out_dir" => self.out_dir = PathBuf::from(value),
            "mu_estimator" => {
                self.mu_estimator = MuEstimator::parse(value).ok_or_else(|| {
                    HarnessError::Config(format!("mu_estimator: expected pooled|positive_class, got {value:?}"))
                })?
            }
            "lattice_resolution" => self.lattice_resolution = num(key, value)?,
            "boundary_classifier" | "scorer" => {
                let kind = LearnerKind::parse(value)
                    .ok_or_else(|| HarnessError::Config(format!("{key}: unknown learner {value:?}")))?;
                if key == "scorer" {
                    self.scorer = kind;
                } else {
                    self.boundary_classifier = kind;
                }
            }
            "memscore_restarts" => self.memscore_restarts = num(key, value)?,
            "workers" => self.workers = num(key, value)?,
            _ => return Err(HarnessError::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Apply a `key=value` override.
    pub fn set_pair(&mut self, pair: &str) -> Result<()> {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| HarnessError::Config(format!("expected key=value, got {pair:?}")))?;
        self.set(k.trim(), v)
    }

    /// Apply every assignment in a config file's text on top of `self`.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        let mut seen = std::collections::HashSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| HarnessError::Config(format!("line {}: expected key = value", i + 1)))?;
            let k = k.trim();
            if !seen.insert(k.to_string()) {
                return Err(HarnessError::Config(format!("line {}: duplicate key {k:?}", i + 1)));
            }
            self.set(k, v)
                .map_err(|e| HarnessError::Config(format!("line {}: {}", i + 1, e.message())))?;
        }
        Ok(())
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut c = Self::default();
        c.apply_text(text)?;
        Ok(c)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_text(&text)
    }

    /// Serialize every key; `from_text(to_text())` reproduces `self`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        kv("d", self.d.to_string());
        kv("mu_norm", self.mu_norm.to_string());
        kv("sigma", self.sigma.to_string());
        kv("p", self.p.to_string());
        kv("n_train", self.n_train.to_string());
        kv("n_test", self.n_test.to_string());
        kv("replicates", self.replicates.to_string());
        kv("master_seed", self.master_seed.to_string());
        kv(
            "direction",
            match self.direction {
                Direction::Fixed => "fixed",
                Direction::Random => "random",
            }
            .into(),
        );
        kv("t", self.t.to_string());
        kv("k_plus", self.k_plus.to_string());
        kv("k_minus", self.k_minus.to_string());
        kv("em_max_iter", self.em.max_iter.to_string());
        kv("em_tol", self.em.tol.to_string());
        kv("em_restarts", self.em.restarts.to_string());
        kv("em_variance_floor", self.em.variance_floor.to_string());
        kv(
            "em_init",
            match self.em.init {
                EmInit::KMeansPlusPlus => "kmeans++",
                EmInit::RandomPoints => "random",
            }
            .into(),
        );
        let o = |v: Option<f64>| v.map_or_else(|| "none".to_string(), |x| x.to_string());
        kv("grid_start", o(self.grid_start));
        kv("grid_stop", o(self.grid_stop));
        kv("grid_step", o(self.grid_step));
        kv("grid_values", self.grid_values.as_deref().map(fmt_list).unwrap_or_default());
        kv("removal_fractions", fmt_list(&self.removal_fractions));
        kv("out_dir", self.out_dir.display().to_string());
        kv("mu_estimator", self.mu_estimator.name().into());
        kv("lattice_resolution", self.lattice_resolution.to_string());
        kv("boundary_classifier", self.boundary_classifier.name().into());
        kv("scorer", self.scorer.name().into());
        kv("memscore_restarts", self.memscore_restarts.to_string());
        kv("workers", self.workers.to_string());
        s
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(HarnessError::Config(m));
        if self.d == 0 {
            return bad("d must be >= 1".into());
        }
        if !(self.mu_norm > 0.0 && self.mu_norm.is_finite()) {
            return bad(format!("mu_norm must be positive, got {}", self.mu_norm));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return bad(format!("sigma must be positive, got {}", self.sigma));
        }
        if !(self.p > 0.5 && self.p < 1.0) {
            return bad(format!("p must lie in (1/2, 1), got {}", self.p));
        }
        if self.n_train == 0 || self.n_test == 0 {
            return bad("n_train and n_test must be >= 1".into());
        }
        if self.replicates < 2 {
            return bad(format!("replicates must be >= 2, got {}", self.replicates));
        }
        if !(self.t > 2.0) {
            return bad(format!("t must exceed 2, got {}", self.t));
        }
        if self.k_plus == 0 || self.k_minus == 0 {
            return bad("k_plus and k_minus must be >= 1".into());
        }
        self.em.validate().map_err(|e| HarnessError::Config(e.to_string()))?;
        if self.grid_values.is_none() {
            if let (Some(a), Some(b)) = (self.grid_start, self.grid_stop) {
                if !(a < b) {
                    return bad(format!("grid_start {a} must be below grid_stop {b}"));
                }
            }
            if let Some(s) = self.grid_step {
                if !(s > 0.0) {
                    return bad(format!("grid_step must be positive, got {s}"));
                }
            }
        }
        if let Some(v) = &self.grid_values {
            if v.iter().any(|x| !x.is_finite()) {
                return bad("grid_values must be finite".into());
            }
        }
        if let Some(m) = self.removal_fractions.iter().find(|m| !(0.0..=90.0).contains(*m)) {
            return bad(format!("removal percentages must lie in [0, 90], got {m}"));
        }
        if self.lattice_resolution < 2 {
            return bad("lattice_resolution must be >= 2".into());
        }
        if self.memscore_restarts == 0 {
            return bad("memscore_restarts must be >= 1".into());
        }
        Ok(())
    }

    /// Sweep grid: explicit values, else `start..=stop` by `step` with
    /// `default` filling any unset bound.
    pub fn grid(&self, default: (f64, f64, f64)) -> Result<Vec<f64>> {
        if let Some(v) = &self.grid_values {
            return Ok(v.clone());
        }
        let start = self.grid_start.unwrap_or(default.0);
        let stop = self.grid_stop.unwrap_or(default.1);
        let step = self.grid_step.unwrap_or(default.2);
        if !(start < stop && step > 0.0) {
            return Err(HarnessError::Config(format!(
                "invalid grid start={start} stop={stop} step={step}"
            )));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize;
        Ok((0..=count).map(|i| start + i as f64 * step).collect())
    }
}
