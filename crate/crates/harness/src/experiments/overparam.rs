use std::fmt::Write as _;

use ltgmm_core::{empirical_error, fit_generic_mda, fit_mda, Label};

use super::{draw_pair, par_grid, params_for, substream};
use crate::config::ExperimentConfig;
use crate::error::{HarnessError, Result};
use crate::stats::confidence_interval;
use crate::sweep::{SweepResult, SweepRow};

const NAME: &str = "overparam-grid";

/// Mean and 95% interval of training and test error for one `(k+, k-)`.
#[derive(Clone, Debug, PartialEq)]
pub struct OverparamCell {
    pub k_plus: usize,
    pub k_minus: usize,
    pub train_error: (f64, f64, f64),
    pub test_error: (f64, f64, f64),
    train_samples: Vec<f64>,
    test_samples: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OverparamResult {
    pub cells: Vec<OverparamCell>,
    /// Test error of the moment-fitted MDA on the same samples.
    pub reference_test_error: (f64, f64, f64),
    pub replicates: usize,
    pub master_seed: u64,
}

impl OverparamResult {
    pub fn cell(&self, k_plus: usize, k_minus: usize) -> Option<&OverparamCell> {
        self.cells.iter().find(|c| c.k_plus == k_plus && c.k_minus == k_minus)
    }

    /// Heatmap table: `k_plus,k_minus,train_error,test_error` (means).
    pub fn to_heatmap_csv(&self) -> String {
        let mut s = String::from("k_plus,k_minus,train_error,test_error\n");
        for c in &self.cells {
            let _ = writeln!(s, "{},{},{},{}", c.k_plus, c.k_minus, c.train_error.0, c.test_error.0);
        }
        s
    }

    /// Sweep over `k_minus`, one train and one test series per `k_plus`.
    pub fn to_sweep(&self) -> Result<SweepResult> {
        let mut out = SweepResult::default();
        for c in &self.cells {
            for (tag, samples) in [("train", &c.train_samples), ("test", &c.test_samples)] {
                out.rows.push(SweepRow::from_samples(
                    "k_minus",
                    c.k_minus as f64,
                    &format!("generic_mda_kplus{}_{tag}", c.k_plus),
                    samples,
                    None,
                    self.master_seed,
                    true,
                )?);
            }
        }
        Ok(out)
    }
}

fn k_grid(cfg: &ExperimentConfig) -> Result<Vec<usize>> {
    cfg.grid((1.0, 31.0, 10.0))?
        .into_iter()
        .map(|v| {
            if v >= 1.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(HarnessError::Config(format!("component counts must be positive integers, got {v}")))
            }
        })
        .collect()
}

/// EM-fitted MDA over every `(k+, k-)` pair of the grid. All pairs of one
/// replicate share its training and test samples.
pub fn run_overparam_grid(cfg: &ExperimentConfig) -> Result<OverparamResult> {
    cfg.validate()?;
    let ks = k_grid(cfg)?;
    let pairs: Vec<(usize, usize)> = ks.iter().flat_map(|&a| ks.iter().map(move |&b| (a, b))).collect();
    let data = |r: usize| -> Result<_> {
        let s = substream(cfg, NAME, 0, r);
        let params = params_for(cfg, cfg.d, cfg.mu_norm, cfg.p, &s)?;
        Ok(draw_pair(&params, &params, cfg.n_train, cfg.n_test, &s))
    };
    let cells = par_grid(cfg, pairs.len(), cfg.replicates, |c, r| {
        let (kp, km) = pairs[c];
        let (train, test) = data(r)?;
        for (y, k) in [(Label::Pos, kp), (Label::Neg, km)] {
            let have = train.class_points(y).len();
            if k > have {
                return Err(HarnessError::Config(format!(
                    "{k} components requested for class {y}, but replicate {r} has only {have} training points in it"
                )));
            }
        }
        let h = fit_generic_mda(&train, kp, km, &cfg.em, &substream(cfg, NAME, c + 1, r))?;
        Ok((empirical_error(&h, &train)?.error(), empirical_error(&h, &test)?.error()))
    })?;
    let reference = par_grid(cfg, 1, cfg.replicates, |_, r| {
        let (train, test) = data(r)?;
        let h = fit_mda(&train, cfg.sigma, cfg.p, cfg.mu_estimator)?;
        Ok(empirical_error(&h, &test)?.error())
    })?;
    let clip = |(m, lo, hi): (f64, f64, f64)| (m, lo.max(0.0), hi.min(1.0));
    let mut out = Vec::with_capacity(pairs.len());
    for (&(kp, km), samples) in pairs.iter().zip(cells) {
        let train: Vec<f64> = samples.iter().map(|s| s.0).collect();
        let test: Vec<f64> = samples.iter().map(|s| s.1).collect();
        out.push(OverparamCell {
            k_plus: kp,
            k_minus: km,
            train_error: clip(confidence_interval(&train)?),
            test_error: clip(confidence_interval(&test)?),
            train_samples: train,
            test_samples: test,
        });
    }
    Ok(OverparamResult {
        cells: out,
        reference_test_error: clip(confidence_interval(&reference[0])?),
        replicates: cfg.replicates,
        master_seed: cfg.master_seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ExperimentConfig {
        let mut c = ExperimentConfig::default();
        for kv in ["d=10", "n_train=120", "n_test=200", "replicates=2", "grid_values=1,2,5", "em_restarts=2"] {
            c.set_pair(kv).unwrap();
        }
        c
    }

    #[test]
    fn grid_shape_and_tables() {
        let r = run_overparam_grid(&small()).unwrap();
        assert_eq!(r.cells.len(), 9);
        assert!(r.cell(5, 2).is_some());
        let csv = r.to_heatmap_csv();
        assert!(csv.starts_with("k_plus,k_minus,train_error,test_error\n"));
        assert_eq!(csv.lines().count(), 10);
        assert_eq!(r.to_sweep().unwrap().rows.len(), 18);
    }

    #[test]
    fn too_many_components_is_a_config_error() {
        let mut c = small();
        c.set_pair("grid_values=1,100").unwrap();
        let e = run_overparam_grid(&c).unwrap_err();
        assert_eq!(e.exit_code(), 2, "{e}");
        assert!(e.to_string().contains("100 components"));
    }
}
