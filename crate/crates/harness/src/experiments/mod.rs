//! Seeded Monte Carlo runs. Every replicate of every grid cell draws from
//! its own substream `(experiment, cell, replicate)`, so results do not
//! depend on scheduling or worker count.

mod boundary;
mod overparam;
mod sweeps;
mod tail;

pub use boundary::{run_boundary_grid, BoundaryGrid};
pub use overparam::{run_overparam_grid, OverparamCell, OverparamResult};
pub use sweeps::{run_scaling_n, run_shifted, run_sweep_mu, run_sweep_p, scaling_statistic};
pub use tail::{run_memscore, run_tail_shortening, MemscoreResult, TailReplicate, TailResult};

use ltgmm_core::{
    empirical_error, fit_lda, fit_mda, make_params, sample_dataset, Dataset64, Direction,
    LearnerSpec64, ModelParams64, RngStream,
};
use rayon::prelude::*;

use crate::config::{ExperimentConfig, LearnerKind};
use crate::error::{HarnessError, Result};

/// FNV-1a hash of an experiment name.
pub fn experiment_key(name: &str) -> u64 {
    name.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

pub(crate) fn substream(cfg: &ExperimentConfig, name: &str, cell: usize, rep: usize) -> RngStream {
    RngStream::new(cfg.master_seed).split_path(&[experiment_key(name), cell as u64, rep as u64])
}

/// Model parameters for one replicate; a random direction draws from
/// `stream.split(2)`.
pub(crate) fn params_for(
    cfg: &ExperimentConfig,
    d: usize,
    mu_norm: f64,
    p: f64,
    stream: &RngStream,
) -> Result<ModelParams64> {
    let mut dir = stream.split(2);
    let s = match cfg.direction {
        Direction::Fixed => None,
        Direction::Random => Some(&mut dir),
    };
    Ok(make_params(d, mu_norm, cfg.sigma, p, cfg.direction, s)?)
}

/// Training sample from `split(0)`, test sample from `split(1)`.
pub(crate) fn draw_pair(
    train_params: &ModelParams64,
    test_params: &ModelParams64,
    n_train: usize,
    n_test: usize,
    stream: &RngStream,
) -> (Dataset64, Dataset64) {
    let train = sample_dataset(train_params, n_train, &mut stream.split(0));
    let test = sample_dataset(test_params, n_test, &mut stream.split(1));
    (train, test)
}

/// Test errors of the moment-fitted LDA and MDA classifiers.
pub(crate) fn lda_mda_errors(
    cfg: &ExperimentConfig,
    train: &Dataset64,
    test: &Dataset64,
    p_train: f64,
) -> Result<(f64, f64)> {
    let lda = fit_lda(train, p_train, cfg.mu_estimator)?;
    let mda = fit_mda(train, cfg.sigma, p_train, cfg.mu_estimator)?;
    Ok((
        empirical_error(&lda, test)?.error(),
        empirical_error(&mda, test)?.error(),
    ))
}

pub(crate) fn learner_spec(cfg: &ExperimentConfig, kind: LearnerKind) -> Result<LearnerSpec64> {
    Ok(match kind {
        LearnerKind::FittedLda => LearnerSpec64::FittedLda { p: cfg.p, estimator: cfg.mu_estimator },
        LearnerKind::FittedMda => LearnerSpec64::FittedMda {
            sigma: cfg.sigma,
            p: cfg.p,
            estimator: cfg.mu_estimator,
        },
        LearnerKind::GenericMda => LearnerSpec64::GenericMda {
            k_plus: cfg.k_plus,
            k_minus: cfg.k_minus,
            em: cfg.em.clone(),
        },
        LearnerKind::OracleLda | LearnerKind::OracleMda => {
            return Err(HarnessError::Config(format!(
                "{} does not learn from data and cannot be used here",
                kind.name()
            )))
        }
    })
}

/// Evaluate `f(cell, rep)` for every cell and replicate, in parallel, and
/// return results grouped by cell in key order. The first error in key
/// order wins.
pub(crate) fn par_grid<R, F>(cfg: &ExperimentConfig, cells: usize, reps: usize, f: F) -> Result<Vec<Vec<R>>>
where
    R: Send,
    F: Fn(usize, usize) -> Result<R> + Sync,
{
    let run = || -> Vec<Result<R>> {
        (0..cells * reps)
            .into_par_iter()
            .map(|j| f(j / reps, j % reps))
            .collect()
    };
    let flat = if cfg.workers == 0 {
        run()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build()
            .map_err(|e| HarnessError::Config(format!("cannot start {} workers: {e}", cfg.workers)))?
            .install(run)
    };
    let mut out: Vec<Vec<R>> = (0..cells).map(|_| Vec::with_capacity(reps)).collect();
    for (j, r) in flat.into_iter().enumerate() {
        out[j / reps].push(r?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_are_stable_and_distinct() {
        assert_eq!(experiment_key(""), 0xcbf2_9ce4_8422_2325);
        assert_eq!(experiment_key("a"), 0xaf63_dc4c_8601_ec8c);
        assert_ne!(experiment_key("sweep-mu"), experiment_key("sweep-p"));
    }

    #[test]
    fn par_grid_orders_by_key_and_reports_first_error() {
        let cfg = ExperimentConfig { workers: 3, ..ExperimentConfig::default() };
        let out = par_grid(&cfg, 4, 3, |c, r| Ok(c * 10 + r)).unwrap();
        assert_eq!(out[2], vec![20, 21, 22]);
        let err = par_grid(&cfg, 4, 3, |c, r| {
            if c >= 1 && r == 1 {
                Err(HarnessError::Config(format!("{c}")))
            } else {
                Ok(())
            }
        })
        .unwrap_err();
        assert_eq!(err.to_string(), "config error: 1");
    }
}
