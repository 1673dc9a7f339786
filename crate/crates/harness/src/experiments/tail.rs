use std::fmt::Write as _;

use ltgmm_core::{memorization_scores, Component, Dataset64, Label};

use super::{draw_pair, lda_mda_errors, learner_spec, par_grid, params_for, substream};
use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::sweep::{SweepResult, SweepRow};

const NAME: &str = "tail-shorten";

/// One replicate at one removal percentage.
#[derive(Clone, Debug, PartialEq)]
pub struct TailReplicate {
    pub removal_pct: f64,
    pub replicate: usize,
    pub lda_error: f64,
    pub mda_error: f64,
    pub removed: usize,
    /// Removed points from the minority negative subpopulation.
    pub removed_minority: usize,
    pub minority_base_rate: f64,
    pub nonzero_scores: usize,
}

impl TailReplicate {
    pub fn removed_minority_fraction(&self) -> Option<f64> {
        (self.removed > 0).then(|| self.removed_minority as f64 / self.removed as f64)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TailResult {
    pub sweep: SweepResult,
    pub replicates: Vec<TailReplicate>,
}

impl TailResult {
    pub fn at(&self, removal_pct: f64) -> Vec<&TailReplicate> {
        self.replicates.iter().filter(|r| r.removal_pct == removal_pct).collect()
    }
}

/// Indices ordered by score descending, then index ascending.
pub(crate) fn removal_order(scores: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    idx
}

fn is_minority(ds: &Dataset64, i: usize) -> bool {
    ds.points()[i].k == Component::Minority
}

/// Score every training point, drop the top `m%` for each configured `m`,
/// retrain LDA and MDA on the rest, and evaluate on an untouched test set.
pub fn run_tail_shortening(cfg: &ExperimentConfig) -> Result<TailResult> {
    cfg.validate()?;
    let scorer = learner_spec(cfg, cfg.scorer)?;
    let fracs = cfg.removal_fractions.clone();
    let per_rep = par_grid(cfg, 1, cfg.replicates, |_, r| {
        let s = substream(cfg, NAME, 0, r);
        let params = params_for(cfg, cfg.d, cfg.mu_norm, cfg.p, &s)?;
        let (train, test) = draw_pair(&params, &params, cfg.n_train, cfg.n_test, &s);
        let scores = memorization_scores(&scorer, &train, cfg.memscore_restarts, &s.split(3))?;
        let order = removal_order(&scores);
        let n = train.len();
        let base = (0..n).filter(|&i| is_minority(&train, i)).count() as f64 / n as f64;
        let nonzero = scores.iter().filter(|v| **v != 0.0).count();
        fracs
            .iter()
            .map(|&m| {
                let count = (m / 100.0 * n as f64).floor() as usize;
                let mut drop = vec![false; n];
                for &i in &order[..count] {
                    drop[i] = true;
                }
                let kept = train.filtered(|i| !drop[i]);
                let (lda_error, mda_error) = lda_mda_errors(cfg, &kept, &test, cfg.p)?;
                Ok(TailReplicate {
                    removal_pct: m,
                    replicate: r,
                    lda_error,
                    mda_error,
                    removed: count,
                    removed_minority: order[..count].iter().filter(|&&i| is_minority(&train, i)).count(),
                    minority_base_rate: base,
                    nonzero_scores: nonzero,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let reps: Vec<TailReplicate> = per_rep.into_iter().flatten().flatten().collect();
    let mut sweep = SweepResult::default();
    for &m in &fracs {
        let at: Vec<&TailReplicate> = reps.iter().filter(|r| r.removal_pct == m).collect();
        let lda: Vec<f64> = at.iter().map(|r| r.lda_error).collect();
        let mda: Vec<f64> = at.iter().map(|r| r.mda_error).collect();
        sweep.rows.push(SweepRow::from_samples("removal_pct", m, "fitted_lda", &lda, None, cfg.master_seed, true)?);
        sweep.rows.push(SweepRow::from_samples("removal_pct", m, "fitted_mda", &mda, None, cfg.master_seed, true)?);
    }
    Ok(TailResult { sweep, replicates: reps })
}

#[derive(Clone, Debug, PartialEq)]
pub struct MemscoreResult {
    pub train: Dataset64,
    pub scores: Vec<f64>,
}

impl MemscoreResult {
    /// `index,y,k,score` table.
    pub fn to_csv_string(&self) -> String {
        let mut s = String::from("index,y,k,score\n");
        for (i, (pt, sc)) in self.train.points().iter().zip(&self.scores).enumerate() {
            let _ = writeln!(s, "{i},{},{},{sc}", pt.y, pt.k.index());
        }
        s
    }

    pub fn mean_score(&self, y: Label, k: Component) -> Option<f64> {
        let v: Vec<f64> = self
            .train
            .points()
            .iter()
            .zip(&self.scores)
            .filter(|(pt, _)| pt.y == y && pt.k == k)
            .map(|(_, s)| *s)
            .collect();
        (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
    }
}

/// Memorization scores of one training sample under the configured scorer.
pub fn run_memscore(cfg: &ExperimentConfig) -> Result<MemscoreResult> {
    cfg.validate()?;
    let scorer = learner_spec(cfg, cfg.scorer)?;
    let s = substream(cfg, "memscore", 0, 0);
    let params = params_for(cfg, cfg.d, cfg.mu_norm, cfg.p, &s)?;
    let train = ltgmm_core::sample_dataset(&params, cfg.n_train, &mut s.split(0));
    let scores = memorization_scores(&scorer, &train, cfg.memscore_restarts, &s.split(3))?;
    Ok(MemscoreResult { train, scores })
}
