use std::fmt::Write as _;

use ltgmm_core::{AnyClassifier, Classifier, Dataset64, Label, LdaClassifier, MdaClassifier};

use super::{learner_spec, params_for, substream};
use crate::config::{ExperimentConfig, LearnerKind};
use crate::error::{HarnessError, Result};

const NAME: &str = "boundary";

#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryGrid {
    pub classifier: LearnerKind,
    pub resolution: usize,
    /// `(x0, x1, decision)` with `x0` varying fastest.
    pub rows: Vec<(f64, f64, Label)>,
    pub train: Dataset64,
}

impl BoundaryGrid {
    pub fn to_csv_string(&self) -> String {
        let mut s = String::from("x0,x1,decision\n");
        for (a, b, y) in &self.rows {
            let _ = writeln!(s, "{a},{b},{y}");
        }
        s
    }
}

/// Decisions of a classifier fitted to a 2-D sample, on a square lattice
/// spanning the sample's bounding box widened by `2 sigma`.
pub fn run_boundary_grid(cfg: &ExperimentConfig) -> Result<BoundaryGrid> {
    cfg.validate()?;
    if cfg.d != 2 {
        return Err(HarnessError::Config(format!("boundary grids need d = 2, got d = {}", cfg.d)));
    }
    let s = substream(cfg, NAME, 0, 0);
    let params = params_for(cfg, 2, cfg.mu_norm, cfg.p, &s)?;
    let train = ltgmm_core::sample_dataset(&params, cfg.n_train, &mut s.split(0));
    let h: Box<dyn Classifier<f64>> = match cfg.boundary_classifier {
        LearnerKind::OracleLda => Box::new(LdaClassifier::oracle(&params)?),
        LearnerKind::OracleMda => Box::new(MdaClassifier::oracle(&params)),
        kind => {
            let fitted: AnyClassifier<f64> = learner_spec(cfg, kind)?.fit(&train, &s.split(3))?;
            Box::new(fitted)
        }
    };
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for pt in train.points() {
        for j in 0..2 {
            lo[j] = lo[j].min(pt.x[j]);
            hi[j] = hi[j].max(pt.x[j]);
        }
    }
    if train.is_empty() {
        lo = [-1.0; 2];
        hi = [1.0; 2];
    }
    let m = cfg.lattice_resolution;
    let axis = |j: usize, i: usize| {
        let (a, b) = (lo[j] - 2.0 * cfg.sigma, hi[j] + 2.0 * cfg.sigma);
        a + (b - a) * i as f64 / (m - 1) as f64
    };
    let mut rows = Vec::with_capacity(m * m);
    for i1 in 0..m {
        for i0 in 0..m {
            let x = [axis(0, i0), axis(1, i1)];
            rows.push((x[0], x[1], h.classify(&x)?));
        }
    }
    Ok(BoundaryGrid {
        classifier: cfg.boundary_classifier,
        resolution: m,
        rows,
        train,
    })
}
