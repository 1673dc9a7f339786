//! Label memorization: how much including a training example raises the
//! probability that the learned classifier labels that example correctly.

use super::{fit_generic_mda, fit_lda, fit_mda, Classifier, GenericMdaClassifier, LdaClassifier, MdaClassifier};
use crate::error::{invalid, Error, Result};
use crate::estimators::{EmConfig, MuEstimator};
use crate::genmodel::{check_p, check_sigma, Dataset, Label};
use crate::numerics::RngStream;
use crate::scalar::Scalar;

/// A learning algorithm: maps a training set to a classifier.
#[derive(Clone, Debug, PartialEq)]
pub enum LearnerSpec<T> {
    FittedLda { p: T, estimator: MuEstimator },
    FittedMda { sigma: T, p: T, estimator: MuEstimator },
    GenericMda { k_plus: usize, k_minus: usize, em: EmConfig },
}

#[derive(Clone, Debug, PartialEq)]
pub enum AnyClassifier<T> {
    Lda(LdaClassifier<T>),
    Mda(MdaClassifier<T>),
    Generic(GenericMdaClassifier<T>),
}

impl<T: Scalar> Classifier<T> for AnyClassifier<T> {
    fn dim(&self) -> usize {
        match self {
            AnyClassifier::Lda(c) => c.dim(),
            AnyClassifier::Mda(c) => c.dim(),
            AnyClassifier::Generic(c) => c.dim(),
        }
    }

    fn classify(&self, x: &[T]) -> Result<Label> {
        match self {
            AnyClassifier::Lda(c) => c.classify(x),
            AnyClassifier::Mda(c) => c.classify(x),
            AnyClassifier::Generic(c) => c.classify(x),
        }
    }
}

impl<T: Scalar> LearnerSpec<T> {
    pub fn validate(&self) -> Result<()> {
        match self {
            LearnerSpec::FittedLda { p, .. } => check_p(*p),
            LearnerSpec::FittedMda { sigma, p, .. } => {
                check_sigma(*sigma)?;
                check_p(*p)
            }
            LearnerSpec::GenericMda { k_plus, k_minus, em } => {
                if *k_plus == 0 || *k_minus == 0 {
                    return invalid("component counts must be >= 1");
                }
                em.validate()
            }
        }
    }

    /// Whether fitting ignores the random stream.
    pub fn is_deterministic(&self) -> bool {
        !matches!(self, LearnerSpec::GenericMda { .. })
    }

    pub fn fit(&self, dataset: &Dataset<T>, stream: &RngStream) -> Result<AnyClassifier<T>> {
        Ok(match self {
            LearnerSpec::FittedLda { p, estimator } => AnyClassifier::Lda(fit_lda(dataset, *p, *estimator)?),
            LearnerSpec::FittedMda { sigma, p, estimator } => {
                AnyClassifier::Mda(fit_mda(dataset, *sigma, *p, *estimator)?)
            }
            LearnerSpec::GenericMda { k_plus, k_minus, em } => {
                AnyClassifier::Generic(fit_generic_mda(dataset, *k_plus, *k_minus, em, stream)?)
            }
        })
    }

    fn with_mu(&self, mu_hat: Vec<T>) -> Result<AnyClassifier<T>> {
        match self {
            LearnerSpec::FittedLda { p, .. } => Ok(AnyClassifier::Lda(LdaClassifier::from_mu(mu_hat, *p)?)),
            LearnerSpec::FittedMda { sigma, p, .. } => {
                Ok(AnyClassifier::Mda(MdaClassifier::new(mu_hat, *sigma, *p)?))
            }
            LearnerSpec::GenericMda { .. } => unreachable!("moment learners only"),
        }
    }
}

fn correct<T: Scalar>(c: &AnyClassifier<T>, dataset: &Dataset<T>, index: usize) -> Result<f64> {
    let pt = &dataset.points()[index];
    Ok(if c.classify(&pt.x)? == pt.y { 1.0 } else { 0.0 })
}

/// Memorization score of training example `index` by full retraining.
///
/// For deterministic learners the two probabilities are 0/1 indicators and
/// `restarts` is ignored. For EM-based learners each probability is the
/// fraction of correct labels over `restarts` fits; fit `r` with and without
/// the example share the substream `stream.split(r)`.
pub fn memorization_score<T: Scalar>(
    learner: &LearnerSpec<T>,
    dataset: &Dataset<T>,
    index: usize,
    restarts: usize,
    stream: &RngStream,
) -> Result<f64> {
    if index >= dataset.len() {
        return invalid(format!(
            "index {index} out of range for dataset of {}",
            dataset.len()
        ));
    }
    if restarts == 0 {
        return invalid("restarts must be >= 1");
    }
    learner.validate()?;
    let without = dataset.without(index);
    let runs = if learner.is_deterministic() { 1 } else { restarts };
    let (mut with_hits, mut without_hits) = (0.0, 0.0);
    for r in 0..runs {
        let s = stream.split(r as u64);
        with_hits += correct(&learner.fit(dataset, &s)?, dataset, index)?;
        let h = learner.fit(&without, &s)?;
        let pt = &dataset.points()[index];
        if h.classify(&pt.x)? == pt.y {
            without_hits += 1.0;
        }
    }
    Ok((with_hits - without_hits) / runs as f64)
}

/// Memorization scores of every training example.
///
/// Moment-based learners are refit from leave-one-out sufficient statistics
/// in `O(n d)` total; EM-based learners fall back to [`memorization_score`]
/// per example.
pub fn memorization_scores<T: Scalar>(
    learner: &LearnerSpec<T>,
    dataset: &Dataset<T>,
    restarts: usize,
    stream: &RngStream,
) -> Result<Vec<f64>> {
    learner.validate()?;
    if dataset.is_empty() {
        return Err(Error::Empty("dataset"));
    }
    let (p, estimator) = match learner {
        LearnerSpec::FittedLda { p, estimator } | LearnerSpec::FittedMda { p, estimator, .. } => (*p, *estimator),
        LearnerSpec::GenericMda { .. } => {
            return (0..dataset.len())
                .map(|i| memorization_score(learner, dataset, i, restarts, stream))
                .collect();
        }
    };

    let full = learner.fit(dataset, stream)?;
    let d = dataset.d();
    let n = dataset.len();
    let pos = |i: usize| dataset.points()[i].y == Label::Pos;
    let (sum, count) = {
        let mut s = vec![T::zero(); d];
        let mut c = 0usize;
        for (i, pt) in dataset.points().iter().enumerate() {
            if estimator == MuEstimator::Pooled || pos(i) {
                c += 1;
                for (a, &b) in s.iter_mut().zip(&pt.x) {
                    *a = *a + b;
                }
            }
        }
        (s, c)
    };
    let denom = |m: usize| match estimator {
        MuEstimator::Pooled => T::lit(2.0) * T::from_usize_lossy(m) * (T::one() - p),
        MuEstimator::PositiveClass => T::from_usize_lossy(m),
    };

    let mut scores = Vec::with_capacity(n);
    for i in 0..n {
        let with = correct(&full, dataset, i)?;
        let touches = estimator == MuEstimator::Pooled || pos(i);
        let without_clf = if touches {
            if count <= 1 {
                return Err(Error::Empty(match estimator {
                    MuEstimator::Pooled => "dataset",
                    MuEstimator::PositiveClass => "positive class",
                }));
            }
            let x = &dataset.points()[i].x;
            let dn = denom(count - 1);
            let mu: Vec<T> = sum.iter().zip(x).map(|(&s, &v)| (s - v) / dn).collect();
            learner.with_mu(mu)?
        } else {
            if n == 1 {
                return Err(Error::Empty("dataset"));
            }
            full.clone()
        };
        scores.push(with - correct(&without_clf, dataset, i)?);
    }
    Ok(scores)
}
