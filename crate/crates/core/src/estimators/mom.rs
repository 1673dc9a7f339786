use crate::error::{Error, Result};
use crate::genmodel::{check_p, Dataset, Label};
use crate::scalar::Scalar;

/// Method-of-moments estimate of `mu` from all points regardless of label:
/// `sum(x_i) / (2 n (1 - p))`, from the mixture mean identity
/// `E[X] = 2 (1 - p) mu`.
pub fn mom_estimate_mu<T: Scalar>(dataset: &Dataset<T>, p: T) -> Result<Vec<T>> {
    check_p(p)?;
    if dataset.is_empty() {
        return Err(Error::Empty("dataset"));
    }
    let denom = T::lit(2.0) * T::from_usize_lossy(dataset.len()) * (T::one() - p);
    let mut sum = vec![T::zero(); dataset.d()];
    for pt in dataset.points() {
        for (s, &v) in sum.iter_mut().zip(&pt.x) {
            *s = *s + v;
        }
    }
    Ok(sum.into_iter().map(|s| s / denom).collect())
}

/// First moment of the positive class, `E[X | Y = +1] = mu`.
pub fn positive_class_mean<T: Scalar>(dataset: &Dataset<T>) -> Result<Vec<T>> {
    let pos = dataset.class_points(Label::Pos);
    if pos.is_empty() {
        return Err(Error::Empty("positive class"));
    }
    let n = T::from_usize_lossy(pos.len());
    let mut sum = vec![T::zero(); dataset.d()];
    for x in pos {
        for (s, &v) in sum.iter_mut().zip(x) {
            *s = *s + v;
        }
    }
    Ok(sum.into_iter().map(|s| s / n).collect())
}

/// How the moment-based classifiers estimate `mu` from a labeled sample.
///
/// `Pooled` is [`mom_estimate_mu`]. Its variance grows like `1 / (1 - p)^2`,
/// which makes it unusable close to `p = 1` at moderate `n`; `PositiveClass`
/// has variance `sigma^2 d / n_+` independent of `p`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MuEstimator {
    Pooled,
    #[default]
    PositiveClass,
}

impl MuEstimator {
    pub fn estimate<T: Scalar>(self, dataset: &Dataset<T>, p: T) -> Result<Vec<T>> {
        match self {
            MuEstimator::Pooled => mom_estimate_mu(dataset, p),
            MuEstimator::PositiveClass => {
                check_p(p)?;
                positive_class_mean(dataset)
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MuEstimator::Pooled => "pooled",
            MuEstimator::PositiveClass => "positive_class",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "pooled" => Some(MuEstimator::Pooled),
            "positive_class" => Some(MuEstimator::PositiveClass),
            _ => None,
        }
    }
}
