use super::Classifier;
use crate::error::{check_dim, invalid, Error, Result};
use crate::estimators::{em_fit_gmm, EmConfig, GmmModel};
use crate::genmodel::{Dataset, Label};
use crate::numerics::RngStream;
use crate::scalar::Scalar;

/// Per-class mixture densities compared pointwise.
#[derive(Clone, Debug, PartialEq)]
pub struct GenericMdaClassifier<T> {
    f_plus: GmmModel<T>,
    f_minus: GmmModel<T>,
    prior_plus: T,
}

impl<T: Scalar> GenericMdaClassifier<T> {
    pub fn new(f_plus: GmmModel<T>, f_minus: GmmModel<T>) -> Result<Self> {
        Self::with_prior(f_plus, f_minus, T::lit(0.5))
    }

    pub fn with_prior(f_plus: GmmModel<T>, f_minus: GmmModel<T>, prior_plus: T) -> Result<Self> {
        check_dim(f_plus.d(), f_minus.d())?;
        if !(prior_plus > T::zero() && prior_plus < T::one()) {
            return invalid(format!("prior must lie in (0, 1), got {prior_plus}"));
        }
        Ok(Self {
            f_plus,
            f_minus,
            prior_plus,
        })
    }

    pub fn f_plus(&self) -> &GmmModel<T> {
        &self.f_plus
    }

    pub fn f_minus(&self) -> &GmmModel<T> {
        &self.f_minus
    }

    pub fn prior_plus(&self) -> T {
        self.prior_plus
    }

    /// `ln(pi_+ f_+(x)) - ln(pi_- f_-(x))`.
    pub fn log_odds(&self, x: &[T]) -> Result<T> {
        let prior = self.prior_plus.ln() - (T::one() - self.prior_plus).ln();
        Ok(self.f_plus.logpdf(x)? - self.f_minus.logpdf(x)? + prior)
    }
}

impl<T: Scalar> Classifier<T> for GenericMdaClassifier<T> {
    fn dim(&self) -> usize {
        self.f_plus.d()
    }

    fn classify(&self, x: &[T]) -> Result<Label> {
        Ok(if self.log_odds(x)? >= T::zero() {
            Label::Pos
        } else {
            Label::Neg
        })
    }
}

/// Fit `k_plus` spherical Gaussians to the positive class and `k_minus` to
/// the negative class by EM. The classes draw from `stream.split(0)` and
/// `stream.split(1)`.
pub fn fit_generic_mda<T: Scalar>(
    dataset: &Dataset<T>,
    k_plus: usize,
    k_minus: usize,
    config: &EmConfig,
    stream: &RngStream,
) -> Result<GenericMdaClassifier<T>> {
    let mut models = Vec::with_capacity(2);
    for (i, (y, k)) in [(Label::Pos, k_plus), (Label::Neg, k_minus)].into_iter().enumerate() {
        let pts = dataset.class_points(y);
        if pts.is_empty() {
            return Err(Error::InvalidParameter(format!("class {y} absent from training set")));
        }
        if pts.len() < k {
            return invalid(format!(
                "class {y} has {} points, fewer than its {k} components",
                pts.len()
            ));
        }
        models.push(em_fit_gmm(&pts, k, config, &stream.split(i as u64))?.model);
    }
    let f_minus = models.pop().expect("two models");
    let f_plus = models.pop().expect("two models");
    GenericMdaClassifier::new(f_plus, f_minus)
}
