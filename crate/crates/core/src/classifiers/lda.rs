use super::Classifier;
use crate::error::{check_dim, invalid, Result};
use crate::estimators::MuEstimator;
use crate::genmodel::{Dataset, Label, ModelParams};
use crate::scalar::{dot, scaled, sq_dist, Scalar};

/// Two spherical Gaussians with a shared variance. The variance cancels from
/// the density comparison, leaving a nearest-center rule.
#[derive(Clone, Debug, PartialEq)]
pub struct LdaClassifier<T> {
    mu_plus: Vec<T>,
    mu_minus: Vec<T>,
}

impl<T: Scalar> LdaClassifier<T> {
    pub fn new(mu_plus: Vec<T>, mu_minus: Vec<T>) -> Result<Self> {
        check_dim(mu_plus.len(), mu_minus.len())?;
        if mu_plus.is_empty() {
            return invalid("LDA centers must have dimension >= 1");
        }
        if mu_plus == mu_minus {
            return invalid("LDA centers coincide");
        }
        Ok(Self { mu_plus, mu_minus })
    }

    /// The classifier that knows the true `mu`: centers `mu` and
    /// `-(4p - 3) mu`.
    pub fn oracle(params: &ModelParams<T>) -> Result<Self> {
        Self::new(params.mu().to_vec(), params.mu_minus())
    }

    /// Centers built from an estimate of `mu` for majority fraction `p`.
    pub fn from_mu(mu_hat: Vec<T>, p: T) -> Result<Self> {
        let minus = scaled(&mu_hat, -(T::lit(4.0) * p - T::lit(3.0)));
        Self::new(mu_hat, minus)
    }

    pub fn mu_plus(&self) -> &[T] {
        &self.mu_plus
    }

    pub fn mu_minus(&self) -> &[T] {
        &self.mu_minus
    }

    /// `|x - mu_minus|^2 - |x - mu_plus|^2`; nonnegative means `+1`.
    pub fn statistic(&self, x: &[T]) -> Result<T> {
        check_dim(self.mu_plus.len(), x.len())?;
        Ok(sq_dist(x, &self.mu_minus) - sq_dist(x, &self.mu_plus))
    }

    /// Same statistic in affine form `2 x.w + b` with `w = mu_plus - mu_minus`.
    pub fn linear_statistic(&self, x: &[T]) -> Result<T> {
        check_dim(self.mu_plus.len(), x.len())?;
        let w: Vec<T> = self
            .mu_plus
            .iter()
            .zip(&self.mu_minus)
            .map(|(&a, &b)| a - b)
            .collect();
        let b = dot(&self.mu_minus, &self.mu_minus) - dot(&self.mu_plus, &self.mu_plus);
        Ok(T::lit(2.0) * dot(x, &w) + b)
    }
}

impl<T: Scalar> Classifier<T> for LdaClassifier<T> {
    fn dim(&self) -> usize {
        self.mu_plus.len()
    }

    fn classify(&self, x: &[T]) -> Result<Label> {
        Ok(if self.statistic(x)? >= T::zero() {
            Label::Pos
        } else {
            Label::Neg
        })
    }
}

/// LDA with `mu` estimated from the sample and known `p`.
pub fn fit_lda<T: Scalar>(
    dataset: &Dataset<T>,
    p: T,
    estimator: MuEstimator,
) -> Result<LdaClassifier<T>> {
    LdaClassifier::from_mu(estimator.estimate(dataset, p)?, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genmodel::{make_params, Direction};

    fn oracle(p: f64) -> (ModelParams<f64>, LdaClassifier<f64>) {
        let params = make_params(3, 2.0, 1.0, p, Direction::Fixed, None).unwrap();
        let c = LdaClassifier::oracle(&params).unwrap();
        (params, c)
    }

    #[test]
    fn own_center_and_midpoint_are_positive() {
        let (params, c) = oracle(0.9);
        assert_eq!(c.classify(params.mu()).unwrap(), Label::Pos);
        let mid: Vec<f64> = c
            .mu_plus()
            .iter()
            .zip(c.mu_minus())
            .map(|(a, b)| 0.5 * (a + b))
            .collect();
        assert_eq!(c.classify(&mid).unwrap(), Label::Pos);
        assert_eq!(c.classify(c.mu_minus()).unwrap(), Label::Neg);
    }

    #[test]
    fn minority_center_is_misclassified() {
        let (params, c) = oracle(0.9);
        let x = params.component_mean(crate::genmodel::Component::Minority);
        assert_eq!(c.classify(&x).unwrap(), Label::Pos);
    }

    #[test]
    fn three_quarters_puts_negative_center_at_origin() {
        let c = LdaClassifier::from_mu(vec![1.0, 2.0], 0.75).unwrap();
        assert!(c.mu_minus().iter().all(|&v| v == 0.0));
        assert_eq!(c.classify(&[0.4, 0.8]).unwrap(), Label::Neg);
        assert_eq!(c.classify(&[0.6, 1.2]).unwrap(), Label::Pos);
    }

    #[test]
    fn statistics_agree() {
        let c = LdaClassifier::new(vec![1.0f64, -0.5], vec![-2.0, 0.25]).unwrap();
        for x in [[0.0, 0.0], [3.0, 1.0], [-7.5, 2.0]] {
            let a = c.statistic(&x).unwrap();
            let b = c.linear_statistic(&x).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn validation() {
        assert!(LdaClassifier::new(vec![1.0], vec![1.0]).is_err());
        assert!(LdaClassifier::new(vec![1.0], vec![1.0, 2.0]).is_err());
        let c = LdaClassifier::new(vec![1.0], vec![0.0]).unwrap();
        assert!(c.classify(&[1.0, 2.0]).is_err());
    }
}
