use super::Classifier;
use crate::error::{check_dim, Result};
use crate::estimators::MuEstimator;
use crate::genmodel::{check_p, check_sigma, Dataset, Label, ModelParams};
use crate::scalar::{dot, norm, sq_dist, Scalar};

/// Mixture discriminant with the true component layout: `mu` for the
/// positive class, `-mu` and `3 mu` with priors `p/2`, `(1-p)/2` for the
/// negative class.
#[derive(Clone, Debug, PartialEq)]
pub struct MdaClassifier<T> {
    mu: Vec<T>,
    sigma: T,
    p: T,
}

impl<T: Scalar> MdaClassifier<T> {
    pub fn new(mu: Vec<T>, sigma: T, p: T) -> Result<Self> {
        let params = ModelParams::new(mu, sigma, p)?;
        Ok(Self::oracle(&params))
    }

    pub fn oracle(params: &ModelParams<T>) -> Self {
        Self {
            mu: params.mu().to_vec(),
            sigma: params.sigma(),
            p: params.p(),
        }
    }

    pub fn mu(&self) -> &[T] {
        &self.mu
    }

    pub fn sigma(&self) -> T {
        self.sigma
    }

    pub fn p(&self) -> T {
        self.p
    }

    /// Pairwise density comparisons evaluated directly in log space, without
    /// the algebraic reduction used by [`Classifier::classify`].
    pub fn classify_by_density(&self, x: &[T]) -> Result<Label> {
        check_dim(self.mu.len(), x.len())?;
        let two_var = T::lit(2.0) * self.sigma * self.sigma;
        let three_mu: Vec<T> = self.mu.iter().map(|&m| T::lit(3.0) * m).collect();
        let neg_mu: Vec<T> = self.mu.iter().map(|&m| -m).collect();
        let log_pos = -sq_dist(x, &self.mu) / two_var;
        let log_major = self.p.ln() - sq_dist(x, &neg_mu) / two_var;
        let log_minor = (T::one() - self.p).ln() - sq_dist(x, &three_mu) / two_var;
        Ok(if log_pos >= log_major && log_pos >= log_minor {
            Label::Pos
        } else {
            Label::Neg
        })
    }

    /// Margins of the two linear conditions; both nonnegative means `+1`.
    pub fn margins(&self, x: &[T]) -> Result<(T, T)> {
        check_dim(self.mu.len(), x.len())?;
        let half_var = self.sigma * self.sigma * T::lit(0.5);
        let xm = dot(x, &self.mu);
        let mm = norm(&self.mu).powi(2);
        let vs_majority = xm - half_var * self.p.ln();
        let vs_minority = -half_var * (T::one() - self.p).ln() - (xm - T::lit(2.0) * mm);
        Ok((vs_majority, vs_minority))
    }
}

impl<T: Scalar> Classifier<T> for MdaClassifier<T> {
    fn dim(&self) -> usize {
        self.mu.len()
    }

    /// `+1` iff `x.mu >= sigma^2 ln(p) / 2` and
    /// `(x - 2 mu).mu <= -sigma^2 ln(1 - p) / 2`.
    fn classify(&self, x: &[T]) -> Result<Label> {
        let (a, b) = self.margins(x)?;
        Ok(if a >= T::zero() && b >= T::zero() {
            Label::Pos
        } else {
            Label::Neg
        })
    }
}

/// MDA with `mu` estimated from the sample and known `sigma`, `p`.
pub fn fit_mda<T: Scalar>(
    dataset: &Dataset<T>,
    sigma: T,
    p: T,
    estimator: MuEstimator,
) -> Result<MdaClassifier<T>> {
    check_sigma(sigma)?;
    check_p(p)?;
    MdaClassifier::new(estimator.estimate(dataset, p)?, sigma, p)
}
