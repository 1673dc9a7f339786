use super::Classifier;
use crate::error::{check_dim, Error, Result};
use crate::genmodel::{Component, Dataset};
use crate::scalar::Scalar;

/// Misclassification counts, overall and per latent component.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorReport {
    pub n: usize,
    pub mistakes: usize,
    /// `(count, mistakes)` indexed by [`Component::index`].
    pub by_component: [(usize, usize); 3],
}

impl ErrorReport {
    pub fn error(&self) -> f64 {
        self.mistakes as f64 / self.n as f64
    }

    /// Conditional error given the component, `None` if none were tested.
    pub fn component_error(&self, k: Component) -> Option<f64> {
        let (c, m) = self.by_component[k.index()];
        (c > 0).then(|| m as f64 / c as f64)
    }
}

pub fn empirical_error<T: Scalar, C: Classifier<T> + ?Sized>(
    classifier: &C,
    testset: &Dataset<T>,
) -> Result<ErrorReport> {
    if testset.is_empty() {
        return Err(Error::Empty("test set"));
    }
    check_dim(classifier.dim(), testset.d())?;
    let mut report = ErrorReport {
        n: testset.len(),
        mistakes: 0,
        by_component: [(0, 0); 3],
    };
    for p in testset.points() {
        let wrong = classifier.classify(&p.x)? != p.y;
        let slot = &mut report.by_component[p.k.index()];
        slot.0 += 1;
        if wrong {
            slot.1 += 1;
            report.mistakes += 1;
        }
    }
    Ok(report)
}
