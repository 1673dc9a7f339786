//! Discriminant classifiers, error evaluation and the memorization score.

mod evaluate;
mod generic;
mod lda;
mod mda;
mod memorization;

pub use evaluate::{empirical_error, ErrorReport};
pub use generic::{fit_generic_mda, GenericMdaClassifier};
pub use lda::{fit_lda, LdaClassifier};
pub use mda::{fit_mda, MdaClassifier};
pub use memorization::{memorization_score, memorization_scores, AnyClassifier, LearnerSpec};

use crate::error::Result;
use crate::genmodel::Label;
use crate::scalar::Scalar;

/// A fitted decision rule. Ties resolve to [`Label::Pos`].
pub trait Classifier<T: Scalar>: Send + Sync {
    fn dim(&self) -> usize;

    fn classify(&self, x: &[T]) -> Result<Label>;
}

impl<T: Scalar, C: Classifier<T> + ?Sized> Classifier<T> for &C {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn classify(&self, x: &[T]) -> Result<Label> {
        (**self).classify(x)
    }
}
