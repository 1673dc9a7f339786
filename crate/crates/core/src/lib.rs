//! Gaussian-mixture data model with a long-tailed negative class, the
//! discriminant classifiers fitted to it, and their closed-form errors.
//!
//! Every numeric routine is generic over [`Scalar`] (`f32` or `f64`); the
//! `*64` and `*32` aliases below name the common instantiations.

pub mod bounds;
pub mod classifiers;
pub mod error;
pub mod estimators;
pub mod genmodel;
pub mod numerics;
mod scalar;

pub use classifiers::{
    empirical_error, fit_generic_mda, fit_lda, fit_mda, memorization_score, memorization_scores,
    AnyClassifier, Classifier, ErrorReport, GenericMdaClassifier, LdaClassifier, LearnerSpec,
    MdaClassifier,
};
pub use error::{Error, Result};
pub use estimators::{
    em_fit_gmm, mom_estimate_mu, positive_class_mean, EmConfig, EmFit, EmInit, GmmComponent,
    GmmModel, MuEstimator,
};
pub use genmodel::{
    make_params, sample_dataset, subpopulation_stats, Component, Dataset, Direction, Label,
    LabeledPoint, ModelParams, Provenance, SubpopRecord,
};
pub use numerics::{erfc, std_normal_cdf, std_normal_pdf, RngStream};
pub use scalar::Scalar;

pub type ModelParams64 = ModelParams<f64>;
pub type Dataset64 = Dataset<f64>;
pub type LabeledPoint64 = LabeledPoint<f64>;
pub type GmmModel64 = GmmModel<f64>;
pub type LdaClassifier64 = LdaClassifier<f64>;
pub type MdaClassifier64 = MdaClassifier<f64>;
pub type GenericMdaClassifier64 = GenericMdaClassifier<f64>;
pub type LearnerSpec64 = LearnerSpec<f64>;

pub type ModelParams32 = ModelParams<f32>;
pub type Dataset32 = Dataset<f32>;
pub type LabeledPoint32 = LabeledPoint<f32>;
pub type GmmModel32 = GmmModel<f32>;
pub type LdaClassifier32 = LdaClassifier<f32>;
pub type MdaClassifier32 = MdaClassifier<f32>;
pub type GenericMdaClassifier32 = GenericMdaClassifier<f32>;
pub type LearnerSpec32 = LearnerSpec<f32>;
