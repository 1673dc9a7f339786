//! Estimation of the model mean and EM fitting of spherical mixtures.

mod em;
mod gmm;
mod mom;

pub use em::{em_fit_gmm, EmConfig, EmFit, EmInit};
pub use gmm::{GmmComponent, GmmModel};
pub use mom::{mom_estimate_mu, positive_class_mean, MuEstimator};
