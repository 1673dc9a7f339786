//! Seeded randomness and the standard normal special functions.

mod rng;
mod special;

pub use rng::RngStream;
pub use special::{erfc, std_normal_cdf, std_normal_pdf};
pub(crate) use special::cdf_clamped;
