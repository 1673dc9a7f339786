//! Closed-form misclassification errors of the oracle classifiers.
//!
//! Everything is a function of the separation `nu = |mu| / sigma`, the
//! majority fraction `p`, and (for the train/test shift) the tail parameter
//! `t`, where training data comes from `D_{1 - 1/t}`. Φ arguments are clamped
//! to ±38 so sweeps at large `nu` never overflow.

use crate::error::{invalid, Result};
use crate::numerics::cdf_clamped as phi_cdf;
use crate::scalar::Scalar;

/// Validated `(nu, p, t)` triple.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundInputs<T> {
    pub nu: T,
    pub p: T,
    pub t: Option<T>,
}

impl<T: Scalar> BoundInputs<T> {
    pub fn new(nu: T, p: T, t: Option<T>) -> Result<Self> {
        check_nu(nu)?;
        check_open_p(p)?;
        if let Some(t) = t {
            check_t(t)?;
        }
        Ok(Self { nu, p, t })
    }

    /// Majority fraction `q = 1 - 1/t` of the training distribution.
    pub fn q(&self) -> Option<T> {
        self.t.map(|t| T::one() - t.recip())
    }
}

fn check_nu<T: Scalar>(nu: T) -> Result<()> {
    if nu > T::zero() && nu.is_finite() {
        Ok(())
    } else {
        invalid(format!("nu must be positive and finite, got {nu}"))
    }
}

fn check_open_p<T: Scalar>(p: T) -> Result<()> {
    if p > T::lit(0.5) && p < T::one() {
        Ok(())
    } else {
        invalid(format!("p must lie in (1/2, 1), got {p}"))
    }
}

fn check_t<T: Scalar>(t: T) -> Result<()> {
    if t > T::lit(2.0) {
        Ok(())
    } else {
        invalid(format!("tail parameter t must exceed 2, got {t}"))
    }
}

/// Exact error of the oracle LDA classifier on `D_p`:
/// `1/2 [Φ(-(2p-1)ν) + p Φ(-(3-2p)ν) + (1-p) Φ((2p+1)ν)]`.
///
/// `p = 1` is accepted as the closed-form limit `Φ(-ν)`.
pub fn lda_error_formula<T: Scalar>(nu: T, p: T) -> Result<T> {
    check_nu(nu)?;
    if !(p > T::lit(0.5) && p <= T::one()) {
        return invalid(format!("p must lie in (1/2, 1], got {p}"));
    }
    let one = T::one();
    let two = T::lit(2.0);
    Ok(T::lit(0.5)
        * (phi_cdf(-(two * p - one) * nu)
            + p * phi_cdf(-(T::lit(3.0) - two * p) * nu)
            + (one - p) * phi_cdf((two * p + one) * nu)))
}

/// Upper bound on the error of the oracle MDA classifier on `D_p`.
pub fn mda_error_bound<T: Scalar>(nu: T, p: T) -> Result<T> {
    check_nu(nu)?;
    check_open_p(p)?;
    let one = T::one();
    let two_nu = T::lit(2.0) * nu;
    let lp = p.ln() / two_nu;
    let lq = (one - p).ln() / two_nu;
    Ok(T::lit(0.5)
        * (phi_cdf(-nu + lp)
            + phi_cdf(-nu + lq)
            + p * phi_cdf(-nu - lp)
            + (one - p) * phi_cdf(-nu - lq)))
}

/// `(1-p)/2 - exp(-ν²/2)`: lower bound on the LDA-minus-MDA error gap.
pub fn gap_lower_bound<T: Scalar>(nu: T, p: T) -> Result<T> {
    check_nu(nu)?;
    check_open_p(p)?;
    Ok((T::one() - p) * T::lit(0.5) - (-(nu * nu) * T::lit(0.5)).exp())
}

/// Error on `D_p` of the LDA classifier built for `D_{1-1/t}`.
pub fn lda_error_shifted<T: Scalar>(nu: T, p: T, t: T) -> Result<T> {
    check_nu(nu)?;
    check_open_p(p)?;
    check_t(t)?;
    let one = T::one();
    let two_t = T::lit(2.0) / t;
    Ok(T::lit(0.5)
        * (phi_cdf(-(one - two_t) * nu)
            + p * phi_cdf(-(one + two_t) * nu)
            + (one - p) * phi_cdf((T::lit(3.0) - two_t) * nu)))
}

/// Upper bound on the error on `D_p` of the MDA classifier built for
/// `D_{1-1/t}`.
pub fn mda_error_shifted_bound<T: Scalar>(nu: T, p: T, t: T) -> Result<T> {
    check_nu(nu)?;
    check_open_p(p)?;
    check_t(t)?;
    let one = T::one();
    let two_nu = T::lit(2.0) * nu;
    let lq = (one - t.recip()).ln() / two_nu;
    let lt = t.ln() / two_nu;
    Ok(T::lit(0.5)
        * (phi_cdf(-nu + lq)
            + phi_cdf(-nu - lt)
            + p * phi_cdf(-nu - lq)
            + (one - p) * phi_cdf(-nu + lt)))
}

/// `exp(8 ν²)`: below this tail parameter the shifted LDA tail term `Φ(3ν)`
/// exceeds the shifted MDA tail term `Φ(-ν + ln t / (2ν))`. Overflows to
/// `+inf` for large `ν`.
pub fn crossover_t<T: Scalar>(nu: T) -> Result<T> {
    check_nu(nu)?;
    Ok((T::lit(8.0) * nu * nu).exp())
}

/// Every closed form evaluated at one `(nu, p, t)` point, in display order.
pub fn all_bounds(nu: f64, p: f64, t: f64) -> Result<Vec<(&'static str, f64)>> {
    Ok(vec![
        ("lda_error_formula", lda_error_formula(nu, p)?),
        ("mda_error_bound", mda_error_bound(nu, p)?),
        ("gap_lower_bound", gap_lower_bound(nu, p)?),
        ("lda_error_shifted", lda_error_shifted(nu, p, t)?),
        ("mda_error_shifted_bound", mda_error_shifted_bound(nu, p, t)?),
        ("crossover_t", crossover_t(nu)?),
    ])
}
