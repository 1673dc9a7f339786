//! Standard normal density and distribution function.
//!
//! `erfc` follows the FreeBSD `s_erf.c` rational approximations (Sun
//! Microsystems, freely redistributable), evaluated in the caller's scalar
//! type. Absolute error of `std_normal_cdf` in `f64` is well below 1e-15.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const ERX: f64 = 8.45062911510467529297e-01;

const PP: [f64; 5] = [
    1.28379167095512558561e-01,
    -3.25042107247001499370e-01,
    -2.84817495755985104766e-02,
    -5.77027029648944159157e-03,
    -2.37630166566501626084e-05,
];
const QQ: [f64; 5] = [
    3.97917223959155352819e-01,
    6.50222499887672944485e-02,
    5.08130628187576562776e-03,
    1.32494738004321644526e-04,
    -3.96022827877536812320e-06,
];
const PA: [f64; 7] = [
    -2.36211856075265944077e-03,
    4.14856118683748331666e-01,
    -3.72207876035701323847e-01,
    3.18346619901161753674e-01,
    -1.10894694282396677476e-01,
    3.54783043256182359371e-02,
    -2.16637559486879084300e-03,
];
const QA: [f64; 6] = [
    1.06420880400844228286e-01,
    5.40397917702171048937e-01,
    7.18286544141962662868e-02,
    1.26171219808761642112e-01,
    1.36370839120290507362e-02,
    1.19844998467991074170e-02,
];
const RA: [f64; 8] = [
    -9.86494403484714822705e-03,
    -6.93858572707181764372e-01,
    -1.05586262253232909814e+01,
    -6.23753324503260060396e+01,
    -1.62396669462573470355e+02,
    -1.84605092906711035994e+02,
    -8.12874355063065934246e+01,
    -9.81432934416914548592e+00,
];
const SA: [f64; 8] = [
    1.96512716674392571292e+01,
    1.37657754143519042600e+02,
    4.34565877475229228821e+02,
    6.45387271733267880336e+02,
    4.29008140027567833386e+02,
    1.08635005541779435134e+02,
    6.57024977031928170135e+00,
    -6.04244152148580987438e-02,
];
const RB: [f64; 7] = [
    -9.86494292470009928597e-03,
    -7.99283237680523006574e-01,
    -1.77579549177547519889e+01,
    -1.60636384855821916062e+02,
    -6.37566443368389627722e+02,
    -1.02509513161107724954e+03,
    -4.83519191608651397019e+02,
];
const SB: [f64; 7] = [
    3.03380607434824582924e+01,
    3.25792512996573918826e+02,
    1.53672958608443695994e+03,
    3.19985821950859553908e+03,
    2.55305040643316442583e+03,
    4.74528541206955367215e+02,
    -2.24409524465858183362e+01,
];

/// `c[0] + z*c[1] + z^2*c[2] + ...` (Horner).
fn poly<T: Scalar>(z: T, c: &[f64]) -> T {
    c.iter().rev().fold(T::zero(), |acc, &ci| acc * z + T::lit(ci))
}

/// `1 + z*c[0] + z^2*c[1] + ...`
fn poly1<T: Scalar>(z: T, c: &[f64]) -> T {
    T::one() + z * poly(z, c)
}

/// Complementary error function.
pub fn erfc<T: Scalar>(x: T) -> T {
    if x.is_nan() {
        return x;
    }
    let one = T::one();
    let two = T::lit(2.0);
    let neg = x < T::zero();
    let ax = x.abs();

    if ax < T::lit(0.84375) {
        let temp = if ax < T::lit(1.3877787807814457e-17) {
            ax
        } else {
            let z = ax * ax;
            let y = poly(z, &PP) / poly1(z, &QQ);
            if ax < T::lit(0.25) {
                ax + ax * y
            } else {
                T::lit(0.5) + (ax * y + (ax - T::lit(0.5)))
            }
        };
        return if neg { one + temp } else { one - temp };
    }
    if ax < T::lit(1.25) {
        let s = ax - one;
        let r = poly(s, &PA) / poly1(s, &QA);
        return if neg {
            one + T::lit(ERX) + r
        } else {
            one - T::lit(ERX) - r
        };
    }
    if ax >= T::lit(28.0) {
        return if neg { two } else { T::zero() };
    }
    if neg && ax > T::lit(6.0) {
        return two;
    }
    let s = one / (ax * ax);
    let (r, q) = if ax < T::lit(1.0 / 0.35) {
        (poly(s, &RA), poly1(s, &SA))
    } else {
        (poly(s, &RB), poly1(s, &SB))
    };
    // Split x^2 = z^2 - (z - x)(z + x) with z carrying ~24 mantissa bits so
    // z*z is exact and the exponent is evaluated without cancellation.
    let z = T::from_f32(ax.to_f32().unwrap_or(0.0)).unwrap_or(ax);
    let e = (-z * z - T::lit(0.5625)).exp() * ((z - ax) * (z + ax) + r / q).exp();
    if neg {
        two - e / ax
    } else {
        e / ax
    }
}

pub(crate) fn cdf_unchecked<T: Scalar>(x: T) -> T {
    T::lit(0.5) * erfc(-x * T::FRAC_1_SQRT_2())
}

/// Φ with the argument clamped to ±38, beyond which it is 1 or subnormal in
/// double precision.
pub(crate) fn cdf_clamped<T: Scalar>(x: T) -> T {
    let lim = T::lit(38.0);
    if x.is_nan() {
        return x;
    }
    cdf_unchecked(x.max(-lim).min(lim))
}

pub(crate) fn pdf_unchecked<T: Scalar>(x: T) -> T {
    let inv_sqrt_2pi = T::FRAC_2_SQRT_PI() * T::FRAC_1_SQRT_2() * T::lit(0.5);
    inv_sqrt_2pi * (-(x * x) * T::lit(0.5)).exp()
}

fn finite<T: Scalar>(x: T) -> Result<T> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::NonFinite(format!("normal argument {x}")))
    }
}

/// Standard normal distribution function Φ.
pub fn std_normal_cdf<T: Scalar>(x: T) -> Result<T> {
    finite(x).map(cdf_unchecked)
}

/// Standard normal density φ. Underflows to zero for large |x|.
pub fn std_normal_pdf<T: Scalar>(x: T) -> Result<T> {
    finite(x).map(pdf_unchecked)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cdf_reference_points() {
        assert_eq!(std_normal_cdf(0.0f64).unwrap(), 0.5);
        // quadrature oracle (mpmath, 30 digits)
        let refs = [
            (-8.0f64, 6.22096057427178412e-16),
            (-5.0, 2.86651571879193911e-07),
            (-3.3, 4.83424142383777507e-04),
            (-1.6, 5.47992916995579841e-02),
            (-1.0, 1.58655253931457051e-01),
            (0.5, 6.91462461274013104e-01),
            (2.7, 9.96533026196959333e-01),
            (6.0, 9.99999999013412355e-01),
        ];
        for (x, want) in refs {
            let got = std_normal_cdf(x).unwrap();
            assert!((got - want).abs() < 1e-15, "Phi({x}) = {got}, want {want}");
        }
    }

    #[test]
    fn cdf_symmetry() {
        let a = std_normal_cdf(0.73f64).unwrap() + std_normal_cdf(-0.73f64).unwrap();
        assert!((a - 1.0).abs() <= f64::EPSILON);
        for i in -80..=80 {
            let x = i as f64 / 10.0;
            let s = std_normal_cdf(x).unwrap() + std_normal_cdf(-x).unwrap();
            assert!((s - 1.0).abs() <= 1e-12, "x = {x}");
        }
    }

    #[test]
    fn cdf_monotone() {
        let mut prev = 0.0;
        for i in -1600..=1600 {
            let v = std_normal_cdf(i as f64 / 200.0).unwrap();
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn derivative_matches_density() {
        let h = 1e-5;
        for i in -50..=50 {
            let x = i as f64 / 10.0;
            let fd = (std_normal_cdf(x + h).unwrap() - std_normal_cdf(x - h).unwrap()) / (2.0 * h);
            assert!((fd - std_normal_pdf(x).unwrap()).abs() < 1e-6, "x = {x}");
        }
    }

    #[test]
    fn pdf_values() {
        assert!((std_normal_pdf(0.0f64).unwrap() - 0.398942280401432678).abs() < 1e-15);
        assert_eq!(std_normal_pdf(2.4f64).unwrap(), std_normal_pdf(-2.4f64).unwrap());
        assert_eq!(std_normal_pdf(40.0f64).unwrap(), 0.0);
    }

    #[test]
    fn non_finite_rejected() {
        assert!(std_normal_cdf(f64::NAN).is_err());
        assert!(std_normal_cdf(f64::INFINITY).is_err());
        assert!(std_normal_pdf(f64::NEG_INFINITY).is_err());
    }

    #[test]
    fn clamped_saturates() {
        assert_eq!(cdf_clamped(-1e6f64), cdf_clamped(-38.0f64));
        assert!(cdf_clamped(-1e6f64) < 1e-300);
        assert_eq!(cdf_clamped(1e6f64), 1.0);
    }

    #[test]
    fn single_precision_is_close() {
        let got = std_normal_cdf(-1.6f32).unwrap();
        assert!((got as f64 - 0.0547992917).abs() < 1e-6);
    }
}
