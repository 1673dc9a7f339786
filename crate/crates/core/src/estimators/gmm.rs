use std::fmt::Write as _;

use crate::error::{check_dim, invalid, Error, Result};
use crate::scalar::{sq_dist, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct GmmComponent<T> {
    pub weight: T,
    pub mean: Vec<T>,
    /// Spherical variance; the covariance is `variance * I`.
    pub variance: T,
}

/// Weighted mixture of spherical Gaussians.
#[derive(Clone, Debug, PartialEq)]
pub struct GmmModel<T> {
    components: Vec<GmmComponent<T>>,
    d: usize,
}

fn weight_tol<T: Scalar>() -> T {
    T::lit(1e-9).max(T::epsilon() * T::lit(64.0))
}

pub(crate) fn log_sum_exp<T: Scalar>(xs: &[T]) -> T {
    let m = xs.iter().copied().fold(T::neg_infinity(), T::max);
    if m == T::neg_infinity() {
        return m;
    }
    m + xs.iter().map(|&x| (x - m).exp()).sum::<T>().ln()
}

impl<T: Scalar> GmmModel<T> {
    pub fn new(components: Vec<GmmComponent<T>>) -> Result<Self> {
        let first = components.first().ok_or(Error::Empty("mixture components"))?;
        let d = first.mean.len();
        if d == 0 {
            return invalid("component dimension must be >= 1");
        }
        let mut total = T::zero();
        for c in &components {
            check_dim(d, c.mean.len())?;
            if !(c.weight >= T::zero() && c.weight <= T::one()) {
                return invalid(format!("weight {} outside [0, 1]", c.weight));
            }
            if !(c.variance > T::zero() && c.variance.is_finite()) {
                return invalid(format!("variance {} must be positive", c.variance));
            }
            total = total + c.weight;
        }
        if (total - T::one()).abs() > weight_tol() {
            return invalid(format!("weights sum to {total}, not 1"));
        }
        Ok(Self { components, d })
    }

    /// Single spherical Gaussian.
    pub fn single(mean: Vec<T>, variance: T) -> Result<Self> {
        Self::new(vec![GmmComponent {
            weight: T::one(),
            mean,
            variance,
        }])
    }

    pub fn components(&self) -> &[GmmComponent<T>] {
        &self.components
    }

    pub fn k(&self) -> usize {
        self.components.len()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// `ln w_j + ln N(x; m_j, v_j I)` for every component.
    pub(crate) fn weighted_log_densities(&self, x: &[T], out: &mut Vec<T>) {
        let half_d = T::from_usize_lossy(self.d) * T::lit(0.5);
        let two_pi = T::lit(2.0) * T::PI();
        out.clear();
        out.extend(self.components.iter().map(|c| {
            c.weight.ln()
                - half_d * (two_pi * c.variance).ln()
                - sq_dist(x, &c.mean) / (T::lit(2.0) * c.variance)
        }));
    }

    /// Log density of the mixture at `x`, evaluated with log-sum-exp.
    pub fn logpdf(&self, x: &[T]) -> Result<T> {
        check_dim(self.d, x.len())?;
        let mut buf = Vec::with_capacity(self.k());
        self.weighted_log_densities(x, &mut buf);
        Ok(log_sum_exp(&buf))
    }

    /// Posterior component probabilities at `x`.
    pub fn responsibilities(&self, x: &[T]) -> Result<Vec<T>> {
        check_dim(self.d, x.len())?;
        let mut buf = Vec::with_capacity(self.k());
        self.weighted_log_densities(x, &mut buf);
        let lse = log_sum_exp(&buf);
        Ok(buf.into_iter().map(|l| (l - lse).exp()).collect())
    }

    /// Plain-text form: a `k,d` header, then one
    /// `weight,mean_0,...,mean_{d-1},variance` row per component.
    pub fn to_text(&self) -> String {
        let mut s = format!("{},{}\n", self.k(), self.d);
        for c in &self.components {
            let _ = write!(s, "{}", c.weight);
            for m in &c.mean {
                let _ = write!(s, ",{m}");
            }
            let _ = writeln!(s, ",{}", c.variance);
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or(Error::Empty("gmm text"))?;
        let perr = |line: usize, msg: String| Error::Parse { line, msg };
        let hv: Vec<usize> = header
            .split(',')
            .map(|f| f.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| perr(1, format!("bad header {header:?}: {e}")))?;
        let [k, d] = hv[..] else {
            return Err(perr(1, format!("header must be k,d; got {header:?}")));
        };
        let mut comps = Vec::with_capacity(k);
        for (i, line) in lines.enumerate() {
            let vals: Vec<T> = line
                .split(',')
                .map(|f| f.trim().parse::<T>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| perr(i + 2, format!("bad number in {line:?}")))?;
            if vals.len() != d + 2 {
                return Err(perr(i + 2, format!("expected {} fields, got {}", d + 2, vals.len())));
            }
            comps.push(GmmComponent {
                weight: vals[0],
                mean: vals[1..=d].to_vec(),
                variance: vals[d + 1],
            });
        }
        if comps.len() != k {
            return Err(perr(0, format!("header says {k} components, found {}", comps.len())));
        }
        let m = Self::new(comps)?;
        check_dim(d, m.d)?;
        Ok(m)
    }
}
