use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{HarnessError, Result};

/// Two-sided 97.5% Student-t quantile with `dof` degrees of freedom.
pub fn t_quantile(dof: usize) -> f64 {
    StudentsT::new(0.0, 1.0, dof as f64)
        .expect("dof >= 1")
        .inverse_cdf(0.975)
}

/// Mean and 95% Student-t interval `mean ± t_{0.975,n-1} s / sqrt(n)`.
pub fn confidence_interval(samples: &[f64]) -> Result<(f64, f64, f64)> {
    let n = samples.len();
    if n < 2 {
        return Err(HarnessError::Config(format!(
            "confidence interval needs >= 2 samples, got {n}"
        )));
    }
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(HarnessError::Numerical(ltgmm_core::Error::NonFinite(
            "replicate value".into(),
        )));
    }
    let shift = samples[0];
    let mean = shift + samples.iter().map(|v| v - shift).sum::<f64>() / n as f64;
    let var = samples.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    let half = t_quantile(n - 1) * (var / n as f64).sqrt();
    Ok((mean, mean - half, mean + half))
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}
