//! Expectation-maximization for spherical Gaussian mixtures.

use super::gmm::{log_sum_exp, GmmComponent, GmmModel};
use crate::error::{check_dim, invalid, Error, Result};
use crate::numerics::RngStream;
use crate::scalar::{sq_dist, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmInit {
    /// k-means++ seeding followed by one Lloyd assignment pass.
    KMeansPlusPlus,
    /// `k` distinct data points as means, equal weights, pooled variance.
    RandomPoints,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EmConfig {
    pub max_iter: usize,
    /// Stop once the log-likelihood improves by less than `tol * |loglik|`.
    pub tol: f64,
    pub restarts: usize,
    /// Lower bound on component variances, as a multiple of the pooled
    /// per-coordinate variance of the data being fitted.
    pub variance_floor: f64,
    pub init: EmInit,
}

impl Default for EmConfig {
    fn default() -> Self {
        Self {
            max_iter: 500,
            tol: 1e-8,
            restarts: 5,
            variance_floor: 1e-6,
            init: EmInit::KMeansPlusPlus,
        }
    }
}

impl EmConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iter == 0 {
            return invalid("em max_iter must be >= 1");
        }
        if self.restarts == 0 {
            return invalid("em restarts must be >= 1");
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return invalid(format!("em tol must be positive, got {}", self.tol));
        }
        if !(self.variance_floor > 0.0 && self.variance_floor.is_finite()) {
            return invalid(format!(
                "em variance_floor must be positive, got {}",
                self.variance_floor
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct EmFit<T> {
    pub model: GmmModel<T>,
    pub loglik: T,
    /// Index of the restart that produced `model`.
    pub best_restart: usize,
    /// Log-likelihood after initialization and after every M-step, per
    /// restart.
    pub traces: Vec<Vec<T>>,
}

struct Params<T> {
    weights: Vec<T>,
    means: Vec<Vec<T>>,
    variances: Vec<T>,
}

impl<T: Scalar> Params<T> {
    fn into_model(self) -> Result<GmmModel<T>> {
        let total: T = self.weights.iter().copied().sum();
        GmmModel::new(
            self.weights
                .into_iter()
                .zip(self.means)
                .zip(self.variances)
                .map(|((w, mean), variance)| GmmComponent {
                    weight: w / total,
                    mean,
                    variance,
                })
                .collect(),
        )
    }
}

fn mean_of<T: Scalar, P: AsRef<[T]>>(points: &[P], d: usize) -> Vec<T> {
    let mut m = vec![T::zero(); d];
    for p in points {
        for (a, &b) in m.iter_mut().zip(p.as_ref()) {
            *a = *a + b;
        }
    }
    let n = T::from_usize_lossy(points.len());
    m.into_iter().map(|v| v / n).collect()
}

/// Pooled spherical variance `(1 / (n d)) sum |x_i - mean|^2`.
fn pooled_variance<T: Scalar, P: AsRef<[T]>>(points: &[P], mean: &[T]) -> T {
    let s: T = points.iter().map(|p| sq_dist(p.as_ref(), mean)).sum();
    s / (T::from_usize_lossy(points.len()) * T::from_usize_lossy(mean.len()))
}

/// E-step: fills `resp` (row-major n x k) and returns the log-likelihood.
fn e_step<T: Scalar, P: AsRef<[T]>>(points: &[P], model: &Params<T>, resp: &mut [T]) -> T {
    let k = model.weights.len();
    let d = model.means[0].len();
    let half_d = T::from_usize_lossy(d) * T::lit(0.5);
    let two_pi = T::lit(2.0) * T::PI();
    let log_norm: Vec<T> = model
        .weights
        .iter()
        .zip(&model.variances)
        .map(|(&w, &v)| w.ln() - half_d * (two_pi * v).ln())
        .collect();
    let mut ll = T::zero();
    for (i, p) in points.iter().enumerate() {
        let row = &mut resp[i * k..(i + 1) * k];
        for j in 0..k {
            row[j] = log_norm[j] - sq_dist(p.as_ref(), &model.means[j]) / (T::lit(2.0) * model.variances[j]);
        }
        let lse = log_sum_exp(row);
        for r in row.iter_mut() {
            *r = (*r - lse).exp();
        }
        ll = ll + lse;
    }
    ll
}

/// M-step under the variance floor. Components with no responsibility keep
/// their previous mean and variance.
fn m_step<T: Scalar, P: AsRef<[T]>>(points: &[P], resp: &[T], floor: T, model: &mut Params<T>) {
    let k = model.weights.len();
    let d = model.means[0].len();
    let n = T::from_usize_lossy(points.len());
    for j in 0..k {
        let nj: T = (0..points.len()).map(|i| resp[i * k + j]).sum();
        model.weights[j] = nj / n;
        if !(nj > T::min_positive_value() * T::lit(1e6)) {
            continue;
        }
        let mut mean = vec![T::zero(); d];
        for (i, p) in points.iter().enumerate() {
            let r = resp[i * k + j];
            for (m, &x) in mean.iter_mut().zip(p.as_ref()) {
                *m = *m + r * x;
            }
        }
        for m in mean.iter_mut() {
            *m = *m / nj;
        }
        let ss: T = points
            .iter()
            .enumerate()
            .map(|(i, p)| resp[i * k + j] * sq_dist(p.as_ref(), &mean))
            .sum();
        model.variances[j] = (ss / (nj * T::from_usize_lossy(d))).max(floor);
        model.means[j] = mean;
    }
}

fn init_kmeans_pp<T: Scalar, P: AsRef<[T]>>(
    points: &[P],
    k: usize,
    floor: T,
    data_var: T,
    stream: &mut RngStream,
) -> Params<T> {
    let n = points.len();
    let mut centers: Vec<Vec<T>> = vec![points[stream.below(n)].as_ref().to_vec()];
    let mut dist: Vec<T> = points.iter().map(|p| sq_dist(p.as_ref(), &centers[0])).collect();
    while centers.len() < k {
        let total: T = dist.iter().copied().sum();
        let next = if total > T::zero() {
            let target = T::lit(stream.next_f64()) * total;
            let mut acc = T::zero();
            let mut chosen = n - 1;
            for (i, &w) in dist.iter().enumerate() {
                acc = acc + w;
                if acc > target && w > T::zero() {
                    chosen = i;
                    break;
                }
            }
            chosen
        } else {
            stream.below(n)
        };
        let c = points[next].as_ref().to_vec();
        for (dv, p) in dist.iter_mut().zip(points) {
            *dv = (*dv).min(sq_dist(p.as_ref(), &c));
        }
        centers.push(c);
    }

    // One Lloyd pass: hard assignment, then centroid, weight and spherical
    // variance of each cluster.
    let d = centers[0].len();
    let mut sums = vec![vec![T::zero(); d]; k];
    let mut counts = vec![0usize; k];
    let mut assign = vec![0usize; n];
    for (i, p) in points.iter().enumerate() {
        let j = (0..k)
            .min_by(|&a, &b| {
                sq_dist(p.as_ref(), &centers[a])
                    .partial_cmp(&sq_dist(p.as_ref(), &centers[b]))
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap_or(0);
        assign[i] = j;
        counts[j] += 1;
        for (s, &x) in sums[j].iter_mut().zip(p.as_ref()) {
            *s = *s + x;
        }
    }
    let mut ss = vec![T::zero(); k];
    let means: Vec<Vec<T>> = (0..k)
        .map(|j| {
            if counts[j] == 0 {
                centers[j].clone()
            } else {
                let c = T::from_usize_lossy(counts[j]);
                sums[j].iter().map(|&s| s / c).collect()
            }
        })
        .collect();
    for (i, p) in points.iter().enumerate() {
        ss[assign[i]] = ss[assign[i]] + sq_dist(p.as_ref(), &means[assign[i]]);
    }
    let total = T::from_usize_lossy(counts.iter().map(|&c| c.max(1)).sum());
    Params {
        weights: counts
            .iter()
            .map(|&c| T::from_usize_lossy(c.max(1)) / total)
            .collect(),
        variances: (0..k)
            .map(|j| {
                if counts[j] == 0 {
                    data_var.max(floor)
                } else {
                    (ss[j] / (T::from_usize_lossy(counts[j] * d))).max(floor)
                }
            })
            .collect(),
        means,
    }
}

fn init_random_points<T: Scalar, P: AsRef<[T]>>(
    points: &[P],
    k: usize,
    floor: T,
    data_var: T,
    stream: &mut RngStream,
) -> Params<T> {
    // Partial Fisher-Yates for k distinct indices.
    let mut idx: Vec<usize> = (0..points.len()).collect();
    for i in 0..k {
        let j = i + stream.below(idx.len() - i);
        idx.swap(i, j);
    }
    let w = T::one() / T::from_usize_lossy(k);
    Params {
        weights: vec![w; k],
        means: idx[..k].iter().map(|&i| points[i].as_ref().to_vec()).collect(),
        variances: vec![data_var.max(floor); k],
    }
}

/// Fit a `k`-component spherical Gaussian mixture by EM, keeping the best of
/// `config.restarts` runs. Restart `r` draws from `stream.split(r)`; ties in
/// final log-likelihood go to the lowest restart index.
pub fn em_fit_gmm<T: Scalar, P: AsRef<[T]>>(
    points: &[P],
    k: usize,
    config: &EmConfig,
    stream: &RngStream,
) -> Result<EmFit<T>> {
    config.validate()?;
    if k == 0 {
        return invalid("number of components must be >= 1");
    }
    if points.len() < k {
        return invalid(format!(
            "{} points cannot support {k} mixture components",
            points.len()
        ));
    }
    let d = points[0].as_ref().len();
    if d == 0 {
        return invalid("points must have dimension >= 1");
    }
    for p in points {
        check_dim(d, p.as_ref().len())?;
        if p.as_ref().iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("EM input point".into()));
        }
    }

    let center = mean_of(points, d);
    let data_var = pooled_variance(points, &center);
    let floor = if data_var > T::zero() {
        T::lit(config.variance_floor) * data_var
    } else {
        T::lit(config.variance_floor)
    };
    let tol = T::lit(config.tol);
    let n = points.len();

    let mut best: Option<(T, usize, Params<T>)> = None;
    let mut traces = Vec::with_capacity(config.restarts);
    let mut resp = vec![T::zero(); n * k];
    for r in 0..config.restarts {
        let mut s = stream.split(r as u64);
        let mut params = match config.init {
            EmInit::KMeansPlusPlus => init_kmeans_pp(points, k, floor, data_var, &mut s),
            EmInit::RandomPoints => init_random_points(points, k, floor, data_var, &mut s),
        };
        let mut trace = Vec::new();
        let mut ll = e_step(points, &params, &mut resp);
        trace.push(ll);
        for _ in 0..config.max_iter {
            m_step(points, &resp, floor, &mut params);
            let next = e_step(points, &params, &mut resp);
            trace.push(next);
            let improvement = next - ll;
            ll = next;
            if improvement < tol * ll.abs() {
                break;
            }
        }
        let better = match &best {
            None => true,
            Some((b, _, _)) => ll > *b || (b.is_nan() && !ll.is_nan()),
        };
        if better {
            best = Some((ll, r, params));
        }
        traces.push(trace);
    }
    let (loglik, best_restart, params) = best.expect("restarts >= 1");
    Ok(EmFit {
        model: params.into_model()?,
        loglik,
        best_restart,
        traces,
    })
}
