use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{invalid, Result};
use crate::scalar::Scalar;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(GOLDEN_GAMMA);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn mix(x: u64) -> u64 {
    let mut s = x;
    splitmix64(&mut s)
}

fn generator_from_key(key: u64) -> ChaCha8Rng {
    let mut s = key;
    let mut seed = [0u8; 32];
    for chunk in seed.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut s).to_le_bytes());
    }
    ChaCha8Rng::from_seed(seed)
}

/// Deterministic random stream identified by `(master_seed, substream path)`.
///
/// Children produced by [`RngStream::split`] depend only on the parent's
/// lineage and the child index, never on how many draws the parent has made,
/// so parallel replicates can be generated in any order.
#[derive(Clone, Debug)]
pub struct RngStream {
    rng: ChaCha8Rng,
    master_seed: u64,
    substream_index: u64,
    key: u64,
    spare_normal: Option<f64>,
}

impl RngStream {
    pub fn new(master_seed: u64) -> Self {
        let key = mix(master_seed);
        Self {
            rng: generator_from_key(key),
            master_seed,
            substream_index: 0,
            key,
            spare_normal: None,
        }
    }

    pub fn split(&self, index: u64) -> Self {
        let key = mix(self.key ^ mix(index.wrapping_add(0xD1B5_4A32_D192_ED03)));
        Self {
            rng: generator_from_key(key),
            master_seed: self.master_seed,
            substream_index: index,
            key,
            spare_normal: None,
        }
    }

    /// Split along a path of indices, e.g. `(experiment, grid cell, replicate)`.
    pub fn split_path(&self, path: &[u64]) -> Self {
        path.iter().fold(self.clone(), |s, &i| s.split(i))
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn substream_index(&self) -> u64 {
        self.substream_index
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `0..n`, `n > 0`.
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0, "below(0)");
        // Lemire's multiply-shift with rejection.
        let n = n as u64;
        let threshold = n.wrapping_neg() % n;
        loop {
            let m = (self.next_u64() as u128) * (n as u128);
            if (m as u64) >= threshold {
                return (m >> 64) as usize;
            }
        }
    }

    /// Standard normal deviate via the Marsaglia polar method.
    pub fn std_normal_f64(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.next_f64() - 1.0;
            let v = 2.0 * self.next_f64() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let f = (-2.0 * s.ln() / s).sqrt();
                self.spare_normal = Some(v * f);
                return u * f;
            }
        }
    }

    pub fn std_normal<T: Scalar>(&mut self) -> T {
        T::lit(self.std_normal_f64())
    }

    /// Draw from `N(mean, sigma^2 I)`.
    pub fn gaussian_vec<T: Scalar>(&mut self, mean: &[T], sigma: T) -> Result<Vec<T>> {
        if mean.is_empty() {
            return invalid("gaussian mean must have dimension >= 1");
        }
        if !(sigma > T::zero()) {
            return invalid(format!("sigma must be positive, got {sigma}"));
        }
        Ok(mean
            .iter()
            .map(|&m| m + sigma * self.std_normal::<T>())
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn draws(s: &mut RngStream, n: usize) -> Vec<u64> {
        (0..n).map(|_| s.next_u64()).collect()
    }

    #[test]
    fn same_seed_same_sequence() {
        let a = draws(&mut RngStream::new(42), 1000);
        let b = draws(&mut RngStream::new(42), 1000);
        assert_eq!(a, b);
    }

    #[test]
    fn adjacent_seeds_differ() {
        let differing = (0..1000u64)
            .filter(|&s| RngStream::new(s).next_u64() != RngStream::new(s + 1).next_u64())
            .count();
        assert_eq!(differing, 1000);
    }

    #[test]
    fn zero_seed_is_ordinary() {
        let mut s = RngStream::new(0);
        let xs = draws(&mut s, 64);
        assert!(xs.iter().any(|&x| x != 0));
        assert_eq!(s.master_seed(), 0);
        assert_eq!(s.substream_index(), 0);
    }

    #[test]
    fn split_depends_on_lineage_not_state() {
        let parent = RngStream::new(9);
        let mut advanced = parent.clone();
        draws(&mut advanced, 17);
        assert_eq!(
            draws(&mut parent.split(5), 100),
            draws(&mut advanced.split(5), 100)
        );
        assert_ne!(
            draws(&mut parent.split(1), 100),
            draws(&mut parent.split(2), 100)
        );
        let child = parent.split(7);
        assert_eq!(child.substream_index(), 7);
        assert_eq!(child.master_seed(), 9);
    }

    #[test]
    fn substreams_uncorrelated() {
        let root = RngStream::new(2024);
        let (mut a, mut b) = (root.split(1), root.split(2));
        let n = 100_000;
        let xs: Vec<f64> = (0..n).map(|_| a.std_normal_f64()).collect();
        let ys: Vec<f64> = (0..n).map(|_| b.std_normal_f64()).collect();
        let corr = xs.iter().zip(&ys).map(|(x, y)| x * y).sum::<f64>() / n as f64;
        assert!(corr.abs() < 0.01, "corr = {corr}");
    }

    #[test]
    fn normal_moments() {
        let mut s = RngStream::new(1).split(7);
        let n = 1_000_000;
        let xs: Vec<f64> = (0..n).map(|_| s.std_normal_f64()).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let below0 = xs.iter().filter(|&&x| x < 0.0).count() as f64 / n as f64;
        let below = xs.iter().filter(|&&x| x < -1.6).count() as f64 / n as f64;
        assert!(mean.abs() < 0.005, "mean {mean}");
        assert!((var - 1.0).abs() < 0.01, "var {var}");
        assert!((below0 - 0.5).abs() < 0.002, "{below0}");
        // Phi(-1.6) = 0.0547993 (quadrature)
        assert!((below - 0.0547993).abs() < 0.001, "{below}");
    }

    #[test]
    fn gaussian_vec_tiny_sigma_returns_mean() {
        let mut s = RngStream::new(3);
        let mean = [1.5f64, -2.0, 0.25];
        let x = s.gaussian_vec(&mean, 1e-12).unwrap();
        for (a, b) in x.iter().zip(&mean) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn gaussian_vec_moments() {
        let mut s = RngStream::new(11);
        let n = 100_000;
        let mut sum = [0.0f64; 2];
        for _ in 0..n {
            let x = s.gaussian_vec(&[2.0, 0.0], 1.0).unwrap();
            sum[0] += x[0];
            sum[1] += x[1];
        }
        assert!((sum[0] / n as f64 - 2.0).abs() < 0.02);
        assert!((sum[1] / n as f64).abs() < 0.02);

        let mut s = RngStream::new(12);
        let pts: Vec<Vec<f64>> = (0..n)
            .map(|_| s.gaussian_vec(&[0.0; 3], 1.0).unwrap())
            .collect();
        let m: Vec<f64> = (0..3)
            .map(|j| pts.iter().map(|p| p[j]).sum::<f64>() / n as f64)
            .collect();
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let c = pts.iter().map(|p| (p[i] - m[i]) * (p[j] - m[j])).sum::<f64>() / n as f64;
            assert!(c.abs() < 0.02, "cov[{i},{j}] = {c}");
        }
    }

    #[test]
    fn gaussian_vec_rejects_bad_input() {
        let mut s = RngStream::new(0);
        assert!(s.gaussian_vec(&[0.0], 0.0).is_err());
        assert!(s.gaussian_vec(&[0.0], -1.0).is_err());
        assert!(s.gaussian_vec::<f64>(&[], 1.0).is_err());
    }

    #[test]
    fn below_is_in_range() {
        let mut s = RngStream::new(5);
        let mut seen = [false; 7];
        for _ in 0..1000 {
            seen[s.below(7)] = true;
        }
        assert!(seen.iter().all(|&b| b));
    }
}
