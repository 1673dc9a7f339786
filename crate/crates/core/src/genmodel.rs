//! The long-tail data distribution `D_p` and its sampler.
//!
//! Classes are balanced. The positive class is `N(mu, sigma^2 I)`. The
//! negative class is a two-component mixture: a majority component
//! `N(-mu, sigma^2 I)` with weight `p` and a minority (tail) component
//! `N(3 mu, sigma^2 I)` with weight `1 - p`.

use std::fmt;
use std::fs;
use std::path::Path;

use crate::error::{check_dim, invalid, Error, Result};
use crate::numerics::RngStream;
use crate::scalar::{norm, scaled, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Neg,
    Pos,
}

impl Label {
    pub fn as_i8(self) -> i8 {
        match self {
            Label::Neg => -1,
            Label::Pos => 1,
        }
    }

    pub fn from_i64(v: i64) -> Option<Self> {
        match v {
            -1 => Some(Label::Neg),
            1 => Some(Label::Pos),
            _ => None,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Label::Neg => Label::Pos,
            Label::Pos => Label::Neg,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_i8())
    }
}

/// Latent mixture component a point was drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Component {
    /// The positive class, centered at `mu`.
    Positive = 0,
    /// Negative majority, centered at `-mu`.
    Majority = 1,
    /// Negative minority (tail), centered at `3 mu`.
    Minority = 2,
}

impl Component {
    pub const ALL: [Component; 3] = [Component::Positive, Component::Majority, Component::Minority];

    pub fn label(self) -> Label {
        match self {
            Component::Positive => Label::Pos,
            _ => Label::Neg,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(k: i64) -> Option<Self> {
        match k {
            0 => Some(Component::Positive),
            1 => Some(Component::Majority),
            2 => Some(Component::Minority),
            _ => None,
        }
    }

    /// Multiple of `mu` at which the component is centered.
    pub fn center_coef<T: Scalar>(self) -> T {
        match self {
            Component::Positive => T::one(),
            Component::Majority => -T::one(),
            Component::Minority => T::lit(3.0),
        }
    }
}

/// Parameters of `D_p`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelParams<T> {
    mu: Vec<T>,
    sigma: T,
    p: T,
}

pub(crate) fn check_p<T: Scalar>(p: T) -> Result<()> {
    if p > T::lit(0.5) && p < T::one() {
        Ok(())
    } else {
        invalid(format!("p must lie in (1/2, 1), got {p}"))
    }
}

pub(crate) fn check_sigma<T: Scalar>(sigma: T) -> Result<()> {
    if sigma > T::zero() && sigma.is_finite() {
        Ok(())
    } else {
        invalid(format!("sigma must be positive, got {sigma}"))
    }
}

impl<T: Scalar> ModelParams<T> {
    pub fn new(mu: Vec<T>, sigma: T, p: T) -> Result<Self> {
        if mu.is_empty() {
            return invalid("mu must have dimension >= 1");
        }
        if mu.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("mu".into()));
        }
        if !(norm(&mu) > T::zero()) {
            return invalid("mu must be nonzero");
        }
        check_sigma(sigma)?;
        check_p(p)?;
        Ok(Self { mu, sigma, p })
    }

    pub fn d(&self) -> usize {
        self.mu.len()
    }

    pub fn mu(&self) -> &[T] {
        &self.mu
    }

    pub fn sigma(&self) -> T {
        self.sigma
    }

    pub fn p(&self) -> T {
        self.p
    }

    /// Separation-to-noise ratio `|mu| / sigma`.
    pub fn nu(&self) -> T {
        norm(&self.mu) / self.sigma
    }

    /// Center of the single Gaussian LDA fits to the negative class,
    /// `-(4p - 3) mu`.
    pub fn mu_minus(&self) -> Vec<T> {
        scaled(&self.mu, -(T::lit(4.0) * self.p - T::lit(3.0)))
    }

    pub fn component_mean(&self, k: Component) -> Vec<T> {
        scaled(&self.mu, k.center_coef())
    }

    /// Same mean and noise, different majority fraction.
    pub fn with_p(&self, p: T) -> Result<Self> {
        Self::new(self.mu.clone(), self.sigma, p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `(1, ..., 1) / sqrt(d)`
    Fixed,
    /// Normalized standard Gaussian draw.
    Random,
}

pub fn make_params<T: Scalar>(
    d: usize,
    mu_norm: T,
    sigma: T,
    p: T,
    direction: Direction,
    stream: Option<&mut RngStream>,
) -> Result<ModelParams<T>> {
    if d == 0 {
        return invalid("dimension must be >= 1");
    }
    if !(mu_norm > T::zero() && mu_norm.is_finite()) {
        return invalid(format!("mu_norm must be positive, got {mu_norm}"));
    }
    check_sigma(sigma)?;
    check_p(p)?;
    let unit: Vec<T> = match direction {
        Direction::Fixed => vec![T::one() / T::from_usize_lossy(d).sqrt(); d],
        Direction::Random => {
            let stream =
                stream.ok_or_else(|| Error::InvalidParameter("random direction needs a stream".into()))?;
            let g: Vec<T> = loop {
                let g: Vec<T> = (0..d).map(|_| stream.std_normal::<T>()).collect();
                if norm(&g) > T::zero() {
                    break g;
                }
            };
            let n = norm(&g);
            g.into_iter().map(|v| v / n).collect()
        }
    };
    ModelParams::new(scaled(&unit, mu_norm), sigma, p)
}

#[derive(Clone, Debug, PartialEq)]
pub struct LabeledPoint<T> {
    pub x: Vec<T>,
    pub y: Label,
    pub k: Component,
}

impl<T: Scalar> LabeledPoint<T> {
    pub fn new(x: Vec<T>, y: Label, k: Component) -> Result<Self> {
        if k.label() != y {
            return invalid(format!("label {y} inconsistent with component {}", k.index()));
        }
        Ok(Self { x, y, k })
    }

    pub fn from_component(x: Vec<T>, k: Component) -> Self {
        Self { x, y: k.label(), k }
    }
}

/// Where a sampled dataset came from.
#[derive(Clone, Debug, PartialEq)]
pub struct Provenance<T> {
    pub params: ModelParams<T>,
    pub master_seed: u64,
    pub substream_index: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dataset<T> {
    points: Vec<LabeledPoint<T>>,
    d: usize,
    provenance: Option<Provenance<T>>,
}

impl<T: Scalar> Dataset<T> {
    pub fn new(d: usize, points: Vec<LabeledPoint<T>>) -> Result<Self> {
        if d == 0 {
            return invalid("dimension must be >= 1");
        }
        for p in &points {
            check_dim(d, p.x.len())?;
        }
        Ok(Self {
            points,
            d,
            provenance: None,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[LabeledPoint<T>] {
        &self.points
    }

    pub fn provenance(&self) -> Option<&Provenance<T>> {
        self.provenance.as_ref()
    }

    /// Feature vectors of one class.
    pub fn class_points(&self, y: Label) -> Vec<&[T]> {
        self.points
            .iter()
            .filter(|p| p.y == y)
            .map(|p| p.x.as_slice())
            .collect()
    }

    /// Copy without the point at `index`.
    pub fn without(&self, index: usize) -> Self {
        self.filtered(|i| i != index)
    }

    /// Copy keeping points whose index satisfies `keep`, in order.
    pub fn filtered(&self, mut keep: impl FnMut(usize) -> bool) -> Self {
        Self {
            points: self
                .points
                .iter()
                .enumerate()
                .filter(|(i, _)| keep(*i))
                .map(|(_, p)| p.clone())
                .collect(),
            d: self.d,
            provenance: None,
        }
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        for j in 0..self.d {
            out.push_str(&format!("x{j},"));
        }
        out.push_str("y,k\n");
        for p in &self.points {
            for v in &p.x {
                out.push_str(&format!("{v},"));
            }
            out.push_str(&format!("{},{}\n", p.y, p.k.index()));
        }
        out
    }

    pub fn from_csv_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().enumerate();
        let (_, header) = lines.next().ok_or(Error::Empty("dataset csv"))?;
        let cols: Vec<&str> = header.split(',').collect();
        let d = cols.len().saturating_sub(2);
        let expected: Vec<String> = (0..d)
            .map(|j| format!("x{j}"))
            .chain(["y".to_string(), "k".to_string()])
            .collect();
        if d == 0 || cols != expected {
            return Err(Error::Parse {
                line: 1,
                msg: format!("bad header {header:?}"),
            });
        }
        let mut points = Vec::new();
        for (i, line) in lines {
            if line.is_empty() {
                continue;
            }
            let perr = |msg: String| Error::Parse { line: i + 1, msg };
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != d + 2 {
                return Err(perr(format!("expected {} fields, got {}", d + 2, f.len())));
            }
            let x = f[..d]
                .iter()
                .map(|s| s.parse::<T>().map_err(|_| perr(format!("bad float {s:?}"))))
                .collect::<Result<Vec<T>>>()?;
            let y = f[d]
                .parse::<i64>()
                .ok()
                .and_then(Label::from_i64)
                .ok_or_else(|| perr(format!("bad label {:?}", f[d])))?;
            let k = f[d + 1]
                .parse::<i64>()
                .ok()
                .and_then(Component::from_index)
                .ok_or_else(|| perr(format!("bad component {:?}", f[d + 1])))?;
            points.push(LabeledPoint::new(x, y, k).map_err(|e| perr(e.to_string()))?);
        }
        Self::new(d, points)
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_csv_string()).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let s = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_csv_str(&s)
    }
}

/// Draw `n` i.i.d. points from `D_p`.
///
/// Stream consumption order: first, for every point, one uniform for the
/// label and (negatives only) one uniform for the component; then all
/// feature vectors in point order.
pub fn sample_dataset<T: Scalar>(
    params: &ModelParams<T>,
    n: usize,
    stream: &mut RngStream,
) -> Dataset<T> {
    let p = params.p.as_f64();
    let comps: Vec<Component> = (0..n)
        .map(|_| {
            if stream.next_f64() < 0.5 {
                Component::Positive
            } else if stream.next_f64() < p {
                Component::Majority
            } else {
                Component::Minority
            }
        })
        .collect();
    let means: Vec<Vec<T>> = Component::ALL
        .iter()
        .map(|&k| params.component_mean(k))
        .collect();
    let points = comps
        .into_iter()
        .map(|k| {
            let x = stream
                .gaussian_vec(&means[k.index()], params.sigma)
                .expect("validated params");
            LabeledPoint::from_component(x, k)
        })
        .collect();
    Dataset {
        points,
        d: params.d(),
        provenance: Some(Provenance {
            params: params.clone(),
            master_seed: stream.master_seed(),
            substream_index: stream.substream_index(),
        }),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubpopRecord<T> {
    pub component: Component,
    pub count: usize,
    /// `None` when the subpopulation is empty.
    pub mean: Option<Vec<T>>,
}

/// Counts and sample means for each `(y, k)` subpopulation, indexed by
/// component.
pub fn subpopulation_stats<T: Scalar>(dataset: &Dataset<T>) -> Result<[SubpopRecord<T>; 3]> {
    if dataset.is_empty() {
        return Err(Error::Empty("dataset"));
    }
    let d = dataset.d();
    let mut sums = [vec![T::zero(); d], vec![T::zero(); d], vec![T::zero(); d]];
    let mut counts = [0usize; 3];
    for p in dataset.points() {
        let i = p.k.index();
        counts[i] += 1;
        for (s, &v) in sums[i].iter_mut().zip(&p.x) {
            *s = *s + v;
        }
    }
    Ok(Component::ALL.map(|k| {
        let i = k.index();
        let mean = (counts[i] > 0).then(|| {
            let c = T::from_usize_lossy(counts[i]);
            sums[i].iter().map(|&s| s / c).collect()
        });
        SubpopRecord {
            component: k,
            count: counts[i],
            mean,
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn defaults() -> ModelParams<f64> {
        make_params(50, 2.0, 1.0, 0.9, Direction::Fixed, None).unwrap()
    }

    #[test]
    fn fixed_direction_normalization() {
        let p = make_params(2, 2f64.sqrt(), 1.0, 0.75, Direction::Fixed, None).unwrap();
        assert!((p.mu()[0] - 1.0).abs() < 1e-15 && (p.mu()[1] - 1.0).abs() < 1e-15);
        let p = defaults();
        for &v in p.mu() {
            assert!((v - 0.282842712474619).abs() < 1e-12);
        }
    }

    #[test]
    fn random_direction_has_requested_norm() {
        let mut s = RngStream::new(7);
        let p = make_params::<f64>(50, 2.0, 1.0, 0.9, Direction::Random, Some(&mut s)).unwrap();
        assert!((norm(p.mu()) - 2.0).abs() < 1e-12);
        assert!(make_params(50, 2.0, 1.0, 0.9, Direction::Random, None).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(make_params(2, 1.0, 1.0, 0.5, Direction::Fixed, None).is_err());
        assert!(make_params(2, 1.0, 1.0, 1.0, Direction::Fixed, None).is_err());
        assert!(make_params(2, 1.0, 0.0, 0.9, Direction::Fixed, None).is_err());
        assert!(make_params(2, 0.0, 1.0, 0.9, Direction::Fixed, None).is_err());
        assert!(make_params(0, 1.0, 1.0, 0.9, Direction::Fixed, None).is_err());
        assert!(ModelParams::new(vec![0.0, 0.0], 1.0, 0.9).is_err());
    }

    #[test]
    fn derived_quantities() {
        let p = ModelParams::new(vec![3.0f64, 4.0], 2.0, 0.9).unwrap();
        assert!((p.nu() - 2.5).abs() < 1e-15);
        let mm = p.mu_minus();
        assert!((mm[0] + 1.8).abs() < 1e-12 && (mm[1] + 2.4).abs() < 1e-12);
    }

    #[test]
    fn empty_sample() {
        let ds = sample_dataset(&defaults(), 0, &mut RngStream::new(1));
        assert!(ds.is_empty());
        assert_eq!(ds.d(), 50);
        assert!(subpopulation_stats(&ds).is_err());
    }

    #[test]
    fn label_and_component_frequencies() {
        let params = defaults();
        let n = 100_000;
        let ds = sample_dataset(&params, n, &mut RngStream::new(2));
        let stats = subpopulation_stats(&ds).unwrap();
        let pos = stats[0].count as f64 / n as f64;
        let neg = (stats[1].count + stats[2].count) as f64;
        assert!((pos - 0.5).abs() < 0.005, "{pos}");
        assert!((stats[2].count as f64 / neg - 0.1).abs() < 0.005);
        let m3 = params.component_mean(Component::Minority);
        let got = stats[2].mean.as_ref().unwrap();
        let worst = got.iter().zip(&m3).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(worst < 0.05, "{worst}");
    }

    #[test]
    fn stats_on_hand_built_points() {
        let pts = vec![
            LabeledPoint::from_component(vec![1.0, 2.0], Component::Positive),
            LabeledPoint::from_component(vec![-1.0, 0.5], Component::Majority),
            LabeledPoint::from_component(vec![3.0, 3.0], Component::Minority),
        ];
        let ds = Dataset::new(2, pts.clone()).unwrap();
        let st = subpopulation_stats(&ds).unwrap();
        for (rec, p) in st.iter().zip(&pts) {
            assert_eq!(rec.count, 1);
            assert_eq!(rec.mean.as_deref(), Some(p.x.as_slice()));
        }
    }

    #[test]
    fn majority_mean_near_minus_mu() {
        let params = defaults();
        let ds = sample_dataset(&params, 10_000, &mut RngStream::new(4));
        let st = subpopulation_stats(&ds).unwrap();
        assert_eq!(st.iter().map(|r| r.count).sum::<usize>(), 10_000);
        let m = st[1].mean.as_ref().unwrap();
        let dev: f64 = m
            .iter()
            .zip(params.mu())
            .map(|(a, b)| (a + b) * (a + b))
            .sum::<f64>()
            .sqrt();
        // sqrt(d / n_k) ~ 0.105
        assert!(dev < 0.14, "{dev}");
    }

    #[test]
    fn inconsistent_label_rejected() {
        assert!(LabeledPoint::new(vec![0.0], Label::Pos, Component::Minority).is_err());
        assert!(Dataset::new(2, vec![LabeledPoint::from_component(vec![0.0], Component::Positive)]).is_err());
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let ds = sample_dataset(&defaults(), 200, &mut RngStream::new(8));
        let s = ds.to_csv_string();
        assert!(s.starts_with("x0,x1,"));
        assert!(s.lines().next().unwrap().ends_with("x49,y,k"));
        let back = Dataset::<f64>::from_csv_str(&s).unwrap();
        assert_eq!(back.points(), ds.points());
    }

    #[test]
    fn csv_rejects_garbage() {
        assert!(Dataset::<f64>::from_csv_str("").is_err());
        assert!(Dataset::<f64>::from_csv_str("a,b,c\n").is_err());
        assert!(Dataset::<f64>::from_csv_str("x0,y,k\n1.0,1,2\n").is_err());
        assert!(Dataset::<f64>::from_csv_str("x0,y,k\n1.0,0,0\n").is_err());
        assert!(Dataset::<f64>::from_csv_str("x0,y,k\nfoo,1,0\n").is_err());
    }
}
