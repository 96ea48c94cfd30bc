//! Gauss linking numbers of two round spheres in R^n, by Monte Carlo or by
//! product quadrature over angular charts.
//!
//! The pullback of the normalized volume form of `S^{n-1}` under
//! `φ(a, s) = (s - a)/|s - a|` has density `det[w, -∂a, ∂s] / |w|^n` in
//! chart coordinates, where `w = s - a` and the columns run over the chart
//! derivatives of both spheres. Dividing by `vol(S^{n-1})` gives the degree.
//! Floating point is confined to this module.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use nalgebra::{DMatrix, DVector};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

pub const MIN_MC_SAMPLES: u64 = 10_000;
/// Samples per independent random stream. Fixed so that results do not
/// depend on the number of worker threads.
pub const BATCH: u64 = 1 << 14;
pub const MAX_QUADRATURE_N: usize = 6;

#[derive(Debug, Error, PartialEq)]
pub enum CsiError {
    #[error("need n - j >= 2 and j >= 1, got n = {n}, j = {j}")]
    DegenerateDimensions { n: usize, j: usize },
    #[error("the spheres intersect (offset {offset})")]
    SpheresIntersect { offset: f64 },
    #[error("monte carlo needs at least {min} samples, got {samples}")]
    TooFewSamples { samples: u64, min: u64 },
    #[error("product quadrature is only available for n <= {max}, got {n}")]
    QuadratureUnavailable { n: usize, max: usize },
    #[error("rotation must be an orthogonal {n}x{n} matrix")]
    BadRotation { n: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    MonteCarlo,
    ProductQuadrature,
}

/// The sphere A of dimension `n - j - 1` lives in the coordinates
/// `x1, x3, x4, ..., x_{n-j+1}` around `(0, 0, offset, 0, ...)`. The sphere S
/// of dimension `j` lives in `x2, x3, x_{n-j+2}, ..., x_n` around the origin.
/// Both have radius 1. `offset = 1` is the linked configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereConfig {
    pub n: usize,
    pub j: usize,
    pub offset: f64,
    pub reverse_a: bool,
    pub reverse_s: bool,
    /// Applied to both spheres.
    pub rotation: Option<DMatrix<f64>>,
}

impl SphereConfig {
    pub fn new(n: usize, j: usize) -> Result<Self, CsiError> {
        Self::with_offset(n, j, 1.0)
    }

    pub fn with_offset(n: usize, j: usize, offset: f64) -> Result<Self, CsiError> {
        if j < 1 || n < j + 2 {
            return Err(CsiError::DegenerateDimensions { n, j });
        }
        // A meets the span of S only at x3 = offset ± 1, where S needs x3 = ±1.
        if [-2.0, 0.0, 2.0].iter().any(|c| (offset - c).abs() < 1e-9) {
            return Err(CsiError::SpheresIntersect { offset });
        }
        Ok(SphereConfig { n, j, offset, reverse_a: false, reverse_s: false, rotation: None })
    }

    pub fn rotated(mut self, r: DMatrix<f64>) -> Result<Self, CsiError> {
        let n = self.n;
        if r.nrows() != n || r.ncols() != n || (r.transpose() * &r - DMatrix::identity(n, n)).norm() > 1e-9 {
            return Err(CsiError::BadRotation { n });
        }
        self.rotation = Some(r);
        Ok(self)
    }

    fn dim_a(&self) -> usize {
        self.n - self.j - 1
    }

    fn axes_a(&self) -> Vec<usize> {
        let mut v = vec![0, 2];
        v.extend(3..self.n - self.j + 1);
        v
    }

    fn axes_s(&self) -> Vec<usize> {
        let mut v = vec![1, 2];
        v.extend(self.n - self.j + 1..self.n);
        v
    }

    /// Number of chart angles, `n - 1`.
    pub fn chart_dim(&self) -> usize {
        self.n - 1
    }

    /// Box of chart angles: `[0, π]` except the last angle of each sphere,
    /// which runs over `[0, 2π]`.
    fn box_lengths(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for d in [self.dim_a(), self.j] {
            for i in 0..d {
                out.push(if i + 1 == d { 2.0 * PI } else { PI });
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinkingEstimate {
    pub n: usize,
    pub j: usize,
    pub offset: f64,
    pub method: Method,
    pub value: f64,
    /// Standard error for Monte Carlo; for quadrature, the change against
    /// the rule with half as many nodes per axis.
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

impl LinkingEstimate {
    pub fn within(&self, target: f64, sigmas: f64) -> bool {
        (self.value - target).abs() <= sigmas * self.stderr
    }

    /// The nearest of `-1, 0, 1` when it lies within `sigmas` error bars.
    pub fn integer(&self, sigmas: f64) -> Option<i32> {
        [-1, 0, 1].into_iter().find(|&t| self.within(t as f64, sigmas))
    }
}

/// `vol(S^d)`.
pub fn sphere_volume(d: usize) -> f64 {
    match d {
        0 => 2.0,
        1 => 2.0 * PI,
        _ => 2.0 * PI / (d as f64 - 1.0) * sphere_volume(d - 2),
    }
}

/// Point of the unit `d`-sphere in hyperspherical coordinates and its chart
/// derivatives, `d + 1` coordinates each.
fn chart(t: &[f64]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let d = t.len();
    let (s, c): (Vec<f64>, Vec<f64>) = t.iter().map(|x| x.sin_cos()).unzip();
    let mut x = vec![0.0; d + 1];
    let mut dx = vec![vec![0.0; d + 1]; d];
    for m in 0..=d {
        // x_m = sin t_1 ... sin t_m · (cos t_{m+1} or 1 when m = d).
        let last = if m < d { c[m] } else { 1.0 };
        x[m] = s[..m].iter().product::<f64>() * last;
        for (i, dxi) in dx.iter_mut().enumerate() {
            dxi[m] = if i < m {
                let p: f64 = (0..m).map(|l| if l == i { c[l] } else { s[l] }).product();
                p * last
            } else if i == m && m < d {
                -s[..m].iter().product::<f64>() * s[m]
            } else {
                0.0
            };
        }
    }
    (x, dx)
}

/// Integrand over the angle box, already divided by `vol(S^{n-1})`.
/// `antipodal` composes φ with `x ↦ -x`.
fn density(cfg: &SphereConfig, angles: &[f64], antipodal: bool) -> f64 {
    let n = cfg.n;
    let da = cfg.dim_a();
    let (pa, ta) = chart(&angles[..da]);
    let (ps, ts) = chart(&angles[da..]);
    let embed = |axes: &[usize], local: &[f64], centre: f64| {
        let mut v = DVector::zeros(n);
        for (&ax, &x) in axes.iter().zip(local) {
            v[ax] = x;
        }
        v[2] += centre;
        v
    };
    let (axa, axs) = (cfg.axes_a(), cfg.axes_s());
    let a = embed(&axa, &pa, cfg.offset);
    let s = embed(&axs, &ps, 0.0);
    let mut w = s - a;
    let mut cols: Vec<DVector<f64>> = Vec::with_capacity(n);
    for (i, t) in ta.iter().enumerate() {
        let sign = if cfg.reverse_a && i == 0 { 1.0 } else { -1.0 };
        cols.push(embed(&axa, t, 0.0) * sign);
    }
    for (i, t) in ts.iter().enumerate() {
        let sign = if cfg.reverse_s && i == 0 { -1.0 } else { 1.0 };
        cols.push(embed(&axs, t, 0.0) * sign);
    }
    if let Some(r) = &cfg.rotation {
        w = r * w;
        for c in cols.iter_mut() {
            *c = r * &*c;
        }
    }
    if antipodal {
        w = -w;
        for c in cols.iter_mut() {
            *c = -&*c;
        }
    }
    let r = w.norm();
    let mut m = DMatrix::zeros(n, n);
    m.set_column(0, &w);
    for (i, c) in cols.iter().enumerate() {
        m.set_column(i + 1, c);
    }
    m.determinant() / r.powi(n as i32) / sphere_volume(n - 1)
}

#[derive(Clone, Copy, Default)]
struct Moments {
    sum: f64,
    sum_sq: f64,
    count: u64,
}

fn pairwise(xs: &[Moments]) -> Moments {
    match xs.len() {
        0 => Moments::default(),
        1 => xs[0],
        len => {
            let (l, r) = xs.split_at(len / 2);
            let (a, b) = (pairwise(l), pairwise(r));
            Moments { sum: a.sum + b.sum, sum_sq: a.sum_sq + b.sum_sq, count: a.count + b.count }
        }
    }
}

fn monte_carlo(cfg: &SphereConfig, samples: u64, seed: u64, antipodal: bool) -> (f64, f64) {
    let lengths = cfg.box_lengths();
    let volume: f64 = lengths.iter().product();
    let batches = samples.div_ceil(BATCH);
    let parts: Vec<Moments> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b);
            let todo = BATCH.min(samples - b * BATCH);
            let mut angles = vec![0.0; lengths.len()];
            let mut vals = Vec::with_capacity(todo as usize);
            for _ in 0..todo {
                for (x, l) in angles.iter_mut().zip(&lengths) {
                    *x = rng.random::<f64>() * l;
                }
                vals.push(density(cfg, &angles, antipodal) * volume);
            }
            let sums: Vec<Moments> = vals.iter().map(|&v| Moments { sum: v, sum_sq: v * v, count: 1 }).collect();
            pairwise(&sums)
        })
        .collect();
    let m = pairwise(&parts);
    let n = m.count as f64;
    let mean = m.sum / n;
    let var = (m.sum_sq / n - mean * mean).max(0.0) * n / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn quadrature(cfg: &SphereConfig, nodes: usize) -> f64 {
    let lengths = cfg.box_lengths();
    let dims = lengths.len();
    let gl = GaussLegendre::new(NonZeroUsize::new(nodes).unwrap());
    // Gauss-Legendre on [0, π]; the periodic angle uses the midpoint rule,
    // which converges spectrally for smooth periodic integrands.
    let rules: Vec<Vec<(f64, f64)>> = lengths
        .iter()
        .map(|&l| {
            if l > PI + 1.0 {
                (0..nodes).map(|i| ((i as f64 + 0.5) * l / nodes as f64, l / nodes as f64)).collect()
            } else {
                gl.as_node_weight_pairs().iter().map(|&(x, w)| ((x + 1.0) * l / 2.0, w * l / 2.0)).collect()
            }
        })
        .collect();
    let total = nodes.pow(dims as u32);
    let values: Vec<f64> = (0..total)
        .into_par_iter()
        .map(|mut idx| {
            let mut angles = vec![0.0; dims];
            let mut weight = 1.0;
            for (d, rule) in rules.iter().enumerate() {
                let (x, w) = rule[idx % nodes];
                idx /= nodes;
                angles[d] = x;
                weight *= w;
            }
            density(cfg, &angles, false) * weight
        })
        .collect();
    let m: Vec<Moments> = values.iter().map(|&v| Moments { sum: v, sum_sq: 0.0, count: 1 }).collect();
    pairwise(&m).sum
}

/// Nodes per axis for a budget of `samples` evaluations.
pub fn quadrature_nodes(cfg: &SphereConfig, samples: u64) -> usize {
    let d = cfg.chart_dim() as f64;
    ((samples as f64).powf(1.0 / d).floor() as usize).max(4)
}

pub fn gauss_linking(cfg: &SphereConfig, samples: u64, seed: u64, method: Method) -> Result<LinkingEstimate, CsiError> {
    let (value, stderr, used) = match method {
        Method::MonteCarlo => {
            if samples < MIN_MC_SAMPLES {
                return Err(CsiError::TooFewSamples { samples, min: MIN_MC_SAMPLES });
            }
            let (v, e) = monte_carlo(cfg, samples, seed, false);
            (v, e, samples)
        }
        Method::ProductQuadrature => {
            if cfg.n > MAX_QUADRATURE_N {
                return Err(CsiError::QuadratureUnavailable { n: cfg.n, max: MAX_QUADRATURE_N });
            }
            let m = quadrature_nodes(cfg, samples);
            let fine = quadrature(cfg, m);
            let coarse = quadrature(cfg, m.div_ceil(2));
            (fine, (fine - coarse).abs(), m.pow(cfg.chart_dim() as u32) as u64)
        }
    };
    Ok(LinkingEstimate { n: cfg.n, j: cfg.j, offset: cfg.offset, method, value, stderr, samples: used, seed })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AntipodalReport {
    pub n: usize,
    pub direct: f64,
    pub composed: f64,
    /// `(-1)^n`.
    pub expected_factor: i32,
    pub combined_stderr: f64,
    pub passed: bool,
}

/// Compares the estimate with the one for `-φ`, which should be `(-1)^n`
/// times it. Both use the same samples.
pub fn antipodal_symmetry_check(cfg: &SphereConfig, samples: u64, seed: u64) -> Result<AntipodalReport, CsiError> {
    if samples < MIN_MC_SAMPLES {
        return Err(CsiError::TooFewSamples { samples, min: MIN_MC_SAMPLES });
    }
    let (d, de) = monte_carlo(cfg, samples, seed, false);
    let (c, ce) = monte_carlo(cfg, samples, seed, true);
    let factor = if cfg.n.is_multiple_of(2) { 1 } else { -1 };
    let combined = (de * de + ce * ce).sqrt();
    Ok(AntipodalReport {
        n: cfg.n,
        direct: d,
        composed: c,
        expected_factor: factor,
        combined_stderr: combined,
        passed: (c - factor as f64 * d).abs() <= 3.0 * combined,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_volumes() {
        assert!((sphere_volume(2) - 4.0 * PI).abs() < 1e-12);
        assert!((sphere_volume(3) - 2.0 * PI * PI).abs() < 1e-12);
    }

    #[test]
    fn chart_is_on_the_sphere() {
        let (x, dx) = chart(&[0.3, 1.1, 4.0]);
        assert!((x.iter().map(|v| v * v).sum::<f64>() - 1.0).abs() < 1e-12);
        // Tangent vectors are orthogonal to the position.
        for t in dx {
            assert!(x.iter().zip(&t).map(|(a, b)| a * b).sum::<f64>().abs() < 1e-12);
        }
    }

    #[test]
    fn chart_derivatives_match_differences() {
        let t = [0.7, 2.0, 1.3];
        let (_, dx) = chart(&t);
        for i in 0..3 {
            let mut tp = t;
            tp[i] += 1e-6;
            let (xp, _) = chart(&tp);
            let (x0, _) = chart(&t);
            for m in 0..4 {
                assert!(((xp[m] - x0[m]) / 1e-6 - dx[i][m]).abs() < 1e-5);
            }
        }
    }

    #[test]
    fn degenerate_dimensions_are_rejected() {
        assert_eq!(SphereConfig::new(3, 2), Err(CsiError::DegenerateDimensions { n: 3, j: 2 }));
        assert!(matches!(SphereConfig::with_offset(4, 2, 2.0), Err(CsiError::SpheresIntersect { .. })));
    }

    #[test]
    fn pairwise_sum_is_exact_on_integers() {
        let m: Vec<Moments> = (1..=100).map(|i| Moments { sum: i as f64, sum_sq: 0.0, count: 1 }).collect();
        assert_eq!(pairwise(&m).sum, 5050.0);
    }
}
