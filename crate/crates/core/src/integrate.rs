//! Monte Carlo cross-checks: exponential gauge integrals and hit-rate volumes.
//!
//! Work is split into fixed chunks, each drawing from its own `(seed, chunk)`
//! stream, and chunk results are summed in chunk order, so estimates are
//! reproducible bit for bit regardless of thread count.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Rational;
use crate::polytope::HPolytope;
use crate::random::stream_rng;

pub const CHUNK: usize = 4096;
pub const MIN_SAMPLES: usize = 1000;
/// Integrals are truncated to `T K` with `T = TRUNCATION / p`.
pub const TRUNCATION: f64 = 50.0;

/// Rows `a_i / b_i` in floating point, for fast gauge evaluation.
struct FloatGauge {
    rows: Vec<Vec<f64>>,
}

impl FloatGauge {
    fn new(k: &HPolytope) -> Self {
        let rows = k
            .inequalities()
            .iter()
            .map(|h| h.normal.iter().map(|a| to_f64(&(a / &h.offset))).collect())
            .collect();
        Self { rows }
    }

    fn gauge(&self, x: &[f64]) -> f64 {
        self.rows
            .iter()
            .map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `diff / se`, with `0/0 = 0` for zero-variance estimates.
fn z(diff: f64, se: f64) -> f64 {
    if diff == 0.0 {
        0.0
    } else {
        diff / se
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn chunks(samples: usize) -> Vec<(u64, usize)> {
    (0..samples.div_ceil(CHUNK))
        .map(|c| (c as u64, CHUNK.min(samples - c * CHUNK)))
        .collect()
}

/// Sum and sum of squares of a weight stream.
#[derive(Clone, Copy, Default)]
struct Moments {
    s1: f64,
    s2: f64,
}

impl Moments {
    fn push(&mut self, w: f64) {
        self.s1 += w;
        self.s2 += w * w;
    }

    fn add(self, o: Moments) -> Moments {
        Moments {
            s1: self.s1 + o.s1,
            s2: self.s2 + o.s2,
        }
    }

    /// Mean and standard error of the mean.
    fn summary(self, n: usize) -> (f64, f64) {
        let m = n as f64;
        let mean = self.s1 / m;
        let var = ((self.s2 / m - mean * mean) * m / (m - 1.0)).max(0.0);
        (mean, (var / m).sqrt())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpGaugeEstimate {
    pub dim: usize,
    #[serde(with = "crate::serde_q::scalar")]
    pub power: Rational,
    pub samples: usize,
    pub seed: u64,
    pub estimate: f64,
    pub std_error: f64,
    /// `n! |K| / p^n`.
    #[serde(with = "crate::serde_q::scalar")]
    pub exact_target: Rational,
    pub truncation: f64,
    /// Mass of the integrand outside `T K`, which the estimate omits.
    pub tail_bound: f64,
}

impl ExpGaugeEstimate {
    /// Distance from the exact target in standard errors.
    pub fn z_score(&self) -> f64 {
        z(self.estimate - to_f64(&self.exact_target), self.std_error)
    }
}

/// `∫_{|x|_K > T} e^{-p |x|_K} dx = |K| n ∫_T^∞ r^{n-1} e^{-p r} dr`.
pub fn exp_gauge_tail(n: usize, volume: f64, p: f64, t: f64) -> f64 {
    let mut sum = 0.0;
    for k in 0..n {
        sum += t.powi(k as i32) / (factorial(k) * p.powi((n - k) as i32));
    }
    volume * n as f64 * factorial(n - 1) * (-p * t).exp() * sum
}

/// Estimates `∫_{T K} e^{-p |x|_K} dx`.
///
/// Points are drawn from the product Laplace density with rate `λ = p / R`,
/// `R` the largest l1 norm of a vertex, so `λ |x|_1 <= p |x|_K` and the
/// importance weights stay below `(2/λ)^n`.
pub fn mc_exp_gauge(k: &HPolytope, p: &Rational, samples: usize, seed: u64) -> Result<ExpGaugeEstimate> {
    if !k.origin_is_interior() {
        return Err(Error::OriginNotInterior);
    }
    if !p.is_positive() {
        return Err(Error::Invalid("power must be positive".into()));
    }
    if samples < MIN_SAMPLES {
        return Err(Error::Invalid(format!("need at least {MIN_SAMPLES} samples")));
    }
    let n = k.dim();
    let v = k.vertices()?;
    let volume = v.volume()?;
    let r = v
        .vertices()
        .iter()
        .map(|x| to_f64(&x.iter().map(|c| c.abs()).sum::<Rational>()))
        .fold(0.0, f64::max);
    let pf = to_f64(p);
    let lambda = pf / r;
    let t = TRUNCATION / pf;
    let g = FloatGauge::new(k);
    let log_norm = n as f64 * (2.0 / lambda).ln();

    let moments = chunks(samples)
        .into_par_iter()
        .map(|(c, len)| {
            let mut rng = stream_rng(seed, c);
            let mut m = Moments::default();
            let mut x = vec![0.0; n];
            for _ in 0..len {
                let mut l1 = 0.0;
                for xi in x.iter_mut() {
                    let e = -(1.0 - rng.random::<f64>()).ln() / lambda;
                    *xi = if rng.random_bool(0.5) { e } else { -e };
                    l1 += e;
                }
                let gx = g.gauge(&x);
                let w = if gx <= t {
                    (log_norm + lambda * l1 - pf * gx).exp()
                } else {
                    0.0
                };
                m.push(w);
            }
            m
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Moments::default(), Moments::add);
    let (estimate, std_error) = moments.summary(samples);

    let nf = Rational::from_integer(BigInt::from((1..=n as u64).product::<u64>()));
    let exact_target = nf * &volume / num_traits::pow(p.clone(), n);
    Ok(ExpGaugeEstimate {
        dim: n,
        power: p.clone(),
        samples,
        seed,
        estimate,
        std_error,
        exact_target,
        truncation: t,
        tail_bound: exp_gauge_tail(n, to_f64(&volume), pf, t),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniformSample {
    pub samples: usize,
    pub seed: u64,
    pub box_lo: Vec<f64>,
    pub box_hi: Vec<f64>,
    pub box_volume: f64,
    pub accepted: usize,
    pub acceptance_rate: f64,
    pub volume_estimate: f64,
    pub std_error: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<Vec<f64>>,
}

impl UniformSample {
    pub fn z_score(&self, exact_volume: &Rational) -> f64 {
        z(self.volume_estimate - to_f64(exact_volume), self.std_error)
    }
}

/// Rejection sampling from the exact bounding box of the vertices. The
/// accepted points are uniform in `K`; `acceptance × box volume` estimates `|K|`.
pub fn mc_uniform_in(k: &HPolytope, samples: usize, seed: u64) -> Result<UniformSample> {
    let n = k.dim();
    let v = k.vertices()?;
    let mut lo = v.vertices()[0].clone();
    let mut hi = lo.clone();
    for x in v.vertices() {
        for i in 0..n {
            if x[i] < lo[i] {
                lo[i] = x[i].clone();
            }
            if x[i] > hi[i] {
                hi[i] = x[i].clone();
            }
        }
    }
    let box_volume = to_f64(&(0..n).map(|i| &hi[i] - &lo[i]).product::<Rational>());
    let lo: Vec<f64> = lo.iter().map(to_f64).collect();
    let hi: Vec<f64> = hi.iter().map(to_f64).collect();
    let rows: Vec<(Vec<f64>, f64)> = k
        .inequalities()
        .iter()
        .map(|h| (h.normal.iter().map(to_f64).collect(), to_f64(&h.offset)))
        .collect();

    let points: Vec<Vec<f64>> = chunks(samples)
        .into_par_iter()
        .map(|(c, len)| {
            let mut rng = stream_rng(seed, c);
            let mut acc = Vec::new();
            for _ in 0..len {
                let x: Vec<f64> = (0..n).map(|i| lo[i] + (hi[i] - lo[i]) * rng.random::<f64>()).collect();
                let inside = rows
                    .iter()
                    .all(|(a, b)| a.iter().zip(&x).map(|(p, q)| p * q).sum::<f64>() <= *b);
                if inside {
                    acc.push(x);
                }
            }
            acc
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();

    let accepted = points.len();
    let rate = if samples == 0 { 0.0 } else { accepted as f64 / samples as f64 };
    let std_error = if samples == 0 {
        0.0
    } else {
        box_volume * (rate * (1.0 - rate) / samples as f64).sqrt()
    };
    Ok(UniformSample {
        samples,
        seed,
        box_lo: lo,
        box_hi: hi,
        box_volume,
        accepted,
        acceptance_rate: rate,
        volume_estimate: rate * box_volume,
        std_error,
        points,
    })
}
