use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::EncodingError;
use crate::linalg::{squared_distance, Matrix};

pub const DEFAULT_VARIANCE_FLOOR: f64 = 1e-6;
const WEIGHT_SUM_TOL: f64 = 1e-9;
const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// Diagonal-covariance Gaussian mixture.
#[derive(Debug, Clone, PartialEq)]
pub struct GmmModel {
    weights: Vec<f64>,
    means: Vec<Vec<f64>>,
    variances: Vec<Vec<f64>>,
    variance_floor: f64,
}

impl GmmModel {
    pub fn new(
        weights: Vec<f64>,
        means: Vec<Vec<f64>>,
        variances: Vec<Vec<f64>>,
        variance_floor: f64,
    ) -> Result<Self, EncodingError> {
        let k = weights.len();
        if k == 0 {
            return Err(EncodingError::Empty("weights"));
        }
        for (what, len) in [("means", means.len()), ("variances", variances.len())] {
            if len != k {
                return Err(EncodingError::DimensionMismatch {
                    what,
                    expected: k,
                    found: len,
                });
            }
        }
        let d = means[0].len();
        if d == 0 {
            return Err(EncodingError::Empty("means"));
        }
        for (what, rows) in [("means", &means), ("variances", &variances)] {
            if let Some(bad) = rows.iter().find(|r| r.len() != d) {
                return Err(EncodingError::DimensionMismatch {
                    what,
                    expected: d,
                    found: bad.len(),
                });
            }
        }
        if weights.iter().any(|&w| !(w > 0.0)) {
            return Err(EncodingError::InvalidField {
                field: "weights",
                reason: "every weight must be positive",
            });
        }
        if libm::fabs(weights.iter().sum::<f64>() - 1.0) > WEIGHT_SUM_TOL {
            return Err(EncodingError::InvalidField {
                field: "weights",
                reason: "weights must sum to 1",
            });
        }
        if !(variance_floor > 0.0) {
            return Err(EncodingError::InvalidField {
                field: "variance_floor",
                reason: "must be positive",
            });
        }
        if variances.iter().flatten().any(|&v| !(v >= variance_floor)) {
            return Err(EncodingError::InvalidField {
                field: "variances",
                reason: "variance below floor",
            });
        }
        if means.iter().flatten().any(|m| !m.is_finite()) {
            return Err(EncodingError::InvalidField {
                field: "means",
                reason: "non-finite value",
            });
        }
        Ok(Self {
            weights,
            means,
            variances,
            variance_floor,
        })
    }

    pub fn components(&self) -> usize {
        self.weights.len()
    }

    pub fn dim(&self) -> usize {
        self.means[0].len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn means(&self) -> &[Vec<f64>] {
        &self.means
    }

    pub fn variances(&self) -> &[Vec<f64>] {
        &self.variances
    }

    pub fn variance_floor(&self) -> f64 {
        self.variance_floor
    }

    /// `ln(w_k) + ln N(x | μ_k, diag σ²_k)` for every component.
    pub fn log_joint(&self, x: &[f64]) -> Vec<f64> {
        self.weights
            .iter()
            .zip(&self.means)
            .zip(&self.variances)
            .map(|((w, mu), var)| {
                let mut acc = libm::log(*w);
                for ((xi, mi), vi) in x.iter().zip(mu).zip(var) {
                    let diff = xi - mi;
                    acc -= 0.5 * (LN_2PI + libm::log(*vi) + diff * diff / vi);
                }
                acc
            })
            .collect()
    }
}

pub(crate) fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + libm::log(values.iter().map(|v| libm::exp(v - max)).sum::<f64>())
}

#[derive(Debug, Clone, PartialEq)]
pub struct GmmFitConfig {
    pub components: usize,
    pub iterations: usize,
    pub variance_floor: f64,
    pub seed: u64,
}

impl Default for GmmFitConfig {
    fn default() -> Self {
        Self {
            components: 256,
            iterations: 100,
            variance_floor: DEFAULT_VARIANCE_FLOOR,
            seed: 0,
        }
    }
}

/// Plain EM from a k-means++ initialization.
pub fn fit_gmm(data: &Matrix, cfg: &GmmFitConfig) -> Result<GmmModel, EncodingError> {
    let (n, d) = (data.rows(), data.cols());
    let k = cfg.components;
    if k == 0 {
        return Err(EncodingError::InvalidField {
            field: "components",
            reason: "must be positive",
        });
    }
    if n < k {
        return Err(EncodingError::InsufficientRows { needed: k, got: n });
    }
    if d == 0 {
        return Err(EncodingError::Empty("descriptor dimension"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut means = kmeans_plus_plus(data, k, &mut rng);

    let mut global_var = vec![0.0; d];
    let mut global_mean = vec![0.0; d];
    for i in 0..n {
        for (m, x) in global_mean.iter_mut().zip(data.row(i)) {
            *m += x / n as f64;
        }
    }
    for i in 0..n {
        for ((v, x), m) in global_var.iter_mut().zip(data.row(i)).zip(&global_mean) {
            *v += (x - m) * (x - m) / n as f64;
        }
    }
    let init_var: Vec<f64> = global_var.iter().map(|v| v.max(cfg.variance_floor)).collect();
    let mut variances = vec![init_var; k];
    let mut weights = vec![1.0 / k as f64; k];

    let mut resp = vec![0.0; n * k];
    for _ in 0..cfg.iterations {
        let model = GmmModel {
            weights: weights.clone(),
            means: means.clone(),
            variances: variances.clone(),
            variance_floor: cfg.variance_floor,
        };
        for i in 0..n {
            let lj = model.log_joint(data.row(i));
            let lse = log_sum_exp(&lj);
            for c in 0..k {
                resp[i * k + c] = libm::exp(lj[c] - lse);
            }
        }

        for c in 0..k {
            let nk: f64 = (0..n).map(|i| resp[i * k + c]).sum();
            if nk < 1e-10 {
                // Dead component: reseed on the point farthest from every mean.
                let far = |i: usize| {
                    means
                        .iter()
                        .map(|m| squared_distance(data.row(i), m))
                        .fold(f64::INFINITY, f64::min)
                };
                let worst = (0..n)
                    .max_by(|&a, &b| far(a).total_cmp(&far(b)).then(b.cmp(&a)))
                    .unwrap_or(0);
                means[c] = data.row(worst).to_vec();
                variances[c] = global_var.iter().map(|v| v.max(cfg.variance_floor)).collect();
                weights[c] = 1.0 / n as f64;
                continue;
            }
            let mut mu = vec![0.0; d];
            for i in 0..n {
                let r = resp[i * k + c];
                for (m, x) in mu.iter_mut().zip(data.row(i)) {
                    *m += r * x;
                }
            }
            for m in &mut mu {
                *m /= nk;
            }
            let mut var = vec![0.0; d];
            for i in 0..n {
                let r = resp[i * k + c];
                for ((v, x), m) in var.iter_mut().zip(data.row(i)).zip(&mu) {
                    *v += r * (x - m) * (x - m);
                }
            }
            for v in &mut var {
                *v = (*v / nk).max(cfg.variance_floor);
            }
            means[c] = mu;
            variances[c] = var;
            weights[c] = nk / n as f64;
        }
        let total: f64 = weights.iter().sum();
        for w in &mut weights {
            *w /= total;
        }
    }

    GmmModel::new(weights, means, variances, cfg.variance_floor)
}

fn kmeans_plus_plus(data: &Matrix, k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let n = data.rows();
    let mut centers: Vec<Vec<f64>> = Vec::with_capacity(k);
    centers.push(data.row(rng.random_range(0..n)).to_vec());
    let mut nearest: Vec<f64> = (0..n).map(|i| squared_distance(data.row(i), &centers[0])).collect();
    while centers.len() < k {
        let total: f64 = nearest.iter().sum();
        let pick = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            let mut chosen = n - 1;
            for (i, w) in nearest.iter().enumerate() {
                if target < *w {
                    chosen = i;
                    break;
                }
                target -= w;
            }
            chosen
        } else {
            rng.random_range(0..n)
        };
        let c = data.row(pick).to_vec();
        for (i, best) in nearest.iter_mut().enumerate() {
            *best = best.min(squared_distance(data.row(i), &c));
        }
        centers.push(c);
    }
    centers
}
