use alloc::vec;
use alloc::vec::Vec;

use super::gmm::{log_sum_exp, GmmModel};
use super::EncodingError;

/// Fisher vector laid out as the mean-gradient block followed by the
/// variance-gradient block, each ordered by component then dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct FisherVector {
    values: Vec<f64>,
    normalized: bool,
}

impl FisherVector {
    pub fn new(values: Vec<f64>, normalized: bool) -> Self {
        Self { values, normalized }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Soft assignment of `x` to every component, computed in log space.
pub fn posteriors(x: &[f64], gmm: &GmmModel) -> Result<Vec<f64>, EncodingError> {
    if x.len() != gmm.dim() {
        return Err(EncodingError::DimensionMismatch {
            what: "descriptor",
            expected: gmm.dim(),
            found: x.len(),
        });
    }
    let lj = gmm.log_joint(x);
    let lse = log_sum_exp(&lj);
    Ok(lj.iter().map(|l| libm::exp(l - lse)).collect())
}

/// Unnormalized Fisher vector of a window of descriptors.
///
/// With `N` descriptors and soft assignments `γ`, the entries are
///
/// ```text
/// mean block:     1/(N·√w_k)    · Σ_i γ_ik · (x_id − μ_kd) / σ_kd
/// variance block: 1/(N·√(2w_k)) · Σ_i γ_ik · ((x_id − μ_kd)² / σ²_kd − 1)
/// ```
pub fn fisher_encode<D: AsRef<[f64]>>(window: &[D], gmm: &GmmModel) -> Result<FisherVector, EncodingError> {
    if window.is_empty() {
        return Err(EncodingError::Empty("window"));
    }
    let (k, d) = (gmm.components(), gmm.dim());
    let mut values = vec![0.0; 2 * k * d];
    let (mean_block, var_block) = values.split_at_mut(k * d);

    for x in window {
        let x = x.as_ref();
        let gamma = posteriors(x, gmm)?;
        for c in 0..k {
            let g = gamma[c];
            if g == 0.0 {
                continue;
            }
            let mu = &gmm.means()[c];
            let var = &gmm.variances()[c];
            for j in 0..d {
                let z = (x[j] - mu[j]) / libm::sqrt(var[j]);
                mean_block[c * d + j] += g * z;
                var_block[c * d + j] += g * (z * z - 1.0);
            }
        }
    }

    let n = window.len() as f64;
    for c in 0..k {
        let w = gmm.weights()[c];
        let mean_scale = 1.0 / (n * libm::sqrt(w));
        let var_scale = 1.0 / (n * libm::sqrt(2.0 * w));
        for j in 0..d {
            mean_block[c * d + j] *= mean_scale;
            var_block[c * d + j] *= var_scale;
        }
    }
    Ok(FisherVector::new(values, false))
}

/// Signed square root on every entry, then scaling to unit L2 norm. An
/// all-zero vector is returned unchanged (still marked normalized).
pub fn power_l2_normalize(fv: FisherVector) -> FisherVector {
    let mut values = fv.values;
    for v in &mut values {
        *v = libm::copysign(libm::sqrt(libm::fabs(*v)), *v);
    }
    let norm = crate::linalg::norm(&values);
    if norm > 0.0 {
        for v in &mut values {
            *v /= norm;
        }
    }
    FisherVector::new(values, true)
}
