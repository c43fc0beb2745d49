use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{EncodingError, FisherVector};
use crate::linalg::dot;

pub const DEFAULT_C: f64 = 100.0;

/// One linear scorer per class, trained one-vs-rest.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearOvrModel {
    classes: Vec<String>,
    weights: Vec<Vec<f64>>,
    biases: Vec<f64>,
    c: f64,
}

impl LinearOvrModel {
    pub fn new(classes: Vec<String>, weights: Vec<Vec<f64>>, biases: Vec<f64>, c: f64) -> Result<Self, EncodingError> {
        if classes.is_empty() {
            return Err(EncodingError::Empty("classes"));
        }
        let unique: BTreeSet<&String> = classes.iter().collect();
        if unique.len() != classes.len() {
            return Err(EncodingError::InvalidField {
                field: "classes",
                reason: "class names must be unique",
            });
        }
        for (what, len) in [("weights", weights.len()), ("biases", biases.len())] {
            if len != classes.len() {
                return Err(EncodingError::DimensionMismatch {
                    what,
                    expected: classes.len(),
                    found: len,
                });
            }
        }
        let dim = weights[0].len();
        if let Some(w) = weights.iter().find(|w| w.len() != dim) {
            return Err(EncodingError::DimensionMismatch {
                what: "weights",
                expected: dim,
                found: w.len(),
            });
        }
        if !(c > 0.0) {
            return Err(EncodingError::InvalidField {
                field: "c",
                reason: "must be positive",
            });
        }
        Ok(Self {
            classes,
            weights,
            biases,
            c,
        })
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn weights(&self) -> &[Vec<f64>] {
        &self.weights
    }

    pub fn biases(&self) -> &[f64] {
        &self.biases
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn dim(&self) -> usize {
        self.weights[0].len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvmTrainConfig {
    pub c: f64,
    pub epochs: usize,
    pub seed: u64,
}

impl Default for SvmTrainConfig {
    fn default() -> Self {
        Self {
            c: DEFAULT_C,
            epochs: 100,
            seed: 0,
        }
    }
}

/// Trains one hinge-loss classifier per class by stochastic subgradient
/// descent on `λ/2·|w|² + mean hinge`, with `λ = 1/(C·n)` and step `1/(λ·t)`.
/// The bias is an extra weight on a constant feature. Samples are visited in
/// a seeded permutation each epoch; classes are sorted by name.
pub fn train_ovr_linear<S: AsRef<str>>(
    features: &[FisherVector],
    labels: &[S],
    cfg: &SvmTrainConfig,
) -> Result<LinearOvrModel, EncodingError> {
    if features.len() != labels.len() {
        return Err(EncodingError::DimensionMismatch {
            what: "labels",
            expected: features.len(),
            found: labels.len(),
        });
    }
    let classes: Vec<String> = labels
        .iter()
        .map(|l| String::from(l.as_ref()))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if classes.len() < 2 {
        return Err(EncodingError::SingleClass);
    }
    if !(cfg.c > 0.0) {
        return Err(EncodingError::InvalidField {
            field: "c",
            reason: "must be positive",
        });
    }
    let dim = features[0].len();
    for f in features {
        if f.len() != dim {
            return Err(EncodingError::DimensionMismatch {
                what: "feature",
                expected: dim,
                found: f.len(),
            });
        }
        if !f.is_normalized() {
            return Err(EncodingError::Unnormalized);
        }
    }

    let n = features.len();
    let lambda = 1.0 / (cfg.c * n as f64);
    let radius = 1.0 / libm::sqrt(lambda);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut order: Vec<usize> = (0..n).collect();

    let mut weights = Vec::with_capacity(classes.len());
    let mut biases = Vec::with_capacity(classes.len());
    for class in &classes {
        let targets: Vec<f64> = labels
            .iter()
            .map(|l| if l.as_ref() == class.as_str() { 1.0 } else { -1.0 })
            .collect();
        let mut w = vec![0.0; dim];
        let mut b = 0.0;
        let mut t = 0usize;
        for _ in 0..cfg.epochs {
            shuffle(&mut order, &mut rng);
            for &i in &order {
                t += 1;
                let eta = 1.0 / (lambda * t as f64);
                let x = features[i].values();
                let y = targets[i];
                let margin = y * (dot(&w, x) + b);
                let shrink = 1.0 - eta * lambda;
                for wj in &mut w {
                    *wj *= shrink;
                }
                b *= shrink;
                if margin < 1.0 {
                    for (wj, xj) in w.iter_mut().zip(x) {
                        *wj += eta * y * xj;
                    }
                    b += eta * y;
                }
                let norm = libm::sqrt(dot(&w, &w) + b * b);
                if norm > radius {
                    let s = radius / norm;
                    for wj in &mut w {
                        *wj *= s;
                    }
                    b *= s;
                }
            }
        }
        weights.push(w);
        biases.push(b);
    }
    LinearOvrModel::new(classes, weights, biases, cfg.c)
}

fn shuffle(order: &mut [usize], rng: &mut ChaCha8Rng) {
    for i in (1..order.len()).rev() {
        let j = rng.random_range(0..=i);
        order.swap(i, j);
    }
}

/// `wᵀx + b` for every class, in model order.
pub fn score_ovr<'m>(model: &'m LinearOvrModel, fv: &FisherVector) -> Result<Vec<(&'m str, f64)>, EncodingError> {
    if fv.len() != model.dim() {
        return Err(EncodingError::DimensionMismatch {
            what: "fisher vector",
            expected: model.dim(),
            found: fv.len(),
        });
    }
    Ok(model
        .classes
        .iter()
        .zip(&model.weights)
        .zip(&model.biases)
        .map(|((c, w), b)| (c.as_str(), dot(w, fv.values()) + b))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn unit(v: Vec<f64>) -> FisherVector {
        FisherVector::new(v, true)
    }

    #[test]
    fn zero_weights_score_the_bias() {
        let m = LinearOvrModel::new(
            vec!["a".to_string(), "b".to_string()],
            vec![vec![0.0; 3], vec![0.0; 3]],
            vec![0.5, 0.5],
            DEFAULT_C,
        )
        .unwrap();
        let scores = score_ovr(&m, &unit(vec![0.3, -0.2, 0.9])).unwrap();
        assert_eq!(scores, vec![("a", 0.5), ("b", 0.5)]);
    }

    #[test]
    fn basis_weight_picks_first_coordinate() {
        let m = LinearOvrModel::new(vec!["a".to_string()], vec![vec![1.0, 0.0]], vec![0.0], 1.0).unwrap();
        assert_eq!(score_ovr(&m, &unit(vec![-0.5, 0.25])).unwrap(), vec![("a", -0.5)]);
    }

    #[test]
    fn single_class_rejected() {
        let f = vec![unit(vec![1.0, 0.0]), unit(vec![0.0, 1.0])];
        let err = train_ovr_linear(&f, &["a", "a"], &SvmTrainConfig::default()).unwrap_err();
        assert_eq!(err, EncodingError::SingleClass);
    }

    #[test]
    fn mismatched_dimensions_rejected() {
        let f = vec![unit(vec![1.0, 0.0]), unit(vec![0.0, 1.0, 0.0])];
        let err = train_ovr_linear(&f, &["a", "b"], &SvmTrainConfig::default()).unwrap_err();
        assert!(matches!(err, EncodingError::DimensionMismatch { .. }));
    }

    #[test]
    fn duplicate_classes_rejected() {
        let err = LinearOvrModel::new(
            vec!["a".to_string(), "a".to_string()],
            vec![vec![0.0], vec![0.0]],
            vec![0.0, 0.0],
            1.0,
        )
        .unwrap_err();
        assert!(matches!(err, EncodingError::InvalidField { field: "classes", .. }));
    }

    #[test]
    fn score_dimension_checked() {
        let m = LinearOvrModel::new(vec!["a".to_string()], vec![vec![1.0, 0.0]], vec![0.0], 1.0).unwrap();
        assert!(score_ovr(&m, &unit(vec![1.0])).is_err());
    }
}
