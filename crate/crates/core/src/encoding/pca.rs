use alloc::vec::Vec;

use super::EncodingError;
use crate::linalg::{dot, symmetric_eigen, Matrix};

const ORTHONORMAL_TOL: f64 = 1e-6;

/// Linear projection onto the leading principal directions.
#[derive(Debug, Clone, PartialEq)]
pub struct PcaModel {
    mean: Vec<f64>,
    /// `input_dim × output_dim`, one principal direction per column.
    projection: Matrix,
    eigenvalues: Vec<f64>,
    whiten: bool,
}

impl PcaModel {
    /// Validates shapes and column orthonormality.
    pub fn new(mean: Vec<f64>, projection: Matrix, eigenvalues: Vec<f64>, whiten: bool) -> Result<Self, EncodingError> {
        if projection.rows() != mean.len() {
            return Err(EncodingError::DimensionMismatch {
                what: "projection rows",
                expected: mean.len(),
                found: projection.rows(),
            });
        }
        if eigenvalues.len() != projection.cols() {
            return Err(EncodingError::DimensionMismatch {
                what: "eigenvalues",
                expected: projection.cols(),
                found: eigenvalues.len(),
            });
        }
        if projection.cols() == 0 {
            return Err(EncodingError::Empty("projection"));
        }
        for a in 0..projection.cols() {
            let ca = projection.column(a);
            for b in a..projection.cols() {
                let expected = if a == b { 1.0 } else { 0.0 };
                if libm::fabs(dot(&ca, &projection.column(b)) - expected) > ORTHONORMAL_TOL {
                    return Err(EncodingError::InvalidField {
                        field: "projection",
                        reason: "columns are not orthonormal",
                    });
                }
            }
        }
        if whiten && eigenvalues.iter().any(|&e| !(e > 0.0)) {
            return Err(EncodingError::InvalidField {
                field: "eigenvalues",
                reason: "whitening needs positive eigenvalues",
            });
        }
        Ok(Self {
            mean,
            projection,
            eigenvalues,
            whiten,
        })
    }

    pub fn input_dim(&self) -> usize {
        self.mean.len()
    }

    pub fn output_dim(&self) -> usize {
        self.projection.cols()
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn projection(&self) -> &Matrix {
        &self.projection
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn whiten(&self) -> bool {
        self.whiten
    }

    pub fn project(&self, x: &[f64]) -> Result<Vec<f64>, EncodingError> {
        if x.len() != self.input_dim() {
            return Err(EncodingError::DimensionMismatch {
                what: "descriptor",
                expected: self.input_dim(),
                found: x.len(),
            });
        }
        let mut out = alloc::vec![0.0; self.output_dim()];
        for (i, (xi, mi)) in x.iter().zip(&self.mean).enumerate() {
            let centered = xi - mi;
            for (j, o) in out.iter_mut().enumerate() {
                *o += centered * self.projection.get(i, j);
            }
        }
        if self.whiten {
            for (o, e) in out.iter_mut().zip(&self.eigenvalues) {
                *o /= libm::sqrt(*e);
            }
        }
        Ok(out)
    }
}

/// Fits PCA on the rows of `data`, keeping `target_dim` directions in
/// descending eigenvalue order. Covariance uses the `n - 1` denominator.
pub fn fit_pca(data: &Matrix, target_dim: usize, whiten: bool) -> Result<PcaModel, EncodingError> {
    let (n, d) = (data.rows(), data.cols());
    if target_dim == 0 || target_dim > d {
        return Err(EncodingError::TargetDim {
            target: target_dim,
            max: d,
        });
    }
    if n < target_dim.max(2) {
        return Err(EncodingError::InsufficientRows {
            needed: target_dim.max(2),
            got: n,
        });
    }

    let mut mean = alloc::vec![0.0; d];
    for i in 0..n {
        for (m, x) in mean.iter_mut().zip(data.row(i)) {
            *m += x;
        }
    }
    for m in &mut mean {
        *m /= n as f64;
    }

    let mut cov = Matrix::zeros(d, d);
    for i in 0..n {
        let row = data.row(i);
        for a in 0..d {
            let ca = row[a] - mean[a];
            for b in a..d {
                let v = cov.get(a, b) + ca * (row[b] - mean[b]);
                cov.set(a, b, v);
            }
        }
    }
    let denom = (n - 1) as f64;
    for a in 0..d {
        for b in a..d {
            let v = cov.get(a, b) / denom;
            cov.set(a, b, v);
            cov.set(b, a, v);
        }
    }
    if let Some(column) = (0..d).find(|&a| cov.get(a, a) == 0.0) {
        return Err(EncodingError::ZeroVariance { column });
    }

    let eig = symmetric_eigen(&cov);
    let mut projection = Matrix::zeros(d, target_dim);
    for j in 0..target_dim {
        for i in 0..d {
            projection.set(i, j, eig.vectors.get(i, j));
        }
    }
    let eigenvalues = eig.values[..target_dim].iter().map(|&e| e.max(0.0)).collect();
    PcaModel::new(mean, projection, eigenvalues, whiten)
}
