//! Generalized ellipsoid distances `D(x, y) = (x − y)ᵀ M (x − y)`.
//!
//! `M` is built from a covariance estimate as a (scaled) inverse. Under
//! [`Normalization::UnitDeterminant`] it is rescaled so `det M = 1`, which
//! puts per-class metrics on a common scale.

use nalgebra::DMatrix;

use crate::covariance::{
    cholesky, log_determinant, pseudo_inverse, symmetrize, CovarianceEstimate, CovarianceMatrix,
};
use crate::error::{Error, Result};
use crate::series::TimeSeries;

/// Distances in `(−NEG_CLAMP, 0)` from rounding are reported as 0.
const NEG_CLAMP: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Normalization {
    #[default]
    UnitDeterminant,
    RawInverse,
}

impl Normalization {
    pub fn name(self) -> &'static str {
        match self {
            Normalization::UnitDeterminant => "unit",
            Normalization::RawInverse => "raw",
        }
    }
}

/// How `M` is derived from a covariance estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MetricEstimator {
    Shrinkage,
    Diagonal,
    PseudoInverse,
}

impl MetricEstimator {
    pub fn name(self) -> &'static str {
        match self {
            MetricEstimator::Shrinkage => "shrinkage",
            MetricEstimator::Diagonal => "diagonal",
            MetricEstimator::PseudoInverse => "pinv",
        }
    }
}

impl std::str::FromStr for MetricEstimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "shrinkage" | "shrink" => Ok(MetricEstimator::Shrinkage),
            "diagonal" | "diag" => Ok(MetricEstimator::Diagonal),
            "pinv" | "pseudoinverse" => Ok(MetricEstimator::PseudoInverse),
            other => Err(Error::InvalidSpec(format!("unknown estimator {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MetricForm {
    Identity,
    Diagonal(Vec<f64>),
    /// Symmetric PSD, column-major.
    Full(DMatrix<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct EllipsoidMetric {
    form: MetricForm,
    normalization: Normalization,
    n: usize,
}

impl EllipsoidMetric {
    /// `M = I`: squared Euclidean distance.
    pub fn identity(n: usize) -> Self {
        EllipsoidMetric {
            form: MetricForm::Identity,
            normalization: Normalization::UnitDeterminant,
            n,
        }
    }

    pub fn diagonal(weights: Vec<f64>, normalization: Normalization) -> Self {
        debug_assert!(weights.iter().all(|w| *w >= 0.0));
        EllipsoidMetric {
            n: weights.len(),
            form: MetricForm::Diagonal(weights),
            normalization,
        }
    }

    pub fn full(m: DMatrix<f64>, normalization: Normalization) -> Self {
        assert!(m.is_square());
        EllipsoidMetric {
            n: m.nrows(),
            form: MetricForm::Full(symmetrize(m)),
            normalization,
        }
    }

    pub fn form(&self) -> &MetricForm {
        &self.form
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_identity(&self) -> bool {
        matches!(self.form, MetricForm::Identity)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        match &self.form {
            MetricForm::Identity => DMatrix::identity(self.n, self.n),
            MetricForm::Diagonal(w) => DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(w)),
            MetricForm::Full(m) => m.clone(),
        }
    }

    /// `(x − y)ᵀ M (x − y)`, checking dimensions.
    pub fn distance(&self, x: &TimeSeries, y: &TimeSeries) -> Result<f64> {
        check_dims(self.n, x.len())?;
        check_dims(self.n, y.len())?;
        Ok(self.distance_unchecked(x, y))
    }

    /// As [`distance`](Self::distance) without the length checks.
    pub fn distance_unchecked(&self, x: &[f64], y: &[f64]) -> f64 {
        let d = match &self.form {
            MetricForm::Identity => return sq_euclidean(x, y),
            MetricForm::Diagonal(w) => x
                .iter()
                .zip(y)
                .zip(w)
                .map(|((a, b), w)| {
                    let d = a - b;
                    w * d * d
                })
                .sum(),
            MetricForm::Full(m) => quadratic_form(m, x, y),
        };
        if d < 0.0 && d > -NEG_CLAMP {
            0.0
        } else {
            d
        }
    }
}

fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

// M is symmetric, so row i equals column i, which is contiguous in storage.
fn quadratic_form(m: &DMatrix<f64>, x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    let mut diff = [0.0f64; 512];
    let mut heap;
    let d: &mut [f64] = if n <= diff.len() {
        &mut diff[..n]
    } else {
        heap = vec![0.0; n];
        &mut heap
    };
    for ((di, a), b) in d.iter_mut().zip(x).zip(y) {
        *di = a - b;
    }
    let data = m.as_slice();
    let mut total = 0.0;
    for (i, di) in d.iter().enumerate() {
        let col = &data[i * n..(i + 1) * n];
        let md: f64 = col.iter().zip(d.iter()).map(|(c, dj)| c * dj).sum();
        total += di * md;
    }
    total
}

fn sq_euclidean(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| {
            let d = a - b;
            d * d
        })
        .sum()
}

/// Squared Euclidean distance.
pub fn euclidean_sq(x: &TimeSeries, y: &TimeSeries) -> Result<f64> {
    check_dims(x.len(), y.len())?;
    Ok(sq_euclidean(x, y))
}

/// Builds `M` from a covariance estimate.
///
/// For the diagonal estimator every variance must be strictly positive; see
/// [`diagonal_metric_ignoring_zero_variance`] for the lenient variant.
pub fn metric_from_covariance(
    c: &CovarianceEstimate,
    estimator: MetricEstimator,
    normalization: Normalization,
) -> Result<EllipsoidMetric> {
    match estimator {
        MetricEstimator::PseudoInverse => {
            let p = pseudo_inverse(c, None)?;
            Ok(EllipsoidMetric::full(p.matrix, Normalization::UnitDeterminant))
        }
        MetricEstimator::Diagonal => {
            let v = c.diagonal();
            if v.iter().any(|&x| x.is_nan() || x <= 0.0) {
                return Err(Error::NotPositiveDefinite);
            }
            let (m, _) = diagonal_metric_ignoring_zero_variance(c, normalization)?;
            Ok(m)
        }
        MetricEstimator::Shrinkage => match &c.matrix {
            CovarianceMatrix::Diagonal(_) => {
                metric_from_covariance(c, MetricEstimator::Diagonal, normalization)
            }
            CovarianceMatrix::Full(m) => {
                let chol = cholesky(m)?;
                let mut inv = symmetrize(chol.inverse());
                if normalization == Normalization::UnitDeterminant {
                    let logdet: f64 = chol.l_dirty().diagonal().iter().map(|x| 2.0 * x.ln()).sum();
                    inv *= (logdet / m.nrows() as f64).exp();
                }
                Ok(EllipsoidMetric::full(inv, normalization))
            }
        },
    }
}

/// Diagonal metric `wᵢ = 1/vᵢ`, with zero-variance attributes given weight 0.
///
/// Under unit-determinant normalization the weights are multiplied by the
/// geometric mean of the positive variances. Returns the indices of the
/// attributes that were dropped.
pub fn diagonal_metric_ignoring_zero_variance(
    c: &CovarianceEstimate,
    normalization: Normalization,
) -> Result<(EllipsoidMetric, Vec<usize>)> {
    let v = c.diagonal();
    if v.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(Error::NotPositiveDefinite);
    }
    let dropped: Vec<usize> = (0..v.len()).filter(|&i| v[i] == 0.0).collect();
    let positive = v.len() - dropped.len();
    if positive == 0 {
        return Err(Error::ZeroMatrix);
    }
    let scale = match normalization {
        Normalization::UnitDeterminant => {
            let log_sum: f64 = v.iter().filter(|x| **x > 0.0).map(|x| x.ln()).sum();
            (log_sum / positive as f64).exp()
        }
        Normalization::RawInverse => 1.0,
    };
    let weights = v.iter().map(|&x| if x > 0.0 { scale / x } else { 0.0 }).collect();
    Ok((EllipsoidMetric::diagonal(weights, normalization), dropped))
}

/// `ln det M` for a nonsingular metric.
pub fn metric_log_determinant(m: &EllipsoidMetric) -> Result<f64> {
    match &m.form {
        MetricForm::Identity => Ok(0.0),
        MetricForm::Diagonal(w) => {
            if w.iter().any(|x| x.is_nan() || *x <= 0.0) {
                return Err(Error::NotPositiveDefinite);
            }
            Ok(w.iter().map(|x| x.ln()).sum())
        }
        MetricForm::Full(full) => log_determinant(&CovarianceEstimate::from_matrix(
            full.clone(),
            crate::covariance::Estimator::Sample,
            0,
        )),
    }
}
