//! Covariance estimation: sample, shrinkage toward the diagonal, and
//! diagonal-only, plus the symmetric pseudoinverse and log-determinant used
//! to turn an estimate into a metric.

use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::series::LabeledDataset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Estimator {
    Sample,
    Shrinkage,
    Diagonal,
}

impl Estimator {
    pub fn name(self) -> &'static str {
        match self {
            Estimator::Sample => "sample",
            Estimator::Shrinkage => "shrinkage",
            Estimator::Diagonal => "diagonal",
        }
    }
}

impl std::str::FromStr for Estimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sample" => Ok(Estimator::Sample),
            "shrinkage" | "shrink" => Ok(Estimator::Shrinkage),
            "diagonal" | "diag" => Ok(Estimator::Diagonal),
            other => Err(Error::InvalidSpec(format!("unknown estimator {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CovarianceMatrix {
    Full(DMatrix<f64>),
    /// Per-attribute variances; off-diagonal entries are implicitly zero.
    Diagonal(DVector<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceEstimate {
    pub matrix: CovarianceMatrix,
    pub estimator: Estimator,
    /// Present iff `estimator` is `Shrinkage`.
    pub shrink_intensity: Option<f64>,
    pub sample_count: usize,
}

impl CovarianceEstimate {
    pub fn dim(&self) -> usize {
        match &self.matrix {
            CovarianceMatrix::Full(m) => m.nrows(),
            CovarianceMatrix::Diagonal(v) => v.len(),
        }
    }

    pub fn diagonal(&self) -> DVector<f64> {
        match &self.matrix {
            CovarianceMatrix::Full(m) => m.diagonal(),
            CovarianceMatrix::Diagonal(v) => v.clone(),
        }
    }

    /// Dense form; diagonal estimates get explicit zeros off the diagonal.
    pub fn to_dense(&self) -> DMatrix<f64> {
        match &self.matrix {
            CovarianceMatrix::Full(m) => m.clone(),
            CovarianceMatrix::Diagonal(v) => DMatrix::from_diagonal(v),
        }
    }

    /// Wraps an arbitrary symmetric matrix, e.g. for tests and exports.
    pub fn from_matrix(matrix: DMatrix<f64>, estimator: Estimator, sample_count: usize) -> Self {
        CovarianceEstimate {
            matrix: CovarianceMatrix::Full(symmetrize(matrix)),
            estimator,
            shrink_intensity: None,
            sample_count,
        }
    }
}

/// `(A + Aᵀ) / 2`.
pub fn symmetrize(mut a: DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    for j in 0..n {
        for i in (j + 1)..n {
            let v = 0.5 * (a[(i, j)] + a[(j, i)]);
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
    a
}

/// Instances as rows, attributes as columns, each column centered on its mean.
fn centered(d: &LabeledDataset) -> Result<DMatrix<f64>> {
    let rows = d.len();
    if rows < 2 {
        return Err(Error::InsufficientSamples { found: rows });
    }
    let n = d.series_length();
    let mut x = DMatrix::from_fn(rows, n, |k, i| d.series()[k][i]);
    for mut col in x.column_iter_mut() {
        let mean = col.sum() / rows as f64;
        col.add_scalar_mut(-mean);
    }
    Ok(x)
}

fn column_dot(x: &DMatrix<f64>, i: usize, j: usize) -> f64 {
    x.column(i).dot(&x.column(j))
}

fn sample_from_centered(x: &DMatrix<f64>) -> DMatrix<f64> {
    let rows = x.nrows();
    let n = x.ncols();
    let scale = 1.0 / (rows as f64 - 1.0);
    let mut s = DMatrix::zeros(n, n);
    for j in 0..n {
        for i in j..n {
            let v = column_dot(x, i, j) * scale;
            s[(i, j)] = v;
            s[(j, i)] = v;
        }
    }
    s
}

/// Unbiased sample covariance (divisor `N − 1`).
pub fn sample_covariance(d: &LabeledDataset) -> Result<CovarianceEstimate> {
    let x = centered(d)?;
    Ok(CovarianceEstimate {
        matrix: CovarianceMatrix::Full(sample_from_centered(&x)),
        estimator: Estimator::Sample,
        shrink_intensity: None,
        sample_count: d.len(),
    })
}

/// Per-attribute sample variances only.
pub fn diagonal_covariance(d: &LabeledDataset) -> Result<CovarianceEstimate> {
    let x = centered(d)?;
    let scale = 1.0 / (x.nrows() as f64 - 1.0);
    let v = DVector::from_iterator(x.ncols(), (0..x.ncols()).map(|i| column_dot(&x, i, i) * scale));
    Ok(CovarianceEstimate {
        matrix: CovarianceMatrix::Diagonal(v),
        estimator: Estimator::Diagonal,
        shrink_intensity: None,
        sample_count: d.len(),
    })
}

fn intensity_from_centered(x: &DMatrix<f64>) -> f64 {
    let rows = x.nrows();
    let n = x.ncols();
    let nf = rows as f64;
    let var_scale = nf / ((nf - 1.0) * (nf - 1.0) * (nf - 1.0));
    let mut num = 0.0;
    let mut den = 0.0;
    let mut w = vec![0.0; rows];
    for j in 0..n {
        let cj = x.column(j);
        for i in (j + 1)..n {
            let ci = x.column(i);
            let mut sum = 0.0;
            for k in 0..rows {
                w[k] = ci[k] * cj[k];
                sum += w[k];
            }
            let mean = sum / nf;
            let s_ij = sum / (nf - 1.0);
            let ss: f64 = w.iter().map(|wk| (wk - mean) * (wk - mean)).sum();
            num += var_scale * ss;
            den += s_ij * s_ij;
        }
    }
    if den == 0.0 {
        1.0
    } else {
        (num / den).clamp(0.0, 1.0)
    }
}

/// Closed-form intensity for shrinking toward `diag(S)`:
/// `Σ_{i≠j} Var̂(s_ij) / Σ_{i≠j} s_ij²`, clamped to `[0, 1]`.
///
/// A zero denominator (no off-diagonal covariance at all) yields 1.
pub fn estimate_shrink_intensity(d: &LabeledDataset) -> Result<f64> {
    Ok(intensity_from_centered(&centered(d)?))
}

/// `λ·diag(S) + (1 − λ)·S` with the estimated intensity.
pub fn shrinkage_covariance(d: &LabeledDataset) -> Result<CovarianceEstimate> {
    shrink(d, None)
}

/// As [`shrinkage_covariance`] but with a caller-chosen intensity.
pub fn shrinkage_covariance_with_intensity(d: &LabeledDataset, intensity: f64) -> Result<CovarianceEstimate> {
    shrink(d, Some(intensity))
}

fn shrink(d: &LabeledDataset, intensity: Option<f64>) -> Result<CovarianceEstimate> {
    let x = centered(d)?;
    let mut s = sample_from_centered(&x);
    if let Some(attribute) = (0..s.nrows()).find(|&i| s[(i, i)] <= 0.0) {
        return Err(Error::DegenerateTarget { attribute });
    }
    let lambda = intensity
        .unwrap_or_else(|| intensity_from_centered(&x))
        .clamp(0.0, 1.0);
    let keep = 1.0 - lambda;
    let n = s.nrows();
    for j in 0..n {
        for i in 0..n {
            if i != j {
                s[(i, j)] *= keep;
            }
        }
    }
    Ok(CovarianceEstimate {
        matrix: CovarianceMatrix::Full(s),
        estimator: Estimator::Shrinkage,
        shrink_intensity: Some(lambda),
        sample_count: d.len(),
    })
}

#[derive(Debug, Clone)]
pub struct PseudoInverseResult {
    /// Moore-Penrose pseudoinverse rescaled to unit pseudo-determinant.
    pub matrix: DMatrix<f64>,
    pub rank: usize,
    /// Product of the retained eigenvalues of the input.
    pub pseudo_det: f64,
    pub log_pseudo_det: f64,
}

/// Default relative rank tolerance: `n · ε`.
pub fn default_rank_tol(n: usize) -> f64 {
    n as f64 * f64::EPSILON
}

/// Pseudoinverse via symmetric eigendecomposition.
///
/// Eigenvalues `≤ rank_tol · λ_max` count as zero. The result is scaled so
/// the product of its nonzero eigenvalues is 1.
pub fn pseudo_inverse(c: &CovarianceEstimate, rank_tol: Option<f64>) -> Result<PseudoInverseResult> {
    let a = symmetrize(c.to_dense());
    let n = a.nrows();
    let tol = rank_tol.unwrap_or_else(|| default_rank_tol(n));
    let eig = SymmetricEigen::new(a);
    let lambda_max = eig.eigenvalues.max();
    if lambda_max.is_nan() || lambda_max <= 0.0 {
        return Err(Error::ZeroMatrix);
    }
    let cutoff = tol * lambda_max;
    let kept: Vec<usize> = (0..n).filter(|&k| eig.eigenvalues[k] > cutoff).collect();
    if kept.is_empty() {
        return Err(Error::ZeroMatrix);
    }
    let rank = kept.len();
    let log_pseudo_det: f64 = kept.iter().map(|&k| eig.eigenvalues[k].ln()).sum();
    // Inverse eigenvalues 1/λ multiply to 1/pdet; scaling by pdet^(1/r) makes that 1.
    let scale = (log_pseudo_det / rank as f64).exp();
    let mut m = DMatrix::zeros(n, n);
    for &k in &kept {
        let v = eig.eigenvectors.column(k);
        let w = scale / eig.eigenvalues[k];
        m.ger(w, &v, &v, 1.0);
    }
    Ok(PseudoInverseResult {
        matrix: symmetrize(m),
        rank,
        pseudo_det: log_pseudo_det.exp(),
        log_pseudo_det,
    })
}

/// `ln det C` via Cholesky, or the sum of log-variances for diagonal estimates.
pub fn log_determinant(c: &CovarianceEstimate) -> Result<f64> {
    match &c.matrix {
        CovarianceMatrix::Diagonal(v) => {
            if v.iter().any(|&x| x.is_nan() || x <= 0.0) {
                return Err(Error::NotPositiveDefinite);
            }
            Ok(v.iter().map(|x| x.ln()).sum())
        }
        CovarianceMatrix::Full(m) => log_det_full(m),
    }
}

pub(crate) fn cholesky(m: &DMatrix<f64>) -> Result<Cholesky<f64, nalgebra::Dyn>> {
    Cholesky::new(symmetrize(m.clone())).ok_or(Error::NotPositiveDefinite)
}

pub(crate) fn log_det_full(m: &DMatrix<f64>) -> Result<f64> {
    let chol = cholesky(m)?;
    Ok(chol.l_dirty().diagonal().iter().map(|x| 2.0 * x.ln()).sum())
}
