//! Nearest-neighbor time-series classification with ellipsoid (Mahalanobis)
//! distances learned per class or globally, alongside Euclidean and DTW
//! baselines.
//!
//! ```
//! use tsmetric::{evaluate, generate, DistanceSpec, Family, GeneratorSpec};
//!
//! let train = generate(&GeneratorSpec { family: Family::Cbf, per_class_count: 10, seed: 1 })?;
//! let test = generate(&GeneratorSpec { family: Family::Cbf, per_class_count: 20, seed: 2 })?;
//! let spec: DistanceSpec = "mahalanobis:diagonal:class".parse()?;
//! let report = evaluate(&spec, &train, &test)?;
//! assert!(report.error_rate < 0.5);
//! # Ok::<(), tsmetric::Error>(())
//! ```
//!
//! The `parallel` feature (on by default) spreads classification of test
//! instances over a rayon pool. Results do not depend on the worker count.

pub mod classifier;
pub mod covariance;
pub mod dtw;
pub mod error;
pub mod io;
pub mod metric;
pub mod parallel;
pub mod series;
pub mod synth;

pub use classifier::{
    classify, evaluate, evaluate_with, fit, fit_with, learning_curve, DistanceModel, DistanceSpec,
    EvaluationReport, FallbackEntry, FallbackReason, Locality, NearestNeighbor,
};
pub use covariance::{CovarianceEstimate, CovarianceMatrix, Estimator};
pub use dtw::{dtw_distance, dtw_distance_early_abandon, DtwConfig, DtwOutcome};
pub use error::{Error, Result};
pub use io::{export_matrix, read_ucr, write_ucr, z_normalize, MatrixFormat};
pub use metric::{EllipsoidMetric, MetricEstimator, Normalization};
pub use parallel::Workers;
pub use series::{validate_dataset, ClassLabel, LabeledDataset, TimeSeries};
pub use synth::{generate, Family, GeneratorSpec};
