//! 1-nearest-neighbor classification under a fitted distance.
//!
//! A [`DistanceSpec`] names the distance; [`fit`] learns whatever state it
//! needs from the training split (nothing for Euclidean and DTW, one metric
//! or one metric per class for Mahalanobis). Estimator failures during
//! fitting never abort: the affected class falls back to the identity metric
//! and the event goes into the model's fallback log.

mod curve;
mod spec;

use std::collections::BTreeMap;
use std::time::Instant;

pub use curve::{learning_curve, mean_ratios, pair_rows, CurvePoint, CurveRow, CurveSettings, MeanRatio};
pub use spec::{DistanceSpec, Locality};

use crate::covariance::{diagonal_covariance, pseudo_inverse, sample_covariance, shrinkage_covariance};
use crate::dtw::{dtw_cost_sq, DtwConfig};
use crate::error::{Error, Result};
use crate::metric::{
    diagonal_metric_ignoring_zero_variance, metric_from_covariance, EllipsoidMetric, MetricEstimator,
    Normalization,
};
use crate::parallel::{map_indexed, Workers};
use crate::series::{ClassLabel, LabeledDataset, TimeSeries};

#[derive(Debug, Clone, PartialEq)]
pub enum FallbackReason {
    /// The estimator failed; the identity metric was used instead.
    IdentityMetric { cause: String },
    /// Zero-variance attributes got weight 0 in a diagonal metric.
    ZeroVarianceIgnored { attributes: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FallbackEntry {
    /// `None` for a global metric.
    pub label: Option<ClassLabel>,
    pub reason: FallbackReason,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FittedDistance {
    Euclidean,
    Dtw(DtwConfig),
    Global(EllipsoidMetric),
    ClassBased(BTreeMap<ClassLabel, EllipsoidMetric>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceModel {
    pub spec: DistanceSpec,
    pub fitted: FittedDistance,
    pub fallback_log: Vec<FallbackEntry>,
}

/// Fits `spec` on `train`, using all available workers for per-class fits.
pub fn fit(spec: &DistanceSpec, train: &LabeledDataset) -> Result<DistanceModel> {
    fit_with(spec, train, Workers::Available)
}

pub fn fit_with(spec: &DistanceSpec, train: &LabeledDataset, workers: Workers) -> Result<DistanceModel> {
    spec.validate()?;
    let mut fallback_log = Vec::new();
    let fitted = match *spec {
        DistanceSpec::Euclidean => FittedDistance::Euclidean,
        DistanceSpec::Dtw(cfg) => FittedDistance::Dtw(cfg),
        DistanceSpec::Mahalanobis {
            estimator,
            locality: Locality::Global,
            normalization,
        } => {
            let (metric, log) = learn_metric(train, None, estimator, normalization);
            fallback_log.extend(log);
            FittedDistance::Global(metric)
        }
        DistanceSpec::Mahalanobis {
            estimator,
            locality: Locality::ClassBased,
            normalization,
        } => {
            let parts: Vec<(ClassLabel, LabeledDataset)> = train.class_partition().into_iter().collect();
            let learned = map_indexed(parts.len(), workers, |k| {
                let (label, part) = &parts[k];
                learn_metric(part, Some(*label), estimator, normalization)
            });
            let mut metrics = BTreeMap::new();
            for ((label, _), (metric, log)) in parts.iter().zip(learned) {
                metrics.insert(*label, metric);
                fallback_log.extend(log);
            }
            FittedDistance::ClassBased(metrics)
        }
    };
    for entry in &fallback_log {
        log::debug!("fit {spec}: {entry:?}");
    }
    Ok(DistanceModel {
        spec: *spec,
        fitted,
        fallback_log,
    })
}

fn learn_metric(
    data: &LabeledDataset,
    label: Option<ClassLabel>,
    estimator: MetricEstimator,
    normalization: Normalization,
) -> (EllipsoidMetric, Vec<FallbackEntry>) {
    let n = data.series_length();
    let mut log = Vec::new();
    let mut attempt = || -> Result<EllipsoidMetric> {
        match estimator {
            MetricEstimator::Diagonal => {
                let c = diagonal_covariance(data)?;
                let (metric, dropped) = diagonal_metric_ignoring_zero_variance(&c, normalization)?;
                if !dropped.is_empty() {
                    log.push(FallbackEntry {
                        label,
                        reason: FallbackReason::ZeroVarianceIgnored { attributes: dropped },
                    });
                }
                Ok(metric)
            }
            MetricEstimator::Shrinkage => {
                let c = shrinkage_covariance(data)?;
                metric_from_covariance(&c, MetricEstimator::Shrinkage, normalization)
            }
            MetricEstimator::PseudoInverse => {
                let c = sample_covariance(data)?;
                let p = pseudo_inverse(&c, None)?;
                Ok(EllipsoidMetric::full(p.matrix, Normalization::UnitDeterminant))
            }
        }
    };
    let result = attempt();
    match result {
        Ok(metric) => (metric, log),
        Err(e) => {
            log.push(FallbackEntry {
                label,
                reason: FallbackReason::IdentityMetric { cause: e.to_string() },
            });
            (EllipsoidMetric::identity(n), log)
        }
    }
}

/// A fitted model bound to its training data, ready for queries.
pub struct NearestNeighbor<'a> {
    model: &'a DistanceModel,
    train: &'a LabeledDataset,
    /// Metric used for each training instance (`None` for Euclidean/DTW).
    instance_metrics: Vec<Option<&'a EllipsoidMetric>>,
}

impl<'a> NearestNeighbor<'a> {
    pub fn new(model: &'a DistanceModel, train: &'a LabeledDataset) -> Result<Self> {
        let n = train.series_length();
        let instance_metrics = match &model.fitted {
            FittedDistance::Euclidean | FittedDistance::Dtw(_) => vec![None; train.len()],
            FittedDistance::Global(m) => {
                check_len(m.dim(), n)?;
                vec![Some(m); train.len()]
            }
            FittedDistance::ClassBased(map) => train
                .labels()
                .iter()
                .map(|label| {
                    let m = map.get(label).ok_or(Error::UnknownLabel(*label))?;
                    check_len(m.dim(), n)?;
                    Ok(Some(m))
                })
                .collect::<Result<_>>()?,
        };
        Ok(NearestNeighbor {
            model,
            train,
            instance_metrics,
        })
    }

    /// Index of and distance (`√D`) to the nearest training instance; ties go
    /// to the lowest index.
    pub fn nearest(&self, q: &TimeSeries) -> Result<(usize, f64)> {
        check_len(self.train.series_length(), q.len())?;
        let mut best = f64::INFINITY;
        let mut best_index = 0;
        match &self.model.fitted {
            FittedDistance::Dtw(cfg) => {
                for (k, t) in self.train.series().iter().enumerate() {
                    if let Some(c) = dtw_cost_sq(q, t, cfg.band, best) {
                        if c < best {
                            best = c;
                            best_index = k;
                        }
                    }
                }
            }
            FittedDistance::Euclidean => {
                for (k, t) in self.train.series().iter().enumerate() {
                    let d = sq_euclidean(q, t);
                    if d < best {
                        best = d;
                        best_index = k;
                    }
                }
            }
            FittedDistance::Global(_) | FittedDistance::ClassBased(_) => {
                for (k, t) in self.train.series().iter().enumerate() {
                    let m = self.instance_metrics[k].expect("metric per instance");
                    let d = m.distance_unchecked(q, t);
                    if d < best {
                        best = d;
                        best_index = k;
                    }
                }
            }
        }
        Ok((best_index, best.sqrt()))
    }

    pub fn classify(&self, q: &TimeSeries) -> Result<ClassLabel> {
        let (k, _) = self.nearest(q)?;
        Ok(self.train.labels()[k])
    }
}

fn sq_euclidean(x: &[f64], y: &[f64]) -> f64 {
    EllipsoidMetric::identity(x.len()).distance_unchecked(x, y)
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

impl DistanceModel {
    /// Label of the nearest training instance to `q`.
    pub fn classify(&self, train: &LabeledDataset, q: &TimeSeries) -> Result<ClassLabel> {
        NearestNeighbor::new(self, train)?.classify(q)
    }
}

/// Free-function form of [`DistanceModel::classify`].
pub fn classify(model: &DistanceModel, train: &LabeledDataset, q: &TimeSeries) -> Result<ClassLabel> {
    model.classify(train, q)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationReport {
    pub spec: DistanceSpec,
    pub error_rate: f64,
    pub n_test: usize,
    pub n_errors: usize,
    /// Misclassified test instances per true label (every test label present).
    pub per_class_errors: BTreeMap<ClassLabel, usize>,
    pub predictions: Vec<ClassLabel>,
    pub fallback_log: Vec<FallbackEntry>,
    /// Seconds, fit plus classification.
    pub wall_time: f64,
}

/// Fits on `train` and classifies every instance of `test`.
pub fn evaluate(
    spec: &DistanceSpec,
    train: &LabeledDataset,
    test: &LabeledDataset,
) -> Result<EvaluationReport> {
    evaluate_with(spec, train, test, Workers::Available)
}

pub fn evaluate_with(
    spec: &DistanceSpec,
    train: &LabeledDataset,
    test: &LabeledDataset,
    workers: Workers,
) -> Result<EvaluationReport> {
    let start = Instant::now();
    check_len(train.series_length(), test.series_length())?;
    let model = fit_with(spec, train, workers)?;
    let nn = NearestNeighbor::new(&model, train)?;
    let predictions = map_indexed(test.len(), workers, |k| nn.classify(&test.series()[k]))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;

    let mut per_class_errors: BTreeMap<ClassLabel, usize> = test.classes().map(|l| (l, 0)).collect();
    let mut n_errors = 0;
    for (predicted, truth) in predictions.iter().zip(test.labels()) {
        if predicted != truth {
            n_errors += 1;
            *per_class_errors.get_mut(truth).expect("test label") += 1;
        }
    }
    Ok(EvaluationReport {
        spec: *spec,
        error_rate: n_errors as f64 / test.len() as f64,
        n_test: test.len(),
        n_errors,
        per_class_errors,
        predictions,
        fallback_log: model.fallback_log,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::validate_dataset;

    fn data(rows: &[(&[f64], i64)]) -> LabeledDataset {
        validate_dataset(rows.iter().map(|(v, l)| (v.to_vec(), ClassLabel(*l)))).unwrap()
    }

    fn ts(v: &[f64]) -> TimeSeries {
        TimeSeries::new(v.to_vec()).unwrap()
    }

    #[test]
    fn euclidean_has_no_fitted_state() {
        let train = data(&[(&[0.0, 1.0], 1), (&[1.0, 0.0], 2)]);
        let m = fit(&DistanceSpec::Euclidean, &train).unwrap();
        assert_eq!(m.fitted, FittedDistance::Euclidean);
        assert!(m.fallback_log.is_empty());
    }

    #[test]
    fn class_based_diagonal_builds_one_metric_per_class() {
        let train = data(&[
            (&[0.0, 1.0], 1),
            (&[0.5, 2.0], 1),
            (&[3.0, 0.0], 2),
            (&[4.0, 0.5], 2),
        ]);
        let spec: DistanceSpec = "mahalanobis:diagonal:class".parse().unwrap();
        let m = fit(&spec, &train).unwrap();
        match &m.fitted {
            FittedDistance::ClassBased(map) => {
                assert_eq!(map.len(), 2);
                assert!(map
                    .values()
                    .all(|m| matches!(m.form(), crate::metric::MetricForm::Diagonal(_))));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn single_instance_class_falls_back_to_identity() {
        let train = data(&[(&[0.0, 1.0], 1), (&[0.5, 2.0], 1), (&[3.0, 0.0], 2)]);
        for spec in [
            "mahalanobis:diagonal:class",
            "mahalanobis:shrinkage:class",
            "mahalanobis:pinv:class",
        ] {
            let spec: DistanceSpec = spec.parse().unwrap();
            let m = fit(&spec, &train).unwrap();
            let FittedDistance::ClassBased(map) = &m.fitted else {
                panic!()
            };
            assert!(map[&ClassLabel(2)].is_identity());
            assert!(m.fallback_log.iter().any(|e| e.label == Some(ClassLabel(2))
                && matches!(e.reason, FallbackReason::IdentityMetric { .. })));
            assert_eq!(m.classify(&train, &ts(&[3.0, 0.1])).unwrap(), ClassLabel(2));
        }
    }

    #[test]
    fn zero_variance_attribute_is_logged() {
        let train = data(&[(&[0.0, 1.0], 1), (&[0.5, 1.0], 1), (&[0.7, 1.0], 1)]);
        let spec: DistanceSpec = "mahalanobis:diagonal:global".parse().unwrap();
        let m = fit(&spec, &train).unwrap();
        assert_eq!(
            m.fallback_log,
            vec![FallbackEntry {
                label: None,
                reason: FallbackReason::ZeroVarianceIgnored { attributes: vec![1] }
            }]
        );
    }

    #[test]
    fn single_training_instance_always_wins() {
        let train = data(&[(&[1.0, 2.0, 3.0], 7)]);
        for spec in [
            "euclidean",
            "dtw",
            "mahalanobis:diagonal:global",
            "mahalanobis:shrinkage:class",
        ] {
            let model = fit(&spec.parse().unwrap(), &train).unwrap();
            assert_eq!(
                model.classify(&train, &ts(&[9.0, -4.0, 0.0])).unwrap(),
                ClassLabel(7)
            );
        }
    }

    #[test]
    fn exact_match_is_nearest() {
        let train = data(&[(&[0.0, 0.0], 1), (&[5.0, 1.0], 2), (&[1.0, 5.0], 3)]);
        let model = fit(&DistanceSpec::Euclidean, &train).unwrap();
        assert_eq!(model.classify(&train, &ts(&[5.0, 1.0])).unwrap(), ClassLabel(2));
    }

    #[test]
    fn ties_go_to_lowest_index() {
        let train = data(&[(&[1.0], 2), (&[-1.0], 1), (&[1.0], 3)]);
        let model = fit(&DistanceSpec::Euclidean, &train).unwrap();
        assert_eq!(model.classify(&train, &ts(&[0.0])).unwrap(), ClassLabel(2));
        let model = fit(&DistanceSpec::Dtw(DtwConfig::default()), &train).unwrap();
        assert_eq!(model.classify(&train, &ts(&[0.0])).unwrap(), ClassLabel(2));
    }

    #[test]
    fn dimension_mismatch_on_query() {
        let train = data(&[(&[1.0, 2.0], 1)]);
        let model = fit(&DistanceSpec::Euclidean, &train).unwrap();
        assert!(matches!(
            model.classify(&train, &ts(&[1.0])),
            Err(Error::DimensionMismatch {
                expected: 2,
                found: 1
            })
        ));
        let test = data(&[(&[1.0, 2.0, 3.0], 1)]);
        assert!(evaluate(&DistanceSpec::Euclidean, &train, &test).is_err());
    }

    #[test]
    fn test_equal_to_train_gives_zero_error() {
        let train = data(&[
            (&[0.0, 1.0], 1),
            (&[2.0, 1.0], 2),
            (&[0.0, 3.0], 1),
            (&[4.0, 4.0], 2),
        ]);
        let r = evaluate(&DistanceSpec::Euclidean, &train, &train).unwrap();
        assert_eq!(r.n_errors, 0);
        assert_eq!(r.error_rate, 0.0);
        assert_eq!(r.per_class_errors.values().sum::<usize>(), 0);
    }

    #[test]
    fn error_rate_is_exact_fraction() {
        let train = data(&[(&[0.0], 1), (&[10.0], 2)]);
        let test = data(&[(&[1.0], 1), (&[9.0], 1), (&[8.0], 2)]);
        let r = evaluate(&DistanceSpec::Euclidean, &train, &test).unwrap();
        assert_eq!(r.n_errors, 1);
        assert_eq!(r.error_rate, 1.0 / 3.0);
        assert_eq!(r.per_class_errors[&ClassLabel(1)], 1);
        assert_eq!(r.per_class_errors[&ClassLabel(2)], 0);
    }
}
