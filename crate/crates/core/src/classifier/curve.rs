use crate::error::{Error, Result};
use crate::io::z_normalize_dataset;
use crate::metric::MetricEstimator;
use crate::parallel::Workers;
use crate::synth::{derive_seed, generate, Family, GeneratorSpec};

use super::{evaluate_with, DistanceSpec, Locality};

/// Seed component reserved for the per-repeat test set; train sizes never reach it.
const TEST_SET: u64 = u64::MAX;

#[derive(Debug, Clone, PartialEq)]
pub struct CurveRow {
    pub family: Family,
    pub train_size: usize,
    pub repeat: usize,
    pub spec: DistanceSpec,
    pub error_rate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub family: Family,
    pub train_size: usize,
    pub repeat: usize,
    pub accuracy_euclidean: f64,
    pub accuracy_mahalanobis: f64,
    /// `accuracy_mahalanobis / accuracy_euclidean`; infinite when Euclidean gets nothing right.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeanRatio {
    pub family: Family,
    pub train_size: usize,
    pub repeats: usize,
    pub mean_ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSettings {
    pub n_test_per_class: usize,
    pub repeats: usize,
    pub seed: u64,
    /// z-normalize every generated series, as in the UCR benchmark data.
    pub z_normalize: bool,
    pub workers: Workers,
}

impl Default for CurveSettings {
    fn default() -> Self {
        CurveSettings {
            n_test_per_class: 1000,
            repeats: 10,
            seed: 0,
            z_normalize: true,
            workers: Workers::Available,
        }
    }
}

fn curve_specs() -> [DistanceSpec; 2] {
    [
        DistanceSpec::Euclidean,
        DistanceSpec::mahalanobis(MetricEstimator::Diagonal, Locality::ClassBased),
    ]
}

/// Euclidean versus class-based diagonal Mahalanobis on synthetic data.
///
/// Within a repeat the test set is fixed; every `(repeat, size)` pair gets an
/// independently seeded training set. Rows are ordered by repeat, then size
/// (in the given order), then Euclidean before Mahalanobis.
pub fn learning_curve(family: Family, sizes: &[usize], settings: &CurveSettings) -> Result<Vec<CurveRow>> {
    if sizes.contains(&0) {
        return Err(Error::InvalidSpec("training sizes must be positive".into()));
    }
    let draw = |per_class_count, seed| -> Result<_> {
        let d = generate(&GeneratorSpec {
            family,
            per_class_count,
            seed,
        })?;
        Ok(if settings.z_normalize {
            z_normalize_dataset(&d)
        } else {
            d
        })
    };
    let mut rows = Vec::with_capacity(settings.repeats * sizes.len() * 2);
    for repeat in 0..settings.repeats {
        let test = draw(
            settings.n_test_per_class,
            derive_seed(settings.seed, &[repeat as u64, TEST_SET]),
        )?;
        for &size in sizes {
            let train = draw(size, derive_seed(settings.seed, &[repeat as u64, size as u64]))?;
            for spec in curve_specs() {
                let report = evaluate_with(&spec, &train, &test, settings.workers)?;
                rows.push(CurveRow {
                    family,
                    train_size: size,
                    repeat,
                    spec,
                    error_rate: report.error_rate,
                });
            }
        }
    }
    Ok(rows)
}

/// Joins the Euclidean and Mahalanobis rows of each `(family, size, repeat)`.
pub fn pair_rows(rows: &[CurveRow]) -> Vec<CurvePoint> {
    let [euclid, maha] = curve_specs();
    let mut points = Vec::new();
    for e in rows.iter().filter(|r| r.spec == euclid) {
        let Some(m) = rows.iter().find(|r| {
            r.spec == maha && r.family == e.family && r.train_size == e.train_size && r.repeat == e.repeat
        }) else {
            continue;
        };
        let accuracy_euclidean = 1.0 - e.error_rate;
        let accuracy_mahalanobis = 1.0 - m.error_rate;
        points.push(CurvePoint {
            family: e.family,
            train_size: e.train_size,
            repeat: e.repeat,
            accuracy_euclidean,
            accuracy_mahalanobis,
            ratio: accuracy_mahalanobis / accuracy_euclidean,
        });
    }
    points
}

/// Mean ratio per `(family, size)`, in first-appearance order.
pub fn mean_ratios(points: &[CurvePoint]) -> Vec<MeanRatio> {
    let mut out: Vec<MeanRatio> = Vec::new();
    for p in points {
        match out
            .iter_mut()
            .find(|m| m.family == p.family && m.train_size == p.train_size)
        {
            Some(m) => {
                m.mean_ratio += p.ratio;
                m.repeats += 1;
            }
            None => out.push(MeanRatio {
                family: p.family,
                train_size: p.train_size,
                repeats: 1,
                mean_ratio: p.ratio,
            }),
        }
    }
    for m in &mut out {
        m.mean_ratio /= m.repeats as f64;
    }
    out
}
