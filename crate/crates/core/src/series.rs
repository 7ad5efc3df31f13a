//! Domain types: series, labels and labeled datasets.
//!
//! Everything here is immutable after construction. Series data sits behind
//! an `Arc`, so class partitions and clones share storage.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A fixed-length sequence of finite reals.
#[derive(Clone, PartialEq)]
pub struct TimeSeries(Arc<[f64]>);

impl TimeSeries {
    pub fn new(values: impl Into<Vec<f64>>) -> Result<Self> {
        let values: Vec<f64> = values.into();
        if values.is_empty() {
            return Err(Error::EmptySeries);
        }
        if let Some(position) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue { index: 0, position });
        }
        Ok(TimeSeries(values.into()))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Deref for TimeSeries {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl fmt::Debug for TimeSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("TimeSeries").field(&&self.0[..]).finish()
    }
}

/// Class identifier exactly as it appears in the data file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassLabel(pub i64);

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<i64> for ClassLabel {
    fn from(id: i64) -> Self {
        ClassLabel(id)
    }
}

/// Equal-length series with class labels; a training or test split.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    series: Vec<TimeSeries>,
    labels: Vec<ClassLabel>,
    series_length: usize,
    class_counts: BTreeMap<ClassLabel, usize>,
}

/// Checks raw `(values, label)` pairs and builds a dataset.
pub fn validate_dataset<I, V>(raw: I) -> Result<LabeledDataset>
where
    I: IntoIterator<Item = (V, ClassLabel)>,
    V: Into<Vec<f64>>,
{
    let mut series = Vec::new();
    let mut labels = Vec::new();
    let mut series_length = None;
    for (index, (values, label)) in raw.into_iter().enumerate() {
        let values: Vec<f64> = values.into();
        let expected = *series_length.get_or_insert(values.len());
        if values.len() != expected {
            return Err(Error::LengthMismatch {
                index,
                expected,
                found: values.len(),
            });
        }
        let ts = TimeSeries::new(values).map_err(|e| match e {
            Error::NonFiniteValue { position, .. } => Error::NonFiniteValue { index, position },
            other => other,
        })?;
        series.push(ts);
        labels.push(label);
    }
    LabeledDataset::from_parts(series, labels)
}

impl LabeledDataset {
    /// Builds a dataset from already-validated series.
    pub fn from_parts(series: Vec<TimeSeries>, labels: Vec<ClassLabel>) -> Result<Self> {
        assert_eq!(series.len(), labels.len(), "series/label count mismatch");
        let Some(first) = series.first() else {
            return Err(Error::Empty);
        };
        let series_length = first.len();
        if let Some((index, s)) = series.iter().enumerate().find(|(_, s)| s.len() != series_length) {
            return Err(Error::LengthMismatch {
                index,
                expected: series_length,
                found: s.len(),
            });
        }
        let mut class_counts = BTreeMap::new();
        for label in &labels {
            *class_counts.entry(*label).or_insert(0) += 1;
        }
        Ok(LabeledDataset {
            series,
            labels,
            series_length,
            class_counts,
        })
    }

    pub fn len(&self) -> usize {
        self.series.len()
    }

    pub fn is_empty(&self) -> bool {
        self.series.is_empty()
    }

    pub fn series_length(&self) -> usize {
        self.series_length
    }

    pub fn series(&self) -> &[TimeSeries] {
        &self.series
    }

    pub fn labels(&self) -> &[ClassLabel] {
        &self.labels
    }

    pub fn get(&self, index: usize) -> (&TimeSeries, ClassLabel) {
        (&self.series[index], self.labels[index])
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = (&TimeSeries, ClassLabel)> + '_ {
        self.series.iter().zip(self.labels.iter().copied())
    }

    /// Distinct labels in ascending order.
    pub fn classes(&self) -> impl Iterator<Item = ClassLabel> + '_ {
        self.class_counts.keys().copied()
    }

    pub fn class_counts(&self) -> &BTreeMap<ClassLabel, usize> {
        &self.class_counts
    }

    pub fn class_count(&self, label: ClassLabel) -> usize {
        self.class_counts.get(&label).copied().unwrap_or(0)
    }

    /// Splits into one dataset per label, keeping dataset order inside each class.
    pub fn class_partition(&self) -> BTreeMap<ClassLabel, LabeledDataset> {
        let mut parts: BTreeMap<ClassLabel, (Vec<TimeSeries>, Vec<ClassLabel>)> = BTreeMap::new();
        for (s, label) in self.iter() {
            let entry = parts.entry(label).or_default();
            entry.0.push(s.clone());
            entry.1.push(label);
        }
        parts
            .into_iter()
            .map(|(label, (series, labels))| {
                let part = LabeledDataset::from_parts(series, labels)
                    .expect("partition of a valid dataset is valid");
                (label, part)
            })
            .collect()
    }

    /// Applies `f` to every series, keeping labels.
    pub fn map_series(&self, mut f: impl FnMut(&TimeSeries) -> TimeSeries) -> Result<Self> {
        let series = self.series.iter().map(&mut f).collect();
        LabeledDataset::from_parts(series, self.labels.clone())
    }

    /// Raw `(values, label)` pairs, the inverse of [`validate_dataset`].
    pub fn to_raw(&self) -> Vec<(Vec<f64>, ClassLabel)> {
        self.iter().map(|(s, l)| (s.values().to_vec(), l)).collect()
    }
}

/// Free-function form of [`LabeledDataset::class_partition`].
pub fn class_partition(d: &LabeledDataset) -> BTreeMap<ClassLabel, LabeledDataset> {
    d.class_partition()
}
