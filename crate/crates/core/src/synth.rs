//! Seeded generators for Cylinder-Bell-Funnel, Control Charts and Waveform.
//!
//! Every instance draws from its own ChaCha8 stream: the generator is seeded
//! with the spec's seed and the stream id is `(class index << 32) | instance
//! index`. Asking for more instances per class therefore never changes the
//! instances already produced.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::series::{ClassLabel, LabeledDataset, TimeSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Cbf,
    ControlCharts,
    Waveform,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Cbf, Family::ControlCharts, Family::Waveform];

    pub fn name(self) -> &'static str {
        match self {
            Family::Cbf => "cbf",
            Family::ControlCharts => "cc",
            Family::Waveform => "waveform",
        }
    }

    pub fn class_count(self) -> usize {
        match self {
            Family::Cbf | Family::Waveform => 3,
            Family::ControlCharts => 6,
        }
    }

    pub fn series_length(self) -> usize {
        match self {
            Family::Cbf => 128,
            Family::ControlCharts => 60,
            Family::Waveform => 21,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cbf" => Ok(Family::Cbf),
            "cc" | "control" | "controlcharts" => Ok(Family::ControlCharts),
            "waveform" | "wave" => Ok(Family::Waveform),
            _ => Err(Error::UnknownGenerator(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GeneratorSpec {
    pub family: Family,
    pub per_class_count: usize,
    pub seed: u64,
}

/// Generates `per_class_count` instances of each class, class by class.
/// Labels are `1..=class_count`.
pub fn generate(spec: &GeneratorSpec) -> Result<LabeledDataset> {
    if spec.per_class_count == 0 {
        return Err(Error::Empty);
    }
    let mut series = Vec::with_capacity(spec.family.class_count() * spec.per_class_count);
    let mut labels = Vec::with_capacity(series.capacity());
    for class in 0..spec.family.class_count() {
        for i in 0..spec.per_class_count {
            let mut rng = instance_rng(spec.seed, class, i);
            let values = match spec.family {
                Family::Cbf => cbf(class, &mut rng),
                Family::ControlCharts => control_chart(class, &mut rng),
                Family::Waveform => waveform(class, &mut rng),
            };
            series.push(TimeSeries::new(values)?);
            labels.push(ClassLabel(class as i64 + 1));
        }
    }
    LabeledDataset::from_parts(series, labels)
}

fn instance_rng(seed: u64, class: usize, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((class as u64) << 32) | index as u64);
    rng
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// Cylinder (0), bell (1), funnel (2) over `t = 1..=128`.
fn cbf(class: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let a = rng.random_range(16.0..32.0_f64).floor();
    let b = (a + rng.random_range(32.0..96.0_f64).floor()).min(128.0);
    let amplitude = 6.0 + normal(rng);
    (1..=128)
        .map(|t| {
            let t = t as f64;
            let inside = (a..=b).contains(&t);
            let shape = if !inside {
                0.0
            } else {
                match class {
                    0 => 1.0,
                    1 => (t - a) / (b - a),
                    _ => (b - t) / (b - a),
                }
            };
            amplitude * shape + normal(rng)
        })
        .collect()
}

/// Normal, cyclic, increasing, decreasing, upward shift, downward shift
/// over `t = 1..=60`.
fn control_chart(class: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    const MEAN: f64 = 30.0;
    const SPREAD: f64 = 2.0;
    let amplitude = rng.random_range(10.0..15.0);
    let period = rng.random_range(10.0..15.0);
    let gradient = rng.random_range(0.2..0.5);
    let shift = rng.random_range(7.5..20.0);
    let onset = rng.random_range(20.0..40.0);
    (1..=60)
        .map(|t| {
            let t = t as f64;
            let base = MEAN + rng.random_range(-3.0..3.0) * SPREAD;
            let step = if t >= onset { 1.0 } else { 0.0 };
            base + match class {
                0 => 0.0,
                1 => amplitude * (2.0 * std::f64::consts::PI * t / period).sin(),
                2 => gradient * t,
                3 => -gradient * t,
                4 => step * shift,
                _ => -step * shift,
            }
        })
        .collect()
}

/// Convex mixtures of two triangular bases plus unit Gaussian noise, `t = 1..=21`.
fn waveform(class: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    const PEAKS: [f64; 3] = [7.0, 15.0, 11.0];
    let (first, second) = match class {
        0 => (0, 1),
        1 => (0, 2),
        _ => (1, 2),
    };
    let u: f64 = rng.random_range(0.0..1.0);
    let h = |base: usize, t: f64| (6.0 - (t - PEAKS[base]).abs()).max(0.0);
    (1..=21)
        .map(|t| {
            let t = t as f64;
            u * h(first, t) + (1.0 - u) * h(second, t) + normal(rng)
        })
        .collect()
}

/// SplitMix64 finalizer; used to derive independent seeds.
pub fn mix_seed(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for component `parts` under `seed`, e.g. `(repeat, train_size)`.
pub fn derive_seed(seed: u64, parts: &[u64]) -> u64 {
    parts.iter().fold(mix_seed(seed), |acc, &p| mix_seed(acc ^ p))
}
