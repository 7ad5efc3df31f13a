//! Dynamic Time Warping with squared-difference cost (p = 2).
//!
//! Matchings are monotonic, anchored at both ends, and advance by
//! `(1,0)`, `(0,1)` or `(1,1)`. An optional Sakoe-Chiba band excludes cells
//! with `|i − j| > r`. The DP keeps two rows sized by the shorter series and
//! accumulates squared costs; the square root is taken once at the end.

use crate::error::{Error, Result};
use crate::series::TimeSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct DtwConfig {
    /// Sakoe-Chiba radius; `None` is unconstrained.
    pub band: Option<usize>,
}

impl DtwConfig {
    pub fn unconstrained() -> Self {
        DtwConfig { band: None }
    }

    pub fn with_band(radius: usize) -> Self {
        DtwConfig { band: Some(radius) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DtwOutcome {
    Within(f64),
    Exceeded,
}

impl DtwOutcome {
    pub fn value(self) -> Option<f64> {
        match self {
            DtwOutcome::Within(v) => Some(v),
            DtwOutcome::Exceeded => None,
        }
    }
}

fn check(x: &[f64], y: &[f64], cfg: DtwConfig) -> Result<()> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::EmptySeries);
    }
    if let Some(band) = cfg.band {
        if band < x.len().abs_diff(y.len()) {
            return Err(Error::InfeasibleBand {
                band,
                left: x.len(),
                right: y.len(),
            });
        }
    }
    Ok(())
}

/// DTW distance `√(min_Γ Σ (xᵢ − yⱼ)²)`.
pub fn dtw_distance(x: &TimeSeries, y: &TimeSeries, cfg: DtwConfig) -> Result<f64> {
    check(x, y, cfg)?;
    let cost = dtw_cost_sq(x, y, cfg.band, f64::INFINITY).expect("no cutoff");
    Ok(cost.sqrt())
}

/// DTW with early abandoning against `cutoff` (a distance, not squared).
///
/// Returns the exact distance whenever it is `≤ cutoff`, otherwise
/// [`DtwOutcome::Exceeded`].
pub fn dtw_distance_early_abandon(
    x: &TimeSeries,
    y: &TimeSeries,
    cfg: DtwConfig,
    cutoff: f64,
) -> Result<DtwOutcome> {
    check(x, y, cfg)?;
    if cutoff.is_nan() || cutoff < 0.0 {
        return Err(Error::InvalidSpec(format!("cutoff must be >= 0, got {cutoff}")));
    }
    // Squaring can round below the true cost of a pair sitting exactly at
    // the cutoff; the slack keeps such pairs from being abandoned.
    let limit = cutoff * cutoff * (1.0 + 4.0 * f64::EPSILON);
    Ok(match dtw_cost_sq(x, y, cfg.band, limit) {
        Some(c) if c.sqrt() <= cutoff => DtwOutcome::Within(c.sqrt()),
        _ => DtwOutcome::Exceeded,
    })
}

/// Squared-cost DP over raw slices, without validation.
///
/// Returns `None` as soon as a whole row exceeds `abandon_above`. The caller
/// must ensure both slices are nonempty and the band is feasible.
pub fn dtw_cost_sq(x: &[f64], y: &[f64], band: Option<usize>, abandon_above: f64) -> Option<f64> {
    // Iterate rows over the longer series so the scratch rows are short.
    let (rows, cols) = if x.len() >= y.len() { (x, y) } else { (y, x) };
    let n = rows.len();
    let m = cols.len();
    let r = band.unwrap_or(n.max(m));

    let mut prev = vec![f64::INFINITY; m];
    let mut curr = vec![f64::INFINITY; m];

    for (i, &a) in rows.iter().enumerate() {
        let lo = i.saturating_sub(r);
        let hi = (i + r).min(m - 1);
        curr.fill(f64::INFINITY);
        let mut row_min = f64::INFINITY;
        for j in lo..=hi {
            let d = a - cols[j];
            let cost = d * d;
            let best = if i == 0 && j == 0 {
                0.0
            } else {
                let up = prev[j];
                let left = if j > 0 { curr[j - 1] } else { f64::INFINITY };
                let diag = if j > 0 { prev[j - 1] } else { f64::INFINITY };
                diag.min(up).min(left)
            };
            let v = cost + best;
            curr[j] = v;
            if v < row_min {
                row_min = v;
            }
        }
        if row_min > abandon_above {
            return None;
        }
        std::mem::swap(&mut prev, &mut curr);
    }
    Some(prev[m - 1])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ts(v: &[f64]) -> TimeSeries {
        TimeSeries::new(v.to_vec()).unwrap()
    }

    // Exhaustive minimum over all step-continuous monotonic matchings.
    fn brute(x: &[f64], y: &[f64], i: usize, j: usize) -> f64 {
        let d = x[i] - y[j];
        let here = d * d;
        if i == x.len() - 1 && j == y.len() - 1 {
            return here;
        }
        let mut best = f64::INFINITY;
        if i + 1 < x.len() {
            best = best.min(brute(x, y, i + 1, j));
        }
        if j + 1 < y.len() {
            best = best.min(brute(x, y, i, j + 1));
        }
        if i + 1 < x.len() && j + 1 < y.len() {
            best = best.min(brute(x, y, i + 1, j + 1));
        }
        here + best
    }

    #[test]
    fn identical_series_cost_zero() {
        let x = ts(&[1.0, -2.0, 3.5, 0.0]);
        assert_eq!(dtw_distance(&x, &x, DtwConfig::default()).unwrap(), 0.0);
        assert_eq!(dtw_distance(&x, &x, DtwConfig::with_band(0)).unwrap(), 0.0);
    }

    #[test]
    fn small_unequal_example_matches_enumeration() {
        let x = [0.0, 0.0, 1.0];
        let y = [0.0, 1.0];
        let expected = brute(&x, &y, 0, 0).sqrt();
        assert_eq!(expected, 0.0);
        assert_eq!(
            dtw_distance(&ts(&x), &ts(&y), DtwConfig::default()).unwrap(),
            expected
        );
    }

    #[test]
    fn not_larger_than_euclidean() {
        let x = ts(&[0.0, 1.0, 2.0, 1.0, 0.0]);
        let y = ts(&[1.0, 2.0, 1.0, 0.0, 0.0]);
        let e: f64 = x
            .iter()
            .zip(y.iter())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        assert!(dtw_distance(&x, &y, DtwConfig::default()).unwrap() <= e);
        // band 0 forces the diagonal matching
        assert_eq!(dtw_distance(&x, &y, DtwConfig::with_band(0)).unwrap(), e);
    }

    #[test]
    fn errors() {
        let x = ts(&[1.0, 2.0, 3.0]);
        let y = ts(&[1.0]);
        assert!(matches!(
            dtw_distance(&x, &y, DtwConfig::with_band(1)),
            Err(Error::InfeasibleBand {
                band: 1,
                left: 3,
                right: 1
            })
        ));
        assert!(dtw_distance(&x, &y, DtwConfig::with_band(2)).is_ok());
        assert!(matches!(dtw_cost_check_empty(), Err(Error::EmptySeries)));
    }

    fn dtw_cost_check_empty() -> Result<()> {
        check(&[], &[1.0], DtwConfig::default())
    }

    #[test]
    fn early_abandon_cases() {
        let x = ts(&[0.0, 1.0, 2.0]);
        let y = ts(&[3.0, 5.0, 7.0]);
        assert_eq!(
            dtw_distance_early_abandon(&x, &x, DtwConfig::default(), 0.0).unwrap(),
            DtwOutcome::Within(0.0)
        );
        assert_eq!(
            dtw_distance_early_abandon(&x, &y, DtwConfig::default(), 0.0).unwrap(),
            DtwOutcome::Exceeded
        );
        let full = dtw_distance(&x, &y, DtwConfig::default()).unwrap();
        assert_eq!(
            dtw_distance_early_abandon(&x, &y, DtwConfig::default(), full).unwrap(),
            DtwOutcome::Within(full)
        );
        assert!(dtw_distance_early_abandon(&x, &y, DtwConfig::default(), -1.0).is_err());
    }
}
