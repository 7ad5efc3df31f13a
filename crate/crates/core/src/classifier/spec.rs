use std::fmt;
use std::str::FromStr;

use crate::dtw::DtwConfig;
use crate::error::{Error, Result};
use crate::metric::{MetricEstimator, Normalization};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Locality {
    Global,
    ClassBased,
}

/// A distance to benchmark.
///
/// String form, as used on the command line:
///
/// ```text
/// euclidean
/// dtw                      dtw:band=10
/// mahalanobis:<estimator>:<locality>[:<normalization>]
///     estimator     shrinkage | diagonal | pinv
///     locality      global | class
///     normalization unit (default) | raw
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DistanceSpec {
    Euclidean,
    Dtw(DtwConfig),
    Mahalanobis {
        estimator: MetricEstimator,
        locality: Locality,
        normalization: Normalization,
    },
}

impl DistanceSpec {
    pub fn mahalanobis(estimator: MetricEstimator, locality: Locality) -> Self {
        DistanceSpec::Mahalanobis {
            estimator,
            locality,
            normalization: Normalization::default(),
        }
    }

    /// Rejects combinations that have no meaning.
    pub fn validate(&self) -> Result<()> {
        if let DistanceSpec::Mahalanobis {
            estimator: MetricEstimator::PseudoInverse,
            normalization: Normalization::RawInverse,
            ..
        } = self
        {
            return Err(Error::InvalidSpec(
                "pseudoinverse metrics are always unit-pseudo-determinant; raw is not available".into(),
            ));
        }
        Ok(())
    }
}

impl fmt::Display for DistanceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistanceSpec::Euclidean => f.write_str("euclidean"),
            DistanceSpec::Dtw(DtwConfig { band: None }) => f.write_str("dtw"),
            DistanceSpec::Dtw(DtwConfig { band: Some(r) }) => write!(f, "dtw:band={r}"),
            DistanceSpec::Mahalanobis {
                estimator,
                locality,
                normalization,
            } => {
                let locality = match locality {
                    Locality::Global => "global",
                    Locality::ClassBased => "class",
                };
                write!(f, "mahalanobis:{}:{locality}", estimator.name())?;
                if *normalization == Normalization::RawInverse {
                    f.write_str(":raw")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for DistanceSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let invalid = |why: &str| Error::InvalidSpec(format!("{s:?}: {why}"));
        let parts: Vec<&str> = s.trim().split(':').collect();
        let spec = match parts.as_slice() {
            ["euclidean" | "euclid" | "ed"] => DistanceSpec::Euclidean,
            ["dtw"] => DistanceSpec::Dtw(DtwConfig::unconstrained()),
            ["dtw", opt] => {
                let radius = opt
                    .strip_prefix("band=")
                    .ok_or_else(|| invalid("expected band=<radius>"))?
                    .parse()
                    .map_err(|_| invalid("band radius must be a non-negative integer"))?;
                DistanceSpec::Dtw(DtwConfig::with_band(radius))
            }
            ["mahalanobis" | "maha", estimator, locality, rest @ ..] => {
                let estimator: MetricEstimator = estimator.parse()?;
                let locality = match *locality {
                    "global" => Locality::Global,
                    "class" | "class-based" | "cb" => Locality::ClassBased,
                    _ => return Err(invalid("locality must be global or class")),
                };
                let normalization = match rest {
                    [] | ["unit" | "norm=unit"] => Normalization::UnitDeterminant,
                    ["raw" | "norm=raw"] => Normalization::RawInverse,
                    _ => return Err(invalid("normalization must be unit or raw")),
                };
                DistanceSpec::Mahalanobis {
                    estimator,
                    locality,
                    normalization,
                }
            }
            ["euclidean" | "euclid" | "ed", ..] => return Err(invalid("euclidean takes no options")),
            _ => return Err(invalid("unrecognized distance")),
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_documented_forms() {
        assert_eq!(
            "euclidean".parse::<DistanceSpec>().unwrap(),
            DistanceSpec::Euclidean
        );
        assert_eq!(
            "dtw:band=10".parse::<DistanceSpec>().unwrap(),
            DistanceSpec::Dtw(DtwConfig::with_band(10))
        );
        assert_eq!(
            "mahalanobis:shrinkage:class".parse::<DistanceSpec>().unwrap(),
            DistanceSpec::mahalanobis(MetricEstimator::Shrinkage, Locality::ClassBased)
        );
        assert_eq!(
            "mahalanobis:diagonal:global:raw".parse::<DistanceSpec>().unwrap(),
            DistanceSpec::Mahalanobis {
                estimator: MetricEstimator::Diagonal,
                locality: Locality::Global,
                normalization: Normalization::RawInverse,
            }
        );
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "euclidean",
            "dtw",
            "dtw:band=3",
            "mahalanobis:diagonal:class",
            "mahalanobis:shrinkage:global:raw",
            "mahalanobis:pinv:class",
        ] {
            assert_eq!(s.parse::<DistanceSpec>().unwrap().to_string(), s);
        }
    }

    #[test]
    fn rejects_misconfiguration() {
        for s in [
            "euclidean:band=3",
            "dtw:band=-1",
            "dtw:window",
            "mahalanobis:cholesky:class",
            "mahalanobis:diagonal:local",
            "mahalanobis:pinv:class:raw",
            "cosine",
        ] {
            assert!(
                matches!(s.parse::<DistanceSpec>(), Err(Error::InvalidSpec(_))),
                "{s}"
            );
        }
    }
}
