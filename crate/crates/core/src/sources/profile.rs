use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A bounded function on [0, 1] (chordwise or spanwise coordinate).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Profile {
    Linear {
        start: f64,
        end: f64,
    },
    /// `scale * x^exponent`.
    Power {
        scale: f64,
        exponent: f64,
    },
    /// Piecewise-linear through `(x, value)` points sorted by `x`; clamped outside.
    Table {
        points: Vec<[f64; 2]>,
    },
}

impl Profile {
    pub fn constant(value: f64) -> Self {
        Profile::Linear {
            start: value,
            end: value,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Profile::Linear { start, end } => {
                if !(start.is_finite() && end.is_finite()) {
                    return Err(Error::Config("linear profile values must be finite".into()));
                }
            }
            Profile::Power { scale, exponent } => {
                if !(scale.is_finite() && exponent.is_finite() && *exponent >= 0.0) {
                    return Err(Error::Config(
                        "power profile needs a finite scale and exponent >= 0".into(),
                    ));
                }
            }
            Profile::Table { points } => {
                if points.is_empty() {
                    return Err(Error::Config("profile table is empty".into()));
                }
                if points
                    .iter()
                    .any(|p| !(p[0].is_finite() && p[1].is_finite()))
                {
                    return Err(Error::Config("profile table values must be finite".into()));
                }
                if points.windows(2).any(|w| w[1][0] <= w[0][0]) {
                    return Err(Error::Config(
                        "profile table abscissae must increase".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Profile::Linear { start, end } => start + (end - start) * x,
            Profile::Power { scale, exponent } => scale * x.max(0.0).powf(*exponent),
            Profile::Table { points } => {
                let first = points[0];
                let last = points[points.len() - 1];
                if x <= first[0] {
                    return first[1];
                }
                if x >= last[0] {
                    return last[1];
                }
                let k = points.partition_point(|p| p[0] <= x);
                let (a, b) = (points[k - 1], points[k]);
                a[1] + (b[1] - a[1]) * (x - a[0]) / (b[0] - a[0])
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_interpolates_and_clamps() {
        let p = Profile::Table {
            points: vec![[0.0, 1.0], [0.5, 0.5], [1.0, 0.4]],
        };
        p.validate().unwrap();
        assert_eq!(p.eval(-1.0), 1.0);
        assert!((p.eval(0.25) - 0.75).abs() < 1e-15);
        assert!((p.eval(0.75) - 0.45).abs() < 1e-15);
        assert_eq!(p.eval(2.0), 0.4);
    }

    #[test]
    fn unsorted_table_rejected() {
        let p = Profile::Table {
            points: vec![[0.5, 1.0], [0.2, 0.5]],
        };
        assert!(p.validate().is_err());
    }
}
