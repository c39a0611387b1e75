//! Piecewise-linear lookup curves.
//!
//! Component efficiencies that are only published as plots (low-light
//! efficiency, incidence-angle efficiency, MPPT efficiency) are carried as
//! knot tables and evaluated by linear interpolation. Evaluation outside
//! the knot range clamps to the end values.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurveError {
    #[error("curve has no knots")]
    Empty,
    #[error("curve x values must be strictly increasing (knot {index})")]
    NotIncreasing { index: usize },
    #[error("curve contains a non-finite value (knot {index})")]
    NonFinite { index: usize },
}

/// A 1-D piecewise-linear curve over strictly increasing x knots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(f64, f64)>", into = "Vec<(f64, f64)>")]
pub struct Curve1D {
    knots: Vec<(f64, f64)>,
}

impl Curve1D {
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self, CurveError> {
        if knots.is_empty() {
            return Err(CurveError::Empty);
        }
        for (i, &(x, y)) in knots.iter().enumerate() {
            if !x.is_finite() || !y.is_finite() {
                return Err(CurveError::NonFinite { index: i });
            }
            if i > 0 && x <= knots[i - 1].0 {
                return Err(CurveError::NotIncreasing { index: i });
            }
        }
        Ok(Self { knots })
    }

    /// A curve that evaluates to `y` everywhere.
    pub fn constant(y: f64) -> Self {
        Self { knots: vec![(0.0, y)] }
    }

    pub fn from_slice(knots: &[(f64, f64)]) -> Result<Self, CurveError> {
        Self::new(knots.to_vec())
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    /// Evaluates the curve at `x`, clamping to the end values outside the
    /// knot range.
    pub fn eval(&self, x: f64) -> f64 {
        let k = &self.knots;
        if x <= k[0].0 {
            return k[0].1;
        }
        if x >= k[k.len() - 1].0 {
            return k[k.len() - 1].1;
        }
        // first knot with kx > x; x is strictly inside the range here
        let hi = k.partition_point(|&(kx, _)| kx <= x);
        let (x0, y0) = k[hi - 1];
        let (x1, y1) = k[hi];
        y0 + (x - x0) * (y1 - y0) / (x1 - x0)
    }

    pub fn min_y(&self) -> f64 {
        self.knots.iter().map(|&(_, y)| y).fold(f64::INFINITY, f64::min)
    }

    pub fn max_y(&self) -> f64 {
        self.knots.iter().map(|&(_, y)| y).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Largest absolute segment slope; the Lipschitz constant of `eval`.
    pub fn max_abs_slope(&self) -> f64 {
        self.knots
            .windows(2)
            .map(|w| ((w[1].1 - w[0].1) / (w[1].0 - w[0].0)).abs())
            .fold(0.0, f64::max)
    }
}

impl TryFrom<Vec<(f64, f64)>> for Curve1D {
    type Error = CurveError;
    fn try_from(knots: Vec<(f64, f64)>) -> Result<Self, CurveError> {
        Self::new(knots)
    }
}

impl From<Curve1D> for Vec<(f64, f64)> {
    fn from(c: Curve1D) -> Self {
        c.knots
    }
}
