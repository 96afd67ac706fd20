//! Residual comparison.
//!
//! A float residual `r` passes when `|r| <= eps_abs + eps_rel * scale`, where
//! `scale` is the largest absolute entry of the tensors being compared. Exact
//! residuals pass only when they are zero.

use std::fmt;

use crate::error::GeometryError;
use crate::scalar::Scalar;

/// Factor applied to the bound to separate `Borderline` from `Fails`.
pub const BORDERLINE_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub eps_rel: f64,
    pub eps_abs: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            eps_rel: 1e-9,
            eps_abs: 1e-12,
        }
    }
}

impl Tolerance {
    pub fn new(eps_rel: f64, eps_abs: f64) -> Result<Self, GeometryError> {
        if eps_rel > 0.0 && eps_abs > 0.0 {
            Ok(Tolerance { eps_rel, eps_abs })
        } else {
            Err(GeometryError::InvalidTolerance)
        }
    }

    /// Same value for both the relative and the absolute part.
    pub fn uniform(eps: f64) -> Result<Self, GeometryError> {
        Self::new(eps, eps)
    }

    pub fn bound(&self, scale: f64) -> f64 {
        self.eps_abs + self.eps_rel * scale.abs()
    }

    /// Classifies `residual` against `scale`.
    pub fn judge<S: Scalar>(&self, residual: &S, scale: &S) -> Check<S> {
        let residual = residual.abs();
        if S::EXACT {
            let verdict = if residual.is_zero() {
                Verdict::Holds
            } else {
                Verdict::Fails
            };
            return Check {
                verdict,
                residual,
                bound: 0.0,
            };
        }
        let bound = self.bound(scale.to_f64());
        let r = residual.to_f64();
        let verdict = if r <= bound {
            Verdict::Holds
        } else if r <= BORDERLINE_FACTOR * bound {
            Verdict::Borderline
        } else {
            // NaN lands here too
            Verdict::Fails
        };
        Check {
            verdict,
            residual,
            bound,
        }
    }

    /// `true` when `value` is zero at the given scale.
    pub fn is_zero<S: Scalar>(&self, value: &S, scale: &S) -> bool {
        self.judge(value, scale).holds()
    }
}

/// Tri-state outcome of a residual check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Holds,
    /// Above the bound but within [`BORDERLINE_FACTOR`] times it.
    Borderline,
    Fails,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Borderline => "borderline",
            Verdict::Fails => "fails",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A verdict together with the residual that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Check<S> {
    pub verdict: Verdict,
    pub residual: S,
    /// Float bound the residual was compared against; `0` in exact mode.
    pub bound: f64,
}

impl<S: Scalar> Check<S> {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    pub fn fails(&self) -> bool {
        self.verdict == Verdict::Fails
    }

    /// Combines two checks on the same statement, keeping the worse one.
    pub fn worst(self, other: Check<S>) -> Check<S> {
        fn rank(v: Verdict) -> u8 {
            match v {
                Verdict::Holds => 0,
                Verdict::Borderline => 1,
                Verdict::Fails => 2,
            }
        }
        if rank(other.verdict) > rank(self.verdict) || (other.verdict == self.verdict && other.residual > self.residual)
        {
            other
        } else {
            self
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn rejects_nonpositive() {
        assert!(Tolerance::new(0.0, 1e-12).is_err());
        assert!(Tolerance::new(1e-9, -1.0).is_err());
    }

    #[test]
    fn float_tristate() {
        let tol = Tolerance::default();
        assert_eq!(tol.judge(&1e-13, &1.0).verdict, Verdict::Holds);
        // bound at scale 1 is 1.001e-9
        assert_eq!(tol.judge(&5e-9, &1.0).verdict, Verdict::Borderline);
        assert_eq!(tol.judge(&1e-7, &1.0).verdict, Verdict::Fails);
        assert_eq!(tol.judge(&f64::NAN, &1.0).verdict, Verdict::Fails);
        assert_eq!(tol.judge(&-1e-13, &1.0).residual, 1e-13);
    }

    #[test]
    fn exact_is_strict() {
        let tol = Tolerance::default();
        let tiny = Rational::ratio(1, 1_000_000_000_000_000);
        assert!(tol.judge(&Rational::from_i64(0), &Rational::from_i64(1)).holds());
        assert!(tol.judge(&tiny, &Rational::from_i64(1)).fails());
    }
}
