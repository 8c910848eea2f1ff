use serde::Serialize;

use super::{standard_logistic, LogisticSpec, Orientation};
use crate::{Error, Result, Scalar};

/// Hill response `xⁿ/(xⁿ+θⁿ)` (increasing) or `θⁿ/(xⁿ+θⁿ)` (decreasing) on
/// `x ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HillSpec<T> {
    coefficient: T,
    threshold: T,
    orientation: Orientation,
}

impl<T: Scalar> HillSpec<T> {
    pub fn new(coefficient: T, threshold: T, orientation: Orientation) -> Result<Self> {
        if !(coefficient > T::zero() && coefficient.is_finite()) {
            return Err(Error::invalid(
                "coefficient",
                coefficient.as_f64(),
                "must be finite and > 0",
            ));
        }
        if !(threshold > T::zero() && threshold.is_finite()) {
            return Err(Error::invalid(
                "threshold",
                threshold.as_f64(),
                "must be finite and > 0",
            ));
        }
        Ok(Self {
            coefficient,
            threshold,
            orientation,
        })
    }

    pub fn increasing(coefficient: T, threshold: T) -> Result<Self> {
        Self::new(coefficient, threshold, Orientation::Increasing)
    }

    pub fn decreasing(coefficient: T, threshold: T) -> Result<Self> {
        Self::new(coefficient, threshold, Orientation::Decreasing)
    }

    pub fn coefficient(&self) -> T {
        self.coefficient
    }

    pub fn threshold(&self) -> T {
        self.threshold
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    fn is_integer_coefficient(&self) -> bool {
        self.coefficient.fract() == T::zero()
    }

    /// Increasing-form value `1/(1+(θ/x)ⁿ)`; exactly 0 at the origin.
    fn activation(&self, x: T) -> T {
        if x == T::zero() {
            return T::zero();
        }
        T::one() / (T::one() + (self.threshold / x).powf(self.coefficient))
    }

    pub fn eval(&self, x: T) -> Result<T> {
        if !(x >= T::zero()) {
            return Err(Error::Domain {
                value: x.as_f64(),
                domain: "[0, inf)",
            });
        }
        Ok(self.eval_clamped(x))
    }

    /// Like [`eval`](Self::eval) but treats negative inputs as zero.
    pub fn eval_clamped(&self, x: T) -> T {
        let x = x.max(T::zero());
        match self.orientation {
            Orientation::Increasing => self.activation(x),
            Orientation::Decreasing => T::one() / (T::one() + (x / self.threshold).powf(self.coefficient)),
        }
    }

    /// `± n θⁿ xⁿ⁻¹/(θⁿ+xⁿ)²`.
    ///
    /// At `x = 0` the limit is returned for integer `n` (0 for `n > 1`,
    /// `±1/θ` for `n = 1`); non-integer `n` fails with
    /// [`Error::HillSingularity`] since higher derivatives blow up like
    /// `x^{n−1}`.
    pub fn derivative(&self, x: T) -> Result<T> {
        let sign = self.orientation.sign::<T>();
        if x < T::zero() {
            return Err(Error::Domain {
                value: x.as_f64(),
                domain: "[0, inf)",
            });
        }
        if x == T::zero() {
            let n = self.coefficient;
            if !self.is_integer_coefficient() || n < T::one() {
                return Err(Error::HillSingularity {
                    exponent: (n - T::one()).as_f64(),
                });
            }
            return Ok(if n == T::one() {
                sign / self.threshold
            } else {
                T::zero()
            });
        }
        let h = self.activation(x);
        Ok(sign * self.coefficient / x * h * (T::one() - h))
    }

    /// `θ (y/(1−y))^{1/n}` (increasing) or `θ ((1−y)/y)^{1/n}` (decreasing).
    pub fn inverse(&self, y: T) -> Result<T> {
        if !(y > T::zero() && y < T::one()) {
            return Err(Error::Domain {
                value: y.as_f64(),
                domain: "(0, 1)",
            });
        }
        let ratio = match self.orientation {
            Orientation::Increasing => y / (T::one() - y),
            Orientation::Decreasing => (T::one() - y) / y,
        };
        Ok(self.threshold * ratio.powf(self.coefficient.recip()))
    }

    /// Closed-form antiderivative of the activation curve for `n ∈ {1, 2}`,
    /// anchored to 0 at `x = 0`.
    pub fn antiderivative_closed(&self, x: T) -> Result<T> {
        if self.orientation != Orientation::Increasing {
            return Err(Error::OrientationMismatch { expected: "increasing" });
        }
        if x < T::zero() {
            return Err(Error::Domain {
                value: x.as_f64(),
                domain: "[0, inf)",
            });
        }
        let th = self.threshold;
        if self.coefficient == T::one() {
            Ok(x - th * (x / th).ln_1p())
        } else if self.coefficient == T::lit(2.0) {
            Ok(x - th * (x / th).atan())
        } else {
            Err(Error::UnsupportedCoefficient(self.coefficient.as_f64()))
        }
    }

    /// Logistic with the same threshold, orientation and midpoint slope:
    /// `λ = n/θ`.
    pub fn match_steepness(&self) -> LogisticSpec<T> {
        LogisticSpec::new(self.coefficient / self.threshold, self.threshold, self.orientation)
            .expect("n/θ is positive for a valid Hill spec")
    }

    /// `|σ(±n ln(x/θ)) − h(x)|`: the Hill curve is the standard logistic of
    /// the log-scaled input.
    pub fn log_input_residual(&self, x: T) -> Result<T> {
        if !(x > T::zero()) {
            return Err(Error::Domain {
                value: x.as_f64(),
                domain: "(0, inf)",
            });
        }
        let z = self.orientation.sign::<T>() * self.coefficient * (x / self.threshold).ln();
        Ok((standard_logistic(z) - self.eval_clamped(x)).abs())
    }
}
