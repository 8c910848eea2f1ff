use serde::Serialize;

use super::{logistic_variance, logit, softplus, standard_logistic, Orientation};
use crate::{Error, Result, Scalar};

/// Logistic response `1/(1+e^{∓λ(x−θ)})`.
///
/// Invariants: `λ > 0`, finite `θ`; the value lies in `(0, 1)` and equals
/// exactly `1/2` at `x = θ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogisticSpec<T> {
    steepness: T,
    threshold: T,
    orientation: Orientation,
}

impl<T: Scalar> LogisticSpec<T> {
    pub fn new(steepness: T, threshold: T, orientation: Orientation) -> Result<Self> {
        if !(steepness > T::zero() && steepness.is_finite()) {
            return Err(Error::invalid(
                "steepness",
                steepness.as_f64(),
                "must be finite and > 0",
            ));
        }
        if !threshold.is_finite() {
            return Err(Error::invalid("threshold", threshold.as_f64(), "must be finite"));
        }
        Ok(Self {
            steepness,
            threshold,
            orientation,
        })
    }

    pub fn increasing(steepness: T, threshold: T) -> Result<Self> {
        Self::new(steepness, threshold, Orientation::Increasing)
    }

    pub fn decreasing(steepness: T, threshold: T) -> Result<Self> {
        Self::new(steepness, threshold, Orientation::Decreasing)
    }

    pub fn steepness(&self) -> T {
        self.steepness
    }

    pub fn threshold(&self) -> T {
        self.threshold
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// Signed standard-form argument `z = ±λ(x − θ)`, so that
    /// `eval(x) == standard_logistic(z)`.
    #[inline]
    pub fn argument(&self, x: T) -> T {
        self.orientation.sign::<T>() * self.steepness * (x - self.threshold)
    }

    #[inline]
    pub fn eval(&self, x: T) -> T {
        standard_logistic(self.argument(x))
    }

    /// `±λ f (1 − f)`, sign following the orientation. Bounded by `λ/4`.
    #[inline]
    pub fn derivative(&self, x: T) -> T {
        self.orientation.sign::<T>() * self.steepness * logistic_variance(self.argument(x))
    }

    /// `λ² f (1 − f)(1 − 2f)`; the same expression holds for both
    /// orientations when `f` is the oriented value.
    pub fn second_derivative(&self, x: T) -> T {
        let z = self.argument(x);
        let half = T::lit(0.5);
        -self.steepness * self.steepness * logistic_variance(z) * (half * z).tanh()
    }

    /// Inverse on `(0, 1)`: `θ ± ln(y/(1−y))/λ`.
    pub fn inverse(&self, y: T) -> Result<T> {
        let z = logit(y)?;
        Ok(self.threshold + self.orientation.sign::<T>() * z / self.steepness)
    }

    /// Closed-form antiderivative `±softplus(z)/λ`.
    ///
    /// Increasing responses are anchored to vanish at `−∞`, decreasing ones
    /// at `+∞` (the end where the response itself vanishes).
    pub fn antiderivative(&self, x: T) -> T {
        self.orientation.sign::<T>() * softplus(self.argument(x)) / self.steepness
    }

    /// Odd-power series about the inflection point, truncated at `order`:
    /// `1/2 + z/4 − z³/48 + z⁵/480`.
    pub fn taylor_midpoint(&self, x: T, order: u32) -> Result<T> {
        let z = self.argument(x);
        let mut v = T::lit(0.5) + z / T::lit(4.0);
        match order {
            1 => {}
            3 => v = v - z.powi(3) / T::lit(48.0),
            5 => v = v - z.powi(3) / T::lit(48.0) + z.powi(5) / T::lit(480.0),
            o => return Err(Error::UnsupportedOrder(o)),
        }
        Ok(v)
    }

    /// First-order expansion about `x = 0` (activation only): basal rate plus
    /// the slope at the origin.
    pub fn linear_origin(&self, x: T) -> Result<T> {
        if self.orientation != Orientation::Increasing {
            return Err(Error::OrientationMismatch { expected: "increasing" });
        }
        Ok(self.eval(T::zero()) + self.derivative(T::zero()) * x)
    }

    /// `1 + e^{−λθ}`, the factor that lifts a repression curve to exactly 1 at
    /// zero repressor.
    pub fn scale_factor(&self) -> T {
        T::one() + (-(self.steepness * self.threshold)).exp()
    }

    /// Repression curve normalised to 1 at `x = 0`.
    pub fn scaled_eval(&self, x: T) -> Result<T> {
        if self.orientation != Orientation::Decreasing {
            return Err(Error::OrientationMismatch { expected: "decreasing" });
        }
        let num = self.scale_factor();
        let arg = self.steepness * (x - self.threshold);
        if arg > T::zero() {
            // e^{-arg} form keeps the denominator finite for huge repressor levels
            let e = (-arg).exp();
            Ok(num * e / (T::one() + e))
        } else {
            Ok(num / (T::one() + arg.exp()))
        }
    }

    /// Value at zero input; depends only on the product `λθ`.
    pub fn basal_rate(&self) -> T {
        self.eval(T::zero())
    }

    pub fn with_orientation(&self, orientation: Orientation) -> Self {
        Self { orientation, ..*self }
    }
}
