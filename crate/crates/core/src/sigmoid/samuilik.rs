use serde::Serialize;

use super::standard_logistic;
use crate::{Error, Result, Scalar};

/// Weighted-sum comparison response `1/(1+e^{−μ(wx−θ)})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SamuilikSpec<T> {
    steepness: T,
    weight: T,
    threshold: T,
}

impl<T: Scalar> SamuilikSpec<T> {
    pub fn new(steepness: T, weight: T, threshold: T) -> Result<Self> {
        if !(steepness > T::zero() && steepness.is_finite()) {
            return Err(Error::invalid(
                "steepness",
                steepness.as_f64(),
                "must be finite and > 0",
            ));
        }
        Ok(Self {
            steepness,
            weight,
            threshold,
        })
    }

    pub fn steepness(&self) -> T {
        self.steepness
    }

    pub fn weight(&self) -> T {
        self.weight
    }

    pub fn threshold(&self) -> T {
        self.threshold
    }

    pub fn eval(&self, x: T) -> T {
        standard_logistic(self.steepness * (self.weight * x - self.threshold))
    }

    /// Inflection point `θ/w`.
    pub fn critical_point(&self) -> Result<T> {
        if self.weight == T::zero() {
            return Err(Error::ZeroWeight);
        }
        Ok(self.threshold / self.weight)
    }
}
