//! Scalar sigmoid analytics: logistic and Hill families.
//!
//! Orientation selects activation (increasing) or repression (decreasing).
//! Every logistic quantity is computed from the standard logistic
//! `σ(z) = 1/(1+e^{−z})` of the signed argument `z = ±λ(x − θ)`.

mod hill;
mod logistic;
mod samuilik;

use serde::{Deserialize, Serialize};

use crate::{Result, Scalar};

pub use hill::HillSpec;
pub use logistic::LogisticSpec;
pub use samuilik::SamuilikSpec;

/// Regulatory sign of a response: activation or repression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    Increasing,
    Decreasing,
}

impl Orientation {
    /// `+1` for increasing, `−1` for decreasing.
    #[inline]
    pub fn sign<T: Scalar>(self) -> T {
        match self {
            Orientation::Increasing => T::one(),
            Orientation::Decreasing => -T::one(),
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Orientation::Increasing => Orientation::Decreasing,
            Orientation::Decreasing => Orientation::Increasing,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Orientation::Increasing => "increasing",
            Orientation::Decreasing => "decreasing",
        }
    }
}

/// Standard logistic `1/(1+e^{−z})`.
///
/// Only `exp(−|z|)` is ever formed, so the intermediate stays in `(0, 1]`
/// for every finite `z`.
#[inline]
pub fn standard_logistic<T: Scalar>(z: T) -> T {
    let e = (-z.abs()).exp();
    let r = T::one() / (T::one() + e);
    if z >= T::zero() {
        r
    } else {
        e * r
    }
}

/// `σ(z)·(1 − σ(z))` without cancellation in the tails.
#[inline]
pub(crate) fn logistic_variance<T: Scalar>(z: T) -> T {
    let e = (-z.abs()).exp();
    let d = T::one() + e;
    e / (d * d)
}

/// Stable `ln(1 + e^z)`.
#[inline]
pub fn softplus<T: Scalar>(z: T) -> T {
    z.max(T::zero()) + (-z.abs()).exp().ln_1p()
}

/// `ln(y/(1−y))` for `y ∈ (0, 1)`.
pub fn logit<T: Scalar>(y: T) -> Result<T> {
    if !(y > T::zero() && y < T::one()) {
        return Err(crate::Error::Domain {
            value: y.as_f64(),
            domain: "(0, 1)",
        });
    }
    Ok(y.ln() - (-y).ln_1p())
}

/// A single regulatory response attached to a network edge.
///
/// `Proportional` is the linear input `g(s) = s`, used for the
/// mRNA→protein translation step of two-stage expression models.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Response<T> {
    Logistic(LogisticSpec<T>),
    Hill(HillSpec<T>),
    Proportional,
}

impl<T: Scalar> Response<T> {
    /// Edge value at source level `x`. Hill edges clamp `x < 0` to zero.
    #[inline]
    pub fn value(&self, x: T) -> T {
        match self {
            Response::Logistic(s) => s.eval(x),
            Response::Hill(s) => s.eval_clamped(x),
            Response::Proportional => x,
        }
    }

    /// Derivative of the edge value with respect to the source level.
    pub fn slope(&self, x: T) -> Result<T> {
        match self {
            Response::Logistic(s) => Ok(s.derivative(x)),
            Response::Hill(s) => s.derivative(x.max(T::zero())),
            Response::Proportional => Ok(T::one()),
        }
    }

    pub fn as_logistic(&self) -> Option<&LogisticSpec<T>> {
        match self {
            Response::Logistic(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_logistic(&self) -> bool {
        matches!(self, Response::Logistic(_))
    }

    /// Supremum of the edge value over the nonnegative orthant, when finite.
    pub fn supremum(&self) -> Option<T> {
        match self {
            Response::Logistic(_) | Response::Hill(_) => Some(T::one()),
            Response::Proportional => None,
        }
    }

    pub fn orientation(&self) -> Orientation {
        match self {
            Response::Logistic(s) => s.orientation(),
            Response::Hill(s) => s.orientation(),
            Response::Proportional => Orientation::Increasing,
        }
    }
}

impl<T> From<LogisticSpec<T>> for Response<T> {
    fn from(s: LogisticSpec<T>) -> Self {
        Response::Logistic(s)
    }
}

impl<T> From<HillSpec<T>> for Response<T> {
    fn from(s: HillSpec<T>) -> Self {
        Response::Hill(s)
    }
}
