use serde::Serialize;

use crate::sigmoid::{LogisticSpec, Orientation};
use crate::{Error, Result, Scalar};

/// Linear analysis of `dN/dt = κ f(N(t−τ)) − γ N` with decreasing `f`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HopfReport<T> {
    /// `N*`; absent for reports built directly from `β`.
    pub equilibrium: Option<T>,
    pub gamma: T,
    /// `β = −κ f'(N*) = κλ f(1−f)`.
    pub beta: T,
    /// `√(β² − γ²)`, present only when `β > γ`.
    pub omega: Option<T>,
    /// `τ_c(k) = (arccos(−γ/β) + 2πk)/ω`, `k = 0..=k_max`; empty when the
    /// equilibrium is stable for every delay.
    pub critical_delays: Vec<T>,
}

impl<T: Scalar> HopfReport<T> {
    /// Report for a given loop slope `β` and degradation `γ`.
    pub fn from_beta(beta: T, gamma: T, k_max: usize) -> Result<Self> {
        if !(gamma > T::zero() && gamma.is_finite()) {
            return Err(Error::invalid("gamma", gamma.as_f64(), "must be finite and > 0"));
        }
        if !(beta >= T::zero() && beta.is_finite()) {
            return Err(Error::invalid("beta", beta.as_f64(), "must be finite and >= 0"));
        }
        if beta <= gamma {
            return Ok(Self {
                equilibrium: None,
                gamma,
                beta,
                omega: None,
                critical_delays: Vec::new(),
            });
        }
        let omega = ((beta - gamma) * (beta + gamma)).sqrt();
        let phase = (-gamma / beta).acos();
        let two_pi = T::lit(2.0) * T::PI();
        let critical_delays = (0..=k_max)
            .map(|k| (phase + two_pi * T::lit(k as f64)) / omega)
            .collect();
        Ok(Self {
            equilibrium: None,
            gamma,
            beta,
            omega: Some(omega),
            critical_delays,
        })
    }

    pub fn has_hopf(&self) -> bool {
        self.omega.is_some()
    }

    /// `|iω + γ + β e^{−iωτ}|` at the given delay.
    pub fn characteristic_residual(&self, tau: T) -> Option<T> {
        let w = self.omega?;
        let re = self.gamma + self.beta * (w * tau).cos();
        let im = w - self.beta * (w * tau).sin();
        Some(re.hypot(im))
    }
}

fn check_feedback<T: Scalar>(kappa: T, gamma: T, response: &LogisticSpec<T>) -> Result<()> {
    if !(kappa >= T::zero() && kappa.is_finite()) {
        return Err(Error::invalid("kappa", kappa.as_f64(), "must be finite and >= 0"));
    }
    if !(gamma > T::zero() && gamma.is_finite()) {
        return Err(Error::invalid("gamma", gamma.as_f64(), "must be finite and > 0"));
    }
    if response.orientation() != Orientation::Decreasing {
        return Err(Error::OrientationMismatch { expected: "decreasing" });
    }
    Ok(())
}

/// Unique root of `κ f(N) − γ N` on `[0, κ/γ]` by bisection.
pub fn scalar_dde_equilibrium<T: Scalar>(kappa: T, gamma: T, response: &LogisticSpec<T>) -> Result<T> {
    check_feedback(kappa, gamma, response)?;
    if kappa == T::zero() {
        return Ok(T::zero());
    }
    let h = |n: T| kappa * response.eval(n) - gamma * n;
    let (mut lo, mut hi) = (T::zero(), kappa / gamma);
    let tol = T::lit(1e-12);
    for _ in 0..400 {
        let mid = (lo + hi) * T::lit(0.5);
        if hi - lo <= tol * T::one().max(mid) || mid <= lo || mid >= hi {
            break;
        }
        let v = h(mid);
        if v == T::zero() {
            return Ok(mid);
        }
        if v > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(if h(lo).abs() <= h(hi).abs() { lo } else { hi })
}

/// Hopf analysis of the scalar delayed negative-feedback loop.
pub fn hopf_critical_delay<T: Scalar>(
    kappa: T,
    gamma: T,
    response: &LogisticSpec<T>,
    k_max: usize,
) -> Result<HopfReport<T>> {
    let n_star = scalar_dde_equilibrium(kappa, gamma, response)?;
    let beta = -kappa * response.derivative(n_star);
    let mut r = HopfReport::from_beta(beta, gamma, k_max)?;
    r.equilibrium = Some(n_star);
    Ok(r)
}
