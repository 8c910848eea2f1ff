//! Time integration: adaptive Dormand–Prince for delay-free networks and a
//! method-of-steps driver for networks with delayed edges.

mod dde;
mod dopri;

use serde::Serialize;

use crate::model::Network;
use crate::{Error, Result, Scalar};

pub use dde::{simulate_dde, History};
pub use dopri::{DenseStep, Rhs};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegratorConfig<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    pub t_start: T,
    pub t_end: T,
    pub max_step: T,
    /// First trial step; chosen automatically when `None`.
    pub initial_step: Option<T>,
    /// Keep the 4th-order continuous extension of every step.
    pub dense_output: bool,
    /// Hard cap on accepted + rejected steps.
    pub max_steps: usize,
}

impl<T: Scalar> IntegratorConfig<T> {
    pub fn new(t_end: T) -> Self {
        Self {
            rel_tol: T::lit(1e-8),
            abs_tol: T::lit(1e-10),
            t_start: T::zero(),
            t_end,
            max_step: t_end.abs(),
            initial_step: None,
            dense_output: false,
            max_steps: 5_000_000,
        }
    }

    pub fn with_tolerances(mut self, rel_tol: T, abs_tol: T) -> Self {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_max_step(mut self, max_step: T) -> Self {
        self.max_step = max_step;
        self
    }

    pub fn with_dense_output(mut self, dense: bool) -> Self {
        self.dense_output = dense;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |name, v: T| {
            if v > T::zero() && v.is_finite() {
                Ok(())
            } else {
                Err(Error::invalid(name, v.as_f64(), "must be finite and > 0"))
            }
        };
        pos("rel_tol", self.rel_tol)?;
        pos("abs_tol", self.abs_tol)?;
        pos("max_step", self.max_step)?;
        if let Some(h) = self.initial_step {
            pos("initial_step", h)?;
        }
        if !self.t_start.is_finite() {
            return Err(Error::invalid("t_start", self.t_start.as_f64(), "must be finite"));
        }
        if !(self.t_end > self.t_start && self.t_end.is_finite()) {
            return Err(Error::invalid(
                "t_end",
                self.t_end.as_f64(),
                "must be finite and after t_start",
            ));
        }
        Ok(())
    }
}

/// Accepted integration points with the derivative at each, which gives a
/// C¹ cubic Hermite interpolant between samples.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub(crate) times: Vec<T>,
    pub(crate) states: Vec<Vec<T>>,
    /// Empty for trajectories read from data; interpolation is then linear.
    pub(crate) derivatives: Vec<Vec<T>>,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub(crate) dense: Option<Vec<DenseStep<T>>>,
}

impl<T: Scalar> Trajectory<T> {
    pub(crate) fn seed(t0: T, x0: Vec<T>, f0: Vec<T>) -> Self {
        Self {
            times: vec![t0],
            states: vec![x0],
            derivatives: vec![f0],
            accepted_steps: 0,
            rejected_steps: 0,
            dense: None,
        }
    }

    /// Trajectory from sampled data (e.g. a CSV file).
    pub fn from_samples(times: Vec<T>, states: Vec<Vec<T>>) -> Result<Self> {
        if times.len() != states.len() {
            return Err(Error::DimensionMismatch {
                expected: times.len(),
                got: states.len(),
            });
        }
        if times.is_empty() {
            return Err(Error::Model("trajectory has no samples".into()));
        }
        let dim = states[0].len();
        for (k, (t, s)) in times.iter().zip(&states).enumerate() {
            if s.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: s.len(),
                });
            }
            if !t.is_finite() || s.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite { t: t.as_f64() });
            }
            if k > 0 && *t <= times[k - 1] {
                return Err(Error::invalid(
                    "time",
                    t.as_f64(),
                    "sample times must be strictly increasing",
                ));
            }
        }
        Ok(Self {
            times,
            states,
            derivatives: Vec::new(),
            accepted_steps: 0,
            rejected_steps: 0,
            dense: None,
        })
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn states(&self) -> &[Vec<T>] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states.first().map_or(0, Vec::len)
    }

    pub fn t_start(&self) -> T {
        self.times[0]
    }

    pub fn t_end(&self) -> T {
        *self.times.last().expect("non-empty")
    }

    pub fn final_state(&self) -> &[T] {
        self.states.last().expect("non-empty")
    }

    pub fn component(&self, i: usize) -> Vec<T> {
        self.states.iter().map(|s| s[i]).collect()
    }

    pub fn has_dense_output(&self) -> bool {
        self.dense.is_some()
    }

    /// Index `k` with `times[k] <= t <= times[k+1]`, clamped to the ends.
    fn segment(&self, t: T) -> usize {
        let k = self.times.partition_point(|&s| s <= t);
        k.saturating_sub(1).min(self.times.len().saturating_sub(2))
    }

    fn check_range(&self, t: T) -> Result<()> {
        let (a, b) = (self.t_start(), self.t_end());
        let slack = T::lit(64.0) * T::epsilon() * a.abs().max(b.abs()).max(T::one());
        if t.is_nan() || t < a - slack || t > b + slack {
            return Err(Error::Domain {
                value: t.as_f64(),
                domain: "trajectory time span",
            });
        }
        Ok(())
    }

    /// State at time `t`: the integrator's continuous extension when it was
    /// kept, otherwise cubic Hermite (linear for derivative-free data).
    pub fn sample(&self, t: T) -> Result<Vec<T>> {
        self.check_range(t)?;
        if self.len() == 1 {
            return Ok(self.states[0].clone());
        }
        let k = self.segment(t);
        if let Some(dense) = &self.dense {
            return Ok(dense[k].eval(t));
        }
        Ok((0..self.dim()).map(|i| self.hermite(k, t, i)).collect())
    }

    pub fn sample_component(&self, t: T, i: usize) -> Result<T> {
        self.check_range(t)?;
        if i >= self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: i + 1,
            });
        }
        Ok(self.interpolate(t, i))
    }

    /// Hermite/linear value of component `i`, clamped to the stored span.
    pub(crate) fn interpolate(&self, t: T, i: usize) -> T {
        if self.len() == 1 {
            return self.states[0][i];
        }
        let t = t.max(self.t_start()).min(self.t_end());
        self.hermite(self.segment(t), t, i)
    }

    fn hermite(&self, k: usize, t: T, i: usize) -> T {
        let (t0, t1) = (self.times[k], self.times[k + 1]);
        let (y0, y1) = (self.states[k][i], self.states[k + 1][i]);
        let h = t1 - t0;
        let s = (t - t0) / h;
        if self.derivatives.is_empty() {
            return y0 + s * (y1 - y0);
        }
        let (d0, d1) = (self.derivatives[k][i], self.derivatives[k + 1][i]);
        let two = T::lit(2.0);
        let three = T::lit(3.0);
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = two * s3 - three * s2 + T::one();
        let h10 = s3 - two * s2 + s;
        let h01 = three * s2 - two * s3;
        let h11 = s3 - s2;
        h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1
    }

    /// Appends `other`, whose first sample duplicates our last one.
    pub(crate) fn extend_from(&mut self, other: Trajectory<T>) {
        self.times.extend(other.times.into_iter().skip(1));
        self.states.extend(other.states.into_iter().skip(1));
        self.derivatives.extend(other.derivatives.into_iter().skip(1));
        self.accepted_steps += other.accepted_steps;
        self.rejected_steps += other.rejected_steps;
        if let Some(d) = other.dense {
            self.dense.get_or_insert_with(Vec::new).extend(d);
        }
    }
}

/// Integrates `dx/dt = rhs(t, x)` over `[config.t_start, config.t_end]`.
pub fn integrate_ode<T: Scalar>(mut rhs: impl Rhs<T>, x0: &[T], config: &IntegratorConfig<T>) -> Result<Trajectory<T>> {
    config.validate()?;
    if x0.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            t: config.t_start.as_f64(),
        });
    }
    let mut f0 = vec![T::zero(); x0.len()];
    rhs.eval(config.t_start, x0, &mut f0);
    let mut traj = Trajectory::seed(config.t_start, x0.to_vec(), f0);
    dopri::integrate_span(&mut rhs, config, config.t_start, config.t_end, None, &mut traj)?;
    Ok(traj)
}

pub(crate) fn check_initial_state<T: Scalar>(network: &Network<T>, x0: &[T]) -> Result<()> {
    if network.is_empty() {
        return Err(Error::EmptyNetwork);
    }
    network.check_dim(x0.len())?;
    for &v in x0 {
        if !(v >= T::zero() && v.is_finite()) {
            return Err(Error::invalid(
                "x0",
                v.as_f64(),
                "initial state must be finite and >= 0",
            ));
        }
    }
    Ok(())
}

/// Simulates a delay-free network from `x0`.
pub fn simulate_ode<T: Scalar>(network: &Network<T>, x0: &[T], config: &IntegratorConfig<T>) -> Result<Trajectory<T>> {
    check_initial_state(network, x0)?;
    if network.is_delayed() {
        return Err(Error::DelayedNetwork);
    }
    integrate_ode(|_t: T, x: &[T], out: &mut [T]| network.field_into(x, out), x0, config)
}

/// First time component `i` crosses `level` from below, by linear
/// interpolation between stored samples.
pub fn measure_escape_time<T: Scalar>(traj: &Trajectory<T>, component: usize, level: T) -> Result<Option<T>> {
    if component >= traj.dim() {
        return Err(Error::DimensionMismatch {
            expected: traj.dim(),
            got: component + 1,
        });
    }
    for k in 1..traj.len() {
        let (a, b) = (traj.states[k - 1][component], traj.states[k][component]);
        if a < level && b >= level {
            let (t0, t1) = (traj.times[k - 1], traj.times[k]);
            return Ok(Some(t0 + (t1 - t0) * (level - a) / (b - a)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests;
