use super::{check_initial_state, dopri, IntegratorConfig, Trajectory};
use crate::model::Network;
use crate::{Error, Result, Scalar};

/// State before the start time, read by delayed edges.
#[derive(Debug, Clone, PartialEq)]
pub enum History<T> {
    /// `x(t) = x0` for all `t <= t_start`.
    Constant(Vec<T>),
    /// A previously computed or measured trajectory covering the lookback
    /// window `[t_start − max delay, t_start]`.
    Interpolated(Trajectory<T>),
}

impl<T: Scalar> History<T> {
    fn dim(&self) -> usize {
        match self {
            History::Constant(v) => v.len(),
            History::Interpolated(tr) => tr.dim(),
        }
    }

    fn value(&self, t: T, i: usize) -> T {
        match self {
            History::Constant(v) => v[i],
            History::Interpolated(tr) => tr.interpolate(t, i),
        }
    }
}

/// Integrates a network with delayed edges by the method of steps.
///
/// Time is cut into segments of the smallest positive delay; inside a
/// segment every delayed lookup falls in already computed output (or the
/// history), which is read through its cubic Hermite interpolant.
/// Zero-delay edges read the current state. A network with no positive
/// delay is integrated in a single segment.
pub fn simulate_dde<T: Scalar>(
    network: &Network<T>,
    history: &History<T>,
    config: &IntegratorConfig<T>,
) -> Result<Trajectory<T>> {
    config.validate()?;
    if network.is_empty() {
        return Err(Error::EmptyNetwork);
    }
    network.check_dim(history.dim())?;
    let t0 = config.t_start;
    let max_delay = network.max_delay();
    if let History::Interpolated(tr) = history {
        let slack = T::lit(1e-9) * (T::one() + t0.abs() + max_delay);
        if tr.is_empty() || tr.t_start() > t0 - max_delay + slack || tr.t_end() < t0 - slack {
            return Err(Error::HistoryTooShort {
                start: tr.times.first().map_or(f64::NAN, |t| t.as_f64()),
                end: tr.times.last().map_or(f64::NAN, |t| t.as_f64()),
                needed: (t0 - max_delay).as_f64(),
            });
        }
    }
    let x0: Vec<T> = (0..network.len()).map(|i| history.value(t0, i)).collect();
    check_initial_state(network, &x0)?;

    let span = config.t_end - t0;
    let seg_len = match network.min_positive_delay() {
        Some(d) if d < T::lit(1e-12) * config.t_end.abs().max(span) => {
            return Err(Error::DegenerateDelay { delay: d.as_f64() })
        }
        Some(d) => d,
        None => span,
    };

    let rhs_at = |past: &Trajectory<T>, t: T, x: &[T], out: &mut [T]| {
        network.field_with(x, out, |e| {
            if e.delay == T::zero() {
                x[e.source]
            } else {
                let s = t - e.delay;
                if s <= t0 {
                    history.value(s, e.source)
                } else {
                    past.interpolate(s, e.source)
                }
            }
        })
    };

    let mut f0 = vec![T::zero(); x0.len()];
    let mut past = Trajectory::seed(t0, x0.clone(), Vec::new());
    rhs_at(&past, t0, &x0, &mut f0);
    past.derivatives[0] = f0;

    let mut t = t0;
    let mut h: Option<T> = None;
    let mut k = 1usize;
    while t < config.t_end {
        // Segment ends are computed from the start time to avoid drift.
        let mut seg_end = t0 + seg_len * T::lit(k as f64);
        if seg_end > config.t_end || config.t_end - seg_end < T::lit(1e-12) * seg_len {
            seg_end = config.t_end;
        }
        let mut seg = Trajectory::seed(
            t,
            past.final_state().to_vec(),
            past.derivatives.last().expect("seeded").clone(),
        );
        {
            let past_ref = &past;
            let mut rhs = |tt: T, x: &[T], out: &mut [T]| rhs_at(past_ref, tt, x, out);
            h = Some(dopri::integrate_span(&mut rhs, config, t, seg_end, h, &mut seg)?);
        }
        past.extend_from(seg);
        if past.accepted_steps + past.rejected_steps >= config.max_steps {
            return Err(Error::StepBudget {
                t: seg_end.as_f64(),
                steps: config.max_steps,
            });
        }
        t = seg_end;
        k += 1;
    }
    Ok(past)
}
