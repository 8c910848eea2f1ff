//! Dormand–Prince 5(4) with PI step-size control and the 4th-order
//! continuous extension (Hairer, Nørsett & Wanner, `dopri5`).

use super::{IntegratorConfig, Trajectory};
use crate::{Error, Result, Scalar};

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];

const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];

// 5th minus embedded 4th order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

// Dense-output weights.
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

const SAFE: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;
const BETA: f64 = 0.04;

/// Continuous extension of one accepted step on `[t, t + h]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseStep<T> {
    pub t: T,
    pub h: T,
    pub coeffs: [Vec<T>; 5],
}

impl<T: Scalar> DenseStep<T> {
    pub fn eval(&self, t: T) -> Vec<T> {
        let s = (t - self.t) / self.h;
        let s1 = T::one() - s;
        let [r1, r2, r3, r4, r5] = &self.coeffs;
        (0..r1.len())
            .map(|i| r1[i] + s * (r2[i] + s1 * (r3[i] + s * (r4[i] + s1 * r5[i]))))
            .collect()
    }
}

/// Right-hand side `dx/dt = f(t, x)` written into the output slice.
pub trait Rhs<T> {
    fn eval(&mut self, t: T, x: &[T], out: &mut [T]);
}

impl<T, F: FnMut(T, &[T], &mut [T])> Rhs<T> for F {
    fn eval(&mut self, t: T, x: &[T], out: &mut [T]) {
        self(t, x, out)
    }
}

fn error_norm<T: Scalar>(cfg: &IntegratorConfig<T>, y0: &[T], y1: &[T], err: &[T]) -> T {
    let n = y0.len().max(1);
    let sum = (0..y0.len())
        .map(|i| {
            let sc = cfg.abs_tol + cfg.rel_tol * y0[i].abs().max(y1[i].abs());
            let r = err[i] / sc;
            r * r
        })
        .sum::<T>();
    (sum / T::lit(n as f64)).sqrt()
}

fn initial_step<T: Scalar>(rhs: &mut impl Rhs<T>, cfg: &IntegratorConfig<T>, t0: T, y0: &[T], f0: &[T], span: T) -> T {
    let n = y0.len();
    let norm = |v: &[T]| {
        let s = (0..n)
            .map(|i| {
                let r = v[i] / (cfg.abs_tol + cfg.rel_tol * y0[i].abs());
                r * r
            })
            .sum::<T>();
        (s / T::lit(n.max(1) as f64)).sqrt()
    };
    let d0 = norm(y0);
    let d1 = norm(f0);
    let tiny = T::lit(1e-10);
    let mut h0 = if d0 < tiny || d1 < tiny {
        T::lit(1e-6)
    } else {
        T::lit(0.01) * d0 / d1
    };
    h0 = h0.min(span).min(cfg.max_step);
    let y1: Vec<T> = (0..n).map(|i| y0[i] + h0 * f0[i]).collect();
    let mut f1 = vec![T::zero(); n];
    rhs.eval(t0 + h0, &y1, &mut f1);
    let diff: Vec<T> = (0..n).map(|i| f1[i] - f0[i]).collect();
    let d2 = norm(&diff) / h0;
    let m = d1.max(d2);
    let h1 = if m <= T::lit(1e-15) {
        (h0 * T::lit(1e-3)).max(T::lit(1e-6))
    } else {
        (T::lit(0.01) / m).powf(T::lit(0.2))
    };
    (T::lit(100.0) * h0).min(h1).min(span).min(cfg.max_step)
}

/// Integrates from `t0` to `t1`, appending accepted steps to `out`
/// (whose last sample must already be `(t0, y0)` with derivative `f0`).
/// Returns the last step size attempted, for warm restarts.
pub(crate) fn integrate_span<T: Scalar>(
    rhs: &mut impl Rhs<T>,
    cfg: &IntegratorConfig<T>,
    t0: T,
    t1: T,
    h_start: Option<T>,
    out: &mut Trajectory<T>,
) -> Result<T> {
    let n = out.dim();
    let mut t = t0;
    let mut y: Vec<T> = out.states.last().expect("seeded").clone();
    let mut k1: Vec<T> = out.derivatives.last().expect("seeded").clone();
    let span = t1 - t0;
    let mut h = h_start
        .or(cfg.initial_step)
        .unwrap_or_else(|| initial_step(rhs, cfg, t0, &y, &k1, span))
        .min(cfg.max_step)
        .min(span);

    let a = A.map(|row| row.map(T::lit));
    let c = C.map(T::lit);
    let e = E.map(T::lit);
    let d = D.map(T::lit);
    let (safe, fac_min, fac_max, beta) = (T::lit(SAFE), T::lit(FAC_MIN), T::lit(FAC_MAX), T::lit(BETA));
    let expo = T::lit(0.2) - beta * T::lit(0.75);
    let mut fac_old = T::lit(1e-4);
    let mut last_rejected = false;

    let mut k: Vec<Vec<T>> = vec![vec![T::zero(); n]; 7];
    let mut ytmp = vec![T::zero(); n];
    let mut ynew = vec![T::zero(); n];
    let mut err = vec![T::zero(); n];
    let eps = T::epsilon();
    let mut h_carry = h;

    while t < t1 {
        if out.accepted_steps + out.rejected_steps >= cfg.max_steps {
            return Err(Error::StepBudget {
                t: t.as_f64(),
                steps: cfg.max_steps,
            });
        }
        // Land exactly on t1 without leaving a sliver step.
        let mut last = false;
        h_carry = h;
        if t + h * T::lit(1.01) >= t1 {
            h = t1 - t;
            last = true;
        }
        if h <= T::lit(16.0) * eps * t.abs().max(T::one()) {
            return Err(Error::StepUnderflow {
                t: t.as_f64(),
                h: h.as_f64(),
            });
        }

        k[0].copy_from_slice(&k1);
        for s in 1..7 {
            for i in 0..n {
                let mut acc = T::zero();
                for (j, kj) in k.iter().enumerate().take(s) {
                    acc = acc + a[s][j] * kj[i];
                }
                ytmp[i] = y[i] + h * acc;
            }
            let (_, rest) = k.split_at_mut(s);
            rhs.eval(t + c[s] * h, &ytmp, &mut rest[0]);
            if s == 6 {
                ynew.copy_from_slice(&ytmp);
            }
        }
        for i in 0..n {
            let mut acc = T::zero();
            for s in 0..7 {
                acc = acc + e[s] * k[s][i];
            }
            err[i] = h * acc;
        }
        let en = error_norm(cfg, &y, &ynew, &err);
        if !en.is_finite() || ynew.iter().any(|v| !v.is_finite()) {
            if h <= T::lit(16.0) * eps * t.abs().max(T::one()) {
                return Err(Error::NonFinite { t: t.as_f64() });
            }
            out.rejected_steps += 1;
            h = h * fac_min;
            last_rejected = true;
            continue;
        }

        let fac11 = en.powf(expo);
        if en <= T::one() {
            let mut fac = fac11 / fac_old.powf(beta);
            fac = (fac / safe).max(T::one() / fac_max).min(T::one() / fac_min);
            let mut h_new = h / fac;
            fac_old = en.max(T::lit(1e-4));

            if cfg.dense_output {
                let r1 = y.clone();
                let r2: Vec<T> = (0..n).map(|i| ynew[i] - y[i]).collect();
                let r3: Vec<T> = (0..n).map(|i| h * k[0][i] - r2[i]).collect();
                let r4: Vec<T> = (0..n).map(|i| r2[i] - h * k[6][i] - r3[i]).collect();
                let r5: Vec<T> = (0..n)
                    .map(|i| {
                        h * (d[0] * k[0][i]
                            + d[2] * k[2][i]
                            + d[3] * k[3][i]
                            + d[4] * k[4][i]
                            + d[5] * k[5][i]
                            + d[6] * k[6][i])
                    })
                    .collect();
                out.dense.get_or_insert_with(Vec::new).push(DenseStep {
                    t,
                    h,
                    coeffs: [r1, r2, r3, r4, r5],
                });
            }

            t = if last { t1 } else { t + h };
            y.copy_from_slice(&ynew);
            k1.copy_from_slice(&k[6]);
            out.times.push(t);
            out.states.push(y.clone());
            out.derivatives.push(k1.clone());
            out.accepted_steps += 1;

            if last_rejected {
                h_new = h_new.min(h);
            }
            last_rejected = false;
            h = h_new.min(cfg.max_step);
        } else {
            out.rejected_steps += 1;
            h = h / (T::one() / fac_min).min(fac11 / safe);
            last_rejected = true;
        }
    }
    Ok(h.max(h_carry))
}
