use serde::Serialize;

use crate::sigmoid::{HillSpec, Orientation, Response};
use crate::{Error, Result, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FixedPoint<T> {
    pub x: T,
    /// `1 − α h'(x*) > 0`.
    pub stable: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    MonostableLow,
    Bistable,
    MonostableHigh,
}

/// Fixed points of the reduced autoregulation map `x = α h(x)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BistabilityReport<T> {
    pub alpha: T,
    pub fixed_points: Vec<FixedPoint<T>>,
    pub alpha_crit_lower: Option<T>,
    pub alpha_crit_upper: Option<T>,
    pub regime: Regime,
}

/// Both tangency points of `x = α σ(λ(x − θ))`.
///
/// Index 0 is the root with the larger `y` (positive `z`), which sets the
/// lower end of the bistable band; index 1 sets the upper end.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SaddleNodeReport<T> {
    pub z: [T; 2],
    pub y: [T; 2],
    pub x_crit: [T; 2],
    pub alpha_crit: [T; 2],
    pub alpha_crit_lower: T,
    pub alpha_crit_upper: T,
}

/// Tangency of `x = α h(x)` for an increasing Hill function:
/// `x_crit = c (n−1)^{1/n}`, `α_crit = n c / (n−1)^{(n−1)/n}`.
pub fn hill_alpha_crit<T: Scalar>(n: T, c: T) -> Result<(T, T)> {
    if !(n > T::one()) {
        return Err(Error::NoTangency(n.as_f64()));
    }
    if !(c > T::zero() && c.is_finite()) {
        return Err(Error::invalid("c", c.as_f64(), "must be finite and > 0"));
    }
    let m = n - T::one();
    Ok((c * m.powf(T::one() / n), n * c / m.powf(m / n)))
}

fn tangency_fn<T: Scalar>(z: T, c: T) -> T {
    z.exp() - z - c
}

/// Root of `e^z − z − c` in a sign-change bracket: bisection with Newton
/// steps taken whenever they stay inside the bracket.
fn bracketed_root<T: Scalar>(mut lo: T, mut hi: T, c: T) -> T {
    let f_lo = tangency_fn(lo, c);
    let mut z = (lo + hi) * T::lit(0.5);
    for _ in 0..200 {
        let f = tangency_fn(z, c);
        if f == T::zero() {
            return z;
        }
        if (f > T::zero()) == (f_lo > T::zero()) {
            lo = z;
        } else {
            hi = z;
        }
        let d = z.exp() - T::one();
        let newton = z - f / d;
        let next = if d != T::zero() && newton > lo && newton < hi {
            newton
        } else {
            (lo + hi) * T::lit(0.5)
        };
        if (next - z).abs() <= T::lit(1e-14) * (T::one() + z.abs()) || hi - lo <= T::lit(1e-14) {
            return next;
        }
        z = next;
    }
    z
}

/// Saddle-node points of the logistic autoregulation loop.
///
/// Tangency reduces to `e^z − z = λθ − 1`. The left side is convex with
/// minimum 1 at `z = 0`, so two roots straddling zero exist iff `λθ > 2`;
/// `λθ = 2` is the cusp where they merge.
pub fn logistic_saddle_nodes<T: Scalar>(lambda: T, theta: T) -> Result<SaddleNodeReport<T>> {
    if !(lambda > T::zero() && lambda.is_finite()) {
        return Err(Error::invalid("lambda", lambda.as_f64(), "must be finite and > 0"));
    }
    if !(theta > T::zero() && theta.is_finite()) {
        return Err(Error::invalid("theta", theta.as_f64(), "must be finite and > 0"));
    }
    let product = lambda * theta;
    let c = product - T::one();
    let gap = T::lit(2.0) - product;
    if gap > T::lit(1e-14) {
        return Err(Error::NoBistableBand {
            product: product.as_f64(),
        });
    }
    let (z_pos, z_neg) = if gap >= T::zero() {
        (T::zero(), T::zero())
    } else {
        let lo = -(product + T::one()).max(T::lit(50.0));
        let mut hi = T::lit(50.0);
        while tangency_fn(hi, c) <= T::zero() {
            hi = hi * T::lit(2.0);
        }
        (bracketed_root(T::zero(), hi, c), bracketed_root(lo, T::zero(), c))
    };
    let build = |z: T| {
        let y = crate::sigmoid::standard_logistic(z);
        let alpha = T::one() / (lambda * y * (T::one() - y));
        (y, theta + z / lambda, alpha)
    };
    let (y0, x0, a0) = build(z_pos);
    let (y1, x1, a1) = build(z_neg);
    Ok(SaddleNodeReport {
        z: [z_pos, z_neg],
        y: [y0, y1],
        x_crit: [x0, x1],
        alpha_crit: [a0, a1],
        alpha_crit_lower: a0.min(a1),
        alpha_crit_upper: a0.max(a1),
    })
}

fn bisect<T: Scalar>(g: &impl Fn(T) -> T, mut a: T, mut b: T) -> T {
    let mut ga = g(a);
    for _ in 0..300 {
        let m = (a + b) * T::lit(0.5);
        if b - a <= T::lit(1e-10) * T::lit(1e-3).max(m.abs()) || m <= a || m >= b {
            break;
        }
        let gm = g(m);
        if gm == T::zero() {
            return m;
        }
        if (gm > T::zero()) == (ga > T::zero()) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    (a + b) * T::lit(0.5)
}

/// All fixed points of `x = α h(x)` on `[0, α]`.
///
/// Roots of `x − α h(x)` are bracketed on a uniform 10⁴-point grid over
/// `[0, α(1+10⁻⁶)]` merged with a log-spaced grid reaching down to `α·10⁻¹²`
/// (Hill loops have an unstable root far below the uniform spacing), then
/// bisected. A Hill response also has the exact root `x = 0`, whose
/// stability follows from the one-sided slope `h'(0⁺)`.
pub fn autoreg_fixed_points<T: Scalar>(response: &Response<T>, alpha: T) -> Result<BistabilityReport<T>> {
    if !(alpha > T::zero() && alpha.is_finite()) {
        return Err(Error::invalid("alpha", alpha.as_f64(), "must be finite and > 0"));
    }
    if response.orientation() != Orientation::Increasing {
        return Err(Error::OrientationMismatch { expected: "increasing" });
    }
    let (threshold, band) = match response {
        Response::Logistic(s) => {
            let band = logistic_saddle_nodes(s.steepness(), s.threshold()).ok();
            (
                s.threshold(),
                band.map(|b| (Some(b.alpha_crit_lower), Some(b.alpha_crit_upper))),
            )
        }
        Response::Hill(h) => {
            let lower = hill_alpha_crit(h.coefficient(), h.threshold()).ok().map(|p| p.1);
            (h.threshold(), Some((lower, None)))
        }
        Response::Proportional => return Err(Error::NonLogisticEdge("autoregulation needs a sigmoid response")),
    };
    let (alpha_crit_lower, alpha_crit_upper) = band.unwrap_or((None, None));

    let g = |x: T| x - alpha * response.value(x);
    let top = alpha * (T::one() + T::lit(1e-6));
    let mut grid: Vec<T> = (0..=10_000).map(|k| top * T::lit(k as f64 / 10_000.0)).collect();
    grid.extend((0..=2_000).map(|k| alpha * T::lit(10f64.powf(-12.0 + 12.0 * k as f64 / 2_000.0))));
    grid.sort_by(|a, b| a.partial_cmp(b).expect("finite grid"));
    grid.dedup();

    let mut roots: Vec<T> = Vec::new();
    let hill_zero = matches!(response, Response::Hill(_));
    if hill_zero {
        roots.push(T::zero());
        grid.retain(|x| *x > T::zero());
    }
    let mut prev = grid[0];
    let mut g_prev = g(prev);
    if g_prev == T::zero() {
        roots.push(prev);
    }
    for &x in &grid[1..] {
        let gx = g(x);
        if gx == T::zero() {
            roots.push(x);
        } else if g_prev != T::zero() && (gx > T::zero()) != (g_prev > T::zero()) {
            roots.push(bisect(&g, prev, x));
        }
        prev = x;
        g_prev = gx;
    }

    let fixed_points: Vec<FixedPoint<T>> = roots
        .into_iter()
        .map(|x| {
            let stable = if x == T::zero() && hill_zero {
                hill_zero_stable(response, alpha)
            } else {
                let slope = response.slope(x).unwrap_or(T::infinity());
                T::one() - alpha * slope > T::zero()
            };
            FixedPoint { x, stable }
        })
        .collect();

    let stable: Vec<&FixedPoint<T>> = fixed_points.iter().filter(|p| p.stable).collect();
    let regime = if stable.len() >= 2 {
        Regime::Bistable
    } else if stable.first().is_some_and(|p| p.x > threshold) {
        Regime::MonostableHigh
    } else {
        Regime::MonostableLow
    };
    Ok(BistabilityReport {
        alpha,
        fixed_points,
        alpha_crit_lower,
        alpha_crit_upper,
        regime,
    })
}

/// Stability of the Hill root at zero from `h'(0⁺)`: zero for `n > 1`,
/// `1/θ` for `n = 1`, unbounded for `n < 1`.
fn hill_zero_stable<T: Scalar>(response: &Response<T>, alpha: T) -> bool {
    match response {
        Response::Hill(h) => hill_zero_slope(h).is_some_and(|s| T::one() - alpha * s > T::zero()),
        _ => unreachable!(),
    }
}

fn hill_zero_slope<T: Scalar>(h: &HillSpec<T>) -> Option<T> {
    let n = h.coefficient();
    if n > T::one() {
        Some(T::zero())
    } else if n == T::one() {
        Some(T::one() / h.threshold())
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sigmoid::LogisticSpec;

    fn logistic(l: f64, t: f64) -> Response<f64> {
        LogisticSpec::increasing(l, t).unwrap().into()
    }

    #[test]
    fn hill_critical_values() {
        let (x, a) = hill_alpha_crit(3.0, 1.0).unwrap();
        assert!((a - 3.0 / 2f64.powf(2.0 / 3.0)).abs() < 1e-12);
        assert!((a - 1.89).abs() < 0.005);
        assert!((x - 2f64.cbrt()).abs() < 1e-12);
        assert_eq!(hill_alpha_crit(2.0, 1.0).unwrap(), (1.0, 2.0));
        assert!(matches!(hill_alpha_crit(1.0, 1.0), Err(Error::NoTangency(_))));
    }

    #[test]
    fn hill_tangency_residuals() {
        for (n, c) in [(3.0f64, 1.0), (2.0, 1.0), (1.5, 0.7), (6.0, 4.0), (1.1, 2.0)] {
            let (x, a) = hill_alpha_crit(n, c).unwrap();
            let h = HillSpec::increasing(n, c).unwrap();
            assert!((x - a * h.eval(x).unwrap()).abs() < 1e-8);
            assert!((a * h.derivative(x).unwrap() - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn logistic_roots_lambda3() {
        let r = logistic_saddle_nodes(3.0f64, 1.0).unwrap();
        assert!((r.z[1] + 1.8414).abs() < 1e-3);
        assert!((r.z[0] - 1.1462).abs() < 1e-3);
        assert!((r.alpha_crit_upper - 2.823).abs() < 5e-3);
        assert!((r.alpha_crit_lower - 1.821).abs() < 5e-3);
        for z in r.z {
            assert!(tangency_fn(z, 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn logistic_tangency_residuals() {
        for (l, t) in [
            (3.0f64, 1.0),
            (4.0, 1.0),
            (5.0, 1.0),
            (2.5, 2.0),
            (10.0, 0.5),
            (60.0, 1.0),
        ] {
            let r = logistic_saddle_nodes(l, t).unwrap();
            let s = LogisticSpec::increasing(l, t).unwrap();
            for k in 0..2 {
                let (x, a) = (r.x_crit[k], r.alpha_crit[k]);
                assert!((x - a * s.eval(x)).abs() < 1e-8 * x.max(1.0), "{l} {t} {k}");
                assert!((a * s.derivative(x) - 1.0).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn cusp_and_no_band() {
        let r = logistic_saddle_nodes(2.0f64, 1.0).unwrap();
        assert_eq!(r.z, [0.0, 0.0]);
        assert_eq!((r.alpha_crit_lower, r.alpha_crit_upper), (2.0, 2.0));
        assert!(matches!(
            logistic_saddle_nodes(1.5f64, 1.0),
            Err(Error::NoBistableBand { .. })
        ));
    }

    #[test]
    fn fixed_points_in_band() {
        let r = autoreg_fixed_points(&logistic(3.0, 1.0), 2.3).unwrap();
        assert_eq!(r.fixed_points.len(), 3);
        let s: Vec<bool> = r.fixed_points.iter().map(|p| p.stable).collect();
        assert_eq!(s, vec![true, false, true]);
        assert_eq!(r.regime, Regime::Bistable);
        assert!((r.alpha_crit_lower.unwrap() - 1.821).abs() < 5e-3);
    }

    #[test]
    fn logistic_high_state() {
        let r = autoreg_fixed_points(&logistic(3.0, 1.0), 600.0).unwrap();
        assert_eq!(r.fixed_points.len(), 1);
        assert!((r.fixed_points[0].x - 600.0).abs() < 1e-6);
        assert!(r.fixed_points[0].stable);
        assert_eq!(r.regime, Regime::MonostableHigh);
        let low = autoreg_fixed_points(&logistic(3.0, 1.0), 1.0).unwrap();
        assert_eq!(low.fixed_points.len(), 1);
        assert_eq!(low.regime, Regime::MonostableLow);
    }

    #[test]
    fn hill_high_gain() {
        // x = 0 is an exact, stable root; a tiny unstable root near
        // (1/600)^{1/2} separates it from the high state.
        let h: Response<f64> = HillSpec::increasing(3.0, 1.0).unwrap().into();
        let r = autoreg_fixed_points(&h, 600.0).unwrap();
        assert_eq!(r.fixed_points.len(), 3);
        assert_eq!(r.fixed_points[0], FixedPoint { x: 0.0, stable: true });
        assert!(!r.fixed_points[1].stable);
        assert!((r.fixed_points[1].x - 0.0408).abs() < 1e-3);
        assert!(r.fixed_points[2].stable && (r.fixed_points[2].x - 600.0).abs() < 1e-3);
        assert_eq!(r.regime, Regime::Bistable);
        let below = autoreg_fixed_points(&h, 1.5).unwrap();
        assert_eq!(below.fixed_points.len(), 1);
        assert_eq!(below.regime, Regime::MonostableLow);
    }

    #[test]
    fn band_membership() {
        for l in [2.5f64, 3.0, 4.0, 5.0] {
            let band = logistic_saddle_nodes(l, 1.0).unwrap();
            let (lo, hi) = (band.alpha_crit_lower, band.alpha_crit_upper);
            for k in 1..10 {
                let a = lo + (hi - lo) * k as f64 / 10.0;
                assert_eq!(
                    autoreg_fixed_points(&logistic(l, 1.0), a).unwrap().fixed_points.len(),
                    3,
                    "λ={l} α={a}"
                );
            }
            for a in [lo * 0.98, lo * 0.9, hi * 1.02, hi * 1.5] {
                assert_eq!(
                    autoreg_fixed_points(&logistic(l, 1.0), a).unwrap().fixed_points.len(),
                    1,
                    "λ={l} α={a}"
                );
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(autoreg_fixed_points(&logistic(3.0, 1.0), 0.0).is_err());
        let dec: Response<f64> = LogisticSpec::decreasing(3.0, 1.0).unwrap().into();
        assert!(matches!(
            autoreg_fixed_points(&dec, 2.0),
            Err(Error::OrientationMismatch { .. })
        ));
    }
}
