use serde::Serialize;

use super::{CalibrationResult, LinearActivationSpec};
use crate::analysis::{newton_solve, NewtonOptions};
use crate::dynamics::{integrate_ode, IntegratorConfig, Trajectory};
use crate::linalg::Matrix;
use crate::model::{GeneNode, Network, RegulationEdge};
use crate::sigmoid::LogisticSpec;
use crate::{Error, Result, Scalar};

/// Two genes with additive linear cross-activation and logistic
/// self-repression:
///
/// `dA/dt = (g_A + g_AB B) f⁻_A(A) − γ_A A`,
/// `dB/dt = (g_B + g_BA A) f⁻_B(B) − γ_B B`.
///
/// This is the source model the calibration formulas approximate; it is
/// not a product-of-sigmoids network, so it gets its own evaluator.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinearActivationModel<T> {
    /// `[(g_A, g_AB), (g_B, g_BA)]`.
    pub activation: [LinearActivationSpec<T>; 2],
    pub self_repression: [LogisticSpec<T>; 2],
    pub degradation: [T; 2],
}

impl<T: Scalar> LinearActivationModel<T> {
    pub fn new(
        activation: [LinearActivationSpec<T>; 2],
        self_repression: [LogisticSpec<T>; 2],
        degradation: [T; 2],
    ) -> Result<Self> {
        for r in &self_repression {
            if r.orientation() != crate::sigmoid::Orientation::Decreasing {
                return Err(Error::OrientationMismatch { expected: "decreasing" });
            }
        }
        for g in degradation {
            if !(g > T::zero() && g.is_finite()) {
                return Err(Error::invalid("degradation", g.as_f64(), "must be finite and > 0"));
            }
        }
        Ok(Self {
            activation,
            self_repression,
            degradation,
        })
    }

    pub fn vector_field(&self, x: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); 2];
        self.field_into(x, &mut out);
        out
    }

    fn field_into(&self, x: &[T], out: &mut [T]) {
        for i in 0..2 {
            let other = x[1 - i];
            out[i] = self.activation[i].eval(other) * self.self_repression[i].eval(x[i]) - self.degradation[i] * x[i];
        }
    }

    pub fn jacobian(&self, x: &[T]) -> Matrix<T> {
        let mut j = Matrix::zeros(2, 2);
        for i in 0..2 {
            let a = &self.activation[i];
            let r = &self.self_repression[i];
            j[(i, i)] = a.eval(x[1 - i]) * r.derivative(x[i]) - self.degradation[i];
            j[(i, 1 - i)] = a.cross * r.eval(x[i]);
        }
        j
    }

    pub fn simulate(&self, x0: &[T], config: &IntegratorConfig<T>) -> Result<Trajectory<T>> {
        if x0.len() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: x0.len(),
            });
        }
        integrate_ode(|_t: T, x: &[T], out: &mut [T]| self.field_into(x, out), x0, config)
    }

    /// Product-of-logistics replacement: each linear activation becomes
    /// `κ σ(λ(s − θ))` with the given calibrations, self-repression kept.
    pub fn logistic_network(&self, calibrations: [CalibrationResult<T>; 2]) -> Result<Network<T>> {
        let genes = (0..2)
            .map(|i| {
                let c = &calibrations[i];
                let act = LogisticSpec::increasing(c.lambda, c.theta)?;
                Ok(GeneNode::new(
                    c.kappa,
                    self.degradation[i],
                    vec![
                        RegulationEdge::new(1 - i, act),
                        RegulationEdge::new(i, self.self_repression[i]),
                    ],
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Network::with_names(genes, vec!["A".into(), "B".into()])
    }
}

/// Steady state `(A*, B*)` of the linear-activation model, by Newton from
/// `guess`; if that fails, Newton restarts from the end of a long
/// simulation started at `guess`. Used as thresholds `θ_B = B*`,
/// `θ_A = A*` in the general-threshold calibration.
pub fn steady_state_thresholds<T: Scalar>(model: &LinearActivationModel<T>, guess: [T; 2]) -> Result<[T; 2]> {
    let bounds: Vec<(T, T)> = (0..2).map(|_| (T::zero(), T::infinity())).collect();
    let solve = |start: &[T]| {
        newton_solve(
            |x| Ok(model.vector_field(x)),
            |x| Ok(model.jacobian(x)),
            start,
            Some(&bounds),
            NewtonOptions::new(T::lit(1e-10)),
        )
    };
    let x = match solve(&guess) {
        Ok((x, _, _)) => x,
        Err(first) => {
            let slowest = model.degradation[0].min(model.degradation[1]);
            let tr = model.simulate(&guess, &IntegratorConfig::new(T::lit(50.0) / slowest))?;
            solve(tr.final_state()).map_err(|_| first)?.0
        }
    };
    Ok([x[0], x[1]])
}

#[cfg(test)]
mod tests {
    use super::super::{derive_activation_params, derive_activation_params_general};
    use super::*;
    use crate::dynamics::simulate_ode;

    fn reference_model() -> LinearActivationModel<f64> {
        let act = LinearActivationSpec::new(50.0, 2.5).unwrap();
        let rep = LogisticSpec::decreasing(0.057, 70.0).unwrap();
        LinearActivationModel::new([act, act], [rep, rep], [0.20, 0.24]).unwrap()
    }

    #[test]
    fn jacobian_matches_differences() {
        let m = reference_model();
        let x = [40.0, 90.0];
        let j = m.jacobian(&x);
        for c in 0..2 {
            let mut p = x;
            let mut q = x;
            p[c] += 1e-5;
            q[c] -= 1e-5;
            let (fp, fq) = (m.vector_field(&p), m.vector_field(&q));
            for r in 0..2 {
                let fd = (fp[r] - fq[r]) / 2e-5;
                assert!((fd - j[(r, c)]).abs() < 1e-6 * fd.abs().max(1.0));
            }
        }
    }

    #[test]
    fn steady_state_helper() {
        let m = reference_model();
        let [a, b] = steady_state_thresholds(&m, [50.0, 50.0]).unwrap();
        let f = m.vector_field(&[a, b]);
        assert!(f[0].abs() < 1e-9 && f[1].abs() < 1e-9);
        let tr = m.simulate(&[10.0, 10.0], &IntegratorConfig::new(400.0)).unwrap();
        assert!((tr.final_state()[0] - a).abs() < 1e-6 && (tr.final_state()[1] - b).abs() < 1e-6);
        assert!((a - 115.502).abs() < 1e-2 && (b - 112.858).abs() < 1e-2);
        // direct Newton from a nearby guess lands on the same point
        let [a2, b2] = steady_state_thresholds(&m, [100.0, 100.0]).unwrap();
        assert!((a2 - a).abs() < 1e-8 && (b2 - b).abs() < 1e-8);
        // general-threshold calibration at (θ_A, θ_B) = (A*, B*)
        let ca = derive_activation_params_general(&m.activation[0], b).unwrap();
        assert!((ca.kappa * ca.logistic().unwrap().basal_rate() - 50.0).abs() < 1e-9 * 50.0);
    }

    #[test]
    fn calibrated_network_builds() {
        let m = reference_model();
        let c = derive_activation_params(&m.activation[0]);
        let net = m.logistic_network([c, c]).unwrap();
        assert_eq!(net.names(), &["A".to_string(), "B".to_string()]);
        let tr = simulate_ode(&net, &[10.0, 10.0], &IntegratorConfig::new(50.0)).unwrap();
        let x = tr.final_state();
        assert!(x[0] > 10.0 && x[1] > 10.0);
        // both models start from the same basal production at zero input
        let lin = m.vector_field(&[0.0, 0.0]);
        let log = net.vector_field(&[0.0, 0.0]).unwrap();
        for (p, q) in lin.iter().zip(&log) {
            assert!((p - q).abs() < 1e-9 * p.abs());
        }
    }
}

#[cfg(test)]
mod fit_tests {
    use super::super::{derive_activation_params, fit_least_squares, FitProblem, FitSettings, FreeParameter};
    use super::*;

    #[test]
    fn fit_logistic_to_reference() {
        let act = LinearActivationSpec::new(50.0, 2.5).unwrap();
        let rep = LogisticSpec::decreasing(0.057, 70.0).unwrap();
        let m = LinearActivationModel::new([act, act], [rep, rep], [0.20, 0.24]).unwrap();
        let cfg = IntegratorConfig::new(50.0).with_dense_output(true);
        let tr = m.simulate(&[10.0, 10.0], &cfg).unwrap();
        let times: Vec<f64> = (0..=100).map(|k| k as f64 * 0.5).collect();
        let states: Vec<Vec<f64>> = times.iter().map(|&t| tr.sample(t).unwrap()).collect();
        let data = Trajectory::from_samples(times, states).unwrap();
        let c = derive_activation_params(&act);
        let template = m.logistic_network([c, c]).unwrap();
        let mut free = Vec::new();
        for gene in 0..2 {
            free.push(FreeParameter::Production { gene });
            free.push(FreeParameter::Steepness { gene, edge: 0 });
            free.push(FreeParameter::Threshold { gene, edge: 0 });
        }
        let problem = FitProblem {
            template,
            free,
            data: data.clone(),
            weights: None,
            initial_state: None,
        };
        let r = fit_least_squares(&problem, &FitSettings::default()).unwrap();
        let range = data.states().iter().flatten().fold(0f64, |a, v| a.max(*v))
            - data.states().iter().flatten().fold(f64::INFINITY, |a, v| a.min(*v));
        let rms = (r.sse / ((data.len() - 1) * 2) as f64).sqrt();
        assert!(rms < 0.01 * range, "rms {rms} range {range}");
        assert!(r.sse < 1e-2 * r.initial_sse);
    }
}
