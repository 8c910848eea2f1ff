use serde::{Deserialize, Serialize};

use crate::dynamics::{simulate_dde, simulate_ode, History, IntegratorConfig, Trajectory};
use crate::linalg::Matrix;
use crate::model::Network;
use crate::sigmoid::{LogisticSpec, Response};
use crate::{Error, Result, Scalar};

/// A network parameter left free for fitting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FreeParameter {
    Production { gene: usize },
    Degradation { gene: usize },
    Steepness { gene: usize, edge: usize },
    Threshold { gene: usize, edge: usize },
}

impl FreeParameter {
    /// Positive parameters are fitted on a log scale.
    fn positive(self) -> bool {
        !matches!(self, FreeParameter::Threshold { .. })
    }

    pub fn label(self, network_names: &[String]) -> String {
        let g = |i: usize| network_names.get(i).cloned().unwrap_or_else(|| format!("#{i}"));
        match self {
            FreeParameter::Production { gene } => format!("kappa[{}]", g(gene)),
            FreeParameter::Degradation { gene } => format!("gamma[{}]", g(gene)),
            FreeParameter::Steepness { gene, edge } => format!("lambda[{}:{edge}]", g(gene)),
            FreeParameter::Threshold { gene, edge } => format!("theta[{}:{edge}]", g(gene)),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FitProblem<T> {
    /// Network holding the starting values of every parameter.
    pub template: Network<T>,
    pub free: Vec<FreeParameter>,
    pub data: Trajectory<T>,
    /// Per-component residual weights; all ones when absent.
    pub weights: Option<Vec<T>>,
    /// Initial state; the first data row when absent.
    pub initial_state: Option<Vec<T>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitSettings<T> {
    pub max_iterations: usize,
    /// Stop when the relative SSE decrease of an accepted step is below this.
    pub rel_improvement: T,
    pub gradient_tol: T,
    /// Relative central-difference step.
    pub fd_step: T,
    pub rel_tol: T,
    pub abs_tol: T,
}

impl<T: Scalar> Default for FitSettings<T> {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            rel_improvement: T::lit(1e-8),
            gradient_tol: T::lit(1e-8),
            fd_step: T::lit(1e-4),
            rel_tol: T::lit(1e-10),
            abs_tol: T::lit(1e-12),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult<T> {
    pub labels: Vec<String>,
    pub parameters: Vec<T>,
    pub sse: T,
    pub initial_sse: T,
    pub iterations: usize,
    #[serde(skip)]
    pub network: Network<T>,
}

fn get<T: Scalar>(net: &Network<T>, p: FreeParameter) -> Result<T> {
    let edge_spec = |gene: usize, edge: usize| -> Result<LogisticSpec<T>> {
        let e = net
            .genes()
            .get(gene)
            .and_then(|g| g.edges.get(edge))
            .ok_or_else(|| Error::Model(format!("no edge {edge} on gene {gene}")))?;
        e.response
            .as_logistic()
            .copied()
            .ok_or(Error::NonLogisticEdge("fitting"))
    };
    let gene = |gene: usize| {
        net.genes().get(gene).ok_or(Error::SourceOutOfRange {
            index: gene,
            genes: net.len(),
        })
    };
    Ok(match p {
        FreeParameter::Production { gene: i } => gene(i)?.production,
        FreeParameter::Degradation { gene: i } => gene(i)?.degradation,
        FreeParameter::Steepness { gene, edge } => edge_spec(gene, edge)?.steepness(),
        FreeParameter::Threshold { gene, edge } => edge_spec(gene, edge)?.threshold(),
    })
}

fn with_values<T: Scalar>(net: &Network<T>, free: &[FreeParameter], values: &[T]) -> Result<Network<T>> {
    let mut genes = net.genes().to_vec();
    for (&p, &v) in free.iter().zip(values) {
        match p {
            FreeParameter::Production { gene } => genes[gene].production = v,
            FreeParameter::Degradation { gene } => genes[gene].degradation = v,
            FreeParameter::Steepness { gene, edge } | FreeParameter::Threshold { gene, edge } => {
                let e = &mut genes[gene].edges[edge];
                let s = e
                    .response
                    .as_logistic()
                    .copied()
                    .ok_or(Error::NonLogisticEdge("fitting"))?;
                let (l, t) = match p {
                    FreeParameter::Steepness { .. } => (v, s.threshold()),
                    _ => (s.steepness(), v),
                };
                e.response = Response::Logistic(LogisticSpec::new(l, t, s.orientation())?);
            }
        }
    }
    Network::with_names(genes, net.names().to_vec())
}

struct Objective<'a, T> {
    problem: &'a FitProblem<T>,
    config: IntegratorConfig<T>,
    x0: Vec<T>,
    weights: Vec<T>,
}

impl<'a, T: Scalar> Objective<'a, T> {
    fn to_values(&self, u: &[T]) -> Vec<T> {
        self.problem
            .free
            .iter()
            .zip(u)
            .map(|(p, &v)| if p.positive() { v.exp() } else { v })
            .collect()
    }

    /// Weighted residuals at every data sample after the first; `None` when
    /// the candidate cannot be simulated.
    fn residuals(&self, u: &[T]) -> Option<Vec<T>> {
        let net = with_values(&self.problem.template, &self.problem.free, &self.to_values(u)).ok()?;
        let data = &self.problem.data;
        let tr = if net.is_delayed() {
            simulate_dde(&net, &History::Constant(self.x0.clone()), &self.config).ok()?
        } else {
            simulate_ode(&net, &self.x0, &self.config).ok()?
        };
        let mut r = Vec::with_capacity(data.len() * data.dim());
        for (t, obs) in data.times().iter().zip(data.states()).skip(1) {
            let model = tr.sample(*t).ok()?;
            for c in 0..obs.len() {
                r.push(self.weights[c] * (model[c] - obs[c]));
            }
        }
        r.iter().all(|v| v.is_finite()).then_some(r)
    }
}

fn sse<T: Scalar>(r: &[T]) -> T {
    r.iter().map(|v| *v * *v).sum()
}

/// Levenberg–Marquardt fit of the free parameters to `problem.data`.
///
/// Residuals come from simulating the template (dense output) and sampling
/// at the data times; the Jacobian is by central differences of relative
/// size `fd_step`. Positive parameters live on a log scale, which keeps
/// them inside their bounds.
pub fn fit_least_squares<T: Scalar>(problem: &FitProblem<T>, settings: &FitSettings<T>) -> Result<FitResult<T>> {
    let data = &problem.data;
    if data.len() < 2 {
        return Err(Error::Model("fit data needs at least two samples".into()));
    }
    problem.template.check_dim(data.dim())?;
    let n_res = (data.len() - 1) * data.dim();
    if problem.free.len() > n_res {
        return Err(Error::Model(format!(
            "{} free parameters but only {n_res} residuals",
            problem.free.len()
        )));
    }
    let weights = problem.weights.clone().unwrap_or_else(|| vec![T::one(); data.dim()]);
    problem.template.check_dim(weights.len())?;
    let x0 = problem
        .initial_state
        .clone()
        .unwrap_or_else(|| data.states()[0].clone());
    let mut config = IntegratorConfig::new(data.t_end())
        .with_tolerances(settings.rel_tol, settings.abs_tol)
        .with_dense_output(true);
    config.t_start = data.t_start();
    config.max_step = data.t_end() - data.t_start();

    let mut u = Vec::with_capacity(problem.free.len());
    for &p in &problem.free {
        let v = get(&problem.template, p)?;
        if p.positive() {
            if !(v > T::zero()) {
                return Err(Error::invalid(
                    "initial parameter",
                    v.as_f64(),
                    "must be > 0 for a log-scaled parameter",
                ));
            }
            u.push(v.ln());
        } else {
            u.push(v);
        }
    }
    let obj = Objective {
        problem,
        config,
        x0,
        weights,
    };
    let labels = problem.free.iter().map(|p| p.label(problem.template.names())).collect();

    let mut r = obj
        .residuals(&u)
        .ok_or_else(|| Error::Divergence("model cannot be simulated at the initial parameters".into()))?;
    let mut cost = sse(&r);
    let initial_sse = cost;
    let finish = |u: &[T], cost: T, iterations: usize| -> Result<FitResult<T>> {
        let values = obj.to_values(u);
        Ok(FitResult {
            labels,
            network: with_values(&problem.template, &problem.free, &values)?,
            parameters: values,
            sse: cost,
            initial_sse,
            iterations,
        })
    };
    let m = u.len();
    if m == 0 {
        return finish(&u, cost, 0);
    }

    let mut mu = T::lit(1e-3);
    let mu_max = T::lit(1e12);
    for it in 1..=settings.max_iterations {
        // Jacobian of the residuals in the fitted coordinates
        let mut jac = vec![vec![T::zero(); m]; r.len()];
        for k in 0..m {
            let h = if problem.free[k].positive() {
                settings.fd_step
            } else {
                settings.fd_step * u[k].abs().max(T::one())
            };
            let mut up = u.clone();
            let mut dn = u.clone();
            up[k] = up[k] + h;
            dn[k] = dn[k] - h;
            let (rp, rm) = match (obj.residuals(&up), obj.residuals(&dn)) {
                (Some(a), Some(b)) => (a, b),
                _ => {
                    return Err(Error::Divergence(format!(
                        "simulation failed while differencing parameter {k}"
                    )))
                }
            };
            for (row, (a, b)) in jac.iter_mut().zip(rp.iter().zip(&rm)) {
                row[k] = (*a - *b) / (h + h);
            }
        }
        let mut jtj = Matrix::<T>::zeros(m, m);
        let mut grad = vec![T::zero(); m];
        for (row, &ri) in jac.iter().zip(&r) {
            for a in 0..m {
                grad[a] = grad[a] + row[a] * ri;
                for b in 0..m {
                    jtj[(a, b)] = jtj[(a, b)] + row[a] * row[b];
                }
            }
        }
        let gnorm = grad.iter().fold(T::zero(), |acc, g| acc.max(g.abs()));
        if gnorm < settings.gradient_tol {
            return finish(&u, cost, it - 1);
        }

        loop {
            let mut damped = jtj.clone();
            for a in 0..m {
                damped[(a, a)] = damped[(a, a)] + mu * jtj[(a, a)].max(T::lit(1e-12));
            }
            let neg: Vec<T> = grad.iter().map(|g| -*g).collect();
            let trial: Option<Vec<T>> = damped
                .solve(&neg)
                .ok()
                .map(|d| u.iter().zip(&d).map(|(a, b)| *a + *b).collect());
            if let Some(ut) = trial {
                if let Some(rt) = obj.residuals(&ut) {
                    let ct = sse(&rt);
                    if ct < cost {
                        let improvement = (cost - ct) / cost.max(T::min_positive_value());
                        u = ut;
                        r = rt;
                        cost = ct;
                        mu = (mu / T::lit(3.0)).max(T::lit(1e-12));
                        if improvement < settings.rel_improvement {
                            return finish(&u, cost, it);
                        }
                        break;
                    }
                }
            }
            mu = mu * T::lit(4.0);
            if mu > mu_max {
                // No descent even for a vanishing step: we sit at a
                // stationary point up to the residual noise floor.
                let floor = T::lit(1e3) * T::epsilon() * (T::one() + cost.sqrt()) * T::lit(r.len() as f64).sqrt();
                if gnorm <= floor.max(settings.gradient_tol) || cost <= T::epsilon() * initial_sse {
                    return finish(&u, cost, it);
                }
                return Err(Error::Divergence(format!(
                    "no decrease from SSE {} at maximal damping (gradient {})",
                    cost.as_f64(),
                    gnorm.as_f64()
                )));
            }
        }
    }
    finish(&u, cost, settings.max_iterations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::oscillator;

    fn sampled(net: &Network<f64>, x0: &[f64], t_end: f64, n: usize) -> Trajectory<f64> {
        let cfg = IntegratorConfig::new(t_end)
            .with_tolerances(1e-11, 1e-13)
            .with_dense_output(true);
        let tr = simulate_ode(net, x0, &cfg).unwrap();
        let times: Vec<f64> = (0..=n).map(|k| t_end * k as f64 / n as f64).collect();
        let states = times.iter().map(|&t| tr.sample(t).unwrap()).collect();
        Trajectory::from_samples(times, states).unwrap()
    }

    fn set_lambda(net: &Network<f64>, l: f64) -> Network<f64> {
        with_values(
            net,
            &[
                FreeParameter::Steepness { gene: 0, edge: 0 },
                FreeParameter::Steepness { gene: 1, edge: 0 },
            ],
            &[l, l],
        )
        .unwrap()
    }

    #[test]
    fn self_fit_recovers_steepness() {
        let truth = oscillator();
        let data = sampled(&truth, &[1.0, 1.0], 30.0, 60);
        let problem = FitProblem {
            template: set_lambda(&truth, 2.0),
            free: vec![
                FreeParameter::Steepness { gene: 0, edge: 0 },
                FreeParameter::Steepness { gene: 1, edge: 0 },
            ],
            data,
            weights: None,
            initial_state: None,
        };
        let r = fit_least_squares(&problem, &FitSettings::default()).unwrap();
        for p in &r.parameters {
            assert!((p - 3.0).abs() < 1e-3 * 3.0, "{:?}", r.parameters);
        }
        assert!(r.sse < 1e-10 * r.initial_sse);
        assert_eq!(r.labels, vec!["lambda[x1:0]", "lambda[x2:0]"]);
    }

    #[test]
    fn self_fit_mixed_parameters() {
        let truth = oscillator();
        let data = sampled(&truth, &[1.0, 1.0], 30.0, 60);
        let free = vec![
            FreeParameter::Production { gene: 0 },
            FreeParameter::Degradation { gene: 1 },
            FreeParameter::Threshold { gene: 1, edge: 0 },
        ];
        let template = with_values(&truth, &free, &[2.5, 0.6, 3.5]).unwrap();
        let problem = FitProblem {
            template,
            free,
            data,
            weights: Some(vec![1.0, 2.0]),
            initial_state: Some(vec![1.0, 1.0]),
        };
        let r = fit_least_squares(&problem, &FitSettings::default()).unwrap();
        for (p, t) in r.parameters.iter().zip([3.0, 0.5, 4.0]) {
            assert!((p - t).abs() < 1e-3 * t, "{:?}", r.parameters);
        }
        // deterministic
        let again = fit_least_squares(&problem, &FitSettings::default()).unwrap();
        assert_eq!(r.parameters, again.parameters);
    }

    #[test]
    fn no_free_parameters() {
        let truth = oscillator();
        let data = sampled(&truth, &[1.0, 1.0], 10.0, 20);
        let problem = FitProblem {
            template: set_lambda(&truth, 2.5),
            free: vec![],
            data,
            weights: None,
            initial_state: None,
        };
        let r = fit_least_squares(&problem, &FitSettings::default()).unwrap();
        assert_eq!(r.iterations, 0);
        assert!(r.sse > 0.0);
        assert_eq!(r.sse, r.initial_sse);
    }

    #[test]
    fn bound_violation_at_start() {
        let truth = oscillator();
        let data = sampled(&truth, &[1.0, 1.0], 10.0, 20);
        let template = with_values(&truth, &[FreeParameter::Production { gene: 0 }], &[0.0]).unwrap();
        let problem = FitProblem {
            template,
            free: vec![FreeParameter::Production { gene: 0 }],
            data,
            weights: None,
            initial_state: None,
        };
        assert!(matches!(
            fit_least_squares(&problem, &FitSettings::default()),
            Err(Error::InvalidParameter { .. })
        ));
    }

    #[test]
    fn too_many_parameters() {
        let truth = oscillator();
        let data = Trajectory::from_samples(vec![0.0, 1.0], vec![vec![1.0, 1.0], vec![1.5, 1.2]]).unwrap();
        let free = vec![
            FreeParameter::Production { gene: 0 },
            FreeParameter::Production { gene: 1 },
            FreeParameter::Degradation { gene: 0 },
        ];
        let problem = FitProblem {
            template: truth,
            free,
            data,
            weights: None,
            initial_state: None,
        };
        assert!(fit_least_squares(&problem, &FitSettings::default()).is_err());
    }
}
