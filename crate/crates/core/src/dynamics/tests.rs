use super::*;
use crate::model::{GeneNode, RegulationEdge};
use crate::sigmoid::{HillSpec, LogisticSpec, Response};

fn oscillator() -> Network<f64> {
    crate::model::fixtures::oscillator()
}

fn autoreg(logistic: bool) -> Network<f64> {
    let feedback: Response<f64> = if logistic {
        LogisticSpec::increasing(3.0, 1.0).unwrap().into()
    } else {
        HillSpec::increasing(3.0, 1.0).unwrap().into()
    };
    Network::new(vec![
        GeneNode::new(0.003, 0.001, vec![RegulationEdge::new(1, feedback)]),
        GeneNode::new(0.002, 1e-5, vec![RegulationEdge::new(0, Response::Proportional)]),
    ])
    .unwrap()
}

fn trap(logistic: bool) -> Network<f64> {
    let (rep, act): (Response<f64>, Response<f64>) = if logistic {
        (
            LogisticSpec::decreasing(3.0, 1.0).unwrap().into(),
            LogisticSpec::increasing(3.0, 1.0).unwrap().into(),
        )
    } else {
        (
            HillSpec::decreasing(3.0, 1.0).unwrap().into(),
            HillSpec::increasing(3.0, 1.0).unwrap().into(),
        )
    };
    Network::new(vec![
        GeneNode::new(0.5, 8.0, vec![RegulationEdge::new(1, rep)]),
        GeneNode::new(0.5, 5.0, vec![RegulationEdge::new(0, act)]),
    ])
    .unwrap()
}

#[test]
fn exponential_decay_is_accurate() {
    let cfg = IntegratorConfig::new(5.0)
        .with_tolerances(1e-10, 1e-12)
        .with_dense_output(true);
    let tr = integrate_ode(|_t: f64, x: &[f64], o: &mut [f64]| o[0] = -x[0], &[1.0], &cfg).unwrap();
    assert_eq!(tr.t_end(), 5.0);
    assert!((tr.final_state()[0] - (-5f64).exp()).abs() < 1e-9);
    for t in [0.013, 0.77, 1.5, 2.2222, 4.9] {
        let dense = tr.sample(t).unwrap()[0];
        assert!((dense - (-t).exp()).abs() < 1e-9, "dense at {t}");
        let herm = tr.interpolate(t, 0);
        assert!((herm - (-t).exp()).abs() < 1e-6, "hermite at {t}");
    }
    assert!(tr.sample(5.5).is_err());
}

#[test]
fn harmonic_oscillator_dense_output() {
    let cfg = IntegratorConfig::new(20.0)
        .with_tolerances(1e-9, 1e-12)
        .with_dense_output(true);
    let tr = integrate_ode(
        |_t: f64, x: &[f64], o: &mut [f64]| {
            o[0] = x[1];
            o[1] = -x[0];
        },
        &[1.0, 0.0],
        &cfg,
    )
    .unwrap();
    let mut worst: f64 = 0.0;
    for k in 0..2000 {
        let t = 0.01 * k as f64;
        let s = tr.sample(t).unwrap();
        worst = worst.max((s[0] - t.cos()).abs()).max((s[1] + t.sin()).abs());
    }
    assert!(worst < 1e-7, "{worst}");
    assert!(tr.rejected_steps < tr.accepted_steps);
}

#[test]
fn works_in_f32() {
    let cfg = IntegratorConfig::<f32>::new(2.0).with_tolerances(1e-5, 1e-7);
    let tr = integrate_ode(|_t: f32, x: &[f32], o: &mut [f32]| o[0] = -2.0 * x[0], &[1.0f32], &cfg).unwrap();
    assert!((tr.final_state()[0] - (-4f32).exp()).abs() < 1e-5);
}

#[test]
fn oscillator_settles() {
    let tr = simulate_ode(&oscillator(), &[1.0, 1.0], &IntegratorConfig::new(60.0)).unwrap();
    let x = tr.final_state();
    assert!((x[0] - 3.87).abs() < 0.02 && (x[1] - 3.25).abs() < 0.02, "{x:?}");
    for w in tr.times().windows(2) {
        assert!(w[1] > w[0]);
    }
}

#[test]
fn stays_in_invariant_box() {
    let cfg = IntegratorConfig::new(200.0);
    for (net, x0) in [
        (oscillator(), vec![1.0, 1.0]),
        (oscillator(), vec![12.0, 0.0]),
        (trap(true), vec![0.02, 0.02]),
    ] {
        let bx = net.invariant_box().unwrap();
        let tr = simulate_ode(&net, &x0, &cfg).unwrap();
        for s in tr.states() {
            for (v, (lo, hi)) in s.iter().zip(&bx) {
                assert!(*v >= lo - 10.0 * cfg.abs_tol && *v <= hi + 10.0 * cfg.abs_tol);
            }
        }
    }
}

#[test]
fn field_norm_decreases_near_equilibrium() {
    let net = oscillator();
    let tr = simulate_ode(&net, &[1.0, 1.0], &IntegratorConfig::new(60.0).with_dense_output(true)).unwrap();
    let start = tr.t_end() * 0.9;
    let norms: Vec<f64> = (0..=50)
        .map(|k| {
            let x = tr.sample(start + k as f64 * (tr.t_end() - start) / 50.0).unwrap();
            net.vector_field(&x).unwrap().iter().map(|v| v * v).sum::<f64>().sqrt()
        })
        .collect();
    // spiral: the norm shrinks cycle over cycle, compare the two halves
    let first = norms[..25].iter().cloned().fold(0.0, f64::max);
    let second = norms[25..].iter().cloned().fold(0.0, f64::max);
    assert!(second < first);
}

#[test]
fn trap_escape_contrast() {
    let cfg = IntegratorConfig::new(10.0);
    let lo = simulate_ode(&trap(true), &[0.02, 0.02], &cfg).unwrap();
    let hi = simulate_ode(&trap(false), &[0.02, 0.02], &cfg).unwrap();
    for k in 1..=90 {
        let t = 1.0 + 0.1 * k as f64 - 0.05;
        let a = lo.sample(t).unwrap();
        let b = hi.sample(t).unwrap();
        assert!(a[1] > 10.0 * b[1], "t={t}: {a:?} vs {b:?}");
    }
}

#[test]
fn autoregulation_escape_and_stall() {
    let cfg = IntegratorConfig::new(1e4).with_max_step(10.0);
    let lo = simulate_ode(&autoreg(true), &[0.01, 0.01], &cfg).unwrap();
    let hi = simulate_ode(&autoreg(false), &[0.01, 0.01], &cfg).unwrap();
    let p = lo.final_state()[1];
    assert!((p - 38.0).abs() < 0.15 * 38.0, "{p}");
    let esc = measure_escape_time(&lo, 1, 1.0).unwrap().unwrap();
    assert!((esc - 2650.0).abs() < 265.0, "{esc}");
    assert_eq!(measure_escape_time(&hi, 1, 1.0).unwrap(), None);
    let stall = hi.final_state()[1];
    assert!((stall - 0.028).abs() < 0.0028, "{stall}");
}

#[test]
fn escape_time_edge_cases() {
    let flat = Trajectory::from_samples(vec![0.0, 1.0, 2.0], vec![vec![0.5]; 3]).unwrap();
    assert_eq!(measure_escape_time(&flat, 0, 1.0).unwrap(), None);
    let ramp = Trajectory::from_samples(vec![0.0, 1.0, 2.0], vec![vec![0.0], vec![1.0], vec![3.0]]).unwrap();
    assert_eq!(measure_escape_time(&ramp, 0, 2.0).unwrap(), Some(1.5));
    assert!(measure_escape_time(&ramp, 1, 2.0).is_err());
}

#[test]
fn input_errors() {
    let empty = Network::<f64>::new(vec![]).unwrap();
    assert!(matches!(
        simulate_ode(&empty, &[], &IntegratorConfig::new(1.0)),
        Err(Error::EmptyNetwork)
    ));
    assert!(simulate_ode(&oscillator(), &[1.0], &IntegratorConfig::new(1.0)).is_err());
    assert!(simulate_ode(&oscillator(), &[-1.0, 1.0], &IntegratorConfig::new(1.0)).is_err());
    assert!(simulate_ode(&oscillator(), &[1.0, 1.0], &IntegratorConfig::new(-1.0)).is_err());
    let mut cfg = IntegratorConfig::new(1.0);
    cfg.rel_tol = 0.0;
    assert!(simulate_ode(&oscillator(), &[1.0, 1.0], &cfg).is_err());
    let delayed = Network::new(vec![GeneNode::new(
        1.0,
        1.0,
        vec![RegulationEdge::delayed(
            0,
            LogisticSpec::increasing(1.0, 1.0).unwrap(),
            1.0,
        )],
    )])
    .unwrap();
    assert!(matches!(
        simulate_ode(&delayed, &[1.0], &IntegratorConfig::new(1.0)),
        Err(Error::DelayedNetwork)
    ));
}

#[test]
fn step_budget() {
    let mut cfg = IntegratorConfig::new(60.0);
    cfg.max_steps = 3;
    assert!(matches!(
        simulate_ode(&oscillator(), &[1.0, 1.0], &cfg),
        Err(Error::StepBudget { .. })
    ));
}

// x' = κ x(t−1) − γ x with unit history, solved in closed form on [0, 2].
fn linear_dde_exact(kappa: f64, gamma: f64, t: f64) -> f64 {
    let a = kappa / gamma;
    let b = 1.0 - a;
    if t <= 1.0 {
        a + b * (-gamma * t).exp()
    } else {
        let s = t - 1.0;
        let c = a + b * (-gamma).exp() - kappa * a / gamma;
        kappa * a / gamma + kappa * b * s * (-gamma * s).exp() + c * (-gamma * s).exp()
    }
}

#[test]
fn dde_matches_closed_form() {
    let (kappa, gamma) = (0.8, 1.3);
    let net = Network::new(vec![GeneNode::new(
        kappa,
        gamma,
        vec![RegulationEdge::delayed(0, Response::Proportional, 1.0)],
    )])
    .unwrap();
    let cfg = IntegratorConfig::new(2.0).with_tolerances(1e-10, 1e-12);
    let tr = simulate_dde(&net, &History::Constant(vec![1.0]), &cfg).unwrap();
    for (t, x) in tr.times().iter().zip(tr.states()) {
        let err = (x[0] - linear_dde_exact(kappa, gamma, *t)).abs();
        assert!(err < 1e-9, "t={t} err={err}");
    }
    // between nodes the cubic Hermite interpolant is O(h^4)
    for k in 0..=40 {
        let t = 0.05 * k as f64;
        let err = (tr.sample(t).unwrap()[0] - linear_dde_exact(kappa, gamma, t)).abs();
        assert!(err < 1e-6, "t={t} err={err}");
    }
    assert!(tr.times().contains(&1.0));
}

#[test]
fn dde_with_interpolated_history() {
    let (kappa, gamma) = (0.8, 1.3);
    let net = Network::new(vec![GeneNode::new(
        kappa,
        gamma,
        vec![RegulationEdge::delayed(0, Response::Proportional, 1.0)],
    )])
    .unwrap();
    let cfg = IntegratorConfig::new(2.0).with_tolerances(1e-10, 1e-12);
    let whole = simulate_dde(&net, &History::Constant(vec![1.0]), &cfg).unwrap();
    // Restart at t = 1 from the first segment as history.
    let first: Vec<usize> = (0..whole.len()).filter(|&k| whole.times()[k] <= 1.0).collect();
    let hist = Trajectory::from_samples(
        first.iter().map(|&k| whole.times()[k]).collect(),
        first.iter().map(|&k| whole.states()[k].clone()).collect(),
    )
    .unwrap();
    // Linear interpolation of a dense-enough sampling: loose tolerance.
    let mut cfg2 = cfg;
    cfg2.t_start = 1.0;
    let rest = simulate_dde(&net, &History::Interpolated(hist.clone()), &cfg2).unwrap();
    assert!((rest.final_state()[0] - linear_dde_exact(kappa, gamma, 2.0)).abs() < 1e-4);

    let mut cfg3 = cfg;
    cfg3.t_start = 1.5;
    assert!(matches!(
        simulate_dde(&net, &History::Interpolated(hist), &cfg3),
        Err(Error::HistoryTooShort { .. })
    ));
}

#[test]
fn dde_with_zero_delays_matches_ode() {
    let net = oscillator();
    let cfg = IntegratorConfig::new(60.0).with_dense_output(true);
    let ode = simulate_ode(&net, &[1.0, 1.0], &cfg).unwrap();
    let dde = simulate_dde(&net, &History::Constant(vec![1.0, 1.0]), &cfg).unwrap();
    let mut worst: f64 = 0.0;
    for &t in ode.times() {
        let a = ode.sample(t).unwrap();
        let b = dde.sample(t).unwrap();
        worst = worst.max((a[0] - b[0]).abs()).max((a[1] - b[1]).abs());
    }
    assert!(worst < 1e-6, "{worst}");
}

#[test]
fn dde_small_delay_approaches_ode() {
    let net = oscillator();
    let cfg = IntegratorConfig::new(60.0);
    let ode = simulate_ode(&net, &[1.0, 1.0], &cfg).unwrap();
    let mut prev = f64::INFINITY;
    for tau in [1e-2, 1e-3] {
        let d = net
            .map_genes(|_, g| {
                let mut g = g.clone();
                for e in &mut g.edges {
                    e.delay = tau;
                }
                g
            })
            .unwrap();
        let tr = simulate_dde(&d, &History::Constant(vec![1.0, 1.0]), &cfg).unwrap();
        let gap = (0..=600)
            .map(|k| {
                let t = 0.1 * k as f64;
                let a = ode.sample(t).unwrap();
                let b = tr.sample(t).unwrap();
                (a[0] - b[0]).abs().max((a[1] - b[1]).abs())
            })
            .fold(0.0, f64::max);
        assert!(gap < 20.0 * tau && gap < prev);
        prev = gap;
    }
}

#[test]
fn degenerate_delay_rejected() {
    let net = Network::new(vec![GeneNode::new(
        1.0,
        1.0,
        vec![RegulationEdge::delayed(
            0,
            LogisticSpec::increasing(1.0, 1.0).unwrap(),
            1e-15,
        )],
    )])
    .unwrap();
    assert!(matches!(
        simulate_dde(&net, &History::Constant(vec![0.5]), &IntegratorConfig::new(10.0)),
        Err(Error::DegenerateDelay { .. })
    ));
    assert!(simulate_dde(&net, &History::Constant(vec![0.5, 1.0]), &IntegratorConfig::new(10.0)).is_err());
}
