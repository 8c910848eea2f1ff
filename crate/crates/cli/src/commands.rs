use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use sigmoid_grn::analysis::{
    autoreg_fixed_points, find_equilibrium, hill_alpha_crit, hopf_critical_delay, logistic_saddle_nodes,
};
use sigmoid_grn::calibration::{derive_activation_params, derive_activation_params_general, derive_weighted_params};
use sigmoid_grn::dynamics::{measure_escape_time, simulate_dde, simulate_ode};
use sigmoid_grn::io::{preset, write_trajectory_file, ModelFile, Preset, PRESET_NAMES};
use sigmoid_grn::sigmoid::{HillSpec, Orientation, Response};
use sigmoid_grn::{Error, History, IntegratorConfig, LinearActivationSpec, Network};

use crate::{
    fit_file, AnalyzeArgs, CalibrateArgs, CliError, CliResult, ConvertArgs, ExportArgs, Family, Mode, ModelSource,
    SimulateArgs,
};

pub fn emit(value: &impl Serialize, out: Option<&Path>) -> CliResult {
    let text = serde_json::to_string_pretty(value)?;
    match out {
        Some(p) => std::fs::write(p, text + "\n")?,
        None => println!("{text}"),
    }
    Ok(())
}

fn load(source: &ModelSource) -> CliResult<(Network<f64>, Option<Preset>)> {
    match (&source.model, &source.preset) {
        (_, Some(name)) => {
            let p = preset(name)?;
            Ok((p.network.clone(), Some(p)))
        }
        (Some(path), None) => {
            let file = ModelFile::load(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            Ok((file.to_network()?, None))
        }
        (None, None) => Err(CliError::Input("give a model file or --preset".into())),
    }
}

fn gene_index(network: &Network<f64>, key: &str) -> CliResult<usize> {
    let idx = match key.parse::<usize>() {
        Ok(i) => Some(i),
        Err(_) => network.names().iter().position(|n| n == key),
    };
    idx.filter(|&i| i < network.len())
        .ok_or_else(|| CliError::Input(format!("no gene '{key}'")))
}

pub fn simulate(a: &SimulateArgs) -> CliResult {
    let (net, p) = load(&a.source)?;
    let x0 =
        a.x0.clone()
            .or_else(|| p.as_ref().map(|p| p.x0.clone()))
            .ok_or_else(|| CliError::Input("--x0 is required for model files".into()))?;
    let t_end = a
        .t_end
        .or(p.as_ref().map(|p| p.t_end))
        .ok_or_else(|| CliError::Input("--t-end is required for model files".into()))?;
    let mut cfg = IntegratorConfig::new(t_end).with_tolerances(a.rtol, a.atol);
    if let Some(h) = a.max_step.or(p.as_ref().and_then(|p| p.max_step)) {
        cfg = cfg.with_max_step(h);
    }
    let escape = match &a.escape {
        Some(spec) => {
            let (c, l) = spec
                .rsplit_once(':')
                .ok_or_else(|| CliError::Input("--escape expects component:level".into()))?;
            let level = l
                .parse::<f64>()
                .map_err(|_| CliError::Input(format!("bad escape level '{l}'")))?;
            Some((gene_index(&net, c)?, level))
        }
        None => p.as_ref().and_then(|p| p.escape),
    };

    let tr = if net.is_delayed() {
        simulate_dde(&net, &History::Constant(x0), &cfg)?
    } else {
        simulate_ode(&net, &x0, &cfg)?
    };
    if let Some(out) = &a.out {
        write_trajectory_file(out, net.names(), &tr)?;
    }
    let mut report = json!({
        "t_end": tr.t_end(),
        "names": net.names(),
        "final_state": tr.final_state(),
        "samples": tr.len(),
        "accepted_steps": tr.accepted_steps,
        "rejected_steps": tr.rejected_steps,
    });
    if let Some((c, level)) = escape {
        report["escape"] = json!({
            "component": net.names()[c],
            "level": level,
            "time": measure_escape_time(&tr, c, level)?,
        });
    }
    emit(&report, None)
}

pub fn analyze(a: &AnalyzeArgs) -> CliResult {
    let out = a.out.as_deref();
    match a.mode {
        Mode::Equilibria => {
            let (net, p) = load(&a.source)?;
            // equilibria do not depend on delays
            let net = net.without_delays();
            let guess = match (&a.guess, &p) {
                (Some(g), _) => g.clone(),
                (None, Some(p)) => p.x0.clone(),
                (None, None) => net.invariant_box()?.iter().map(|(lo, hi)| 0.5 * (lo + hi)).collect(),
            };
            emit(&find_equilibrium(&net, &guess, 1e-12)?, out)
        }
        Mode::Lipschitz => {
            let (net, _) = load(&a.source)?;
            let mut report = net.lipschitz_report()?;
            if let Some(n) = a.samples {
                report.sampled_spectral_norm = Some(net.sample_spectral_norm(n)?);
            }
            emit(&report, out)
        }
        Mode::Bistability => {
            if a.source.model.is_some() || a.source.preset.is_some() {
                let (net, _) = load(&a.source)?;
                let (response, alpha) = autoreg_reduction(&net)?;
                emit(&bistability_report(&response, Some(a.alpha.unwrap_or(alpha)))?, out)
            } else {
                let theta = a.theta.ok_or_else(|| CliError::Input("--theta is required".into()))?;
                let response: Response<f64> = match a.family {
                    Some(Family::Logistic) => {
                        let l = a.lambda.ok_or_else(|| CliError::Input("--lambda is required".into()))?;
                        sigmoid_grn::LogisticSpec::increasing(l, theta)?.into()
                    }
                    Some(Family::Hill) => {
                        let n = a.n.ok_or_else(|| CliError::Input("--n is required".into()))?;
                        HillSpec::increasing(n, theta)?.into()
                    }
                    None => return Err(CliError::Input("--family is required without a model".into())),
                };
                emit(&bistability_report(&response, a.alpha)?, out)
            }
        }
        Mode::Hopf => {
            let (net, _) = load(&a.source)?;
            if !net.is_delayed() {
                return Err(Error::NotDelayed.into());
            }
            let g = net.gene(0);
            let shape_ok = net.len() == 1 && g.edges.len() == 1 && g.edges[0].source == 0;
            let spec = g.edges[0]
                .response
                .as_logistic()
                .copied()
                .filter(|s| s.orientation() == Orientation::Decreasing);
            let Some(spec) = spec.filter(|_| shape_ok) else {
                return Err(CliError::Mode(
                    "hopf needs a single gene with one delayed decreasing logistic self-edge".into(),
                ));
            };
            let tau = g.edges[0].delay;
            let r = hopf_critical_delay(g.production, g.degradation, &spec, a.k_max)?;
            let mut v = serde_json::to_value(&r)?;
            v["delay"] = json!(tau);
            v["stable_at_delay"] = json!(r.critical_delays.first().is_none_or(|tc| tau < *tc));
            if let Some(tc) = r.critical_delays.first() {
                v["delay_ratio"] = json!(tau / tc);
            }
            emit(&v, out)
        }
    }
}

/// `(feedback, α)` for an mRNA/protein loop: gene 0 driven by a sigmoid of
/// gene 1, gene 1 produced in proportion to gene 0.
fn autoreg_reduction(net: &Network<f64>) -> CliResult<(Response<f64>, f64)> {
    let mismatch = || CliError::Mode("bistability needs a two-gene mRNA/protein autoregulation loop".into());
    if net.len() != 2 || net.is_delayed() {
        return Err(mismatch());
    }
    let (m, p) = (net.gene(0), net.gene(1));
    match (&m.edges[..], &p.edges[..]) {
        ([fb], [lin]) if fb.source == 1 && lin.source == 0 && lin.response == Response::Proportional => {
            let alpha = m.production * p.production / (m.degradation * p.degradation);
            Ok((fb.response, alpha))
        }
        _ => Err(mismatch()),
    }
}

fn bistability_report(response: &Response<f64>, alpha: Option<f64>) -> CliResult<Value> {
    let mut v = match response {
        Response::Logistic(s) => match logistic_saddle_nodes(s.steepness(), s.threshold()) {
            Ok(r) => json!({ "family": "logistic", "response": response, "saddle_nodes": r }),
            Err(e @ Error::NoBistableBand { .. }) => {
                json!({ "family": "logistic", "response": response, "saddle_nodes": null, "note": e.to_string() })
            }
            Err(e) => return Err(e.into()),
        },
        Response::Hill(h) => match hill_alpha_crit(h.coefficient(), h.threshold()) {
            Ok((x, al)) => json!({ "family": "hill", "response": response, "x_crit": x, "alpha_crit": al }),
            Err(e @ Error::NoTangency(_)) => {
                json!({ "family": "hill", "response": response, "alpha_crit": null, "note": e.to_string() })
            }
            Err(e) => return Err(e.into()),
        },
        Response::Proportional => return Err(CliError::Mode("feedback must be a sigmoid".into())),
    };
    if let Some(alpha) = alpha {
        v["fixed_points"] = serde_json::to_value(autoreg_fixed_points(response, alpha)?)?;
    }
    Ok(v)
}

pub fn calibrate(a: &CalibrateArgs) -> CliResult {
    if let Some(path) = &a.fit {
        return emit(&fit_file::run(path)?, a.out.as_deref());
    }
    let g = a.g.ok_or_else(|| CliError::Input("--g is required".into()))?;
    let result = if a.weighted {
        // g_cross only enters through the rescaling, not the parameters
        let spec = LinearActivationSpec::new(g, a.g_cross.unwrap_or(1.0))?;
        derive_weighted_params(&spec)
    } else {
        let c = a
            .g_cross
            .ok_or_else(|| CliError::Input("--g-cross is required (or --weighted)".into()))?;
        let spec = LinearActivationSpec::new(g, c)?;
        match a.theta {
            Some(t) => derive_activation_params_general(&spec, t)?,
            None => derive_activation_params(&spec),
        }
    };
    let mut v = serde_json::to_value(result)?;
    v["basal_production"] = json!(result.basal_production()?);
    v["midpoint_slope"] = json!(result.midpoint_slope());
    emit(&v, a.out.as_deref())
}

pub fn convert(a: &ConvertArgs) -> CliResult {
    let parts: Vec<&str> = a.hill.split(',').map(str::trim).collect();
    let [n, theta, orient] = parts[..] else {
        return Err(CliError::Input("--hill expects n,theta,orientation".into()));
    };
    let num = |s: &str| {
        s.parse::<f64>()
            .map_err(|_| CliError::Input(format!("'{s}' is not a number")))
    };
    let orientation = match orient {
        "activation" | "increasing" => Orientation::Increasing,
        "repression" | "decreasing" => Orientation::Decreasing,
        o => return Err(CliError::Input(format!("unknown orientation '{o}'"))),
    };
    if a.points < 2 {
        return Err(CliError::Input("--points must be at least 2".into()));
    }
    let hill = HillSpec::new(num(n)?, num(theta)?, orientation)?;
    let logistic = hill.match_steepness();
    let span = 4.0 * hill.threshold();
    let (mut worst, mut at) = (0.0f64, 0.0);
    for k in 0..a.points {
        let x = span * k as f64 / (a.points - 1) as f64;
        let d = (hill.eval_clamped(x) - logistic.eval(x)).abs();
        if d > worst {
            (worst, at) = (d, x);
        }
    }
    emit(
        &json!({
            "hill": hill,
            "logistic": logistic,
            "lambda": logistic.steepness(),
            "max_abs_deviation": worst,
            "at_x": at,
            "interval": [0.0, span],
            "points": a.points,
        }),
        None,
    )
}

pub fn export(a: &ExportArgs) -> CliResult {
    let p = preset(&a.preset)?;
    let file = ModelFile::from_network(&p.network, None);
    match &a.out {
        Some(path) => std::fs::write(path, file.to_json()? + "\n")?,
        None => println!("{}", file.to_json()?),
    }
    Ok(())
}

pub fn list_presets() -> CliResult {
    for name in PRESET_NAMES {
        let p = preset(name)?;
        println!("{:<20} {}", p.name, p.description);
    }
    Ok(())
}
