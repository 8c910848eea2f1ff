use std::path::{Path, PathBuf};

use serde::Deserialize;
use serde_json::{json, Value};

use sigmoid_grn::calibration::{fit_least_squares, FitProblem, FitSettings, FreeParameter};
use sigmoid_grn::io::{preset, read_trajectory_file, ModelFile};

use crate::{CliError, CliResult};

/// `sgrn calibrate --fit` problem description. Paths are relative to the
/// problem file.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FitFile {
    #[serde(default)]
    model: Option<PathBuf>,
    #[serde(default)]
    preset: Option<String>,
    /// Trajectory CSV (`t,<names>`), columns in model gene order.
    data: PathBuf,
    free: Vec<FreeParameter>,
    #[serde(default)]
    weights: Option<Vec<f64>>,
    #[serde(default)]
    x0: Option<Vec<f64>>,
    #[serde(default)]
    max_iterations: Option<usize>,
}

pub fn run(path: &Path) -> CliResult<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let spec: FitFile = serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let base = path.parent().unwrap_or(Path::new("."));
    let template = match (&spec.model, &spec.preset) {
        (Some(m), None) => ModelFile::load(base.join(m))?.to_network()?,
        (None, Some(p)) => preset(p)?.network,
        _ => {
            return Err(CliError::Input(
                "fit file needs exactly one of \"model\" or \"preset\"".into(),
            ))
        }
    };
    let (names, data) = read_trajectory_file(base.join(&spec.data))?;
    if names != template.names() {
        return Err(CliError::Input(format!(
            "data columns {names:?} do not match model genes {:?}",
            template.names()
        )));
    }
    let problem = FitProblem {
        template,
        free: spec.free,
        data,
        weights: spec.weights,
        initial_state: spec.x0,
    };
    let mut settings = FitSettings::default();
    if let Some(m) = spec.max_iterations {
        settings.max_iterations = m;
    }
    let r = fit_least_squares(&problem, &settings)?;
    Ok(json!({
        "labels": r.labels,
        "parameters": r.parameters,
        "sse": r.sse,
        "initial_sse": r.initial_sse,
        "iterations": r.iterations,
        "samples": problem.data.len(),
        "model": ModelFile::from_network(&r.network, None),
    }))
}
