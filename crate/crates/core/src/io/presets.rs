use crate::analysis::hopf_critical_delay;
use crate::calibration::{derive_activation_params, LinearActivationModel, LinearActivationSpec};
use crate::model::{GeneNode, Network, RegulationEdge};
use crate::sigmoid::{HillSpec, LogisticSpec, Response};
use crate::{Error, Result};

/// A named scenario: network, initial state and run length.
#[derive(Debug, Clone)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub network: Network<f64>,
    /// Initial state (constant history for delayed networks).
    pub x0: Vec<f64>,
    pub t_end: f64,
    pub max_step: Option<f64>,
    /// `(component, level)` whose first upward crossing is reported.
    pub escape: Option<(usize, f64)>,
}

pub const PRESET_NAMES: &[&str] = &[
    "oscillator",
    "scaled-oscillator",
    "hill-oscillator",
    "trap-logistic",
    "trap-hill",
    "autoreg-logistic",
    "autoreg-hill",
    "vinoth-calibrated",
    "two-node-lipschitz",
    "hematopoiesis",
];

fn names(n: &[&str]) -> Vec<String> {
    n.iter().map(|s| s.to_string()).collect()
}

fn oscillator_with(rep: Response<f64>, act: Response<f64>, kappa1: f64) -> Result<Network<f64>> {
    Network::new(vec![
        GeneNode::new(kappa1, 0.25, vec![RegulationEdge::new(1, rep)]),
        GeneNode::new(4.0, 0.5, vec![RegulationEdge::new(0, act)]),
    ])
}

fn autoreg(feedback: Response<f64>) -> Result<Network<f64>> {
    // k_m, k_dm (mRNA) and k_p, k_dp (protein); α = k_m k_p/(k_dm k_dp) = 600
    Network::with_names(
        vec![
            GeneNode::new(0.003, 0.001, vec![RegulationEdge::new(1, feedback)]),
            GeneNode::new(0.002, 1e-5, vec![RegulationEdge::new(0, Response::Proportional)]),
        ],
        names(&["mRNA", "protein"]),
    )
}

fn trap(rep: Response<f64>, act: Response<f64>) -> Result<Network<f64>> {
    Network::new(vec![
        GeneNode::new(0.5, 8.0, vec![RegulationEdge::new(1, rep)]),
        GeneNode::new(0.5, 5.0, vec![RegulationEdge::new(0, act)]),
    ])
}

/// Linear-activation source model whose calibration the
/// `vinoth-calibrated` preset uses.
pub fn vinoth_reference() -> Result<LinearActivationModel<f64>> {
    let act = LinearActivationSpec::new(50.0, 2.5)?;
    let rep = LogisticSpec::decreasing(0.057, 70.0)?;
    LinearActivationModel::new([act, act], [rep, rep], [0.20, 0.24])
}

pub fn preset(name: &str) -> Result<Preset> {
    let lg = |l: f64, t: f64, inc: bool| -> Result<Response<f64>> {
        Ok(if inc {
            LogisticSpec::increasing(l, t)?
        } else {
            LogisticSpec::decreasing(l, t)?
        }
        .into())
    };
    let hl = |n: f64, t: f64, inc: bool| -> Result<Response<f64>> {
        Ok(if inc {
            HillSpec::increasing(n, t)?
        } else {
            HillSpec::decreasing(n, t)?
        }
        .into())
    };
    let base = |name, description, network, x0: Vec<f64>, t_end| Preset {
        name,
        description,
        network,
        x0,
        t_end,
        max_step: None,
        escape: None,
    };
    Ok(match name {
        "oscillator" => base(
            "oscillator",
            "two-gene negative feedback loop, logistic regulation",
            oscillator_with(lg(3.0, 3.0, false)?, lg(3.0, 4.0, true)?, 3.0)?,
            vec![1.0, 1.0],
            60.0,
        ),
        "scaled-oscillator" => {
            let rep = LogisticSpec::decreasing(3.0, 3.0)?;
            base(
                "scaled-oscillator",
                "oscillator with scaled repression (κ₁ multiplied by 1 + e^{−λθ})",
                oscillator_with(rep.into(), lg(3.0, 4.0, true)?, 3.0 * rep.scale_factor())?,
                vec![1.0, 1.0],
                60.0,
            )
        }
        "hill-oscillator" => base(
            "hill-oscillator",
            "oscillator with Hill regulation (n = 3)",
            oscillator_with(hl(3.0, 3.0, false)?, hl(3.0, 4.0, true)?, 3.0)?,
            vec![1.0, 1.0],
            60.0,
        ),
        "trap-logistic" | "trap-hill" => {
            let logistic = name == "trap-logistic";
            let net = if logistic {
                trap(lg(3.0, 1.0, false)?, lg(3.0, 1.0, true)?)?
            } else {
                trap(hl(3.0, 1.0, false)?, hl(3.0, 1.0, true)?)?
            };
            base(
                if logistic { "trap-logistic" } else { "trap-hill" },
                "oscillator under strong degradation from a near-zero start",
                net,
                vec![0.02, 0.02],
                10.0,
            )
        }
        "autoreg-logistic" | "autoreg-hill" => {
            let logistic = name == "autoreg-logistic";
            let net = autoreg(if logistic {
                lg(3.0, 1.0, true)?
            } else {
                hl(3.0, 1.0, true)?
            })?;
            Preset {
                max_step: Some(10.0),
                escape: Some((1, 1.0)),
                ..base(
                    if logistic { "autoreg-logistic" } else { "autoreg-hill" },
                    "positive autoregulation, mRNA/protein, loop gain 600 (time in s)",
                    net,
                    vec![0.01, 0.01],
                    1e4,
                )
            }
        }
        "vinoth-calibrated" => {
            let reference = vinoth_reference()?;
            let c = derive_activation_params(&reference.activation[0]);
            base(
                "vinoth-calibrated",
                "two-gene logistic system calibrated from g = 50, g_cross = 2.5 (time in min)",
                reference.logistic_network([c, c])?,
                vec![10.0, 10.0],
                50.0,
            )
        }
        "two-node-lipschitz" => {
            let net = Network::new(vec![
                GeneNode::new(
                    3.0,
                    0.25,
                    vec![
                        RegulationEdge::new(1, lg(2.5, 1.0, true)?),
                        RegulationEdge::new(0, lg(2.5, 2.0, false)?),
                    ],
                ),
                GeneNode::new(
                    4.0,
                    0.5,
                    vec![
                        RegulationEdge::new(0, lg(2.5, 1.5, true)?),
                        RegulationEdge::new(1, lg(2.5, 3.0, false)?),
                    ],
                ),
            ])?;
            base(
                "two-node-lipschitz",
                "two genes with activation and self-repression",
                net,
                vec![1.0, 1.0],
                60.0,
            )
        }
        "hematopoiesis" => {
            // delayed negative feedback, delay 10% past the first Hopf point
            let (kappa, gamma) = (6.0, 0.3);
            let spec = LogisticSpec::decreasing(2.0, 2.0)?;
            let hopf = hopf_critical_delay(kappa, gamma, &spec, 0)?;
            let tau = 1.1 * hopf.critical_delays[0];
            let n_star = hopf.equilibrium.unwrap_or(1.0);
            let net = Network::with_names(
                vec![GeneNode::new(kappa, gamma, vec![RegulationEdge::delayed(0, spec, tau)])],
                names(&["N"]),
            )?;
            base(
                "hematopoiesis",
                "cell population with delayed logistic feedback, delay 1.1·τ_c",
                net,
                vec![1.1 * n_star],
                400.0,
            )
        }
        other => {
            return Err(Error::Model(format!(
                "unknown preset '{other}' (available: {})",
                PRESET_NAMES.join(", ")
            )))
        }
    })
}
