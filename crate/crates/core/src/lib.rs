//! Logistic-function modelling of gene regulatory networks.
//!
//! The crate is organised bottom-up:
//!
//! * [`sigmoid`] — scalar logistic / Hill analytics (evaluation, derivatives,
//!   inverses, antiderivatives, series, cross-family conversion).
//! * [`model`] — the product-of-logistics network `dx_i/dt = κ_i f_i(x) − γ_i x_i`,
//!   its analytic Jacobian, global Lipschitz bounds and invariant box.
//! * [`dynamics`] — adaptive Dormand–Prince integration and method-of-steps
//!   DDE integration, plus trajectory queries.
//! * [`analysis`] — equilibria, stability, autoregulation bistability and
//!   Hopf critical delays for the scalar delayed feedback model.
//! * [`calibration`] — closed-form Hill/linear to logistic parameter maps and
//!   least-squares trajectory fitting.
//! * [`io`] — JSON model files, trajectory CSV and the built-in scenarios.
//!
//! All numerical code is generic over [`Scalar`] (`f32` or `f64`); the
//! `*64` aliases below fix the scalar to `f64`, which is what the CLI uses.

pub mod analysis;
pub mod calibration;
pub mod dynamics;
mod error;
pub mod io;
pub mod linalg;
pub mod model;
mod scalar;
pub mod sigmoid;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use analysis::{
    BistabilityReport, Classification, EquilibriumReport, FixedPoint, HopfReport, Regime, SaddleNodeReport,
};
pub use calibration::{
    CalibrationResult, FitProblem, FitResult, FitSettings, FreeParameter, LinearActivationSpec, Strategy,
};
pub use dynamics::{History, IntegratorConfig, Trajectory};
pub use linalg::Matrix;
pub use model::{GeneNode, LipschitzReport, Network, RegulationEdge};
pub use sigmoid::{HillSpec, LogisticSpec, Orientation, Response, SamuilikSpec};

pub type LogisticSpec64 = LogisticSpec<f64>;
pub type HillSpec64 = HillSpec<f64>;
pub type SamuilikSpec64 = SamuilikSpec<f64>;
pub type Response64 = Response<f64>;
pub type Network64 = Network<f64>;
pub type GeneNode64 = GeneNode<f64>;
pub type RegulationEdge64 = RegulationEdge<f64>;
pub type Trajectory64 = Trajectory<f64>;
pub type IntegratorConfig64 = IntegratorConfig<f64>;
pub type History64 = History<f64>;
pub type EquilibriumReport64 = EquilibriumReport<f64>;
pub type BistabilityReport64 = BistabilityReport<f64>;
pub type HopfReport64 = HopfReport<f64>;
pub type LipschitzReport64 = LipschitzReport<f64>;
pub type CalibrationResult64 = CalibrationResult<f64>;
pub type Matrix64 = Matrix<f64>;
