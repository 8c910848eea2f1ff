//! Equilibria and their stability, positive-autoregulation bistability, and
//! Hopf critical delays of the scalar delayed negative-feedback model.

mod bistability;
mod equilibrium;
mod hopf;

pub use bistability::{
    autoreg_fixed_points, hill_alpha_crit, logistic_saddle_nodes, BistabilityReport, FixedPoint, Regime,
    SaddleNodeReport,
};
pub use equilibrium::{
    classify_2x2, classify_eigenvalues, find_equilibrium, find_equilibrium_with, newton_solve, EquilibriumReport,
    NewtonOptions,
};
pub use hopf::{hopf_critical_delay, scalar_dde_equilibrium, HopfReport};

use serde::Serialize;

/// Linear stability of an equilibrium.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Classification {
    StableNode,
    StableSpiral,
    Saddle,
    Unstable,
    Undetermined,
}

impl Classification {
    pub fn is_stable(self) -> bool {
        matches!(self, Classification::StableNode | Classification::StableSpiral)
    }
}
