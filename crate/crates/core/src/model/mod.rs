//! Product-of-logistics network model.
//!
//! Gene `i` evolves as `dx_i/dt = κ_i Π_m g_{i,m}(x_{j(i,m)}) − γ_i x_i`. Edges
//! carry their own response and an optional delay; an empty edge list means
//! constitutive expression (`f_i ≡ 1`).

mod bounds;
mod field;
mod rescale;

pub use rescale::rescale_edge;

use serde::Serialize;

use crate::sigmoid::Response;
use crate::{Error, Result, Scalar};

pub use bounds::LipschitzReport;

/// One regulatory input of a gene.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegulationEdge<T> {
    pub source: usize,
    pub response: Response<T>,
    /// Lookback time; zero for instantaneous regulation.
    pub delay: T,
}

impl<T: Scalar> RegulationEdge<T> {
    pub fn new(source: usize, response: impl Into<Response<T>>) -> Self {
        Self {
            source,
            response: response.into(),
            delay: T::zero(),
        }
    }

    pub fn delayed(source: usize, response: impl Into<Response<T>>, delay: T) -> Self {
        Self {
            source,
            response: response.into(),
            delay,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneNode<T> {
    /// Maximal production rate κ ≥ 0.
    pub production: T,
    /// Degradation rate γ > 0.
    pub degradation: T,
    pub edges: Vec<RegulationEdge<T>>,
}

impl<T: Scalar> GeneNode<T> {
    pub fn new(production: T, degradation: T, edges: Vec<RegulationEdge<T>>) -> Self {
        Self {
            production,
            degradation,
            edges,
        }
    }

    /// A gene without regulators.
    pub fn constitutive(production: T, degradation: T) -> Self {
        Self::new(production, degradation, Vec::new())
    }
}

/// Validated, immutable network.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Network<T> {
    genes: Vec<GeneNode<T>>,
    names: Vec<String>,
}

impl<T: Scalar> Network<T> {
    /// Builds a network with default names `x1, x2, …`.
    pub fn new(genes: Vec<GeneNode<T>>) -> Result<Self> {
        let names = (1..=genes.len()).map(|i| format!("x{i}")).collect();
        Self::with_names(genes, names)
    }

    pub fn with_names(genes: Vec<GeneNode<T>>, names: Vec<String>) -> Result<Self> {
        if names.len() != genes.len() {
            return Err(Error::DimensionMismatch {
                expected: genes.len(),
                got: names.len(),
            });
        }
        let n = genes.len();
        for g in &genes {
            if !(g.production >= T::zero() && g.production.is_finite()) {
                return Err(Error::invalid(
                    "production",
                    g.production.as_f64(),
                    "must be finite and >= 0",
                ));
            }
            if !(g.degradation > T::zero() && g.degradation.is_finite()) {
                return Err(Error::invalid(
                    "degradation",
                    g.degradation.as_f64(),
                    "must be finite and > 0",
                ));
            }
            for e in &g.edges {
                if e.source >= n {
                    return Err(Error::SourceOutOfRange {
                        index: e.source,
                        genes: n,
                    });
                }
                if !(e.delay >= T::zero() && e.delay.is_finite()) {
                    return Err(Error::invalid("delay", e.delay.as_f64(), "must be finite and >= 0"));
                }
            }
        }
        Ok(Self { genes, names })
    }

    pub fn len(&self) -> usize {
        self.genes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.genes.is_empty()
    }

    pub fn genes(&self) -> &[GeneNode<T>] {
        &self.genes
    }

    pub fn gene(&self, i: usize) -> &GeneNode<T> {
        &self.genes[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, &RegulationEdge<T>)> {
        self.genes
            .iter()
            .enumerate()
            .flat_map(|(i, g)| g.edges.iter().map(move |e| (i, e)))
    }

    /// True when any edge has a positive delay.
    pub fn is_delayed(&self) -> bool {
        self.edges().any(|(_, e)| e.delay > T::zero())
    }

    pub fn max_delay(&self) -> T {
        self.edges().fold(T::zero(), |m, (_, e)| m.max(e.delay))
    }

    /// Smallest strictly positive delay, if any.
    pub fn min_positive_delay(&self) -> Option<T> {
        self.edges()
            .map(|(_, e)| e.delay)
            .filter(|d| *d > T::zero())
            .fold(None, |m, d| Some(m.map_or(d, |m: T| m.min(d))))
    }

    pub fn all_logistic(&self) -> bool {
        self.edges().all(|(_, e)| e.response.is_logistic())
    }

    /// Same topology with every delay set to zero.
    pub fn without_delays(&self) -> Self {
        let mut out = self.clone();
        for g in &mut out.genes {
            for e in &mut g.edges {
                e.delay = T::zero();
            }
        }
        out
    }

    /// Copy with gene parameters changed through a closure; revalidated.
    pub fn map_genes(&self, f: impl Fn(usize, &GeneNode<T>) -> GeneNode<T>) -> Result<Self> {
        let genes = self.genes.iter().enumerate().map(|(i, g)| f(i, g)).collect();
        Self::with_names(genes, self.names.clone())
    }

    pub(crate) fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: len,
            });
        }
        Ok(())
    }
}
