use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::model::{GeneNode, Network, RegulationEdge};
use crate::sigmoid::{HillSpec, LogisticSpec, Orientation, Response};
use crate::{Error, Result};

/// Informational unit labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Units {
    pub time: String,
    pub concentration: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SourceRef {
    Index(usize),
    Name(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeFamily {
    Logistic,
    Hill,
    /// Production proportional to the source level (no saturation).
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeOrientation {
    Activation,
    Repression,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub source: SourceRef,
    pub family: EdgeFamily,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steepness_or_n: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation: Option<EdgeOrientation>,
    #[serde(default)]
    pub delay: f64,
    /// Scaled logistic repression: the factor `1 + e^{−λθ}` is folded into
    /// the gene's κ.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub scaled: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneRecord {
    pub name: String,
    pub kappa: f64,
    pub gamma: f64,
    #[serde(default)]
    pub edges: Vec<EdgeRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub units: Option<Units>,
    pub genes: Vec<GeneRecord>,
}

impl ModelFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn to_network(&self) -> Result<Network<f64>> {
        let names: Vec<String> = self.genes.iter().map(|g| g.name.clone()).collect();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::Model(format!("duplicate gene name '{n}'")));
            }
        }
        let resolve = |s: &SourceRef| -> Result<usize> {
            match s {
                SourceRef::Index(i) => Ok(*i),
                SourceRef::Name(n) => names
                    .iter()
                    .position(|m| m == n)
                    .ok_or_else(|| Error::Model(format!("unknown source gene '{n}'"))),
            }
        };
        let mut genes = Vec::with_capacity(self.genes.len());
        for g in &self.genes {
            let mut kappa = g.kappa;
            let mut edges = Vec::with_capacity(g.edges.len());
            for e in &g.edges {
                let source = resolve(&e.source)?;
                let context = |what: &str| Error::Model(format!("gene '{}': {what}", g.name));
                let response: Response<f64> = match e.family {
                    EdgeFamily::Linear => {
                        if e.steepness_or_n.is_some() || e.theta.is_some() || e.orientation.is_some() || e.scaled {
                            return Err(context("linear edges take no shape parameters"));
                        }
                        Response::Proportional
                    }
                    family => {
                        let (Some(k), Some(theta), Some(o)) = (e.steepness_or_n, e.theta, e.orientation) else {
                            return Err(context("sigmoid edges need steepness_or_n, theta and orientation"));
                        };
                        let o = match o {
                            EdgeOrientation::Activation => Orientation::Increasing,
                            EdgeOrientation::Repression => Orientation::Decreasing,
                        };
                        if e.scaled && !(family == EdgeFamily::Logistic && o == Orientation::Decreasing) {
                            return Err(context("only logistic repression edges can be scaled"));
                        }
                        if family == EdgeFamily::Logistic {
                            let spec = LogisticSpec::new(k, theta, o)?;
                            if e.scaled {
                                kappa *= spec.scale_factor();
                            }
                            spec.into()
                        } else {
                            HillSpec::new(k, theta, o)?.into()
                        }
                    }
                };
                edges.push(RegulationEdge::delayed(source, response, e.delay));
            }
            genes.push(GeneNode::new(kappa, g.gamma, edges));
        }
        Network::with_names(genes, names)
    }

    /// Inverse of [`ModelFile::to_network`] (scaled edges come back as
    /// plain edges with the factor already in κ).
    pub fn from_network(network: &Network<f64>, units: Option<Units>) -> Self {
        let genes = network
            .genes()
            .iter()
            .zip(network.names())
            .map(|(g, name)| GeneRecord {
                name: name.clone(),
                kappa: g.production,
                gamma: g.degradation,
                edges: g
                    .edges
                    .iter()
                    .map(|e| {
                        let orient = |o: Orientation| match o {
                            Orientation::Increasing => EdgeOrientation::Activation,
                            Orientation::Decreasing => EdgeOrientation::Repression,
                        };
                        let (family, k, theta, o) = match &e.response {
                            Response::Logistic(s) => (
                                EdgeFamily::Logistic,
                                Some(s.steepness()),
                                Some(s.threshold()),
                                Some(orient(s.orientation())),
                            ),
                            Response::Hill(s) => (
                                EdgeFamily::Hill,
                                Some(s.coefficient()),
                                Some(s.threshold()),
                                Some(orient(s.orientation())),
                            ),
                            Response::Proportional => (EdgeFamily::Linear, None, None, None),
                        };
                        EdgeRecord {
                            source: SourceRef::Name(network.names()[e.source].clone()),
                            family,
                            steepness_or_n: k,
                            theta,
                            orientation: o,
                            delay: e.delay,
                            scaled: false,
                        }
                    })
                    .collect(),
            })
            .collect();
        ModelFile { units, genes }
    }
}
