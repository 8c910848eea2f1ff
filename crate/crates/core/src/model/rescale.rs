use super::Network;
use crate::sigmoid::{standard_logistic, LogisticSpec, Response};
use crate::{Error, Result, Scalar};

/// Turns a weighted-input edge `σ(±λ(w·x − θ))` into the plain form
/// `σ(±λ'(x − θ'))` with `λ' = λ|w|`, `θ' = θ/w`. A negative weight flips
/// the orientation.
pub fn rescale_edge<T: Scalar>(spec: &LogisticSpec<T>, weight: T) -> Result<LogisticSpec<T>> {
    if weight == T::zero() || !weight.is_finite() {
        return Err(Error::ZeroWeight);
    }
    let orientation = if weight < T::zero() {
        spec.orientation().flipped()
    } else {
        spec.orientation()
    };
    LogisticSpec::new(spec.steepness() * weight.abs(), spec.threshold() / weight, orientation)
}

impl<T: Scalar> Network<T> {
    /// Network whose edges are the plain-form equivalents of the weighted
    /// edges described by `weights[gene][edge]`.
    pub fn rescale_weights(&self, weights: &[Vec<T>]) -> Result<Self> {
        self.check_weights(weights)?;
        let mut genes = self.genes().to_vec();
        for (g, w) in genes.iter_mut().zip(weights) {
            for (e, &wk) in g.edges.iter_mut().zip(w) {
                let s = e.response.as_logistic().ok_or(Error::NonLogisticEdge("rescaling"))?;
                e.response = Response::Logistic(rescale_edge(s, wk)?);
            }
        }
        Self::with_names(genes, self.names().to_vec())
    }

    /// Vector field of the weighted-input formulation, evaluated directly:
    /// each logistic edge contributes `σ(±λ(w·x_j − θ))`.
    pub fn weighted_vector_field(&self, weights: &[Vec<T>], state: &[T]) -> Result<Vec<T>> {
        self.check_weights(weights)?;
        self.check_dim(state.len())?;
        self.genes()
            .iter()
            .zip(weights)
            .enumerate()
            .map(|(i, (g, w))| {
                let mut f = T::one();
                for (e, &wk) in g.edges.iter().zip(w) {
                    if wk == T::zero() {
                        return Err(Error::ZeroWeight);
                    }
                    let s = e.response.as_logistic().ok_or(Error::NonLogisticEdge("rescaling"))?;
                    let z = s.orientation().sign::<T>() * s.steepness() * (wk * state[e.source] - s.threshold());
                    f = f * standard_logistic(z);
                }
                Ok(g.production * f - g.degradation * state[i])
            })
            .collect()
    }

    fn check_weights(&self, weights: &[Vec<T>]) -> Result<()> {
        self.check_dim(weights.len())?;
        for (g, w) in self.genes().iter().zip(weights) {
            if w.len() != g.edges.len() {
                return Err(Error::DimensionMismatch {
                    expected: g.edges.len(),
                    got: w.len(),
                });
            }
        }
        Ok(())
    }
}
