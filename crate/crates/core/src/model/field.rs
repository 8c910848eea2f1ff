use super::{Network, RegulationEdge};
use crate::linalg::Matrix;
use crate::{Error, Result, Scalar};

impl<T: Scalar> Network<T> {
    /// Product of the edge responses of `gene`, with each edge's source level
    /// supplied by `source_level`. Returns exactly 1 for a gene without edges.
    #[inline]
    pub fn product_with(&self, gene: usize, mut source_level: impl FnMut(&RegulationEdge<T>) -> T) -> T {
        self.genes[gene]
            .edges
            .iter()
            .fold(T::one(), |acc, e| acc * e.response.value(source_level(e)))
    }

    /// `f_i(x)`: product of the per-edge responses evaluated at `inputs`.
    /// Delays are ignored.
    pub fn regulatory_product(&self, gene: usize, inputs: &[T]) -> Result<T> {
        self.check_dim(inputs.len())?;
        if gene >= self.len() {
            return Err(Error::SourceOutOfRange {
                index: gene,
                genes: self.len(),
            });
        }
        Ok(self.product_with(gene, |e| inputs[e.source]))
    }

    /// Fills `out` with `κ_i f_i − γ_i x_i`, with regulator levels taken from
    /// `source_level` (used by the delay integrator).
    pub(crate) fn field_with(&self, state: &[T], out: &mut [T], mut source_level: impl FnMut(&RegulationEdge<T>) -> T) {
        for (i, g) in self.genes.iter().enumerate() {
            let f = self.product_with(i, &mut source_level);
            out[i] = g.production * f - g.degradation * state[i];
        }
    }

    pub(crate) fn field_into(&self, state: &[T], out: &mut [T]) {
        self.field_with(state, out, |e| state[e.source]);
    }

    /// Right-hand side of the delay-free system.
    pub fn vector_field(&self, state: &[T]) -> Result<Vec<T>> {
        if self.is_delayed() {
            return Err(Error::DelayedNetwork);
        }
        self.check_dim(state.len())?;
        let mut out = vec![T::zero(); self.len()];
        self.field_into(state, &mut out);
        Ok(out)
    }

    /// Analytic Jacobian `∂F_i/∂x_j = κ_i ∂f_i/∂x_j − γ_i δ_ij`.
    ///
    /// Each edge contributes its slope times the product of the other
    /// factors of the same gene (prefix/suffix products, no division).
    /// Hill edges are differentiated in closed form and fail at a zero input
    /// with non-integer coefficient.
    pub fn jacobian(&self, state: &[T]) -> Result<Matrix<T>> {
        if self.is_delayed() {
            return Err(Error::DelayedNetwork);
        }
        self.check_dim(state.len())?;
        let n = self.len();
        let mut jac = Matrix::zeros(n, n);
        for (i, g) in self.genes.iter().enumerate() {
            let values: Vec<T> = g.edges.iter().map(|e| e.response.value(state[e.source])).collect();
            let m = values.len();
            let mut prefix = vec![T::one(); m + 1];
            for k in 0..m {
                prefix[k + 1] = prefix[k] * values[k];
            }
            let mut suffix = vec![T::one(); m + 1];
            for k in (0..m).rev() {
                suffix[k] = suffix[k + 1] * values[k];
            }
            for (k, e) in g.edges.iter().enumerate() {
                let slope = e.response.slope(state[e.source])?;
                jac[(i, e.source)] = jac[(i, e.source)] + g.production * slope * prefix[k] * suffix[k + 1];
            }
            jac[(i, i)] = jac[(i, i)] - g.degradation;
        }
        Ok(jac)
    }

    /// Standard-form arguments `z = ±λ(x_j − θ)` per gene and edge, such that
    /// each logistic edge evaluates to `σ(z)`.
    pub fn standard_form_arguments(&self, state: &[T]) -> Result<Vec<Vec<T>>> {
        self.check_dim(state.len())?;
        self.genes
            .iter()
            .map(|g| {
                g.edges
                    .iter()
                    .map(|e| {
                        e.response
                            .as_logistic()
                            .map(|s| s.argument(state[e.source]))
                            .ok_or(Error::NonLogisticEdge("standard form"))
                    })
                    .collect()
            })
            .collect()
    }
}
