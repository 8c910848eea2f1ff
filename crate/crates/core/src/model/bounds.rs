use serde::Serialize;

use super::Network;
use crate::linalg::Matrix;
use crate::{Error, Result, Scalar};

/// Closed-form global bounds for an all-logistic network.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LipschitzReport<T> {
    /// `Σ_j L_i^j = Σ_m λ_{i,m}/4` for each gene.
    pub per_gene_row_sums: Vec<T>,
    /// `M = max_i (κ_i Σ_j L_i^j + γ_i)`.
    #[serde(rename = "bound_F")]
    pub bound_f: T,
    /// `K = κ_max · max_i (|M_i|² Λ_i²/16 + |M_i| Λ_i² ρ)`, `ρ = √3/18`.
    #[serde(rename = "bound_DF")]
    pub bound_df: T,
    /// Largest Jacobian spectral norm seen on a quasi-random sample of the
    /// invariant box. Informational only; not part of the bound.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sampled_spectral_norm: Option<T>,
}

/// Maximum of `|σ(1−σ)(1−2σ)|` over the reals.
pub(crate) fn rho<T: Scalar>() -> T {
    T::lit(3.0).sqrt() / T::lit(18.0)
}

impl<T: Scalar> Network<T> {
    fn require_logistic(&self, what: &'static str) -> Result<()> {
        if self.all_logistic() {
            Ok(())
        } else {
            Err(Error::NonLogisticEdge(what))
        }
    }

    /// Matrix of per-entry slope bounds `L_i^j = Σ_{m: j(i,m)=j} λ_{i,m}/4`.
    /// Repeated edges from the same source add up.
    pub fn edge_partial_bounds(&self) -> Result<Matrix<T>> {
        self.require_logistic("Lipschitz bound")?;
        let n = self.len();
        let quarter = T::lit(0.25);
        let mut l = Matrix::zeros(n, n);
        for (i, e) in self.edges() {
            let s = e.response.as_logistic().expect("checked");
            l[(i, e.source)] = l[(i, e.source)] + s.steepness() * quarter;
        }
        Ok(l)
    }

    pub fn lipschitz_bound_f(&self) -> Result<T> {
        let l = self.edge_partial_bounds()?;
        Ok(self
            .genes()
            .iter()
            .enumerate()
            .map(|(i, g)| g.production * l.row(i).iter().copied().sum::<T>() + g.degradation)
            .fold(T::zero(), T::max))
    }

    pub fn lipschitz_bound_df(&self) -> Result<T> {
        self.require_logistic("Lipschitz bound")?;
        let kappa_max = self.genes().iter().fold(T::zero(), |m, g| m.max(g.production));
        let rho = rho::<T>();
        let worst = self
            .genes()
            .iter()
            .map(|g| {
                let m = T::lit(g.edges.len() as f64);
                let big_l = g
                    .edges
                    .iter()
                    .map(|e| e.response.as_logistic().expect("checked").steepness())
                    .fold(T::zero(), T::max);
                let l2 = big_l * big_l;
                m * m * l2 / T::lit(16.0) + m * l2 * rho
            })
            .fold(T::zero(), T::max);
        Ok(kappa_max * worst)
    }

    /// Both closed-form bounds plus per-gene row sums.
    pub fn lipschitz_report(&self) -> Result<LipschitzReport<T>> {
        let l = self.edge_partial_bounds()?;
        Ok(LipschitzReport {
            per_gene_row_sums: (0..self.len()).map(|i| l.row(i).iter().copied().sum()).collect(),
            bound_f: self.lipschitz_bound_f()?,
            bound_df: self.lipschitz_bound_df()?,
            sampled_spectral_norm: None,
        })
    }

    /// Upper corners of the positively invariant box `Π [0, κ_i/γ_i]`.
    ///
    /// Sigmoid edges are bounded by 1. A proportional edge contributes the
    /// upper bound of its source, so two-stage cascades get the propagated
    /// bound (e.g. `κ_p (κ_m/γ_m) / γ_p` for the protein); a cycle made of
    /// proportional edges has no finite box.
    pub fn invariant_box(&self) -> Result<Vec<(T, T)>> {
        let n = self.len();
        let mut upper: Vec<Option<T>> = vec![None; n];
        for _ in 0..=n {
            let mut progressed = false;
            for i in 0..n {
                if upper[i].is_some() {
                    continue;
                }
                let g = self.gene(i);
                let mut sup = Some(T::one());
                for e in &g.edges {
                    let s = match e.response.supremum() {
                        Some(s) => Some(s),
                        None => upper[e.source],
                    };
                    sup = match (sup, s) {
                        (Some(a), Some(b)) => Some(a * b),
                        _ => None,
                    };
                }
                if let Some(s) = sup {
                    upper[i] = Some(g.production * s / g.degradation);
                    progressed = true;
                }
            }
            if !progressed {
                break;
            }
        }
        upper
            .into_iter()
            .enumerate()
            .map(|(i, u)| {
                u.map(|u| (T::zero(), u))
                    .ok_or_else(|| Error::UnboundedBox(self.names()[i].clone()))
            })
            .collect()
    }
}

impl Network<f64> {
    /// Largest spectral norm of the Jacobian over `samples` Halton points of
    /// the invariant box.
    pub fn sample_spectral_norm(&self, samples: usize) -> Result<f64> {
        let bx = self.invariant_box()?;
        let mut worst: f64 = 0.0;
        let mut x = vec![0.0; self.len()];
        for k in 1..=samples {
            for (d, xi) in x.iter_mut().enumerate() {
                *xi = bx[d].1 * halton(k, PRIMES[d % PRIMES.len()]);
            }
            worst = worst.max(self.jacobian(&x)?.spectral_norm());
        }
        Ok(worst)
    }
}

const PRIMES: [usize; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn halton(mut k: usize, base: usize) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while k > 0 {
        f /= base as f64;
        r += f * (k % base) as f64;
        k /= base;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::*;
    use crate::sigmoid::{HillSpec, LogisticSpec, Orientation, Response};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn two_node_example() {
        let r = two_node_lipschitz().lipschitz_report().unwrap();
        assert_eq!(r.bound_f, 5.5);
        assert_eq!(r.per_gene_row_sums, vec![1.25, 1.25]);
        // 4 · (4·6.25/16 + 2·6.25·√3/18)
        let k = 4.0 * (4.0 * 6.25 / 16.0 + 2.0 * 6.25 * 3f64.sqrt() / 18.0);
        assert!((r.bound_df - k).abs() < 1e-12);
        assert!((r.bound_df - 11.0613).abs() < 1e-4);
    }

    #[test]
    fn trivial_cases() {
        let lone = Network::new(vec![GeneNode::<f64>::constitutive(1.0, 2.0)]).unwrap();
        assert_eq!(lone.lipschitz_bound_f().unwrap(), 2.0);
        assert_eq!(lone.lipschitz_bound_df().unwrap(), 0.0);

        let one = Network::new(vec![GeneNode::new(
            1.0,
            1.0,
            vec![RegulationEdge::new(0, LogisticSpec::increasing(1.0, 0.0).unwrap())],
        )])
        .unwrap();
        let k = 1.0 / 16.0 + 3f64.sqrt() / 18.0;
        assert!((one.lipschitz_bound_df().unwrap() - k).abs() < 1e-15);
        assert!((k - 0.1587).abs() < 1e-4);

        assert!(matches!(
            hill_oscillator().lipschitz_report(),
            Err(Error::NonLogisticEdge(_))
        ));
    }

    #[test]
    fn rho_is_the_second_derivative_peak() {
        let s = LogisticSpec::increasing(1.0, 0.0).unwrap();
        let peak = (0..200_001)
            .map(|k| s.second_derivative(-10.0 + 1e-4 * k as f64).abs())
            .fold(0.0, f64::max);
        assert!((peak - super::rho::<f64>()).abs() < 1e-9);
    }

    #[test]
    fn multiplicity_sums() {
        let a = LogisticSpec::increasing(2.0, 1.0).unwrap();
        let b = LogisticSpec::decreasing(6.0, 1.0).unwrap();
        let net = Network::new(vec![GeneNode::new(
            1.0,
            1.0,
            vec![RegulationEdge::new(0, a), RegulationEdge::new(0, b)],
        )])
        .unwrap();
        assert_eq!(net.edge_partial_bounds().unwrap()[(0, 0)], 2.0);
    }

    #[test]
    fn jacobian_entries_respect_partial_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let n = rng.gen_range(1..=6);
            let net = super::super::field::tests::random_network(&mut rng, n);
            let l = net.edge_partial_bounds().unwrap();
            let bf = net.lipschitz_bound_f().unwrap();
            let bx = net.invariant_box().unwrap();
            for _ in 0..10 {
                let x: Vec<f64> = bx.iter().map(|(_, hi)| rng.gen_range(0.0..=hi.max(1e-9))).collect();
                let j = net.jacobian(&x).unwrap();
                for r in 0..n {
                    let g = net.gene(r);
                    for c in 0..n {
                        let cap = g.production * l[(r, c)] + if r == c { g.degradation } else { 0.0 };
                        assert!(j[(r, c)].abs() <= cap * (1.0 + 1e-12) + 1e-15);
                    }
                }
                assert!(j.spectral_norm() <= bf * (n as f64).sqrt() * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn spectral_sample_is_informational() {
        let net = two_node_lipschitz();
        let s = net.sample_spectral_norm(1000).unwrap();
        assert!(s > 0.0 && s <= 5.5 * 2f64.sqrt());
    }

    #[test]
    fn boxes() {
        let b = oscillator().invariant_box().unwrap();
        assert_eq!(b, vec![(0.0, 12.0), (0.0, 8.0)]);

        let alpha = 600.0;
        let gamma = 0.5;
        let one = Network::new(vec![GeneNode::new(
            alpha * gamma,
            gamma,
            vec![RegulationEdge::new(0, LogisticSpec::increasing(3.0, 1.0).unwrap())],
        )])
        .unwrap();
        assert_eq!(one.invariant_box().unwrap(), vec![(0.0, 600.0)]);

        let off = Network::new(vec![GeneNode::<f64>::constitutive(0.0, 1.0)]).unwrap();
        assert_eq!(off.invariant_box().unwrap(), vec![(0.0, 0.0)]);

        // mRNA → protein cascade
        let cascade = Network::new(vec![
            GeneNode::new(
                0.003,
                0.001,
                vec![RegulationEdge::new(1, LogisticSpec::increasing(3.0, 1.0).unwrap())],
            ),
            GeneNode::new(0.002, 1e-5, vec![RegulationEdge::new(0, Response::Proportional)]),
        ])
        .unwrap();
        let b: Vec<(f64, f64)> = cascade.invariant_box().unwrap();
        assert!((b[0].1 - 3.0).abs() < 1e-12);
        assert!((b[1].1 - 600.0).abs() < 1e-9);

        let ring = Network::new(vec![
            GeneNode::new(1.0, 1.0, vec![RegulationEdge::new(1, Response::Proportional)]),
            GeneNode::new(1.0, 1.0, vec![RegulationEdge::new(0, Response::<f64>::Proportional)]),
        ])
        .unwrap();
        assert!(matches!(ring.invariant_box(), Err(Error::UnboundedBox(_))));

        let h = Network::new(vec![GeneNode::new(
            2.0,
            1.0,
            vec![RegulationEdge::new(
                0,
                HillSpec::new(2.0, 1.0, Orientation::Decreasing).unwrap(),
            )],
        )])
        .unwrap();
        assert_eq!(h.invariant_box().unwrap(), vec![(0.0, 2.0)]);
    }
}
