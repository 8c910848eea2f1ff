use serde::Serialize;

use super::Classification;
use crate::linalg::Matrix;
use crate::model::Network;
use crate::{Error, Result, Scalar};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquilibriumReport<T> {
    pub state: Vec<T>,
    /// `‖F(x*)‖∞`.
    pub residual_norm: T,
    pub iterations: usize,
    /// Trace, determinant and `tr² − 4 det`; only for two-gene networks.
    pub trace: Option<T>,
    pub determinant: Option<T>,
    pub discriminant: Option<T>,
    /// Jacobian eigenvalues as `(re, im)`, for networks of any other size.
    pub eigenvalues: Option<Vec<(f64, f64)>>,
    pub classification: Classification,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions<T> {
    pub tol: T,
    pub max_iterations: usize,
}

impl<T: Scalar> NewtonOptions<T> {
    pub fn new(tol: T) -> Self {
        Self {
            tol,
            max_iterations: 100,
        }
    }
}

fn inf_norm<T: Scalar>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |m, x| m.max(x.abs()))
}

/// Damped Newton iteration for `F(x) = 0`.
///
/// Each step solves `J Δ = −F`, halves the step until `‖F‖∞` decreases
/// (accepting the shortest trial otherwise) and clips the iterate into
/// `bounds` when given. Returns the root, its residual and the iteration
/// count.
pub fn newton_solve<T: Scalar>(
    mut f: impl FnMut(&[T]) -> Result<Vec<T>>,
    mut jac: impl FnMut(&[T]) -> Result<Matrix<T>>,
    guess: &[T],
    bounds: Option<&[(T, T)]>,
    opts: NewtonOptions<T>,
) -> Result<(Vec<T>, T, usize)> {
    let project = |x: &mut [T]| {
        if let Some(b) = bounds {
            for (v, (lo, hi)) in x.iter_mut().zip(b) {
                *v = v.max(*lo).min(*hi);
            }
        }
    };
    let mut x = guess.to_vec();
    project(&mut x);
    let mut fx = f(&x)?;
    let mut r = inf_norm(&fx);
    for it in 0..opts.max_iterations {
        if r <= opts.tol {
            return Ok((x, r, it));
        }
        let j = jac(&x)?;
        let neg: Vec<T> = fx.iter().map(|v| -*v).collect();
        let dx = j.solve(&neg).map_err(|_| Error::SingularJacobian { iteration: it })?;
        let mut step = T::one();
        let mut best: Option<(Vec<T>, Vec<T>, T)> = None;
        for _ in 0..30 {
            let mut trial: Vec<T> = x.iter().zip(&dx).map(|(a, d)| *a + step * *d).collect();
            project(&mut trial);
            let ft = f(&trial)?;
            let rt = inf_norm(&ft);
            if rt.is_finite() && best.as_ref().is_none_or(|b| rt < b.2) {
                best = Some((trial, ft, rt));
            }
            if rt < r {
                break;
            }
            step = step * T::lit(0.5);
        }
        match best {
            Some((bx, bf, br)) => {
                x = bx;
                fx = bf;
                r = br;
            }
            None => {
                return Err(Error::NoConvergence {
                    iterations: it,
                    residual: r.as_f64(),
                })
            }
        }
    }
    if r <= opts.tol {
        return Ok((x, r, opts.max_iterations));
    }
    Err(Error::NoConvergence {
        iterations: opts.max_iterations,
        residual: r.as_f64(),
    })
}

/// Trace–determinant classification of a planar linearisation.
pub fn classify_2x2<T: Scalar>(trace: T, det: T) -> Classification {
    if det < T::zero() {
        return Classification::Saddle;
    }
    if det == T::zero() || trace == T::zero() {
        return Classification::Undetermined;
    }
    if trace > T::zero() {
        return Classification::Unstable;
    }
    if trace * trace - T::lit(4.0) * det < T::zero() {
        Classification::StableSpiral
    } else {
        Classification::StableNode
    }
}

/// Classification from eigenvalue real parts; any `|re| <= margin` leaves it
/// undetermined.
pub fn classify_eigenvalues(eigs: &[(f64, f64)], margin: f64) -> Classification {
    if eigs.iter().any(|(re, _)| re.abs() <= margin) {
        return Classification::Undetermined;
    }
    let unstable = eigs.iter().filter(|(re, _)| *re > 0.0).count();
    match unstable {
        0 if eigs.iter().any(|(_, im)| *im != 0.0) => Classification::StableSpiral,
        0 => Classification::StableNode,
        k if k == eigs.len() => Classification::Unstable,
        _ => Classification::Saddle,
    }
}

/// Equilibrium of a delay-free network by damped Newton inside the
/// invariant box, with linear stability from the analytic Jacobian.
pub fn find_equilibrium<T: Scalar>(network: &Network<T>, guess: &[T], tol: T) -> Result<EquilibriumReport<T>> {
    find_equilibrium_with(network, guess, NewtonOptions::new(tol))
}

pub fn find_equilibrium_with<T: Scalar>(
    network: &Network<T>,
    guess: &[T],
    opts: NewtonOptions<T>,
) -> Result<EquilibriumReport<T>> {
    if network.is_empty() {
        return Err(Error::EmptyNetwork);
    }
    if network.is_delayed() {
        return Err(Error::DelayedNetwork);
    }
    network.check_dim(guess.len())?;
    if !(opts.tol > T::zero()) {
        return Err(Error::invalid("tol", opts.tol.as_f64(), "must be > 0"));
    }
    let bx = network.invariant_box()?;
    let (state, residual_norm, iterations) = newton_solve(
        |x| network.vector_field(x),
        |x| network.jacobian(x),
        guess,
        Some(&bx),
        opts,
    )?;
    let j = network.jacobian(&state)?;
    let margin = 10.0 * opts.tol.as_f64();
    let mut report = EquilibriumReport {
        state,
        residual_norm,
        iterations,
        trace: None,
        determinant: None,
        discriminant: None,
        eigenvalues: None,
        classification: Classification::Undetermined,
    };
    if network.len() == 2 {
        let (tr, det) = (j.trace(), j.determinant());
        report.trace = Some(tr);
        report.determinant = Some(det);
        report.discriminant = Some(tr * tr - T::lit(4.0) * det);
        report.classification = classify_2x2(tr, det);
    } else {
        let jf = Matrix::from_rows(
            &j.to_rows()
                .into_iter()
                .map(|r| r.into_iter().map(Scalar::as_f64).collect())
                .collect::<Vec<Vec<f64>>>(),
        );
        let eigs = jf.eigenvalues();
        report.classification = classify_eigenvalues(&eigs, margin);
        report.eigenvalues = Some(eigs);
    }
    Ok(report)
}
