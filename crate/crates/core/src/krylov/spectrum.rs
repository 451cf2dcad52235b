use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use super::LinearOperator;
use crate::error::{Error, Result};
use crate::linalg::{eigen, DenseMatrix};
use crate::scalar::{Cplx, Real};

/// Largest operator dimension [`assemble_dense`] accepts.
pub const ASSEMBLY_CAP: usize = 5000;

/// Eigenpairs recomputed by inverse iteration to measure backward error.
pub const BACKWARD_ERROR_SAMPLES: usize = 10;

/// Column `j` is `op(e_j)`; columns are computed in parallel.
pub fn assemble_dense<T: Real, O: LinearOperator<T> + ?Sized>(
    op: &O,
    dim: usize,
) -> Result<DenseMatrix<T>> {
    if dim > ASSEMBLY_CAP {
        return Err(Error::DimensionGuard {
            dim,
            cap: ASSEMBLY_CAP,
        });
    }
    if dim != op.dim() {
        return Err(Error::InvalidInput(format!(
            "requested dimension {dim} but operator has {}",
            op.dim()
        )));
    }
    let columns: Vec<Vec<Cplx<T>>> = (0..dim)
        .into_par_iter()
        .map(|j| {
            let mut e = vec![Cplx::new(T::zero(), T::zero()); dim];
            e[j] = Cplx::new(T::one(), T::zero());
            op.apply(&e)
        })
        .collect::<Result<_>>()?;
    Ok(DenseMatrix::from_columns(&columns))
}

/// How many eigenvalues sit on, outside or inside the circle `|1 − μ| = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CircleCounts {
    pub on: usize,
    pub outside: usize,
    pub inside: usize,
}

/// Eigenvalues of `I − A` and their distance to the circle centred at 1.
#[derive(Debug, Clone)]
pub struct SpectrumReport<T> {
    pub eigenvalues: Vec<Cplx<T>>,
    pub dim: usize,
    /// `| |1 − μ| − 1 |` per eigenvalue.
    pub unit_circle_distances: Vec<T>,
    /// Mode index per eigenvalue, when the operator is mode-separated.
    pub mode_labels: Option<Vec<usize>>,
    /// Largest `‖Mv − μv‖/‖M‖_F` over the sampled eigenpairs.
    pub max_backward_error: T,
}

impl<T: Real> SpectrumReport<T> {
    pub fn from_eigenvalues(eigenvalues: Vec<Cplx<T>>, mode_labels: Option<Vec<usize>>) -> Self {
        let one = Cplx::new(T::one(), T::zero());
        let unit_circle_distances = eigenvalues
            .iter()
            .map(|mu| ((one - mu).norm() - T::one()).abs())
            .collect();
        Self {
            dim: eigenvalues.len(),
            eigenvalues,
            unit_circle_distances,
            mode_labels,
            max_backward_error: T::zero(),
        }
    }

    /// Classifies with `| |1 − μ| − 1 | ≤ tol` as on the circle.
    pub fn classify(&self, tol: T) -> CircleCounts {
        let one = Cplx::new(T::one(), T::zero());
        let mut counts = CircleCounts {
            on: 0,
            outside: 0,
            inside: 0,
        };
        for mu in &self.eigenvalues {
            let r = (one - mu).norm();
            if (r - T::one()).abs() <= tol {
                counts.on += 1;
            } else if r > T::one() {
                counts.outside += 1;
            } else {
                counts.inside += 1;
            }
        }
        counts
    }
}

/// Dense eigenvalues plus a backward-error audit on evenly spaced samples.
pub fn spectrum<T: Real>(matrix: &DenseMatrix<T>) -> Result<SpectrumReport<T>> {
    let values = eigen::eigenvalues(matrix)?;
    let n = values.len();
    let picks: Vec<Cplx<T>> = if n <= BACKWARD_ERROR_SAMPLES {
        values.clone()
    } else {
        (0..BACKWARD_ERROR_SAMPLES)
            .map(|i| values[i * n / BACKWARD_ERROR_SAMPLES])
            .collect()
    };
    let pairs = eigen::eigenpairs(matrix, &picks)?;
    let mut report = SpectrumReport::from_eigenvalues(values, None);
    report.max_backward_error = pairs
        .iter()
        .map(|p| p.backward_error)
        .fold(T::zero(), T::max);
    Ok(report)
}

/// `re_mu,im_mu,dist_unit_circle` rows.
pub fn spectrum_csv<T: Real>(report: &SpectrumReport<T>) -> String {
    let mut out = String::from("re_mu,im_mu,dist_unit_circle\n");
    for (mu, d) in report.eigenvalues.iter().zip(&report.unit_circle_distances) {
        let _ = writeln!(out, "{},{},{}", mu.re, mu.im, d);
    }
    out
}
