//! Matrix-free GMRES without restart and dense spectra of interface operators.

mod gmres;
mod spectrum;

pub use gmres::{gmres, gmres_csv, GmresTrace, REORTHOGONALIZATION_THRESHOLD};
pub use spectrum::{
    assemble_dense, spectrum, spectrum_csv, CircleCounts, SpectrumReport, ASSEMBLY_CAP,
    BACKWARD_ERROR_SAMPLES,
};

use crate::error::Result;
use crate::linalg::DenseMatrix;
use crate::scalar::{Cplx, Real};

/// A linear map on complex vectors of fixed dimension.
pub trait LinearOperator<T: Real>: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[Cplx<T>]) -> Result<Vec<Cplx<T>>>;
}

impl<T: Real> LinearOperator<T> for DenseMatrix<T> {
    fn dim(&self) -> usize {
        self.cols()
    }

    fn apply(&self, x: &[Cplx<T>]) -> Result<Vec<Cplx<T>>> {
        Ok(self.matvec(x))
    }
}

/// `I − A` for a wrapped operator `A`.
pub struct IdentityMinus<'a, O: ?Sized>(pub &'a O);

impl<T: Real, O: LinearOperator<T> + ?Sized> LinearOperator<T> for IdentityMinus<'_, O> {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn apply(&self, x: &[Cplx<T>]) -> Result<Vec<Cplx<T>>> {
        let ax = self.0.apply(x)?;
        Ok(x.iter().zip(ax).map(|(xi, ai)| xi - ai).collect())
    }
}

/// Closure-backed operator.
pub struct FnOperator<F> {
    dim: usize,
    f: F,
}

impl<F> FnOperator<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<T: Real, F> LinearOperator<T> for FnOperator<F>
where
    F: Fn(&[Cplx<T>]) -> Result<Vec<Cplx<T>>> + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &[Cplx<T>]) -> Result<Vec<Cplx<T>>> {
        (self.f)(x)
    }
}
