//! Small self-contained linear algebra: dense and banded LU, Thomas sweeps,
//! the sine transform and a complex eigenvalue solver.

pub mod banded;
pub mod dense;
pub mod dst;
pub mod eigen;
pub mod tridiag;

pub use banded::{BandMatrix, BandedLu};
pub use dense::{DenseLu, DenseMatrix};
pub use dst::SineTransform;
pub use eigen::{eigenpairs, eigenvalues, EigenPair};
pub use tridiag::solve_tridiagonal;
