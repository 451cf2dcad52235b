//! Optimized Schwarz transmission conditions for Helmholtz problems on a
//! closed cavity versus an unbounded (waveguide) configuration.
//!
//! The crate is organized bottom-up:
//!
//! - [`symbols`]: Fourier symbols of the OO0, EMDA, OO2 and Padé transmission
//!   operators, the two optimal symbols and the convergence radii they induce.
//! - [`modal`]: per-mode Schwarz iteration built from the exact closed-form
//!   subdomain solutions; an oracle for every radius formula.
//! - [`fd2d`]: finite-difference two-subdomain solver recast as `(I − A) d = b`.
//! - [`krylov`]: matrix-free GMRES and dense spectra of `I − A`.
//! - [`experiments`]: the sweeps, GMRES profiles and spectra exported as CSV.
//!
//! Everything numerical is generic over [`Real`]; the `f64` aliases below
//! are what the experiments and tests use.

pub mod error;
pub mod experiments;
pub mod fd2d;
pub mod krylov;
pub mod linalg;
pub mod modal;
pub mod scalar;
pub mod setup;
pub mod symbols;

pub use error::{Error, Result};
pub use scalar::{Cplx, Real};
pub use setup::{FourierMode, PhysicalSetup, Regime, Side};
pub use symbols::{PadeCoefficients, SymbolSpec};

/// Double-precision complex scalar.
pub type C64 = num_complex::Complex<f64>;
pub type Setup = setup::PhysicalSetup<f64>;
pub type Mode = setup::FourierMode<f64>;
pub type Symbol = symbols::SymbolSpec<f64>;
pub type Pade = symbols::PadeCoefficients<f64>;
pub type Modal = modal::ModalState<f64>;
pub type Grid = fd2d::Grid2D<f64>;
pub type Config = fd2d::ExperimentConfig<f64>;
pub type Ddm = fd2d::DdmSolver<f64>;
pub type Trace = fd2d::InterfaceTrace<f64>;
pub type Spectrum = krylov::SpectrumReport<f64>;
pub type GmresRun = krylov::GmresTrace<f64>;
