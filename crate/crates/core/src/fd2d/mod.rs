//! Finite-difference two-subdomain Helmholtz solver on the rectangle
//! `[−ℓ/2, ℓ/2] × [0, h]`, split at `x = 0`.
//!
//! Walls `y = 0`, `y = h` and `x = −ℓ/2` are Dirichlet (the latter carries the
//! sine source); `x = ℓ/2` is Dirichlet for the cavity and absorbing for the
//! waveguide.

mod assembly;
mod config;
mod ddm;
mod grid;
mod transmission;

pub use assembly::{build_subdomain, solve_monodomain, source_profile, SubdomainProblem};
pub use config::{
    ConfigFile, ExperimentConfig, OperatorKind, Scenario, DEFAULT_ELL_OVER_LAMBDA,
    DEFAULT_GMRES_TOL, DEFAULT_POINTS_PER_WAVELENGTH, DEFAULT_SOURCE_MODES, OO2_EXCLUSION,
};
pub use ddm::{DdmSolution, DdmSolver, InterfaceTrace};
pub use grid::{Field2D, Grid2D, MIN_POINTS_PER_WAVELENGTH};
pub use transmission::{
    apply_transmission, discrete_lambda, discrete_optimal_symbol, discrete_rho, discrete_s2,
    second_difference, sine_mode, transmission_matrix, OuterCondition,
};
