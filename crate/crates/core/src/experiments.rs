//! Experiment drivers behind the command-line runner. Every driver is a pure
//! function of its inputs and renders its artifacts as CSV text.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fd2d::{DdmSolution, DdmSolver, ExperimentConfig, Scenario};
use crate::krylov::{
    assemble_dense, spectrum, CircleCounts, GmresTrace, IdentityMinus, SpectrumReport, ASSEMBLY_CAP,
};
use crate::linalg::eigenpairs;
use crate::modal::{empirical_radius, modal_iteration_spectrum, modal_rho};
use crate::scalar::Real;
use crate::setup::{refined_grid, PhysicalSetup};
use crate::symbols::{
    lambda_opt_close, lambda_opt_open, oo2_default_grid, optimize_oo2, sweep_rows, Oo2Fit,
    SymbolSpec, SWEEP_HEADER,
};

/// On-circle tolerance for the discrete operator.
pub const DISCRETE_CIRCLE_TOL: f64 = 1e-2;
/// On-circle tolerance for the modal operator.
pub const MODAL_CIRCLE_TOL: f64 = 1e-8;
/// Modes in the modal spectrum unless overridden.
pub const DEFAULT_MODAL_MODES: usize = 50;

/// Sampling of the Fourier variable for sweeps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRange {
    /// Upper end in units of `k`.
    pub s_max_over_k: f64,
    pub n_uniform: usize,
    pub n_refine: usize,
}

impl Default for SweepRange {
    fn default() -> Self {
        Self {
            s_max_over_k: 3.0,
            n_uniform: 601,
            n_refine: 40,
        }
    }
}

impl SweepRange {
    pub fn grid<T: Real>(&self, k: T) -> Vec<T> {
        refined_grid(
            k,
            T::lit(self.s_max_over_k) * k,
            self.n_uniform,
            self.n_refine,
        )
    }
}

/// Both optimal symbols for every wavenumber in `ks`, same geometry as `setup`.
/// Rows at cotangent poles carry NaN for the cavity symbol.
pub fn sweep_lambda<T: Real>(
    setup: &PhysicalSetup<T>,
    ks: &[T],
    range: &SweepRange,
) -> Result<String> {
    let mut out =
        String::from("k,s,re_lambda_open,im_lambda_open,re_lambda_close,im_lambda_close,regime\n");
    for &k in ks {
        let local = PhysicalSetup::new(k, setup.ell, setup.h)?;
        for s in range.grid(k) {
            let open = lambda_opt_open(s, k);
            let close = lambda_opt_close(s, &local).unwrap_or(T::nan());
            let _ = writeln!(
                out,
                "{k},{s},{},{},{close},0,{}",
                open.re,
                open.im,
                local.regime(s).as_str()
            );
        }
    }
    Ok(out)
}

/// `|ρ_close|` and `|ρ_open|` per operator. Each Padé operator is followed by
/// its square-root limit curve, labelled `<label>-limit`.
pub fn sweep_rho<T: Real>(
    specs: &[SymbolSpec<T>],
    setup: &PhysicalSetup<T>,
    range: &SweepRange,
) -> String {
    let grid = range.grid(setup.k);
    let mut out = format!("operator,{SWEEP_HEADER}\n");
    let mut emit = |label: &str, spec: &SymbolSpec<T>| {
        for r in sweep_rows(spec, setup, &grid) {
            let _ = writeln!(
                out,
                "{label},{},{},{},{},{},{}",
                r.s,
                r.lambda.re,
                r.lambda.im,
                r.abs_rho_close,
                r.abs_rho_open,
                r.regime.as_str()
            );
        }
    };
    for spec in specs {
        let label = spec.label().to_lowercase();
        emit(&label, spec);
        if matches!(spec, SymbolSpec::Pade { .. }) {
            emit(&format!("{label}-limit"), &SymbolSpec::OptOpen);
        }
    }
    out
}

/// Formula radius against the radius measured from the modal iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModalCheck<T> {
    pub m: usize,
    pub s: T,
    pub formula: T,
    pub empirical: T,
    pub formula_fallback: bool,
}

/// Runs the modal iteration for modes `1..=n_modes`. Modes whose radius is
/// undefined (poles, degeneracies) or whose iteration overflows are skipped.
pub fn modal_verify<T: Real>(
    spec: &SymbolSpec<T>,
    setup: &PhysicalSetup<T>,
    n_modes: usize,
    n_pairs: usize,
) -> Result<Vec<ModalCheck<T>>> {
    let mut rows = Vec::with_capacity(n_modes);
    for mode in setup.modes(n_modes) {
        let Ok(rho) = modal_rho(spec, mode, setup) else {
            continue;
        };
        let Ok(emp) = empirical_radius(spec, mode, setup, n_pairs) else {
            continue;
        };
        rows.push(ModalCheck {
            m: mode.m,
            s: mode.s,
            formula: rho.norm(),
            empirical: emp.value,
            formula_fallback: emp.formula_fallback,
        });
    }
    Ok(rows)
}

pub fn modal_verify_csv<T: Real>(rows: &[ModalCheck<T>]) -> String {
    let mut out = String::from("m,s,abs_rho_formula,abs_rho_empirical,abs_diff,formula_fallback\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.m,
            r.s,
            r.formula,
            r.empirical,
            (r.formula - r.empirical).abs(),
            r.formula_fallback
        );
    }
    out
}

/// Full DDM solve of one configuration.
pub fn solve<T: Real>(config: &ExperimentConfig<T>) -> Result<DdmSolution<T>> {
    DdmSolver::new(config.clone())?.solve()
}

/// GMRES history of the DDM solve for one configuration.
pub fn run_gmres_profile<T: Real>(config: &ExperimentConfig<T>) -> Result<GmresTrace<T>> {
    Ok(solve(config)?.gmres)
}

/// Both scenarios for the same operator and grid.
pub fn run_gmres_profiles<T: Real>(
    config: &ExperimentConfig<T>,
) -> Result<Vec<(Scenario, GmresTrace<T>)>> {
    [Scenario::Cavity, Scenario::Waveguide]
        .into_iter()
        .map(|scenario| {
            let cfg = ExperimentConfig {
                scenario,
                ..config.clone()
            };
            Ok((scenario, run_gmres_profile(&cfg)?))
        })
        .collect()
}

/// Interface eigenvector of the discrete `I − A`.
#[derive(Debug, Clone)]
pub struct InterfaceEigenvector<T> {
    pub index: usize,
    pub value: crate::scalar::Cplx<T>,
    pub vector: Vec<crate::scalar::Cplx<T>>,
}

/// Spectra of the discrete and the modal `I − A`.
#[derive(Debug, Clone)]
pub struct SpectrumRun<T> {
    pub discrete: SpectrumReport<T>,
    pub discrete_counts: CircleCounts,
    pub modal: SpectrumReport<T>,
    pub modal_counts: CircleCounts,
    pub eigenvectors: Vec<InterfaceEigenvector<T>>,
}

#[derive(Serialize)]
struct SpectrumSummary<'a> {
    operator: &'a str,
    scenario: &'a str,
    discrete_dim: usize,
    discrete_tol: f64,
    discrete: CircleCounts,
    discrete_max_backward_error: f64,
    modal_dim: usize,
    modal_tol: f64,
    modal: CircleCounts,
}

impl<T: Real> SpectrumRun<T> {
    pub fn summary_json(&self, config: &ExperimentConfig<T>) -> String {
        let summary = SpectrumSummary {
            operator: config.spec.label(),
            scenario: config.scenario.as_str(),
            discrete_dim: self.discrete.dim,
            discrete_tol: DISCRETE_CIRCLE_TOL,
            discrete: self.discrete_counts,
            discrete_max_backward_error: self.discrete.max_backward_error.to_f64_lossy(),
            modal_dim: self.modal.dim,
            modal_tol: MODAL_CIRCLE_TOL,
            modal: self.modal_counts,
        };
        serde_json::to_string_pretty(&summary).expect("plain summary serializes")
    }

    /// `index,re_mu,im_mu,side,j,y,re_v,im_v` with each vector scaled to unit norm.
    pub fn eigenvectors_csv(&self, config: &ExperimentConfig<T>) -> String {
        let ny = config.grid.ny;
        let mut out = String::from("index,re_mu,im_mu,side,j,y,re_v,im_v\n");
        for ev in &self.eigenvectors {
            for (n, v) in ev.vector.iter().enumerate() {
                let (side, j) = (n / ny, n % ny + 1);
                let _ = writeln!(
                    out,
                    "{},{},{},{side},{j},{},{},{}",
                    ev.index,
                    ev.value.re,
                    ev.value.im,
                    config.grid.y(j),
                    v.re,
                    v.im
                );
            }
        }
        out
    }
}

/// Assembles and diagonalizes the discrete `I − A`, and evaluates the modal
/// `I − A` on `n_modal_modes` modes of the same setup.
pub fn run_spectrum<T: Real>(
    config: &ExperimentConfig<T>,
    n_modal_modes: usize,
    export_eigenvectors: bool,
) -> Result<SpectrumRun<T>> {
    let dim = 2 * config.grid.ny;
    if dim > ASSEMBLY_CAP {
        return Err(Error::DimensionGuard {
            dim,
            cap: ASSEMBLY_CAP,
        });
    }
    let solver = DdmSolver::new(config.clone())?;
    let op = IdentityMinus(&solver);
    let matrix = assemble_dense(&op, 2 * solver.ny())?;
    let discrete = spectrum(&matrix)?;
    let discrete_counts = discrete.classify(T::lit(DISCRETE_CIRCLE_TOL));
    let modal = modal_iteration_spectrum(
        &config.spec,
        &config.setup.modes(n_modal_modes),
        &config.setup,
    )?;
    let modal_counts = modal.classify(T::lit(MODAL_CIRCLE_TOL));
    let eigenvectors = if export_eigenvectors {
        eigenpairs(&matrix, &discrete.eigenvalues)?
            .into_iter()
            .enumerate()
            .map(|(index, pair)| InterfaceEigenvector {
                index,
                value: pair.value,
                vector: pair.vector,
            })
            .collect()
    } else {
        Vec::new()
    };
    Ok(SpectrumRun {
        discrete,
        discrete_counts,
        modal,
        modal_counts,
        eigenvectors,
    })
}

/// Fits the second-order operator on the mode grid the discretization resolves.
pub fn oo2_fit<T: Real>(config: &ExperimentConfig<T>, exclusion_over_k: T) -> Result<Oo2Fit<T>> {
    let setup = &config.setup;
    optimize_oo2(
        setup,
        &oo2_default_grid(setup, config.grid.dy),
        exclusion_over_k * setup.k,
    )
}

pub fn oo2_fit_csv<T: Real>(fit: &Oo2Fit<T>) -> String {
    format!(
        "a_re,a_im,b_re,b_im,max_rho_open,retained\n{},{},{},{},{},{}\n",
        fit.a.re, fit.a.im, fit.b.re, fit.b.im, fit.max_rho, fit.retained
    )
}
