//! Fourier symbols of the transmission operators and the convergence radii
//! they induce on the two-subdomain cavity.
//!
//! Conventions: the sine variable is `s ≥ 0`, the wavenumber `k > 0`, and
//! `α(s) = −j√(k²−s²)` below cut-off, `√(s²−k²)` above it. The open-domain
//! square-root symbol coincides with `α`; the closed-cavity optimum is the
//! real function `α·coth(αℓ/2)`.

mod oo2;
mod pade;
mod sweep;
mod table;

pub use oo2::{max_rho_open, oo2_default_grid, optimize_oo2, Oo2Fit};
pub use pade::PadeCoefficients;
pub use sweep::{lambda_sweep_csv, rho_sweep_csv, sweep_rows, SweepRow, SWEEP_HEADER};
pub use table::{tabulate_symbol_properties, Codomain, SymbolProperties};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{cplx, jay, re, Cplx, Real};
use crate::setup::{PhysicalSetup, Regime};

/// Half-width, in the cotangent argument, of the window treated as a pole.
pub const POLE_WINDOW: f64 = 1e-10;

/// Below this `|λ + λ_ref|` the radius is reported as degenerate.
pub const DEGENERACY_FLOOR: f64 = 1e-14;

/// `α(s)`: `−j√(k²−s²)` for `s² ≤ k²`, `√(s²−k²)` otherwise.
pub fn alpha<T: Real>(s: T, k: T) -> Cplx<T> {
    // (k−s)(k+s) keeps relative accuracy close to the cut-off.
    let d = (k - s) * (k + s);
    if d >= T::zero() {
        cplx(T::zero(), -d.sqrt())
    } else {
        cplx((-d).sqrt(), T::zero())
    }
}

/// `x·cot(x)`, with a series near zero.
fn x_cot_x<T: Real>(x: T) -> T {
    if x.abs() < T::lit(1e-3) {
        let x2 = x * x;
        T::one()
            - x2 / T::lit(3.0)
            - x2 * x2 / T::lit(45.0)
            - T::lit(2.0) * x2 * x2 * x2 / T::lit(945.0)
    } else {
        x / x.tan()
    }
}

/// `x·coth(x)`, with a series near zero.
fn x_coth_x<T: Real>(x: T) -> T {
    if x.abs() < T::lit(1e-3) {
        let x2 = x * x;
        T::one() + x2 / T::lit(3.0) - x2 * x2 / T::lit(45.0)
            + T::lit(2.0) * x2 * x2 * x2 / T::lit(945.0)
    } else {
        x / x.tanh()
    }
}

/// Whether `x` lies within `window` of a nonzero multiple of π.
fn near_cot_pole<T: Real>(x: T, window: T) -> bool {
    let n = (x / T::PI()).round();
    n >= T::one() && (x - n * T::PI()).abs() < window
}

/// Optimal (Dirichlet-to-Neumann) symbol of a half cavity of length ℓ/2:
/// `β·cot(βℓ/2)` below cut-off, `2/ℓ` at `s = k`, `a·coth(aℓ/2)` above.
pub fn lambda_opt_close<T: Real>(s: T, setup: &PhysicalSetup<T>) -> Result<T> {
    lambda_opt_close_with(s, setup, T::lit(POLE_WINDOW))
}

/// [`lambda_opt_close`] with an explicit pole window.
pub fn lambda_opt_close_with<T: Real>(s: T, setup: &PhysicalSetup<T>, pole_window: T) -> Result<T> {
    let half = setup.ell / T::lit(2.0);
    let d = (setup.k - s) * (setup.k + s);
    if d > T::zero() {
        let beta = d.sqrt();
        let x = beta * half;
        if near_cot_pole(x, pole_window) {
            return Err(Error::Pole {
                s: s.to_f64_lossy(),
            });
        }
        Ok(x_cot_x(x) / half)
    } else if d < T::zero() {
        let a = (-d).sqrt();
        Ok(x_coth_x(a * half) / half)
    } else {
        Ok(T::one() / half)
    }
}

/// Open-domain square-root symbol `−jk√(1 − s²/k²)`.
///
/// Evaluated through [`alpha`] so both coincide bit-for-bit.
pub fn lambda_opt_open<T: Real>(s: T, k: T) -> Cplx<T> {
    alpha(s, k)
}

/// A transmission symbol and its free parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SymbolSpec<T> {
    /// `λ = −jk`
    Oo0,
    /// `λ = −jk_ε`, `k_ε = (1+jε)k`
    Emda { epsilon: T },
    /// `λ = a + b s²`
    Oo2 { a: Cplx<T>, b: Cplx<T> },
    /// Padé-localized square root with `n_terms` terms.
    Pade { n_terms: usize, xi: T, epsilon: T },
    /// Closed-cavity optimum [`lambda_opt_close`].
    OptClose,
    /// Open-domain optimum [`lambda_opt_open`].
    OptOpen,
}

impl<T: Real> SymbolSpec<T> {
    /// `N_p = 4`, `ξ = π/4`, no damping.
    pub fn pade_default() -> Self {
        SymbolSpec::Pade {
            n_terms: 4,
            xi: T::FRAC_PI_4(),
            epsilon: T::zero(),
        }
    }

    /// 25 % damping.
    pub fn emda_default() -> Self {
        SymbolSpec::Emda {
            epsilon: T::lit(0.25),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            SymbolSpec::Emda { epsilon } if !(epsilon >= T::zero()) => Err(Error::InvalidInput(
                format!("EMDA damping must be >= 0 (got {epsilon})"),
            )),
            SymbolSpec::Pade {
                n_terms,
                xi,
                epsilon,
            } => {
                if n_terms == 0 {
                    Err(Error::InvalidInput("PADE needs at least one term".into()))
                } else if !(xi > T::zero() && xi <= T::FRAC_PI_2()) {
                    Err(Error::InvalidInput(format!(
                        "PADE rotation must lie in (0, π/2] (got {xi})"
                    )))
                } else if !epsilon.is_finite() {
                    Err(Error::InvalidInput("PADE damping must be finite".into()))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    /// Short label used in CSV files and reports.
    pub fn label(&self) -> &'static str {
        match self {
            SymbolSpec::Oo0 => "OO0",
            SymbolSpec::Emda { .. } => "EMDA",
            SymbolSpec::Oo2 { .. } => "OO2",
            SymbolSpec::Pade { .. } => "PADE",
            SymbolSpec::OptClose => "OPT-CLOSE",
            SymbolSpec::OptOpen => "OPT-OPEN",
        }
    }

    /// Whether the operator is local (realizable by a stencil on the interface).
    pub fn is_local(&self) -> bool {
        !matches!(self, SymbolSpec::OptClose | SymbolSpec::OptOpen)
    }
}

/// Complexified wavenumber `(1 + jε)k`.
pub fn damped_wavenumber<T: Real>(k: T, epsilon: T) -> Cplx<T> {
    cplx(k, epsilon * k)
}

/// Evaluates the Padé symbol `−jk·[C₀ + Σ A_p x/(1 + B_p x)]` at `x = −s²/k_ε²`,
/// where `−s²` is the symbol of the interface Laplacian.
pub fn pade_symbol<T: Real>(
    coeffs: &PadeCoefficients<T>,
    epsilon: T,
    s: T,
    k: T,
) -> Result<Cplx<T>> {
    let ke = damped_wavenumber(k, epsilon);
    let x = -re(s * s) / (ke * ke);
    let mut sum = coeffs.c0;
    for (p, (&ap, &bp)) in coeffs.big_a.iter().zip(&coeffs.big_b).enumerate() {
        let den = bp * x + T::one();
        if den.norm() < T::lit(DEGENERACY_FLOOR) {
            return Err(Error::DivergentTerm {
                term: p + 1,
                s: s.to_f64_lossy(),
            });
        }
        sum += ap * x / den;
    }
    Ok(-jay::<T>() * k * sum)
}

/// Evaluates `λ(s)` for the given symbol.
pub fn lambda_symbol<T: Real>(
    spec: &SymbolSpec<T>,
    s: T,
    setup: &PhysicalSetup<T>,
) -> Result<Cplx<T>> {
    let k = setup.k;
    match *spec {
        SymbolSpec::Oo0 => Ok(cplx(T::zero(), -k)),
        SymbolSpec::Emda { epsilon } => Ok(-jay::<T>() * damped_wavenumber(k, epsilon)),
        SymbolSpec::Oo2 { a, b } => Ok(a + b * (s * s)),
        SymbolSpec::Pade {
            n_terms,
            xi,
            epsilon,
        } => pade_symbol(&PadeCoefficients::new(n_terms, xi), epsilon, s, k),
        SymbolSpec::OptClose => lambda_opt_close(s, setup).map(re),
        SymbolSpec::OptOpen => Ok(lambda_opt_open(s, k)),
    }
}

fn radius<T: Real>(lambda: Cplx<T>, reference: Cplx<T>, s: T) -> Result<Cplx<T>> {
    let den = lambda + reference;
    if den.norm() < T::lit(DEGENERACY_FLOOR) {
        return Err(Error::Degenerate {
            s: s.to_f64_lossy(),
            denominator: den.norm().to_f64_lossy(),
        });
    }
    Ok((lambda - reference) / den)
}

/// Cavity convergence radius `(λ − λ_close)/(λ + λ_close)`.
///
/// At a cotangent pole of `λ_close` the limit value `−1` is returned (0 for
/// the closed-cavity optimum itself, which annihilates every mode).
pub fn rho_close<T: Real>(spec: &SymbolSpec<T>, s: T, setup: &PhysicalSetup<T>) -> Result<Cplx<T>> {
    if let SymbolSpec::OptClose = spec {
        return Ok(Cplx::new(T::zero(), T::zero()));
    }
    match lambda_opt_close(s, setup) {
        Ok(lc) => radius(lambda_symbol(spec, s, setup)?, re(lc), s),
        Err(Error::Pole { .. }) => Ok(cplx(-T::one(), T::zero())),
        Err(e) => Err(e),
    }
}

/// Open-domain (no overlap) radius `(λ − λ_open)/(λ + λ_open)`.
pub fn rho_open<T: Real>(spec: &SymbolSpec<T>, s: T, setup: &PhysicalSetup<T>) -> Result<Cplx<T>> {
    if let SymbolSpec::OptOpen = spec {
        return Ok(Cplx::new(T::zero(), T::zero()));
    }
    radius(
        lambda_symbol(spec, s, setup)?,
        lambda_opt_open(s, setup.k),
        s,
    )
}

/// `λ_close(s) − λ_open(s)`; above cut-off uses `2a/(e^{ℓa} − 1)`, `a = √(s²−k²)`.
pub fn symbol_gap<T: Real>(s: T, setup: &PhysicalSetup<T>) -> Result<Cplx<T>> {
    match Regime::classify(s, setup.k) {
        Regime::Evanescent => {
            let a = ((s - setup.k) * (s + setup.k)).sqrt();
            Ok(re(T::lit(2.0) * a / (setup.ell * a).exp_m1()))
        }
        Regime::CutOn => Ok(re(T::lit(2.0) / setup.ell)),
        Regime::Propagating => {
            let lc = lambda_opt_close(s, setup)?;
            Ok(re(lc) - lambda_opt_open(s, setup.k))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, PI};

    fn setup() -> PhysicalSetup<f64> {
        PhysicalSetup::reference()
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha(0.0, 2.0), cplx(0.0, -2.0));
        assert_eq!(alpha(1.0, 1.0).norm(), 0.0);
        assert_eq!(alpha(5.0, 3.0), cplx(4.0, 0.0));
    }

    #[test]
    fn opt_close_at_cut_off_is_two_over_ell() {
        let s = PhysicalSetup::new(1.3, 2.0, 1.0).unwrap();
        assert_eq!(lambda_opt_close(1.3, &s).unwrap(), 1.0);
    }

    #[test]
    fn opt_close_detects_pole() {
        let s = setup();
        // β·ℓ/2 = π  ⇒  β = 2π/ℓ
        let beta = 2.0 * PI / s.ell;
        let sp = (s.k * s.k - beta * beta).sqrt();
        assert!(matches!(lambda_opt_close(sp, &s), Err(Error::Pole { .. })));
    }

    #[test]
    fn opt_close_is_large_coth_limit() {
        let s = PhysicalSetup::new(1.0, 2.0, 1.0).unwrap();
        // a·ℓ/2 = 10 with ℓ = 2  ⇒  a = 10
        let sv = (1.0f64 + 100.0).sqrt();
        let v = lambda_opt_close(sv, &s).unwrap();
        assert!((v - 10.0).abs() < 1e-8 * 10.0);
    }

    #[test]
    fn open_symbol_examples() {
        assert_eq!(lambda_opt_open(0.0, 3.0), cplx(0.0, -3.0));
        assert_eq!(lambda_opt_open(2.0, 2.0).norm(), 0.0);
        assert_eq!(lambda_opt_open(7.0, 3.0), alpha(7.0, 3.0));
    }

    #[test]
    fn symbol_examples() {
        let s = PhysicalSetup::new(2.0, 3.0, 1.0).unwrap();
        assert_eq!(
            lambda_symbol(&SymbolSpec::Oo0, 0.7, &s).unwrap(),
            cplx(0.0, -2.0)
        );
        let s1 = PhysicalSetup::new(1.0, 3.0, 1.0).unwrap();
        let emda = lambda_symbol(&SymbolSpec::Emda { epsilon: 0.25 }, 0.4, &s1).unwrap();
        assert!((emda - cplx(0.25, -1.0)).norm() < 1e-15);
        let pade = SymbolSpec::Pade {
            n_terms: 4,
            xi: FRAC_PI_4,
            epsilon: 0.0,
        };
        let at0 = lambda_symbol(&pade, 0.0, &s).unwrap();
        let c0 = PadeCoefficients::new(4, FRAC_PI_4).c0;
        assert!((at0 - cplx(0.0, -2.0) * c0).norm() < 1e-14);
    }

    #[test]
    fn invalid_specs_are_rejected() {
        assert!(SymbolSpec::<f64>::Emda { epsilon: -0.1 }
            .validate()
            .is_err());
        assert!(SymbolSpec::<f64>::Pade {
            n_terms: 0,
            xi: 0.5,
            epsilon: 0.0
        }
        .validate()
        .is_err());
        assert!(SymbolSpec::<f64>::Pade {
            n_terms: 2,
            xi: 0.0,
            epsilon: 0.0
        }
        .validate()
        .is_err());
        assert!(SymbolSpec::<f64>::Pade {
            n_terms: 2,
            xi: 2.0,
            epsilon: 0.0
        }
        .validate()
        .is_err());
        assert!(SymbolSpec::<f64>::pade_default().validate().is_ok());
    }

    #[test]
    fn rho_close_examples() {
        let s = setup();
        for m in 1..30 {
            let sv = s.s_of(m);
            assert_eq!(
                rho_close(&SymbolSpec::OptClose, sv, &s).unwrap().norm(),
                0.0
            );
            assert!((rho_close(&SymbolSpec::Oo0, sv, &s).unwrap().norm() - 1.0).abs() < 1e-12);
        }
        // ℓ·a = 4
        let a = 4.0 / s.ell;
        let sv = (s.k * s.k + a * a).sqrt();
        let r = rho_close(&SymbolSpec::OptOpen, sv, &s).unwrap();
        assert!((r.norm() - (-4.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn rho_close_at_pole_is_minus_one() {
        let s = setup();
        let beta = 2.0 * PI / s.ell;
        let sp = (s.k * s.k - beta * beta).sqrt();
        assert_eq!(
            rho_close(&SymbolSpec::OptOpen, sp, &s).unwrap(),
            cplx(-1.0, 0.0)
        );
        assert_eq!(
            rho_close(&SymbolSpec::Oo0, sp, &s).unwrap(),
            cplx(-1.0, 0.0)
        );
    }

    #[test]
    fn rho_open_examples() {
        let s = setup();
        assert!(rho_open(&SymbolSpec::Oo0, 0.0, &s).unwrap().norm() < 1e-15);
        assert!((rho_open(&SymbolSpec::Oo0, 1.5 * s.k, &s).unwrap().norm() - 1.0).abs() < 1e-14);
        assert!(rho_open(&SymbolSpec::Oo0, 0.5 * s.k, &s).unwrap().norm() < 1.0);
        assert_eq!(rho_open(&SymbolSpec::OptOpen, 0.3, &s).unwrap().norm(), 0.0);
    }

    #[test]
    fn degenerate_radius_is_reported() {
        let s = setup();
        // λ = −λ_open at s > k: OO2 with a = −√(s²−k²), b = 0
        let sv = 1.5 * s.k;
        let spec = SymbolSpec::Oo2 {
            a: -alpha(sv, s.k),
            b: cplx(0.0, 0.0),
        };
        assert!(matches!(
            rho_open(&spec, sv, &s),
            Err(Error::Degenerate { .. })
        ));
    }

    #[test]
    fn gap_examples() {
        let s = PhysicalSetup::new(2.0, 4.0, 1.0).unwrap();
        assert_eq!(symbol_gap(2.0, &s).unwrap(), cplx(0.5, 0.0));
        // ℓ·a = 20
        let a = 20.0 / s.ell;
        let sv = (4.0f64 + a * a).sqrt();
        assert!(symbol_gap(sv, &s).unwrap().norm() < 5e-8 * a);
    }
}
