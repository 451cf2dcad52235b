//! Experiment configuration and its JSON form.

use serde::{Deserialize, Serialize};

use super::grid::Grid2D;
use crate::error::{Error, Result};
use crate::scalar::{cplx, Real};
use crate::setup::PhysicalSetup;
use crate::symbols::{oo2_default_grid, optimize_oo2, SymbolSpec};

/// Outer condition on the far end of the right subdomain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    /// Reflecting (Dirichlet) wall: a closed cavity.
    Cavity,
    /// Zeroth-order absorbing condition `∂n p − jk p = 0`.
    Waveguide,
}

impl Scenario {
    pub fn as_str(&self) -> &'static str {
        match self {
            Scenario::Cavity => "cavity",
            Scenario::Waveguide => "waveguide",
        }
    }
}

impl std::str::FromStr for Scenario {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cavity" => Ok(Scenario::Cavity),
            "waveguide" => Ok(Scenario::Waveguide),
            other => Err(Error::Config(format!("unknown scenario '{other}'"))),
        }
    }
}

/// Transmission operator family named in a config file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OperatorKind {
    Oo0,
    Emda,
    Oo2,
    Pade,
    OptClose,
    OptOpen,
}

impl OperatorKind {
    pub const ALL: [OperatorKind; 6] = [
        OperatorKind::Oo0,
        OperatorKind::Emda,
        OperatorKind::Oo2,
        OperatorKind::Pade,
        OperatorKind::OptClose,
        OperatorKind::OptOpen,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            OperatorKind::Oo0 => "oo0",
            OperatorKind::Emda => "emda",
            OperatorKind::Oo2 => "oo2",
            OperatorKind::Pade => "pade",
            OperatorKind::OptClose => "opt-close",
            OperatorKind::OptOpen => "opt-open",
        }
    }
}

impl std::str::FromStr for OperatorKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase().replace('_', "-");
        OperatorKind::ALL
            .into_iter()
            .find(|k| k.as_str() == lower)
            .ok_or_else(|| Error::Config(format!("unknown operator '{s}'")))
    }
}

/// Raw config as read from JSON; every key is optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub scenario: Option<Scenario>,
    pub operator: Option<OperatorKind>,
    pub epsilon: Option<f64>,
    pub n_pade: Option<usize>,
    pub xi: Option<f64>,
    pub a_re: Option<f64>,
    pub a_im: Option<f64>,
    pub b_re: Option<f64>,
    pub b_im: Option<f64>,
    pub ell_over_lambda: Option<f64>,
    pub points_per_wavelength: Option<f64>,
    pub n_source_modes: Option<usize>,
    pub gmres_tol: Option<f64>,
    pub gmres_maxit: Option<usize>,
    pub gamma_inf_literal: Option<bool>,
}

impl ConfigFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Keys set in `other` override those in `self`.
    pub fn merged(self, other: ConfigFile) -> Self {
        ConfigFile {
            scenario: other.scenario.or(self.scenario),
            operator: other.operator.or(self.operator),
            epsilon: other.epsilon.or(self.epsilon),
            n_pade: other.n_pade.or(self.n_pade),
            xi: other.xi.or(self.xi),
            a_re: other.a_re.or(self.a_re),
            a_im: other.a_im.or(self.a_im),
            b_re: other.b_re.or(self.b_re),
            b_im: other.b_im.or(self.b_im),
            ell_over_lambda: other.ell_over_lambda.or(self.ell_over_lambda),
            points_per_wavelength: other.points_per_wavelength.or(self.points_per_wavelength),
            n_source_modes: other.n_source_modes.or(self.n_source_modes),
            gmres_tol: other.gmres_tol.or(self.gmres_tol),
            gmres_maxit: other.gmres_maxit.or(self.gmres_maxit),
            gamma_inf_literal: other.gamma_inf_literal.or(self.gamma_inf_literal),
        }
    }

    /// Fills defaults and validates.
    pub fn resolve<T: Real>(&self) -> Result<ExperimentConfig<T>> {
        let bad = |msg: String| Error::Config(msg);
        let ell_over_lambda = self.ell_over_lambda.unwrap_or(DEFAULT_ELL_OVER_LAMBDA);
        if !(ell_over_lambda > 0.0) {
            return Err(bad(format!(
                "ell_over_lambda must be positive (got {ell_over_lambda})"
            )));
        }
        let setup =
            PhysicalSetup::cavity(T::lit(ell_over_lambda)).map_err(|e| bad(e.to_string()))?;
        let ppw = self
            .points_per_wavelength
            .unwrap_or(DEFAULT_POINTS_PER_WAVELENGTH);
        let grid = Grid2D::new(setup, T::lit(ppw)).map_err(|e| bad(e.to_string()))?;
        let n_source_modes = self.n_source_modes.unwrap_or(DEFAULT_SOURCE_MODES);
        if n_source_modes > grid.ny {
            return Err(bad(format!(
                "n_source_modes = {n_source_modes} exceeds the {} grid rows",
                grid.ny
            )));
        }
        let gmres_tol = self.gmres_tol.unwrap_or(DEFAULT_GMRES_TOL);
        if !(gmres_tol > 0.0) {
            return Err(bad(format!("gmres_tol must be positive (got {gmres_tol})")));
        }
        let kind = self.operator.unwrap_or(OperatorKind::Pade);
        let spec = match kind {
            OperatorKind::Oo0 => SymbolSpec::Oo0,
            OperatorKind::Emda => SymbolSpec::Emda {
                epsilon: T::lit(self.epsilon.unwrap_or(0.25)),
            },
            OperatorKind::Pade => SymbolSpec::Pade {
                n_terms: self.n_pade.unwrap_or(4),
                xi: T::lit(self.xi.unwrap_or(std::f64::consts::FRAC_PI_4)),
                epsilon: T::lit(self.epsilon.unwrap_or(0.0)),
            },
            OperatorKind::Oo2 => match (self.a_re, self.a_im, self.b_re, self.b_im) {
                (None, None, None, None) => optimize_oo2(
                    &setup,
                    &oo2_default_grid(&setup, grid.dy),
                    T::lit(OO2_EXCLUSION) * setup.k,
                )
                .map_err(|e| bad(e.to_string()))?
                .spec(),
                (a_re, a_im, b_re, b_im) => SymbolSpec::Oo2 {
                    a: cplx(T::lit(a_re.unwrap_or(0.0)), T::lit(a_im.unwrap_or(0.0))),
                    b: cplx(T::lit(b_re.unwrap_or(0.0)), T::lit(b_im.unwrap_or(0.0))),
                },
            },
            OperatorKind::OptClose => SymbolSpec::OptClose,
            OperatorKind::OptOpen => SymbolSpec::OptOpen,
        };
        spec.validate().map_err(|e| bad(e.to_string()))?;
        Ok(ExperimentConfig {
            spec,
            scenario: self.scenario.unwrap_or(Scenario::Cavity),
            setup,
            grid,
            n_source_modes,
            gmres_tol: T::lit(gmres_tol),
            gmres_maxit: self.gmres_maxit,
            gamma_inf_literal: self.gamma_inf_literal.unwrap_or(false),
        })
    }
}

pub const DEFAULT_ELL_OVER_LAMBDA: f64 = 9.5;
pub const DEFAULT_POINTS_PER_WAVELENGTH: f64 = 16.0;
pub const DEFAULT_SOURCE_MODES: usize = 9;
pub const DEFAULT_GMRES_TOL: f64 = 1e-6;
/// Half-width of the band around `s = k` left out of the OO2 fit, in units of `k`.
pub const OO2_EXCLUSION: f64 = 0.05;

/// Fully resolved experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig<T> {
    pub spec: SymbolSpec<T>,
    pub scenario: Scenario,
    pub setup: PhysicalSetup<T>,
    pub grid: Grid2D<T>,
    /// Number of sine modes in the source on the left wall.
    pub n_source_modes: usize,
    pub gmres_tol: T,
    /// Defaults to the interface dimension.
    pub gmres_maxit: Option<usize>,
    /// Use the inhomogeneous `∂n p − jk p = jk` on the absorbing end.
    pub gamma_inf_literal: bool,
}

impl<T: Real> ExperimentConfig<T> {
    /// Reference setup with the given operator and scenario.
    pub fn reference(spec: SymbolSpec<T>, scenario: Scenario) -> Self {
        let setup = PhysicalSetup::reference();
        let grid = Grid2D::new(setup, T::lit(DEFAULT_POINTS_PER_WAVELENGTH))
            .expect("reference grid is valid");
        Self {
            spec,
            scenario,
            setup,
            grid,
            n_source_modes: DEFAULT_SOURCE_MODES,
            gmres_tol: T::lit(DEFAULT_GMRES_TOL),
            gmres_maxit: None,
            gamma_inf_literal: false,
        }
    }

    pub fn with_grid(mut self, grid: Grid2D<T>) -> Self {
        self.setup = grid.setup;
        self.grid = grid;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.spec.validate()?;
        if self.n_source_modes > self.grid.ny {
            return Err(Error::Config(format!(
                "n_source_modes = {} exceeds the {} grid rows",
                self.n_source_modes, self.grid.ny
            )));
        }
        if !(self.gmres_tol > T::zero()) {
            return Err(Error::Config("gmres_tol must be positive".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_resolves_to_reference_defaults() {
        let cfg: ExperimentConfig<f64> = ConfigFile::from_json("{}").unwrap().resolve().unwrap();
        assert_eq!(cfg.scenario, Scenario::Cavity);
        assert_eq!(cfg.n_source_modes, 9);
        assert_eq!(cfg.grid.ny, 75);
        assert_eq!(cfg.spec, SymbolSpec::pade_default());
        assert_eq!(cfg.gmres_tol, 1e-6);
        assert!((cfg.setup.ell - 9.5).abs() < 1e-15 && (cfg.setup.h - 4.75).abs() < 1e-15);
    }

    #[test]
    fn explicit_keys_are_honoured() {
        let text = r#"{"scenario":"waveguide","operator":"oo2","a_re":1.0,"a_im":-2.0,"b_re":0.5,"b_im":0.25,
                       "points_per_wavelength":20,"n_source_modes":1,"gmres_tol":1e-8,"gmres_maxit":40}"#;
        let cfg: ExperimentConfig<f64> = ConfigFile::from_json(text).unwrap().resolve().unwrap();
        assert_eq!(cfg.scenario, Scenario::Waveguide);
        assert_eq!(
            cfg.spec,
            SymbolSpec::Oo2 {
                a: cplx(1.0, -2.0),
                b: cplx(0.5, 0.25)
            }
        );
        assert_eq!(cfg.gmres_maxit, Some(40));
        assert!(cfg.grid.points_per_wavelength() >= 19.0);
    }

    #[test]
    fn bad_values_are_config_errors() {
        for text in [
            r#"{"operator":"nope"}"#,
            r#"{"unknown_key":1}"#,
            r#"{"points_per_wavelength":4}"#,
            r#"{"n_source_modes":500}"#,
            r#"{"gmres_tol":0}"#,
            r#"{"operator":"pade","n_pade":0}"#,
        ] {
            let err = ConfigFile::from_json(text)
                .and_then(|c| c.resolve::<f64>())
                .unwrap_err();
            assert!(matches!(err, Error::Config(_)), "{text}: {err:?}");
        }
    }

    #[test]
    fn default_oo2_is_fitted() {
        let cfg: ExperimentConfig<f64> = ConfigFile::from_json(r#"{"operator":"oo2"}"#)
            .unwrap()
            .resolve()
            .unwrap();
        let SymbolSpec::Oo2 { a, b } = cfg.spec else {
            panic!("expected OO2")
        };
        assert!(a.norm() > 0.0 && b.norm() > 0.0);
    }

    #[test]
    fn operator_names_parse() {
        for k in OperatorKind::ALL {
            assert_eq!(k.as_str().parse::<OperatorKind>().unwrap(), k);
        }
        assert_eq!(
            "OPT_CLOSE".parse::<OperatorKind>().unwrap(),
            OperatorKind::OptClose
        );
    }
}
