use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use schwarz_core::experiments::{self, SweepRange, DEFAULT_MODAL_MODES};
use schwarz_core::fd2d::{ConfigFile, ExperimentConfig, OperatorKind, Scenario, OO2_EXCLUSION};
use schwarz_core::krylov::{gmres_csv, spectrum_csv};
use schwarz_core::modal::spectrum_json;
use schwarz_core::Error;

const EXIT_SOLVER: u8 = 2;
const EXIT_CONFIG: u8 = 3;

#[derive(Parser)]
#[command(
    name = "schwarz",
    version,
    about = "Two-subdomain optimized Schwarz experiments for the Helmholtz equation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Open- and closed-domain optimal symbols over a pole-refined grid.
    SweepLambda {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        range: RangeArgs,
        /// Wavenumbers to sweep (comma separated); defaults to the configured one.
        #[arg(long, value_delimiter = ',')]
        k: Vec<f64>,
    },
    /// Convergence radii of every operator (or the configured one with --single).
    SweepRho {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        range: RangeArgs,
        /// Only the operator from the configuration.
        #[arg(long)]
        single: bool,
    },
    /// Compare formula radii with the modal iteration.
    ModalVerify {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 25)]
        n_modes: usize,
        #[arg(long, default_value_t = 8)]
        n_pairs: usize,
    },
    /// DDM solve; writes the field.
    Solve {
        #[command(flatten)]
        common: Common,
    },
    /// GMRES residual history; both scenarios unless --scenario is given.
    GmresProfile {
        #[command(flatten)]
        common: Common,
    },
    /// Spectrum of I − A, discrete and modal.
    Spectrum {
        #[command(flatten)]
        common: Common,
        /// Modes of the modal operator.
        #[arg(long, default_value_t = DEFAULT_MODAL_MODES)]
        n_modes: usize,
        /// Also write the interface eigenvectors of the discrete operator.
        #[arg(long)]
        export_eigenvectors: bool,
    },
    /// Fit the second-order operator on the resolved mode grid.
    Oo2Fit {
        #[command(flatten)]
        common: Common,
        /// Half-width of the excluded band around s = k, in units of k.
        #[arg(long, default_value_t = OO2_EXCLUSION)]
        exclusion: f64,
    },
}

#[derive(Args)]
struct Common {
    /// JSON configuration file; flags override its keys.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Artifact directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[command(flatten)]
    keys: KeyFlags,
}

#[derive(Args)]
struct KeyFlags {
    #[arg(long)]
    scenario: Option<String>,
    #[arg(long)]
    operator: Option<String>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    n_pade: Option<usize>,
    #[arg(long)]
    xi: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    a_re: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    a_im: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    b_re: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    b_im: Option<f64>,
    #[arg(long)]
    ell_over_lambda: Option<f64>,
    #[arg(long)]
    points_per_wavelength: Option<f64>,
    #[arg(long)]
    n_source_modes: Option<usize>,
    #[arg(long)]
    gmres_tol: Option<f64>,
    #[arg(long)]
    gmres_maxit: Option<usize>,
    #[arg(long)]
    gamma_inf_literal: bool,
}

#[derive(Args)]
struct RangeArgs {
    /// Upper end of the sweep in units of k.
    #[arg(long, default_value_t = 3.0)]
    s_max: f64,
    #[arg(long, default_value_t = 601)]
    n_uniform: usize,
    /// Points on each side of s = k in the geometric cluster.
    #[arg(long, default_value_t = 40)]
    n_refine: usize,
}

impl From<&RangeArgs> for SweepRange {
    fn from(r: &RangeArgs) -> Self {
        SweepRange {
            s_max_over_k: r.s_max,
            n_uniform: r.n_uniform,
            n_refine: r.n_refine,
        }
    }
}

#[derive(Debug)]
enum Failure {
    Config(String),
    Solver(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_config() {
            Failure::Config(e.to_string())
        } else {
            Failure::Solver(e.to_string())
        }
    }
}

impl Common {
    fn file(&self) -> Result<ConfigFile, Failure> {
        let base = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))?;
                ConfigFile::from_json(&text)?
            }
            None => ConfigFile::default(),
        };
        let k = &self.keys;
        let overrides = ConfigFile {
            scenario: k
                .scenario
                .as_deref()
                .map(str::parse::<Scenario>)
                .transpose()?,
            operator: k
                .operator
                .as_deref()
                .map(str::parse::<OperatorKind>)
                .transpose()?,
            epsilon: k.epsilon,
            n_pade: k.n_pade,
            xi: k.xi,
            a_re: k.a_re,
            a_im: k.a_im,
            b_re: k.b_re,
            b_im: k.b_im,
            ell_over_lambda: k.ell_over_lambda,
            points_per_wavelength: k.points_per_wavelength,
            n_source_modes: k.n_source_modes,
            gmres_tol: k.gmres_tol,
            gmres_maxit: k.gmres_maxit,
            gamma_inf_literal: k.gamma_inf_literal.then_some(true),
        };
        Ok(base.merged(overrides))
    }

    fn resolve(&self) -> Result<(ConfigFile, ExperimentConfig<f64>), Failure> {
        let file = self.file()?;
        let config = file.resolve()?;
        Ok((file, config))
    }

    fn write(&self, name: &str, contents: &str) -> Result<PathBuf, Failure> {
        fs::create_dir_all(&self.out)
            .map_err(|e| Failure::Config(format!("cannot create {}: {e}", self.out.display())))?;
        let path = self.out.join(name);
        fs::write(&path, contents)
            .map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display())))?;
        Ok(path)
    }
}

fn tag(config: &ExperimentConfig<f64>) -> String {
    format!(
        "{}_{}",
        config.scenario.as_str(),
        config.spec.label().to_lowercase()
    )
}

fn report(path: &Path) {
    println!("wrote {}", path.display());
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::SweepLambda { common, range, k } => {
            let (_, config) = common.resolve()?;
            let ks = if k.is_empty() {
                vec![config.setup.k]
            } else {
                k
            };
            let csv = experiments::sweep_lambda(&config.setup, &ks, &(&range).into())?;
            report(&common.write("sweep_lambda.csv", &csv)?);
        }
        Command::SweepRho {
            common,
            range,
            single,
        } => {
            let (file, config) = common.resolve()?;
            let specs = if single {
                vec![config.spec]
            } else {
                [
                    OperatorKind::Oo0,
                    OperatorKind::Emda,
                    OperatorKind::Oo2,
                    OperatorKind::Pade,
                ]
                .into_iter()
                .map(|op| {
                    Ok(ConfigFile {
                        operator: Some(op),
                        ..file.clone()
                    }
                    .resolve::<f64>()?
                    .spec)
                })
                .collect::<Result<Vec<_>, Failure>>()?
            };
            let csv = experiments::sweep_rho(&specs, &config.setup, &(&range).into());
            report(&common.write("sweep_rho.csv", &csv)?);
        }
        Command::ModalVerify {
            common,
            n_modes,
            n_pairs,
        } => {
            let (_, config) = common.resolve()?;
            let rows = experiments::modal_verify(&config.spec, &config.setup, n_modes, n_pairs)?;
            let name = format!("modal_verify_{}.csv", config.spec.label().to_lowercase());
            report(&common.write(&name, &experiments::modal_verify_csv(&rows))?);
            let worst = rows
                .iter()
                .map(|r| (r.formula - r.empirical).abs())
                .fold(0.0, f64::max);
            println!(
                "{} modes checked, max |formula − empirical| = {worst:e}",
                rows.len()
            );
        }
        Command::Solve { common } => {
            let (_, config) = common.resolve()?;
            let sol = experiments::solve(&config)?;
            report(&common.write(&format!("field_{}.csv", tag(&config)), &sol.field.to_csv())?);
            println!(
                "gmres: {} iterations, residual {:e}, converged {}; interface mismatch {:e}",
                sol.gmres.iterations,
                sol.gmres.reported_residual(),
                sol.gmres.converged,
                sol.interface_mismatch
            );
        }
        Command::GmresProfile { common } => {
            let (file, config) = common.resolve()?;
            let runs = match file.scenario {
                Some(_) => vec![(config.scenario, experiments::run_gmres_profile(&config)?)],
                None => experiments::run_gmres_profiles(&config)?,
            };
            for (scenario, trace) in runs {
                let cfg = ExperimentConfig {
                    scenario,
                    ..config.clone()
                };
                report(&common.write(&format!("gmres_{}.csv", tag(&cfg)), &gmres_csv(&trace))?);
                println!(
                    "{}: {} iterations, converged {}",
                    scenario.as_str(),
                    trace.iterations,
                    trace.converged
                );
            }
        }
        Command::Spectrum {
            common,
            n_modes,
            export_eigenvectors,
        } => {
            let (_, config) = common.resolve()?;
            let run = experiments::run_spectrum(&config, n_modes, export_eigenvectors)?;
            let t = tag(&config);
            report(&common.write(&format!("spectrum_{t}.csv"), &spectrum_csv(&run.discrete))?);
            report(&common.write(
                &format!("spectrum_modal_{t}.csv"),
                &spectrum_csv(&run.modal),
            )?);
            report(&common.write(
                &format!("spectrum_modal_{t}.json"),
                &spectrum_json(&run.modal, &config.setup),
            )?);
            let summary = run.summary_json(&config);
            report(&common.write(&format!("spectrum_summary_{t}.json"), &summary)?);
            if export_eigenvectors {
                report(&common.write(
                    &format!("eigenvectors_{t}.csv"),
                    &run.eigenvectors_csv(&config),
                )?);
            }
            println!("{summary}");
        }
        Command::Oo2Fit { common, exclusion } => {
            let (_, config) = common.resolve()?;
            let fit = experiments::oo2_fit(&config, exclusion)?;
            report(&common.write("oo2_fit.csv", &experiments::oo2_fit_csv(&fit))?);
            println!(
                "a = {}, b = {}, max |rho_open| = {}",
                fit.a, fit.b, fit.max_rho
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_CONFIG)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("config error: {msg}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Solver(msg)) => {
            eprintln!("solver error: {msg}");
            ExitCode::from(EXIT_SOLVER)
        }
    }
}
