use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use actionangle_cli::commands;
use actionangle_cli::{CliError, RunOutcome};

#[derive(Parser)]
#[command(
    name = "actionangle",
    about = "Integrable-system toolkit: bracket checks, two-body charts, torus quantization, holonomy transport",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a Poisson bracket {f,g} at a phase point.
    Bracket {
        /// First observable (expression over q1..qn, p1..pn).
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        /// Second observable.
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        /// Degrees of freedom of the chart.
        #[arg(long = "n-dof", default_value_t = 2)]
        n_dof: usize,
        /// Comma-separated coordinates q1..qn,p1..pn.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Bracket scheme: analytic or fd.
        #[arg(long, default_value = "analytic")]
        scheme: String,
        /// Finite-difference step for the fd scheme.
        #[arg(long, default_value_t = 1e-6)]
        step: f64,
        /// Output path (stdout when omitted).
        #[arg(long)]
        out: Option<String>,
    },
    /// Verify the bracket algebra and identities at sampled points.
    KeplerVerify {
        #[arg(long, default_value_t = 100)]
        points: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Residual threshold.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long)]
        out: Option<String>,
    },
    /// Integrate a bound orbit and emit the trajectory CSV.
    KeplerOrbit {
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, default_value_t = 0.5)]
        e: f64,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        /// Number of orbital periods to integrate.
        #[arg(long, default_value_t = 1.0)]
        periods: f64,
        #[arg(long)]
        out: Option<String>,
    },
    /// Orbit scan with the action-angle chart columns appended.
    KeplerChart {
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, default_value_t = 0.5)]
        e: f64,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        #[arg(long)]
        out: Option<String>,
    },
    /// Spectrum of a polynomial Hamiltonian of the actions.
    QuantizeSpectrum {
        /// Polynomial in I1..Im, e.g. "I1^2".
        #[arg(long = "H", allow_hyphen_values = true)]
        hamiltonian: String,
        /// Comma-separated offsets; the count sets the torus dimension.
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        lambda: String,
        /// Mode ranges lo:hi per dimension (one range is broadcast).
        #[arg(long = "box", default_value = "-2:2", allow_hyphen_values = true)]
        mode_box: String,
        #[arg(long)]
        out: Option<String>,
    },
    /// Dirac-condition residuals on random affine pairs.
    QuantizeDirac {
        #[arg(long, default_value_t = 50)]
        pairs: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Max torus dimension.
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 5)]
        bandwidth: i64,
        #[arg(long, default_value_t = 1e-13)]
        tol: f64,
        #[arg(long)]
        out: Option<String>,
    },
    /// Classical holonomy transport from a JSON config.
    HolonomyClassical {
        #[arg(long)]
        config: String,
        #[arg(long)]
        out: Option<String>,
    },
    /// Quantum holonomy transport from a JSON config.
    HolonomyQuantum {
        #[arg(long)]
        config: String,
        #[arg(long)]
        out: Option<String>,
    },
    /// Run the full acceptance suite and emit one line per criterion.
    ReportAll {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        out: Option<String>,
    },
}

fn main() -> ExitCode {
    actionangle_cli::init_thread_pool();
    let cli = Cli::parse();
    let (outcome, out_path) = match run(cli.command) {
        Ok(pair) => pair,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    if !outcome.console.is_empty() {
        eprint!("{}", outcome.console);
    }
    match emit(&outcome.artifact, out_path.as_deref()) {
        Ok(()) => {
            if outcome.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(command: Command) -> Result<(RunOutcome, Option<String>), CliError> {
    match command {
        Command::Bracket {
            f,
            g,
            n_dof,
            point,
            scheme,
            step,
            out,
        } => Ok((commands::bracket(&f, &g, n_dof, &point, &scheme, step)?, out)),
        Command::KeplerVerify {
            points,
            seed,
            tol,
            out,
        } => Ok((commands::kepler_verify(points, seed, tol)?, out)),
        Command::KeplerOrbit {
            a,
            e,
            step,
            periods,
            out,
        } => Ok((commands::kepler_orbit(a, e, step, periods)?, out)),
        Command::KeplerChart { a, e, step, out } => {
            Ok((commands::kepler_chart(a, e, step)?, out))
        }
        Command::QuantizeSpectrum {
            hamiltonian,
            lambda,
            mode_box,
            out,
        } => Ok((
            commands::quantize_spectrum(&hamiltonian, &lambda, &mode_box)?,
            out,
        )),
        Command::QuantizeDirac {
            pairs,
            seed,
            m,
            bandwidth,
            tol,
            out,
        } => Ok((commands::quantize_dirac(pairs, seed, m, bandwidth, tol)?, out)),
        Command::HolonomyClassical { config, out } => {
            let text = fs::read_to_string(&config)
                .map_err(|e| CliError::Io(format!("reading {config}: {e}")))?;
            Ok((commands::holonomy_classical(&text)?, out))
        }
        Command::HolonomyQuantum { config, out } => {
            let text = fs::read_to_string(&config)
                .map_err(|e| CliError::Io(format!("reading {config}: {e}")))?;
            Ok((commands::holonomy_quantum(&text)?, out))
        }
        Command::ReportAll { seed, out } => Ok((commands::report_all(seed)?, out)),
    }
}

fn emit(artifact: &str, out: Option<&str>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, artifact)
            .map_err(|e| CliError::Io(format!("writing {path}: {e}"))),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(artifact.as_bytes())
                .and_then(|_| {
                    if artifact.ends_with('\n') {
                        Ok(())
                    } else {
                        lock.write_all(b"\n")
                    }
                })
                .map_err(|e| CliError::Io(e.to_string()))
        }
    }
}
