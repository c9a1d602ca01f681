//! `azcoh`: coherence and divergence computations from the command line.
//!
//! Exit codes: 0 success, 1 verification violation, 2 bad input file,
//! 3 invalid parameters, 4 unproven regime without --allow-unproven,
//! 5 numeric failure.

mod report;
mod sweep;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use azcoherence::{
    classify_regime, coherence_with, f_az, gen_div, renyi_div, tsallis_div, AlphaZ, DensityMatrix,
    Error, EvalMethod, OptimizerConfig, StateFile,
};

pub(crate) const EXIT_VIOLATION: u8 = 1;
pub(crate) const EXIT_BAD_INPUT: u8 = 2;
pub(crate) const EXIT_BAD_PARAMS: u8 = 3;
pub(crate) const EXIT_UNPROVEN: u8 = 4;
pub(crate) const EXIT_NUMERIC: u8 = 5;

#[derive(Parser)]
#[command(
    name = "azcoh",
    about = "Coherence measures from the generalized alpha-z relative Renyi entropy",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Coherence of a state read from a JSON state file.
    Coherence {
        /// Input state file {"dim": d, "re": [[..]], "im": [[..]]}.
        input: PathBuf,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        z: f64,
        /// auto | closed | numeric | grid
        #[arg(long, default_value = "auto")]
        method: String,
        /// Compute even when (alpha, z) lies outside the proven regimes.
        #[arg(long)]
        allow_unproven: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Closed-form and numeric sweep over pure qubit states, written as CSV.
    SweepQubit {
        #[arg(long, default_value_t = 201)]
        points: usize,
        /// Output CSV path.
        #[arg(long)]
        output: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// A divergence between two states.
    Divergence {
        input_rho: PathBuf,
        input_sigma: PathBuf,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        z: f64,
        #[arg(long, value_enum, default_value_t = DivergenceKind::Generalized)]
        kind: DivergenceKind,
    },
    /// Randomized verification suites; exit 0 iff within tolerance.
    Verify {
        #[arg(value_enum)]
        suite: verify::Suite,
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        z: f64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub(crate) enum DivergenceKind {
    Renyi,
    Generalized,
    Tsallis,
    F,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Coherence {
            input,
            alpha,
            z,
            method,
            allow_unproven,
            seed,
        } => cmd_coherence(&input, alpha, z, &method, allow_unproven, seed),
        Command::SweepQubit {
            points,
            output,
            seed,
        } => sweep::cmd_sweep_qubit(points, &output, seed),
        Command::Divergence {
            input_rho,
            input_sigma,
            alpha,
            z,
            kind,
        } => cmd_divergence(&input_rho, &input_sigma, alpha, z, kind),
        Command::Verify {
            suite,
            alpha,
            z,
            trials,
            seed,
        } => verify::cmd_verify(suite, alpha, z, trials, seed),
    };
    match code {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => ExitCode::from(code),
    }
}

pub(crate) fn fail(code: u8, message: impl std::fmt::Display) -> u8 {
    eprintln!("error: {message}");
    code
}

pub(crate) fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::InvalidParams { .. }
        | Error::InvalidAlpha { .. }
        | Error::InvalidNormOrder { .. }
        | Error::DimensionTooLarge { .. }
        | Error::NotPure { .. } => EXIT_BAD_PARAMS,
        Error::NumericFailure => EXIT_NUMERIC,
        _ => EXIT_BAD_INPUT,
    }
}

pub(crate) fn load_state(path: &PathBuf) -> Result<DensityMatrix, u8> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| fail(EXIT_BAD_INPUT, format!("{}: {e}", path.display())))?;
    StateFile::from_json(&text)
        .and_then(|sf| sf.to_density())
        .map_err(|e| fail(EXIT_BAD_INPUT, format!("{}: {e}", path.display())))
}

pub(crate) fn params(alpha: f64, z: f64) -> Result<AlphaZ, u8> {
    AlphaZ::new(alpha, z).map_err(|e| fail(EXIT_BAD_PARAMS, e))
}

fn cmd_coherence(
    input: &PathBuf,
    alpha: f64,
    z: f64,
    method: &str,
    allow_unproven: bool,
    seed: u64,
) -> Result<(), u8> {
    let rho = load_state(input)?;
    let p = params(alpha, z)?;
    let method: EvalMethod = method
        .parse()
        .map_err(|e| fail(EXIT_BAD_PARAMS, e))?;
    let regime = classify_regime(&p);
    if !regime.is_proven() && !allow_unproven {
        return Err(fail(
            EXIT_UNPROVEN,
            format!(
                "alpha={alpha}, z={z} lies outside the proven regimes; pass --allow-unproven to compute anyway"
            ),
        ));
    }
    let cfg = OptimizerConfig::with_seed(seed);
    let result =
        coherence_with(&rho, &p, method, &cfg).map_err(|e| fail(exit_code_for(&e), e))?;
    println!("{}", report::coherence_json(&result));
    if result.converged {
        Ok(())
    } else {
        Err(fail(EXIT_NUMERIC, "optimizer did not converge"))
    }
}

fn cmd_divergence(
    input_rho: &PathBuf,
    input_sigma: &PathBuf,
    alpha: f64,
    z: f64,
    kind: DivergenceKind,
) -> Result<(), u8> {
    let rho = load_state(input_rho)?;
    let sigma = load_state(input_sigma)?;
    if rho.dim() != sigma.dim() {
        return Err(fail(
            EXIT_BAD_INPUT,
            format!("dimension mismatch: {} vs {}", rho.dim(), sigma.dim()),
        ));
    }
    let p = params(alpha, z)?;
    let f = f_az(&rho, &sigma, &p);
    let value = match kind {
        DivergenceKind::Renyi => renyi_div(&rho, &sigma, &p),
        DivergenceKind::Generalized => gen_div(&rho, &sigma, &p),
        DivergenceKind::Tsallis => {
            if !p.is_z_one() {
                return Err(fail(EXIT_BAD_PARAMS, "the Tsallis divergence requires z = 1"));
            }
            tsallis_div(&rho, &sigma, alpha).map_err(|e| fail(EXIT_BAD_PARAMS, e))?
        }
        DivergenceKind::F => f,
    };
    println!("{}", report::divergence_json(kind, &p, value, f));
    Ok(())
}
