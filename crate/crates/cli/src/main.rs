//! `ptqs`: spectra, transition probabilities and neutrino oscillation curves
//! for two-level PT-symmetric Hamiltonians.
//!
//! Exit codes: 0 success, 1 configuration or I/O error, 2 parameters outside
//! the unbroken phase, 3 oracle verification failure.

mod commands;
mod config;
mod output;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{CliError, TOLERANCE_ENV};
use config::{Command, ConfigError, RunConfig};

#[derive(Parser)]
#[command(
    name = "ptqs",
    version,
    about = "PT-symmetric two-level systems and neutrino oscillations"
)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Eigenvalues, mixing angle, phase class and the metric, C, G and H' matrices
    Spectrum(Flags),
    /// Flavour transition probabilities over a time grid
    Probabilities(Flags),
    /// P(mu->mu) and P(mu->tau) against baseline in km
    NeutrinoScan(Flags),
    /// Run the brute-force oracle suite on random unbroken parameters
    Verify(Flags),
}

#[derive(Args, Debug, Default)]
struct Flags {
    /// `key = value` config file; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    /// csv or json
    #[arg(long)]
    format: Option<String>,
    /// Write to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// start:stop:count (time for probabilities, km for neutrino-scan)
    #[arg(long)]
    grid: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    rho: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    sigma: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    varphi: Option<String>,
    /// Phase of the off-diagonal entries; must be a multiple of pi
    #[arg(long, allow_hyphen_values = true)]
    phi_offdiag: Option<String>,
    /// Delta m^2_32 in eV^2
    #[arg(long, allow_hyphen_values = true)]
    dm2: Option<String>,
    /// m_2^2 + m_3^2 in eV^2
    #[arg(long)]
    m2_bar: Option<String>,
    /// Neutrino energy in GeV
    #[arg(long, allow_hyphen_values = true)]
    energy: Option<String>,
    /// Comma-separated alpha' values; one curve each
    #[arg(long, allow_hyphen_values = true)]
    alpha_prime: Option<String>,
    /// Probability rule for `probabilities`
    #[arg(long)]
    scheme: Option<String>,
    /// Comparison tolerance for `verify` (overrides PTQS_TOLERANCE)
    #[arg(long)]
    tolerance: Option<String>,
    /// Random draws for `verify`
    #[arg(long)]
    draws: Option<String>,
    /// RNG seed for `verify`
    #[arg(long)]
    seed: Option<String>,
    /// Print the merged configuration as a config file and exit
    #[arg(long)]
    print_config: bool,
}

impl Flags {
    fn pairs(&self) -> Vec<(&'static str, String)> {
        let mut v = Vec::new();
        let mut put = |k: &'static str, x: &Option<String>| {
            if let Some(x) = x {
                v.push((k, x.clone()));
            }
        };
        put("format", &self.format);
        put("grid", &self.grid);
        put("rho", &self.rho);
        put("sigma", &self.sigma);
        put("varphi", &self.varphi);
        put("phi_offdiag", &self.phi_offdiag);
        put("dm2", &self.dm2);
        put("m2_bar", &self.m2_bar);
        put("energy", &self.energy);
        put("alpha_prime", &self.alpha_prime);
        put("scheme", &self.scheme);
        put("tolerance", &self.tolerance);
        put("draws", &self.draws);
        put("seed", &self.seed);
        if let Some(out) = &self.out {
            v.push(("out", out.display().to_string()));
        }
        v
    }
}

fn build_config(command: Command, flags: &Flags) -> Result<RunConfig, ConfigError> {
    let mut cfg = match &flags.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| ConfigError::Read {
                path: path.clone(),
                message: e.to_string(),
            })?;
            RunConfig::parse(&text, command)?
        }
        None => RunConfig::new(command),
    };
    cfg.command = command;
    for (key, value) in flags.pairs() {
        cfg.set(key, &value)?;
    }
    Ok(cfg)
}

fn write_output(cfg: &RunConfig, text: &str) -> Result<(), CliError> {
    match &cfg.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Io(format!("cannot write to stdout: {e}")))
        }
    }
}

fn run(verb: Verb) -> Result<(), CliError> {
    let (command, flags) = match verb {
        Verb::Spectrum(f) => (Command::Spectrum, f),
        Verb::Probabilities(f) => (Command::Probabilities, f),
        Verb::NeutrinoScan(f) => (Command::NeutrinoScan, f),
        Verb::Verify(f) => (Command::Verify, f),
    };
    let cfg = build_config(command, &flags)?;
    if flags.print_config {
        print!("{}", cfg.to_config_string());
        return Ok(());
    }
    let result = match command {
        Command::Spectrum => commands::spectrum(&cfg),
        Command::Probabilities => commands::probabilities(&cfg),
        Command::NeutrinoScan => commands::neutrino_scan(&cfg),
        Command::Verify => {
            let env = std::env::var(TOLERANCE_ENV).ok();
            commands::verify(&cfg, env.as_deref())
        }
    };
    match result {
        Ok(text) => write_output(&cfg, &text),
        Err(CliError::Verification {
            failed,
            total,
            output,
        }) => {
            write_output(&cfg, &output)?;
            Err(CliError::Verification {
                failed,
                total,
                output: String::new(),
            })
        }
        Err(e) => Err(e),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.verb) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
