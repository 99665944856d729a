use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qosc_cli::{
    decompose_cmd, error_json, gram_cmd, integrate_cmd, normalize_cmd, spectrum_cmd, trunc_degree, verify_structure_cmd, Outcome,
};
use qosc_core::analysis::Variant;

#[derive(Parser)]
#[command(name = "qosc", version, about = "Exact checks for the q-deformed isotropic oscillator on R_q^N")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Q2,
    Qm2,
}

#[derive(Subcommand)]
enum Cmd {
    /// Structure tensors and their identities.
    VerifyStructure {
        #[arg(long = "N")]
        n: usize,
        /// Verify a structure set read from this JSON file instead of building one.
        #[arg(long)]
        import: Option<PathBuf>,
        /// Write the structure set as JSON.
        #[arg(long)]
        export: Option<PathBuf>,
        /// Also check rule confluence and the Casimir identity.
        #[arg(long)]
        algebra: bool,
    },
    /// Normal-order an expression.
    Normalize {
        #[arg(long = "N")]
        n: usize,
        expr: String,
        #[arg(long, default_value = "1")]
        omega: String,
        /// Print the JSON document instead of the canonical text.
        #[arg(long)]
        json: bool,
    },
    /// Tower states, energies and dimensions.
    Spectrum {
        #[arg(long = "N")]
        n: usize,
        #[arg(long)]
        rmax: usize,
        /// Evaluation point for the float energies.
        #[arg(long)]
        q: Option<f64>,
        #[arg(long, default_value = "1")]
        omega: String,
    },
    /// Gram matrices of the lowest levels.
    Gram {
        #[arg(long = "N")]
        n: usize,
        #[arg(long)]
        rmax: usize,
        /// Evaluation points; repeat or separate with commas.
        #[arg(long, value_delimiter = ',', required = true)]
        q: Vec<f64>,
        /// Order of the radial series diagnostic.
        #[arg(long, default_value_t = 12)]
        order: usize,
        #[arg(long, default_value = "1")]
        omega: String,
    },
    /// Gaussian integral of a polynomial, normalized to ∫ G = 1.
    Integrate {
        #[arg(long = "N")]
        n: usize,
        expr: String,
        #[arg(long)]
        alpha: String,
        #[arg(long, value_enum, default_value = "q2")]
        variant: VariantArg,
        /// Write the moment table as JSON.
        #[arg(long)]
        export_moments: Option<PathBuf>,
    },
    /// Angular momentum decomposition of one level.
    Decompose {
        #[arg(long = "N")]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value = "1")]
        omega: String,
    },
}

fn run(cmd: Cmd) -> anyhow::Result<(String, Outcome)> {
    let d = trunc_degree()?;
    let json = |o: Outcome| (o.render(), o);
    Ok(match cmd {
        Cmd::VerifyStructure { n, import, export, algebra } => {
            json(verify_structure_cmd(n, import.as_deref(), export.as_deref(), algebra)?)
        }
        Cmd::Normalize { n, expr, omega, json: as_json } => {
            let (text, o) = normalize_cmd(n, &expr, &omega)?;
            if as_json {
                json(o)
            } else {
                (text, o)
            }
        }
        Cmd::Spectrum { n, rmax, q, omega } => json(spectrum_cmd(n, rmax, q, &omega, d)?),
        Cmd::Gram { n, rmax, q, order, omega } => json(gram_cmd(n, rmax, &q, order, &omega, d)?),
        Cmd::Integrate { n, expr, alpha, variant, export_moments } => {
            let v = match variant {
                VariantArg::Q2 => Variant::Q2,
                VariantArg::Qm2 => Variant::Qm2,
            };
            json(integrate_cmd(n, &expr, &alpha, v, export_moments.as_deref())?)
        }
        Cmd::Decompose { n, r, omega } => json(decompose_cmd(n, r, &omega, d)?),
    })
}

/// Writes a line to stdout; a closed pipe is not an error worth reporting.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}").and_then(|_| out.flush());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok((text, o)) => {
            emit(&text);
            if o.pass() {
                ExitCode::SUCCESS
            } else {
                eprintln!("{}", serde_json::json!({"schema": 1, "failures": o.failures}));
                ExitCode::from(1)
            }
        }
        Err(e) => {
            emit(&serde_json::to_string_pretty(&error_json(&e)).expect("JSON values serialize"));
            ExitCode::from(2)
        }
    }
}
