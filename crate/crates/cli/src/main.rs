use clap::{Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use toriq::commands::{self, Outcome};
use toriq::doc::FanDocument;
use toriq::report::{envelope, to_bytes, EXIT_PARSE_IO};
use toriq::search_bound_from_env;

#[derive(Parser)]
#[command(
    name = "toriq",
    about = "Graded quotient presentations of toric varieties from fan data",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the fan axioms and report violations
    Validate {
        fan: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute support lattice ranks and the enough-Cartier table
    Analyze {
        fan: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the full quotient presentation with certificates
    Quotient {
        fan: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also list a full minimal generating set of the irrelevant ideal
        #[arg(long)]
        full_irrelevant: bool,
    },
    /// Enumerate monomial sections of a twist and chart trivializations
    Sections {
        fan: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Degree coordinates in the computed Picard basis, comma separated
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        degree: Option<Vec<i64>>,
    },
    /// Run the full certificate suite
    Verify {
        fan: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load(path: &Path, command: &str) -> Result<(FanDocument, Vec<String>), Outcome> {
    let text = std::fs::read_to_string(path).map_err(|e| Outcome {
        report: envelope(
            command,
            path.to_string_lossy().as_ref(),
            &[],
            serde_json::json!({}),
            Some(("IO_ERROR", e.to_string())),
        ),
        exit: EXIT_PARSE_IO,
    })?;
    FanDocument::parse(&text).map_err(|e| Outcome {
        report: envelope(
            command,
            path.to_string_lossy().as_ref(),
            &[],
            serde_json::json!({}),
            Some(("PARSE_ERROR", e.to_string())),
        ),
        exit: EXIT_PARSE_IO,
    })
}

fn emit(outcome: Outcome, out: Option<&Path>) -> ExitCode {
    let bytes = to_bytes(&outcome.report);
    let ok = match out {
        Some(path) => std::fs::write(path, &bytes).is_ok(),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(&bytes).is_ok()
        }
    };
    if !ok {
        eprintln!("failed to write report");
        return ExitCode::from(EXIT_PARSE_IO as u8);
    }
    ExitCode::from(outcome.exit as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let bound = search_bound_from_env();
    match cli.command {
        Command::Validate { fan, out } => match load(&fan, "validate") {
            Ok((doc, warnings)) => emit(commands::cmd_validate(&doc, &warnings), out.as_deref()),
            Err(outcome) => emit(outcome, out.as_deref()),
        },
        Command::Analyze { fan, out } => match load(&fan, "analyze") {
            Ok((doc, warnings)) => emit(commands::cmd_analyze(&doc, &warnings), out.as_deref()),
            Err(outcome) => emit(outcome, out.as_deref()),
        },
        Command::Quotient {
            fan,
            out,
            full_irrelevant,
        } => match load(&fan, "quotient") {
            Ok((doc, warnings)) => emit(
                commands::cmd_quotient(&doc, &warnings, full_irrelevant),
                out.as_deref(),
            ),
            Err(outcome) => emit(outcome, out.as_deref()),
        },
        Command::Sections { fan, out, degree } => match load(&fan, "sections") {
            Ok((doc, warnings)) => emit(
                commands::cmd_sections(&doc, &warnings, degree, bound),
                out.as_deref(),
            ),
            Err(outcome) => emit(outcome, out.as_deref()),
        },
        Command::Verify { fan, out } => match load(&fan, "verify") {
            Ok((doc, warnings)) => emit(
                commands::cmd_verify(&doc, &warnings, bound),
                out.as_deref(),
            ),
            Err(outcome) => emit(outcome, out.as_deref()),
        },
    }
}
