use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cable_budget::commands::{run_command, Command, CommandError, Flags};
use cable_budget::contour::Field;
use cable_budget::report::Format;
use cable_budget::transceiver::TransceiverTable;
use cable_budget::{parse_config, RunConfig};
use clap::{Parser, Subcommand};

const EXIT_CONFIG: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;
const EXIT_IO: u8 = 4;

/// Link budget and capacity planning for long-haul submarine cables.
#[derive(Debug, Parser)]
#[command(name = "cable-budget", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,

    /// Configuration file (line format or JSON). Built-in defaults when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// csv, json or svg (svg only for contour).
    #[arg(long, global = true)]
    format: Option<Format>,

    #[arg(long, global = true)]
    include_rbs: Option<bool>,

    #[arg(long, global = true)]
    target_tbps: Option<f64>,

    /// Comma-separated contour levels.
    #[arg(long, global = true, value_delimiter = ',')]
    levels: Vec<f64>,

    /// Contour field: throughput or gsnr.
    #[arg(long, global = true)]
    field: Option<Field>,

    /// Comma-separated fiber losses in dB/km for span-curve and rbs.
    #[arg(long, global = true, value_delimiter = ',')]
    losses: Vec<f64>,

    /// Transceiver table file; overrides transceiver.table.
    #[arg(long, global = true)]
    trx_table: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Sub {
    /// Per-impairment SNR breakdown and throughput at the configured operating point.
    Budget,
    /// Throughput or GSNR over the loss/power grid, with iso-level contours.
    Contour,
    /// Required EDFA power against span length.
    SpanCurve,
    /// Backscatter-limited SNR for a set of fiber losses.
    Rbs,
    /// Electrical power feed for the repeater chain.
    Powerfeed,
    /// One-way propagation latency, hollow-core against solid-core.
    Latency,
}

impl Sub {
    fn command(self) -> Command {
        match self {
            Sub::Budget => Command::Budget,
            Sub::Contour => Command::Contour,
            Sub::SpanCurve => Command::SpanCurve,
            Sub::Rbs => Command::Rbs,
            Sub::Powerfeed => Command::Powerfeed,
            Sub::Latency => Command::Latency,
        }
    }

    fn default_format(self) -> Format {
        match self {
            Sub::Contour | Sub::SpanCurve | Sub::Rbs => Format::Csv,
            Sub::Budget | Sub::Powerfeed | Sub::Latency => Format::Json,
        }
    }
}

struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn io(path: &Path, err: std::io::Error) -> Self {
        Failure {
            code: EXIT_IO,
            kind: "io",
            message: format!("{}: {err}", path.display()),
        }
    }
}

impl From<CommandError> for Failure {
    fn from(err: CommandError) -> Self {
        Failure {
            code: if err.is_infeasible() { EXIT_INFEASIBLE } else { EXIT_CONFIG },
            kind: err.kind(),
            message: err.to_string(),
        }
    }
}

fn load_table(path: &Path) -> Result<TransceiverTable, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    TransceiverTable::parse(&text).map_err(|e| Failure {
        code: EXIT_CONFIG,
        kind: "transceiver_table",
        message: format!("{}: {e}", path.display()),
    })
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let cfg = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
            parse_config(&text).map_err(CommandError::Config)?
        }
        None => RunConfig::default(),
    };

    // a table named in the config is resolved relative to the config file
    let table_path = cli.trx_table.clone().or_else(|| {
        cfg.transceiver.table.as_ref().map(|t| {
            let base = cli.config.as_deref().and_then(Path::parent).unwrap_or(Path::new(""));
            base.join(t)
        })
    });
    let trx_table = table_path.as_deref().map(load_table).transpose()?;

    let flags = Flags {
        include_rbs: cli.include_rbs,
        target_tbps: cli.target_tbps,
        levels: cli.levels.clone(),
        field: cli.field,
        losses: cli.losses.clone(),
        trx_table,
    };
    let doc = run_command(cli.command.command(), &cfg, &flags)?;
    let format = cli.format.unwrap_or(cli.command.default_format());
    let text = doc.render(format).map_err(|e| Failure {
        code: EXIT_CONFIG,
        kind: "unsupported_format",
        message: e.to_string(),
    })?;

    match &cli.output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::io(path, e)),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| Failure::io(Path::new("<stdout>"), e))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let body = serde_json::json!({ "error": { "kind": f.kind, "message": f.message } });
            eprintln!("{body}");
            ExitCode::from(f.code)
        }
    }
}
