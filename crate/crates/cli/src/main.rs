//! Scenario runner for measurement-incompatibility dynamics.
//!
//! Exit codes: 0 success, 1 configuration error (bad file, bad JSON, bad
//! parameters), 2 numerical-consistency trap (e.g. the PBG G(0) = 1 check
//! failing).

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use incompat::scenario::{
    detect_transitions, emit, format_significant, run_scenario, OutputFormat, ScenarioConfig,
    TransitionEvent, TransitionKind,
};
use incompat::Error;

#[derive(Parser)]
#[command(
    name = "incompat",
    about = "Sweep open-system noise scenarios: incompatibility of measurement pairs and concurrence of the evolved Bell probe",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario from a JSON config file
    Run {
        /// Path to the scenario config (JSON)
        #[arg(long)]
        config: PathBuf,
        /// Output path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the config's output_format
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Run one of the bundled figure presets
    Preset {
        /// Preset name
        #[arg(value_enum)]
        name: PresetName,
        /// Output path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the preset's output_format
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Print only the sudden-death/revival event list for a config
    Transitions {
        /// Path to the scenario config (JSON)
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PresetName {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
}

impl PresetName {
    fn config_text(self) -> &'static str {
        match self {
            PresetName::Fig1 => include_str!("../presets/fig1.json"),
            PresetName::Fig2 => include_str!("../presets/fig2.json"),
            PresetName::Fig3 => include_str!("../presets/fig3.json"),
            PresetName::Fig4 => include_str!("../presets/fig4.json"),
            PresetName::Fig5 => include_str!("../presets/fig5.json"),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            let mut cause = std::error::Error::source(&err);
            while let Some(c) = cause {
                eprintln!("  caused by: {c}");
                cause = c.source();
            }
            if err.is_numerical_trap() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Run {
            config,
            out,
            format,
        } => {
            let cfg = load_config(&config)?;
            run_and_write(&cfg, out.as_deref(), format.map(Into::into))
        }
        Command::Preset { name, out, format } => {
            let cfg =
                ScenarioConfig::from_json(name.config_text()).expect("bundled presets are valid");
            run_and_write(&cfg, out.as_deref(), format.map(Into::into))
        }
        Command::Transitions { config } => {
            let cfg = load_config(&config)?;
            let series = run_scenario(&cfg)?;
            let mut events: Vec<TransitionEvent> = Vec::new();
            for idx in 0..cfg.pairs.len() {
                events.extend(detect_transitions(&cfg, &series, idx)?);
            }
            events.sort_by(|a, b| a.time.total_cmp(&b.time));
            let mut stdout = std::io::stdout().lock();
            for ev in &events {
                let kind = match ev.kind {
                    TransitionKind::Death => "death",
                    TransitionKind::Revival => "revival",
                };
                writeln!(
                    stdout,
                    "{}\t{}\t{}",
                    ev.pair,
                    format_significant(ev.time),
                    kind
                )
                .map_err(|e| io_error("<stdout>", e))?;
            }
            Ok(())
        }
    }
}

fn load_config(path: &std::path::Path) -> Result<ScenarioConfig, Error> {
    let text = fs::read_to_string(path).map_err(|e| io_error(&path.display().to_string(), e))?;
    ScenarioConfig::from_json(&text)
}

fn run_and_write(
    cfg: &ScenarioConfig,
    out: Option<&std::path::Path>,
    format: Option<OutputFormat>,
) -> Result<(), Error> {
    let series = run_scenario(cfg)?;
    let mut transitions = Vec::new();
    for idx in 0..cfg.pairs.len() {
        transitions.extend(detect_transitions(cfg, &series, idx)?);
    }
    transitions.sort_by(|a, b| a.time.total_cmp(&b.time));
    let bytes = emit(
        cfg,
        &series,
        &transitions,
        format.unwrap_or(cfg.output_format),
    );
    match out {
        Some(path) => fs::write(path, &bytes).map_err(|e| io_error(&path.display().to_string(), e)),
        None => std::io::stdout()
            .lock()
            .write_all(&bytes)
            .map_err(|e| io_error("<stdout>", e)),
    }
}

fn io_error(path: &str, e: std::io::Error) -> Error {
    Error::Io {
        path: path.to_string(),
        message: e.to_string(),
    }
}
