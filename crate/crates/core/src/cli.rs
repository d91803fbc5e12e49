//! Command-line interface. Exit status 0 on success, 1 on parse, validation
//! or consistency failures, 2 on I/O failures and usage errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::afformat::{parse_apx, parse_tgf};
use crate::argumentation::{enumerate_complete, grounded, DEFAULT_ENUMERATION_CAP};
use crate::engine::simulate;
use crate::export::{export_af, render_report, render_verdicts, AfFormat, ReportMode};
use crate::observer::ArgumentId;
use crate::scenario::{parse_scenario, Scenario};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_IO: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "valinfer",
    version,
    about = "Infer an agent's values from observed emotions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a scenario and check the world model.
    Validate { path: PathBuf },
    /// Replay a scenario and print the value verdicts.
    Run {
        path: PathBuf,
        /// Print every step, not only the final verdicts.
        #[arg(long)]
        trace: bool,
        #[arg(long, value_enum)]
        report: Option<ReportArg>,
        /// Also export the final framework.
        #[arg(long, value_enum)]
        export_af: Option<FormatArg>,
        /// Where to write the exported framework.
        #[arg(long, requires = "export_af")]
        out: Option<PathBuf>,
    },
    /// Solve a framework read from an APX or TGF file.
    Solve {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "apx")]
        format: InputFormatArg,
        #[arg(long, value_enum, default_value = "grounded")]
        semantics: SemanticsArg,
        /// Largest framework for which complete extensions are enumerated.
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: usize,
    },
    /// Replay a scenario and print only its final framework.
    Export {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "apx")]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ReportArg {
    Human,
    Structured,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Apx,
    Tgf,
    Dot,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum InputFormatArg {
    Apx,
    Tgf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SemanticsArg {
    Grounded,
    Complete,
}

impl From<FormatArg> for AfFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Apx => AfFormat::Apx,
            FormatArg::Tgf => AfFormat::Tgf,
            FormatArg::Dot => AfFormat::Dot,
        }
    }
}

/// A command failure: the exit status and the message for the error stream.
struct Failure(i32, String);

type CmdResult = Result<(), Failure>;

/// Runs one invocation, writing results to `out` and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_IO } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Validate { path } => cmd_validate(&path, err),
        Command::Run {
            path,
            trace,
            report,
            export_af,
            out: out_path,
        } => cmd_run(
            &path,
            trace,
            report,
            export_af,
            out_path.as_deref(),
            out,
            err,
        ),
        Command::Solve {
            path,
            format,
            semantics,
            cap,
        } => cmd_solve(&path, format, semantics, cap, out),
        Command::Export {
            path,
            format,
            out: out_path,
        } => cmd_export(&path, format, out_path.as_deref(), out, err),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure(code, message)) => {
            let _ = writeln!(err, "{message}");
            code
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(EXIT_IO, format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> CmdResult {
    fs::write(path, text).map_err(|e| Failure(EXIT_IO, format!("{}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, text: &str) -> CmdResult {
    out.write_all(text.as_bytes())
        .map_err(|e| Failure(EXIT_IO, format!("cannot write output: {e}")))
}

/// Reads, parses and validates a scenario, printing each diagnostic.
fn load(path: &Path, err: &mut dyn Write) -> Result<Scenario, Failure> {
    let text = read(path)?;
    let scenario = parse_scenario(&text)
        .map_err(|e| Failure(EXIT_FAILURE, format!("{}: {e}", path.display())))?;
    let diagnostics = scenario.validate();
    for d in &diagnostics {
        let _ = writeln!(err, "{}: {d}", path.display());
    }
    let fatal = diagnostics.iter().filter(|d| d.is_fatal()).count();
    if fatal > 0 {
        return Err(Failure(
            EXIT_FAILURE,
            format!("{}: {fatal} error(s)", path.display()),
        ));
    }
    Ok(scenario)
}

fn cmd_validate(path: &Path, err: &mut dyn Write) -> CmdResult {
    load(path, err).map(|_| ())
}

fn cmd_run(
    path: &Path,
    trace: bool,
    report: Option<ReportArg>,
    export: Option<FormatArg>,
    out_path: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let scenario = load(path, err)?;
    let replay = simulate(&scenario)
        .map_err(|e| Failure(EXIT_FAILURE, format!("{}: {e}", path.display())))?;
    for note in replay.trace.steps.iter().filter_map(|s| s.note.as_ref()) {
        let _ = writeln!(err, "{}: note: {note}", path.display());
    }
    match report {
        Some(ReportArg::Structured) => {
            emit(out, &render_report(&replay.trace, ReportMode::Structured))?;
        }
        Some(ReportArg::Human) => {
            emit(out, &render_report(&replay.trace, ReportMode::Human))?;
            emit(out, &render_verdicts(&replay.trace.final_verdicts()))?;
        }
        None => {
            if trace {
                emit(out, &render_report(&replay.trace, ReportMode::Human))?;
            }
            emit(out, &render_verdicts(&replay.trace.final_verdicts()))?;
        }
    }
    if let Some(format) = export {
        let text = export_af(replay.session.afv(), format.into());
        match out_path {
            Some(p) => write_file(p, &text)?,
            None => emit(out, &text)?,
        }
    }
    Ok(())
}

fn cmd_export(
    path: &Path,
    format: FormatArg,
    out_path: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let scenario = load(path, err)?;
    let replay = simulate(&scenario)
        .map_err(|e| Failure(EXIT_FAILURE, format!("{}: {e}", path.display())))?;
    let text = export_af(replay.session.afv(), format.into());
    match out_path {
        Some(p) => write_file(p, &text),
        None => emit(out, &text),
    }
}

/// `[a,b,c]` in argument order.
pub fn render_extension<'a>(ext: impl IntoIterator<Item = &'a ArgumentId>) -> String {
    let names: Vec<&str> = ext.into_iter().map(ArgumentId::as_str).collect();
    format!("[{}]", names.join(","))
}

fn cmd_solve(
    path: &Path,
    format: InputFormatArg,
    semantics: SemanticsArg,
    cap: usize,
    out: &mut dyn Write,
) -> CmdResult {
    let text = read(path)?;
    let parsed = match format {
        InputFormatArg::Apx => parse_apx(&text),
        InputFormatArg::Tgf => parse_tgf(&text),
    };
    let af = parsed.map_err(|e| Failure(EXIT_FAILURE, format!("{}: {e}", path.display())))?;
    match semantics {
        SemanticsArg::Grounded => {
            let ext = grounded(&af).in_set();
            emit(out, &format!("{}\n", render_extension(&ext)))
        }
        SemanticsArg::Complete => {
            let all = enumerate_complete(&af, cap)
                .map_err(|e| Failure(EXIT_FAILURE, format!("{}: {e}", path.display())))?;
            let mut text = String::new();
            for ext in &all {
                text.push_str(&render_extension(ext));
                text.push('\n');
            }
            emit(out, &text)
        }
    }
}
