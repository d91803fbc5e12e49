//! Framework exports (APX, TGF, DOT) and trace reports.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::argumentation::ArgumentationFramework;
use crate::engine::{Trace, ValueVerdicts};
use crate::observer::{Argument, ArgumentId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown format `{0}`")]
pub struct UnknownFormat(pub String);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AfFormat {
    Apx,
    Tgf,
    Dot,
}

impl FromStr for AfFormat {
    type Err = UnknownFormat;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "apx" => Ok(AfFormat::Apx),
            "tgf" => Ok(AfFormat::Tgf),
            "dot" => Ok(AfFormat::Dot),
            other => Err(UnknownFormat(other.to_string())),
        }
    }
}

pub fn export_af(af: &ArgumentationFramework, format: AfFormat) -> String {
    let mut out = String::new();
    match format {
        AfFormat::Apx => {
            for a in af.arguments() {
                let _ = writeln!(out, "arg({a}).");
            }
            for (a, b) in af.attacks() {
                let _ = writeln!(out, "att({a},{b}).");
            }
        }
        AfFormat::Tgf => {
            for a in af.arguments() {
                let _ = writeln!(out, "{a}");
            }
            out.push_str("#\n");
            for (a, b) in af.attacks() {
                let _ = writeln!(out, "{a} {b}");
            }
        }
        AfFormat::Dot => {
            out.push_str("digraph afv {\n");
            for a in af.arguments() {
                let style = if af.is_blocking(a) { "dashed" } else { "solid" };
                let _ = writeln!(out, "  {} [style={style}];", quote(a));
            }
            for (a, b) in af.attacks() {
                let _ = writeln!(out, "  {} -> {};", quote(a), quote(b));
            }
            out.push_str("}\n");
        }
    }
    out
}

fn quote(id: &ArgumentId) -> String {
    format!(
        "\"{}\"",
        id.as_str().replace('\\', "\\\\").replace('"', "\\\"")
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportMode {
    Human,
    Structured,
}

impl FromStr for ReportMode {
    type Err = UnknownFormat;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "human" => Ok(ReportMode::Human),
            "structured" => Ok(ReportMode::Structured),
            other => Err(UnknownFormat(other.to_string())),
        }
    }
}

#[derive(Serialize)]
struct StepRecord<'a> {
    index: u32,
    state: &'a str,
    action: &'a str,
    expression: String,
    new_arguments: &'a [Argument],
    new_attacks: Vec<[&'a str; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<&'a str>,
    believed: &'a std::collections::BTreeSet<crate::model::Literal>,
    believed_not: &'a std::collections::BTreeSet<crate::model::Literal>,
    undecided: &'a std::collections::BTreeSet<crate::model::Literal>,
}

#[derive(Serialize)]
struct Report<'a> {
    steps: Vec<StepRecord<'a>>,
    verdicts: ValueVerdicts,
}

pub fn render_report(trace: &Trace, mode: ReportMode) -> String {
    match mode {
        ReportMode::Structured => {
            let report = Report {
                steps: trace
                    .steps
                    .iter()
                    .map(|s| StepRecord {
                        index: s.observation.index,
                        state: s.observation.state.as_str(),
                        action: s.observation.action.as_str(),
                        expression: s.observation.expression.to_string(),
                        new_arguments: &s.new_arguments,
                        new_attacks: s
                            .new_attacks
                            .iter()
                            .map(|(a, b)| [a.as_str(), b.as_str()])
                            .collect(),
                        note: s.note.as_deref(),
                        believed: &s.verdicts.believed,
                        believed_not: &s.verdicts.believed_not,
                        undecided: &s.verdicts.undecided,
                    })
                    .collect(),
                verdicts: trace.final_verdicts(),
            };
            let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
            text.push('\n');
            text
        }
        ReportMode::Human => {
            let mut out = String::new();
            for s in &trace.steps {
                let o = &s.observation;
                let _ = writeln!(
                    out,
                    "step {}: {} {} at {} ({})",
                    o.index, o.expresser, o.expression, o.state, o.action
                );
                let args: Vec<_> = s.new_arguments.iter().map(|a| a.id.to_string()).collect();
                let _ = writeln!(out, "  arguments: {}", args.join(" "));
                let atts: Vec<_> = s
                    .new_attacks
                    .iter()
                    .map(|(a, b)| format!("{a}->{b}"))
                    .collect();
                let _ = writeln!(out, "  attacks: {}", atts.join(" "));
                if let Some(note) = &s.note {
                    let _ = writeln!(out, "  note: {note}");
                }
                out.push_str(&indent(&render_verdicts(&s.verdicts)));
            }
            out
        }
    }
}

fn indent(text: &str) -> String {
    text.lines().map(|l| format!("  {l}\n")).collect()
}

/// Three lines: `believed:`, `believed_not:` and `undecided:`.
pub fn render_verdicts(v: &ValueVerdicts) -> String {
    let line = |name: &str, set: &std::collections::BTreeSet<crate::model::Literal>| {
        let items: Vec<_> = set.iter().map(|l| l.to_string()).collect();
        if items.is_empty() {
            format!("{name}:\n")
        } else {
            format!("{name}: {}\n", items.join(", "))
        }
    };
    format!(
        "{}{}{}",
        line("believed", &v.believed),
        line("believed_not", &v.believed_not),
        line("undecided", &v.undecided)
    )
}
