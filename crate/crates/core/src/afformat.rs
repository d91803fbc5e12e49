//! Readers for frameworks in APX (`arg(a).` / `att(a,b).`) and TGF
//! (argument lines, `#`, attack lines).

use thiserror::Error;

use crate::argumentation::{ArgumentationFramework, FrameworkError};
use crate::observer::ArgumentId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct AfParseError {
    pub line: usize,
    pub message: String,
}

fn fail<T>(line: usize, message: impl Into<String>) -> Result<T, AfParseError> {
    Err(AfParseError {
        line,
        message: message.into(),
    })
}

fn argument_name(raw: &str, line: usize) -> Result<ArgumentId, AfParseError> {
    let name = raw.trim();
    if name.is_empty()
        || name
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, ',' | '(' | ')'))
    {
        return fail(line, format!("invalid argument name {name:?}"));
    }
    Ok(ArgumentId::new(name))
}

fn framework_error(err: FrameworkError, line: usize) -> AfParseError {
    AfParseError {
        line,
        message: err.to_string(),
    }
}

pub fn parse_apx(text: &str) -> Result<ArgumentationFramework, AfParseError> {
    let mut af = ArgumentationFramework::default();
    let mut attacks = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let stmt = raw.trim();
        if stmt.is_empty() || stmt.starts_with('%') {
            continue;
        }
        let Some(body) = stmt.strip_suffix(").") else {
            return fail(line, "expected a statement ending in `).`");
        };
        if let Some(name) = body.strip_prefix("arg(") {
            let id = argument_name(name, line)?;
            af.add_argument(id, false)
                .map_err(|e| framework_error(e, line))?;
        } else if let Some(pair) = body.strip_prefix("att(") {
            let Some((a, b)) = pair.split_once(',') else {
                return fail(line, "expected `att(a,b).`");
            };
            attacks.push((argument_name(a, line)?, argument_name(b, line)?, line));
        } else {
            return fail(line, "expected `arg(..).` or `att(..,..).`");
        }
    }
    for (a, b, line) in attacks {
        af.add_attack(a, b).map_err(|e| framework_error(e, line))?;
    }
    Ok(af)
}

pub fn parse_tgf(text: &str) -> Result<ArgumentationFramework, AfParseError> {
    let mut af = ArgumentationFramework::default();
    let mut in_edges = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let stmt = raw.trim();
        if stmt.is_empty() {
            continue;
        }
        if stmt == "#" {
            if in_edges {
                return fail(line, "second `#` separator");
            }
            in_edges = true;
            continue;
        }
        let mut fields = stmt.split_whitespace();
        if in_edges {
            let (Some(a), Some(b)) = (fields.next(), fields.next()) else {
                return fail(line, "expected `attacker target`");
            };
            af.add_attack(argument_name(a, line)?, argument_name(b, line)?)
                .map_err(|e| framework_error(e, line))?;
        } else {
            // Anything after the name is a label.
            let name = fields.next().expect("line is not blank");
            af.add_argument(argument_name(name, line)?, false)
                .map_err(|e| framework_error(e, line))?;
        }
    }
    Ok(af)
}
