//! Scenario files: a world model, the observer and expresser, background
//! rules and a script of observations, in a line-oriented format.
//!
//! ```text
//! agents: user, robot
//! atoms: cup_intact, have_coffee
//! actions: drop_full, drop_empty
//! state s0: cup_intact=1, have_coffee=1
//! state s1: cup_intact=0, have_coffee=0
//! trans: s0 -drop_full-> s1
//! epist robot: s0 -> s0, s0 -> s1
//! val user @ *: have_coffee
//! observer: robot
//! expresser: user
//! rule: drop_full => ~have_coffee
//! disclose: full
//! obs 1: state=s1 action=drop_full express=distress?
//! ```
//!
//! Agents without `epist` lines get the identity relation. `val AGENT @ *`
//! assigns values at every state. Expressions are `joy?`, `distress(v)`,
//! `none(joy)`, `auto` or `auto(distress)`. Lines starting with `#` are
//! comments.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::emotions::EmotionKind;
use crate::model::{ActionId, AgentId, Atom, Diagnostic, Literal, State, StateId, WorldModel};
use crate::observer::{BackgroundRule, Expression};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// An expression in the script, possibly left for the engine to derive from
/// the world model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScriptedExpression {
    Given(Expression),
    /// Derived from ground truth; `None` scans every emotion kind.
    Auto(Option<EmotionKind>),
}

impl fmt::Display for ScriptedExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScriptedExpression::Given(e) => write!(f, "{e}"),
            ScriptedExpression::Auto(None) => f.write_str("auto"),
            ScriptedExpression::Auto(Some(k)) => write!(f, "auto({k})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScriptedEvent {
    pub index: u32,
    pub state: StateId,
    pub action: ActionId,
    pub expression: ScriptedExpression,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Disclosure {
    Partial,
    Full,
}

pub const OPTION_DISCLOSE: &str = "disclose";
pub const OPTION_EXPECT: &str = "expect";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    pub model: WorldModel,
    pub observer: AgentId,
    pub expresser: AgentId,
    pub rules: BTreeSet<BackgroundRule>,
    pub script: Vec<ScriptedEvent>,
    pub options: BTreeMap<String, String>,
}

impl Scenario {
    /// `disclose: full` lets `auto` events reveal a unique witness as a
    /// complete emotion.
    pub fn disclosure(&self) -> Disclosure {
        match self.options.get(OPTION_DISCLOSE).map(String::as_str) {
            Some("full") => Disclosure::Full,
            _ => Disclosure::Partial,
        }
    }

    /// The kind a bare `auto` reports as absent when no emotion holds.
    /// Defaults to distress.
    pub fn expected_kind(&self) -> EmotionKind {
        self.options
            .get(OPTION_EXPECT)
            .and_then(|k| k.parse().ok())
            .unwrap_or(EmotionKind::Distress)
    }

    pub fn validate(&self) -> Vec<Diagnostic> {
        let m = &self.model;
        let mut out = m.validate();
        for (role, agent) in [("observer", &self.observer), ("expresser", &self.expresser)] {
            if !m.agents.contains(agent) {
                out.push(Diagnostic::error(format!(
                    "{role} `{agent}` is not a declared agent"
                )));
            }
        }
        if self.observer == self.expresser {
            out.push(Diagnostic::error(format!(
                "observer and expresser must differ (both `{}`)",
                self.observer
            )));
        }
        for rule in &self.rules {
            if !m.actions.contains(&rule.action) {
                out.push(Diagnostic::error(format!(
                    "rule references undeclared action `{}`",
                    rule.action
                )));
            }
            if !m.atoms.contains(&rule.consequence.atom) {
                out.push(Diagnostic::error(format!(
                    "rule for `{}` references undeclared atom `{}`",
                    rule.action, rule.consequence.atom
                )));
            }
        }
        let mut last = 0;
        for e in &self.script {
            if e.index <= last {
                out.push(Diagnostic::error(format!(
                    "observation index {} does not follow index {last}",
                    e.index
                )));
            }
            last = e.index;
            if m.state(&e.state).is_none() {
                out.push(Diagnostic::error(format!(
                    "observation {} references undeclared state `{}`",
                    e.index, e.state
                )));
            }
            if !m.actions.contains(&e.action) {
                out.push(Diagnostic::error(format!(
                    "observation {} references undeclared action `{}`",
                    e.index, e.action
                )));
            }
            if let ScriptedExpression::Given(Expression::Complete(_, v)) = &e.expression {
                if !m.atoms.contains(&v.atom) {
                    out.push(Diagnostic::error(format!(
                        "observation {} references undeclared atom `{}`",
                        e.index, v.atom
                    )));
                }
            }
        }
        for (key, value) in &self.options {
            let ok = match key.as_str() {
                OPTION_DISCLOSE => matches!(value.as_str(), "full" | "partial"),
                OPTION_EXPECT => value.parse::<EmotionKind>().is_ok(),
                _ => false,
            };
            if !ok {
                out.push(Diagnostic::error(format!(
                    "invalid option `{key}: {value}`"
                )));
            }
        }
        out
    }
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
    line: usize,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Cursor<'a> {
    fn new(text: &'a str, line: usize) -> Self {
        Cursor { text, pos: 0, line }
    }

    fn error<T>(&self, message: impl Into<String>) -> PResult<T> {
        Err(self.error_at(self.pos, message))
    }

    fn error_at(&self, pos: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: self.text[..pos].chars().count() + 1,
            message: message.into(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start_matches([' ', '\t']);
        self.pos = self.text.len() - trimmed.len();
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> PResult<()> {
        if self.eat(token) {
            Ok(())
        } else {
            self.error(format!("expected `{token}`"))
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.rest().is_empty()
    }

    fn expect_end(&mut self) -> PResult<()> {
        if self.at_end() {
            Ok(())
        } else {
            self.error("expected end of line")
        }
    }

    fn ident(&mut self, what: &str) -> PResult<&'a str> {
        self.skip_ws();
        let bytes = self.rest().as_bytes();
        let len = match bytes.first() {
            Some(b) if b.is_ascii_alphabetic() || *b == b'_' => bytes
                .iter()
                .take_while(|b| b.is_ascii_alphanumeric() || **b == b'_')
                .count(),
            _ => return self.error(format!("expected {what}")),
        };
        let start = self.pos;
        self.pos += len;
        Ok(&self.text[start..self.pos])
    }

    fn name<T>(
        &mut self,
        what: &str,
        make: impl FnOnce(&'a str) -> Result<T, crate::model::ModelError>,
    ) -> PResult<T> {
        let start = self.pos;
        let s = self.ident(what)?;
        make(s).map_err(|e| self.error_at(start, e.to_string()))
    }

    fn literal(&mut self) -> PResult<Literal> {
        let positive = !self.eat("~");
        let atom = self.name("atom", Atom::new)?;
        Ok(Literal { atom, positive })
    }

    fn number(&mut self) -> PResult<u32> {
        self.skip_ws();
        let digits = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return self.error("expected observation index");
        }
        let start = self.pos;
        self.pos += digits;
        self.text[start..self.pos]
            .parse()
            .map_err(|_| self.error_at(start, "observation index out of range"))
    }

    /// Comma-separated items up to end of line; empty lists are allowed.
    fn list<T>(&mut self, mut item: impl FnMut(&mut Self) -> PResult<T>) -> PResult<Vec<T>> {
        let mut out = Vec::new();
        if self.at_end() {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.at_end() {
                return Ok(out);
            }
            self.expect(",")?;
        }
    }

    fn emotion_kind(&mut self) -> PResult<EmotionKind> {
        let start = self.pos;
        let word = self.ident("emotion kind (`joy` or `distress`)")?;
        word.parse().map_err(|e: String| self.error_at(start, e))
    }

    fn expression(&mut self) -> PResult<ScriptedExpression> {
        self.skip_ws();
        let start = self.pos;
        let word = self.ident("expression (`joy?`, `distress(v)`, `none(joy)` or `auto`)")?;
        match word {
            "auto" => {
                if self.rest().starts_with('(') {
                    self.pos += 1;
                    let kind = self.emotion_kind()?;
                    self.expect(")")?;
                    Ok(ScriptedExpression::Auto(Some(kind)))
                } else {
                    Ok(ScriptedExpression::Auto(None))
                }
            }
            "none" => {
                self.expect("(")?;
                let kind = self.emotion_kind()?;
                self.expect(")")?;
                Ok(ScriptedExpression::Given(Expression::Absent(kind)))
            }
            other => {
                let kind: EmotionKind =
                    other.parse().map_err(|e: String| self.error_at(start, e))?;
                if self.rest().starts_with('?') {
                    self.pos += 1;
                    Ok(ScriptedExpression::Given(Expression::Incomplete(kind)))
                } else if self.rest().starts_with('(') {
                    self.pos += 1;
                    let v = self.literal()?;
                    self.expect(")")?;
                    Ok(ScriptedExpression::Given(Expression::Complete(kind, v)))
                } else {
                    self.error("expected `?` or `(` after emotion kind")
                }
            }
        }
    }
}

const KEYWORDS: &str =
    "agents, atoms, actions, state, trans, epist, val, observer, expresser, rule, obs, disclose, expect";

#[derive(Default)]
struct Builder {
    agents: Option<Vec<AgentId>>,
    atoms: Option<Vec<Atom>>,
    actions: Option<Vec<ActionId>>,
    model: WorldModel,
    with_epist: BTreeSet<AgentId>,
    everywhere: Vec<(AgentId, Literal)>,
    observer: Option<AgentId>,
    expresser: Option<AgentId>,
    rules: BTreeSet<BackgroundRule>,
    script: Vec<ScriptedEvent>,
    options: BTreeMap<String, String>,
}

fn once<T>(slot: &mut Option<T>, value: T, c: &Cursor, section: &str) -> PResult<()> {
    if slot.is_some() {
        return Err(c.error_at(0, format!("duplicate section: {section}")));
    }
    *slot = Some(value);
    Ok(())
}

fn distinct<T: Ord + Clone + fmt::Display>(items: &[T], c: &Cursor, what: &str) -> PResult<()> {
    let mut seen = BTreeSet::new();
    for item in items {
        if !seen.insert(item.clone()) {
            return Err(c.error_at(0, format!("duplicate {what} `{item}`")));
        }
    }
    Ok(())
}

pub fn parse_scenario(text: &str) -> Result<Scenario, ParseError> {
    let mut b = Builder::default();
    for (i, raw) in text.lines().enumerate() {
        let mut c = Cursor::new(raw, i + 1);
        if c.at_end() || c.rest().starts_with('#') {
            continue;
        }
        parse_line(&mut c, &mut b)?;
    }

    let end = text.lines().count().max(1);
    let missing = |section: &str| ParseError {
        line: end,
        column: 1,
        message: format!("missing required section: {section}"),
    };
    let agents = b.agents.ok_or_else(|| missing("agents"))?;
    let atoms = b.atoms.ok_or_else(|| missing("atoms"))?;
    let actions = b.actions.ok_or_else(|| missing("actions"))?;
    let observer = b.observer.ok_or_else(|| missing("observer"))?;
    let expresser = b.expresser.ok_or_else(|| missing("expresser"))?;

    let mut model = b.model;
    model.agents.extend(agents);
    model.atoms.extend(atoms);
    model.actions.extend(actions);
    for agent in model.agents.clone() {
        if !b.with_epist.contains(&agent) {
            model.set_identity_epistemic(agent);
        }
    }
    let states: Vec<StateId> = model.states().map(|s| s.id.clone()).collect();
    for (agent, v) in b.everywhere {
        for s in &states {
            model.add_value(agent.clone(), s.clone(), v.clone());
        }
    }

    Ok(Scenario {
        model,
        observer,
        expresser,
        rules: b.rules,
        script: b.script,
        options: b.options,
    })
}

fn parse_line(c: &mut Cursor, b: &mut Builder) -> PResult<()> {
    let keyword_at = c.pos;
    let keyword = c
        .ident("section keyword")
        .map_err(|_| c.error_at(keyword_at, format!("expected one of: {KEYWORDS}")))?;
    match keyword {
        "agents" => {
            c.expect(":")?;
            let items = c.list(|c| c.name("agent", AgentId::new))?;
            distinct(&items, c, "agent")?;
            once(&mut b.agents, items, c, "agents")
        }
        "atoms" => {
            c.expect(":")?;
            let items = c.list(|c| c.name("atom", Atom::new))?;
            distinct(&items, c, "atom")?;
            once(&mut b.atoms, items, c, "atoms")
        }
        "actions" => {
            c.expect(":")?;
            let items = c.list(|c| c.name("action", ActionId::new))?;
            distinct(&items, c, "action")?;
            once(&mut b.actions, items, c, "actions")
        }
        "state" => {
            let id = c.name("state id", StateId::new)?;
            c.expect(":")?;
            let pairs = c.list(|c| {
                let atom = c.name("atom", Atom::new)?;
                c.expect("=")?;
                if c.eat("1") {
                    Ok((atom, true))
                } else if c.eat("0") {
                    Ok((atom, false))
                } else {
                    c.error("expected `0` or `1`")
                }
            })?;
            let atoms: Vec<Atom> = pairs.iter().map(|(a, _)| a.clone()).collect();
            distinct(&atoms, c, "assignment for atom")?;
            b.model
                .add_state(State::new(id, pairs))
                .map_err(|e| c.error_at(0, e.to_string()))
        }
        "trans" => {
            c.expect(":")?;
            let source = c.name("state id", StateId::new)?;
            c.expect("-")?;
            let action = c.name("action", ActionId::new)?;
            c.expect("->")?;
            let target = c.name("state id", StateId::new)?;
            c.expect_end()?;
            b.model.add_transition(source, action, target);
            Ok(())
        }
        "epist" => {
            let agent = c.name("agent", AgentId::new)?;
            c.expect(":")?;
            let pairs = c.list(|c| {
                let from = c.name("state id", StateId::new)?;
                c.expect("->")?;
                let to = c.name("state id", StateId::new)?;
                Ok((from, to))
            })?;
            b.with_epist.insert(agent.clone());
            let rel = b.model.epistemic.entry(agent).or_default();
            rel.extend(pairs);
            Ok(())
        }
        "val" => {
            let agent = c.name("agent", AgentId::new)?;
            c.expect("@")?;
            let state = if c.eat("*") {
                None
            } else {
                Some(c.name("state id or `*`", StateId::new)?)
            };
            c.expect(":")?;
            let values = c.list(Cursor::literal)?;
            for v in values {
                match &state {
                    Some(s) => b.model.add_value(agent.clone(), s.clone(), v),
                    None => b.everywhere.push((agent.clone(), v)),
                }
            }
            Ok(())
        }
        "observer" | "expresser" => {
            c.expect(":")?;
            let agent = c.name("agent", AgentId::new)?;
            c.expect_end()?;
            let slot = if keyword == "observer" {
                &mut b.observer
            } else {
                &mut b.expresser
            };
            once(slot, agent, c, keyword)
        }
        "rule" => {
            c.expect(":")?;
            let action = c.name("action", ActionId::new)?;
            c.expect("=>")?;
            let consequence = c.literal()?;
            c.expect_end()?;
            b.rules.insert(BackgroundRule::new(action, consequence));
            Ok(())
        }
        "obs" => {
            let index_at = {
                c.skip_ws();
                c.pos
            };
            let index = c.number()?;
            if index == 0 {
                return Err(c.error_at(index_at, "observation index must be positive"));
            }
            if b.script.iter().any(|e| e.index == index) {
                return Err(c.error_at(index_at, format!("duplicate observation index {index}")));
            }
            if let Some(last) = b.script.last() {
                if index < last.index {
                    return Err(c.error_at(
                        index_at,
                        format!(
                            "observation index {index} must exceed previous index {}",
                            last.index
                        ),
                    ));
                }
            }
            c.expect(":")?;
            let (mut state, mut action, mut expression) = (None, None, None);
            while !c.at_end() {
                let key_at = c.pos;
                let key = c.ident("`state=`, `action=` or `express=`")?;
                c.expect("=")?;
                let fresh = match key {
                    "state" => state.replace(c.name("state id", StateId::new)?).is_none(),
                    "action" => action.replace(c.name("action", ActionId::new)?).is_none(),
                    "express" => expression.replace(c.expression()?).is_none(),
                    _ => return Err(c.error_at(key_at, "expected `state`, `action` or `express`")),
                };
                if !fresh {
                    return Err(c.error_at(key_at, format!("duplicate key `{key}`")));
                }
            }
            let missing = |k: &str| c.error_at(c.text.len(), format!("missing `{k}=`"));
            b.script.push(ScriptedEvent {
                index,
                state: state.ok_or_else(|| missing("state"))?,
                action: action.ok_or_else(|| missing("action"))?,
                expression: expression.ok_or_else(|| missing("express"))?,
            });
            Ok(())
        }
        "disclose" | "expect" => {
            c.expect(":")?;
            let at = c.pos;
            let value = c.ident("option value")?;
            let ok = if keyword == "disclose" {
                matches!(value, "full" | "partial")
            } else {
                value.parse::<EmotionKind>().is_ok()
            };
            if !ok {
                return Err(c.error_at(at, format!("invalid value `{value}` for `{keyword}`")));
            }
            c.expect_end()?;
            if b.options
                .insert(keyword.to_string(), value.to_string())
                .is_some()
            {
                return Err(c.error_at(0, format!("duplicate section: {keyword}")));
            }
            Ok(())
        }
        _ => Err(c.error_at(keyword_at, format!("expected one of: {KEYWORDS}"))),
    }
}

fn join<T: fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items
        .into_iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

/// Canonical text for `scenario`: sections in a fixed order, names sorted.
pub fn serialize_scenario(scenario: &Scenario) -> String {
    let m = &scenario.model;
    let mut out = String::new();
    let _ = writeln!(out, "agents: {}", join(&m.agents));
    let _ = writeln!(out, "atoms: {}", join(&m.atoms));
    let _ = writeln!(out, "actions: {}", join(&m.actions));
    for s in m.states() {
        let assignments = s
            .valuation
            .iter()
            .map(|(a, &v)| format!("{a}={}", u8::from(v)));
        let _ = writeln!(out, "state {}: {}", s.id, join(assignments));
    }
    for t in &m.transitions {
        let _ = writeln!(out, "trans: {} -{}-> {}", t.source, t.action, t.target);
    }
    for (agent, rel) in &m.epistemic {
        let declared = m.agents.contains(agent);
        if declared && m.is_identity_epistemic(agent) {
            continue;
        }
        let pairs = rel.iter().map(|(a, b)| format!("{a} -> {b}"));
        let _ = writeln!(out, "epist {agent}: {}", join(pairs));
    }
    // Declared agents missing from the map have an empty relation.
    for agent in &m.agents {
        if !m.epistemic.contains_key(agent) {
            let _ = writeln!(out, "epist {agent}:");
        }
    }

    let mut per_agent: BTreeMap<&AgentId, Vec<(&StateId, &BTreeSet<Literal>)>> = BTreeMap::new();
    for (agent, state, values) in m.value_entries() {
        per_agent.entry(agent).or_default().push((state, values));
    }
    for (agent, entries) in per_agent {
        let uniform = entries.len() == m.state_count()
            && entries
                .iter()
                .all(|(s, v)| m.state(s).is_some() && *v == entries[0].1);
        if uniform {
            let _ = writeln!(out, "val {agent} @ *: {}", join(entries[0].1));
        } else {
            for (state, values) in entries {
                let _ = writeln!(out, "val {agent} @ {state}: {}", join(values));
            }
        }
    }
    let _ = writeln!(out, "observer: {}", scenario.observer);
    let _ = writeln!(out, "expresser: {}", scenario.expresser);
    for r in &scenario.rules {
        let _ = writeln!(out, "rule: {} => {}", r.action, r.consequence);
    }
    for (key, value) in &scenario.options {
        let _ = writeln!(out, "{key}: {value}");
    }
    for e in &scenario.script {
        let _ = writeln!(
            out,
            "obs {}: state={} action={} express={}",
            e.index, e.state, e.action, e.expression
        );
    }
    out
}

/// The coffee scenario used throughout the tests and documentation.
pub const COFFEE_SCENARIO: &str = "\
agents: user, robot
atoms: cup_intact, have_coffee
actions: drop_full, drop_empty
state s0: cup_intact=1, have_coffee=1
state s1: cup_intact=0, have_coffee=0
state s2: cup_intact=1, have_coffee=0
state s3: cup_intact=0, have_coffee=0
trans: s0 -drop_full-> s1
trans: s2 -drop_empty-> s3
val user @ *: have_coffee
observer: robot
expresser: user
rule: drop_full => ~cup_intact
rule: drop_full => ~have_coffee
rule: drop_empty => ~cup_intact
obs 1: state=s1 action=drop_full express=distress?
obs 2: state=s3 action=drop_empty express=none(distress)
";
