//! Multi-agent transition systems and the modal language evaluated over them.
//!
//! A [`WorldModel`] holds states with total valuations over a finite set of
//! atoms, action-labelled transitions, one epistemic accessibility relation
//! per agent and, for every agent and state, the set of literals the agent
//! holds as values. [`Formula`]s are evaluated at a state with [`eval`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

/// Errors raised when a name or formula does not fit the model.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("invalid identifier {0:?}")]
    InvalidIdentifier(String),
    #[error("undeclared atom `{0}`")]
    UndeclaredAtom(String),
    #[error("undeclared agent `{0}`")]
    UndeclaredAgent(String),
    #[error("undeclared action `{0}`")]
    UndeclaredAction(String),
    #[error("undeclared state `{0}`")]
    UndeclaredState(String),
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
}

/// Returns true for strings of the form `[A-Za-z_][A-Za-z0-9_]*`.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

macro_rules! identifier {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(String);

        impl $name {
            pub fn new(name: impl Into<String>) -> Result<Self, ModelError> {
                let name = name.into();
                if is_identifier(&name) {
                    Ok(Self(name))
                } else {
                    Err(ModelError::InvalidIdentifier(name))
                }
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl FromStr for $name {
            type Err = ModelError;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                Self::new(s)
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                serializer.serialize_str(&self.0)
            }
        }
    };
}

identifier!(
    /// A propositional atom. Atoms generate the literal set of a model.
    Atom
);
identifier!(AgentId);
identifier!(ActionId);
identifier!(StateId);

/// An atom or its negation. Values are literals.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub atom: Atom,
    pub positive: bool,
}

impl Literal {
    pub fn positive(atom: Atom) -> Self {
        Literal {
            atom,
            positive: true,
        }
    }

    pub fn negative(atom: Atom) -> Self {
        Literal {
            atom,
            positive: false,
        }
    }

    pub fn complement(&self) -> Self {
        Literal {
            atom: self.atom.clone(),
            positive: !self.positive,
        }
    }
}

/// Literals render as `atom` or `~atom`.
impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "{}", self.atom)
        } else {
            write!(f, "~{}", self.atom)
        }
    }
}

impl FromStr for Literal {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.strip_prefix('~') {
            Some(rest) => Ok(Literal::negative(Atom::new(rest)?)),
            None => Ok(Literal::positive(Atom::new(s)?)),
        }
    }
}

impl Serialize for Literal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A state and its valuation. Valuations are expected to be total over the
/// atoms of the model; [`WorldModel::validate`] reports gaps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct State {
    pub id: StateId,
    pub valuation: BTreeMap<Atom, bool>,
}

impl State {
    pub fn new(id: StateId, valuation: impl IntoIterator<Item = (Atom, bool)>) -> Self {
        State {
            id,
            valuation: valuation.into_iter().collect(),
        }
    }

    pub fn satisfies(&self, literal: &Literal) -> Option<bool> {
        self.valuation
            .get(&literal.atom)
            .map(|&truth| truth == literal.positive)
    }
}

/// A transition `source -action-> target`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub source: StateId,
    pub action: ActionId,
    pub target: StateId,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WorldModel {
    pub atoms: BTreeSet<Atom>,
    pub agents: BTreeSet<AgentId>,
    pub actions: BTreeSet<ActionId>,
    states: BTreeMap<StateId, State>,
    pub transitions: BTreeSet<Transition>,
    /// Agents missing from this map have an empty accessibility relation.
    pub epistemic: BTreeMap<AgentId, BTreeSet<(StateId, StateId)>>,
    /// Entries are never empty sets.
    values: BTreeMap<(AgentId, StateId), BTreeSet<Literal>>,
}

impl WorldModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_state(&mut self, state: State) -> Result<(), ModelError> {
        if self.states.contains_key(&state.id) {
            return Err(ModelError::DuplicateState(state.id.to_string()));
        }
        self.states.insert(state.id.clone(), state);
        Ok(())
    }

    pub fn add_transition(&mut self, source: StateId, action: ActionId, target: StateId) {
        self.transitions.insert(Transition {
            source,
            action,
            target,
        });
    }

    pub fn add_belief_edge(&mut self, agent: AgentId, from: StateId, to: StateId) {
        self.epistemic.entry(agent).or_default().insert((from, to));
    }

    /// Replaces the relation of `agent` with the identity over all states.
    pub fn set_identity_epistemic(&mut self, agent: AgentId) {
        let identity = self.states.keys().map(|s| (s.clone(), s.clone())).collect();
        self.epistemic.insert(agent, identity);
    }

    pub fn add_value(&mut self, agent: AgentId, state: StateId, value: Literal) {
        self.values.entry((agent, state)).or_default().insert(value);
    }

    pub fn is_identity_epistemic(&self, agent: &AgentId) -> bool {
        match self.epistemic.get(agent) {
            Some(rel) => {
                rel.len() == self.states.len()
                    && rel
                        .iter()
                        .all(|(a, b)| a == b && self.states.contains_key(a))
            }
            None => self.states.is_empty(),
        }
    }

    pub fn states(&self) -> impl Iterator<Item = &State> {
        self.states.values()
    }

    pub fn state(&self, id: &StateId) -> Option<&State> {
        self.states.get(id)
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn values_of(&self, agent: &AgentId, state: &StateId) -> impl Iterator<Item = &Literal> {
        self.values
            .get(&(agent.clone(), state.clone()))
            .into_iter()
            .flatten()
    }

    pub fn value_entries(&self) -> impl Iterator<Item = (&AgentId, &StateId, &BTreeSet<Literal>)> {
        self.values.iter().map(|((a, s), v)| (a, s, v))
    }

    pub fn has_value(&self, agent: &AgentId, state: &StateId, value: &Literal) -> bool {
        self.values
            .get(&(agent.clone(), state.clone()))
            .is_some_and(|set| set.contains(value))
    }

    /// The literal set `{a, ~a : a in atoms}` in literal order.
    pub fn literals(&self) -> Vec<Literal> {
        self.atoms
            .iter()
            .flat_map(|a| [Literal::negative(a.clone()), Literal::positive(a.clone())])
            .collect()
    }

    pub fn check_state(&self, state: &StateId) -> Result<&State, ModelError> {
        self.states
            .get(state)
            .ok_or_else(|| ModelError::UndeclaredState(state.to_string()))
    }

    pub fn check_agent(&self, agent: &AgentId) -> Result<(), ModelError> {
        if self.agents.contains(agent) {
            Ok(())
        } else {
            Err(ModelError::UndeclaredAgent(agent.to_string()))
        }
    }

    pub fn check_action(&self, action: &ActionId) -> Result<(), ModelError> {
        if self.actions.contains(action) {
            Ok(())
        } else {
            Err(ModelError::UndeclaredAction(action.to_string()))
        }
    }

    pub fn check_literal(&self, literal: &Literal) -> Result<(), ModelError> {
        if self.atoms.contains(&literal.atom) {
            Ok(())
        } else {
            Err(ModelError::UndeclaredAtom(literal.atom.to_string()))
        }
    }

    /// States from which `action` leads to `state`.
    pub fn predecessors(
        &self,
        state: &StateId,
        action: &ActionId,
    ) -> Result<BTreeSet<StateId>, ModelError> {
        self.check_state(state)?;
        self.check_action(action)?;
        Ok(self
            .transitions
            .iter()
            .filter(|t| &t.target == state && &t.action == action)
            .map(|t| t.source.clone())
            .collect())
    }

    fn accessible<'a>(
        &'a self,
        agent: &AgentId,
        state: &'a StateId,
    ) -> impl Iterator<Item = &'a StateId> {
        self.epistemic
            .get(agent)
            .into_iter()
            .flatten()
            .filter(move |(from, _)| from == state)
            .map(|(_, to)| to)
    }

    /// Checks every structural invariant. Fatal problems are errors; agents
    /// whose relation is not serial get one warning per offending state.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        for state in self.states.values() {
            for atom in &self.atoms {
                if !state.valuation.contains_key(atom) {
                    out.push(Diagnostic::error(format!(
                        "valuation of state `{}` is not total: missing atom `{atom}`",
                        state.id
                    )));
                }
            }
            for atom in state.valuation.keys() {
                if !self.atoms.contains(atom) {
                    out.push(Diagnostic::error(format!(
                        "state `{}` assigns undeclared atom `{atom}`",
                        state.id
                    )));
                }
            }
        }
        for t in &self.transitions {
            for s in [&t.source, &t.target] {
                if !self.states.contains_key(s) {
                    out.push(Diagnostic::error(format!(
                        "transition {} -{}-> {} references undeclared state `{s}`",
                        t.source, t.action, t.target
                    )));
                }
            }
            if !self.actions.contains(&t.action) {
                out.push(Diagnostic::error(format!(
                    "transition {} -{}-> {} references undeclared action `{}`",
                    t.source, t.action, t.target, t.action
                )));
            }
        }
        for (agent, rel) in &self.epistemic {
            if !self.agents.contains(agent) {
                out.push(Diagnostic::error(format!(
                    "epistemic relation declared for undeclared agent `{agent}`"
                )));
            }
            for (a, b) in rel {
                for s in [a, b] {
                    if !self.states.contains_key(s) {
                        out.push(Diagnostic::error(format!(
                            "epistemic pair ({a}, {b}) of agent `{agent}` references undeclared state `{s}`"
                        )));
                    }
                }
            }
        }
        for ((agent, state), set) in &self.values {
            if !self.agents.contains(agent) {
                out.push(Diagnostic::error(format!(
                    "values declared for undeclared agent `{agent}`"
                )));
            }
            if !self.states.contains_key(state) {
                out.push(Diagnostic::error(format!(
                    "values of agent `{agent}` declared at undeclared state `{state}`"
                )));
            }
            for v in set {
                if !self.atoms.contains(&v.atom) {
                    out.push(Diagnostic::error(format!(
                        "value `{v}` of agent `{agent}` uses undeclared atom `{}`",
                        v.atom
                    )));
                }
            }
        }
        for agent in &self.agents {
            for state in self.states.keys() {
                if self.accessible(agent, state).next().is_none() {
                    out.push(Diagnostic::warning(format!(
                        "epistemic relation of agent `{agent}` is non-serial at {state}"
                    )));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
}

impl Diagnostic {
    pub fn error(message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            message: message.into(),
        }
    }

    pub fn warning(message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            message: message.into(),
        }
    }

    pub fn is_fatal(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.severity {
            Severity::Warning => write!(f, "warning: {}", self.message),
            Severity::Error => write!(f, "error: {}", self.message),
        }
    }
}

/// Formulas of the modal language.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Lit(Literal),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    /// True when the formula holds at every state the agent considers possible.
    Believes(AgentId, Box<Formula>),
    /// Converse action diamond: the formula held at some state from which the
    /// action led here.
    BeforeAction(ActionId, Box<Formula>),
    HasValue(AgentId, Literal),
}

impl Formula {
    pub fn negate(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn believes(agent: AgentId, f: Formula) -> Self {
        Formula::Believes(agent, Box::new(f))
    }

    pub fn before(action: ActionId, f: Formula) -> Self {
        Formula::BeforeAction(action, Box::new(f))
    }
}

/// Evaluates `formula` at `state`.
pub fn eval(model: &WorldModel, state: &StateId, formula: &Formula) -> Result<bool, ModelError> {
    let current = model.check_state(state)?;
    match formula {
        Formula::Lit(l) => {
            model.check_literal(l)?;
            // Valuation gaps read as false; validate() reports them.
            Ok(current.satisfies(l).unwrap_or(false))
        }
        Formula::Not(f) => Ok(!eval(model, state, f)?),
        Formula::And(a, b) => {
            let left = eval(model, state, a)?;
            let right = eval(model, state, b)?;
            Ok(left && right)
        }
        Formula::Or(a, b) => {
            let left = eval(model, state, a)?;
            let right = eval(model, state, b)?;
            Ok(left || right)
        }
        Formula::Believes(agent, f) => {
            model.check_agent(agent)?;
            let mut all = true;
            for next in model.accessible(agent, state) {
                all &= eval(model, next, f)?;
            }
            // Evaluate the body once even with no successors so undeclared
            // names surface regardless of the relation's shape.
            check_names(model, f)?;
            Ok(all)
        }
        Formula::BeforeAction(action, f) => {
            let mut any = false;
            for prev in model.predecessors(state, action)? {
                any |= eval(model, &prev, f)?;
            }
            check_names(model, f)?;
            Ok(any)
        }
        Formula::HasValue(agent, v) => {
            model.check_agent(agent)?;
            model.check_literal(v)?;
            Ok(model.has_value(agent, state, v))
        }
    }
}

fn check_names(model: &WorldModel, formula: &Formula) -> Result<(), ModelError> {
    match formula {
        Formula::Lit(l) => model.check_literal(l),
        Formula::Not(f) => check_names(model, f),
        Formula::And(a, b) | Formula::Or(a, b) => {
            check_names(model, a)?;
            check_names(model, b)
        }
        Formula::Believes(agent, f) => {
            model.check_agent(agent)?;
            check_names(model, f)
        }
        Formula::BeforeAction(action, f) => {
            model.check_action(action)?;
            check_names(model, f)
        }
        Formula::HasValue(agent, v) => {
            model.check_agent(agent)?;
            model.check_literal(v)
        }
    }
}
