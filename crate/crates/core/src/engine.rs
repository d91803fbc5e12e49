//! Observer sessions: the value framework maintained over a growing
//! observation history, verdict extraction, and scenario replay.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::argumentation::{
    attacks_between, build_afv, grounded, ArgumentationFramework, Attack, Label, Labelling,
};
use crate::emotions::{
    holds_complete, holds_incomplete, witnesses, EmotionKind, IncompleteEmotion,
};
use crate::model::{AgentId, Diagnostic, Literal, ModelError};
use crate::observer::{
    arguments_for, build_arguments, unmatched_note, Argument, ArgumentId, BackgroundRule,
    Expression, HistoryError, Observation, ObservationHistory, Polarity,
};
use crate::scenario::{Disclosure, Scenario, ScriptedEvent, ScriptedExpression};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(transparent)]
    History(#[from] HistoryError),
    #[error("observation {index} is by `{found}`, but the session observes `{expected}`")]
    WrongExpresser {
        index: u32,
        expected: AgentId,
        found: AgentId,
    },
    #[error("observation {index}: {source}")]
    Model { index: u32, source: ModelError },
    #[error("observation {index} contradicts the world model: {reason}")]
    Inconsistent { index: u32, reason: String },
    #[error("scenario is invalid: {}", .0.iter().map(|d| d.message.as_str()).collect::<Vec<_>>().join("; "))]
    InvalidScenario(Vec<Diagnostic>),
}

/// Values believed to belong to the expresser, believed not to, and
/// mentioned by some argument without a verdict.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValueVerdicts {
    pub believed: BTreeSet<Literal>,
    pub believed_not: BTreeSet<Literal>,
    pub undecided: BTreeSet<Literal>,
}

/// What one observation added to the framework.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Delta {
    pub arguments: Vec<Argument>,
    pub attacks: Vec<Attack>,
    pub note: Option<String>,
}

impl Delta {
    pub fn is_empty(&self) -> bool {
        self.arguments.is_empty() && self.attacks.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Session {
    expresser: AgentId,
    rules: BTreeSet<BackgroundRule>,
    history: ObservationHistory,
    arguments: BTreeMap<ArgumentId, Argument>,
    afv: ArgumentationFramework,
    labelling: Labelling,
}

impl Session {
    pub fn new(expresser: AgentId, rules: BTreeSet<BackgroundRule>) -> Self {
        Session {
            expresser,
            rules,
            history: ObservationHistory::new(),
            arguments: BTreeMap::new(),
            afv: ArgumentationFramework::default(),
            labelling: Labelling::default(),
        }
    }

    /// Builds the session for `history` in one pass, without incremental updates.
    pub fn from_history(
        expresser: AgentId,
        rules: BTreeSet<BackgroundRule>,
        history: ObservationHistory,
    ) -> Result<Self, EngineError> {
        for o in &history {
            check_expresser(&expresser, o)?;
        }
        let arguments = build_arguments(&rules, &history);
        let afv = build_afv(arguments.values()).expect("argument ids are keys of a map");
        let labelling = grounded(&afv);
        Ok(Session {
            expresser,
            rules,
            history,
            arguments,
            afv,
            labelling,
        })
    }

    pub fn expresser(&self) -> &AgentId {
        &self.expresser
    }

    pub fn rules(&self) -> &BTreeSet<BackgroundRule> {
        &self.rules
    }

    pub fn history(&self) -> &ObservationHistory {
        &self.history
    }

    pub fn arguments(&self) -> &BTreeMap<ArgumentId, Argument> {
        &self.arguments
    }

    pub fn afv(&self) -> &ArgumentationFramework {
        &self.afv
    }

    pub fn labelling(&self) -> &Labelling {
        &self.labelling
    }

    /// Adds one observation: only its own arguments and the attacks touching
    /// them are computed, then the framework is relabelled. On error the
    /// session is left unchanged.
    pub fn observe(&mut self, observation: Observation) -> Result<Delta, EngineError> {
        self.history.check_next(observation.index)?;
        check_expresser(&self.expresser, &observation)?;

        let fresh: Vec<Argument> = arguments_for(&self.rules, &observation)
            .into_iter()
            .filter(|a| !self.arguments.contains_key(&a.id))
            .collect();
        let mut attacks = BTreeSet::new();
        for new in &fresh {
            for other in self.arguments.values().chain(&fresh) {
                if attacks_between(new, other) {
                    attacks.insert((new.id.clone(), other.id.clone()));
                }
                if attacks_between(other, new) {
                    attacks.insert((other.id.clone(), new.id.clone()));
                }
            }
        }

        let note = unmatched_note(&self.rules, &observation);
        self.history.push(observation)?;
        for a in &fresh {
            self.afv
                .add_argument(a.id.clone(), a.is_blocking())
                .expect("fresh ids are new");
            self.arguments.insert(a.id.clone(), a.clone());
        }
        for (x, y) in &attacks {
            self.afv
                .add_attack(x.clone(), y.clone())
                .expect("both ends were just added");
        }
        self.labelling = grounded(&self.afv);

        Ok(Delta {
            arguments: fresh,
            attacks: attacks.into_iter().collect(),
            note,
        })
    }

    pub fn verdicts(&self) -> ValueVerdicts {
        let mut v = ValueVerdicts::default();
        let mut mentioned = BTreeSet::new();
        for a in self.arguments.values() {
            mentioned.insert(a.value.clone());
            if self.labelling.get(&a.id) == Some(Label::In) {
                match a.polarity {
                    Polarity::Supports => v.believed.insert(a.value.clone()),
                    Polarity::Opposes => v.believed_not.insert(a.value.clone()),
                };
            }
        }
        v.undecided = mentioned
            .into_iter()
            .filter(|l| !v.believed.contains(l) && !v.believed_not.contains(l))
            .collect();
        v
    }
}

fn check_expresser(expected: &AgentId, o: &Observation) -> Result<(), EngineError> {
    if &o.expresser == expected {
        Ok(())
    } else {
        Err(EngineError::WrongExpresser {
            index: o.index,
            expected: expected.clone(),
            found: o.expresser.clone(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub observation: Observation,
    pub new_arguments: Vec<Argument>,
    pub new_attacks: Vec<Attack>,
    pub verdicts: ValueVerdicts,
    pub note: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Trace {
    pub steps: Vec<TraceStep>,
}

impl Trace {
    pub fn final_verdicts(&self) -> ValueVerdicts {
        self.steps
            .last()
            .map(|s| s.verdicts.clone())
            .unwrap_or_default()
    }
}

/// A replayed scenario: its trace and the session it ended in.
#[derive(Debug, Clone)]
pub struct Replay {
    pub trace: Trace,
    pub session: Session,
}

/// Replays the scenario script, checking explicit expressions against the
/// world model and synthesizing `auto` ones from it.
pub fn simulate(scenario: &Scenario) -> Result<Replay, EngineError> {
    let fatal: Vec<Diagnostic> = scenario
        .validate()
        .into_iter()
        .filter(|d| d.is_fatal())
        .collect();
    if !fatal.is_empty() {
        return Err(EngineError::InvalidScenario(fatal));
    }
    let mut session = Session::new(scenario.expresser.clone(), scenario.rules.clone());
    let mut trace = Trace::default();
    for event in &scenario.script {
        let expression = resolve_expression(scenario, event)?;
        let observation = Observation {
            index: event.index,
            state: event.state.clone(),
            expresser: scenario.expresser.clone(),
            action: event.action.clone(),
            expression,
        };
        let delta = session.observe(observation.clone())?;
        trace.steps.push(TraceStep {
            observation,
            new_arguments: delta.arguments,
            new_attacks: delta.attacks,
            verdicts: session.verdicts(),
            note: delta.note,
        });
    }
    Ok(Replay { trace, session })
}

fn resolve_expression(
    scenario: &Scenario,
    event: &ScriptedEvent,
) -> Result<Expression, EngineError> {
    let model = &scenario.model;
    let index = event.index;
    let emotion = |kind| IncompleteEmotion {
        agent: scenario.expresser.clone(),
        kind,
        action: event.action.clone(),
    };
    let wrap = |source| EngineError::Model { index, source };
    let inconsistent = |reason: String| Err(EngineError::Inconsistent { index, reason });

    let synthesize = |kind| -> Result<Option<Expression>, EngineError> {
        let w = witnesses(model, &event.state, &emotion(kind)).map_err(wrap)?;
        Ok(match w.len() {
            0 => None,
            1 if scenario.disclosure() == Disclosure::Full => {
                Some(Expression::Complete(kind, w.into_iter().next().unwrap()))
            }
            _ => Some(Expression::Incomplete(kind)),
        })
    };

    match &event.expression {
        ScriptedExpression::Given(expr) => {
            let ok = match expr {
                Expression::Complete(kind, v) => {
                    holds_complete(model, &event.state, &emotion(*kind).with_value(v.clone()))
                        .map_err(wrap)?
                }
                Expression::Incomplete(kind) => {
                    holds_incomplete(model, &event.state, &emotion(*kind)).map_err(wrap)?
                }
                Expression::Absent(kind) => {
                    !holds_incomplete(model, &event.state, &emotion(*kind)).map_err(wrap)?
                }
            };
            if ok {
                Ok(expr.clone())
            } else {
                let what = match expr {
                    Expression::Absent(kind) => format!(
                        "`{}` does feel {kind} about `{}`",
                        scenario.expresser, event.action
                    ),
                    _ => format!(
                        "`{}` does not feel {expr} about `{}`",
                        scenario.expresser, event.action
                    ),
                };
                inconsistent(format!("{what} at {}", event.state))
            }
        }
        ScriptedExpression::Auto(Some(kind)) => {
            Ok(synthesize(*kind)?.unwrap_or(Expression::Absent(*kind)))
        }
        ScriptedExpression::Auto(None) => {
            for kind in EmotionKind::ALL {
                if let Some(expr) = synthesize(kind)? {
                    return Ok(expr);
                }
            }
            Ok(Expression::Absent(scenario.expected_kind()))
        }
    }
}
