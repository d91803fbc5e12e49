//! Observation histories and argument construction.
//!
//! An observed emotion about an action, combined with background rules of the
//! form "this action usually brings about that literal", yields ordinary
//! arguments that support a value of the expresser. An observed absence of an
//! emotion yields blocking arguments that oppose one.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::emotions::EmotionKind;
use crate::model::{ActionId, AgentId, Literal, StateId};

/// `action` usually brings about `consequence`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BackgroundRule {
    pub action: ActionId,
    pub consequence: Literal,
}

impl BackgroundRule {
    pub fn new(action: ActionId, consequence: Literal) -> Self {
        BackgroundRule {
            action,
            consequence,
        }
    }
}

/// What the observer saw the expresser show about an action.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expression {
    Complete(EmotionKind, Literal),
    Incomplete(EmotionKind),
    /// The expresser explicitly did not show this kind of emotion.
    Absent(EmotionKind),
}

impl Expression {
    pub fn kind(&self) -> EmotionKind {
        match self {
            Expression::Complete(k, _) | Expression::Incomplete(k) | Expression::Absent(k) => *k,
        }
    }
}

/// Renders in the scenario syntax: `distress(v)`, `distress?`, `none(distress)`.
impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expression::Complete(k, v) => write!(f, "{k}({v})"),
            Expression::Incomplete(k) => write!(f, "{k}?"),
            Expression::Absent(k) => write!(f, "none({k})"),
        }
    }
}

impl Serialize for Expression {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Observation {
    pub index: u32,
    pub state: StateId,
    pub expresser: AgentId,
    pub action: ActionId,
    pub expression: Expression,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HistoryError {
    #[error("observation index must be positive")]
    ZeroIndex,
    #[error("observation index {new} does not follow index {last}")]
    NonIncreasing { last: u32, new: u32 },
}

/// Observations in strictly increasing index order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ObservationHistory {
    observations: Vec<Observation>,
}

impl ObservationHistory {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_observations(
        observations: impl IntoIterator<Item = Observation>,
    ) -> Result<Self, HistoryError> {
        let mut history = Self::new();
        for o in observations {
            history.push(o)?;
        }
        Ok(history)
    }

    pub fn check_next(&self, index: u32) -> Result<(), HistoryError> {
        if index == 0 {
            return Err(HistoryError::ZeroIndex);
        }
        match self.last_index() {
            Some(last) if index <= last => Err(HistoryError::NonIncreasing { last, new: index }),
            _ => Ok(()),
        }
    }

    pub fn push(&mut self, observation: Observation) -> Result<(), HistoryError> {
        self.check_next(observation.index)?;
        self.observations.push(observation);
        Ok(())
    }

    pub fn last_index(&self) -> Option<u32> {
        self.observations.last().map(|o| o.index)
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Observation> {
        self.observations.iter()
    }
}

impl<'a> IntoIterator for &'a ObservationHistory {
    type Item = &'a Observation;
    type IntoIter = std::slice::Iter<'a, Observation>;

    fn into_iter(self) -> Self::IntoIter {
        self.iter()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    /// Ordinary argument: the value belongs to the expresser.
    Supports,
    /// Blocking argument: the value does not belong to the expresser.
    Opposes,
}

/// Argument names. Arguments built from observations are named
/// `+value@index` (supports) or `-value@index` (opposes); frameworks read from
/// files may use any token without whitespace, commas or parentheses.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArgumentId(String);

impl ArgumentId {
    pub fn new(name: impl Into<String>) -> Self {
        ArgumentId(name.into())
    }

    pub fn canonical(polarity: Polarity, value: &Literal, obs_index: u32) -> Self {
        let sign = match polarity {
            Polarity::Supports => '+',
            Polarity::Opposes => '-',
        };
        ArgumentId(format!("{sign}{value}@{obs_index}"))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ArgumentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Serialize for ArgumentId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Argument {
    pub id: ArgumentId,
    pub polarity: Polarity,
    pub value: Literal,
    pub obs_index: u32,
    pub action: ActionId,
    pub kind: EmotionKind,
}

impl Argument {
    pub fn new(
        polarity: Polarity,
        value: Literal,
        obs_index: u32,
        action: ActionId,
        kind: EmotionKind,
    ) -> Self {
        Argument {
            id: ArgumentId::canonical(polarity, &value, obs_index),
            polarity,
            value,
            obs_index,
            action,
            kind,
        }
    }

    pub fn is_blocking(&self) -> bool {
        self.polarity == Polarity::Opposes
    }
}

/// The value an emotion of `kind` points to when the action brings about
/// `consequence`: joy is about the consequence itself, distress about the
/// literal the consequence destroyed.
pub fn candidate_value(kind: EmotionKind, consequence: &Literal) -> Literal {
    match kind {
        EmotionKind::Joy => consequence.clone(),
        EmotionKind::Distress => consequence.complement(),
    }
}

/// Arguments contributed by one observation, in id order.
pub fn arguments_for(rules: &BTreeSet<BackgroundRule>, observation: &Observation) -> Vec<Argument> {
    let o = observation;
    let from_rules = |polarity: Polarity, kind: EmotionKind| -> Vec<Argument> {
        let mut out: BTreeMap<ArgumentId, Argument> = BTreeMap::new();
        for rule in rules.iter().filter(|r| r.action == o.action) {
            let arg = Argument::new(
                polarity,
                candidate_value(kind, &rule.consequence),
                o.index,
                o.action.clone(),
                kind,
            );
            out.insert(arg.id.clone(), arg);
        }
        out.into_values().collect()
    };
    match &o.expression {
        Expression::Complete(kind, v) => vec![Argument::new(
            Polarity::Supports,
            v.clone(),
            o.index,
            o.action.clone(),
            *kind,
        )],
        Expression::Incomplete(kind) => from_rules(Polarity::Supports, *kind),
        Expression::Absent(kind) => from_rules(Polarity::Opposes, *kind),
    }
}

/// All arguments derivable from `history`, keyed by id.
pub fn build_arguments(
    rules: &BTreeSet<BackgroundRule>,
    history: &ObservationHistory,
) -> BTreeMap<ArgumentId, Argument> {
    history
        .iter()
        .flat_map(|o| arguments_for(rules, o))
        .map(|a| (a.id.clone(), a))
        .collect()
}

/// A note for an observation that finds no background rule to work with.
pub fn unmatched_note(
    rules: &BTreeSet<BackgroundRule>,
    observation: &Observation,
) -> Option<String> {
    match observation.expression {
        Expression::Complete(..) => None,
        _ if rules.iter().any(|r| r.action == observation.action) => None,
        _ => Some(format!(
            "observation {}: no background rule for action `{}`; no arguments built",
            observation.index, observation.action
        )),
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::model::tests::{action, agent, lit, sid};
    use proptest::prelude::*;

    pub(crate) fn coffee_rules() -> BTreeSet<BackgroundRule> {
        BTreeSet::from([
            BackgroundRule::new(action("drop_full"), lit("~cup_intact")),
            BackgroundRule::new(action("drop_full"), lit("~have_coffee")),
            BackgroundRule::new(action("drop_empty"), lit("~cup_intact")),
        ])
    }

    pub(crate) fn coffee_history() -> ObservationHistory {
        ObservationHistory::from_observations([
            Observation {
                index: 1,
                state: sid("s1"),
                expresser: agent("user"),
                action: action("drop_full"),
                expression: Expression::Incomplete(EmotionKind::Distress),
            },
            Observation {
                index: 2,
                state: sid("s3"),
                expresser: agent("user"),
                action: action("drop_empty"),
                expression: Expression::Absent(EmotionKind::Distress),
            },
        ])
        .unwrap()
    }

    #[test]
    fn candidate_values() {
        assert_eq!(
            candidate_value(EmotionKind::Joy, &lit("have_ice_cream")),
            lit("have_ice_cream")
        );
        assert_eq!(
            candidate_value(EmotionKind::Distress, &lit("~cup_intact")),
            lit("cup_intact")
        );
        let v = lit("x");
        assert_eq!(
            candidate_value(EmotionKind::Joy, &v)
                .complement()
                .complement(),
            v
        );
    }

    #[test]
    fn coffee_arguments() {
        let args = build_arguments(&coffee_rules(), &coffee_history());
        let ids: Vec<_> = args.keys().map(|k| k.as_str()).collect();
        assert_eq!(ids, ["+cup_intact@1", "+have_coffee@1", "-cup_intact@2"]);
        let b1 = &args[&ArgumentId::new("-cup_intact@2")];
        assert_eq!(b1.polarity, Polarity::Opposes);
        assert_eq!(b1.value, lit("cup_intact"));
        assert_eq!(b1.action, action("drop_empty"));
    }

    #[test]
    fn empty_history() {
        assert!(build_arguments(&coffee_rules(), &ObservationHistory::new()).is_empty());
    }

    #[test]
    fn complete_ignores_rules() {
        let h = ObservationHistory::from_observations([Observation {
            index: 1,
            state: sid("s1"),
            expresser: agent("user"),
            action: action("drop_full"),
            expression: Expression::Complete(EmotionKind::Distress, lit("have_coffee")),
        }])
        .unwrap();
        for rules in [BTreeSet::new(), coffee_rules()] {
            let args = build_arguments(&rules, &h);
            assert_eq!(args.len(), 1);
            let a = args.values().next().unwrap();
            assert_eq!(a.polarity, Polarity::Supports);
            assert_eq!(a.value, lit("have_coffee"));
        }
    }

    #[test]
    fn unmatched_action_yields_note() {
        let o = Observation {
            index: 4,
            state: sid("s1"),
            expresser: agent("user"),
            action: action("spill"),
            expression: Expression::Incomplete(EmotionKind::Joy),
        };
        assert!(arguments_for(&coffee_rules(), &o).is_empty());
        assert!(unmatched_note(&coffee_rules(), &o)
            .unwrap()
            .contains("spill"));
    }

    #[test]
    fn duplicate_consequences_collapse() {
        // Two rules, same candidate value.
        let rules = BTreeSet::from([
            BackgroundRule::new(action("a"), lit("~p")),
            BackgroundRule::new(action("a"), lit("~p")),
        ]);
        let o = Observation {
            index: 1,
            state: sid("s"),
            expresser: agent("e"),
            action: action("a"),
            expression: Expression::Incomplete(EmotionKind::Distress),
        };
        assert_eq!(arguments_for(&rules, &o).len(), 1);
    }

    #[test]
    fn history_rejects_bad_indices() {
        let mut h = coffee_history();
        let mut o = h.iter().next().unwrap().clone();
        o.index = 2;
        assert_eq!(
            h.push(o.clone()),
            Err(HistoryError::NonIncreasing { last: 2, new: 2 })
        );
        o.index = 0;
        assert_eq!(
            ObservationHistory::new().push(o),
            Err(HistoryError::ZeroIndex)
        );
    }

    pub(crate) fn arb_history(
    ) -> impl Strategy<Value = (BTreeSet<BackgroundRule>, Vec<Observation>)> {
        let literal = (0..3usize, any::<bool>()).prop_map(|(j, pos)| Literal {
            atom: crate::model::Atom::new(format!("p{j}")).unwrap(),
            positive: pos,
        });
        let kind = prop_oneof![Just(EmotionKind::Joy), Just(EmotionKind::Distress)];
        let expression = prop_oneof![
            (kind.clone(), literal.clone()).prop_map(|(k, v)| Expression::Complete(k, v)),
            kind.clone().prop_map(Expression::Incomplete),
            kind.prop_map(Expression::Absent),
        ];
        let rules = proptest::collection::btree_set(
            (0..3usize, literal)
                .prop_map(|(a, l)| BackgroundRule::new(action(&format!("a{a}")), l)),
            0..6,
        );
        let obs =
            proptest::collection::vec((1u32..3, 0..3usize, expression), 0..12).prop_map(|raw| {
                let mut index = 0;
                raw.into_iter()
                    .map(|(step, a, expression)| {
                        index += step;
                        Observation {
                            index,
                            state: sid("s0"),
                            expresser: agent("e"),
                            action: action(&format!("a{a}")),
                            expression,
                        }
                    })
                    .collect()
            });
        (rules, obs)
    }

    proptest! {
        #[test]
        fn construction_is_monotone((rules, obs) in arb_history()) {
            let mut h = ObservationHistory::new();
            let mut previous = build_arguments(&rules, &h);
            for o in obs {
                h.push(o).unwrap();
                let next = build_arguments(&rules, &h);
                prop_assert!(previous.keys().all(|k| next.contains_key(k)));
                previous = next;
            }
        }

        #[test]
        fn per_observation_shape((rules, obs) in arb_history()) {
            for o in &obs {
                let args = arguments_for(&rules, o);
                for a in &args {
                    prop_assert_eq!(a.obs_index, o.index);
                    prop_assert_eq!(&a.action, &o.action);
                    prop_assert_eq!(a.kind, o.expression.kind());
                    let expect_blocking = matches!(o.expression, Expression::Absent(_));
                    prop_assert_eq!(a.is_blocking(), expect_blocking);
                }
            }
        }
    }
}
