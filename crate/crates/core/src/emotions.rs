//! Well-being emotions as state properties.
//!
//! Joy about action `a` and value `v` holds when the agent believes `v` is
//! true now and was false before `a`, and holds `v` as a value. Distress is
//! the mirror image: the valued literal was true before `a` and is false now.
//! An incomplete emotion leaves the value open and holds when some literal of
//! the model witnesses the complete one.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::model::{eval, ActionId, AgentId, Formula, Literal, ModelError, StateId, WorldModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EmotionKind {
    Joy,
    Distress,
}

impl EmotionKind {
    pub const ALL: [EmotionKind; 2] = [EmotionKind::Joy, EmotionKind::Distress];

    pub fn name(self) -> &'static str {
        match self {
            EmotionKind::Joy => "joy",
            EmotionKind::Distress => "distress",
        }
    }
}

impl fmt::Display for EmotionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EmotionKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "joy" => Ok(EmotionKind::Joy),
            "distress" => Ok(EmotionKind::Distress),
            other => Err(format!("unknown emotion kind `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompleteEmotion {
    pub agent: AgentId,
    pub kind: EmotionKind,
    pub action: ActionId,
    pub value: Literal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncompleteEmotion {
    pub agent: AgentId,
    pub kind: EmotionKind,
    pub action: ActionId,
}

impl IncompleteEmotion {
    pub fn with_value(&self, value: Literal) -> CompleteEmotion {
        CompleteEmotion {
            agent: self.agent.clone(),
            kind: self.kind,
            action: self.action.clone(),
            value,
        }
    }
}

impl CompleteEmotion {
    /// The defining formula of this emotion.
    pub fn formula(&self) -> Formula {
        let (now, before) = match self.kind {
            EmotionKind::Joy => (self.value.clone(), self.value.complement()),
            EmotionKind::Distress => (self.value.complement(), self.value.clone()),
        };
        Formula::and(
            Formula::believes(
                self.agent.clone(),
                Formula::and(
                    Formula::Lit(now),
                    Formula::before(self.action.clone(), Formula::Lit(before)),
                ),
            ),
            Formula::HasValue(self.agent.clone(), self.value.clone()),
        )
    }
}

pub fn holds_complete(
    model: &WorldModel,
    state: &StateId,
    emotion: &CompleteEmotion,
) -> Result<bool, ModelError> {
    eval(model, state, &emotion.formula())
}

pub fn holds_incomplete(
    model: &WorldModel,
    state: &StateId,
    emotion: &IncompleteEmotion,
) -> Result<bool, ModelError> {
    check(model, state, emotion)?;
    for v in model.literals() {
        if holds_complete(model, state, &emotion.with_value(v))? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Every literal that makes the complete emotion hold.
pub fn witnesses(
    model: &WorldModel,
    state: &StateId,
    emotion: &IncompleteEmotion,
) -> Result<BTreeSet<Literal>, ModelError> {
    check(model, state, emotion)?;
    let mut out = BTreeSet::new();
    for v in model.literals() {
        if holds_complete(model, state, &emotion.with_value(v.clone()))? {
            out.insert(v);
        }
    }
    Ok(out)
}

// The literal scan is empty when there are no atoms, so names are checked up front.
fn check(
    model: &WorldModel,
    state: &StateId,
    emotion: &IncompleteEmotion,
) -> Result<(), ModelError> {
    model.check_state(state)?;
    model.check_agent(&emotion.agent)?;
    model.check_action(&emotion.action)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::tests::{action, agent, atom, coffee, lit, sid};
    use crate::model::State;
    use proptest::prelude::*;

    fn distress(action_name: &str) -> IncompleteEmotion {
        IncompleteEmotion {
            agent: agent("user"),
            kind: EmotionKind::Distress,
            action: action(action_name),
        }
    }

    #[test]
    fn coffee_distress_complete() {
        let m = coffee();
        let e = distress("drop_full");
        assert!(holds_complete(&m, &sid("s1"), &e.with_value(lit("have_coffee"))).unwrap());
        assert!(!holds_complete(&m, &sid("s1"), &e.with_value(lit("cup_intact"))).unwrap());
    }

    #[test]
    fn coffee_distress_incomplete() {
        let m = coffee();
        assert!(holds_incomplete(&m, &sid("s1"), &distress("drop_full")).unwrap());
        assert!(!holds_incomplete(&m, &sid("s3"), &distress("drop_empty")).unwrap());
        assert_eq!(
            witnesses(&m, &sid("s1"), &distress("drop_full")).unwrap(),
            BTreeSet::from([lit("have_coffee")])
        );
        assert!(witnesses(&m, &sid("s3"), &distress("drop_empty"))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn joy_is_the_mirror() {
        let mut m = coffee();
        // Refilling s1 -> s0 makes the user joyful about the coffee.
        m.actions.insert(action("refill"));
        m.add_transition(sid("s1"), action("refill"), sid("s0"));
        let joy = IncompleteEmotion {
            agent: agent("user"),
            kind: EmotionKind::Joy,
            action: action("refill"),
        };
        assert_eq!(
            witnesses(&m, &sid("s0"), &joy).unwrap(),
            BTreeSet::from([lit("have_coffee")])
        );
        assert!(!holds_incomplete(
            &m,
            &sid("s0"),
            &IncompleteEmotion {
                kind: EmotionKind::Distress,
                ..joy
            }
        )
        .unwrap());
    }

    #[test]
    fn no_values_no_emotion() {
        let mut m = WorldModel::new();
        m.agents.insert(agent("user"));
        m.atoms.insert(atom("p"));
        m.actions.insert(action("a"));
        m.add_state(State::new(sid("s0"), [(atom("p"), true)]))
            .unwrap();
        m.add_state(State::new(sid("s1"), [(atom("p"), false)]))
            .unwrap();
        m.add_transition(sid("s0"), action("a"), sid("s1"));
        m.add_transition(sid("s1"), action("a"), sid("s0"));
        m.set_identity_epistemic(agent("user"));
        for kind in EmotionKind::ALL {
            for s in ["s0", "s1"] {
                let e = IncompleteEmotion {
                    agent: agent("user"),
                    kind,
                    action: action("a"),
                };
                assert!(!holds_incomplete(&m, &sid(s), &e).unwrap());
                for v in m.literals() {
                    assert!(!holds_complete(&m, &sid(s), &e.with_value(v)).unwrap());
                }
            }
        }
    }

    #[test]
    fn undeclared_names() {
        let m = coffee();
        let e = IncompleteEmotion {
            agent: agent("user"),
            kind: EmotionKind::Joy,
            action: action("spill"),
        };
        assert_eq!(
            holds_incomplete(&m, &sid("s1"), &e),
            Err(ModelError::UndeclaredAction("spill".into()))
        );
    }

    fn arb_model() -> impl Strategy<Value = (WorldModel, bool)> {
        (1usize..=6, 1usize..=3, any::<bool>()).prop_flat_map(|(n, k, reflexive)| {
            (
                proptest::collection::vec(proptest::collection::vec(any::<bool>(), k), n),
                proptest::collection::vec((0..n, 0..2usize, 0..n), 0..(3 * n)),
                proptest::collection::vec((0..n, 0..n), 1..(2 * n)),
                proptest::collection::vec((0..n, 0..k, any::<bool>()), 0..(3 * n)),
                Just(reflexive),
            )
                .prop_map(move |(vals, trans, epist, values, reflexive)| {
                    let mut m = WorldModel::new();
                    m.agents.insert(agent("i"));
                    m.actions.extend([action("a0"), action("a1")]);
                    for j in 0..k {
                        m.atoms.insert(atom(&format!("p{j}")));
                    }
                    for (s, row) in vals.iter().enumerate() {
                        m.add_state(State::new(
                            sid(&format!("s{s}")),
                            row.iter()
                                .enumerate()
                                .map(|(j, &b)| (atom(&format!("p{j}")), b)),
                        ))
                        .unwrap();
                    }
                    for (x, a, y) in trans {
                        m.add_transition(
                            sid(&format!("s{x}")),
                            action(&format!("a{a}")),
                            sid(&format!("s{y}")),
                        );
                    }
                    for (x, y) in epist {
                        m.add_belief_edge(agent("i"), sid(&format!("s{x}")), sid(&format!("s{y}")));
                    }
                    if reflexive {
                        for s in 0..n {
                            m.add_belief_edge(
                                agent("i"),
                                sid(&format!("s{s}")),
                                sid(&format!("s{s}")),
                            );
                        }
                    }
                    for (s, j, pos) in values {
                        m.add_value(
                            agent("i"),
                            sid(&format!("s{s}")),
                            Literal {
                                atom: atom(&format!("p{j}")),
                                positive: pos,
                            },
                        );
                    }
                    (m, reflexive)
                })
        })
    }

    proptest! {
        #[test]
        fn incomplete_is_disjunction((m, _) in arb_model()) {
            for s in m.states() {
                for kind in EmotionKind::ALL {
                    for a in ["a0", "a1"] {
                        let e = IncompleteEmotion { agent: agent("i"), kind, action: action(a) };
                        let holds = holds_incomplete(&m, &s.id, &e).unwrap();
                        let w = witnesses(&m, &s.id, &e).unwrap();
                        let exists = m
                            .literals()
                            .into_iter()
                            .any(|v| holds_complete(&m, &s.id, &e.with_value(v)).unwrap());
                        prop_assert_eq!(holds, !w.is_empty());
                        prop_assert_eq!(holds, exists);
                    }
                }
            }
        }

        #[test]
        fn no_complementary_witnesses((m, reflexive) in arb_model()) {
            prop_assume!(reflexive);
            for s in m.states() {
                for kind in EmotionKind::ALL {
                    for a in ["a0", "a1"] {
                        let e = IncompleteEmotion { agent: agent("i"), kind, action: action(a) };
                        let w = witnesses(&m, &s.id, &e).unwrap();
                        for v in &w {
                            prop_assert!(!w.contains(&v.complement()));
                        }
                    }
                }
            }
        }
    }
}
