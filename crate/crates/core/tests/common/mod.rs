//! Random generators shared by the integration suites.
#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

use valinfer::argumentation::ArgumentationFramework;
use valinfer::emotions::EmotionKind;
use valinfer::model::{ActionId, AgentId, Atom, Literal, State, StateId, WorldModel};
use valinfer::observer::{ArgumentId, BackgroundRule, Expression, Observation};
use valinfer::scenario::{Scenario, ScriptedEvent, ScriptedExpression};

pub fn atom(i: usize) -> Atom {
    Atom::new(format!("p{i}")).unwrap()
}

pub fn state(i: usize) -> StateId {
    StateId::new(format!("s{i}")).unwrap()
}

pub fn action(i: usize) -> ActionId {
    ActionId::new(format!("a{i}")).unwrap()
}

pub fn agent(i: usize) -> AgentId {
    AgentId::new(format!("g{i}")).unwrap()
}

pub fn literal(rng: &mut StdRng, atoms: usize) -> Literal {
    Literal {
        atom: atom(rng.gen_range(0..atoms)),
        positive: rng.gen_bool(0.5),
    }
}

pub fn kind(rng: &mut StdRng) -> EmotionKind {
    *EmotionKind::ALL.choose(rng).unwrap()
}

/// A framework on `a0..a{n-1}`, `n <= max`, with edge density drawn uniformly.
pub fn random_af(rng: &mut StdRng, max: usize) -> ArgumentationFramework {
    let n = rng.gen_range(0..=max);
    let density: f64 = rng.gen_range(0.0..=1.0);
    let ids: Vec<ArgumentId> = (0..n).map(|i| ArgumentId::new(format!("a{i}"))).collect();
    let mut attacks = Vec::new();
    for a in &ids {
        for b in &ids {
            if rng.gen_bool(density) {
                attacks.push((a.clone(), b.clone()));
            }
        }
    }
    ArgumentationFramework::new(ids.clone(), attacks).unwrap()
}

pub fn random_expression(rng: &mut StdRng, atoms: usize) -> Expression {
    match rng.gen_range(0..3) {
        0 => Expression::Complete(kind(rng), literal(rng, atoms)),
        1 => Expression::Incomplete(kind(rng)),
        _ => Expression::Absent(kind(rng)),
    }
}

/// Background rules and an observation history by agent `g1`: at most 20
/// observations, 4 atoms and 6 rules. Actions are drawn from one more than
/// the rules use so some observations match no rule.
pub fn random_history(rng: &mut StdRng) -> (BTreeSet<BackgroundRule>, Vec<Observation>) {
    let atoms = rng.gen_range(1..=4);
    let actions = rng.gen_range(1..=3);
    let rules = (0..rng.gen_range(0..=6))
        .map(|_| BackgroundRule::new(action(rng.gen_range(0..actions)), literal(rng, atoms)))
        .collect();
    let mut index = 0;
    let observations = (0..rng.gen_range(0..=20))
        .map(|_| {
            index += rng.gen_range(1..=3);
            Observation {
                index,
                state: state(rng.gen_range(0..4)),
                expresser: agent(1),
                action: action(rng.gen_range(0..=actions)),
                expression: random_expression(rng, atoms),
            }
        })
        .collect();
    (rules, observations)
}

/// A model with total valuations over `atoms` atoms.
pub fn random_model(
    rng: &mut StdRng,
    states: usize,
    atoms: usize,
    agents: usize,
    actions: usize,
) -> WorldModel {
    let mut m = WorldModel::new();
    m.atoms.extend((0..atoms).map(atom));
    m.agents.extend((0..agents).map(agent));
    m.actions.extend((0..actions).map(action));
    for s in 0..states {
        m.add_state(State::new(
            state(s),
            (0..atoms).map(|a| (atom(a), rng.gen_bool(0.5))),
        ))
        .unwrap();
    }
    if states > 0 && actions > 0 {
        for _ in 0..rng.gen_range(0..=2 * states) {
            m.add_transition(
                state(rng.gen_range(0..states)),
                action(rng.gen_range(0..actions)),
                state(rng.gen_range(0..states)),
            );
        }
    }
    for g in 0..agents {
        if rng.gen_bool(0.4) {
            m.set_identity_epistemic(agent(g));
        } else {
            m.epistemic.insert(agent(g), BTreeSet::new());
            if states > 0 {
                for _ in 0..rng.gen_range(0..=2 * states) {
                    m.add_belief_edge(
                        agent(g),
                        state(rng.gen_range(0..states)),
                        state(rng.gen_range(0..states)),
                    );
                }
            }
        }
        if states > 0 && atoms > 0 {
            if rng.gen_bool(0.3) {
                let values: Vec<Literal> = (0..rng.gen_range(1..=2))
                    .map(|_| literal(rng, atoms))
                    .collect();
                for s in 0..states {
                    for v in &values {
                        m.add_value(agent(g), state(s), v.clone());
                    }
                }
            } else {
                for _ in 0..rng.gen_range(0..=states) {
                    m.add_value(
                        agent(g),
                        state(rng.gen_range(0..states)),
                        literal(rng, atoms),
                    );
                }
            }
        }
    }
    m
}

/// A scenario that passes validation.
pub fn random_scenario(rng: &mut StdRng) -> Scenario {
    let states = rng.gen_range(1..=6);
    let atoms = rng.gen_range(1..=4);
    let agents = rng.gen_range(2..=3);
    let actions = rng.gen_range(1..=3);
    let model = random_model(rng, states, atoms, agents, actions);
    let rules = (0..rng.gen_range(0..=6))
        .map(|_| BackgroundRule::new(action(rng.gen_range(0..actions)), literal(rng, atoms)))
        .collect();
    let mut index = 0;
    let script = (0..rng.gen_range(0..=8))
        .map(|_| {
            index += rng.gen_range(1..=5);
            let expression = match rng.gen_range(0..5) {
                0 => ScriptedExpression::Auto(None),
                1 => ScriptedExpression::Auto(Some(kind(rng))),
                _ => ScriptedExpression::Given(random_expression(rng, atoms)),
            };
            ScriptedEvent {
                index,
                state: state(rng.gen_range(0..states)),
                action: action(rng.gen_range(0..actions)),
                expression,
            }
        })
        .collect();
    let mut options = std::collections::BTreeMap::new();
    if rng.gen_bool(0.5) {
        let v = if rng.gen_bool(0.5) { "full" } else { "partial" };
        options.insert("disclose".to_string(), v.to_string());
    }
    if rng.gen_bool(0.3) {
        options.insert("expect".to_string(), kind(rng).to_string());
    }
    Scenario {
        model,
        observer: agent(0),
        expresser: agent(1),
        rules,
        script,
        options,
    }
}

/// `len` random bytes biased toward the scenario alphabet.
pub fn random_bytes(rng: &mut StdRng, len: usize) -> Vec<u8> {
    const ALPHABET: &[u8] = b"agents:atoms actions state trans epist val obs rule observer expresser \
                              s0 s1 p0 ~ = 0 1 , @ * -> => ? ( ) \n\n# express=auto none(joy) distress?";
    (0..len)
        .map(|_| {
            if rng.gen_bool(0.5) {
                ALPHABET[rng.gen_range(0..ALPHABET.len())]
            } else {
                rng.gen()
            }
        })
        .collect()
}

/// `base` with a few random byte substitutions, insertions and deletions.
pub fn mutate(rng: &mut StdRng, base: &[u8]) -> Vec<u8> {
    let mut bytes = base.to_vec();
    for _ in 0..rng.gen_range(1..=4) {
        let at = rng.gen_range(0..=bytes.len());
        match rng.gen_range(0..3) {
            0 if at < bytes.len() => bytes[at] = rng.gen(),
            1 => bytes.insert(at, rng.gen()),
            _ if at < bytes.len() => {
                bytes.remove(at);
            }
            _ => {}
        }
    }
    bytes
}
