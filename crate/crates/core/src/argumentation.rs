//! Abstract argumentation frameworks and grounded semantics.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::observer::{Argument, ArgumentId, Polarity};

/// Subset enumeration refuses frameworks larger than this by default.
pub const DEFAULT_ENUMERATION_CAP: usize = 15;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameworkError {
    #[error("duplicate argument `{0}`")]
    DuplicateArgument(ArgumentId),
    #[error("attack ({0}, {1}) references an undeclared argument")]
    DanglingAttack(ArgumentId, ArgumentId),
    #[error("framework has {size} arguments; enumeration is capped at {cap}")]
    CapExceeded { size: usize, cap: usize },
}

pub type Attack = (ArgumentId, ArgumentId);

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ArgumentationFramework {
    arguments: BTreeSet<ArgumentId>,
    attacks: BTreeSet<Attack>,
    /// Blocking arguments, kept for rendering only.
    blocking: BTreeSet<ArgumentId>,
}

impl ArgumentationFramework {
    pub fn new(
        arguments: impl IntoIterator<Item = ArgumentId>,
        attacks: impl IntoIterator<Item = Attack>,
    ) -> Result<Self, FrameworkError> {
        let mut af = ArgumentationFramework::default();
        for a in arguments {
            af.add_argument(a, false)?;
        }
        for (x, y) in attacks {
            af.add_attack(x, y)?;
        }
        Ok(af)
    }

    pub fn add_argument(&mut self, id: ArgumentId, blocking: bool) -> Result<(), FrameworkError> {
        if self.arguments.contains(&id) {
            return Err(FrameworkError::DuplicateArgument(id));
        }
        if blocking {
            self.blocking.insert(id.clone());
        }
        self.arguments.insert(id);
        Ok(())
    }

    pub fn add_attack(
        &mut self,
        attacker: ArgumentId,
        target: ArgumentId,
    ) -> Result<(), FrameworkError> {
        if !self.arguments.contains(&attacker) || !self.arguments.contains(&target) {
            return Err(FrameworkError::DanglingAttack(attacker, target));
        }
        self.attacks.insert((attacker, target));
        Ok(())
    }

    pub fn arguments(&self) -> &BTreeSet<ArgumentId> {
        &self.arguments
    }

    pub fn attacks(&self) -> &BTreeSet<Attack> {
        &self.attacks
    }

    pub fn is_blocking(&self, id: &ArgumentId) -> bool {
        self.blocking.contains(id)
    }

    pub fn len(&self) -> usize {
        self.arguments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arguments.is_empty()
    }

    pub fn attackers_of<'a>(&'a self, id: &'a ArgumentId) -> impl Iterator<Item = &'a ArgumentId> {
        self.attacks
            .iter()
            .filter(move |(_, t)| t == id)
            .map(|(a, _)| a)
    }
}

/// Two ordinary arguments from the same observation that support different
/// values attack each other.
pub fn mutually_exclusive(a: &Argument, b: &Argument) -> bool {
    a.polarity == Polarity::Supports
        && b.polarity == Polarity::Supports
        && a.obs_index == b.obs_index
        && a.value != b.value
}

/// A blocking argument attacks every ordinary argument for the value it opposes.
pub fn blocks(attacker: &Argument, target: &Argument) -> bool {
    attacker.polarity == Polarity::Opposes
        && target.polarity == Polarity::Supports
        && attacker.value == target.value
}

pub fn attacks_between(a: &Argument, b: &Argument) -> bool {
    mutually_exclusive(a, b) || blocks(a, b)
}

/// Builds the value framework over `args`.
pub fn build_afv<'a>(
    args: impl IntoIterator<Item = &'a Argument>,
) -> Result<ArgumentationFramework, FrameworkError> {
    let args: Vec<&Argument> = args.into_iter().collect();
    let mut af = ArgumentationFramework::default();
    for a in &args {
        af.add_argument(a.id.clone(), a.is_blocking())?;
    }
    for a in &args {
        for b in &args {
            if attacks_between(a, b) {
                af.add_attack(a.id.clone(), b.id.clone())?;
            }
        }
    }
    Ok(af)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Label {
    In,
    Out,
    Undec,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::In => "in",
            Label::Out => "out",
            Label::Undec => "undec",
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Labelling {
    labels: BTreeMap<ArgumentId, Label>,
}

impl Labelling {
    pub fn get(&self, id: &ArgumentId) -> Option<Label> {
        self.labels.get(id).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ArgumentId, Label)> {
        self.labels.iter().map(|(k, &v)| (k, v))
    }

    pub fn with_label(&self, label: Label) -> BTreeSet<ArgumentId> {
        self.labels
            .iter()
            .filter(|(_, &l)| l == label)
            .map(|(k, _)| k.clone())
            .collect()
    }

    pub fn in_set(&self) -> BTreeSet<ArgumentId> {
        self.with_label(Label::In)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Checks totality and the In/Out/Undec conditions against `af`.
    pub fn is_legal(&self, af: &ArgumentationFramework) -> bool {
        if self.labels.len() != af.len()
            || !af.arguments().iter().all(|a| self.labels.contains_key(a))
        {
            return false;
        }
        af.arguments().iter().all(|a| {
            let attackers: Vec<Label> = af.attackers_of(a).map(|b| self.labels[b]).collect();
            match self.labels[a] {
                Label::In => attackers.iter().all(|&l| l == Label::Out),
                Label::Out => attackers.contains(&Label::In),
                Label::Undec => {
                    !attackers.contains(&Label::In) && attackers.contains(&Label::Undec)
                }
            }
        })
    }
}

/// The grounded labelling, computed by propagation: an argument goes In once
/// all its attackers are Out, and Out once some attacker is In. Whatever is
/// left unlabelled at the fixpoint is Undec.
pub fn grounded(af: &ArgumentationFramework) -> Labelling {
    let ids: Vec<&ArgumentId> = af.arguments().iter().collect();
    let index: HashMap<&ArgumentId, usize> = ids.iter().enumerate().map(|(i, a)| (*a, i)).collect();
    let n = ids.len();
    let mut targets = vec![Vec::new(); n];
    let mut pending = vec![0usize; n];
    for (a, b) in af.attacks() {
        let (i, j) = (index[a], index[b]);
        targets[i].push(j);
        pending[j] += 1;
    }

    let mut label: Vec<Option<Label>> = vec![None; n];
    let mut queue: VecDeque<usize> = (0..n).filter(|&i| pending[i] == 0).collect();
    for &i in &queue {
        label[i] = Some(Label::In);
    }
    while let Some(i) = queue.pop_front() {
        for &j in &targets[i] {
            if label[j].is_some() {
                continue;
            }
            label[j] = Some(Label::Out);
            for &k in &targets[j] {
                pending[k] -= 1;
                if pending[k] == 0 && label[k].is_none() {
                    label[k] = Some(Label::In);
                    queue.push_back(k);
                }
            }
        }
    }

    Labelling {
        labels: ids
            .into_iter()
            .zip(label)
            .map(|(id, l)| (id.clone(), l.unwrap_or(Label::Undec)))
            .collect(),
    }
}

/// Arguments defended by `set`: every attacker is attacked by some member.
pub fn defended(af: &ArgumentationFramework, set: &BTreeSet<ArgumentId>) -> BTreeSet<ArgumentId> {
    af.arguments()
        .iter()
        .filter(|a| {
            af.attackers_of(a)
                .all(|b| af.attackers_of(b).any(|c| set.contains(c)))
        })
        .cloned()
        .collect()
}

/// The grounded extension as the least fixpoint of [`defended`], iterated
/// from the empty set.
pub fn characteristic_oracle(af: &ArgumentationFramework) -> BTreeSet<ArgumentId> {
    let mut current = BTreeSet::new();
    loop {
        let next = defended(af, &current);
        if next == current {
            return current;
        }
        current = next;
    }
}

/// All complete extensions by brute force over subsets, ordered by size and
/// then lexicographically.
pub fn enumerate_complete(
    af: &ArgumentationFramework,
    cap: usize,
) -> Result<Vec<BTreeSet<ArgumentId>>, FrameworkError> {
    let n = af.len();
    if n > cap || n >= 64 {
        return Err(FrameworkError::CapExceeded { size: n, cap });
    }
    let ids: Vec<&ArgumentId> = af.arguments().iter().collect();
    let position: HashMap<&ArgumentId, usize> =
        ids.iter().enumerate().map(|(i, a)| (*a, i)).collect();
    // attackers[i]: bitmask of arguments attacking i
    let mut attackers = vec![0u64; n];
    for (a, b) in af.attacks() {
        attackers[position[b]] |= 1 << position[a];
    }
    let attacked_by = |set: u64| -> u64 {
        (0..n)
            .filter(|&i| attackers[i] & set != 0)
            .fold(0u64, |acc, i| acc | (1 << i))
    };

    let mut out = Vec::new();
    for set in 0u64..(1u64 << n) {
        let hit = attacked_by(set);
        if hit & set != 0 {
            continue;
        }
        let defended = (0..n)
            .filter(|&i| attackers[i] & !hit == 0)
            .fold(0u64, |acc, i| acc | (1 << i));
        if defended == set {
            out.push(
                (0..n)
                    .filter(|&i| set & (1 << i) != 0)
                    .map(|i| ids[i].clone())
                    .collect::<BTreeSet<_>>(),
            );
        }
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// Whether no member of `set` attacks another member.
pub fn is_conflict_free(af: &ArgumentationFramework, set: &BTreeSet<ArgumentId>) -> bool {
    af.attacks()
        .iter()
        .all(|(a, b)| !(set.contains(a) && set.contains(b)))
}
