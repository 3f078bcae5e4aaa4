//! Nondeterministic finite automata over token alphabets, used for SST
//! domains.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::sst::State;
use crate::verdict::{Verdict, Witness};
use crate::words::{Alphabet, Letter, Word};

#[derive(Clone, Debug)]
pub struct Nfa {
    alphabet: Alphabet,
    states: Vec<State>,
    initial: BTreeSet<State>,
    finals: BTreeSet<State>,
    edges: BTreeMap<(State, Letter), BTreeSet<State>>,
}

impl Nfa {
    pub fn new(
        alphabet: Alphabet,
        states: Vec<State>,
        initial: BTreeSet<State>,
        finals: BTreeSet<State>,
        edges: BTreeMap<(State, Letter), BTreeSet<State>>,
    ) -> Self {
        Nfa {
            alphabet,
            states,
            initial,
            finals,
            edges,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn initial(&self) -> &BTreeSet<State> {
        &self.initial
    }

    pub fn finals(&self) -> &BTreeSet<State> {
        &self.finals
    }

    pub fn edges(&self) -> &BTreeMap<(State, Letter), BTreeSet<State>> {
        &self.edges
    }

    fn step(&self, from: &BTreeSet<State>, a: &Letter) -> BTreeSet<State> {
        from.iter()
            .filter_map(|q| self.edges.get(&(q.clone(), a.clone())))
            .flatten()
            .cloned()
            .collect()
    }

    pub fn accepts(&self, word: &Word) -> bool {
        let mut current = self.initial.clone();
        for a in word {
            current = self.step(&current, a);
            if current.is_empty() {
                return false;
            }
        }
        current.iter().any(|q| self.finals.contains(q))
    }

    /// Whether the language is empty.
    pub fn is_empty(&self) -> bool {
        let mut seen: BTreeSet<State> = self.initial.clone();
        let mut queue: VecDeque<State> = self.initial.iter().cloned().collect();
        while let Some(q) = queue.pop_front() {
            if self.finals.contains(&q) {
                return false;
            }
            for a in self.alphabet.letters() {
                if let Some(next) = self.edges.get(&(q.clone(), a.clone())) {
                    for p in next {
                        if seen.insert(p.clone()) {
                            queue.push_back(p.clone());
                        }
                    }
                }
            }
        }
        true
    }
}

/// Decides `L(left) = L(right)` by determinizing both automata on the fly
/// and searching their synchronous product breadth-first. A counterexample
/// is the shortest distinguishing word, least in alphabet order among those.
pub fn nfa_equivalent(left: &Nfa, right: &Nfa) -> Result<Verdict> {
    if left.alphabet != right.alphabet {
        return Err(Error::AlphabetMismatch {
            expected: format!("{:?}", left.alphabet),
            found: format!("{:?}", right.alphabet),
        });
    }
    type Pair = (BTreeSet<State>, BTreeSet<State>);
    let start: Pair = (left.initial.clone(), right.initial.clone());
    let mut parent: HashMap<Pair, Option<(Pair, Letter)>> = HashMap::new();
    parent.insert(start.clone(), None);
    let mut queue = VecDeque::from([start]);
    while let Some(pair) = queue.pop_front() {
        let in_left = pair.0.iter().any(|q| left.finals.contains(q));
        let in_right = pair.1.iter().any(|q| right.finals.contains(q));
        if in_left != in_right {
            let mut letters = Vec::new();
            let mut cursor = &pair;
            while let Some(Some((prev, a))) = parent.get(cursor) {
                letters.push(a.clone());
                cursor = prev;
            }
            letters.reverse();
            return Ok(Verdict::Counterexample(Witness::Domain {
                word: letters.into(),
                accepted_by: if in_left { 1 } else { 2 },
                output: None,
            }));
        }
        for a in left.alphabet.letters() {
            let next = (left.step(&pair.0, a), right.step(&pair.1, a));
            if !parent.contains_key(&next) {
                parent.insert(next.clone(), Some((pair.clone(), a.clone())));
                queue.push_back(next);
            }
        }
    }
    Ok(Verdict::Holds)
}
