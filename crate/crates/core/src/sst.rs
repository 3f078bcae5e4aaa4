//! Streaming string transducers and their two-output variant.
//!
//! An [`Sst`] is a finite automaton whose transitions carry substitutions
//! over a finite set of string variables. Its output function assembles the
//! final variable contents into one word (arity 1) or into a pair of words
//! (arity 2, a biSST). Determinism is a property that can be checked, not a
//! separate type.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result, ValidationError};
use crate::nfa::Nfa;
use crate::words::{join_escaped, Alphabet, Letter, Substitution, Word};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State(Arc<str>);

impl State {
    pub fn new(name: &str) -> Self {
        State(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    /// The product state `(left,right)`.
    pub fn pair(left: &State, right: &State) -> Self {
        State::new(&format!(
            "({})",
            join_escaped(&[left.name(), right.name()], ',')
        ))
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transition {
    pub source: State,
    pub letter: Letter,
    pub target: State,
}

impl Transition {
    pub fn new(source: &State, letter: &Letter, target: &State) -> Self {
        Transition {
            source: source.clone(),
            letter: letter.clone(),
            target: target.clone(),
        }
    }
}

impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.source, self.letter, self.target)
    }
}

impl fmt::Debug for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// One word or a pair of words. Used both for output-function images (words
/// over variables) and for produced outputs (words over the output alphabet).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Output {
    Single(Word),
    Pair(Word, Word),
}

impl Output {
    pub fn arity(&self) -> usize {
        match self {
            Output::Single(_) => 1,
            Output::Pair(..) => 2,
        }
    }

    pub fn components(&self) -> Vec<&Word> {
        match self {
            Output::Single(w) => vec![w],
            Output::Pair(l, r) => vec![l, r],
        }
    }

    pub fn try_map<F>(&self, mut f: F) -> Result<Output>
    where
        F: FnMut(&Word) -> Result<Word>,
    {
        Ok(match self {
            Output::Single(w) => Output::Single(f(w)?),
            Output::Pair(l, r) => Output::Pair(f(l)?, f(r)?),
        })
    }

    /// Whether a pair has equal components; singles are trivially diagonal.
    pub fn is_diagonal(&self) -> bool {
        match self {
            Output::Single(_) => true,
            Output::Pair(l, r) => l == r,
        }
    }
}

impl fmt::Display for Output {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Output::Single(w) => write!(f, "{w}"),
            Output::Pair(l, r) => write!(f, "{l} | {r}"),
        }
    }
}

/// The raw components of a machine. [`Sst::new`] validates them.
#[derive(Clone, Debug)]
pub struct SstParts {
    pub input: Alphabet,
    pub output: Alphabet,
    pub states: Vec<State>,
    pub initial: State,
    pub finals: BTreeSet<State>,
    pub variables: Vec<Letter>,
    pub transitions: BTreeSet<Transition>,
    pub updates: BTreeMap<Transition, Substitution>,
    pub outputs: BTreeMap<State, Output>,
    pub arity: usize,
}

#[derive(Clone, Debug)]
pub struct Sst {
    parts: SstParts,
    by_source: HashMap<(State, Letter), Vec<Transition>>,
}

impl PartialEq for Sst {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = (&self.parts, &other.parts);
        a.input == b.input
            && a.output == b.output
            && a.states == b.states
            && a.initial == b.initial
            && a.finals == b.finals
            && a.variables == b.variables
            && a.transitions == b.transitions
            && a.updates == b.updates
            && a.outputs == b.outputs
            && a.arity == b.arity
    }
}

impl Eq for Sst {}

/// A run: the visited states and the letters read between them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Run {
    pub states: Vec<State>,
    pub input: Word,
}

impl Run {
    pub fn transitions(&self) -> Vec<Transition> {
        self.states
            .windows(2)
            .zip(self.input.iter())
            .map(|(w, a)| Transition::new(&w[0], a, &w[1]))
            .collect()
    }

    pub fn from_transitions(initial: &State, transitions: &[Transition]) -> Run {
        let mut states = vec![initial.clone()];
        states.extend(transitions.iter().map(|t| t.target.clone()));
        Run {
            states,
            input: transitions.iter().map(|t| t.letter.clone()).collect(),
        }
    }

    pub fn last(&self) -> &State {
        self.states.last().expect("a run visits at least one state")
    }
}

impl Sst {
    /// Builds and validates a machine.
    pub fn new(parts: SstParts) -> Result<Self> {
        let sst = Self::from_parts_unchecked(parts);
        sst.validate()?;
        Ok(sst)
    }

    /// Builds a machine without checking its invariants. Useful for
    /// reporting problems with [`Sst::validate`].
    pub fn from_parts_unchecked(parts: SstParts) -> Self {
        let mut by_source: HashMap<(State, Letter), Vec<Transition>> = HashMap::new();
        for t in &parts.transitions {
            by_source
                .entry((t.source.clone(), t.letter.clone()))
                .or_default()
                .push(t.clone());
        }
        Sst { parts, by_source }
    }

    pub fn parts(&self) -> &SstParts {
        &self.parts
    }

    pub fn into_parts(self) -> SstParts {
        self.parts
    }

    pub fn input(&self) -> &Alphabet {
        &self.parts.input
    }

    pub fn output(&self) -> &Alphabet {
        &self.parts.output
    }

    pub fn states(&self) -> &[State] {
        &self.parts.states
    }

    pub fn initial(&self) -> &State {
        &self.parts.initial
    }

    pub fn finals(&self) -> &BTreeSet<State> {
        &self.parts.finals
    }

    pub fn variables(&self) -> &[Letter] {
        &self.parts.variables
    }

    pub fn transitions(&self) -> &BTreeSet<Transition> {
        &self.parts.transitions
    }

    pub fn update(&self, t: &Transition) -> Option<&Substitution> {
        self.parts.updates.get(t)
    }

    pub fn output_of(&self, q: &State) -> Option<&Output> {
        self.parts.outputs.get(q)
    }

    pub fn outputs(&self) -> &BTreeMap<State, Output> {
        &self.parts.outputs
    }

    pub fn arity(&self) -> usize {
        self.parts.arity
    }

    /// Final states on which the output function is defined; only these
    /// accept.
    pub fn accepting_states(&self) -> impl Iterator<Item = &State> {
        self.parts
            .finals
            .iter()
            .filter(|q| self.parts.outputs.contains_key(*q))
    }

    pub fn is_accepting(&self, q: &State) -> bool {
        self.parts.finals.contains(q) && self.parts.outputs.contains_key(q)
    }

    pub fn successors(&self, q: &State, a: &Letter) -> &[Transition] {
        self.by_source
            .get(&(q.clone(), a.clone()))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn is_deterministic(&self) -> bool {
        self.by_source.values().all(|ts| ts.len() <= 1)
    }

    /// Checks the structural invariants and reports the first violation.
    pub fn validate(&self) -> Result<()> {
        let p = &self.parts;
        let declared: BTreeSet<&State> = p.states.iter().collect();
        if declared.len() != p.states.len() {
            let dup = p
                .states
                .iter()
                .enumerate()
                .find(|(i, s)| p.states[..*i].contains(s))
                .map(|(_, s)| s.to_string())
                .unwrap_or_default();
            return Err(Error::DuplicateToken {
                token: dup,
                context: "state list".into(),
            });
        }
        let check_state = |q: &State| -> Result<()> {
            if declared.contains(q) {
                Ok(())
            } else {
                Err(ValidationError::DanglingState(q.to_string()).into())
            }
        };
        check_state(&p.initial)?;
        for q in &p.finals {
            check_state(q)?;
        }
        let vars: BTreeSet<&Letter> = p.variables.iter().collect();
        if vars.len() != p.variables.len() {
            return Err(Error::DuplicateToken {
                token: p
                    .variables
                    .iter()
                    .enumerate()
                    .find(|(i, x)| p.variables[..*i].contains(x))
                    .map(|(_, x)| x.to_string())
                    .unwrap_or_default(),
                context: "variable list".into(),
            });
        }
        for x in &p.variables {
            if p.output.contains(x) {
                return Err(ValidationError::VariableLetterClash(x.to_string()).into());
            }
        }
        for t in &p.transitions {
            check_state(&t.source)?;
            check_state(&t.target)?;
            if !p.input.contains(&t.letter) {
                return Err(ValidationError::ForeignLetter {
                    letter: t.letter.to_string(),
                    alphabet: "input".into(),
                }
                .into());
            }
            let update = p
                .updates
                .get(t)
                .ok_or_else(|| ValidationError::RhoGap(t.to_string()))?;
            for x in &p.variables {
                if update.image(x).is_none() {
                    return Err(ValidationError::MissingAssignment {
                        transition: t.to_string(),
                        variable: x.to_string(),
                    }
                    .into());
                }
            }
            for (x, image) in update.iter() {
                if !vars.contains(x) {
                    return Err(ValidationError::UnknownVariable {
                        variable: x.to_string(),
                        context: format!("update of {t}"),
                    }
                    .into());
                }
                for l in image {
                    if !vars.contains(l) && !p.output.contains(l) {
                        return Err(ValidationError::UnknownVariable {
                            variable: l.to_string(),
                            context: format!("update of {t}"),
                        }
                        .into());
                    }
                }
            }
        }
        if let Some(t) = p.updates.keys().find(|t| !p.transitions.contains(*t)) {
            return Err(ValidationError::UpdateWithoutTransition(t.to_string()).into());
        }
        if p.arity != 1 && p.arity != 2 {
            return Err(Error::Precondition(format!(
                "unsupported arity {}",
                p.arity
            )));
        }
        for (q, out) in &p.outputs {
            if !p.finals.contains(q) {
                return Err(ValidationError::OutputOnNonFinal(q.to_string()).into());
            }
            if out.arity() != p.arity {
                return Err(ValidationError::ArityMismatch {
                    state: q.to_string(),
                    expected: p.arity,
                    found: out.arity(),
                }
                .into());
            }
            for w in out.components() {
                if let Some(l) = w.iter().find(|l| !vars.contains(l)) {
                    return Err(ValidationError::UnknownVariable {
                        variable: l.to_string(),
                        context: format!("output of `{q}`"),
                    }
                    .into());
                }
            }
        }
        Ok(())
    }

    fn identity(&self) -> Substitution {
        Substitution::identity(&self.parts.variables)
    }

    fn erasing(&self) -> Substitution {
        Substitution::erasing(&self.parts.variables)
    }

    fn rho(&self, t: &Transition) -> Result<&Substitution> {
        self.parts
            .updates
            .get(t)
            .ok_or_else(|| ValidationError::RhoGap(t.to_string()).into())
    }

    /// The substitution induced by a run, composed left to right:
    /// `σ_{r,i} = σ_{r,i-1} · ρ(t_i)`. The empty run induces the identity.
    pub fn run_substitution(&self, run: &Run) -> Result<Substitution> {
        let mut sigma = self.identity();
        for t in run.transitions() {
            if !self.parts.transitions.contains(&t) {
                return Err(Error::Precondition(format!("{t} is not a transition")));
            }
            sigma = sigma.compose(self.rho(&t)?)?;
        }
        Ok(sigma)
    }

    /// Output of a run if it is accepting: `σ_ε · σ_r · F(q_n)`.
    pub fn run_output(&self, run: &Run) -> Result<Option<Output>> {
        let last = run.last();
        if run.states.first() != Some(&self.parts.initial) || !self.is_accepting(last) {
            return Ok(None);
        }
        let values = self.erasing().compose(&self.run_substitution(run)?)?;
        let out = &self.parts.outputs[last];
        Ok(Some(out.try_map(|w| values.apply(w))?))
    }

    /// All outputs of accepting runs on `word`. Runs are enumerated
    /// explicitly, so this is exponential for nondeterministic machines.
    pub fn evaluate(&self, word: &Word) -> BTreeSet<Output> {
        let mut results = BTreeSet::new();
        self.explore(
            &self.parts.initial,
            self.erasing(),
            word.letters(),
            &mut results,
        );
        results
    }

    fn explore(
        &self,
        q: &State,
        values: Substitution,
        rest: &[Letter],
        results: &mut BTreeSet<Output>,
    ) {
        let Some((a, tail)) = rest.split_first() else {
            if self.is_accepting(q) {
                let out = self.parts.outputs[q]
                    .try_map(|w| values.apply(w))
                    .expect("validated outputs use declared variables");
                results.insert(out);
            }
            return;
        };
        for t in self.successors(q, a) {
            let next = values
                .compose(&self.parts.updates[t])
                .expect("validated updates are total");
            self.explore(&t.target, next, tail, results);
        }
    }

    /// Accepting runs on `word`, in transition order.
    pub fn accepting_runs(&self, word: &Word) -> Vec<Run> {
        let mut runs = Vec::new();
        let mut stack = vec![vec![self.parts.initial.clone()]];
        while let Some(states) = stack.pop() {
            let i = states.len() - 1;
            let q = &states[i];
            if i == word.len() {
                if self.is_accepting(q) {
                    runs.push(Run {
                        states,
                        input: word.clone(),
                    });
                }
                continue;
            }
            for t in self.successors(q, &word.letters()[i]).iter().rev() {
                let mut next = states.clone();
                next.push(t.target.clone());
                stack.push(next);
            }
        }
        runs
    }

    /// The first transition whose update mentions some variable twice,
    /// counted across all right-hand sides.
    pub fn copyless_violation(&self) -> Option<&Transition> {
        self.parts.transitions.iter().find(|t| {
            let mut seen = BTreeSet::new();
            self.parts.updates[*t]
                .iter()
                .flat_map(|(_, w)| w.iter())
                .filter(|l| self.parts.variables.contains(l))
                .any(|l| !seen.insert(l))
        })
    }

    pub fn is_copyless(&self) -> bool {
        self.copyless_violation().is_none()
    }

    /// An automaton over the input alphabet accepting exactly the domain.
    pub fn domain_automaton(&self) -> Nfa {
        let mut edges: BTreeMap<(State, Letter), BTreeSet<State>> = BTreeMap::new();
        for t in &self.parts.transitions {
            edges
                .entry((t.source.clone(), t.letter.clone()))
                .or_default()
                .insert(t.target.clone());
        }
        Nfa::new(
            self.parts.input.clone(),
            self.parts.states.clone(),
            [self.parts.initial.clone()].into(),
            self.accepting_states().cloned().collect(),
            edges,
        )
    }
}

fn tag_word(word: &Word, vars: &BTreeSet<Letter>, side: usize, output: &Alphabet) -> Word {
    word.iter()
        .map(|l| {
            if vars.contains(l) {
                side_tagged(l, side)
            } else {
                l.retagged(output.id())
            }
        })
        .collect()
}

/// The copy of variable `x` used for side 1 or 2 of a product: `X` becomes
/// `X@1` or `X@2` in the same alphabet.
pub fn side_tagged(x: &Letter, side: usize) -> Letter {
    Letter::new(x.alphabet(), &format!("{}@{side}", x.token()))
}

fn union_output(left: &Alphabet, right: &Alphabet) -> Result<Alphabet> {
    if left == right {
        return Ok(left.clone());
    }
    let mut tokens: Vec<&str> = left.letters().iter().map(Letter::token).collect();
    for l in right.letters() {
        if left.letter(l.token()).is_none() {
            tokens.push(l.token());
        }
    }
    Alphabet::new(left.id(), tokens)
}

/// The synchronized product: a biSST running `left` and `right` in lockstep
/// and outputting the pair of their outputs. Variables of each side are
/// kept apart by tagging their alphabet with the side number.
pub fn product(left: &Sst, right: &Sst) -> Result<Sst> {
    if left.arity() != 1 || right.arity() != 1 {
        return Err(Error::Precondition(
            "product needs two arity-1 machines".into(),
        ));
    }
    if left.input() != right.input() {
        return Err(Error::AlphabetMismatch {
            expected: format!("{:?}", left.input()),
            found: format!("{:?}", right.input()),
        });
    }
    let output = union_output(left.output(), right.output())?;
    let vars1: BTreeSet<Letter> = left.variables().iter().cloned().collect();
    let vars2: BTreeSet<Letter> = right.variables().iter().cloned().collect();
    let mut variables: Vec<Letter> = left.variables().iter().map(|x| side_tagged(x, 1)).collect();
    variables.extend(right.variables().iter().map(|x| side_tagged(x, 2)));

    let mut states = Vec::new();
    for q1 in left.states() {
        for q2 in right.states() {
            states.push(State::pair(q1, q2));
        }
    }
    let mut finals = BTreeSet::new();
    let mut outputs = BTreeMap::new();
    for q1 in left.finals() {
        for q2 in right.finals() {
            let q = State::pair(q1, q2);
            finals.insert(q.clone());
            if let (Some(Output::Single(o1)), Some(Output::Single(o2))) =
                (left.output_of(q1), right.output_of(q2))
            {
                outputs.insert(
                    q,
                    Output::Pair(
                        tag_word(o1, &vars1, 1, &output),
                        tag_word(o2, &vars2, 2, &output),
                    ),
                );
            }
        }
    }
    let mut transitions = BTreeSet::new();
    let mut updates = BTreeMap::new();
    for t1 in left.transitions() {
        for t2 in right.transitions() {
            if t1.letter != t2.letter {
                continue;
            }
            let t = Transition {
                source: State::pair(&t1.source, &t2.source),
                letter: t1.letter.clone(),
                target: State::pair(&t1.target, &t2.target),
            };
            let images = left.parts.updates[t1]
                .iter()
                .map(|(x, w)| (side_tagged(x, 1), tag_word(w, &vars1, 1, &output)))
                .chain(
                    right.parts.updates[t2]
                        .iter()
                        .map(|(x, w)| (side_tagged(x, 2), tag_word(w, &vars2, 2, &output))),
                );
            updates.insert(t.clone(), Substitution::new(images));
            transitions.insert(t);
        }
    }
    Sst::new(SstParts {
        input: left.input().clone(),
        output,
        states,
        initial: State::pair(left.initial(), right.initial()),
        finals,
        variables,
        transitions,
        updates,
        outputs,
        arity: 2,
    })
}
