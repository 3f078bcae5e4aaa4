//! The two reductions between SSTs and HDT0L instances, and the decision
//! pipelines for diagonality, functionality and equivalence built on them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::algebra::{decide_hdt0l_with, AlgebraicOptions, DEFAULT_MAX_STEPS};
use crate::error::{Error, Result};
use crate::hdt0l::{bounded_search, Hdt0lInstance, MorphismPair};
use crate::nfa::nfa_equivalent;
use crate::sst::{product, Output, Run, Sst, SstParts, State, Transition};
use crate::verdict::{Verdict, Witness};
use crate::words::{join_escaped, Alphabet, Letter, Morphism, Substitution, Word};

pub const DEFAULT_MAX_LEN: usize = 8;

/// Which HDT0L engine decides the reduced instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Engine {
    /// Exhaustive search over label sequences up to `max_len`.
    Bounded { max_len: usize },
    /// Ideal-chain stabilization with at most `max_steps` chain steps.
    Ideal { max_steps: usize },
}

impl Engine {
    pub fn bounded() -> Self {
        Engine::Bounded {
            max_len: DEFAULT_MAX_LEN,
        }
    }

    pub fn ideal() -> Self {
        Engine::Ideal {
            max_steps: DEFAULT_MAX_STEPS,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Engine::Bounded { .. } => "bounded",
            Engine::Ideal { .. } => "ideal",
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Engine::Bounded { max_len } => write!(f, "bounded (max-len {max_len})"),
            Engine::Ideal { max_steps } => write!(f, "ideal (max-steps {max_steps})"),
        }
    }
}

/// A verdict together with the engine that produced it and a note on the
/// budget it used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    pub verdict: Verdict,
    pub engine: Engine,
    pub consumed: String,
}

/// What an HDT0L label stands for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LabelOrigin {
    Final(State),
    Transition(Transition),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    SstToHdt0l,
    Hdt0lToSst,
}

/// The correspondence between HDT0L labels and the states and transitions
/// of the machine they were built from.
#[derive(Clone, Debug)]
pub struct ReductionTrace {
    pub direction: Direction,
    initial: State,
    labels: BTreeMap<String, LabelOrigin>,
}

impl ReductionTrace {
    pub fn origin(&self, label: &str) -> Option<&LabelOrigin> {
        self.labels.get(label)
    }

    pub fn labels(&self) -> impl Iterator<Item = (&str, &LabelOrigin)> {
        self.labels.iter().map(|(l, o)| (l.as_str(), o))
    }

    /// The accepting run encoded by a valid sequence `t_1 … t_n q`, or
    /// `None` when the sequence is not valid.
    pub fn classify<S: AsRef<str>>(&self, seq: &[S]) -> Option<(Run, State)> {
        let (last, rest) = seq.split_last()?;
        let LabelOrigin::Final(q) = self.origin(last.as_ref())? else {
            return None;
        };
        let mut transitions = Vec::with_capacity(rest.len());
        let mut at = &self.initial;
        for label in rest {
            let LabelOrigin::Transition(t) = self.origin(label.as_ref())? else {
                return None;
            };
            if &t.source != at {
                return None;
            }
            at = &t.target;
            transitions.push(t.clone());
        }
        (at == q).then(|| {
            (
                Run::from_transitions(&self.initial, &transitions),
                q.clone(),
            )
        })
    }

    /// The label sequence of an accepting run.
    pub fn encode(&self, run: &Run) -> Vec<String> {
        let mut seq: Vec<String> = run.transitions().iter().map(transition_label).collect();
        seq.push(final_label(run.last()));
        seq
    }
}

fn final_label(q: &State) -> String {
    join_escaped(&["f", q.name()], ':')
}

fn transition_label(t: &Transition) -> String {
    join_escaped(
        &["t", t.source.name(), t.letter.token(), t.target.name()],
        ':',
    )
}

/// Token naming of the letters `α_q`.
struct Subscripts {
    kinds: bool,
}

impl Subscripts {
    fn token(&self, kind: &str, alpha: &str, q: &State) -> String {
        let alpha = if self.kinds && kind != "#" && kind != "$" {
            format!("{kind}:{alpha}")
        } else {
            alpha.to_string()
        };
        join_escaped(&[&alpha, q.name()], '@')
    }
}

/// Builds an instance that is valid iff the biSST `t` is diagonal.
///
/// Letters are `α_q` for α a variable, an output letter, `$` or `#`, plus a
/// bare `#`. Each accepting final state `q` contributes a label
/// `f:<q>` with the pair `(f_q^1, f_q^2)` and each transition a label
/// `t:<q>:<a>:<q'>` with `(f_t, f_t)`; the final pair is `(f_{q0}, f_{q0})`
/// and both axioms are `#`. Final states without an output carry no label.
pub fn bisst_to_hdt0l(t: &Sst) -> Result<(Hdt0lInstance, ReductionTrace)> {
    if t.arity() != 2 {
        return Err(Error::Precondition(format!(
            "the diagonal reduction needs an arity-2 machine, got arity {}",
            t.arity()
        )));
    }
    t.validate()?;
    let vars: Vec<&Letter> = t.variables().iter().collect();
    let gamma: Vec<&Letter> = t.output().letters().iter().collect();
    let mut base_tokens: BTreeSet<&str> = BTreeSet::new();
    let mut kinds = false;
    for l in vars.iter().chain(&gamma) {
        if !base_tokens.insert(l.token()) || l.token() == "$" || l.token() == "#" {
            kinds = true;
        }
    }
    let sub = Subscripts { kinds };

    let mut tokens: Vec<String> = Vec::new();
    for q in t.states() {
        for x in &vars {
            tokens.push(sub.token("x", x.token(), q));
        }
        for c in &gamma {
            tokens.push(sub.token("o", c.token(), q));
        }
        tokens.push(sub.token("$", "$", q));
        tokens.push(sub.token("#", "#", q));
    }
    tokens.push("#".to_string());
    let a = Alphabet::new("A", &tokens)?;
    let b = Alphabet::new("B", t.output().letters().iter().map(Letter::token))?;

    let var_set: BTreeSet<&Letter> = vars.iter().copied().collect();
    let subscript = |q: &State, w: &Word| -> Word {
        w.iter()
            .map(|l| {
                let tok = if var_set.contains(l) {
                    sub.token("x", l.token(), q)
                } else {
                    sub.token("o", l.token(), q)
                };
                a.letter(&tok).expect("subscripted letter")
            })
            .collect()
    };
    let dollar = |q: &State| a.letter(&sub.token("$", "$", q)).expect("dollar");
    let hash = a.letter("#").expect("hash");

    let mut pairs = Vec::new();
    let mut trace = BTreeMap::new();
    for q in t.accepting_states() {
        let Some(Output::Pair(l, r)) = t.output_of(q) else {
            continue;
        };
        let image = |side: &Word| -> Result<Morphism> {
            let mut w = Word::from(vec![dollar(q)]);
            w.append(&subscript(q, side));
            let hash = hash.clone();
            Morphism::from_fn(a.clone(), a.clone(), move |x| {
                if *x == hash {
                    w.clone()
                } else {
                    Word::empty()
                }
            })
        };
        let label = final_label(q);
        pairs.push(MorphismPair {
            label: label.clone(),
            h: image(l)?,
            g: image(r)?,
        });
        trace.insert(label, LabelOrigin::Final(q.clone()));
    }
    for tr in t.transitions() {
        let (q, q2) = (&tr.source, &tr.target);
        let rho = t.update(tr).expect("validated");
        let mut images: BTreeMap<Letter, Word> = BTreeMap::new();
        for x in &vars {
            let src = a.letter(&sub.token("x", x.token(), q2)).unwrap();
            images.insert(src, subscript(q, rho.image(x).expect("total update")));
        }
        for c in &gamma {
            let src = a.letter(&sub.token("o", c.token(), q2)).unwrap();
            images.insert(
                src,
                Word::from(vec![a.letter(&sub.token("o", c.token(), q)).unwrap()]),
            );
        }
        images.insert(dollar(q2), Word::from(vec![dollar(q)]));
        let f = Morphism::from_fn(a.clone(), a.clone(), |x| {
            images.get(x).cloned().unwrap_or_default()
        })?;
        let label = transition_label(tr);
        pairs.push(MorphismPair {
            label: label.clone(),
            h: f.clone(),
            g: f,
        });
        trace.insert(label, LabelOrigin::Transition(tr.clone()));
    }
    let q0 = t.initial();
    let fin = Morphism::from_fn(a.clone(), b.clone(), |x| {
        gamma
            .iter()
            .find(|c| sub.token("o", c.token(), q0) == x.token())
            .map(|c| Word::from(vec![b.letter(c.token()).unwrap()]))
            .unwrap_or_default()
    })?;
    let axiom = Word::from(vec![hash.clone()]);
    let inst = Hdt0lInstance::new(a.clone(), b, pairs, fin.clone(), fin, axiom.clone(), axiom)?;
    Ok((
        inst,
        ReductionTrace {
            direction: Direction::SstToHdt0l,
            initial: q0.clone(),
            labels: trace,
        },
    ))
}

/// The two deterministic machines reading `0 i_1 … i_k` and producing
/// `h(h_{i_1}(…h_{i_k}(v)…))` and `g(g_{i_1}(…g_{i_k}(w)…))`. Input letter
/// `i` (from 1) selects the i-th pair in declaration order.
pub fn hdt0l_to_sst_pair(inst: &Hdt0lInstance) -> Result<(Sst, Sst)> {
    let n = inst.pairs().len();
    let input = Alphabet::new("input", (0..=n).map(|i| i.to_string()))?;
    let output = Alphabet::new("output", inst.b().letters().iter().map(Letter::token))?;
    let mut prefix = String::from("X_");
    while inst
        .a()
        .letters()
        .iter()
        .any(|a| output.letter(&format!("{prefix}{}", a.token())).is_some())
    {
        prefix.insert(0, 'X');
    }
    let vars = Alphabet::new(
        "vars",
        inst.a()
            .letters()
            .iter()
            .map(|a| format!("{prefix}{}", a.token())),
    )?;
    let rename = |w: &Word| -> Word {
        w.iter()
            .map(|l| vars.letters()[inst.a().index_of(l).unwrap()].clone())
            .collect()
    };
    let to_output = |w: &Word| -> Word {
        w.iter()
            .map(|l| output.letter(l.token()).unwrap())
            .collect()
    };

    let build = |names: [&str; 2],
                 fin: &Morphism,
                 inner: &dyn Fn(&MorphismPair) -> &Morphism,
                 axiom: &Word| {
        let (s0, s1) = (State::new(names[0]), State::new(names[1]));
        let mut transitions = BTreeSet::new();
        let mut updates = BTreeMap::new();
        let start = Transition::new(&s0, &input.letters()[0], &s1);
        updates.insert(
            start.clone(),
            Substitution::new(
                vars.letters()
                    .iter()
                    .cloned()
                    .zip(fin.images().iter().map(to_output)),
            ),
        );
        transitions.insert(start);
        for (i, pair) in inst.pairs().iter().enumerate() {
            let t = Transition::new(&s1, &input.letters()[i + 1], &s1);
            updates.insert(
                t.clone(),
                Substitution::new(
                    vars.letters()
                        .iter()
                        .cloned()
                        .zip(inner(pair).images().iter().map(rename)),
                ),
            );
            transitions.insert(t);
        }
        Sst::new(SstParts {
            input: input.clone(),
            output: output.clone(),
            states: vec![s0.clone(), s1.clone()],
            initial: s0,
            finals: [s1.clone()].into(),
            variables: vars.letters().to_vec(),
            transitions,
            updates,
            outputs: [(s1, Output::Single(rename(axiom)))].into(),
            arity: 1,
        })
    };
    let t1 = build(["q0", "q1"], inst.final_h(), &|p| &p.h, inst.v())?;
    let t2 = build(["p0", "p1"], inst.final_g(), &|p| &p.g, inst.w())?;
    Ok((t1, t2))
}

/// Decides whether every output pair of the biSST `t` has equal components.
/// A counterexample is an input word with its two different outputs.
pub fn check_diagonal(t: &Sst, engine: Engine) -> Result<Decision> {
    if t.arity() != 2 {
        return Err(Error::Precondition(format!(
            "diagonality is defined for arity-2 machines, got arity {}",
            t.arity()
        )));
    }
    if t.domain_automaton().is_empty() {
        return Ok(Decision {
            verdict: Verdict::Holds,
            engine,
            consumed: "empty domain".into(),
        });
    }
    let (inst, trace) = bisst_to_hdt0l(t)?;
    let (verdict, consumed) = run_engine(&inst, engine)?;
    let verdict = match verdict {
        Verdict::Counterexample(Witness::Sequence {
            labels,
            left,
            right,
        }) => {
            let Some((run, _)) = trace.classify(&labels) else {
                return Err(Error::InternalSoundness(format!(
                    "violating sequence ({}) encodes no accepting run",
                    labels.join(" ")
                )));
            };
            match t.run_output(&run)? {
                Some(Output::Pair(l, r))
                    if l != r && same_tokens(&l, &left) && same_tokens(&r, &right) =>
                {
                    Verdict::Counterexample(Witness::Outputs {
                        word: run.input,
                        left: l,
                        right: r,
                    })
                }
                other => {
                    return Err(Error::InternalSoundness(format!(
                        "run on `{}` replays to {other:?}, expected ({left}, {right})",
                        run.input
                    )))
                }
            }
        }
        other => other,
    };
    Ok(Decision {
        verdict,
        engine,
        consumed,
    })
}

fn same_tokens(u: &Word, v: &Word) -> bool {
    u.len() == v.len() && u.iter().zip(v).all(|(a, b)| a.token() == b.token())
}

fn run_engine(inst: &Hdt0lInstance, engine: Engine) -> Result<(Verdict, String)> {
    match engine {
        Engine::Bounded { max_len } => {
            let outcome = bounded_search(inst, max_len);
            let runs = max_len.saturating_sub(1);
            let consumed = format!(
                "label sequences up to length {} (runs on input words up to length {runs}){}",
                outcome.depth,
                if outcome.exhausted {
                    ", derivation states exhausted"
                } else {
                    ""
                }
            );
            Ok((outcome.verdict, consumed))
        }
        Engine::Ideal { max_steps } => {
            let options = AlgebraicOptions {
                max_steps,
                ..AlgebraicOptions::default()
            };
            let outcome = decide_hdt0l_with(inst, &options)?;
            let consumed = format!(
                "chain depth {}, {} tracked polynomials, {} free variables, basis size {}, {} reductions",
                outcome.depth, outcome.tracked, outcome.free_variables, outcome.basis_size, outcome.reductions
            );
            Ok((outcome.verdict, consumed))
        }
    }
}

/// Decides whether the machine produces at most one output per input, by
/// checking that `t ⊗ t` is diagonal.
pub fn check_functional(t: &Sst, engine: Engine) -> Result<Decision> {
    if t.arity() != 1 {
        return Err(Error::Precondition(format!(
            "functionality is checked on arity-1 machines, got arity {}",
            t.arity()
        )));
    }
    check_diagonal(&product(t, t)?, engine)
}

/// Decides whether two deterministic machines define the same function:
/// equal domains, then a diagonal product.
pub fn check_equivalent(t1: &Sst, t2: &Sst, engine: Engine) -> Result<Decision> {
    for (i, t) in [t1, t2].into_iter().enumerate() {
        if !t.is_deterministic() {
            return Err(Error::Precondition(format!(
                "equivalence needs deterministic machines; machine {} is not",
                i + 1
            )));
        }
    }
    let domains = nfa_equivalent(&t1.domain_automaton(), &t2.domain_automaton())?;
    if let Verdict::Counterexample(Witness::Domain {
        word, accepted_by, ..
    }) = domains
    {
        let machine = if accepted_by == 1 { t1 } else { t2 };
        let output = machine
            .evaluate(&word)
            .into_iter()
            .next()
            .and_then(|o| match o {
                Output::Single(w) => Some(w),
                Output::Pair(..) => None,
            });
        return Ok(Decision {
            verdict: Verdict::Counterexample(Witness::Domain {
                word,
                accepted_by,
                output,
            }),
            engine,
            consumed: "domain comparison".into(),
        });
    }
    let mut decision = check_diagonal(&product(t1, t2)?, engine)?;
    decision.consumed = format!("domains equal; {}", decision.consumed);
    Ok(decision)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hdt0l::derive;
    use crate::hdt0l::tests::example_instance;
    use crate::sst::tests::{example_t1, example_t2, machine};

    fn word(t: &Sst, s: &str) -> Word {
        t.input().parse_word(s).unwrap()
    }

    /// `F(q) = (X, Y)` after one transition setting `X = x`, `Y = y`.
    fn split_pair() -> Sst {
        machine(
            &["a"],
            &["x", "y"],
            &["s", "q"],
            &["q"],
            &["X", "Y"],
            &[("s", "a", "q", &[("X", "x"), ("Y", "y")])],
            &[("q", "X | Y")],
        )
    }

    #[test]
    fn labels_are_a_bijection() {
        let t = product(&example_t1(), &example_t2()).unwrap();
        let (inst, trace) = bisst_to_hdt0l(&t).unwrap();
        assert_eq!(
            inst.pairs().len(),
            t.transitions().len() + t.accepting_states().count()
        );
        assert_eq!(trace.labels().count(), inst.pairs().len());
        // 8 variables, 2 output letters, $ and # per state, plus the bare #.
        assert_eq!(inst.a().len(), 12 * t.states().len() + 1);
        for (label, origin) in trace.labels() {
            let expected = match origin {
                LabelOrigin::Final(q) => final_label(q),
                LabelOrigin::Transition(tr) => transition_label(tr),
            };
            assert_eq!(label, expected);
        }
    }

    #[test]
    fn valid_sequences_replay_the_run() {
        let t = product(&example_t1(), &example_t2()).unwrap();
        let (inst, trace) = bisst_to_hdt0l(&t).unwrap();
        for input in ["0", "0 1", "0 1 1", "0 1 1 1"] {
            let w = word(&t, input);
            for run in t.accepting_runs(&w) {
                let seq = trace.encode(&run);
                let (back, _) = trace.classify(&seq).unwrap();
                assert_eq!(back, run);
                let Some(Output::Pair(l, r)) = t.run_output(&run).unwrap() else {
                    panic!()
                };
                let (dl, dr) = derive(&inst, &seq).unwrap();
                assert_eq!(dl.to_string(), l.to_string());
                assert_eq!(dr.to_string(), r.to_string());
            }
        }
    }

    #[test]
    fn invalid_sequences_derive_empty_words() {
        let t = product(&example_t1(), &example_t2()).unwrap();
        let (inst, trace) = bisst_to_hdt0l(&t).unwrap();
        let labels: Vec<&str> = inst.labels().collect();
        let mut count = 0;
        for &x in &labels {
            for &y in &labels {
                for seq in [vec![x], vec![x, y]] {
                    if trace.classify(&seq).is_none() {
                        count += 1;
                        let (l, r) = derive(&inst, &seq).unwrap();
                        assert!(l.is_empty() && r.is_empty(), "{seq:?}");
                    }
                }
            }
        }
        assert!(count > 0);
    }

    #[test]
    fn split_pair_counterexample_sequence() {
        let t = split_pair();
        let (inst, _) = bisst_to_hdt0l(&t).unwrap();
        match crate::hdt0l::bounded_validity(&inst, 3) {
            Verdict::Counterexample(Witness::Sequence {
                labels,
                left,
                right,
            }) => {
                assert_eq!(labels, vec!["t:s:a:q".to_string(), "f:q".to_string()]);
                assert_eq!(
                    (left.to_string(), right.to_string()),
                    ("x".into(), "y".into())
                );
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn diagonal_split_pair() {
        let d = check_diagonal(&split_pair(), Engine::bounded()).unwrap();
        match d.verdict {
            Verdict::Counterexample(Witness::Outputs { word, left, right }) => {
                assert_eq!(word.to_string(), "a");
                assert_eq!(left.to_string(), "x");
                assert_eq!(right.to_string(), "y");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(check_diagonal(&split_pair(), Engine::ideal())
            .unwrap()
            .verdict
            .is_counterexample());
    }

    #[test]
    fn diagonal_empty_domain() {
        let t = machine(
            &["a"],
            &["x"],
            &["s", "q"],
            &["q"],
            &["X", "Y"],
            &[],
            &[("q", "X | Y")],
        );
        assert_eq!(
            check_diagonal(&t, Engine::bounded()).unwrap().verdict,
            Verdict::Holds
        );
    }

    #[test]
    fn self_product_is_diagonal_up_to_bound() {
        let t = product(&example_t1(), &example_t1()).unwrap();
        let d = check_diagonal(&t, Engine::Bounded { max_len: 6 }).unwrap();
        assert!(d.verdict.is_resource_limit());
        for input in ["0", "0 1", "0 1 1 1 1"] {
            for out in t.evaluate(&word(&t, input)) {
                assert!(out.is_diagonal());
            }
        }
    }

    #[test]
    fn functional_cases() {
        assert!(
            check_functional(&example_t1(), Engine::Bounded { max_len: 6 })
                .unwrap()
                .verdict
                .is_resource_limit()
        );
        let branching = machine(
            &["a"],
            &["x", "y"],
            &["s", "p", "q"],
            &["p", "q"],
            &["X"],
            &[
                ("s", "a", "p", &[("X", "x")]),
                ("s", "a", "q", &[("X", "y")]),
            ],
            &[("p", "X"), ("q", "X")],
        );
        match check_functional(&branching, Engine::bounded())
            .unwrap()
            .verdict
        {
            Verdict::Counterexample(Witness::Outputs { word, left, right }) => {
                assert_eq!(word.to_string(), "a");
                let outs: BTreeSet<String> = [left.to_string(), right.to_string()].into();
                assert_eq!(outs, ["x".to_string(), "y".to_string()].into());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn equivalence_of_example_machines() {
        let d = check_equivalent(
            &example_t1(),
            &example_t2(),
            Engine::Bounded { max_len: 10 },
        )
        .unwrap();
        assert!(d.verdict.is_resource_limit(), "{d:?}");
        assert!(
            check_equivalent(&example_t1(), &example_t1(), Engine::Bounded { max_len: 6 })
                .unwrap()
                .verdict
                .is_resource_limit()
        );
    }

    #[test]
    fn ideal_engine_proves_example_machines_equivalent() {
        let p = product(&example_t1(), &example_t2()).unwrap();
        assert_eq!(
            check_diagonal(&p, Engine::ideal()).unwrap().verdict,
            Verdict::Holds
        );
        for (l, r) in [
            (example_t1(), example_t2()),
            (example_t1(), example_t1()),
            (example_t2(), example_t1()),
        ] {
            let d = check_equivalent(&l, &r, Engine::ideal()).unwrap();
            assert_eq!(d.verdict, Verdict::Holds, "{d:?}");
        }
        assert_eq!(
            check_functional(&example_t2(), Engine::ideal())
                .unwrap()
                .verdict,
            Verdict::Holds
        );
    }

    #[test]
    fn ideal_engine_finds_split_pair_counterexample() {
        let d = check_diagonal(&split_pair(), Engine::ideal()).unwrap();
        let bounded = check_diagonal(&split_pair(), Engine::bounded()).unwrap();
        assert!(d.verdict.is_counterexample(), "{d:?}");
        assert_eq!(d.verdict, bounded.verdict);
    }

    fn t1_with_output(rhs: &str, finals: &[&str]) -> Sst {
        machine(
            &["0", "1"],
            &["e", "f"],
            &["q0", "q1"],
            finals,
            &["X_a", "X_b", "X_c", "X_d"],
            &[
                (
                    "q0",
                    "0",
                    "q1",
                    &[("X_a", "e"), ("X_b", "f"), ("X_c", "~"), ("X_d", "~")],
                ),
                (
                    "q1",
                    "1",
                    "q1",
                    &[
                        ("X_a", "X_a"),
                        ("X_b", "X_b"),
                        ("X_c", "X_a X_c X_b"),
                        ("X_d", "~"),
                    ],
                ),
            ],
            &if finals.is_empty() {
                vec![]
            } else {
                vec![("q1", rhs)]
            },
        )
    }

    #[test]
    fn equivalence_counterexamples() {
        let t1 = example_t1();
        let changed = t1_with_output("X_c X_a", &["q1"]);
        match check_equivalent(&t1, &changed, Engine::bounded())
            .unwrap()
            .verdict
        {
            Verdict::Counterexample(Witness::Outputs { word, left, right }) => {
                let l = t1.evaluate(&word);
                let r = changed.evaluate(&word);
                assert_eq!(l, [Output::Single(left.clone())].into());
                assert_eq!(r, [Output::Single(right.clone())].into());
                assert_ne!(left, right);
                assert_eq!(word.to_string(), "0");
            }
            other => panic!("unexpected {other:?}"),
        }
        let no_final = t1_with_output("X_c", &[]);
        match check_equivalent(&t1, &no_final, Engine::bounded())
            .unwrap()
            .verdict
        {
            Verdict::Counterexample(Witness::Domain {
                word,
                accepted_by,
                output,
            }) => {
                assert_eq!(word.to_string(), "0");
                assert_eq!(accepted_by, 1);
                assert_eq!(output, Some(Word::empty()));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn nondeterministic_equivalence_is_rejected() {
        let branching = machine(
            &["a"],
            &["x"],
            &["s", "p", "q"],
            &["p"],
            &["X"],
            &[
                ("s", "a", "p", &[("X", "x")]),
                ("s", "a", "q", &[("X", "x")]),
            ],
            &[("p", "X")],
        );
        assert!(matches!(
            check_equivalent(&branching, &branching, Engine::bounded()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn example_instance_to_machines() {
        let (t1, t2) = hdt0l_to_sst_pair(&example_instance()).unwrap();
        assert_eq!(t1, example_t1());
        assert_eq!(t2, example_t2());
        let inst = example_instance();
        for k in 0..=4 {
            let seq = vec!["1"; k];
            let (l, r) = derive(&inst, &seq).unwrap();
            let input: Vec<String> = std::iter::once("0".to_string())
                .chain(seq.iter().map(|s| s.to_string()))
                .collect();
            let w = t1.input().word(&input).unwrap();
            assert_eq!(
                t1.evaluate(&w).into_iter().next().unwrap().to_string(),
                l.to_string()
            );
            assert_eq!(
                t2.evaluate(&w).into_iter().next().unwrap().to_string(),
                r.to_string()
            );
        }
    }
}
