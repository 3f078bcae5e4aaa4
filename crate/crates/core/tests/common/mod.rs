#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use sstkit::{
    Alphabet, Hdt0lInstance, Letter, Morphism, MorphismPair, Output, Sst, SstParts, State,
    Substitution, Transition, Word,
};

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Size limits for random machines.
#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub states: usize,
    pub vars: usize,
    pub image_len: usize,
    pub inputs: usize,
    pub outputs: usize,
    pub deterministic: bool,
    pub arity: usize,
}

impl Shape {
    pub fn small(deterministic: bool) -> Self {
        Shape {
            states: 3,
            vars: 3,
            image_len: 2,
            inputs: 2,
            outputs: 2,
            deterministic,
            arity: 1,
        }
    }
}

pub fn input_alphabet(n: usize) -> Alphabet {
    Alphabet::new("input", ["a", "b", "c"].iter().take(n)).unwrap()
}

pub fn output_alphabet(n: usize) -> Alphabet {
    Alphabet::new("output", ["e", "f", "g"].iter().take(n)).unwrap()
}

fn random_word(rng: &mut ChaCha8Rng, pool: &[Letter], max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    (0..len)
        .map(|_| pool.choose(rng).unwrap().clone())
        .collect()
}

pub fn random_sst(rng: &mut ChaCha8Rng, shape: Shape) -> Sst {
    let input = input_alphabet(rng.gen_range(1..=shape.inputs));
    let output = output_alphabet(rng.gen_range(1..=shape.outputs));
    let states: Vec<State> = (0..rng.gen_range(1..=shape.states))
        .map(|i| State::new(&format!("q{i}")))
        .collect();
    let vars = Alphabet::new(
        "vars",
        ["X", "Y", "Z"].iter().take(rng.gen_range(1..=shape.vars)),
    )
    .unwrap();
    let pool: Vec<Letter> = vars
        .letters()
        .iter()
        .chain(output.letters())
        .cloned()
        .collect();

    let mut transitions = BTreeSet::new();
    let mut updates = BTreeMap::new();
    for q in &states {
        for a in input.letters() {
            let targets: Vec<&State> = if shape.deterministic {
                if rng.gen_bool(0.8) {
                    vec![states.choose(rng).unwrap()]
                } else {
                    vec![]
                }
            } else {
                states.iter().filter(|_| rng.gen_bool(0.45)).collect()
            };
            for q2 in targets {
                let t = Transition::new(q, a, q2);
                let rho = Substitution::new(
                    vars.letters()
                        .iter()
                        .map(|x| (x.clone(), random_word(rng, &pool, shape.image_len))),
                );
                transitions.insert(t.clone());
                updates.insert(t, rho);
            }
        }
    }
    let mut finals = BTreeSet::new();
    let mut outputs = BTreeMap::new();
    for q in &states {
        if rng.gen_bool(0.6) {
            finals.insert(q.clone());
            if rng.gen_bool(0.9) {
                let mut side = || random_word(rng, vars.letters(), shape.image_len + 1);
                let out = if shape.arity == 2 {
                    Output::Pair(side(), side())
                } else {
                    Output::Single(side())
                };
                outputs.insert(q.clone(), out);
            }
        }
    }
    Sst::new(SstParts {
        input,
        output,
        initial: states[0].clone(),
        states,
        finals,
        variables: vars.letters().to_vec(),
        transitions,
        updates,
        outputs,
        arity: shape.arity,
    })
    .unwrap()
}

/// A machine with the same input alphabet as `like`.
pub fn random_sst_like(rng: &mut ChaCha8Rng, shape: Shape, like: &Sst) -> Sst {
    loop {
        let t = random_sst(rng, shape);
        if t.input() == like.input() && t.output() == like.output() {
            return t;
        }
    }
}

pub fn random_instance(
    rng: &mut ChaCha8Rng,
    letters: usize,
    targets: usize,
    pairs: usize,
    max_len: usize,
) -> Hdt0lInstance {
    let a = Alphabet::new(
        "A",
        (0..rng.gen_range(1..=letters)).map(|i| format!("a{i}")),
    )
    .unwrap();
    let b = Alphabet::new(
        "B",
        (0..rng.gen_range(1..=targets)).map(|i| format!("b{i}")),
    )
    .unwrap();
    let morphism = |rng: &mut ChaCha8Rng, target: &Alphabet| {
        let images: Vec<(Letter, Word)> = a
            .letters()
            .iter()
            .map(|l| (l.clone(), random_word(rng, target.letters(), max_len)))
            .collect();
        Morphism::new(a.clone(), target.clone(), images).unwrap()
    };
    let morphism_pairs = (0..rng.gen_range(0..=pairs))
        .map(|i| MorphismPair {
            label: format!("{}", i + 1),
            h: morphism(rng, &a),
            g: morphism(rng, &a),
        })
        .collect();
    let final_h = morphism(rng, &b);
    let final_g = morphism(rng, &b);
    let v = random_word(rng, a.letters(), max_len);
    let w = random_word(rng, a.letters(), max_len);
    Hdt0lInstance::new(a, b, morphism_pairs, final_h, final_g, v, w).unwrap()
}

/// Every word over `alphabet` of length at most `max_len`, shortest first.
pub fn words_up_to(alphabet: &Alphabet, max_len: usize) -> Vec<Word> {
    let mut all = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for l in alphabet.letters() {
                let mut u = w.clone();
                u.push(l.clone());
                next.push(u);
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    all
}

/// The machines of the worked example, written out by hand.
pub fn example_machines() -> (Sst, Sst) {
    let input = Alphabet::new("input", ["0", "1"]).unwrap();
    let output = Alphabet::new("output", ["e", "f"]).unwrap();
    let vars = Alphabet::new("vars", ["X_a", "X_b", "X_c", "X_d"]).unwrap();
    let x = |t: &str| vars.letter(t).unwrap();
    let word = |text: &str| -> Word {
        text.split_whitespace()
            .map(|t| vars.letter(t).or_else(|| output.letter(t)).unwrap())
            .collect()
    };
    let build = |names: [&str; 2], first: [&str; 4], loop_: [&str; 4], out: &str| {
        let (s0, s1) = (State::new(names[0]), State::new(names[1]));
        let t0 = Transition::new(&s0, &input.letter("0").unwrap(), &s1);
        let t1 = Transition::new(&s1, &input.letter("1").unwrap(), &s1);
        let rho = |rhs: [&str; 4]| {
            Substitution::new(
                ["X_a", "X_b", "X_c", "X_d"]
                    .iter()
                    .zip(rhs)
                    .map(|(v, r)| (x(v), word(r))),
            )
        };
        Sst::new(SstParts {
            input: input.clone(),
            output: output.clone(),
            states: vec![s0.clone(), s1.clone()],
            initial: s0,
            finals: [s1.clone()].into(),
            variables: vars.letters().to_vec(),
            transitions: [t0.clone(), t1.clone()].into(),
            updates: [(t0, rho(first)), (t1, rho(loop_))].into(),
            outputs: [(s1, Output::Single(word(out)))].into(),
            arity: 1,
        })
        .unwrap()
    };
    let t1 = build(
        ["q0", "q1"],
        ["e", "f", "", ""],
        ["X_a", "X_b", "X_a X_c X_b", ""],
        "X_c",
    );
    let t2 = build(
        ["p0", "p1"],
        ["e", "f", "", ""],
        ["X_a", "X_b", "X_c X_a", "X_d X_b"],
        "X_c X_d",
    );
    (t1, t2)
}

/// The HDT0L instance of the worked example.
pub fn example_instance() -> Hdt0lInstance {
    let a = Alphabet::new("A", ["a", "b", "c", "d"]).unwrap();
    let b = Alphabet::new("B", ["e", "f"]).unwrap();
    let m = |target: &Alphabet, images: [&str; 4]| {
        Morphism::new(
            a.clone(),
            target.clone(),
            a.letters()
                .iter()
                .zip(images)
                .map(|(l, w)| (l.clone(), target.parse_word(w).unwrap())),
        )
        .unwrap()
    };
    let pair = MorphismPair {
        label: "1".into(),
        h: m(&a, ["a", "b", "a c b", "~"]),
        g: m(&a, ["a", "b", "c a", "d b"]),
    };
    let fin = m(&b, ["e", "f", "~", "~"]);
    Hdt0lInstance::new(
        a.clone(),
        b,
        vec![pair],
        fin.clone(),
        fin,
        a.parse_word("c").unwrap(),
        a.parse_word("c d").unwrap(),
    )
    .unwrap()
}

/// Single-image variants of an instance: every image of every morphism
/// replaced in turn by each candidate word that differs from it.
pub fn single_image_mutations(
    inst: &Hdt0lInstance,
    candidates_a: &[&str],
    candidates_b: &[&str],
) -> Vec<(String, Hdt0lInstance)> {
    let mut out = Vec::new();
    let a = inst.a();
    let replace = |m: &Morphism, letter: usize, w: &Word| -> Morphism {
        let mut images: Vec<(Letter, Word)> = a
            .letters()
            .iter()
            .cloned()
            .zip(m.images().iter().cloned())
            .collect();
        images[letter].1 = w.clone();
        Morphism::new(a.clone(), m.target().clone(), images).unwrap()
    };
    let rebuild = |pairs: Vec<MorphismPair>, fh: Morphism, fg: Morphism| {
        Hdt0lInstance::new(
            a.clone(),
            inst.b().clone(),
            pairs,
            fh,
            fg,
            inst.v().clone(),
            inst.w().clone(),
        )
        .unwrap()
    };
    for (i, p) in inst.pairs().iter().enumerate() {
        for (side, m) in [("h", &p.h), ("g", &p.g)] {
            for (letter, l) in a.letters().iter().enumerate() {
                for cand in candidates_a {
                    let w = a.parse_word(cand).unwrap();
                    if w == m.images()[letter] {
                        continue;
                    }
                    let mut pairs = inst.pairs().to_vec();
                    let changed = replace(m, letter, &w);
                    if side == "h" {
                        pairs[i].h = changed;
                    } else {
                        pairs[i].g = changed;
                    }
                    let name = format!("{side}{}({l}) = {w}", p.label);
                    out.push((
                        name,
                        rebuild(pairs, inst.final_h().clone(), inst.final_g().clone()),
                    ));
                }
            }
        }
    }
    for (side, m) in [("h", inst.final_h()), ("g", inst.final_g())] {
        for (letter, l) in a.letters().iter().enumerate() {
            for cand in candidates_b {
                let w = inst.b().parse_word(cand).unwrap();
                if w == m.images()[letter] {
                    continue;
                }
                let changed = replace(m, letter, &w);
                let (fh, fg) = if side == "h" {
                    (changed, inst.final_g().clone())
                } else {
                    (inst.final_h().clone(), changed)
                };
                out.push((
                    format!("{side}({l}) = {w}"),
                    rebuild(inst.pairs().to_vec(), fh, fg),
                ));
            }
        }
    }
    out
}

/// A copy of `t` with one update image or one output rewritten. The copy is
/// often, but not always, equivalent to `t` (the change may touch a
/// variable that never reaches the output).
pub fn perturb(rng: &mut ChaCha8Rng, t: &Sst) -> Sst {
    let mut parts = t.parts().clone();
    let vars = parts.variables.clone();
    let pool: Vec<Letter> = vars.iter().chain(parts.output.letters()).cloned().collect();
    let keys: Vec<Transition> = parts.updates.keys().cloned().collect();
    if keys.is_empty() || rng.gen_bool(0.2) {
        if let Some(q) = parts
            .outputs
            .keys()
            .cloned()
            .collect::<Vec<_>>()
            .choose(rng)
        {
            parts
                .outputs
                .insert(q.clone(), Output::Single(random_word(rng, &vars, 3)));
        }
    } else {
        let tr = keys.choose(rng).unwrap().clone();
        let x = vars.choose(rng).unwrap().clone();
        let rho = &parts.updates[&tr];
        let images = rho.iter().map(|(y, w)| {
            let w = if *y == x {
                random_word(rng, &pool, 2)
            } else {
                w.clone()
            };
            (y.clone(), w)
        });
        let changed = Substitution::new(images.collect::<Vec<_>>());
        parts.updates.insert(tr, changed);
    }
    Sst::new(parts).unwrap()
}
