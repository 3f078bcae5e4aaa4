//! HDT0L instances: two families of endomorphisms applied in lockstep,
//! followed by a final pair of morphisms into the output alphabet.

use std::collections::{BTreeMap, HashSet};

use crate::error::{Error, Result, ValidationError};
use crate::verdict::{Verdict, Witness};
use crate::words::{check_word, is_valid_token, Alphabet, Morphism, Word};

/// The inner morphisms `h_i`, `g_i` of one label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismPair {
    pub label: String,
    pub h: Morphism,
    pub g: Morphism,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hdt0lInstance {
    a: Alphabet,
    b: Alphabet,
    pairs: Vec<MorphismPair>,
    final_h: Morphism,
    final_g: Morphism,
    v: Word,
    w: Word,
}

impl Hdt0lInstance {
    pub fn new(
        a: Alphabet,
        b: Alphabet,
        pairs: Vec<MorphismPair>,
        final_h: Morphism,
        final_g: Morphism,
        v: Word,
        w: Word,
    ) -> Result<Self> {
        let inst = Hdt0lInstance {
            a,
            b,
            pairs,
            final_h,
            final_g,
            v,
            w,
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        let mut labels = HashSet::new();
        for p in &self.pairs {
            if !is_valid_token(&p.label) {
                return Err(Error::InvalidToken(p.label.clone()));
            }
            if !labels.insert(p.label.as_str()) {
                return Err(ValidationError::DuplicateLabel(p.label.clone()).into());
            }
            for m in [&p.h, &p.g] {
                expect_alphabet(m.source(), &self.a)?;
                expect_alphabet(m.target(), &self.a)?;
            }
        }
        for m in [&self.final_h, &self.final_g] {
            expect_alphabet(m.source(), &self.a)?;
            expect_alphabet(m.target(), &self.b)?;
        }
        check_word(&self.a, &self.v)?;
        check_word(&self.a, &self.w)?;
        Ok(())
    }

    pub fn a(&self) -> &Alphabet {
        &self.a
    }

    pub fn b(&self) -> &Alphabet {
        &self.b
    }

    pub fn pairs(&self) -> &[MorphismPair] {
        &self.pairs
    }

    pub fn final_h(&self) -> &Morphism {
        &self.final_h
    }

    pub fn final_g(&self) -> &Morphism {
        &self.final_g
    }

    pub fn v(&self) -> &Word {
        &self.v
    }

    pub fn w(&self) -> &Word {
        &self.w
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.pairs.iter().map(|p| p.label.as_str())
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.pairs.iter().position(|p| p.label == label)
    }

    fn indices<S: AsRef<str>>(&self, seq: &[S]) -> Result<Vec<usize>> {
        seq.iter()
            .map(|l| {
                self.label_index(l.as_ref())
                    .ok_or_else(|| Error::UnknownLabel(l.as_ref().to_string()))
            })
            .collect()
    }

    /// [`derive`] on pair indices instead of labels.
    pub fn derive_indices(&self, seq: &[usize]) -> Result<(Word, Word)> {
        let mut left = self.v.clone();
        let mut right = self.w.clone();
        for &i in seq.iter().rev() {
            let pair = self
                .pairs
                .get(i)
                .ok_or_else(|| Error::UnknownLabel(i.to_string()))?;
            left = pair.h.apply(&left)?;
            right = pair.g.apply(&right)?;
        }
        Ok((self.final_h.apply(&left)?, self.final_g.apply(&right)?))
    }
}

fn expect_alphabet(found: &Alphabet, expected: &Alphabet) -> Result<()> {
    if found == expected {
        Ok(())
    } else {
        Err(Error::AlphabetMismatch {
            expected: expected.id().to_string(),
            found: found.id().to_string(),
        })
    }
}

/// `(h(h_{i1}(…h_{ik}(v)…)), g(g_{i1}(…g_{ik}(w)…)))` for `seq = i1 … ik`:
/// the last label is applied first.
pub fn derive<S: AsRef<str>>(inst: &Hdt0lInstance, seq: &[S]) -> Result<(Word, Word)> {
    inst.derive_indices(&inst.indices(seq)?)
}

/// Dense form of an instance for the search: letters are indices.
struct Compiled {
    inner_h: Vec<Vec<Vec<u32>>>,
    inner_g: Vec<Vec<Vec<u32>>>,
    final_h: Vec<Vec<u32>>,
    final_g: Vec<Vec<u32>>,
}

fn dense(m: &Morphism) -> Vec<Vec<u32>> {
    m.images()
        .iter()
        .map(|w| {
            w.iter()
                .map(|l| m.target().index_of(l).expect("validated image") as u32)
                .collect()
        })
        .collect()
}

fn dense_word(alphabet: &Alphabet, w: &Word) -> Vec<u32> {
    w.iter()
        .map(|l| alphabet.index_of(l).expect("validated word") as u32)
        .collect()
}

fn apply_dense(images: &[Vec<u32>], word: &[u32]) -> Vec<u32> {
    let mut out = Vec::new();
    for &a in word {
        out.extend_from_slice(&images[a as usize]);
    }
    out
}

/// Result of a bounded search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundedOutcome {
    pub verdict: Verdict,
    /// Deepest sequence length examined.
    pub depth: usize,
    /// Whether every sequence, of any length, was covered.
    pub exhausted: bool,
}

/// Checks the validity condition for every label sequence of length at most
/// `max_len`, the empty sequence included.
///
/// Sequences are grown from the inside out, one outer label at a time, and
/// the pair of intermediate words is the search state: two sequences that
/// reach the same pair have identical futures, so only the first arrival
/// (shortest, then least in label order) is expanded. The reported
/// counterexample is the shortest violating sequence, least in label order.
///
/// Bounded search never answers [`Verdict::Holds`]; without a counterexample
/// the verdict is [`Verdict::ResourceLimit`] stating the bound reached.
pub fn bounded_validity(inst: &Hdt0lInstance, max_len: usize) -> Verdict {
    bounded_search(inst, max_len).verdict
}

pub fn bounded_search(inst: &Hdt0lInstance, max_len: usize) -> BoundedOutcome {
    let c = Compiled {
        inner_h: inst.pairs.iter().map(|p| dense(&p.h)).collect(),
        inner_g: inst.pairs.iter().map(|p| dense(&p.g)).collect(),
        final_h: dense(&inst.final_h),
        final_g: dense(&inst.final_g),
    };
    type Key = (Vec<u32>, Vec<u32>);
    let start: Key = (dense_word(&inst.a, &inst.v), dense_word(&inst.a, &inst.w));
    let mut seen: HashSet<Key> = HashSet::new();
    seen.insert(start.clone());
    // (state, labels outermost-first), sorted by labels
    let mut level: Vec<(Key, Vec<usize>)> = vec![(start, Vec::new())];
    let mut depth = 0;
    loop {
        for ((u, u2), seq) in &level {
            let left = apply_dense(&c.final_h, u);
            let right = apply_dense(&c.final_g, u2);
            if left != right {
                let to_word = |xs: Vec<u32>| -> Word {
                    xs.into_iter()
                        .map(|i| inst.b.letters()[i as usize].clone())
                        .collect()
                };
                return BoundedOutcome {
                    verdict: Verdict::Counterexample(Witness::Sequence {
                        labels: seq.iter().map(|&i| inst.pairs[i].label.clone()).collect(),
                        left: to_word(left),
                        right: to_word(right),
                    }),
                    depth,
                    exhausted: false,
                };
            }
        }
        if level.is_empty() || depth == max_len {
            let exhausted = level.is_empty();
            let note = if exhausted {
                format!(
                    "valid up to {max_len} (no new derivation states beyond length {})",
                    depth.saturating_sub(1)
                )
            } else {
                format!("valid up to {max_len}")
            };
            return BoundedOutcome {
                verdict: Verdict::ResourceLimit(note),
                depth,
                exhausted,
            };
        }
        depth += 1;
        let mut next: BTreeMap<Vec<usize>, Key> = BTreeMap::new();
        let mut best: std::collections::HashMap<Key, Vec<usize>> = Default::default();
        for ((u, u2), seq) in &level {
            for i in 0..inst.pairs.len() {
                let key = (
                    apply_dense(&c.inner_h[i], u),
                    apply_dense(&c.inner_g[i], u2),
                );
                if seen.contains(&key) {
                    continue;
                }
                let mut labels = Vec::with_capacity(seq.len() + 1);
                labels.push(i);
                labels.extend_from_slice(seq);
                match best.get_mut(&key) {
                    Some(existing) if *existing <= labels => {}
                    Some(existing) => {
                        next.remove(existing);
                        *existing = labels.clone();
                        next.insert(labels, key);
                    }
                    None => {
                        best.insert(key.clone(), labels.clone());
                        next.insert(labels, key);
                    }
                }
            }
        }
        seen.extend(best.into_keys());
        level = next.into_iter().map(|(seq, key)| (key, seq)).collect();
    }
}
