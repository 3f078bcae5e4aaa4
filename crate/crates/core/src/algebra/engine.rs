//! HDT0L validity through an ascending chain of polynomial ideals.
//!
//! Every derivation is a word, and μ turns words into 2×2 matrices. Replace
//! the letter matrices by symbolic ones (variables `X_{a,r,s}` for the
//! h-family, `Y_{a,r,s}` for the g-family) and each inner morphism pair
//! becomes a ring endomorphism Φ_i of the polynomial ring. The instance is
//! valid iff every polynomial `Φ_s(q)` for `q` an entry of `M₁(v) − M₂(w)`
//! vanishes at the base point given by the final morphisms.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::hdt0l::{derive, Hdt0lInstance};
use crate::verdict::{Verdict, Witness};
use crate::words::{Letter, Word};

use super::groebner::{IdealBasis, WorkBudget};
use super::linear::{affine_invariants, AffineChart};
use super::matrix::{embed_word, Matrix2};
use super::poly::MultiPoly;

pub const DEFAULT_MAX_STEPS: usize = 25;

/// A matrix-entry variable: `X_{letter,row,col}` on side 1, `Y_…` on side 2.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PolyVar {
    pub side: u8,
    pub letter: Letter,
    pub row: u8,
    pub col: u8,
}

impl PolyVar {
    /// Position in the variable order `(side, letter index, row, col)`.
    pub fn index(&self, inst: &Hdt0lInstance) -> Option<u32> {
        let a = inst.a().index_of(&self.letter)?;
        if !(1..=2).contains(&self.side)
            || !(1..=2).contains(&self.row)
            || !(1..=2).contains(&self.col)
        {
            return None;
        }
        Some(var_index(inst.a().len(), self.side, a, self.row, self.col))
    }

    pub fn from_index(inst: &Hdt0lInstance, v: u32) -> PolyVar {
        let (side, a, row, col) = split_index(inst.a().len(), v);
        PolyVar {
            side,
            letter: inst.a().letters()[a].clone(),
            row,
            col,
        }
    }

    pub fn name(&self) -> String {
        let family = if self.side == 1 { 'X' } else { 'Y' };
        format!("{family}_{},{},{}", self.letter.token(), self.row, self.col)
    }
}

fn var_index(n: usize, side: u8, letter: usize, row: u8, col: u8) -> u32 {
    ((((side as usize - 1) * n + letter) * 2 + row as usize - 1) * 2 + col as usize - 1) as u32
}

fn split_index(n: usize, v: u32) -> (u8, usize, u8, u8) {
    let v = v as usize;
    let col = (v % 2) as u8 + 1;
    let row = ((v / 2) % 2) as u8 + 1;
    let slot = v / 4;
    ((slot / n) as u8 + 1, slot % n, row, col)
}

/// How the letter matrix of one `(side, letter)` is represented.
#[derive(Clone, Debug)]
enum Slot {
    Free,
    /// Same matrix as the side-1 letter.
    Alias,
    Fixed(Matrix2),
}

/// The polynomial ring with its substitution maps and base point, possibly
/// after eliminating variables that provably do not matter.
pub struct SymbolicSystem<'a> {
    inst: &'a Hdt0lInstance,
    n: usize,
    slots: Vec<Slot>,
    base: Vec<Matrix2>,
    images: Vec<HashMap<u32, MultiPoly>>,
    /// Coordinates on the invariant affine space, when there is one.
    chart: Option<AffineChart>,
}

impl<'a> SymbolicSystem<'a> {
    /// One free variable per matrix entry.
    pub fn raw(inst: &'a Hdt0lInstance) -> Result<Self> {
        let n = inst.a().len();
        Self::build(inst, vec![Slot::Free; 2 * n], None)
    }

    /// Merges `Y_a` into `X_a` when both families treat `a` identically,
    /// replaces by constants the letters whose matrices every Φ_i maps back
    /// to their base value, then eliminates variables along the invariant
    /// affine relations.
    pub fn reduced(inst: &'a Hdt0lInstance) -> Result<Self> {
        let n = inst.a().len();
        let idx =
            |w: &Word| -> Vec<usize> { w.iter().map(|l| inst.a().index_of(l).unwrap()).collect() };
        let h_images: Vec<Vec<Vec<usize>>> = inst
            .pairs()
            .iter()
            .map(|p| p.h.images().iter().map(idx).collect())
            .collect();
        let g_images: Vec<Vec<Vec<usize>>> = inst
            .pairs()
            .iter()
            .map(|p| p.g.images().iter().map(idx).collect())
            .collect();
        let base = base_matrices(inst)?;

        // Greatest set S with h(a) = g(a) and h_i(a) = g_i(a) ∈ S* for all i.
        let mut shared: Vec<bool> = (0..n)
            .map(|a| {
                inst.final_h().images()[a] == inst.final_g().images()[a]
                    && (0..inst.pairs().len()).all(|i| h_images[i][a] == g_images[i][a])
            })
            .collect();
        loop {
            let drop: Vec<usize> = (0..n)
                .filter(|&a| {
                    shared[a]
                        && h_images
                            .iter()
                            .any(|imgs| imgs[a].iter().any(|&b| !shared[b]))
                })
                .collect();
            if drop.is_empty() {
                break;
            }
            for a in drop {
                shared[a] = false;
            }
        }

        // Canonical slot of (side, letter) after aliasing.
        let canon = |side: usize, a: usize| {
            if side == 1 && shared[a] {
                a
            } else {
                side * n + a
            }
        };
        let mut fixed: Vec<bool> = (0..2 * n).map(|s| canon(s / n, s % n) == s).collect();
        loop {
            let mut changed = false;
            for s in 0..2 * n {
                if !fixed[s] {
                    continue;
                }
                let (side, a) = (s / n, s % n);
                let images = if side == 0 { &h_images } else { &g_images };
                let ok = images.iter().all(|imgs| {
                    let word = &imgs[a];
                    word.iter().all(|&b| fixed[canon(side, b)])
                        && Matrix2::product(word.iter().map(|&b| &base[canon(side, b)])) == base[s]
                });
                if !ok {
                    fixed[s] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }

        let slots = (0..2 * n)
            .map(|s| {
                let c = canon(s / n, s % n);
                if fixed[c] {
                    Slot::Fixed(base[c].clone())
                } else if c != s {
                    Slot::Alias
                } else {
                    Slot::Free
                }
            })
            .collect::<Vec<_>>();
        let sys = Self::build(inst, slots.clone(), None)?;
        let vars = sys.free_list();
        match affine_invariants(&vars, &sys.images, |v| sys.base_value(v)) {
            Some(chart) => Self::build(inst, slots, Some(chart)),
            None => Ok(sys),
        }
    }

    fn build(
        inst: &'a Hdt0lInstance,
        slots: Vec<Slot>,
        chart: Option<AffineChart>,
    ) -> Result<Self> {
        let n = inst.a().len();
        let base = base_matrices(inst)?;
        let mut sys = SymbolicSystem {
            inst,
            n,
            slots,
            base,
            images: Vec::new(),
            chart,
        };
        let free = sys.free_list();
        let mut images = Vec::with_capacity(inst.pairs().len());
        for pair in inst.pairs() {
            let mut map = HashMap::new();
            let mut cache: HashMap<(u8, usize), Matrix2<MultiPoly>> = HashMap::new();
            for &v in &free {
                let (side, a, row, col) = split_index(n, v);
                let m = cache.entry((side, a)).or_insert_with(|| {
                    let morph = if side == 1 { &pair.h } else { &pair.g };
                    sys.word_matrix(side, &morph.images()[a])
                });
                let entry = m.get(row as usize, col as usize);
                // In chart coordinates Φ_i(y_f) = (Φ_i(x_f) − b_f) / scale; the
                // division is deferred to `substitute`.
                let image = match &sys.chart {
                    Some(_) => entry.sub(&MultiPoly::constant(sys.base_value(v))),
                    None => entry.clone(),
                };
                map.insert(v, image);
            }
            images.push(map);
        }
        sys.images = images;
        Ok(sys)
    }

    pub fn instance(&self) -> &Hdt0lInstance {
        self.inst
    }

    fn free_list(&self) -> Vec<u32> {
        (0..2 * self.n)
            .filter(|&s| matches!(self.slots[s], Slot::Free))
            .flat_map(|s| (0..4).map(move |k| (s * 4 + k) as u32))
            .filter(|v| {
                self.chart
                    .as_ref()
                    .is_none_or(|c| !c.pivots.contains_key(v))
            })
            .collect()
    }

    /// Number of variables left free.
    pub fn free_variables(&self) -> usize {
        self.free_list().len()
    }

    fn base_value(&self, v: u32) -> BigInt {
        let (side, a, row, col) = split_index(self.n, v);
        self.base[(side as usize - 1) * self.n + a]
            .get(row as usize, col as usize)
            .clone()
    }

    fn letter_matrix(&self, side: u8, a: usize) -> Matrix2<MultiPoly> {
        let slot = (side as usize - 1) * self.n + a;
        match &self.slots[slot] {
            Slot::Fixed(m) => {
                Matrix2::new(m.entries.clone().map(|row| row.map(MultiPoly::constant)))
            }
            Slot::Alias => self.letter_matrix(1, a),
            Slot::Free => {
                let e = |r: u8, c: u8| {
                    let v = var_index(self.n, side, a, r, c);
                    match &self.chart {
                        None => MultiPoly::var(v),
                        Some(chart) => {
                            let offset = match chart.pivots.get(&v) {
                                Some(p) => p.clone(),
                                None => MultiPoly::var(v).scale(&chart.scale),
                            };
                            offset.add(&MultiPoly::constant(self.base_value(v)))
                        }
                    }
                };
                Matrix2::new([[e(1, 1), e(1, 2)], [e(2, 1), e(2, 2)]])
            }
        }
    }

    /// The symbolic matrix of a word over A on the given side; letters must
    /// belong to A.
    pub fn word_matrix(&self, side: u8, u: &Word) -> Matrix2<MultiPoly> {
        let mut acc = Matrix2::identity();
        for l in u {
            let a = self.inst.a().index_of(l).expect("letter of A");
            acc = acc.mul(&self.letter_matrix(side, a));
        }
        acc
    }

    /// Φ_i applied to `p`. With a chart whose scale `s` is not 1 the result
    /// is `s^deg(p) · Φ_i(p)`, a nonzero multiple, which changes neither
    /// ideal membership nor vanishing at the base point.
    pub fn substitute(&self, p: &MultiPoly, label: usize) -> MultiPoly {
        let images = &self.images[label];
        let image = |v| images.get(&v).cloned().unwrap_or_else(|| MultiPoly::var(v));
        match &self.chart {
            Some(chart) if !chart.scale.is_one() => {
                let d = p.degree();
                let weighted = MultiPoly::from_terms(p.terms().map(|(m, c)| {
                    (
                        m.clone(),
                        c * num_traits::pow(chart.scale.clone(), (d - m.degree()) as usize),
                    )
                }));
                weighted.substitute(image)
            }
            _ => p.substitute(image),
        }
    }

    /// Value at the base point, where chart coordinates are all zero.
    pub fn evaluate(&self, p: &MultiPoly) -> BigInt {
        match self.chart {
            Some(_) => p.evaluate(|_| BigInt::zero()),
            None => p.evaluate(|v| self.base_value(v)),
        }
    }

    /// The four entries of `M₁(v) − M₂(w)`, row-major.
    pub fn initial_differences(&self) -> Vec<MultiPoly> {
        let l = self.word_matrix(1, self.inst.v());
        let r = self.word_matrix(2, self.inst.w());
        l.iter().zip(r.iter()).map(|(x, y)| x.sub(y)).collect()
    }

    /// Name of a variable; chart coordinates are marked with a prime.
    pub fn variable_name(&self, v: u32) -> String {
        let name = PolyVar::from_index(self.inst, v).name();
        match self.chart {
            Some(_) => format!("{name}'"),
            None => name,
        }
    }
}

/// μ(h(a)) for every letter, then μ(g(a)).
fn base_matrices(inst: &Hdt0lInstance) -> Result<Vec<Matrix2>> {
    inst.final_h()
        .images()
        .iter()
        .chain(inst.final_g().images())
        .map(|u| embed_word(inst.b(), u))
        .collect()
}

/// The symbolic matrix `M_side(u)`, with one free variable per entry.
pub fn poly_matrix(inst: &Hdt0lInstance, u: &Word, side: u8) -> Result<Matrix2<MultiPoly>> {
    crate::words::check_word(inst.a(), u)?;
    if !(1..=2).contains(&side) {
        return Err(Error::Precondition(format!(
            "side must be 1 or 2, got {side}"
        )));
    }
    Ok(SymbolicSystem::raw(inst)?.word_matrix(side, u))
}

/// Φ for the label named `label`.
pub fn substitute(inst: &Hdt0lInstance, p: &MultiPoly, label: &str) -> Result<MultiPoly> {
    let i = inst
        .label_index(label)
        .ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
    Ok(SymbolicSystem::raw(inst)?.substitute(p, i))
}

/// `X_{a,r,s} ↦ μ(h(a))_{r,s}` and `Y_{a,r,s} ↦ μ(g(a))_{r,s}`.
pub fn base_point(inst: &Hdt0lInstance) -> Result<HashMap<PolyVar, BigInt>> {
    let base = base_matrices(inst)?;
    let n = inst.a().len();
    Ok((0..8 * n as u32)
        .map(|v| {
            let (side, a, row, col) = split_index(n, v);
            let value = base[(side as usize - 1) * n + a]
                .get(row as usize, col as usize)
                .clone();
            (PolyVar::from_index(inst, v), value)
        })
        .collect())
}

/// A polynomial with the labels whose substitutions produced it, outermost
/// first.
#[derive(Clone, Debug)]
pub struct TrackedPoly {
    pub poly: MultiPoly,
    pub origin: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct AlgebraicOptions {
    pub max_steps: usize,
    pub max_reductions: u64,
    pub max_terms: usize,
    /// Eliminate aliased and constant letters before building the chain.
    pub reduce_ring: bool,
}

impl Default for AlgebraicOptions {
    fn default() -> Self {
        AlgebraicOptions {
            max_steps: DEFAULT_MAX_STEPS,
            max_reductions: 400_000,
            max_terms: 20_000,
            reduce_ring: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct AlgebraicOutcome {
    pub verdict: Verdict,
    /// Chain steps completed.
    pub depth: usize,
    pub tracked: usize,
    pub basis_size: usize,
    pub free_variables: usize,
    pub reductions: u64,
}

pub fn decide_hdt0l(inst: &Hdt0lInstance, max_steps: usize) -> Result<Verdict> {
    let options = AlgebraicOptions {
        max_steps,
        ..AlgebraicOptions::default()
    };
    Ok(decide_hdt0l_with(inst, &options)?.verdict)
}

pub fn decide_hdt0l_with(
    inst: &Hdt0lInstance,
    options: &AlgebraicOptions,
) -> Result<AlgebraicOutcome> {
    if options.max_steps == 0 {
        return Err(Error::Precondition(
            "max_chain_steps must be at least 1".into(),
        ));
    }
    let sys = if options.reduce_ring {
        SymbolicSystem::reduced(inst)?
    } else {
        SymbolicSystem::raw(inst)?
    };
    let mut budget = WorkBudget::new(options.max_reductions, options.max_terms);
    let mut outcome = AlgebraicOutcome {
        verdict: Verdict::Holds,
        depth: 0,
        tracked: 0,
        basis_size: 0,
        free_variables: sys.free_variables(),
        reductions: 0,
    };
    let finish = |mut outcome: AlgebraicOutcome, verdict: Verdict, budget: &WorkBudget| {
        outcome.verdict = verdict;
        outcome.reductions = budget.used();
        Ok(outcome)
    };

    // `frontier` holds the polynomials found at the last step together with
    // their normal forms modulo everything tracked before them.
    let mut frontier: Vec<TrackedPoly> = Vec::new();
    let mut pending: Vec<MultiPoly> = Vec::new();
    for p in sys.initial_differences() {
        if p.is_zero() {
            continue;
        }
        if !sys.evaluate(&p).is_zero() {
            return finish(outcome, counterexample(inst, &[])?, &budget);
        }
        pending.push(p.clone());
        frontier.push(TrackedPoly {
            poly: p,
            origin: Vec::new(),
        });
    }
    let mut ideal = IdealBasis::default();
    outcome.tracked = frontier.len();

    // Let I_k be the ideal of everything tracked up to step k. Each Φ_i maps
    // the step-k frontier into I_k once a step finds nothing new, and maps
    // earlier tracked polynomials into I_k by construction. Φ_i is a ring
    // homomorphism, so Φ_i(Σ r_j t_j) = Σ Φ_i(r_j) Φ_i(t_j) ∈ I_k: the ideal is
    // closed under every Φ_i and contains Φ_s(q) for every sequence s. All
    // its generators vanish at the base point, hence so does every Φ_s(q).
    loop {
        if frontier.is_empty() {
            return finish(outcome, Verdict::Holds, &budget);
        }
        if outcome.depth >= options.max_steps {
            let note = format!(
                "chain did not stabilize within {} steps (depth reached {})",
                options.max_steps, outcome.depth
            );
            return finish(outcome, Verdict::ResourceLimit(note), &budget);
        }
        outcome.depth += 1;
        // Images first: a non-vanishing value decides without touching the
        // ideal, which is by far the expensive part.
        let mut images: Vec<TrackedPoly> = Vec::new();
        for label in 0..inst.pairs().len() {
            for t in &frontier {
                let p = sys.substitute(&t.poly, label);
                if p.is_zero() {
                    continue;
                }
                let mut origin = Vec::with_capacity(t.origin.len() + 1);
                origin.push(label);
                origin.extend_from_slice(&t.origin);
                if !sys.evaluate(&p).is_zero() {
                    return finish(outcome, counterexample(inst, &origin)?, &budget);
                }
                images.push(TrackedPoly { poly: p, origin });
            }
        }
        if ideal.extend(&pending, &mut budget).is_err() {
            let depth = outcome.depth;
            return finish(outcome, exhausted(depth), &budget);
        }
        outcome.basis_size = ideal.basis().len();
        let mut next: Vec<TrackedPoly> = Vec::new();
        let mut seen: HashSet<MultiPoly> = HashSet::new();
        pending.clear();
        for t in images {
            let nf = match ideal.reduce_bounded(&t.poly, &mut budget) {
                Ok(nf) => nf,
                Err(_) => {
                    let depth = outcome.depth;
                    return finish(outcome, exhausted(depth), &budget);
                }
            };
            if !nf.is_zero() && seen.insert(nf.clone()) {
                pending.push(nf);
                next.push(t);
            }
        }
        outcome.tracked += next.len();
        frontier = next;
    }
}

fn exhausted(depth: usize) -> Verdict {
    Verdict::ResourceLimit(format!(
        "Gröbner work budget exhausted at chain depth {depth}"
    ))
}

fn labels_of(inst: &Hdt0lInstance, origin: &[usize]) -> Vec<String> {
    origin
        .iter()
        .map(|&i| inst.pairs()[i].label.clone())
        .collect()
}

fn counterexample(inst: &Hdt0lInstance, origin: &[usize]) -> Result<Verdict> {
    let labels = labels_of(inst, origin);
    let (left, right) = derive(inst, &labels)?;
    if left == right {
        return Err(Error::InternalSoundness(format!(
            "non-vanishing polynomial with origin ({}) but both derivations equal {left}",
            labels.join(" ")
        )));
    }
    Ok(Verdict::Counterexample(Witness::Sequence {
        labels,
        left,
        right,
    }))
}
