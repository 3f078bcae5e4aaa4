//! Buchberger's algorithm over the rationals, with polynomials kept as
//! primitive integer representatives.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::poly::{Monomial, MultiPoly};

/// Caps the work of a Gröbner computation.
#[derive(Clone, Debug)]
pub struct WorkBudget {
    pub max_reductions: u64,
    pub max_terms: usize,
    used: u64,
}

/// Returned when a [`WorkBudget`] runs out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Exhausted;

impl WorkBudget {
    pub fn new(max_reductions: u64, max_terms: usize) -> Self {
        WorkBudget {
            max_reductions,
            max_terms,
            used: 0,
        }
    }

    pub fn unlimited() -> Self {
        Self::new(u64::MAX, usize::MAX)
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    fn spend(&mut self, p: &MultiPoly) -> Result<(), Exhausted> {
        self.used += 1;
        if self.used > self.max_reductions || p.len() > self.max_terms {
            Err(Exhausted)
        } else {
            Ok(())
        }
    }
}

/// An ideal given by generators together with its reduced Gröbner basis.
#[derive(Clone, Debug, Default)]
pub struct IdealBasis {
    generators: Vec<MultiPoly>,
    groebner: Vec<MultiPoly>,
}

/// The reduced Gröbner basis of the ideal generated by `polys`.
pub fn groebner(polys: &[MultiPoly]) -> IdealBasis {
    groebner_bounded(polys, &mut WorkBudget::unlimited()).expect("unlimited budget")
}

pub fn groebner_bounded(
    polys: &[MultiPoly],
    budget: &mut WorkBudget,
) -> Result<IdealBasis, Exhausted> {
    let mut ideal = IdealBasis::default();
    ideal.extend(polys, budget)?;
    Ok(ideal)
}

impl IdealBasis {
    pub fn generators(&self) -> &[MultiPoly] {
        &self.generators
    }

    /// Reduced basis, sorted by leading monomial.
    pub fn basis(&self) -> &[MultiPoly] {
        &self.groebner
    }

    /// Whether the ideal is the whole ring.
    pub fn is_unit(&self) -> bool {
        self.groebner.iter().any(|g| g.is_constant())
    }

    /// Primitive normal form of `p`.
    pub fn reduce(&self, p: &MultiPoly) -> MultiPoly {
        let refs: Vec<&MultiPoly> = self.groebner.iter().collect();
        normal_form(p, &refs, &mut WorkBudget::unlimited()).expect("unlimited budget")
    }

    pub fn reduce_bounded(
        &self,
        p: &MultiPoly,
        budget: &mut WorkBudget,
    ) -> Result<MultiPoly, Exhausted> {
        let refs: Vec<&MultiPoly> = self.groebner.iter().collect();
        normal_form(p, &refs, budget)
    }

    pub fn contains(&self, p: &MultiPoly) -> bool {
        self.reduce(p).is_zero()
    }

    /// Adds generators and completes the basis again. On exhaustion the
    /// ideal is left unchanged.
    pub fn extend(
        &mut self,
        polys: &[MultiPoly],
        budget: &mut WorkBudget,
    ) -> Result<(), Exhausted> {
        let groebner = buchberger(self.groebner.clone(), polys, budget)?;
        self.generators
            .extend(polys.iter().filter(|p| !p.is_zero()).cloned());
        self.groebner = groebner;
        Ok(())
    }
}

/// The S-polynomial of `f` and `g`, scaled to integer coefficients.
pub fn s_polynomial(f: &MultiPoly, g: &MultiPoly) -> MultiPoly {
    let (mf, mg) = (f.leading_monomial().unwrap(), g.leading_monomial().unwrap());
    let (cf, cg) = (
        f.leading_coefficient().unwrap(),
        g.leading_coefficient().unwrap(),
    );
    let l = mf.lcm(mg);
    let d = cf.gcd(cg);
    let tf = mf.quotient_of(&l).unwrap();
    let tg = mg.quotient_of(&l).unwrap();
    f.mul_term(&tf, &(cg / &d))
        .sub(&g.mul_term(&tg, &(cf / &d)))
}

/// Full reduction of `p` by `basis`, returned as a primitive polynomial.
pub fn normal_form(
    p: &MultiPoly,
    basis: &[&MultiPoly],
    budget: &mut WorkBudget,
) -> Result<MultiPoly, Exhausted> {
    let mut rest = p.clone();
    // Terms already irreducible, kept in decreasing order.
    let mut done: Vec<(Monomial, BigInt)> = Vec::new();
    let mut steps = 0u32;
    while let Some(lm) = rest.leading_monomial().cloned() {
        let divisor = basis
            .iter()
            .find(|g| g.leading_monomial().is_some_and(|m| m.divides(&lm)));
        match divisor {
            Some(g) => {
                let c = rest.leading_coefficient().unwrap().clone();
                let lc = g.leading_coefficient().unwrap();
                let d = c.gcd(lc);
                let a = lc / &d;
                let b = &c / &d;
                let q = g.leading_monomial().unwrap().quotient_of(&lm).unwrap();
                rest = rest.scaled_sub(&a, &b, &q, g);
                if !a.is_one() {
                    for t in &mut done {
                        t.1 *= &a;
                    }
                }
                budget.spend(&rest)?;
                steps += 1;
                if steps.is_multiple_of(16) {
                    shrink(&mut rest, &mut done);
                }
            }
            None => {
                let (m, c) = rest.pop_leading().unwrap();
                done.push((m, c));
            }
        }
    }
    let mut out = MultiPoly::zero();
    for (m, c) in done.into_iter().rev() {
        out.push_leading(m, c);
    }
    Ok(out.primitive())
}

/// Divides the pending and finished parts by their common content.
fn shrink(rest: &mut MultiPoly, done: &mut [(Monomial, BigInt)]) {
    let mut g = rest.content();
    for (_, c) in done.iter() {
        if g.is_one() {
            return;
        }
        g = g.gcd(c);
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    *rest = rest.divide_exact(&g);
    for t in done.iter_mut() {
        t.1 = &t.1 / &g;
    }
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

/// Completes `basis` (already a reduced Gröbner basis) with `new`.
fn buchberger(
    basis: Vec<MultiPoly>,
    new: &[MultiPoly],
    budget: &mut WorkBudget,
) -> Result<Vec<MultiPoly>, Exhausted> {
    let mut polys: Vec<MultiPoly> = basis;
    let mut active: Vec<bool> = vec![true; polys.len()];
    let mut pairs: Vec<Pair> = Vec::new();
    let mut added = false;

    for p in new {
        let active_refs: Vec<&MultiPoly> = polys
            .iter()
            .zip(&active)
            .filter(|(_, a)| **a)
            .map(|(p, _)| p)
            .collect();
        let r = normal_form(p, &active_refs, budget)?;
        if r.is_zero() {
            continue;
        }
        added = true;
        polys.push(r);
        active.push(false);
        update(&polys, &mut active, &mut pairs, polys.len() - 1);
    }
    if !added {
        return Ok(polys);
    }

    // Normal strategy: smallest lcm first.
    while let Some(idx) = (0..pairs.len()).min_by(|&a, &b| pairs[a].lcm.cmp(&pairs[b].lcm)) {
        let pair = pairs.swap_remove(idx);
        let s = s_polynomial(&polys[pair.i], &polys[pair.j]);
        let active_refs: Vec<&MultiPoly> = polys
            .iter()
            .zip(&active)
            .filter(|(_, a)| **a)
            .map(|(p, _)| p)
            .collect();
        let r = normal_form(&s, &active_refs, budget)?;
        if r.is_zero() {
            continue;
        }
        polys.push(r);
        active.push(false);
        update(&polys, &mut active, &mut pairs, polys.len() - 1);
    }

    let minimal: Vec<MultiPoly> = polys
        .into_iter()
        .zip(active)
        .filter(|(_, a)| *a)
        .map(|(p, _)| p)
        .collect();
    interreduce(minimal, budget)
}

/// The Gebauer-Möller installation of polynomial `h` into the pair set.
fn update(polys: &[MultiPoly], active: &mut [bool], pairs: &mut Vec<Pair>, h: usize) {
    let lh = polys[h].leading_monomial().unwrap().clone();
    let candidates: Vec<(usize, Monomial, bool)> = (0..h)
        .filter(|&g| active[g])
        .map(|g| {
            let lg = polys[g].leading_monomial().unwrap();
            (g, lh.lcm(lg), lh.is_coprime(lg))
        })
        .collect();

    // Drop a new pair whose lcm is a proper multiple of another new pair's
    // lcm; among equal lcms keep one, preferring a coprime pair.
    let mut kept: Vec<usize> = Vec::new();
    for (k, (_, l, coprime)) in candidates.iter().enumerate() {
        let dominated = candidates.iter().enumerate().any(|(m, (_, l2, c2))| {
            if m == k {
                return false;
            }
            if l2 == l {
                // Equal lcm: keep the first coprime one, else the first one.
                if *coprime {
                    *c2 && m < k
                } else {
                    *c2 || m < k
                }
            } else {
                l2.divides(l)
            }
        });
        if !dominated {
            kept.push(k);
        }
    }
    let fresh: Vec<Pair> = kept
        .into_iter()
        .filter(|&k| !candidates[k].2)
        .map(|k| Pair {
            i: candidates[k].0,
            j: h,
            lcm: candidates[k].1.clone(),
        })
        .collect();

    pairs.retain(|p| {
        !lh.divides(&p.lcm)
            || lh.lcm(polys[p.i].leading_monomial().unwrap()) == p.lcm
            || lh.lcm(polys[p.j].leading_monomial().unwrap()) == p.lcm
    });
    pairs.extend(fresh);

    for g in 0..h {
        if active[g] && lh.divides(polys[g].leading_monomial().unwrap()) {
            active[g] = false;
        }
    }
    active[h] = true;
}

fn interreduce(
    mut basis: Vec<MultiPoly>,
    budget: &mut WorkBudget,
) -> Result<Vec<MultiPoly>, Exhausted> {
    basis.sort_by(|a, b| a.leading_monomial().cmp(&b.leading_monomial()));
    let mut out = Vec::with_capacity(basis.len());
    for k in 0..basis.len() {
        let others: Vec<&MultiPoly> = basis
            .iter()
            .enumerate()
            .filter(|&(m, _)| m != k)
            .map(|(_, p)| p)
            .collect();
        let p = &basis[k];
        let lm = p.leading_monomial().unwrap().clone();
        let lc = p.leading_coefficient().unwrap().clone();
        let mut tail = p.clone();
        tail.pop_leading();
        let reduced_tail = normal_form_raw(&tail, &others, budget)?;
        // lc·lm + tail ≡ lc·lm + reduced_tail / k for the scale k applied.
        let (scale, tail) = reduced_tail;
        let mut q = tail;
        let head = MultiPoly::monomial(lm, lc * scale);
        q = q.add(&head);
        out.push(q.primitive());
    }
    if out.iter().any(|p| p.is_constant()) {
        return Ok(vec![MultiPoly::one()]);
    }
    Ok(out)
}

/// Like [`normal_form`] but returns `(k, r)` with `k·p ≡ r` and `k > 0`,
/// without dividing out content.
fn normal_form_raw(
    p: &MultiPoly,
    basis: &[&MultiPoly],
    budget: &mut WorkBudget,
) -> Result<(BigInt, MultiPoly), Exhausted> {
    let mut rest = p.clone();
    let mut scale = BigInt::one();
    let mut done: Vec<(Monomial, BigInt)> = Vec::new();
    while let Some(lm) = rest.leading_monomial().cloned() {
        let divisor = basis
            .iter()
            .find(|g| g.leading_monomial().is_some_and(|m| m.divides(&lm)));
        match divisor {
            Some(g) => {
                let c = rest.leading_coefficient().unwrap().clone();
                let lc = g.leading_coefficient().unwrap();
                let d = c.gcd(lc);
                let mut a = lc / &d;
                let mut b = &c / &d;
                if a.is_negative() {
                    a = -a;
                    b = -b;
                }
                let q = g.leading_monomial().unwrap().quotient_of(&lm).unwrap();
                rest = rest.scaled_sub(&a, &b, &q, g);
                if !a.is_one() {
                    scale *= &a;
                    for t in &mut done {
                        t.1 *= &a;
                    }
                }
                budget.spend(&rest)?;
            }
            None => {
                let (m, c) = rest.pop_leading().unwrap();
                done.push((m, c));
            }
        }
    }
    let mut out = MultiPoly::zero();
    for (m, c) in done.into_iter().rev() {
        out.push_leading(m, c);
    }
    Ok((scale, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn x(v: u32) -> MultiPoly {
        MultiPoly::var(v)
    }

    fn c(k: i64) -> MultiPoly {
        MultiPoly::constant(BigInt::from(k))
    }

    fn is_groebner(basis: &[MultiPoly]) -> bool {
        let refs: Vec<&MultiPoly> = basis.iter().collect();
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                let s = s_polynomial(&basis[i], &basis[j]);
                if !normal_form(&s, &refs, &mut WorkBudget::unlimited())
                    .unwrap()
                    .is_zero()
                {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn empty_ideal() {
        let ideal = groebner(&[]);
        assert!(ideal.basis().is_empty());
        assert!(!ideal.contains(&x(0)));
        assert!(ideal.contains(&MultiPoly::zero()));
    }

    #[test]
    fn monomial_ideal_membership() {
        let ideal = groebner(&[x(0).pow(2), x(1).pow(2)]);
        let x2y = x(0).pow(2).mul(&x(1));
        assert!(ideal.contains(&x2y));
        assert!(ideal.contains(&x2y.add(&x(0).mul(&x(1).pow(2)))));
        assert!(!ideal.contains(&x(0).mul(&x(1))));
    }

    #[test]
    fn linear_system() {
        // x + y - 3, x - y - 1  ⇒  x = 2, y = 1
        let ideal = groebner(&[x(0).add(&x(1)).sub(&c(3)), x(0).sub(&x(1)).sub(&c(1))]);
        assert_eq!(ideal.basis().len(), 2);
        assert!(ideal.contains(&x(0).sub(&c(2))));
        assert!(ideal.contains(&x(1).sub(&c(1))));
        assert!(!ideal.contains(&x(1)));
    }

    #[test]
    fn inconsistent_system_is_unit() {
        let ideal = groebner(&[x(0).mul(&x(1)).sub(&c(1)), x(0)]);
        assert!(ideal.is_unit());
        assert!(ideal.contains(&c(5)));
    }

    #[test]
    fn twisted_cubic() {
        // y - x², z - x³ ; standard example with a non-trivial basis.
        let (xx, y, z) = (x(0), x(1), x(2));
        let ideal = groebner(&[y.sub(&xx.pow(2)), z.sub(&xx.pow(3))]);
        assert!(is_groebner(ideal.basis()));
        assert!(ideal.contains(&y.pow(3).sub(&z.pow(2))));
        assert!(ideal.contains(&xx.mul(&z).sub(&y.pow(2))));
        assert!(!ideal.contains(&y.sub(&z)));
    }

    #[test]
    fn incremental_extension_matches_batch() {
        let gens = [
            x(0).pow(2).sub(&x(1)),
            x(1).pow(2).sub(&x(2)),
            x(0).mul(&x(2)).sub(&c(1)),
        ];
        let batch = groebner(&gens);
        let mut inc = groebner(&gens[..1]);
        inc.extend(&gens[1..], &mut WorkBudget::unlimited())
            .unwrap();
        assert_eq!(batch.basis(), inc.basis());
    }

    #[test]
    fn budget_exhaustion() {
        let gens = [
            x(0).pow(2).sub(&x(1)),
            x(1).pow(2).sub(&x(2)),
            x(0).mul(&x(2)).sub(&c(1)),
        ];
        let mut budget = WorkBudget::new(2, usize::MAX);
        assert_eq!(groebner_bounded(&gens, &mut budget).unwrap_err(), Exhausted);
    }

    fn small_poly() -> impl Strategy<Value = MultiPoly> {
        prop::collection::vec(((0u32..3, 0u32..3, 0u32..2), -3i64..4), 1..4).prop_map(|ts| {
            MultiPoly::from_terms(ts.into_iter().map(|((a, b, d), k)| {
                (
                    Monomial::from_exponents([(0, a), (1, b), (2, d)]),
                    BigInt::from(k),
                )
            }))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn output_satisfies_buchberger_criterion(gens in prop::collection::vec(small_poly(), 1..4)) {
            let ideal = groebner(&gens);
            prop_assert!(is_groebner(ideal.basis()));
            for g in &gens {
                prop_assert!(ideal.contains(g));
            }
            // Reduced: no term of an element is divisible by another leading monomial.
            for (i, p) in ideal.basis().iter().enumerate() {
                for (j, q) in ideal.basis().iter().enumerate() {
                    if i != j {
                        let lq = q.leading_monomial().unwrap();
                        prop_assert!(p.terms().all(|(m, _)| !lq.divides(m)));
                    }
                }
            }
        }

        #[test]
        fn products_with_generators_are_members(gens in prop::collection::vec(small_poly(), 1..3), k in small_poly()) {
            let ideal = groebner(&gens);
            prop_assert!(ideal.contains(&gens[0].mul(&k)));
        }
    }
}
