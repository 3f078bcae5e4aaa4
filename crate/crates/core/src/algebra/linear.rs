//! Affine invariants of the substitution system.
//!
//! An affine form `ℓ` vanishing at the base point is invariant when every
//! `Φ_i(ℓ)` lies in the ideal generated by the invariant forms. The largest
//! such space is a greatest fixed point: start from all forms vanishing at
//! the base point and keep those whose images reduce to zero modulo the
//! current space, until nothing is dropped. The ideal it generates is closed
//! under every `Φ_i` and vanishes at the base point, so the chain may work
//! modulo it: each pivot variable is replaced by an affine expression in
//! the others.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::{Monomial, MultiPoly};

type RPoly = BTreeMap<Monomial, BigRational>;

fn rational(p: &MultiPoly) -> RPoly {
    p.terms()
        .map(|(m, c)| (m.clone(), BigRational::from_integer(c.clone())))
        .collect()
}

fn add_scaled(acc: &mut RPoly, p: &RPoly, k: &BigRational) {
    for (m, c) in p {
        let e = acc.entry(m.clone()).or_insert_with(BigRational::zero);
        *e += c * k;
        if e.is_zero() {
            acc.remove(m);
        }
    }
}

fn mul(p: &RPoly, q: &RPoly) -> RPoly {
    let mut acc = RPoly::new();
    for (m, c) in q {
        let mut t = RPoly::new();
        for (n, d) in p {
            t.insert(n.mul(m), d * c);
        }
        add_scaled(&mut acc, &t, &BigRational::one());
    }
    acc
}

fn substitute(p: &RPoly, images: &HashMap<u32, RPoly>) -> RPoly {
    let mut acc = RPoly::new();
    for (m, c) in p {
        let mut kept = Vec::new();
        let mut t: RPoly = RPoly::from([(Monomial::one(), c.clone())]);
        for &(v, e) in m.exponents() {
            match images.get(&v) {
                Some(img) => {
                    for _ in 0..e {
                        t = mul(&t, img);
                    }
                }
                None => kept.push((v, e)),
            }
        }
        let rest = Monomial::from_exponents(kept);
        let t: RPoly = t.into_iter().map(|(n, d)| (n.mul(&rest), d)).collect();
        add_scaled(&mut acc, &t, &BigRational::one());
    }
    acc
}

/// Rows in reduced echelon form with their pivot columns.
struct Echelon {
    rows: Vec<Vec<BigRational>>,
    pivots: Vec<usize>,
}

fn echelon(mut rows: Vec<Vec<BigRational>>, width: usize) -> Echelon {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..width {
        let Some(found) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, found);
        let inv = rows[r][col].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let k = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &k * y;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    Echelon { rows, pivots }
}

/// Basis of `{c : Σ_m c_m columns_m = 0}` for columns given as sparse maps.
fn kernel<K: Ord + Clone>(columns: &[BTreeMap<K, BigRational>]) -> Vec<Vec<BigRational>> {
    let k = columns.len();
    let mut keys: BTreeMap<K, usize> = BTreeMap::new();
    for col in columns {
        for key in col.keys() {
            let next = keys.len();
            keys.entry(key.clone()).or_insert(next);
        }
    }
    let mut rows = vec![vec![BigRational::zero(); k]; keys.len()];
    for (j, col) in columns.iter().enumerate() {
        for (key, v) in col {
            rows[keys[key]][j] = v.clone();
        }
    }
    let e = echelon(rows, k);
    let mut basis = Vec::new();
    for free in (0..k).filter(|c| !e.pivots.contains(c)) {
        let mut v = vec![BigRational::zero(); k];
        v[free] = BigRational::one();
        for (row, &p) in e.rows.iter().zip(&e.pivots) {
            v[p] = -row[free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Integral coordinates on the invariant affine space: with `b` the base
/// point, a free variable is `x_f = b_f + scale·y_f` and a pivot is
/// `x_p = b_p + pivots[p]`, a linear form in the `y_f` with integer
/// coefficients. The new coordinates `y_f` reuse the indices of `x_f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct AffineChart {
    pub pivots: HashMap<u32, MultiPoly>,
    pub scale: BigInt,
}

/// The greatest invariant affine space through the base point, or `None`
/// when no affine form is invariant.
pub(crate) fn affine_invariants<F>(
    vars: &[u32],
    images: &[HashMap<u32, MultiPoly>],
    base: F,
) -> Option<AffineChart>
where
    F: Fn(u32) -> BigInt,
{
    let n = vars.len();
    if n == 0 {
        return None;
    }
    let phi: Vec<Vec<RPoly>> = images
        .iter()
        .map(|img| vars.iter().map(|v| rational(&img[v])).collect())
        .collect();
    // Forms as coefficient vectors over `vars`, constant last.
    let mut forms: Vec<Vec<BigRational>> = (0..n)
        .map(|j| {
            let mut f = vec![BigRational::zero(); n + 1];
            f[j] = BigRational::one();
            f[n] = -BigRational::from_integer(base(vars[j]));
            f
        })
        .collect();
    loop {
        let e = echelon(forms.clone(), n);
        if e.rows.is_empty() {
            return None;
        }
        let elim = eliminations(vars, &e);
        let mut columns: Vec<BTreeMap<(usize, Monomial), BigRational>> =
            vec![BTreeMap::new(); forms.len()];
        for (i, phi_i) in phi.iter().enumerate() {
            let reduced: Vec<RPoly> = phi_i.iter().map(|p| substitute(p, &elim)).collect();
            for (col, form) in columns.iter_mut().zip(&forms) {
                let mut acc = RPoly::new();
                for (j, c) in form[..n].iter().enumerate() {
                    if !c.is_zero() {
                        add_scaled(&mut acc, &reduced[j], c);
                    }
                }
                add_scaled(
                    &mut acc,
                    &RPoly::from([(Monomial::one(), BigRational::one())]),
                    &form[n],
                );
                col.extend(acc.into_iter().map(|(m, c)| ((i, m), c)));
            }
        }
        let ker = kernel(&columns);
        if ker.len() == forms.len() {
            break;
        }
        forms = ker
            .iter()
            .map(|c| {
                let mut f = vec![BigRational::zero(); n + 1];
                for (cm, form) in c.iter().zip(&forms) {
                    if !cm.is_zero() {
                        for (x, y) in f.iter_mut().zip(form) {
                            *x += cm * y;
                        }
                    }
                }
                f
            })
            .collect();
    }
    let e = echelon(forms, n);
    let elim = eliminations(vars, &e);
    let mut scale = BigInt::one();
    for p in elim.values() {
        for (m, c) in p {
            if !m.is_one() {
                scale = scale.lcm(c.denom());
            }
        }
    }
    let k = BigRational::from_integer(scale.clone());
    let pivots = elim
        .into_iter()
        .map(|(v, p)| {
            let terms = p
                .into_iter()
                .filter(|(m, _)| !m.is_one())
                .map(|(m, c)| (m, (c * &k).to_integer()));
            (v, MultiPoly::from_terms(terms))
        })
        .collect();
    Some(AffineChart { pivots, scale })
}

fn eliminations(vars: &[u32], e: &Echelon) -> HashMap<u32, RPoly> {
    let n = vars.len();
    let mut elim = HashMap::new();
    for (row, &p) in e.rows.iter().zip(&e.pivots) {
        let mut expr = RPoly::new();
        for (j, c) in row[..n].iter().enumerate() {
            if j != p && !c.is_zero() {
                expr.insert(Monomial::var(vars[j]), -c.clone());
            }
        }
        if !row[n].is_zero() {
            expr.insert(Monomial::one(), -row[n].clone());
        }
        elim.insert(vars[p], expr);
    }
    elim
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(v: u32) -> MultiPoly {
        MultiPoly::var(v)
    }

    fn c(k: i64) -> MultiPoly {
        MultiPoly::constant(BigInt::from(k))
    }

    #[test]
    fn finds_copy_and_constant() {
        // Φ: x0 ↦ x0 + x2, x1 ↦ x1 + x2, x2 ↦ x2 x2; base (0, 0, 1).
        let images = vec![HashMap::from([
            (0, x(0).add(&x(2))),
            (1, x(1).add(&x(2))),
            (2, x(2).mul(&x(2))),
        ])];
        let base = |v: u32| BigInt::from([0, 0, 1][v as usize]);
        let chart = affine_invariants(&[0, 1, 2], &images, base).unwrap();
        assert_eq!(chart.pivots.len(), 2);
        assert_eq!(chart.pivots[&0], x(1));
        assert!(chart.pivots[&2].is_zero());
        assert_eq!(chart.scale, BigInt::one());
    }

    #[test]
    fn drops_forms_broken_by_substitution() {
        // x0 ↦ x0 + 1 moves away from its base value; x1 ↦ x1 x1 keeps 1.
        let images = vec![HashMap::from([(0, x(0).add(&c(1))), (1, x(1).mul(&x(1)))])];
        let base = |v: u32| BigInt::from([0, 1][v as usize]);
        let chart = affine_invariants(&[0, 1], &images, base).unwrap();
        assert_eq!(chart.pivots.len(), 1);
        assert!(chart.pivots[&1].is_zero());
    }

    #[test]
    fn fractional_relations_are_scaled() {
        // x0 and x1 jump together by 1 and 2: 2·x0 − x1 is invariant.
        let images = vec![HashMap::from([(0, c(2)), (1, c(3))])];
        let base = |v: u32| BigInt::from([1, 1][v as usize]);
        let chart = affine_invariants(&[0, 1], &images, base).unwrap();
        assert_eq!(chart.pivots.len(), 1);
        assert_eq!(chart.scale, BigInt::from(2));
        assert_eq!(chart.pivots[&0], x(1));
    }

    #[test]
    fn no_invariant_when_everything_moves() {
        let images = vec![HashMap::from([(0, x(0).add(&c(1)))])];
        assert!(affine_invariants(&[0], &images, |_| BigInt::zero()).is_none());
    }
}
