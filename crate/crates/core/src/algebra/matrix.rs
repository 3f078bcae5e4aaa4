//! 2×2 matrices over integers and polynomials, and the word embedding μ.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::Result;
use crate::words::{Alphabet, Word};

use super::poly::MultiPoly;

/// The operations a matrix entry needs.
pub trait Entry: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
}

impl Entry for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
}

impl Entry for MultiPoly {
    fn zero() -> Self {
        MultiPoly::zero()
    }
    fn one() -> Self {
        MultiPoly::one()
    }
    fn add(&self, other: &Self) -> Self {
        MultiPoly::add(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        MultiPoly::mul(self, other)
    }
}

/// Row-major 2×2 matrix.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Matrix2<T = BigInt> {
    pub entries: [[T; 2]; 2],
}

impl<T: Entry> Matrix2<T> {
    pub fn new(entries: [[T; 2]; 2]) -> Self {
        Matrix2 { entries }
    }

    pub fn identity() -> Self {
        Matrix2::new([[T::one(), T::zero()], [T::zero(), T::one()]])
    }

    /// Entry at 1-based `(row, col)`.
    pub fn get(&self, row: usize, col: usize) -> &T {
        &self.entries[row - 1][col - 1]
    }

    pub fn mul(&self, o: &Matrix2<T>) -> Matrix2<T> {
        let e = &self.entries;
        let f = &o.entries;
        let cell = |r: usize, c: usize| e[r][0].mul(&f[0][c]).add(&e[r][1].mul(&f[1][c]));
        Matrix2::new([[cell(0, 0), cell(0, 1)], [cell(1, 0), cell(1, 1)]])
    }

    pub fn product<'a, I>(items: I) -> Matrix2<T>
    where
        T: 'a,
        I: IntoIterator<Item = &'a Matrix2<T>>,
    {
        items
            .into_iter()
            .fold(Matrix2::identity(), |acc, m| acc.mul(m))
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.entries.iter().flatten()
    }
}

impl Matrix2<BigInt> {
    pub fn from_i64(e: [[i64; 2]; 2]) -> Self {
        Matrix2::new(e.map(|row| row.map(BigInt::from)))
    }
}

impl<T: fmt::Display> fmt::Display for Matrix2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = &self.entries;
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            e[0][0], e[0][1], e[1][0], e[1][1]
        )
    }
}

/// μ of the letter with 1-based index `i`: `M_a · M_b^i = [[1+i, 1], [i, 1]]`.
pub fn letter_matrix(i: usize) -> Matrix2 {
    let i = BigInt::from(i);
    Matrix2::new([
        [&i + <BigInt as One>::one(), <BigInt as One>::one()],
        [i, <BigInt as One>::one()],
    ])
}

/// The injective monoid embedding of `alphabet*` into 2×2 integer matrices.
pub fn embed_word(alphabet: &Alphabet, u: &Word) -> Result<Matrix2> {
    crate::words::check_word(alphabet, u)?;
    let mut acc = Matrix2::identity();
    for letter in u {
        let i = alphabet.index_of(letter).expect("checked") + 1;
        acc = acc.mul(&letter_matrix(i));
    }
    Ok(acc)
}
