//! Algebraic decision procedure for HDT0L validity.

mod engine;
mod groebner;
mod linear;
mod matrix;
mod poly;

pub use engine::{
    base_point, decide_hdt0l, decide_hdt0l_with, poly_matrix, substitute, AlgebraicOptions,
    AlgebraicOutcome, PolyVar, SymbolicSystem, TrackedPoly, DEFAULT_MAX_STEPS,
};
pub use groebner::{
    groebner, groebner_bounded, normal_form, s_polynomial, Exhausted, IdealBasis, WorkBudget,
};
pub use matrix::{embed_word, letter_matrix, Entry, Matrix2};
pub use poly::{Monomial, MultiPoly};
