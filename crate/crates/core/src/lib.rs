//! Decision procedures for copyful streaming string transducers.
//!
//! The crate evaluates SSTs, builds synchronized products, translates
//! between SST equivalence/functionality and HDT0L sequence equivalence in
//! both directions, and decides HDT0L validity either by bounded search or
//! by an algebraic procedure based on polynomial ideals.

pub mod algebra;
pub mod error;
pub mod format;
pub mod hdt0l;
pub mod nfa;
pub mod reductions;
pub mod report;
pub mod sst;
pub mod verdict;
pub mod words;

pub use error::{Error, Result, ValidationError};
pub use hdt0l::{bounded_validity, derive, Hdt0lInstance, MorphismPair};
pub use nfa::{nfa_equivalent, Nfa};
pub use reductions::{
    bisst_to_hdt0l, check_diagonal, check_equivalent, check_functional, hdt0l_to_sst_pair,
    Decision, Engine, ReductionTrace,
};
pub use sst::{product, Output, Run, Sst, SstParts, State, Transition};
pub use verdict::{Verdict, VerdictKind, Witness};
pub use words::{Alphabet, Letter, Morphism, Substitution, Word};
