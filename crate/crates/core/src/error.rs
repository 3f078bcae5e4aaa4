use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("letter `{letter}` is outside the domain of {context}")]
    DomainViolation { letter: String, context: String },

    #[error("alphabet mismatch: expected `{expected}`, found `{found}`")]
    AlphabetMismatch { expected: String, found: String },

    #[error("invalid token `{0}`")]
    InvalidToken(String),

    #[error("duplicate token `{token}` in {context}")]
    DuplicateToken { token: String, context: String },

    #[error(transparent)]
    Validation(#[from] ValidationError),

    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    /// A decision procedure produced a result that contradicts one of its
    /// own correctness properties.
    #[error("internal soundness failure: {0}")]
    InternalSoundness(String),
}

/// Structural problems found by [`crate::sst::Sst::validate`] and
/// [`crate::hdt0l::Hdt0lInstance::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("state `{0}` is not declared")]
    DanglingState(String),

    #[error("letter `{letter}` does not belong to the {alphabet} alphabet")]
    ForeignLetter { letter: String, alphabet: String },

    #[error("transition {0} has no variable update")]
    RhoGap(String),

    #[error("update of transition {0} is defined, but the transition is not")]
    UpdateWithoutTransition(String),

    #[error("update of transition {transition} does not assign variable `{variable}`")]
    MissingAssignment {
        transition: String,
        variable: String,
    },

    #[error("`{variable}` is not a declared variable (used in {context})")]
    UnknownVariable { variable: String, context: String },

    #[error("output defined on non-final state `{0}`")]
    OutputOnNonFinal(String),

    #[error("output of state `{state}` has arity {found}, machine has arity {expected}")]
    ArityMismatch {
        state: String,
        expected: usize,
        found: usize,
    },

    #[error("variable `{0}` collides with an output letter")]
    VariableLetterClash(String),

    #[error("morphism `{label}` has no image for letter `{letter}`")]
    MissingImage { label: String, letter: String },

    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
}
