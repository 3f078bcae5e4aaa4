use std::fmt;

use crate::words::Word;

/// Outcome of a decision procedure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// The property (validity, equivalence, functionality, ...) holds.
    Holds,
    /// The property fails; the witness can be replayed.
    Counterexample(Witness),
    /// The procedure stopped at its budget without an answer.
    ResourceLimit(String),
}

impl Verdict {
    pub fn kind(&self) -> VerdictKind {
        match self {
            Verdict::Holds => VerdictKind::Holds,
            Verdict::Counterexample(_) => VerdictKind::Counterexample,
            Verdict::ResourceLimit(_) => VerdictKind::ResourceLimit,
        }
    }

    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Counterexample(w) => Some(w),
            _ => None,
        }
    }

    pub fn is_counterexample(&self) -> bool {
        matches!(self, Verdict::Counterexample(_))
    }

    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Verdict::ResourceLimit(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictKind {
    Holds,
    Counterexample,
    ResourceLimit,
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerdictKind::Holds => "holds",
            VerdictKind::Counterexample => "counterexample",
            VerdictKind::ResourceLimit => "resource limit",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// A word accepted by exactly one of two automata (1 or 2), with the
    /// output of the accepting machine when there is one.
    Domain {
        word: Word,
        accepted_by: usize,
        output: Option<Word>,
    },
    /// An input word producing two different outputs.
    Outputs { word: Word, left: Word, right: Word },
    /// An HDT0L label sequence (outermost label first) with its two
    /// derived words.
    Sequence {
        labels: Vec<String>,
        left: Word,
        right: Word,
    },
}
