//! Rendering of verdicts for the command line.

use std::fmt::Write as _;

use serde::Serialize;

use crate::reductions::Decision;
use crate::verdict::{Verdict, VerdictKind, Witness};
use crate::words::Word;

/// Exit status for malformed input, unknown flags and failed preconditions.
pub const EXIT_INPUT_ERROR: i32 = 3;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessReport {
    Domain {
        word: String,
        accepted_by: usize,
        output: Option<String>,
    },
    Outputs {
        word: String,
        left: String,
        right: String,
    },
    Sequence {
        labels: Vec<String>,
        left: String,
        right: String,
    },
}

impl From<&Witness> for WitnessReport {
    fn from(w: &Witness) -> Self {
        let s = Word::to_string;
        match w {
            Witness::Domain {
                word,
                accepted_by,
                output,
            } => WitnessReport::Domain {
                word: s(word),
                accepted_by: *accepted_by,
                output: output.as_ref().map(s),
            },
            Witness::Outputs { word, left, right } => WitnessReport::Outputs {
                word: s(word),
                left: s(left),
                right: s(right),
            },
            Witness::Sequence {
                labels,
                left,
                right,
            } => WitnessReport::Sequence {
                labels: labels.clone(),
                left: s(left),
                right: s(right),
            },
        }
    }
}

/// The result of one command, rendered either for people or as JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub command: String,
    pub verdict: VerdictKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub engine: String,
    pub consumed: String,
}

impl Report {
    pub fn new(command: &str, verdict: &Verdict, engine: &str, consumed: &str) -> Self {
        Report {
            command: command.to_string(),
            verdict: verdict.kind(),
            witness: verdict.witness().map(WitnessReport::from),
            reason: match verdict {
                Verdict::ResourceLimit(r) => Some(r.clone()),
                _ => None,
            },
            engine: engine.to_string(),
            consumed: consumed.to_string(),
        }
    }

    pub fn from_decision(command: &str, d: &Decision) -> Self {
        Report::new(command, &d.verdict, &d.engine.to_string(), &d.consumed)
    }

    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            VerdictKind::Holds => 0,
            VerdictKind::Counterexample => 1,
            VerdictKind::ResourceLimit => 2,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_human(&self) -> String {
        let mut s = format!("{}: {}\n", self.command, self.verdict);
        match &self.witness {
            Some(WitnessReport::Domain {
                word,
                accepted_by,
                output,
            }) => {
                let _ = writeln!(s, "  input:       {word}");
                let _ = writeln!(s, "  accepted by: machine {accepted_by} only");
                if let Some(o) = output {
                    let _ = writeln!(s, "  output:      {o}");
                }
            }
            Some(WitnessReport::Outputs { word, left, right }) => {
                let _ = writeln!(s, "  input: {word}");
                let _ = writeln!(s, "  left:  {left}");
                let _ = writeln!(s, "  right: {right}");
            }
            Some(WitnessReport::Sequence {
                labels,
                left,
                right,
            }) => {
                let seq = if labels.is_empty() {
                    "(empty)".to_string()
                } else {
                    labels.join(" ")
                };
                let _ = writeln!(s, "  labels: {seq}");
                let _ = writeln!(s, "  left:   {left}");
                let _ = writeln!(s, "  right:  {right}");
            }
            None => {}
        }
        if let Some(r) = &self.reason {
            let _ = writeln!(s, "  reason:   {r}");
        }
        let _ = writeln!(s, "  engine:   {}", self.engine);
        let _ = writeln!(s, "  consumed: {}", self.consumed);
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Alphabet;

    #[test]
    fn exit_codes_follow_verdicts() {
        let b = Alphabet::new("B", ["e", "f"]).unwrap();
        let w = Witness::Sequence {
            labels: vec!["1".into()],
            left: b.parse_word("f e").unwrap(),
            right: b.parse_word("e f").unwrap(),
        };
        let cases = [
            (Verdict::Holds, 0),
            (Verdict::Counterexample(w), 1),
            (Verdict::ResourceLimit("valid up to 3".into()), 2),
        ];
        for (v, code) in cases {
            assert_eq!(
                Report::new("diagonal", &v, "bounded", "x").exit_code(),
                code
            );
        }
    }

    #[test]
    fn json_and_human_agree() {
        let b = Alphabet::new("B", ["e", "f"]).unwrap();
        let v = Verdict::Counterexample(Witness::Outputs {
            word: Word::empty(),
            left: b.parse_word("e").unwrap(),
            right: Word::empty(),
        });
        let r = Report::new("equiv", &v, "ideal", "chain depth 0");
        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json["verdict"], "counterexample");
        assert_eq!(json["witness"]["kind"], "outputs");
        assert_eq!(json["witness"]["left"], "e");
        assert_eq!(json["witness"]["right"], "~");
        let human = r.to_human();
        assert!(human.contains("left:  e"));
        assert!(human.contains("right: ~"));
        assert!(human.starts_with("equiv: counterexample"));
    }
}
