//! The SST file format.
//!
//! ```text
//! sst
//! input: 0 1
//! output: e f
//! states: q0 q1
//! initial: q0
//! final: q1
//! vars: X Y
//! trans: q0 0 q1 { X := e ; Y := ~ }
//! trans: q1 1 q1 { X := X e ; Y := Y f }
//! out: q1 = X Y
//! ```
//!
//! A pair output is written `out: q = X | Y`. A transition block may span
//! several lines. The optional `arity: 2` marks a pair machine that has no
//! output declared.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::error::Result;
use crate::sst::{Output, Sst, SstParts, State, Transition};
use crate::words::{Alphabet, Letter, Substitution, Word};

use super::{error_at, lex, name_list, tok_error, Cursor, Line, Tok};

const KEYWORDS: [&str; 10] = [
    "input:", "output:", "states:", "initial:", "final:", "vars:", "arity:", "trans:", "out:",
    "sst",
];

/// Joins lines of a transition block that spans several lines.
fn directives(text: &str) -> Result<Vec<Line>> {
    let mut out: Vec<Line> = Vec::new();
    let mut depth = 0i32;
    for line in lex(text) {
        if depth > 0 {
            let last = out.last_mut().expect("open block");
            last.toks.extend(line.toks.iter().cloned());
            last.end = line.end;
        } else {
            out.push(line.clone());
        }
        for t in &line.toks {
            match t.text.as_str() {
                "{" => depth += 1,
                "}" => depth -= 1,
                _ => {}
            }
        }
    }
    if depth > 0 {
        let last = out.last().expect("open block");
        return Err(error_at(last.end.0, last.end.1, "unterminated `{` block"));
    }
    Ok(out)
}

struct Symbols {
    input: Alphabet,
    output: Alphabet,
    vars: Alphabet,
    states: HashMap<String, State>,
}

impl Symbols {
    fn state(&self, t: &Tok) -> Result<State> {
        self.states
            .get(&t.text)
            .cloned()
            .ok_or_else(|| tok_error(t, format!("unknown state `{}`", t.text)))
    }

    fn rhs(&self, toks: &[Tok]) -> Result<Word> {
        let mut w = Word::empty();
        for t in toks {
            if t.text == "~" {
                continue;
            }
            let l = self
                .vars
                .letter(&t.text)
                .or_else(|| self.output.letter(&t.text))
                .ok_or_else(|| {
                    tok_error(
                        t,
                        format!("`{}` is neither a variable nor an output letter", t.text),
                    )
                })?;
            w.push(l);
        }
        Ok(w)
    }
}

pub fn parse_sst(text: &str) -> Result<Sst> {
    let lines = directives(text)?;
    let Some(first) = lines.first() else {
        return Err(error_at(1, 1, "empty file: expected `sst`"));
    };
    if first.toks.len() != 1 || first.toks[0].text != "sst" {
        return Err(tok_error(&first.toks[0], "expected the header `sst`"));
    }

    let mut decls: BTreeMap<String, &Line> = BTreeMap::new();
    let mut bodies: Vec<&Line> = Vec::new();
    for line in &lines[1..] {
        let head = &line.toks[0];
        match head.text.as_str() {
            "trans:" | "out:" => bodies.push(line),
            k if KEYWORDS.contains(&k) && k != "sst" => {
                if decls.insert(k.to_string(), line).is_some() {
                    return Err(tok_error(head, format!("duplicate `{k}` directive")));
                }
            }
            k => return Err(tok_error(head, format!("unknown directive `{k}`"))),
        }
    }
    let list = |key: &str, required: bool| -> Result<Vec<String>> {
        match decls.get(key) {
            Some(line) => name_list(&line.toks[1..], &format!("a `{key}` entry")),
            None if required => Err(error_at(1, 1, format!("missing `{key}` directive"))),
            None => Ok(Vec::new()),
        }
    };
    let input = Alphabet::new("input", list("input:", true)?)?;
    let output = Alphabet::new("output", list("output:", true)?)?;
    let vars = Alphabet::new("vars", list("vars:", false)?)?;
    let state_names = list("states:", true)?;
    let states: Vec<State> = state_names.iter().map(|s| State::new(s)).collect();
    let symbols = Symbols {
        input,
        output,
        vars,
        states: state_names
            .iter()
            .cloned()
            .zip(states.iter().cloned())
            .collect(),
    };

    let initial = {
        let line = decls
            .get("initial:")
            .ok_or_else(|| error_at(1, 1, "missing `initial:` directive"))?;
        let mut c = Cursor::new(line);
        c.next();
        let q = symbols.state(c.name("a state")?)?;
        c.finish()?;
        q
    };
    let mut finals = BTreeSet::new();
    if let Some(line) = decls.get("final:") {
        for t in &line.toks[1..] {
            if !finals.insert(symbols.state(t)?) {
                return Err(tok_error(t, format!("duplicate final state `{}`", t.text)));
            }
        }
    }
    let declared_arity = match decls.get("arity:") {
        Some(line) => {
            let mut c = Cursor::new(line);
            c.next();
            let t = c.name("1 or 2")?;
            c.finish()?;
            match t.text.as_str() {
                "1" => Some(1),
                "2" => Some(2),
                _ => return Err(tok_error(t, "arity must be 1 or 2")),
            }
        }
        None => None,
    };

    let mut transitions = BTreeSet::new();
    let mut updates = BTreeMap::new();
    let mut outputs = BTreeMap::new();
    for line in bodies {
        let mut c = Cursor::new(line);
        let head = c.next().unwrap();
        if head.text == "trans:" {
            let q = symbols.state(c.name("a source state")?)?;
            let at = c.name("an input letter")?;
            let a = symbols
                .input
                .letter(&at.text)
                .ok_or_else(|| tok_error(at, format!("`{}` is not an input letter", at.text)))?;
            let q2 = symbols.state(c.name("a target state")?)?;
            let t = Transition::new(&q, &a, &q2);
            c.expect("{")?;
            let mut images: Vec<(Letter, Word)> = Vec::new();
            loop {
                if c.peek().is_some_and(|t| t.text == "}") {
                    break;
                }
                let xt = c.name("a variable")?;
                let x = symbols.vars.letter(&xt.text).ok_or_else(|| {
                    tok_error(xt, format!("`{}` is not a declared variable", xt.text))
                })?;
                if images.iter().any(|(y, _)| *y == x) {
                    return Err(tok_error(
                        xt,
                        format!("`{}` is assigned twice in {t}", xt.text),
                    ));
                }
                c.expect(":=")?;
                let rhs = c.until(&[";", "}"]);
                images.push((x, symbols.rhs(rhs)?));
                if c.peek().is_some_and(|t| t.text == ";") {
                    c.next();
                }
            }
            c.expect("}")?;
            c.finish()?;
            if !transitions.insert(t.clone()) {
                return Err(tok_error(head, format!("duplicate transition {t}")));
            }
            updates.insert(t, Substitution::new(images));
        } else {
            let q = symbols.state(c.name("a state")?)?;
            c.expect("=")?;
            let left = symbols.rhs(c.until(&["|"]))?;
            let out = if c.peek().is_some() {
                c.expect("|")?;
                let right = symbols.rhs(c.until(&["|"]))?;
                c.finish()?;
                Output::Pair(left, right)
            } else {
                Output::Single(left)
            };
            if outputs.insert(q.clone(), out).is_some() {
                return Err(tok_error(head, format!("duplicate output for `{q}`")));
            }
        }
    }
    let arity = declared_arity
        .or_else(|| outputs.values().next().map(Output::arity))
        .unwrap_or(1);
    Sst::new(SstParts {
        input: symbols.input,
        output: symbols.output,
        states,
        initial,
        finals,
        variables: symbols.vars.letters().to_vec(),
        transitions,
        updates,
        outputs,
        arity,
    })
}

fn tokens(letters: &[Letter]) -> String {
    letters.iter().map(|l| format!(" {}", l.token())).collect()
}

/// Renders a machine; alphabets, states and variables keep their declared
/// order, transitions and outputs are sorted.
pub fn print_sst(t: &Sst) -> String {
    let mut s = String::from("sst\n");
    let _ = writeln!(s, "input:{}", tokens(t.input().letters()));
    let _ = writeln!(s, "output:{}", tokens(t.output().letters()));
    let states: String = t.states().iter().map(|q| format!(" {q}")).collect();
    let _ = writeln!(s, "states:{states}");
    let _ = writeln!(s, "initial: {}", t.initial());
    let finals: String = t.finals().iter().map(|q| format!(" {q}")).collect();
    let _ = writeln!(s, "final:{finals}");
    let _ = writeln!(s, "vars:{}", tokens(t.variables()));
    if t.outputs().is_empty() && t.arity() != 1 {
        let _ = writeln!(s, "arity: {}", t.arity());
    }
    for tr in t.transitions() {
        let rho = t.update(tr).expect("validated");
        let body: Vec<String> = t
            .variables()
            .iter()
            .map(|x| format!("{x} := {}", rho.image(x).expect("total")))
            .collect();
        let _ = writeln!(
            s,
            "trans: {} {} {} {{ {} }}",
            tr.source,
            tr.letter,
            tr.target,
            body.join(" ; ")
        );
    }
    for (q, out) in t.outputs() {
        let _ = writeln!(s, "out: {q} = {out}");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::{Error, ValidationError};
    use crate::sst::product;
    use crate::sst::tests::{example_t1, example_t2};

    const T1: &str = "sst
input: 0 1
output: e f
states: q0 q1
initial: q0
final: q1
vars: X_a X_b X_c X_d
trans: q0 0 q1 { X_a := e ; X_b := f ; X_c := ~ ; X_d := ~ }
# the loop
trans: q1 1 q1 {
  X_a := X_a ;
  X_b := X_b ;
  X_c := X_a X_c X_b ;
  X_d := ~
}
out: q1 = X_c
";

    #[test]
    fn parses_example_machine() {
        let t = parse_sst(T1).unwrap();
        assert_eq!(t, example_t1());
        assert_eq!(t.states().len(), 2);
        assert_eq!(t.variables().len(), 4);
        assert_eq!(t.transitions().len(), 2);
    }

    #[test]
    fn round_trips() {
        for t in [
            example_t1(),
            example_t2(),
            product(&example_t1(), &example_t2()).unwrap(),
        ] {
            let text = print_sst(&t);
            assert_eq!(parse_sst(&text).unwrap(), t, "{text}");
        }
    }

    #[test]
    fn missing_assignment_names_transition() {
        let text = T1.replace("X_c := ~ ; X_d := ~ }", "X_c := ~ }");
        match parse_sst(&text) {
            Err(Error::Validation(ValidationError::MissingAssignment {
                transition,
                variable,
            })) => {
                assert_eq!(transition, "(q0, 0, q1)");
                assert_eq!(variable, "X_d");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn syntax_errors_have_positions() {
        let text = T1.replace("trans: q0 0 q1", "trans: q0 7 q1");
        match parse_sst(&text) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (8, 11)),
            other => panic!("unexpected {other:?}"),
        }
        let text = T1.replace("out: q1 = X_c", "out: q1 = X_z");
        assert!(matches!(
            parse_sst(&text),
            Err(Error::Parse {
                line: 16,
                column: 11,
                ..
            })
        ));
        assert!(matches!(
            parse_sst("nonsense"),
            Err(Error::Parse { line: 1, .. })
        ));
        let text = T1.replace("X_d := ~\n}", "X_d := ~\n");
        assert!(matches!(parse_sst(&text), Err(Error::Parse { .. })));
    }

    #[test]
    fn pair_machine_without_outputs_keeps_arity() {
        let mut parts = product(&example_t1(), &example_t2()).unwrap().into_parts();
        parts.finals.clear();
        parts.outputs.clear();
        let t = Sst::new(parts).unwrap();
        assert_eq!(parse_sst(&print_sst(&t)).unwrap().arity(), 2);
    }
}
