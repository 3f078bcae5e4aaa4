//! The HDT0L instance file format.
//!
//! ```text
//! hdt0l
//! alphabet A: a b c
//! alphabet B: e f
//! v: c
//! w: c
//! pair 1: h: a -> a ; b -> b ; c -> a c b | g: a -> a ; b -> b ; c -> a c b
//! final: h: a -> e ; b -> f ; c -> ~ | g: a -> e ; b -> f ; c -> ~
//! ```

use std::fmt::Write as _;

use crate::error::{Result, ValidationError};
use crate::hdt0l::{Hdt0lInstance, MorphismPair};
use crate::words::{is_valid_token, Alphabet, Letter, Morphism, Word};

use super::{error_at, lex, name_list, tok_error, Cursor, Line, Tok};

fn word(alphabet: &Alphabet, toks: &[Tok]) -> Result<Word> {
    let mut w = Word::empty();
    for t in toks {
        if t.text == "~" {
            continue;
        }
        let l = alphabet.letter(&t.text).ok_or_else(|| {
            tok_error(
                t,
                format!("`{}` is not a letter of {}", t.text, alphabet.id()),
            )
        })?;
        w.push(l);
    }
    Ok(w)
}

/// `h: a -> u ; … | g: a -> u ; …` into two morphisms from `a` to `target`.
fn block(
    c: &mut Cursor<'_>,
    label: &str,
    a: &Alphabet,
    target: &Alphabet,
) -> Result<(Morphism, Morphism)> {
    let side = |c: &mut Cursor<'_>, key: &str| -> Result<Morphism> {
        c.expect(key)?;
        let mut images: Vec<(Letter, Word)> = Vec::new();
        loop {
            let lt = c.name("a letter")?;
            let l = a
                .letter(&lt.text)
                .ok_or_else(|| tok_error(lt, format!("`{}` is not a letter of A", lt.text)))?;
            if images.iter().any(|(x, _)| *x == l) {
                return Err(tok_error(
                    lt,
                    format!("second image for `{}` in `{label}`", lt.text),
                ));
            }
            c.expect("->")?;
            images.push((l, word(target, c.until(&[";", "|"]))?));
            match c.peek().map(|t| t.text.as_str()) {
                Some(";") => {
                    c.next();
                    if c.peek().is_none_or(|t| t.text == "|") {
                        break;
                    }
                }
                _ => break,
            }
        }
        if let Some(missing) = a
            .letters()
            .iter()
            .find(|l| !images.iter().any(|(x, _)| x == *l))
        {
            return Err(ValidationError::MissingImage {
                label: label.to_string(),
                letter: missing.token().to_string(),
            }
            .into());
        }
        Morphism::new(a.clone(), target.clone(), images)
    };
    let h = side(c, "h:")?;
    c.expect("|")?;
    let g = side(c, "g:")?;
    c.finish()?;
    Ok((h, g))
}

pub fn parse_hdt0l(text: &str) -> Result<Hdt0lInstance> {
    let lines: Vec<Line> = lex(text);
    let Some(first) = lines.first() else {
        return Err(error_at(1, 1, "empty file: expected `hdt0l`"));
    };
    if first.toks.len() != 1 || first.toks[0].text != "hdt0l" {
        return Err(tok_error(&first.toks[0], "expected the header `hdt0l`"));
    }
    let mut a: Option<Alphabet> = None;
    let mut b: Option<Alphabet> = None;
    let mut v: Option<&Line> = None;
    let mut w: Option<&Line> = None;
    let mut pairs: Vec<&Line> = Vec::new();
    let mut fin: Option<&Line> = None;
    for line in &lines[1..] {
        let head = &line.toks[0];
        let dup = |set: bool| {
            if set {
                Err(tok_error(
                    head,
                    format!("duplicate `{}` directive", head.text),
                ))
            } else {
                Ok(())
            }
        };
        match head.text.as_str() {
            "alphabet" => {
                let mut c = Cursor::new(line);
                c.next();
                let which = c
                    .next()
                    .ok_or_else(|| c.error_here("expected `A:` or `B:`"))?;
                let slot = match which.text.as_str() {
                    "A:" => &mut a,
                    "B:" => &mut b,
                    other => {
                        return Err(tok_error(
                            which,
                            format!("expected `A:` or `B:`, found `{other}`"),
                        ))
                    }
                };
                dup(slot.is_some())?;
                let id = &which.text[..1];
                let names = name_list(c.until(&[]), &format!("a letter of {id}"))?;
                *slot = Some(Alphabet::new(id, names)?);
            }
            "v:" => {
                dup(v.is_some())?;
                v = Some(line);
            }
            "w:" => {
                dup(w.is_some())?;
                w = Some(line);
            }
            "pair" => pairs.push(line),
            "final:" => {
                dup(fin.is_some())?;
                fin = Some(line);
            }
            other => return Err(tok_error(head, format!("unknown directive `{other}`"))),
        }
    }
    let missing = |what: &str| error_at(1, 1, format!("missing `{what}` directive"));
    let a = a.ok_or_else(|| missing("alphabet A:"))?;
    let b = b.ok_or_else(|| missing("alphabet B:"))?;
    let axiom = |line: Option<&Line>, key: &str| -> Result<Word> {
        let line = line.ok_or_else(|| missing(key))?;
        word(&a, &line.toks[1..])
    };
    let v = axiom(v, "v:")?;
    let w = axiom(w, "w:")?;

    let mut morphism_pairs = Vec::new();
    for line in pairs {
        let mut c = Cursor::new(line);
        c.next();
        let lt = c.next().ok_or_else(|| c.error_here("expected a label"))?;
        let label = match lt.text.strip_suffix(':') {
            Some(l) if !l.is_empty() => l.to_string(),
            _ => {
                let l = lt.text.clone();
                c.expect(":")?;
                l
            }
        };
        if !is_valid_token(&label) || !super::is_printable_token(&label) {
            return Err(tok_error(
                lt,
                format!("`{label}` cannot be used as a label"),
            ));
        }
        if morphism_pairs
            .iter()
            .any(|p: &MorphismPair| p.label == label)
        {
            return Err(tok_error(lt, format!("duplicate label `{label}`")));
        }
        let (h, g) = block(&mut c, &label, &a, &a)?;
        morphism_pairs.push(MorphismPair { label, h, g });
    }
    let fin = fin.ok_or_else(|| missing("final:"))?;
    let mut c = Cursor::new(fin);
    c.next();
    let (final_h, final_g) = block(&mut c, "final", &a, &b)?;
    Hdt0lInstance::new(a, b, morphism_pairs, final_h, final_g, v, w)
}

fn images(m: &Morphism) -> String {
    m.source()
        .letters()
        .iter()
        .zip(m.images())
        .map(|(l, u)| format!("{l} -> {u}"))
        .collect::<Vec<_>>()
        .join(" ; ")
}

pub fn print_hdt0l(inst: &Hdt0lInstance) -> String {
    let list = |al: &Alphabet| -> String { al.letters().iter().map(|l| format!(" {l}")).collect() };
    let mut s = String::from("hdt0l\n");
    let _ = writeln!(s, "alphabet A:{}", list(inst.a()));
    let _ = writeln!(s, "alphabet B:{}", list(inst.b()));
    let _ = writeln!(s, "v: {}", inst.v());
    let _ = writeln!(s, "w: {}", inst.w());
    for p in inst.pairs() {
        let _ = writeln!(
            s,
            "pair {}: h: {} | g: {}",
            p.label,
            images(&p.h),
            images(&p.g)
        );
    }
    let _ = writeln!(
        s,
        "final: h: {} | g: {}",
        images(inst.final_h()),
        images(inst.final_g())
    );
    s
}
