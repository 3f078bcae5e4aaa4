//! Alphabets, words, substitutions and morphisms.
//!
//! Letters are whole tokens rather than characters, and every letter
//! remembers the identifier of the alphabet it was drawn from. Two letters
//! with the same token but different alphabets are different letters, which
//! lets product and reduction constructions mix symbols from several sources
//! without any renaming.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// The textual spelling of the empty word in files and reports.
pub const EPSILON_TOKEN: &str = "~";

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    alphabet: Arc<str>,
    token: Arc<str>,
}

impl Letter {
    pub fn new(alphabet: &str, token: &str) -> Self {
        Letter {
            alphabet: Arc::from(alphabet),
            token: Arc::from(token),
        }
    }

    pub fn token(&self) -> &str {
        &self.token
    }

    pub fn alphabet(&self) -> &str {
        &self.alphabet
    }

    /// The same token re-homed in another alphabet.
    pub fn retagged(&self, alphabet: &str) -> Letter {
        Letter {
            alphabet: Arc::from(alphabet),
            token: self.token.clone(),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.token)
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.token, self.alphabet)
    }
}

/// Tokens are non-empty and contain no whitespace.
pub fn is_valid_token(token: &str) -> bool {
    !token.is_empty() && !token.chars().any(char::is_whitespace)
}

/// Joins `parts` with `sep`, escaping `sep` and `\` inside each part so the
/// result decodes uniquely.
pub fn join_escaped(parts: &[&str], sep: char) -> String {
    let mut out = String::new();
    for (i, part) in parts.iter().enumerate() {
        if i > 0 {
            out.push(sep);
        }
        for c in part.chars() {
            if c == sep || c == '\\' {
                out.push('\\');
            }
            out.push(c);
        }
    }
    out
}

/// A finite, ordered set of letters sharing one alphabet identifier.
#[derive(Clone)]
pub struct Alphabet {
    inner: Arc<AlphabetInner>,
}

struct AlphabetInner {
    id: Arc<str>,
    letters: Vec<Letter>,
    index: HashMap<Arc<str>, usize>,
}

impl Alphabet {
    pub fn new<I, S>(id: &str, tokens: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let id: Arc<str> = Arc::from(id);
        let mut letters = Vec::new();
        let mut index = HashMap::new();
        for token in tokens {
            let token = token.as_ref();
            if !is_valid_token(token) {
                return Err(Error::InvalidToken(token.to_string()));
            }
            let token: Arc<str> = Arc::from(token);
            if index.insert(token.clone(), letters.len()).is_some() {
                return Err(Error::DuplicateToken {
                    token: token.to_string(),
                    context: format!("alphabet `{id}`"),
                });
            }
            letters.push(Letter {
                alphabet: id.clone(),
                token,
            });
        }
        Ok(Alphabet {
            inner: Arc::new(AlphabetInner { id, letters, index }),
        })
    }

    pub fn id(&self) -> &str {
        &self.inner.id
    }

    pub fn letters(&self) -> &[Letter] {
        &self.inner.letters
    }

    pub fn len(&self) -> usize {
        self.inner.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.letters.is_empty()
    }

    pub fn letter(&self, token: &str) -> Option<Letter> {
        self.inner
            .index
            .get(token)
            .map(|&i| self.inner.letters[i].clone())
    }

    pub fn index_of(&self, letter: &Letter) -> Option<usize> {
        if *letter.alphabet != *self.inner.id {
            return None;
        }
        self.inner.index.get(letter.token()).copied()
    }

    pub fn contains(&self, letter: &Letter) -> bool {
        self.index_of(letter).is_some()
    }

    /// Builds a word from tokens of this alphabet.
    pub fn word<S: AsRef<str>>(&self, tokens: &[S]) -> Result<Word> {
        tokens
            .iter()
            .map(|t| {
                self.letter(t.as_ref())
                    .ok_or_else(|| Error::DomainViolation {
                        letter: t.as_ref().to_string(),
                        context: format!("alphabet `{}`", self.id()),
                    })
            })
            .collect()
    }

    /// Parses a word written as whitespace- or comma-separated tokens. A
    /// single unseparated string is split into characters when every token
    /// of the alphabet is one character long. `~` is the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let tokens: Vec<&str> = text
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .collect();
        if tokens.is_empty() || tokens == [EPSILON_TOKEN] {
            return Ok(Word::empty());
        }
        let single_char = self
            .letters()
            .iter()
            .all(|l| l.token().chars().count() == 1);
        if tokens.len() == 1 && self.letter(tokens[0]).is_none() && single_char {
            let chars: Vec<String> = tokens[0].chars().map(String::from).collect();
            return self.word(&chars);
        }
        self.word(&tokens)
    }
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.id == other.inner.id && self.inner.letters == other.inner.letters)
    }
}

impl Eq for Alphabet {}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{{", self.id())?;
        for (i, l) in self.letters().iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(l.token())?;
        }
        f.write_str("}")
    }
}

/// A finite sequence of letters; the empty sequence is ε.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Letter> {
        self.0.iter()
    }

    pub fn push(&mut self, letter: Letter) {
        self.0.push(letter);
    }

    pub fn append(&mut self, other: &Word) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.clone();
        out.append(other);
        out
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }
}

impl From<Vec<Letter>> for Word {
    fn from(letters: Vec<Letter>) -> Self {
        Word(letters)
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a Word {
    type Item = &'a Letter;
    type IntoIter = std::slice::Iter<'a, Letter>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str(EPSILON_TOKEN);
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(l.token())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

/// A total map from a finite set of variables to words over variables and
/// output letters.
///
/// Letters of the images that are not variables pass through [`apply`]
/// untouched. A letter drawn from one of the variable alphabets but missing
/// from the domain is rejected.
///
/// [`apply`]: Substitution::apply
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Substitution {
    images: BTreeMap<Letter, Word>,
    var_alphabets: Vec<Arc<str>>,
}

impl Substitution {
    pub fn new<I: IntoIterator<Item = (Letter, Word)>>(images: I) -> Self {
        let images: BTreeMap<Letter, Word> = images.into_iter().collect();
        let mut var_alphabets: Vec<Arc<str>> = images.keys().map(|l| l.alphabet.clone()).collect();
        var_alphabets.dedup();
        Substitution {
            images,
            var_alphabets,
        }
    }

    pub fn identity<'a, I: IntoIterator<Item = &'a Letter>>(vars: I) -> Self {
        Self::new(
            vars.into_iter()
                .map(|x| (x.clone(), Word::from(vec![x.clone()]))),
        )
    }

    /// The substitution sending every variable to ε.
    pub fn erasing<'a, I: IntoIterator<Item = &'a Letter>>(vars: I) -> Self {
        Self::new(vars.into_iter().map(|x| (x.clone(), Word::empty())))
    }

    pub fn domain(&self) -> impl Iterator<Item = &Letter> {
        self.images.keys()
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn image(&self, var: &Letter) -> Option<&Word> {
        self.images.get(var)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Letter, &Word)> {
        self.images.iter()
    }

    fn is_variable_like(&self, letter: &Letter) -> bool {
        self.var_alphabets.iter().any(|a| **a == *letter.alphabet)
    }

    /// The homomorphic extension: variables are replaced by their images,
    /// every other letter is kept.
    pub fn apply(&self, word: &Word) -> Result<Word> {
        let mut out = Vec::with_capacity(word.len());
        for letter in word {
            match self.images.get(letter) {
                Some(image) => out.extend_from_slice(image.letters()),
                None if self.is_variable_like(letter) => {
                    return Err(Error::DomainViolation {
                        letter: letter.to_string(),
                        context: "substitution".into(),
                    })
                }
                None => out.push(letter.clone()),
            }
        }
        Ok(Word(out))
    }

    /// `self · other`: maps every `X` to `self(other(X))`.
    pub fn compose(&self, other: &Substitution) -> Result<Substitution> {
        let images = other
            .images
            .iter()
            .map(|(x, w)| Ok((x.clone(), self.apply(w)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Substitution::new(images))
    }
}

impl fmt::Debug for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (x, w)) in self.images.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{x} := {w}")?;
        }
        f.write_str("}")
    }
}

/// A monoid morphism between free monoids, given by the image of each
/// source letter.
#[derive(Clone, PartialEq, Eq)]
pub struct Morphism {
    source: Alphabet,
    target: Alphabet,
    images: Vec<Word>,
}

impl Morphism {
    /// Builds a morphism from `(letter, image)` pairs. Every source letter
    /// must receive exactly one image over the target alphabet.
    pub fn new<I>(source: Alphabet, target: Alphabet, images: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Letter, Word)>,
    {
        let mut slots: Vec<Option<Word>> = vec![None; source.len()];
        for (letter, image) in images {
            let idx = source
                .index_of(&letter)
                .ok_or_else(|| Error::DomainViolation {
                    letter: letter.to_string(),
                    context: format!("alphabet `{}`", source.id()),
                })?;
            check_word(&target, &image)?;
            if slots[idx].replace(image).is_some() {
                return Err(Error::DuplicateToken {
                    token: letter.to_string(),
                    context: "morphism definition".into(),
                });
            }
        }
        let images = slots
            .into_iter()
            .zip(source.letters())
            .map(|(slot, l)| {
                slot.ok_or_else(|| Error::DomainViolation {
                    letter: l.to_string(),
                    context: "morphism definition (no image given)".into(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Morphism {
            source,
            target,
            images,
        })
    }

    pub fn from_fn<F>(source: Alphabet, target: Alphabet, f: F) -> Result<Self>
    where
        F: Fn(&Letter) -> Word,
    {
        let images: Vec<(Letter, Word)> =
            source.letters().iter().map(|l| (l.clone(), f(l))).collect();
        Self::new(source, target, images)
    }

    pub fn identity(alphabet: &Alphabet) -> Self {
        Morphism {
            source: alphabet.clone(),
            target: alphabet.clone(),
            images: alphabet
                .letters()
                .iter()
                .map(|l| Word::from(vec![l.clone()]))
                .collect(),
        }
    }

    pub fn source(&self) -> &Alphabet {
        &self.source
    }

    pub fn target(&self) -> &Alphabet {
        &self.target
    }

    /// Images in source-letter order.
    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn image(&self, letter: &Letter) -> Result<&Word> {
        self.source
            .index_of(letter)
            .map(|i| &self.images[i])
            .ok_or_else(|| Error::DomainViolation {
                letter: letter.to_string(),
                context: format!("morphism on `{}`", self.source.id()),
            })
    }

    pub fn apply(&self, word: &Word) -> Result<Word> {
        let mut out = Vec::new();
        for letter in word {
            out.extend_from_slice(self.image(letter)?.letters());
        }
        Ok(Word(out))
    }

    /// `self ∘ inner`, i.e. first `inner`, then `self`.
    pub fn compose(&self, inner: &Morphism) -> Result<Morphism> {
        if inner.target != self.source {
            return Err(Error::AlphabetMismatch {
                expected: self.source.id().to_string(),
                found: inner.target.id().to_string(),
            });
        }
        let images = inner
            .images
            .iter()
            .map(|w| self.apply(w))
            .collect::<Result<Vec<_>>>()?;
        Ok(Morphism {
            source: inner.source.clone(),
            target: self.target.clone(),
            images,
        })
    }
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, (l, w)) in self.source.letters().iter().zip(&self.images).enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{l} -> {w}")?;
        }
        f.write_str("]")
    }
}

pub(crate) fn check_word(alphabet: &Alphabet, word: &Word) -> Result<()> {
    match word.iter().find(|l| !alphabet.contains(l)) {
        Some(l) => Err(Error::DomainViolation {
            letter: l.to_string(),
            context: format!("alphabet `{}`", alphabet.id()),
        }),
        None => Ok(()),
    }
}
