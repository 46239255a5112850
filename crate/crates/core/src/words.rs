//! Words in a finitely generated free group.
//!
//! A [`Word`] is a freely reduced sequence of signed generator letters.
//! Every constructor funnels through [`free_reduce`], so adjacent inverse
//! pairs never survive in a stored word.
//!
//! Text syntax accepted by [`parse_word`]:
//!
//! ```text
//! word   := factor { factor }
//! factor := atom [ "^" int ]
//! atom   := NAME | "(" word ")" | "[" word "," word "]"
//! ```
//!
//! `[u, v]` denotes the commutator `u v u^-1 v^-1`, a zero exponent yields
//! the empty word, and `NAME` matches `[A-Za-z][A-Za-z0-9_]*`. Rendering
//! uses run-length exponents (`a^3 b^-2`) with single spaces between
//! factors; `parse_word` after [`Word::render`] is the identity.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// Upper bound on the absolute value of a parsed exponent. Guards against
/// accidental memory blowups from inputs like `(a b)^999999999`.
pub const MAX_PARSE_EXPONENT: i64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("no image supplied for generator `{0}`")]
    MissingImage(String),
    #[error("invalid generator name `{0}`")]
    InvalidName(String),
}

/// A validated generator name: ASCII, `[A-Za-z][A-Za-z0-9_]*`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorName(String);

impl GeneratorName {
    pub fn new(name: &str) -> Result<Self, WordError> {
        let mut chars = name.chars();
        let ok = match chars.next() {
            Some(c) if c.is_ascii_alphabetic() => {
                chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
            }
            _ => false,
        };
        if ok {
            Ok(GeneratorName(name.to_owned()))
        } else {
            Err(WordError::InvalidName(name.to_owned()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for GeneratorName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// One signed letter `g` or `g^-1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: GeneratorName,
    pub sign: Sign,
}

impl Letter {
    pub fn new(gen: GeneratorName, sign: Sign) -> Self {
        Letter { gen, sign }
    }

    pub fn inverse(&self) -> Letter {
        Letter {
            gen: self.gen.clone(),
            sign: self.sign.flip(),
        }
    }

    /// True when `self` followed by `other` cancels.
    fn cancels(&self, other: &Letter) -> bool {
        self.gen == other.gen && self.sign == other.sign.flip()
    }
}

/// A freely reduced word. Equality is literal letter-sequence equality,
/// which on reduced words is equality in the free group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

/// Cancels adjacent inverse pairs until none remain. Single stack pass;
/// the result is the unique reduced form.
pub fn free_reduce<I: IntoIterator<Item = Letter>>(letters: I) -> Word {
    let mut stack: Vec<Letter> = Vec::new();
    for l in letters {
        if stack.last().is_some_and(|top| top.cancels(&l)) {
            stack.pop();
        } else {
            stack.push(l);
        }
    }
    Word { letters: stack }
}

impl Word {
    pub fn empty() -> Word {
        Word::default()
    }

    /// Single positive letter.
    pub fn generator(gen: GeneratorName) -> Word {
        Word {
            letters: vec![Letter::new(gen, Sign::Plus)],
        }
    }

    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Word {
        free_reduce(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn invert(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(Letter::inverse).collect(),
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        free_reduce(self.letters.iter().chain(other.letters.iter()).cloned())
    }

    /// `self` raised to the integer power `k`; negative `k` inverts first.
    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.invert() } else { self.clone() };
        let n = k.unsigned_abs() as usize;
        let mut letters = Vec::with_capacity(base.len() * n);
        for _ in 0..n {
            letters.extend(base.letters.iter().cloned());
        }
        free_reduce(letters)
    }

    /// `u v u^-1 v^-1`.
    pub fn commutator(u: &Word, v: &Word) -> Word {
        u.concat(v).concat(&u.invert()).concat(&v.invert())
    }

    /// Applies the homomorphism determined by `images` letter by letter.
    /// Every generator occurring in the word must have an image.
    pub fn substitute(&self, images: &BTreeMap<GeneratorName, Word>) -> Result<Word, WordError> {
        let mut out: Vec<Letter> = Vec::new();
        for l in &self.letters {
            let image = images
                .get(&l.gen)
                .ok_or_else(|| WordError::MissingImage(l.gen.as_str().to_owned()))?;
            match l.sign {
                Sign::Plus => out.extend(image.letters.iter().cloned()),
                Sign::Minus => out.extend(image.letters.iter().rev().map(Letter::inverse)),
            }
        }
        Ok(free_reduce(out))
    }

    /// Splits off the maximal conjugating prefix: returns `(core, c)` with
    /// `self = c core c^-1` and `core` cyclically reduced.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let mut core = self.letters.clone();
        let mut conj = Vec::new();
        while core.len() >= 2 {
            let first = core.first().unwrap();
            let last = core.last().unwrap();
            if first.inverse() == *last {
                conj.push(core.remove(0));
                core.pop();
            } else {
                break;
            }
        }
        (Word { letters: core }, Word { letters: conj })
    }

    /// Signed letter count per generator, for every generator that occurs.
    /// Generators cancelling to zero still get an entry.
    pub fn exponent_sum(&self) -> BTreeMap<GeneratorName, i64> {
        let mut sums = BTreeMap::new();
        for l in &self.letters {
            *sums.entry(l.gen.clone()).or_insert(0) += l.sign.as_i64();
        }
        sums
    }

    /// Signed letter count for one generator.
    pub fn exponent_sum_of(&self, gen: &GeneratorName) -> i64 {
        self.letters
            .iter()
            .filter(|l| &l.gen == gen)
            .map(|l| l.sign.as_i64())
            .sum()
    }

    pub fn generators(&self) -> BTreeSet<GeneratorName> {
        self.letters.iter().map(|l| l.gen.clone()).collect()
    }

    /// Run-length rendering: `a a a b^-1 b^-1` prints as `a^3 b^-2`.
    pub fn render(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < self.letters.len() {
            let l = &self.letters[i];
            let mut j = i + 1;
            while j < self.letters.len() && self.letters[j] == *l {
                j += 1;
            }
            let e = (j - i) as i64 * l.sign.as_i64();
            if e == 1 {
                parts.push(l.gen.as_str().to_owned());
            } else {
                parts.push(format!("{}^{}", l.gen, e));
            }
            i = j;
        }
        parts.join(" ")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Name(String),
    Int(i64),
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, WordError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'^' => {
                toks.push((Tok::Caret, i));
                i += 1;
            }
            b'(' => {
                toks.push((Tok::LParen, i));
                i += 1;
            }
            b')' => {
                toks.push((Tok::RParen, i));
                i += 1;
            }
            b'[' => {
                toks.push((Tok::LBracket, i));
                i += 1;
            }
            b']' => {
                toks.push((Tok::RBracket, i));
                i += 1;
            }
            b',' => {
                toks.push((Tok::Comma, i));
                i += 1;
            }
            b'-' | b'0'..=b'9' => {
                let start = i;
                if c == b'-' {
                    i += 1;
                }
                let digits_start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i == digits_start {
                    return Err(WordError::Parse {
                        position: start,
                        message: "expected digits after `-`".to_owned(),
                    });
                }
                let value: i64 = text[start..i].parse().map_err(|_| WordError::Parse {
                    position: start,
                    message: "integer out of range".to_owned(),
                })?;
                toks.push((Tok::Int(value), start));
            }
            _ if c.is_ascii_alphabetic() => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                toks.push((Tok::Name(text[start..i].to_owned()), start));
            }
            _ => {
                return Err(WordError::Parse {
                    position: i,
                    message: format!("unexpected character `{}`", text[i..].chars().next().unwrap()),
                });
            }
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    end: usize,
    alphabet: &'a BTreeSet<&'a str>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Tok> {
        if self.pos < self.toks.len() {
            Some(&self.toks[self.pos].0)
        } else {
            None
        }
    }

    fn offset(&self) -> usize {
        if self.pos < self.toks.len() {
            self.toks[self.pos].1
        } else {
            self.end
        }
    }

    fn word(&mut self) -> Result<Word, WordError> {
        let mut acc: Vec<Letter> = Vec::new();
        loop {
            match self.peek() {
                None | Some(Tok::RParen) | Some(Tok::RBracket) | Some(Tok::Comma) => break,
                _ => {
                    let f = self.factor()?;
                    acc.extend(f.letters);
                }
            }
        }
        Ok(free_reduce(acc))
    }

    fn factor(&mut self) -> Result<Word, WordError> {
        let atom = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let at = self.offset();
            match self.peek() {
                Some(Tok::Int(k)) => {
                    let k = *k;
                    self.pos += 1;
                    if k.unsigned_abs() > MAX_PARSE_EXPONENT as u64 {
                        return Err(WordError::Parse {
                            position: at,
                            message: format!("exponent {k} exceeds the supported bound"),
                        });
                    }
                    Ok(atom.pow(k))
                }
                _ => Err(WordError::Parse {
                    position: at,
                    message: "expected an integer exponent after `^`".to_owned(),
                }),
            }
        } else {
            Ok(atom)
        }
    }

    fn atom(&mut self) -> Result<Word, WordError> {
        let at = self.offset();
        match self.peek() {
            Some(Tok::Name(n)) => {
                if !self.alphabet.contains(n.as_str()) {
                    return Err(WordError::UnknownGenerator(n.clone()));
                }
                let gen = GeneratorName::new(n)?;
                self.pos += 1;
                Ok(Word::generator(gen))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.word()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(WordError::Parse {
                        position: self.offset(),
                        message: "expected `)`".to_owned(),
                    });
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(Tok::LBracket) => {
                self.pos += 1;
                let u = self.word()?;
                if self.peek() != Some(&Tok::Comma) {
                    return Err(WordError::Parse {
                        position: self.offset(),
                        message: "expected `,` in commutator".to_owned(),
                    });
                }
                self.pos += 1;
                let v = self.word()?;
                if self.peek() != Some(&Tok::RBracket) {
                    return Err(WordError::Parse {
                        position: self.offset(),
                        message: "expected `]`".to_owned(),
                    });
                }
                self.pos += 1;
                Ok(Word::commutator(&u, &v))
            }
            _ => Err(WordError::Parse {
                position: at,
                message: "expected a generator, `(`, or `[`".to_owned(),
            }),
        }
    }
}

/// Parses a word over the given alphabet. The empty string is the empty
/// word. Names not in `alphabet` are rejected.
pub fn parse_word(text: &str, alphabet: &[GeneratorName]) -> Result<Word, WordError> {
    let toks = lex(text)?;
    let names: BTreeSet<&str> = alphabet.iter().map(|g| g.as_str()).collect();
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        end: text.len(),
        alphabet: &names,
    };
    let w = p.word()?;
    if p.pos != toks.len() {
        return Err(WordError::Parse {
            position: p.offset(),
            message: "unexpected trailing input".to_owned(),
        });
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha(names: &[&str]) -> Vec<GeneratorName> {
        names.iter().map(|n| GeneratorName::new(n).unwrap()).collect()
    }

    fn w(text: &str, names: &[&str]) -> Word {
        parse_word(text, &alpha(names)).unwrap()
    }

    #[test]
    fn parse_reduces_squared_product() {
        let word = w("(a b)^2 b^-1", &["a", "b"]);
        assert_eq!(word.render(), "a b a");
    }

    #[test]
    fn parse_commutator_desugars() {
        let word = w("[a, b]", &["a", "b"]);
        assert_eq!(word.render(), "a b a^-1 b^-1");
    }

    #[test]
    fn parse_zero_exponent_is_empty() {
        assert!(w("a^0", &["a"]).is_empty());
        assert!(w("", &["a"]).is_empty());
        assert!(w("(a b a^-1)^0", &["a", "b"]).is_empty());
    }

    #[test]
    fn parse_rejects_unknown_generator() {
        let err = parse_word("a c", &alpha(&["a", "b"])).unwrap_err();
        assert_eq!(err, WordError::UnknownGenerator("c".to_owned()));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(matches!(
            parse_word("a ^ b", &alpha(&["a", "b"])),
            Err(WordError::Parse { .. })
        ));
        assert!(matches!(
            parse_word("a^", &alpha(&["a"])),
            Err(WordError::Parse { .. })
        ));
        assert!(matches!(
            parse_word("(a", &alpha(&["a"])),
            Err(WordError::Parse { .. })
        ));
        assert!(matches!(
            parse_word("a)", &alpha(&["a"])),
            Err(WordError::Parse { .. })
        ));
        assert!(matches!(
            parse_word("[a b]", &alpha(&["a", "b"])),
            Err(WordError::Parse { .. })
        ));
    }

    #[test]
    fn free_reduce_cancels_nested_pairs() {
        let word = w("a b b^-1 a^-1 a b", &["a", "b"]);
        assert_eq!(word.render(), "a b");
    }

    #[test]
    fn invert_reverses_and_flips() {
        let word = w("a b^-2", &["a", "b"]);
        assert_eq!(word.invert().render(), "b^2 a^-1");
        assert!(word.concat(&word.invert()).is_empty());
    }

    #[test]
    fn substitute_matches_worked_example() {
        let names = alpha(&["x", "a", "b"]);
        let word = parse_word("x a x^-1", &names).unwrap();
        let mut images = BTreeMap::new();
        images.insert(names[0].clone(), parse_word("a^-1 b^2 a", &names).unwrap());
        images.insert(names[1].clone(), parse_word("a", &names).unwrap());
        let out = word.substitute(&images).unwrap();
        assert_eq!(out.render(), "a^-1 b^2 a b^-2 a");
    }

    #[test]
    fn substitute_requires_every_image() {
        let names = alpha(&["x", "y"]);
        let word = parse_word("x y", &names).unwrap();
        let mut images = BTreeMap::new();
        images.insert(names[0].clone(), Word::empty());
        assert_eq!(
            word.substitute(&images),
            Err(WordError::MissingImage("y".to_owned()))
        );
    }

    #[test]
    fn cyclic_reduce_splits_conjugator() {
        let word = w("a^-1 b b a", &["a", "b"]);
        let (core, conj) = word.cyclic_reduce();
        assert_eq!(core.render(), "b^2");
        assert_eq!(conj.render(), "a^-1");
        assert_eq!(conj.concat(&core).concat(&conj.invert()), word);

        let already = w("a b", &["a", "b"]);
        let (core, conj) = already.cyclic_reduce();
        assert_eq!(core, already);
        assert!(conj.is_empty());
    }

    #[test]
    fn exponent_sum_keeps_cancelled_generators() {
        let word = w("a^2 b a^-1", &["a", "b"]);
        let sums = word.exponent_sum();
        assert_eq!(sums.len(), 2);
        assert_eq!(sums[&GeneratorName::new("a").unwrap()], 1);
        assert_eq!(sums[&GeneratorName::new("b").unwrap()], 1);

        let comm = w("[a, b]", &["a", "b"]);
        let sums = comm.exponent_sum();
        assert_eq!(sums[&GeneratorName::new("a").unwrap()], 0);
        assert_eq!(sums[&GeneratorName::new("b").unwrap()], 0);

        assert!(Word::empty().exponent_sum().is_empty());
    }

    #[test]
    fn render_uses_run_length_exponents() {
        let word = w("a a a b^-1 b^-1", &["a", "b"]);
        assert_eq!(word.render(), "a^3 b^-2");
        assert_eq!(Word::empty().render(), "");
        assert_eq!(w("a^-1", &["a"]).render(), "a^-1");
    }

    #[test]
    fn render_round_trips() {
        let names = alpha(&["a", "b", "c"]);
        for text in ["a b a", "a^3 b^-2 c", "", "a^-1 b^-1 a b"] {
            let word = parse_word(text, &names).unwrap();
            assert_eq!(parse_word(&word.render(), &names).unwrap(), word);
        }
    }

    #[test]
    fn generator_name_validation() {
        assert!(GeneratorName::new("x1").is_ok());
        assert!(GeneratorName::new("al_3b").is_ok());
        assert!(GeneratorName::new("1x").is_err());
        assert!(GeneratorName::new("").is_err());
        assert!(GeneratorName::new("a-b").is_err());
    }

    #[test]
    fn exponent_bound_is_enforced() {
        let err = parse_word("a^2000000", &alpha(&["a"])).unwrap_err();
        assert!(matches!(err, WordError::Parse { .. }));
    }
}
