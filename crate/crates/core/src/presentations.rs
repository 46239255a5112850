//! Finite group presentations and their text format.
//!
//! A [`Presentation`] is an ordered generator list plus a list of relator
//! words. The text format is line based:
//!
//! ```text
//! # comment
//! gens: x1 x2
//! rel: x1^2
//! eq: x2 x1 = x1 x2
//! ```
//!
//! The `gens:` line comes first. `rel:` lines give relators directly;
//! `eq: L = R` stores the relator `L R^-1`. Rendering always emits `rel:`
//! lines, so parse of render is the identity on the stored data.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::abelian::{AbelianQuotient, IntMatrix};
use crate::words::{parse_word, GeneratorName, Word, WordError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Word { line: usize, source: WordError },
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("relator {index} uses undeclared generator `{name}`")]
    UndeclaredGenerator { index: usize, name: String },
    #[error("generator `{0}` is not in the presentation")]
    UnknownGenerator(String),
    #[error("conjugation exponent {0} must be greater than 3")]
    BadExponent(i64),
}

/// Generators plus relators. Relator words only use declared generators
/// and are freely reduced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    generators: Vec<GeneratorName>,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn new(
        generators: Vec<GeneratorName>,
        relators: Vec<Word>,
    ) -> Result<Presentation, PresentationError> {
        let mut seen = BTreeSet::new();
        for g in &generators {
            if !seen.insert(g.clone()) {
                return Err(PresentationError::DuplicateGenerator(g.as_str().to_owned()));
            }
        }
        for (index, r) in relators.iter().enumerate() {
            if let Some(bad) = r.generators().iter().find(|g| !seen.contains(*g)) {
                return Err(PresentationError::UndeclaredGenerator {
                    index,
                    name: bad.as_str().to_owned(),
                });
            }
        }
        Ok(Presentation {
            generators,
            relators,
        })
    }

    /// `x1, ..., xk` with relator `xi^orders[i]` for each entry.
    pub fn free_product_of_cyclics(orders: &[u64]) -> Presentation {
        let generators: Vec<GeneratorName> = (1..=orders.len())
            .map(|i| GeneratorName::new(&format!("x{i}")).unwrap())
            .collect();
        let relators = orders
            .iter()
            .zip(&generators)
            .map(|(&q, g)| Word::generator(g.clone()).pow(q as i64))
            .collect();
        Presentation {
            generators,
            relators,
        }
    }

    pub fn generators(&self) -> &[GeneratorName] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// Parses a word over this presentation's alphabet.
    pub fn word(&self, text: &str) -> Result<Word, WordError> {
        parse_word(text, &self.generators)
    }

    /// Exponent-sum matrix: one row per relator, one column per generator.
    pub fn relation_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zero(self.relators.len(), self.generators.len());
        for (i, r) in self.relators.iter().enumerate() {
            for (j, g) in self.generators.iter().enumerate() {
                let s = r.exponent_sum_of(g);
                m.set(i, j, s.into());
            }
        }
        m
    }

    pub fn abelianization(&self) -> AbelianQuotient {
        AbelianQuotient::new(&self.relation_matrix())
    }

    pub fn render(&self) -> String {
        let mut out = String::from("gens:");
        for g in &self.generators {
            out.push(' ');
            out.push_str(g.as_str());
        }
        out.push('\n');
        for r in &self.relators {
            if r.is_empty() {
                out.push_str("rel:\n");
            } else {
                out.push_str("rel: ");
                out.push_str(&r.render());
                out.push('\n');
            }
        }
        out
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Adjoins the conjugation-power relations `mu_i d mu_i^-1 = d^u` and
/// `mu_i^-1 e mu_i = e^v` for the two words in `mu`, appending the four
/// relators `mu_i d mu_i^-1 d^-u` and `mu_i^-1 e mu_i e^-v` in that order.
/// In the abelianization the first pair forces the order of `d` to divide
/// `u - 1` and the second forces the order of `e` to divide `v - 1`.
///
/// Requires `u > 3` and `v > 3`; `d` and `e` must be generators of `p` and
/// the `mu` words must stay inside its alphabet.
pub fn apply_exponent_substitution(
    p: &Presentation,
    u: i64,
    v: i64,
    d: &GeneratorName,
    e: &GeneratorName,
    mu: &[Word; 2],
) -> Result<Presentation, PresentationError> {
    if u <= 3 {
        return Err(PresentationError::BadExponent(u));
    }
    if v <= 3 {
        return Err(PresentationError::BadExponent(v));
    }
    for g in [d, e] {
        if !p.generators.contains(g) {
            return Err(PresentationError::UnknownGenerator(g.as_str().to_owned()));
        }
    }
    let dw = Word::generator(d.clone());
    let ew = Word::generator(e.clone());
    let mut relators = p.relators.clone();
    for m in mu {
        relators.push(m.concat(&dw).concat(&m.invert()).concat(&dw.pow(-u)));
    }
    for m in mu {
        relators.push(m.invert().concat(&ew).concat(m).concat(&ew.pow(-v)));
    }
    Presentation::new(p.generators.clone(), relators)
}

/// Parses the line-based presentation format. `#` starts a comment.
pub fn parse_presentation(text: &str) -> Result<Presentation, PresentationError> {
    let mut generators: Option<Vec<GeneratorName>> = None;
    let mut relators: Vec<Word> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let stripped = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        }
        .trim();
        if stripped.is_empty() {
            continue;
        }

        let (directive, rest) = stripped.split_once(':').ok_or_else(|| {
            PresentationError::Syntax {
                line,
                message: "expected `gens:`, `rel:`, or `eq:`".to_owned(),
            }
        })?;
        let rest = rest.trim();

        match directive.trim() {
            "gens" => {
                if generators.is_some() {
                    return Err(PresentationError::Syntax {
                        line,
                        message: "second `gens:` line".to_owned(),
                    });
                }
                let mut names = Vec::new();
                for tok in rest.split_whitespace() {
                    names.push(
                        GeneratorName::new(tok)
                            .map_err(|source| PresentationError::Word { line, source })?,
                    );
                }
                generators = Some(names);
            }
            "rel" => {
                let alphabet = generators.as_ref().ok_or_else(|| {
                    PresentationError::Syntax {
                        line,
                        message: "`rel:` before `gens:`".to_owned(),
                    }
                })?;
                let w = parse_word(rest, alphabet)
                    .map_err(|source| PresentationError::Word { line, source })?;
                relators.push(w);
            }
            "eq" => {
                let alphabet = generators.as_ref().ok_or_else(|| {
                    PresentationError::Syntax {
                        line,
                        message: "`eq:` before `gens:`".to_owned(),
                    }
                })?;
                let (lhs, rhs) = rest.split_once('=').ok_or_else(|| {
                    PresentationError::Syntax {
                        line,
                        message: "`eq:` needs `left = right`".to_owned(),
                    }
                })?;
                let l = parse_word(lhs.trim(), alphabet)
                    .map_err(|source| PresentationError::Word { line, source })?;
                let r = parse_word(rhs.trim(), alphabet)
                    .map_err(|source| PresentationError::Word { line, source })?;
                relators.push(l.concat(&r.invert()));
            }
            other => {
                return Err(PresentationError::Syntax {
                    line,
                    message: format!("unknown directive `{other}:`"),
                });
            }
        }
    }

    let generators = generators.ok_or_else(|| PresentationError::Syntax {
        line: text.lines().count() + 1,
        message: "missing `gens:` line".to_owned(),
    })?;
    Presentation::new(generators, relators)
}
