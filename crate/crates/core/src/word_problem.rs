//! Exact word-problem decisions in free products of cyclic groups.
//!
//! In a free product of cyclic groups, a word is trivial exactly when its
//! syllable normal form is empty: merge adjacent powers of the same
//! generator, reduce each exponent modulo that generator's order, and
//! drop vanished syllables. [`syllable_reduce`] computes that form with a
//! stack in one pass and returns a verdict carrying it.
//!
//! Exponents are balanced into `(-q/2, q/2]`, so order 4 turns `x^3` into
//! `x^-1` and keeps `x^2` positive. Generators without a listed order are
//! free factors and never fold.

use std::collections::BTreeMap;

use crate::presentations::Presentation;
use crate::words::{GeneratorName, Sign, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Trivial,
    /// Nontrivial, with the syllable normal form as witness.
    NonTrivial(Word),
}

impl Verdict {
    pub fn is_trivial(&self) -> bool {
        matches!(self, Verdict::Trivial)
    }
}

/// Representative of `e` modulo `q` in the balanced range `(-q/2, q/2]`.
fn balance(e: i64, q: u64) -> i64 {
    let q = q as i64;
    let mut r = e.rem_euclid(q);
    if 2 * r > q {
        r -= q;
    }
    r
}

/// Decides triviality of `w` in the free product whose factors are the
/// cyclic groups `orders` (generator -> order); unlisted generators
/// generate free factors.
pub fn syllable_reduce(w: &Word, orders: &BTreeMap<GeneratorName, u64>) -> Verdict {
    let mut stack: Vec<(GeneratorName, i64)> = Vec::new();
    for l in w.letters() {
        let e: i64 = match l.sign {
            Sign::Plus => 1,
            Sign::Minus => -1,
        };
        match stack.last_mut() {
            Some((gen, sum)) if *gen == l.gen => {
                *sum += e;
                if let Some(&q) = orders.get(gen) {
                    *sum = balance(*sum, q);
                }
                if *sum == 0 {
                    stack.pop();
                }
            }
            _ => {
                let mut sum = e;
                if let Some(&q) = orders.get(&l.gen) {
                    sum = balance(sum, q);
                }
                if sum != 0 {
                    stack.push((l.gen.clone(), sum));
                }
            }
        }
    }
    if stack.is_empty() {
        Verdict::Trivial
    } else {
        let mut out = Word::empty();
        for (gen, sum) in stack {
            out = out.concat(&Word::generator(gen).pow(sum));
        }
        Verdict::NonTrivial(out)
    }
}

/// Reads cyclic factor orders off a presentation when every relator is a
/// pure power `g^k` with `|k| >= 2` and no generator is constrained
/// twice. Returns the order map, or None when the presentation is not of
/// that shape and the syllable method does not apply.
pub fn cyclic_orders_of(p: &Presentation) -> Option<BTreeMap<GeneratorName, u64>> {
    let mut orders = BTreeMap::new();
    for r in p.relators() {
        let letters = r.letters();
        let first = letters.first()?;
        if !letters.iter().all(|l| l == first) {
            return None;
        }
        let q = letters.len() as u64;
        if q < 2 {
            return None;
        }
        if orders.insert(first.gen.clone(), q).is_some() {
            return None;
        }
    }
    Some(orders)
}
