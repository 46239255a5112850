//! The Adjan-Rabin family: from a seed presentation and a word `w`, build
//! a presentation `Q_w` that is trivial exactly when `w = 1` in the seed
//! group, then compress it to a two-generator presentation `P_w` by Tietze
//! eliminations.
//!
//! The seed must satisfy the coprime-order condition checked by
//! [`check_condition_21`]: some subset of its generators has finite,
//! pairwise coprime-in-aggregate abelianized orders with gcd 1. The subset
//! chosen is the first by cardinality, then by index order, so reruns are
//! reproducible.
//!
//! `Q_w` adds four fresh generators `a`, `al`, `b`, `be`; those names are
//! reserved and may not appear in the seed. [`build_pw`] eliminates `al`,
//! `be`, and every seed generator in turn, leaving relators over `a`, `b`
//! only, and records each elimination so the rewrite can be audited.

use thiserror::Error;

use crate::abelian::{extended_gcd, gcd_all, Order};
use crate::presentations::Presentation;
use crate::words::{GeneratorName, Letter, Sign, Word};

/// Names injected by the construction; a seed may not use them.
pub const RESERVED_NAMES: [&str; 4] = ["a", "al", "b", "be"];

/// Largest generator order the relator builder will expand.
pub const MAX_ORDER: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AdjanRabinError {
    #[error("no generator subset has finite orders with gcd 1")]
    NotSatisfied,
    #[error("generator order {0} exceeds the supported bound")]
    OrderTooLarge(String),
    #[error("seed presentation uses reserved generator name `{0}`")]
    ReservedGenerator(String),
    #[error("word uses generator `{0}` that is not in the seed")]
    UnknownGenerator(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TietzeError {
    #[error("relator index {0} out of range")]
    BadIndex(usize),
    #[error("generator `{0}` is not in the presentation")]
    UnknownGenerator(String),
    #[error("generator `{gen}` occurs {count} times in the relator, need exactly one")]
    OccurrenceCount { gen: String, count: usize },
}

/// Witness that the coprime-order condition holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Condition21 {
    /// Positions of the chosen generators in the seed list, ascending,
    /// zero-based.
    pub indices: Vec<usize>,
    /// Abelianized order of each chosen generator, aligned with `indices`.
    pub orders: Vec<u64>,
    /// Maximum of `orders`.
    pub q_max: u64,
    /// Coefficients with `sum(bezout[i] * orders[i]) = 1`.
    pub bezout: Vec<i64>,
}

/// Finds the first generator subset (by cardinality, then index order)
/// whose abelianized orders are finite and have gcd 1. A generator of
/// abelianized order 1 yields a singleton certificate on its own.
pub fn check_condition_21(seed: &Presentation) -> Result<Condition21, AdjanRabinError> {
    let orders = seed.abelianization().generator_orders();
    let mut candidates: Vec<(usize, u64)> = Vec::new();
    let mut oversized = false;
    for (i, ord) in orders.iter().enumerate() {
        match ord {
            Order::Finite(v) => match ord.as_u64() {
                Some(q) if q <= MAX_ORDER => candidates.push((i, q)),
                _ => {
                    oversized = true;
                    let _ = v;
                }
            },
            Order::Infinite => {}
        }
    }

    for size in 1..=candidates.len() {
        if let Some(chosen) = first_subset_with_gcd_one(&candidates, size) {
            let indices: Vec<usize> = chosen.iter().map(|&(i, _)| i).collect();
            let orders: Vec<u64> = chosen.iter().map(|&(_, q)| q).collect();
            let q_max = *orders.iter().max().unwrap();
            let signed: Vec<i64> = orders.iter().map(|&q| q as i64).collect();
            let (g, bezout) = extended_gcd(&signed);
            debug_assert_eq!(g, 1);
            return Ok(Condition21 {
                indices,
                orders,
                q_max,
                bezout,
            });
        }
    }

    if oversized {
        Err(AdjanRabinError::OrderTooLarge(format!(
            "some finite order exceeds {MAX_ORDER}"
        )))
    } else {
        Err(AdjanRabinError::NotSatisfied)
    }
}

/// First size-`k` subset of `candidates` (lexicographic on positions)
/// whose orders have gcd 1.
fn first_subset_with_gcd_one(candidates: &[(usize, u64)], k: usize) -> Option<Vec<(usize, u64)>> {
    let n = candidates.len();
    if k == 0 || k > n {
        return None;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let subset: Vec<(usize, u64)> = idx.iter().map(|&i| candidates[i]).collect();
        let orders: Vec<i64> = subset.iter().map(|&(_, q)| q as i64).collect();
        if gcd_all(&orders) == 1 {
            return Some(subset);
        }
        // advance to the next combination in lexicographic order
        let mut pos = k;
        while pos > 0 {
            pos -= 1;
            if idx[pos] != pos + n - k {
                idx[pos] += 1;
                for later in pos + 1..k {
                    idx[later] = idx[later - 1] + 1;
                }
                break;
            }
            if pos == 0 {
                return None;
            }
        }
    }
}

/// Bezout witness for the squared certificate orders.
///
/// When the final two-generator presentation is analyzed, each certified
/// generator contributes a relation forcing `a^(q_i^2) = 1`; coprimality of
/// the squares is what collapses `a` itself. This records the coefficients
/// with `sum(bezout_sq[i] * orders[i]^2) = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollapseCertificate {
    pub squared_orders: Vec<u64>,
    pub bezout_sq: Vec<i64>,
}

/// Derives the squared-order Bezout witness from a coprime-order
/// certificate. Always succeeds: gcd of the orders is 1, so the gcd of
/// their squares is 1 as well.
pub fn collapse_certificate(cert: &Condition21) -> CollapseCertificate {
    let squared_orders: Vec<u64> = cert.orders.iter().map(|&q| q * q).collect();
    let signed: Vec<i64> = squared_orders.iter().map(|&q| q as i64).collect();
    let (g, bezout_sq) = extended_gcd(&signed);
    debug_assert_eq!(g, 1);
    CollapseCertificate {
        squared_orders,
        bezout_sq,
    }
}

fn reserved(name: &GeneratorName) -> bool {
    RESERVED_NAMES.contains(&name.as_str())
}

fn fresh(name: &str) -> GeneratorName {
    GeneratorName::new(name).unwrap()
}

/// Seed generators reordered so the chosen subset comes first, then the
/// rest, both in ascending original position.
fn permuted_generators(seed: &Presentation, cond: &Condition21) -> Vec<GeneratorName> {
    let mut out: Vec<GeneratorName> = cond
        .indices
        .iter()
        .map(|&i| seed.generators()[i].clone())
        .collect();
    for (i, g) in seed.generators().iter().enumerate() {
        if !cond.indices.contains(&i) {
            out.push(g.clone());
        }
    }
    out
}

/// Builds the enlarged presentation `Q_w`.
///
/// Generators: the permuted seed generators, then `a`, `al`, `b`, `be`.
/// Relators: the seed relators, followed by
///
/// ```text
/// a al a^-1 b^-2
/// al a al^-1 b be^-1 b^-1
/// a^-e_i y_i al^e_i be^-i b^-1 be^i      for each seed generator y_i
/// w al^2 w^-1 al^-2 be^-(n+1) b^-1 be^(n+1)
/// ```
///
/// where `e_i` is the certified order `q_i` for the chosen generators and
/// `q_max + i` for the rest, so all the exponents are distinct.
pub fn build_qw(
    seed: &Presentation,
    w: &Word,
    cond: &Condition21,
) -> Result<Presentation, AdjanRabinError> {
    for g in seed.generators() {
        if reserved(g) {
            return Err(AdjanRabinError::ReservedGenerator(g.as_str().to_owned()));
        }
    }
    for g in w.generators() {
        if !seed.generators().contains(&g) {
            return Err(AdjanRabinError::UnknownGenerator(g.as_str().to_owned()));
        }
    }

    let n = seed.generators().len();
    let p = cond.indices.len();
    let ga = Word::generator(fresh("a"));
    let gal = Word::generator(fresh("al"));
    let gb = Word::generator(fresh("b"));
    let gbe = Word::generator(fresh("be"));

    let permuted = permuted_generators(seed, cond);
    let mut generators = permuted.clone();
    generators.extend([fresh("a"), fresh("al"), fresh("b"), fresh("be")]);

    let mut relators: Vec<Word> = seed.relators().to_vec();

    relators.push(
        ga.concat(&gal)
            .concat(&ga.invert())
            .concat(&gb.pow(-2)),
    );
    relators.push(
        gal.concat(&ga)
            .concat(&gal.invert())
            .concat(&gb)
            .concat(&gbe.invert())
            .concat(&gb.invert()),
    );
    for (k, y) in permuted.iter().enumerate() {
        let i = (k + 1) as i64;
        let e = if k < p {
            cond.orders[k] as i64
        } else {
            cond.q_max as i64 + i
        };
        relators.push(
            ga.pow(-e)
                .concat(&Word::generator(y.clone()))
                .concat(&gal.pow(e))
                .concat(&gbe.pow(-i))
                .concat(&gb.invert())
                .concat(&gbe.pow(i)),
        );
    }
    let top = (n + 1) as i64;
    relators.push(
        w.concat(&gal.pow(2))
            .concat(&w.invert())
            .concat(&gal.pow(-2))
            .concat(&gbe.pow(-top))
            .concat(&gb.invert())
            .concat(&gbe.pow(top)),
    );

    Ok(Presentation::new(generators, relators).expect("construction preserves invariants"))
}

/// Right-hand sides of the mixing relators in `Q_w` for a seed with `n`
/// generators: `b^2`, `b be b^-1`, and `be^-i b be^i` for `i = 1..=n+1`.
/// The construction needs these `n + 3` words to stay a free basis of the
/// subgroup they generate in the free group on `b`, `be`.
pub fn rhs_basis_set(n: usize) -> Vec<Word> {
    let b = Word::generator(fresh("b"));
    let be = Word::generator(fresh("be"));
    let mut out = vec![b.pow(2), b.concat(&be).concat(&b.invert())];
    for i in 1..=(n as i64) + 1 {
        out.push(be.pow(-i).concat(&b).concat(&be.pow(i)));
    }
    out
}

/// Expresses `gen` in terms of the other generators using a relator that
/// contains it exactly once: rotate the single occurrence to the front,
/// then read the rest off as the solution.
pub fn solve_relator_for(relator: &Word, gen: &GeneratorName) -> Result<Word, TietzeError> {
    let positions: Vec<usize> = relator
        .letters()
        .iter()
        .enumerate()
        .filter(|(_, l)| &l.gen == gen)
        .map(|(i, _)| i)
        .collect();
    if positions.len() != 1 {
        return Err(TietzeError::OccurrenceCount {
            gen: gen.as_str().to_owned(),
            count: positions.len(),
        });
    }
    let k = positions[0];
    let letters = relator.letters();
    let rest: Vec<Letter> = letters[k + 1..]
        .iter()
        .chain(letters[..k].iter())
        .cloned()
        .collect();
    let rest = Word::from_letters(rest);
    Ok(match letters[k].sign {
        Sign::Plus => rest.invert(),
        Sign::Minus => rest,
    })
}

/// One recorded Tietze elimination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminationStep {
    pub gen: GeneratorName,
    /// Index of the consumed relator in the presentation it was applied
    /// to, zero-based.
    pub relator_index: usize,
    pub solution: Word,
}

/// Removes `gen` from the presentation: solves the relator at
/// `relator_index` for it, drops that relator, and substitutes the
/// solution everywhere else.
pub fn eliminate_generator(
    p: &Presentation,
    gen: &GeneratorName,
    relator_index: usize,
) -> Result<(Presentation, EliminationStep), TietzeError> {
    if relator_index >= p.relators().len() {
        return Err(TietzeError::BadIndex(relator_index));
    }
    if !p.generators().contains(gen) {
        return Err(TietzeError::UnknownGenerator(gen.as_str().to_owned()));
    }
    let solution = solve_relator_for(&p.relators()[relator_index], gen)?;

    let mut images = std::collections::BTreeMap::new();
    for g in p.generators() {
        if g == gen {
            images.insert(g.clone(), solution.clone());
        } else {
            images.insert(g.clone(), Word::generator(g.clone()));
        }
    }

    let generators: Vec<GeneratorName> =
        p.generators().iter().filter(|g| *g != gen).cloned().collect();
    let relators: Vec<Word> = p
        .relators()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != relator_index)
        .map(|(_, r)| r.substitute(&images).expect("all generators mapped"))
        .collect();

    let next = Presentation::new(generators, relators).expect("elimination preserves invariants");
    let step = EliminationStep {
        gen: gen.clone(),
        relator_index,
        solution,
    };
    Ok((next, step))
}

/// Builds the two-generator presentation `P_w` from `Q_w` by eliminating
/// `al`, then `be`, then each seed generator in its permuted order. Every
/// elimination consumes the relator that sits at index `m` (the seed
/// relator count) at that moment, which is the relator introduced for that
/// generator.
pub fn build_pw(
    seed: &Presentation,
    w: &Word,
    cond: &Condition21,
) -> Result<(Presentation, Vec<EliminationStep>), AdjanRabinError> {
    let qw = build_qw(seed, w, cond)?;
    let m = seed.relators().len();

    let mut order: Vec<GeneratorName> = vec![fresh("al"), fresh("be")];
    order.extend(permuted_generators(seed, cond));

    let mut current = qw;
    let mut log = Vec::with_capacity(order.len());
    for gen in &order {
        let (next, step) =
            eliminate_generator(&current, gen, m).expect("schedule matches construction");
        current = next;
        log.push(step);
    }

    debug_assert_eq!(current.generators().len(), 2);
    debug_assert_eq!(current.relators().len(), m + 1);
    Ok((current, log))
}
