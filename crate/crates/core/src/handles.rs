//! Handle-complex bookkeeping for the 5-dimensional realization of a
//! presentation, and the slide calculus that standardizes 2-handle
//! attaching data.
//!
//! [`build_markov_complex`] records a handlebody with one 0-handle, a
//! 1-handle per generator, a 0-framed 2-handle per relator (the gamma
//! family), and a family of 2-handles along nullhomotopic circles (the
//! alpha family: all `n` of them, or `n - 1` in the reduced variant).
//! Nothing geometric is computed; the records exist so their counts and
//! attaching classes can be checked and reported.
//!
//! [`predict_boundary`] turns a caller-supplied triviality verdict for the
//! presented group into the model boundary: a connected sum of copies of
//! `S^2 x S^2` when the group is trivial, with the summand count read off
//! the relator handles. The verdict is cross-checked against the
//! abelianization; claiming triviality with nontrivial first homology is
//! rejected rather than propagated.
//!
//! [`slide_reduce`] standardizes a tuple of nonnegative integers by the
//! two moves a handle slide can realize on it: subtract one entry from a
//! no-smaller entry, and permute. A tuple with gcd 1 always reaches
//! `(1, 0, ..., 0)`; the move log is replayable and each move's side
//! condition is re-checked during replay.

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::presentations::Presentation;
use crate::words::Word;

/// Ambient dimension of every complex this module records.
pub const DIMENSION: usize = 5;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HandleError {
    #[error("triviality verdict contradicts a nontrivial first homology")]
    InconsistentVerdict,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SlideError {
    #[error("tuple is empty")]
    EmptyTuple,
    #[error("tuple gcd is {0}, need 1")]
    GcdNotOne(u64),
    #[error("move {step} violates its side condition")]
    IllegalMove { step: usize },
}

/// Which family a 2-handle belongs to. Indices are zero-based; rendering
/// is one-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HandleLabel {
    /// attached along the curve realizing relator `index`
    Gamma { index: usize },
    /// attached along a nullhomotopic circle
    Alpha { index: usize },
}

impl fmt::Display for HandleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HandleLabel::Gamma { index } => write!(f, "gamma {}", index + 1),
            HandleLabel::Alpha { index } => write!(f, "alpha {}", index + 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoHandle {
    pub label: HandleLabel,
    /// free homotopy class of the attaching circle; empty for the alpha
    /// family
    pub attaching_class: Word,
    /// framing residue mod 2; the construction always picks 0
    pub framing: u8,
}

/// How much of the complex has been built.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    /// 0-handle and 1-handles only
    Body,
    /// relator 2-handles attached
    Relators,
    /// all `n` alpha handles attached
    Full,
    /// `n - 1` alpha handles attached
    Reduced,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Body => "body",
            Stage::Relators => "relators",
            Stage::Full => "full",
            Stage::Reduced => "reduced",
        })
    }
}

/// Symbolic record of a 5-dimensional handlebody built from a
/// presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HandleComplex {
    source: Presentation,
    stage: Stage,
    zero_handles: usize,
    one_handles: usize,
    two_handles: Vec<TwoHandle>,
}

impl HandleComplex {
    /// Builds the record at the given stage: one 0-handle, a 1-handle per
    /// generator, then 2-handles as the stage demands.
    pub fn at_stage(p: &Presentation, stage: Stage) -> HandleComplex {
        let n = p.generators().len();
        let mut two_handles = Vec::new();
        if stage != Stage::Body {
            for (index, r) in p.relators().iter().enumerate() {
                two_handles.push(TwoHandle {
                    label: HandleLabel::Gamma { index },
                    attaching_class: r.clone(),
                    framing: 0,
                });
            }
        }
        let caps = match stage {
            Stage::Body | Stage::Relators => 0,
            Stage::Full => n,
            Stage::Reduced => n.saturating_sub(1),
        };
        for index in 0..caps {
            two_handles.push(TwoHandle {
                label: HandleLabel::Alpha { index },
                attaching_class: Word::empty(),
                framing: 0,
            });
        }
        HandleComplex {
            source: p.clone(),
            stage,
            zero_handles: 1,
            one_handles: n,
            two_handles,
        }
    }

    pub fn source(&self) -> &Presentation {
        &self.source
    }

    pub fn stage(&self) -> Stage {
        self.stage
    }

    pub fn zero_handles(&self) -> usize {
        self.zero_handles
    }

    pub fn one_handles(&self) -> usize {
        self.one_handles
    }

    pub fn two_handles(&self) -> &[TwoHandle] {
        &self.two_handles
    }

    pub fn relator_handles(&self) -> usize {
        self.two_handles
            .iter()
            .filter(|h| matches!(h.label, HandleLabel::Gamma { .. }))
            .count()
    }

    pub fn alpha_handles(&self) -> usize {
        self.two_handles
            .iter()
            .filter(|h| matches!(h.label, HandleLabel::Alpha { .. }))
            .count()
    }

    /// Presentation of the fundamental group at this stage. The body has
    /// not attached any relator handle yet, so its group is free.
    pub fn pi1(&self) -> Presentation {
        match self.stage {
            Stage::Body => Presentation::new(self.source.generators().to_vec(), Vec::new())
                .expect("generator list already validated"),
            _ => self.source.clone(),
        }
    }
}

/// Complex whose boundary the recognition lemmas speak about: the full
/// stage with all `n` alpha handles, or the reduced stage with `n - 1`.
pub fn build_markov_complex(p: &Presentation, reduced: bool) -> HandleComplex {
    let stage = if reduced { Stage::Reduced } else { Stage::Full };
    HandleComplex::at_stage(p, stage)
}

/// Caller-supplied knowledge about the presented group, typically from
/// coset enumeration or a word-problem oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrivialityVerdict {
    ProvedTrivial,
    ProvedNonTrivial,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundaryKind {
    ConnectedSumS2xS2 { count: usize },
    Unknown,
}

/// What the model says the boundary 4-manifold is.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryDescriptor {
    pub kind: BoundaryKind,
    pub pi1: Presentation,
    /// invariant factors of the first homology; torsion entries first,
    /// then one zero per free rank
    pub h1_invariant_factors: Vec<BigInt>,
    pub b2: Option<u64>,
    pub signature: Option<i64>,
}

/// Predicts the boundary of the complex given a triviality verdict for
/// its fundamental group.
///
/// A trivial group at the full stage gives a connected sum of `k` copies
/// of `S^2 x S^2` (`k` = relator handles); the reduced stage gives
/// `k - 1`. Any other stage or verdict leaves the kind unknown and
/// reports the group presentation with its first homology instead.
/// `ProvedTrivial` must agree with the abelianization.
pub fn predict_boundary(
    c: &HandleComplex,
    verdict: TrivialityVerdict,
) -> Result<BoundaryDescriptor, HandleError> {
    let pi1 = c.pi1();
    let ab = pi1.abelianization();
    let h1 = ab.invariant_factors();

    if verdict == TrivialityVerdict::ProvedTrivial && !ab.is_trivial() {
        return Err(HandleError::InconsistentVerdict);
    }

    let summands = match (verdict, c.stage()) {
        (TrivialityVerdict::ProvedTrivial, Stage::Full) => Some(c.relator_handles()),
        (TrivialityVerdict::ProvedTrivial, Stage::Reduced) => {
            Some(c.relator_handles().saturating_sub(1))
        }
        _ => None,
    };

    Ok(match summands {
        Some(count) => BoundaryDescriptor {
            kind: BoundaryKind::ConnectedSumS2xS2 { count },
            pi1,
            h1_invariant_factors: h1,
            b2: Some(2 * count as u64),
            signature: Some(0),
        },
        None => BoundaryDescriptor {
            kind: BoundaryKind::Unknown,
            pi1,
            h1_invariant_factors: h1,
            b2: None,
            signature: None,
        },
    })
}

/// One slide-realizable move on a tuple of nonnegative integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SlideMove {
    /// `a[target] -= a[source]`; only legal while
    /// `a[source] <= a[target]` and the indices differ
    Subtract { target: usize, source: usize },
    /// relabeling: `new[i] = old[perm[i]]`
    Permute(Vec<usize>),
}

/// A reduction run: the input tuple, every primitive move in order, and
/// the tuple the moves produce.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlideSequence {
    pub initial: Vec<u64>,
    pub moves: Vec<SlideMove>,
    pub final_tuple: Vec<u64>,
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

/// Splits signed attaching sums into magnitudes plus flags recording
/// which entries had their orientation reversed.
pub fn orient(sums: &[i64]) -> (Vec<u64>, Vec<bool>) {
    (
        sums.iter().map(|&x| x.unsigned_abs()).collect(),
        sums.iter().map(|&x| x < 0).collect(),
    )
}

/// Reduces a tuple with gcd 1 to `(1, 0, ..., 0)` by subtraction moves,
/// recording every primitive move, then one final permutation (possibly
/// the identity).
///
/// Strategy: pick the smallest nonzero entry (lowest index on ties) and
/// subtract it out of every other nonzero entry until each drops below
/// it; repeat until a single nonzero entry remains. The gcd is invariant
/// under both moves, so that entry is 1.
pub fn slide_reduce(tuple: &[u64]) -> Result<SlideSequence, SlideError> {
    if tuple.is_empty() {
        return Err(SlideError::EmptyTuple);
    }
    let g = tuple.iter().copied().fold(0, gcd_u64);
    if g != 1 {
        return Err(SlideError::GcdNotOne(g));
    }

    let mut a = tuple.to_vec();
    let mut moves = Vec::new();
    loop {
        let mut source = None;
        let mut nonzero = 0usize;
        for (i, &v) in a.iter().enumerate() {
            if v == 0 {
                continue;
            }
            nonzero += 1;
            match source {
                Some(s) if a[s] <= v => {}
                _ => source = Some(i),
            }
        }
        let s = source.expect("gcd 1 rules out the all-zero tuple");
        if nonzero == 1 {
            debug_assert_eq!(a[s], 1, "single survivor must be the gcd");
            let mut perm = vec![s];
            perm.extend((0..a.len()).filter(|&i| i != s));
            let moved: Vec<u64> = perm.iter().map(|&i| a[i]).collect();
            moves.push(SlideMove::Permute(perm));
            return Ok(SlideSequence {
                initial: tuple.to_vec(),
                moves,
                final_tuple: moved,
            });
        }
        for r in 0..a.len() {
            if r == s || a[r] == 0 {
                continue;
            }
            while a[r] >= a[s] {
                a[r] -= a[s];
                moves.push(SlideMove::Subtract {
                    target: r,
                    source: s,
                });
            }
        }
    }
}

/// Applies the moves to the tuple, re-checking each move's side
/// condition. The failing move's position is reported.
pub fn replay_slides(initial: &[u64], moves: &[SlideMove]) -> Result<Vec<u64>, SlideError> {
    let mut a = initial.to_vec();
    for (step, mv) in moves.iter().enumerate() {
        let illegal = SlideError::IllegalMove { step };
        match mv {
            SlideMove::Subtract { target, source } => {
                let (r, s) = (*target, *source);
                if r == s || r >= a.len() || s >= a.len() || a[s] > a[r] {
                    return Err(illegal);
                }
                a[r] -= a[s];
            }
            SlideMove::Permute(perm) => {
                if perm.len() != a.len() {
                    return Err(illegal);
                }
                let mut seen = vec![false; a.len()];
                for &i in perm {
                    if i >= a.len() || seen[i] {
                        return Err(illegal);
                    }
                    seen[i] = true;
                }
                a = perm.iter().map(|&i| a[i]).collect();
            }
        }
    }
    Ok(a)
}

/// Serializes moves one per line, one-based, with consecutive repeats of
/// the same subtraction run-length encoded: `sub r s xN`,
/// `perm i1 i2 ... ik`.
pub fn render_slide_moves(moves: &[SlideMove]) -> String {
    let mut out = String::new();
    let mut i = 0;
    while i < moves.len() {
        match &moves[i] {
            SlideMove::Subtract { target, source } => {
                let mut n = 1;
                while i + n < moves.len() && moves[i + n] == moves[i] {
                    n += 1;
                }
                out.push_str(&format!("sub {} {} x{}\n", target + 1, source + 1, n));
                i += n;
            }
            SlideMove::Permute(perm) => {
                out.push_str("perm");
                for &p in perm {
                    out.push_str(&format!(" {}", p + 1));
                }
                out.push('\n');
                i += 1;
            }
        }
    }
    out
}
