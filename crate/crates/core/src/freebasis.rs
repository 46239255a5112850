//! Nielsen reduction of finite word sets in a free group.
//!
//! [`nielsen_reduce`] drives a working set to a Nielsen-reduced one with
//! elementary transformations, logging every move so the run can be
//! replayed. Greedy length reduction alone can stall on dependent sets
//! where every two-element product preserves length, so after the strict
//! passes the reducer also applies length-preserving multiplications
//! whenever they shrink a word under the half-word order below. The final
//! nonempty words freely generate the same subgroup as the input, and the
//! input is a free basis exactly when no word collapsed to the identity.
//!
//! Word order: shorter first; for equal length `l` with `t = l / 2`,
//! compare the first `t` letters, then the first `t` letters of the
//! inverse, then (odd `l`) the middle letter. Letters compare by name,
//! then sign, positive first. Each word is kept in whichever of the two
//! orientations is smaller, so the order strictly decreases move by move
//! and the reduction terminates.

use std::cmp::Ordering;

use crate::words::{Letter, Word};

/// One elementary transformation of the working set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NielsenMove {
    /// `w[i] <- w[i]^-1`
    Invert { i: usize },
    /// exchange `w[i]` and `w[j]`
    Swap { i: usize, j: usize },
    /// `w[i] <- w[j] w[i]`, with `w[j]^-1` instead when `inverse` is set
    LeftMul { i: usize, j: usize, inverse: bool },
    /// `w[i] <- w[i] w[j]`, with `w[j]^-1` instead when `inverse` is set
    RightMul { i: usize, j: usize, inverse: bool },
}

fn letter_at_from_inverse(w: &Word, k: usize) -> Letter {
    w.letters()[w.len() - 1 - k].inverse()
}

/// Half-word comparison for words of equal length.
fn half_cmp_equal_len(a: &Word, b: &Word) -> Ordering {
    let l = a.len();
    let t = l / 2;
    for k in 0..t {
        match a.letters()[k].cmp(&b.letters()[k]) {
            Ordering::Equal => {}
            other => return other,
        }
    }
    for k in 0..t {
        match letter_at_from_inverse(a, k).cmp(&letter_at_from_inverse(b, k)) {
            Ordering::Equal => {}
            other => return other,
        }
    }
    if l % 2 == 1 {
        return a.letters()[t].cmp(&b.letters()[t]);
    }
    Ordering::Equal
}

fn half_cmp(a: &Word, b: &Word) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| half_cmp_equal_len(a, b))
}

/// The smaller of `w` and `w^-1` under the half-word order.
fn oriented_key(w: &Word) -> Word {
    let inv = w.invert();
    if half_cmp(&inv, w) == Ordering::Less {
        inv
    } else {
        w.clone()
    }
}

/// Result of a reduction run: the move log and the terminal working set
/// (empty words included, in their final positions).
#[derive(Debug, Clone)]
pub struct NielsenReduction {
    moves: Vec<NielsenMove>,
    working: Vec<Word>,
}

impl NielsenReduction {
    pub fn moves(&self) -> &[NielsenMove] {
        &self.moves
    }

    pub fn working_set(&self) -> &[Word] {
        &self.working
    }

    /// The nonempty terminal words: a free basis of the subgroup the
    /// input generates.
    pub fn reduced_set(&self) -> Vec<Word> {
        self.working.iter().filter(|w| !w.is_empty()).cloned().collect()
    }

    pub fn rank(&self) -> usize {
        self.working.iter().filter(|w| !w.is_empty()).count()
    }

    /// True when the input set itself was a free basis: nothing collapsed
    /// to the identity.
    pub fn is_basis(&self) -> bool {
        self.working.iter().all(|w| !w.is_empty())
    }
}

fn normalize(ws: &mut [Word], i: usize, moves: &mut Vec<NielsenMove>) {
    let inv = ws[i].invert();
    if half_cmp(&inv, &ws[i]) == Ordering::Less {
        ws[i] = inv;
        moves.push(NielsenMove::Invert { i });
    }
}

/// Selection sort by (length, letter sequence), each exchange logged.
fn sort_pass(ws: &mut [Word], moves: &mut Vec<NielsenMove>) {
    let key = |w: &Word| (w.len(), w.letters().to_vec());
    for i in 0..ws.len() {
        let min = (i..ws.len()).min_by_key(|&k| key(&ws[k])).unwrap();
        if min != i {
            ws.swap(i, min);
            moves.push(NielsenMove::Swap { i, j: min });
        }
    }
}

fn candidate(ws: &[Word], mv: NielsenMove) -> Word {
    match mv {
        NielsenMove::LeftMul { i, j, inverse } => {
            let f = if inverse { ws[j].invert() } else { ws[j].clone() };
            f.concat(&ws[i])
        }
        NielsenMove::RightMul { i, j, inverse } => {
            let f = if inverse { ws[j].invert() } else { ws[j].clone() };
            ws[i].concat(&f)
        }
        _ => unreachable!("only multiplications are scanned"),
    }
}

fn scan_moves(k: usize) -> impl Iterator<Item = NielsenMove> {
    (0..k).flat_map(move |i| {
        (0..k).filter(move |&j| j != i).flat_map(move |j| {
            [
                NielsenMove::LeftMul { i, j, inverse: false },
                NielsenMove::LeftMul { i, j, inverse: true },
                NielsenMove::RightMul { i, j, inverse: false },
                NielsenMove::RightMul { i, j, inverse: true },
            ]
        })
    })
}

/// Applies the first applicable move: a strict length reduction if one
/// exists anywhere, otherwise a length-preserving multiplication that
/// lowers the oriented key. Returns false when neither exists.
fn apply_first_move(ws: &mut Vec<Word>, moves: &mut Vec<NielsenMove>) -> bool {
    let k = ws.len();
    for mv in scan_moves(k) {
        let (i, cand) = match mv {
            NielsenMove::LeftMul { i, .. } | NielsenMove::RightMul { i, .. } => {
                (i, candidate(ws, mv))
            }
            _ => unreachable!(),
        };
        if cand.len() < ws[i].len() {
            ws[i] = cand;
            moves.push(mv);
            normalize(ws, i, moves);
            return true;
        }
    }
    for mv in scan_moves(k) {
        let (i, cand) = match mv {
            NielsenMove::LeftMul { i, .. } | NielsenMove::RightMul { i, .. } => {
                (i, candidate(ws, mv))
            }
            _ => unreachable!(),
        };
        if cand.len() == ws[i].len()
            && half_cmp(&oriented_key(&cand), &oriented_key(&ws[i])) == Ordering::Less
        {
            ws[i] = cand;
            moves.push(mv);
            normalize(ws, i, moves);
            return true;
        }
    }
    false
}

/// Reduces the set, returning the move log and the terminal working set.
pub fn nielsen_reduce(words: &[Word]) -> NielsenReduction {
    let mut ws = words.to_vec();
    let mut moves = Vec::new();
    for i in 0..ws.len() {
        normalize(&mut ws, i, &mut moves);
    }
    loop {
        sort_pass(&mut ws, &mut moves);
        if !apply_first_move(&mut ws, &mut moves) {
            break;
        }
    }
    NielsenReduction { moves, working: ws }
}

/// Replays a move log against an input set, returning the final state.
/// Panics on out-of-range indices; a log only makes sense against the
/// set it was recorded for.
pub fn replay_moves(words: &[Word], moves: &[NielsenMove]) -> Vec<Word> {
    let mut ws = words.to_vec();
    for &mv in moves {
        match mv {
            NielsenMove::Invert { i } => ws[i] = ws[i].invert(),
            NielsenMove::Swap { i, j } => ws.swap(i, j),
            NielsenMove::LeftMul { .. } | NielsenMove::RightMul { .. } => {
                let (i, cand) = match mv {
                    NielsenMove::LeftMul { i, .. } | NielsenMove::RightMul { i, .. } => {
                        (i, candidate(&ws, mv))
                    }
                    _ => unreachable!(),
                };
                ws[i] = cand;
            }
        }
    }
    ws
}
