//! Todd-Coxeter coset enumeration over the trivial subgroup.
//!
//! [`enumerate_cosets`] either proves the presented group finite and
//! returns its multiplication-complete coset table, or gives up when the
//! number of cosets ever defined passes the caller's bound. Two standard
//! strategies are provided: HLT (relator scanning with row filling) and
//! Felsch (deduction stacking with minimal definitions). Both share the
//! same table, union-find coincidence queue, and scanning core.
//!
//! A returned table is always re-verified: every entry defined, inverse
//! entries consistent, and every relator tracing to the identity at every
//! coset. Verification failure is a bug, not an input condition, and
//! panics.
//!
//! Enumeration proves nothing when the bound is hit: the group may be
//! finite but demand more cosets, or genuinely infinite. Callers decide
//! what [`Outcome::BoundExceeded`] means for them.

use std::collections::BTreeSet;
use std::str::FromStr;

use crate::presentations::Presentation;
use crate::words::{Sign, Word};

pub const DEFAULT_MAX_COSETS: usize = 1_000_000;

/// Default progress-callback interval, counted in coset definitions.
pub const PROGRESS_INTERVAL: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Hlt,
    Felsch,
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "hlt" => Ok(Strategy::Hlt),
            "felsch" => Ok(Strategy::Felsch),
            other => Err(format!("unknown strategy `{other}`, expected hlt or felsch")),
        }
    }
}

/// Complete coset table of a finite quotient: cosets `0..order`, with the
/// action of every generator and inverse defined everywhere.
#[derive(Debug, Clone)]
pub struct CompleteCosetTable {
    ngens: usize,
    order: usize,
    /// row-major, `order` rows, `2 * ngens` columns
    table: Vec<u32>,
}

impl CompleteCosetTable {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn generators(&self) -> usize {
        self.ngens
    }

    pub fn act(&self, coset: usize, gen: usize, inverse: bool) -> usize {
        let col = 2 * gen + usize::from(inverse);
        self.table[coset * 2 * self.ngens + col] as usize
    }

    /// Traces a word (as generator index / inversion pairs) from a coset.
    pub fn trace(&self, start: usize, path: &[(usize, bool)]) -> usize {
        path.iter()
            .fold(start, |c, &(g, inv)| self.act(c, g, inv))
    }
}

#[derive(Debug)]
pub enum Outcome {
    Finite(CompleteCosetTable),
    BoundExceeded {
        max_cosets: usize,
        live_at_stop: usize,
    },
}

impl Outcome {
    pub fn order(&self) -> Option<usize> {
        match self {
            Outcome::Finite(t) => Some(t.order()),
            Outcome::BoundExceeded { .. } => None,
        }
    }
}

/// Counters describing how hard a run worked, independent of its outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationStats {
    /// cosets ever defined, including ones later merged away
    pub cosets_defined: usize,
    /// coincidences processed (pairs of cosets identified)
    pub coincidences: usize,
}

#[derive(Debug)]
pub struct Enumeration {
    pub outcome: Outcome,
    pub stats: EnumerationStats,
}

/// Raised internally when the definition budget is exhausted or the
/// progress callback asks to stop.
struct Stop;

const UNDEF: u32 = 0;

struct Enumerator<'a> {
    width: usize,
    /// flat table, coset 1 at offset `width`; row 0 unused
    table: Vec<u32>,
    /// union-find parent per coset; `rep[c] == c` means live
    parent: Vec<u32>,
    live: usize,
    total_defined: usize,
    coincidences: usize,
    max_cosets: usize,
    progress_interval: usize,
    progress: Option<&'a mut dyn FnMut(usize, usize) -> bool>,
}

impl<'a> Enumerator<'a> {
    fn new(
        ngens: usize,
        max_cosets: usize,
        progress_interval: usize,
        progress: Option<&'a mut dyn FnMut(usize, usize) -> bool>,
    ) -> Enumerator<'a> {
        let width = 2 * ngens;
        Enumerator {
            width,
            table: vec![UNDEF; 2 * width],
            parent: vec![0, 1],
            live: 1,
            total_defined: 1,
            coincidences: 0,
            max_cosets,
            progress_interval: progress_interval.max(1),
            progress,
        }
    }

    fn max_index(&self) -> u32 {
        (self.parent.len() - 1) as u32
    }

    fn is_live(&self, c: u32) -> bool {
        self.parent[c as usize] == c
    }

    fn rep(&mut self, mut c: u32) -> u32 {
        let mut root = c;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        while self.parent[c as usize] != root {
            let next = self.parent[c as usize];
            self.parent[c as usize] = root;
            c = next;
        }
        root
    }

    fn raw(&self, c: u32, col: usize) -> u32 {
        self.table[c as usize * self.width + col]
    }

    fn set(&mut self, c: u32, col: usize, v: u32) {
        self.table[c as usize * self.width + col] = v;
    }

    /// Reads an entry and lazily rewrites it through the union-find.
    fn lookup(&mut self, c: u32, col: usize) -> u32 {
        let v = self.raw(c, col);
        if v == UNDEF {
            return UNDEF;
        }
        let r = self.rep(v);
        if r != v {
            self.set(c, col, r);
        }
        r
    }

    /// Allocates a new coset as the image of `(from, col)`.
    fn define(&mut self, from: u32, col: usize) -> Result<u32, Stop> {
        if self.total_defined >= self.max_cosets {
            return Err(Stop);
        }
        let new = self.parent.len() as u32;
        self.parent.push(new);
        self.table.extend(std::iter::repeat_n(UNDEF, self.width));
        self.live += 1;
        self.total_defined += 1;
        self.set(from, col, new);
        self.set(new, col ^ 1, from);
        if self.total_defined % self.progress_interval == 0 {
            if let Some(cb) = self.progress.as_mut() {
                if !cb(self.total_defined, self.live) {
                    return Err(Stop);
                }
            }
        }
        Ok(new)
    }

    fn merge(&mut self, a: u32, b: u32, queue: &mut Vec<u32>) {
        let a = self.rep(a);
        let b = self.rep(b);
        if a == b {
            return;
        }
        let (keep, dead) = if a < b { (a, b) } else { (b, a) };
        self.parent[dead as usize] = keep;
        self.live -= 1;
        self.coincidences += 1;
        queue.push(dead);
    }

    /// Processes the coincidence `a = b`, transferring rows of dead cosets
    /// and queueing any secondary coincidences. New entries are reported
    /// to `deductions` when the caller keeps a deduction stack.
    fn coincidence(&mut self, a: u32, b: u32, mut deductions: Option<&mut Vec<(u32, usize)>>) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut at = 0;
        while at < queue.len() {
            let dead = queue[at];
            at += 1;
            for col in 0..self.width {
                let d = self.raw(dead, col);
                if d == UNDEF {
                    continue;
                }
                // drop the mirror entry pointing back at the dead coset
                self.set(d, col ^ 1, UNDEF);
                let keep = self.rep(dead);
                let dr = self.rep(d);
                let existing = self.lookup(keep, col);
                if existing != UNDEF {
                    self.merge(existing, dr, &mut queue);
                } else {
                    let back = self.lookup(dr, col ^ 1);
                    if back != UNDEF {
                        self.merge(keep, back, &mut queue);
                    } else {
                        self.set(keep, col, dr);
                        self.set(dr, col ^ 1, keep);
                        if let Some(stack) = deductions.as_deref_mut() {
                            stack.push((keep, col));
                            stack.push((dr, col ^ 1));
                        }
                    }
                }
            }
        }
    }

    /// Scans relator `word` from `start`. With `fill` set, gaps longer
    /// than one are closed by defining new cosets (HLT); otherwise the
    /// scan stops short and only forced facts are recorded (Felsch).
    fn scan(
        &mut self,
        start: u32,
        word: &[usize],
        fill: bool,
        mut deductions: Option<&mut Vec<(u32, usize)>>,
    ) -> Result<(), Stop> {
        let mut f = start;
        let mut i = 0usize;
        let mut b = start;
        let mut j = word.len(); // backward cursor sits after position j - 1
        loop {
            while i < j {
                let next = self.lookup(f, word[i]);
                if next == UNDEF {
                    break;
                }
                f = next;
                i += 1;
            }
            if i == j {
                if f != b {
                    self.coincidence(f, b, deductions.as_deref_mut());
                }
                return Ok(());
            }
            while j > i {
                let prev = self.lookup(b, word[j - 1] ^ 1);
                if prev == UNDEF {
                    break;
                }
                b = prev;
                j -= 1;
            }
            if j == i {
                if f != b {
                    self.coincidence(f, b, deductions.as_deref_mut());
                }
                return Ok(());
            }
            if j == i + 1 {
                // exactly one gap: the relator forces this entry
                self.set(f, word[i], b);
                self.set(b, word[i] ^ 1, f);
                if let Some(stack) = deductions.as_deref_mut() {
                    stack.push((f, word[i]));
                    stack.push((b, word[i] ^ 1));
                }
                return Ok(());
            }
            if !fill {
                return Ok(());
            }
            f = self.define(f, word[i])?;
            i += 1;
        }
    }

    fn hlt(&mut self, relators: &[Vec<usize>]) -> Result<(), Stop> {
        let mut alpha: u32 = 1;
        while alpha <= self.max_index() {
            if !self.is_live(alpha) {
                alpha += 1;
                continue;
            }
            for rel in relators {
                self.scan(alpha, rel, true, None)?;
                if !self.is_live(alpha) {
                    break;
                }
            }
            if self.is_live(alpha) {
                for col in 0..self.width {
                    if self.lookup(alpha, col) == UNDEF {
                        self.define(alpha, col)?;
                    }
                }
            }
            alpha += 1;
        }
        Ok(())
    }

    fn felsch(&mut self, groups: &[Vec<Vec<usize>>]) -> Result<(), Stop> {
        let mut deductions: Vec<(u32, usize)> = Vec::new();
        for col in 0..self.width {
            // facts about coset 1 present before the loop starts
            deductions.push((1, col));
        }
        let mut cursor: u32 = 1;
        loop {
            while let Some((c, col)) = deductions.pop() {
                if !self.is_live(c) {
                    continue;
                }
                if self.lookup(c, col) == UNDEF {
                    continue;
                }
                for k in 0..groups[col].len() {
                    let rel = groups[col][k].clone();
                    let c = self.rep(c);
                    self.scan(c, &rel, false, Some(&mut deductions))?;
                    if !self.is_live(c) {
                        break;
                    }
                }
            }

            let mut hole = None;
            'outer: for pass in 0..2 {
                let from = if pass == 0 { cursor } else { 1 };
                for c in from..=self.max_index() {
                    if !self.is_live(c) {
                        continue;
                    }
                    for col in 0..self.width {
                        if self.lookup(c, col) == UNDEF {
                            hole = Some((c, col));
                            cursor = c;
                            break 'outer;
                        }
                    }
                }
                if pass == 0 && cursor == 1 {
                    break;
                }
            }

            match hole {
                Some((c, col)) => {
                    let new = self.define(c, col)?;
                    deductions.push((c, col));
                    deductions.push((new, col ^ 1));
                }
                None => return Ok(()),
            }
        }
    }

    /// Compacts live cosets to `0..order` and fully re-checks the result.
    fn finish(mut self, relators: &[Vec<usize>]) -> CompleteCosetTable {
        let max = self.max_index();
        let mut map = vec![u32::MAX; max as usize + 1];
        let mut order = 0u32;
        for c in 1..=max {
            if self.is_live(c) {
                map[c as usize] = order;
                order += 1;
            }
        }
        assert_eq!(order as usize, self.live, "live count drifted");

        let ngens = self.width / 2;
        let mut compact = vec![0u32; order as usize * self.width];
        for c in 1..=max {
            if !self.is_live(c) {
                continue;
            }
            for col in 0..self.width {
                let v = self.lookup(c, col);
                assert_ne!(v, UNDEF, "incomplete table at coset {c} column {col}");
                compact[map[c as usize] as usize * self.width + col] = map[v as usize];
            }
        }

        let out = CompleteCosetTable {
            ngens,
            order: order as usize,
            table: compact,
        };
        for c in 0..out.order {
            for g in 0..ngens {
                let fwd = out.act(c, g, false);
                assert_eq!(out.act(fwd, g, true), c, "inverse action inconsistent");
                let bwd = out.act(c, g, true);
                assert_eq!(out.act(bwd, g, false), c, "inverse action inconsistent");
            }
            for rel in relators {
                let end = rel.iter().fold(c, |x, &col| {
                    out.table[x * self.width + col] as usize
                });
                assert_eq!(end, c, "relator does not trace to identity");
            }
        }
        out
    }
}

fn relator_columns(p: &Presentation, w: &Word) -> Vec<usize> {
    let index = |g: &crate::words::GeneratorName| {
        p.generators().iter().position(|x| x == g).expect("declared generator")
    };
    w.letters()
        .iter()
        .map(|l| 2 * index(&l.gen) + usize::from(l.sign == Sign::Minus))
        .collect()
}

/// Relator rotations (of each relator and its inverse) bucketed by first
/// column, duplicates removed. Scanning the bucket of a new table entry
/// checks every relator instance that can cross it.
fn rotation_groups(width: usize, relators: &[Vec<usize>]) -> Vec<Vec<Vec<usize>>> {
    let mut seen: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new(); width];
    for rel in relators {
        let inverse: Vec<usize> = rel.iter().rev().map(|c| c ^ 1).collect();
        for base in [rel, &inverse] {
            for k in 0..base.len() {
                let mut rot = base[k..].to_vec();
                rot.extend_from_slice(&base[..k]);
                seen[rot[0]].insert(rot);
            }
        }
    }
    seen.into_iter().map(|s| s.into_iter().collect()).collect()
}

/// Runs Todd-Coxeter on the presentation over the trivial subgroup.
/// `max_cosets` bounds the number of cosets ever defined. The progress
/// callback, if any, fires every [`PROGRESS_INTERVAL`] definitions with
/// (total defined, currently live); returning false stops the run as if
/// the bound had been hit.
pub fn enumerate_cosets(
    p: &Presentation,
    strategy: Strategy,
    max_cosets: usize,
    progress: Option<&mut dyn FnMut(usize, usize) -> bool>,
) -> Outcome {
    enumerate_cosets_detailed(p, strategy, max_cosets, PROGRESS_INTERVAL, progress).outcome
}

/// [`enumerate_cosets`] with the progress interval exposed and work
/// counters returned alongside the outcome.
pub fn enumerate_cosets_detailed(
    p: &Presentation,
    strategy: Strategy,
    max_cosets: usize,
    progress_interval: usize,
    progress: Option<&mut dyn FnMut(usize, usize) -> bool>,
) -> Enumeration {
    let relators: Vec<Vec<usize>> = p
        .relators()
        .iter()
        .filter(|r| !r.is_empty())
        .map(|r| relator_columns(p, r))
        .collect();

    let mut e = Enumerator::new(p.generators().len(), max_cosets, progress_interval, progress);
    let run = match strategy {
        Strategy::Hlt => e.hlt(&relators),
        Strategy::Felsch => {
            let groups = rotation_groups(e.width, &relators);
            e.felsch(&groups)
        }
    };
    let stats = EnumerationStats {
        cosets_defined: e.total_defined,
        coincidences: e.coincidences,
    };
    let outcome = match run {
        Ok(()) => Outcome::Finite(e.finish(&relators)),
        Err(Stop) => Outcome::BoundExceeded {
            max_cosets,
            live_at_stop: e.live,
        },
    };
    Enumeration { outcome, stats }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::parse_presentation;
    use proptest::prelude::*;

    // the proptest prelude also exports a `Strategy` trait
    use super::Strategy;

    fn order_of(text: &str, strategy: Strategy) -> Option<usize> {
        let p = parse_presentation(text).unwrap();
        enumerate_cosets(&p, strategy, 100_000, None).order()
    }

    #[test]
    fn calibration_orders() {
        for strategy in [Strategy::Hlt, Strategy::Felsch] {
            assert_eq!(
                order_of("gens: a b\nrel: a^2\nrel: b^3\nrel: (a b)^2\n", strategy),
                Some(6),
                "{strategy:?}"
            );
            assert_eq!(order_of("gens: a\nrel: a^5\n", strategy), Some(5));
            assert_eq!(order_of("gens: a b\nrel: a\nrel: b\n", strategy), Some(1));
            // quaternion group
            assert_eq!(
                order_of(
                    "gens: a b\nrel: a^4\nrel: a^2 b^-2\nrel: b^-1 a b a\n",
                    strategy
                ),
                Some(8)
            );
            // symmetric group on four points via its Coxeter diagram
            assert_eq!(
                order_of(
                    "gens: a b c\nrel: a^2\nrel: b^2\nrel: c^2\nrel: (a b)^3\nrel: (b c)^3\nrel: (a c)^2\n",
                    strategy
                ),
                Some(24)
            );
        }
    }

    #[test]
    fn infinite_groups_exhaust_the_bound() {
        let free_product = parse_presentation("gens: x1 x2\nrel: x1^2\nrel: x2^3\n").unwrap();
        for strategy in [Strategy::Hlt, Strategy::Felsch] {
            let out = enumerate_cosets(&free_product, strategy, 3_000, None);
            assert!(matches!(out, Outcome::BoundExceeded { .. }), "{strategy:?}");
        }
        let z = parse_presentation("gens: a\n").unwrap();
        assert!(matches!(
            enumerate_cosets(&z, Strategy::Hlt, 50, None),
            Outcome::BoundExceeded { .. }
        ));
    }

    #[test]
    fn degenerate_presentations() {
        // no generators at all
        let p = parse_presentation("gens:\n").unwrap();
        assert_eq!(enumerate_cosets(&p, Strategy::Hlt, 10, None).order(), Some(1));
        assert_eq!(
            enumerate_cosets(&p, Strategy::Felsch, 10, None).order(),
            Some(1)
        );
        // empty relator is inert
        assert_eq!(
            order_of("gens: a\nrel:\nrel: a^3\n", Strategy::Hlt),
            Some(3)
        );
        assert_eq!(
            order_of("gens: a\nrel:\nrel: a^3\n", Strategy::Felsch),
            Some(3)
        );
    }

    #[test]
    fn table_supports_tracing() {
        let p = parse_presentation("gens: a b\nrel: a^2\nrel: b^3\nrel: (a b)^2\n").unwrap();
        let Outcome::Finite(t) = enumerate_cosets(&p, Strategy::Felsch, 1000, None) else {
            panic!("expected finite");
        };
        assert_eq!(t.order(), 6);
        for c in 0..t.order() {
            // a^2 fixes every coset, as does b^3
            assert_eq!(t.trace(c, &[(0, false), (0, false)]), c);
            assert_eq!(t.trace(c, &[(1, false), (1, false), (1, false)]), c);
        }
        // a acts nontrivially somewhere
        assert!((0..t.order()).any(|c| t.act(c, 0, false) != c));
    }

    #[test]
    fn detailed_run_reports_work_counters() {
        let p = parse_presentation("gens: a b\nrel: a^2\nrel: b^3\nrel: (a b)^2\n").unwrap();
        let run = enumerate_cosets_detailed(&p, Strategy::Hlt, 100_000, PROGRESS_INTERVAL, None);
        assert_eq!(run.outcome.order(), Some(6));
        assert!(run.stats.cosets_defined >= 6);

        let z = parse_presentation("gens: a\n").unwrap();
        let run = enumerate_cosets_detailed(&z, Strategy::Hlt, 50, PROGRESS_INTERVAL, None);
        let Outcome::BoundExceeded {
            max_cosets,
            live_at_stop,
        } = run.outcome
        else {
            panic!("free group must exhaust the bound");
        };
        assert_eq!(max_cosets, 50);
        assert!(live_at_stop <= 50 && live_at_stop > 0);
        assert_eq!(run.stats.cosets_defined, 50);
    }

    #[test]
    fn progress_callback_can_abort() {
        let p = parse_presentation("gens: a b\n").unwrap(); // free of rank 2
        let mut calls = 0usize;
        let mut cb = |_total: usize, _live: usize| {
            calls += 1;
            false
        };
        let out = enumerate_cosets(&p, Strategy::Hlt, usize::MAX >> 8, Some(&mut cb));
        assert!(matches!(out, Outcome::BoundExceeded { .. }));
        assert_eq!(calls, 1);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn strategies_agree_on_small_presentations(
            rel_specs in prop::collection::vec(
                prop::collection::vec((0usize..2, prop::bool::ANY), 1..5), 0..4)
        ) {
            let names = [
                crate::words::GeneratorName::new("a").unwrap(),
                crate::words::GeneratorName::new("b").unwrap(),
            ];
            let relators: Vec<Word> = rel_specs
                .into_iter()
                .map(|ls| Word::from_letters(ls.into_iter().map(|(g, inv)| {
                    crate::words::Letter::new(
                        names[g].clone(),
                        if inv { Sign::Minus } else { Sign::Plus },
                    )
                })))
                .collect();
            let p = Presentation::new(names.to_vec(), relators).unwrap();
            let hlt = enumerate_cosets(&p, Strategy::Hlt, 4_000, None).order();
            let felsch = enumerate_cosets(&p, Strategy::Felsch, 4_000, None).order();
            if let (Some(x), Some(y)) = (hlt, felsch) {
                prop_assert_eq!(x, y);
            }
        }
    }
}
