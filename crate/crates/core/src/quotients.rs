//! Counting homomorphisms into small finite permutation groups.
//!
//! A [`FiniteTarget`] is a concrete finite group with precomputed
//! multiplication and inverse tables, built by closing a generating set
//! of permutations. The stock targets are the symmetric groups on 3, 4,
//! and 5 points and the alternating group on 4; arbitrary permutation
//! groups can be built with [`FiniteTarget::from_generators`].
//!
//! [`hom_count`] counts all homomorphisms from a presented group to a
//! target by depth-first search over generator images, checking each
//! relator as soon as every generator it mentions has an image. The count
//! includes the trivial homomorphism, so it is at least 1; a count of
//! exactly 1 certifies that the presented group has no nontrivial map to
//! the target. Counts are invariant under Tietze transformations, which
//! is what makes them useful as a cross-check between different
//! presentations of one group.

use std::fmt;
use std::str::FromStr;

use crate::presentations::Presentation;
use crate::words::Sign;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetKind {
    S3,
    A4,
    S4,
    S5,
}

impl TargetKind {
    pub const ALL: [TargetKind; 4] = [
        TargetKind::S3,
        TargetKind::A4,
        TargetKind::S4,
        TargetKind::S5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TargetKind::S3 => "s3",
            TargetKind::A4 => "a4",
            TargetKind::S4 => "s4",
            TargetKind::S5 => "s5",
        }
    }
}

impl fmt::Display for TargetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TargetKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "s3" => Ok(TargetKind::S3),
            "a4" => Ok(TargetKind::A4),
            "s4" => Ok(TargetKind::S4),
            "s5" => Ok(TargetKind::S5),
            other => Err(format!(
                "unknown target `{other}`, expected one of s3, a4, s4, s5"
            )),
        }
    }
}

/// A finite group as flat multiplication and inverse tables. Element 0 is
/// the identity. `mul(a, b)` composes left to right: apply `a`, then `b`.
#[derive(Debug, Clone)]
pub struct FiniteTarget {
    name: String,
    order: usize,
    mul: Vec<u16>,
    inv: Vec<u16>,
}

fn compose(p: &[u8], q: &[u8]) -> Vec<u8> {
    p.iter().map(|&x| q[x as usize]).collect()
}

impl FiniteTarget {
    /// Builds one of the stock targets from its standard generators.
    pub fn standard(kind: TargetKind) -> FiniteTarget {
        let (degree, gens): (usize, Vec<Vec<usize>>) = match kind {
            TargetKind::S3 => (3, vec![vec![1, 0, 2], vec![1, 2, 0]]),
            TargetKind::A4 => (4, vec![vec![1, 2, 0, 3], vec![0, 2, 3, 1]]),
            TargetKind::S4 => (4, vec![vec![1, 0, 2, 3], vec![1, 2, 3, 0]]),
            TargetKind::S5 => (5, vec![vec![1, 0, 2, 3, 4], vec![1, 2, 3, 4, 0]]),
        };
        let t = FiniteTarget::from_generators(kind.name(), degree, &gens)
            .expect("stock generators are valid");
        let expected = match kind {
            TargetKind::S3 => 6,
            TargetKind::A4 => 12,
            TargetKind::S4 => 24,
            TargetKind::S5 => 120,
        };
        assert_eq!(t.order, expected, "stock target has wrong order");
        t
    }

    /// Closes a permutation generating set into a full group table.
    /// Permutations act on `0..degree`; `gens[k][x]` is the image of `x`.
    pub fn from_generators(
        name: &str,
        degree: usize,
        gens: &[Vec<usize>],
    ) -> Result<FiniteTarget, String> {
        if degree > u8::MAX as usize {
            return Err(format!("degree {degree} too large"));
        }
        let mut packed: Vec<Vec<u8>> = Vec::with_capacity(gens.len());
        for (k, g) in gens.iter().enumerate() {
            if g.len() != degree {
                return Err(format!("generator {k} has length {}", g.len()));
            }
            let mut seen = vec![false; degree];
            for &img in g {
                if img >= degree || seen[img] {
                    return Err(format!("generator {k} is not a permutation"));
                }
                seen[img] = true;
            }
            packed.push(g.iter().map(|&x| x as u8).collect());
        }

        let identity: Vec<u8> = (0..degree as u8).collect();
        let mut elems: Vec<Vec<u8>> = vec![identity.clone()];
        let mut index = std::collections::BTreeMap::new();
        index.insert(identity, 0u16);
        let mut at = 0usize;
        while at < elems.len() {
            let cur = elems[at].clone();
            at += 1;
            for g in &packed {
                let next = compose(&cur, g);
                if !index.contains_key(&next) {
                    let id = elems.len();
                    if id > u16::MAX as usize {
                        return Err("group too large for table".to_owned());
                    }
                    index.insert(next.clone(), id as u16);
                    elems.push(next);
                }
            }
        }

        let order = elems.len();
        let mut mul = vec![0u16; order * order];
        for i in 0..order {
            for j in 0..order {
                let prod = compose(&elems[i], &elems[j]);
                let k = *index
                    .get(&prod)
                    .expect("closure is closed under multiplication");
                mul[i * order + j] = k;
            }
        }
        let mut inv = vec![0u16; order];
        for i in 0..order {
            let j = (0..order)
                .find(|&j| mul[i * order + j] == 0)
                .expect("every element has an inverse");
            assert_eq!(mul[j * order + i], 0, "one-sided inverse");
            inv[i] = j as u16;
        }

        let t = FiniteTarget {
            name: name.to_owned(),
            order,
            mul,
            inv,
        };
        t.check_associativity();
        Ok(t)
    }

    /// Table sanity: exhaustive for small orders, strided above that.
    fn check_associativity(&self) {
        let n = self.order;
        let step = if n <= 24 { 1 } else { 7 };
        let mut i = 0;
        while i < n {
            let mut j = 0;
            while j < n {
                let mut k = 0;
                while k < n {
                    let left = self.mul(self.mul(i as u16, j as u16), k as u16);
                    let right = self.mul(i as u16, self.mul(j as u16, k as u16));
                    assert_eq!(left, right, "associativity failed");
                    k += step;
                }
                j += step;
            }
            i += step;
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.order + b as usize]
    }

    pub fn inv(&self, a: u16) -> u16 {
        self.inv[a as usize]
    }
}

type Path = Vec<(usize, bool)>;

fn relator_paths(p: &Presentation) -> Vec<Vec<Path>> {
    let n = p.generators().len();
    let mut by_level: Vec<Vec<Path>> = vec![Vec::new(); n];
    for r in p.relators() {
        if r.is_empty() {
            continue;
        }
        let path: Path = r
            .letters()
            .iter()
            .map(|l| {
                let g = p
                    .generators()
                    .iter()
                    .position(|x| x == &l.gen)
                    .expect("declared generator");
                (g, l.sign == Sign::Minus)
            })
            .collect();
        let level = path.iter().map(|&(g, _)| g).max().unwrap();
        by_level[level].push(path);
    }
    by_level
}

fn path_holds(t: &FiniteTarget, images: &[u16], path: &[(usize, bool)]) -> bool {
    let mut acc = 0u16;
    for &(g, invert) in path {
        let mut e = images[g];
        if invert {
            e = t.inv(e);
        }
        acc = t.mul(acc, e);
    }
    acc == 0
}

fn dfs(t: &FiniteTarget, by_level: &[Vec<Path>], images: &mut Vec<u16>, level: usize) -> u64 {
    let n = by_level.len();
    if level == n {
        return 1;
    }
    let mut total = 0;
    for e in 0..t.order() as u16 {
        images[level] = e;
        if by_level[level]
            .iter()
            .all(|path| path_holds(t, images, path))
        {
            total += dfs(t, by_level, images, level + 1);
        }
    }
    total
}

/// Counts homomorphisms from the presented group to the target. The
/// search assigns generator images in presentation order and checks each
/// relator at the first level where all its generators are assigned.
/// With `jobs > 1` the images of the first generator are partitioned
/// over that many threads.
pub fn hom_count(p: &Presentation, t: &FiniteTarget, jobs: usize) -> u64 {
    let n = p.generators().len();
    if n == 0 {
        return 1;
    }
    let by_level = relator_paths(p);
    let jobs = jobs.clamp(1, t.order());
    if jobs == 1 {
        let mut images = vec![0u16; n];
        return dfs(t, &by_level, &mut images, 0);
    }

    let by_level = &by_level;
    std::thread::scope(|scope| {
        let mut handles = Vec::with_capacity(jobs);
        for worker in 0..jobs {
            handles.push(scope.spawn(move || {
                let mut total = 0u64;
                let mut images = vec![0u16; n];
                for e in (worker..t.order()).step_by(jobs) {
                    images[0] = e as u16;
                    if by_level[0].iter().all(|path| path_holds(t, &images, path)) {
                        total += dfs(t, by_level, &mut images, 1);
                    }
                }
                total
            }));
        }
        handles.into_iter().map(|h| h.join().unwrap()).sum()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::parse_presentation;

    fn seed() -> Presentation {
        Presentation::free_product_of_cyclics(&[2, 3])
    }

    #[test]
    fn stock_targets_have_right_orders() {
        assert_eq!(FiniteTarget::standard(TargetKind::S3).order(), 6);
        assert_eq!(FiniteTarget::standard(TargetKind::A4).order(), 12);
        assert_eq!(FiniteTarget::standard(TargetKind::S4).order(), 24);
        assert_eq!(FiniteTarget::standard(TargetKind::S5).order(), 120);
    }

    #[test]
    fn from_generators_rejects_bad_input() {
        assert!(FiniteTarget::from_generators("x", 3, &[vec![0, 0, 1]]).is_err());
        assert!(FiniteTarget::from_generators("x", 3, &[vec![0, 1]]).is_err());
        assert!(FiniteTarget::from_generators("x", 3, &[vec![0, 1, 3]]).is_err());
    }

    /// Counts by enumerating every assignment, no pruning. Slow but
    /// independent of the search code.
    fn brute_force(p: &Presentation, t: &FiniteTarget) -> u64 {
        let n = p.generators().len();
        let paths: Vec<Path> = p
            .relators()
            .iter()
            .filter(|r| !r.is_empty())
            .map(|r| {
                r.letters()
                    .iter()
                    .map(|l| {
                        let g = p.generators().iter().position(|x| x == &l.gen).unwrap();
                        (g, l.sign == crate::words::Sign::Minus)
                    })
                    .collect()
            })
            .collect();
        let mut images = vec![0u16; n];
        let mut count = 0u64;
        loop {
            if paths.iter().all(|path| path_holds(t, &images, path)) {
                count += 1;
            }
            let mut k = 0;
            loop {
                if k == n {
                    return count;
                }
                images[k] += 1;
                if (images[k] as usize) < t.order() {
                    break;
                }
                images[k] = 0;
                k += 1;
            }
        }
    }

    #[test]
    fn seed_counts_match_brute_force() {
        let p = seed();
        let expected = [
            (TargetKind::S3, 12u64),
            (TargetKind::A4, 36),
            (TargetKind::S4, 90),
            (TargetKind::S5, 546),
        ];
        for (kind, want) in expected {
            let t = FiniteTarget::standard(kind);
            assert_eq!(hom_count(&p, &t, 1), want, "{kind}");
            assert_eq!(brute_force(&p, &t), want, "{kind} brute force");
        }
    }

    #[test]
    fn small_presentation_counts() {
        let s3 = FiniteTarget::standard(TargetKind::S3);
        let c2 = parse_presentation("gens: a\nrel: a^2\n").unwrap();
        assert_eq!(hom_count(&c2, &s3, 1), 4);
        let free2 = parse_presentation("gens: a b\n").unwrap();
        assert_eq!(hom_count(&free2, &s3, 1), 36);
        let trivial = parse_presentation("gens: a\nrel: a\n").unwrap();
        assert_eq!(hom_count(&trivial, &s3, 1), 1);
        let none = parse_presentation("gens:\n").unwrap();
        assert_eq!(hom_count(&none, &s3, 1), 1);
    }

    #[test]
    fn thread_partition_does_not_change_counts() {
        let p = seed();
        for kind in TargetKind::ALL {
            let t = FiniteTarget::standard(kind);
            let sequential = hom_count(&p, &t, 1);
            for jobs in [2, 3, 8, 200] {
                assert_eq!(hom_count(&p, &t, jobs), sequential, "{kind} jobs={jobs}");
            }
        }
    }

    #[test]
    fn dihedral_counts_agree_with_brute_force() {
        let p = parse_presentation("gens: a b\nrel: a^2\nrel: b^3\nrel: (a b)^2\n").unwrap();
        for kind in TargetKind::ALL {
            let t = FiniteTarget::standard(kind);
            assert_eq!(hom_count(&p, &t, 1), brute_force(&p, &t), "{kind}");
        }
    }

    #[test]
    fn counts_survive_a_tietze_move() {
        // same group, different presentations: D3 as reflections
        let p1 = parse_presentation("gens: a b\nrel: a^2\nrel: b^3\nrel: (a b)^2\n").unwrap();
        let p2 = parse_presentation("gens: r s\nrel: r^2\nrel: s^2\nrel: (r s)^3\n").unwrap();
        for kind in TargetKind::ALL {
            let t = FiniteTarget::standard(kind);
            assert_eq!(hom_count(&p1, &t, 1), hom_count(&p2, &t, 1), "{kind}");
        }
    }
}
