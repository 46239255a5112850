//! Integer matrices, Smith normal form, and invariants of finitely
//! generated abelian groups.
//!
//! [`smith_normal_form`] returns a decomposition `U * A * V = D` with `U`,
//! `V` unimodular and `D` diagonal: entries nonnegative, each dividing the
//! next, zeros trailing. The decomposition is re-verified before being
//! returned; a violation is a bug and panics.
//!
//! [`AbelianQuotient`] reads a relation matrix (rows are relators, columns
//! are generators) as a presentation of an abelian group and exposes
//! torsion, free rank, and per-generator element orders.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> IntMatrix {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        IntMatrix {
            rows: rows.len(),
            cols,
            data: rows
                .iter()
                .flat_map(|r| r.iter().map(|&v| BigInt::from(v)))
                .collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    /// Entries of row `i`, left to right.
    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.at(i, j).clone();
            self.set(i, j, v);
        }
    }

    /// `row[dst] += k * row[src]`
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        debug_assert_ne!(dst, src);
        for j in 0..self.cols {
            let v = self.at(dst, j) + k * self.at(src, j);
            self.set(dst, j, v);
        }
    }

    /// `col[dst] += k * col[src]`
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        debug_assert_ne!(dst, src);
        for i in 0..self.rows {
            let v = self.at(i, dst) + k * self.at(i, src);
            self.set(i, dst, v);
        }
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.at(i, j) + a * other.at(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut negated = false;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.at(k, k).is_zero() {
                let Some(r) = (k + 1..n).find(|&i| !a.at(i, k).is_zero()) else {
                    return BigInt::zero();
                };
                a.swap_rows(k, r);
                negated = !negated;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j)) / &prev;
                    a.set(i, j, v);
                }
                a.set(i, k, BigInt::zero());
            }
            prev = a.at(k, k).clone();
        }
        let det = a.at(n - 1, n - 1).clone();
        if negated {
            -det
        } else {
            det
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(BigInt::to_string).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// `u * a * v = d` with `u`, `v` unimodular and `d` in Smith normal form.
#[derive(Debug, Clone)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    pub fn diagonal(&self) -> Vec<BigInt> {
        let k = self.d.rows().min(self.d.cols());
        (0..k).map(|i| self.d.at(i, i).clone()).collect()
    }
}

/// `a | b`, with `0 | b` only for `b = 0`.
fn divides(a: &BigInt, b: &BigInt) -> bool {
    if a.is_zero() {
        b.is_zero()
    } else {
        (b % a).is_zero()
    }
}

/// Min-abs nonzero entry of the submatrix at `(t.., t..)`, row-major
/// tie-break.
fn find_pivot(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let v = d.at(i, j);
            if v.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if d.at(bi, bj).abs() <= v.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

/// Diagonalizes `d` in place, mirroring row operations into `u` and column
/// operations into `v`. Leaves nonzero entries on the leading diagonal.
fn diagonalize(d: &mut IntMatrix, u: &mut IntMatrix, v: &mut IntMatrix) {
    let bound = d.rows().min(d.cols());
    'position: for t in 0..bound {
        loop {
            let Some((pi, pj)) = find_pivot(d, t) else {
                break 'position;
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut dirty = false;
            for i in t + 1..d.rows() {
                if !d.at(i, t).is_zero() {
                    let q = -(d.at(i, t) / d.at(t, t));
                    d.add_row_multiple(i, t, &q);
                    u.add_row_multiple(i, t, &q);
                    if !d.at(i, t).is_zero() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }
            for j in t + 1..d.cols() {
                if !d.at(t, j).is_zero() {
                    let q = -(d.at(t, j) / d.at(t, t));
                    d.add_col_multiple(j, t, &q);
                    v.add_col_multiple(j, t, &q);
                    if !d.at(t, j).is_zero() {
                        dirty = true;
                    }
                }
            }
            if !dirty {
                break;
            }
        }
    }
}

/// Replaces diagonal entries `(d_j, d_{j+1})` by `(gcd, lcm)` when the
/// first does not divide the second. Both entries are nonzero here.
fn fix_divisibility_pair(d: &mut IntMatrix, u: &mut IntMatrix, v: &mut IntMatrix, j: usize) {
    let one = BigInt::one();
    d.add_col_multiple(j, j + 1, &one);
    v.add_col_multiple(j, j + 1, &one);

    while !d.at(j + 1, j).is_zero() {
        if d.at(j, j).is_zero() || d.at(j + 1, j).abs() < d.at(j, j).abs() {
            d.swap_rows(j, j + 1);
            u.swap_rows(j, j + 1);
        }
        if !d.at(j + 1, j).is_zero() {
            let q = -(d.at(j + 1, j) / d.at(j, j));
            d.add_row_multiple(j + 1, j, &q);
            u.add_row_multiple(j + 1, j, &q);
        }
    }
    if !d.at(j, j + 1).is_zero() {
        // exact: the corner gcd divides every entry of the 2x2 block
        let q = -(d.at(j, j + 1) / d.at(j, j));
        d.add_col_multiple(j + 1, j, &q);
        v.add_col_multiple(j + 1, j, &q);
    }
}

fn normalize_signs(d: &mut IntMatrix, u: &mut IntMatrix) {
    let bound = d.rows().min(d.cols());
    for i in 0..bound {
        if d.at(i, i).is_negative() {
            d.negate_row(i);
            u.negate_row(i);
        }
    }
}

fn verify_decomposition(a: &IntMatrix, dec: &SmithDecomposition) {
    assert_eq!(
        dec.u.mul(a).mul(&dec.v),
        dec.d,
        "normal form product mismatch"
    );
    assert!(dec.u.determinant().abs().is_one(), "u not unimodular");
    assert!(dec.v.determinant().abs().is_one(), "v not unimodular");
    let diag = dec.diagonal();
    for i in 0..dec.d.rows() {
        for j in 0..dec.d.cols() {
            assert!(i == j || dec.d.at(i, j).is_zero(), "off-diagonal residue");
        }
    }
    for (i, v) in diag.iter().enumerate() {
        assert!(!v.is_negative(), "negative diagonal entry");
        if i + 1 < diag.len() {
            assert!(divides(v, &diag[i + 1]), "divisibility chain broken");
        }
    }
}

/// Smith normal form of `a`. Pivots are chosen by minimal absolute value
/// with row-major tie-break, so the transform matrices are deterministic.
pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let mut d = a.clone();
    let mut u = IntMatrix::identity(a.rows());
    let mut v = IntMatrix::identity(a.cols());

    diagonalize(&mut d, &mut u, &mut v);
    normalize_signs(&mut d, &mut u);

    let bound = d.rows().min(d.cols());
    loop {
        let mut changed = false;
        for j in 0..bound.saturating_sub(1) {
            let lead = d.at(j, j).clone();
            let next = d.at(j + 1, j + 1).clone();
            if !divides(&lead, &next) {
                fix_divisibility_pair(&mut d, &mut u, &mut v, j);
                normalize_signs(&mut d, &mut u);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let dec = SmithDecomposition { u, d, v };
    verify_decomposition(a, &dec);
    dec
}

/// Order of an element of a finitely generated abelian group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Order {
    Finite(BigInt),
    Infinite,
}

impl Order {
    pub fn as_u64(&self) -> Option<u64> {
        match self {
            Order::Finite(v) => u64::try_from(v).ok(),
            Order::Infinite => None,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(v) => write!(f, "{v}"),
            Order::Infinite => f.write_str("inf"),
        }
    }
}

/// Abelian group presented by a relation matrix: rows are relators,
/// columns are generators.
#[derive(Debug, Clone)]
pub struct AbelianQuotient {
    snf: SmithDecomposition,
    generators: usize,
}

impl AbelianQuotient {
    pub fn new(relation_matrix: &IntMatrix) -> AbelianQuotient {
        AbelianQuotient {
            snf: smith_normal_form(relation_matrix),
            generators: relation_matrix.cols(),
        }
    }

    pub fn snf(&self) -> &SmithDecomposition {
        &self.snf
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        self.snf.diagonal()
    }

    /// Diagonal entries greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal()
            .into_iter()
            .filter(|v| !v.is_zero() && !v.is_one())
            .collect()
    }

    pub fn free_rank(&self) -> usize {
        let constrained = self.diagonal().iter().filter(|v| !v.is_zero()).count();
        self.generators - constrained
    }

    pub fn is_trivial(&self) -> bool {
        self.torsion().is_empty() && self.free_rank() == 0
    }

    /// Torsion coefficients followed by one zero per free factor.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let mut out = self.torsion();
        out.extend(std::iter::repeat_n(BigInt::zero(), self.free_rank()));
        out
    }

    /// Order of each presentation generator's image, in generator order.
    pub fn generator_orders(&self) -> Vec<Order> {
        let diag = self.diagonal();
        (0..self.generators)
            .map(|i| {
                let mut ord = BigInt::one();
                let mut infinite = false;
                for j in 0..self.generators {
                    let c = self.snf.v.at(i, j);
                    let constrained = j < diag.len() && !diag[j].is_zero();
                    if constrained {
                        let g = diag[j].gcd(c);
                        ord = ord.lcm(&(&diag[j] / g));
                    } else if !c.is_zero() {
                        infinite = true;
                    }
                }
                if infinite {
                    Order::Infinite
                } else {
                    Order::Finite(ord)
                }
            })
            .collect()
    }
}

/// gcd of all values, nonnegative; zero for an empty slice.
pub fn gcd_all(values: &[i64]) -> i64 {
    values.iter().fold(0i64, |g, &v| g.gcd(&v))
}

/// Left-fold extended Euclid: returns `(g, c)` with `g = gcd(values) >= 0`
/// and `sum(c[i] * values[i]) = g`. Empty input yields `(0, [])`.
pub fn extended_gcd(values: &[i64]) -> (i64, Vec<i64>) {
    let mut g: i128 = 0;
    let mut coeffs: Vec<i128> = Vec::with_capacity(values.len());
    for &v in values {
        let v = i128::from(v);
        if coeffs.is_empty() {
            g = v;
            coeffs.push(1);
        } else {
            let e = g.extended_gcd(&v);
            for c in &mut coeffs {
                *c *= e.x;
            }
            coeffs.push(e.y);
            g = e.gcd;
        }
    }
    if g < 0 {
        g = -g;
        for c in &mut coeffs {
            *c = -*c;
        }
    }
    let coeffs = coeffs
        .into_iter()
        .map(|c| i64::try_from(c).expect("Bezout coefficient exceeds i64"))
        .collect();
    (i64::try_from(g).expect("gcd exceeds i64"), coeffs)
}
