//! Exact linear algebra over prime fields GF(q).
//!
//! Entries are stored as residues in `[0, q)`. Everything here is integer
//! arithmetic; no floating point is involved.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("field order {0} is not a prime")]
    NotPrime(u64),
    #[error("field order {0} is too large (must fit in 16 bits)")]
    OrderTooLarge(u64),
    #[error("matrix data has {got} entries, expected {rows}x{cols}")]
    ShapeMismatch { rows: usize, cols: usize, got: usize },
    #[error("entry {value} at position {index} is not a residue mod {q}")]
    EntryOutOfRange { index: usize, value: u32, q: u32 },
    #[error("column index {index} out of range for a matrix with {cols} columns")]
    ColumnOutOfRange { index: usize, cols: usize },
    #[error("vector has length {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("operands live over different fields (GF({0}) vs GF({1}))")]
    FieldMismatch(u32, u32),
}

/// A prime field GF(q).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PrimeField {
    q: u32,
}

impl PrimeField {
    /// Build GF(q), verifying primality by trial division.
    pub fn new(q: u64) -> Result<Self, GfError> {
        if q > u16::MAX as u64 {
            return Err(GfError::OrderTooLarge(q));
        }
        if !is_prime(q) {
            return Err(GfError::NotPrime(q));
        }
        Ok(PrimeField { q: q as u32 })
    }

    pub fn binary() -> Self {
        PrimeField { q: 2 }
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn reduce(&self, a: u64) -> u32 {
        (a % self.q as u64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.q as u64) as u32
    }

    pub fn pow(&self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.q;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `a` must be nonzero.
    pub fn inv(&self, a: u32) -> u32 {
        assert!(!a.is_multiple_of(self.q), "zero has no inverse in GF({})", self.q);
        self.pow(a, self.q as u64 - 2)
    }
}

impl<'de> Deserialize<'de> for PrimeField {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            q: u64,
        }
        let raw = Raw::deserialize(d)?;
        PrimeField::new(raw.q).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.q)
    }
}

pub(crate) fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= q {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Dense row-major matrix over a prime field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatrixGF {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl MatrixGF {
    pub fn new(field: PrimeField, rows: usize, cols: usize, data: Vec<u32>) -> Result<Self, GfError> {
        if data.len() != rows * cols {
            return Err(GfError::ShapeMismatch { rows, cols, got: data.len() });
        }
        if let Some((index, &value)) = data.iter().enumerate().find(|(_, &v)| v >= field.order()) {
            return Err(GfError::EntryOutOfRange { index, value, q: field.order() });
        }
        Ok(MatrixGF { field, rows, cols, data })
    }

    /// Build from row slices. All rows must have length `cols`.
    pub fn from_rows<R: AsRef<[u32]>>(field: PrimeField, cols: usize, rows: &[R]) -> Result<Self, GfError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(GfError::DimensionMismatch { expected: cols, got: r.len() });
            }
            data.extend_from_slice(r);
        }
        MatrixGF::new(field, rows.len(), cols, data)
    }

    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        MatrixGF { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = MatrixGF::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    /// Sets an entry, reducing it mod q.
    pub fn set(&mut self, r: usize, c: usize, value: u32) {
        self.data[r * self.cols + c] = value % self.field.order();
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[u32]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn entries(&self) -> &[u32] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        self.row_iter().map(|r| r.to_vec()).collect()
    }

    pub fn transpose(&self) -> MatrixGF {
        let mut out = MatrixGF::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.get(r, c);
            }
        }
        out
    }

    /// Rank over GF(q).
    pub fn rank(&self) -> usize {
        let mut ech = Echelon::new(self.field, self.cols);
        for r in self.row_iter() {
            ech.insert(r);
        }
        ech.rank()
    }

    /// Submatrix formed by the given columns, in the given order.
    pub fn select_columns(&self, idx: &[usize]) -> Result<MatrixGF, GfError> {
        if let Some(&index) = idx.iter().find(|&&c| c >= self.cols) {
            return Err(GfError::ColumnOutOfRange { index, cols: self.cols });
        }
        let mut data = Vec::with_capacity(self.rows * idx.len());
        for r in 0..self.rows {
            data.extend(idx.iter().map(|&c| self.get(r, c)));
        }
        Ok(MatrixGF { field: self.field, rows: self.rows, cols: idx.len(), data })
    }

    /// Indices of the lexicographically first maximal set of independent
    /// rows, scanning top-down.
    pub fn row_basis_indices(&self) -> Vec<usize> {
        let mut ech = Echelon::new(self.field, self.cols);
        (0..self.rows).filter(|&r| ech.insert(self.row(r))).collect()
    }

    /// The rows of `self` picked by [`row_basis_indices`](Self::row_basis_indices).
    pub fn row_basis(&self) -> MatrixGF {
        let idx = self.row_basis_indices();
        let rows: Vec<&[u32]> = idx.iter().map(|&r| self.row(r)).collect();
        MatrixGF::from_rows(self.field, self.cols, &rows).expect("rows taken from a valid matrix")
    }

    /// Whether `v` is a GF(q)-linear combination of the rows.
    pub fn in_row_space(&self, v: &[u32]) -> Result<bool, GfError> {
        if v.len() != self.cols {
            return Err(GfError::DimensionMismatch { expected: self.cols, got: v.len() });
        }
        let q = self.field.order();
        if let Some((index, &value)) = v.iter().enumerate().find(|(_, &x)| x >= q) {
            return Err(GfError::EntryOutOfRange { index, value, q });
        }
        let mut ech = Echelon::new(self.field, self.cols);
        for r in self.row_iter() {
            ech.insert(r);
        }
        Ok(ech.contains(v))
    }

    /// Matrix-vector product `self * x`.
    pub fn mul_vec(&self, x: &[u32]) -> Result<Vec<u32>, GfError> {
        if x.len() != self.cols {
            return Err(GfError::DimensionMismatch { expected: self.cols, got: x.len() });
        }
        let f = self.field;
        Ok(self
            .row_iter()
            .map(|row| row.iter().zip(x).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b))))
            .collect())
    }
}

impl fmt::Debug for MatrixGF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MatrixGF[{}; {}x{}]", self.field, self.rows, self.cols)?;
        for r in self.row_iter() {
            write!(f, "\n  {:?}", r)?;
        }
        Ok(())
    }
}

impl fmt::Display for MatrixGF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.row_iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            write!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Incrementally maintained row echelon form.
///
/// Pivot rows are kept normalized (pivot entry 1) and fully reduced against
/// each other, so membership tests are a single forward pass.
#[derive(Debug, Clone)]
pub struct Echelon {
    field: PrimeField,
    width: usize,
    /// (pivot column, normalized row)
    pivots: Vec<(usize, Vec<u32>)>,
}

impl Echelon {
    pub fn new(field: PrimeField, width: usize) -> Self {
        Echelon { field, width, pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    fn reduce(&self, v: &[u32]) -> Vec<u32> {
        debug_assert_eq!(v.len(), self.width);
        let f = self.field;
        let mut w = v.to_vec();
        for (pc, prow) in &self.pivots {
            let c = w[*pc];
            if c != 0 {
                for (x, &p) in w.iter_mut().zip(prow) {
                    if p != 0 {
                        *x = f.sub(*x, f.mul(c, p));
                    }
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Adds `v` to the spanned space. Returns true if the rank grew.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        let f = self.field;
        let mut w = self.reduce(v);
        let Some(pc) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(w[pc]);
        for x in w.iter_mut() {
            *x = f.mul(*x, inv);
        }
        for (_, prow) in self.pivots.iter_mut() {
            let c = prow[pc];
            if c != 0 {
                for (x, &p) in prow.iter_mut().zip(&w) {
                    if p != 0 {
                        *x = f.sub(*x, f.mul(c, p));
                    }
                }
            }
        }
        self.pivots.push((pc, w));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u64) -> PrimeField {
        PrimeField::new(q).unwrap()
    }

    fn example1_m() -> MatrixGF {
        MatrixGF::from_rows(
            gf(2),
            5,
            &[
                [1, 0, 0, 1, 0],
                [1, 1, 0, 0, 0],
                [0, 1, 1, 0, 0],
                [0, 0, 1, 1, 0],
                [0, 0, 0, 0, 1],
            ],
        )
        .unwrap()
    }

    /// Rank by brute force: the largest r with a nonsingular r x r minor,
    /// where nonsingularity is decided by a permutation-expansion
    /// determinant mod q.
    fn rank_by_minors(m: &MatrixGF) -> usize {
        let q = m.field().order() as i64;
        fn det(a: &[Vec<i64>], q: i64) -> i64 {
            let n = a.len();
            if n == 0 {
                return 1;
            }
            let mut total = 0i64;
            for c in 0..n {
                let minor: Vec<Vec<i64>> = a[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, &x)| x).collect())
                    .collect();
                let sign = if c % 2 == 0 { 1 } else { -1 };
                total = (total + sign * a[0][c] * det(&minor, q)).rem_euclid(q);
            }
            total
        }
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            (0u32..1 << n).filter(|s| s.count_ones() as usize == k).map(|s| (0..n).filter(|i| s >> i & 1 == 1).collect()).collect()
        }
        let mut best = 0;
        for r in 1..=m.rows().min(m.cols()) {
            for rs in subsets(m.rows(), r) {
                for cs in subsets(m.cols(), r) {
                    let a: Vec<Vec<i64>> = rs.iter().map(|&i| cs.iter().map(|&j| m.get(i, j) as i64).collect()).collect();
                    if det(&a, q) != 0 {
                        best = r;
                    }
                }
            }
        }
        best
    }

    #[test]
    fn primality_checked() {
        assert!(PrimeField::new(2).is_ok());
        assert!(PrimeField::new(7).is_ok());
        assert_eq!(PrimeField::new(4), Err(GfError::NotPrime(4)));
        assert_eq!(PrimeField::new(1), Err(GfError::NotPrime(1)));
        assert_eq!(PrimeField::new(0), Err(GfError::NotPrime(0)));
    }

    #[test]
    fn field_inverse() {
        let f = gf(7);
        for a in 1..7 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
    }

    #[test]
    fn example1_rank_is_four() {
        assert_eq!(example1_m().rank(), 4);
    }

    #[test]
    fn identity_rank() {
        for n in 0..6 {
            assert_eq!(MatrixGF::identity(gf(3), n).rank(), n);
        }
    }

    #[test]
    fn empty_matrices_have_rank_zero() {
        assert_eq!(MatrixGF::zeros(gf(2), 0, 4).rank(), 0);
        assert_eq!(MatrixGF::zeros(gf(2), 3, 0).rank(), 0);
    }

    #[test]
    fn random_gf5_rank_matches_minor_search() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_pcg::Pcg64::seed_from_u64(17);
        for _ in 0..40 {
            let data: Vec<u32> = (0..24).map(|_| if rng.gen_bool(0.4) { 0 } else { rng.gen_range(0..5) }).collect();
            let m = MatrixGF::new(gf(5), 4, 6, data).unwrap();
            assert_eq!(m.rank(), rank_by_minors(&m), "{:?}", m);
        }
    }

    #[test]
    fn select_columns_of_example1() {
        let m = example1_m();
        let u = m.select_columns(&[1, 3]).unwrap();
        assert_eq!((u.rows(), u.cols()), (5, 2));
        assert_eq!(u.rank(), 2);
        let su = m.select_columns(&[0, 2, 1, 3]).unwrap();
        assert_eq!(su.rank(), 3);

        let all = m.select_columns(&[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(all, m);

        let none = m.select_columns(&[]).unwrap();
        assert_eq!((none.rows(), none.cols(), none.rank()), (5, 0, 0));

        assert_eq!(m.select_columns(&[5]), Err(GfError::ColumnOutOfRange { index: 5, cols: 5 }));
    }

    #[test]
    fn select_columns_of_example2_tilde() {
        let mt = MatrixGF::from_rows(gf(2), 4, &[[1, 0, 1, 0], [0, 1, 0, 1]]).unwrap();
        let u = mt.select_columns(&[2, 3]).unwrap();
        assert_eq!(u.to_rows(), vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(u.rank(), 2);
    }

    #[test]
    fn row_basis_of_example1() {
        let m = example1_m();
        // row 4 = row 1 + row 2 + row 3 over GF(2)
        let sum: Vec<u32> = (0..5).map(|c| (m.get(0, c) + m.get(1, c) + m.get(2, c)) % 2).collect();
        assert_eq!(sum, m.row(3));
        assert_eq!(m.row_basis_indices(), vec![0, 1, 2, 4]);
        let b = m.row_basis();
        assert_eq!(b.rows(), 4);
        assert_eq!(b.row(3), m.row(4));
    }

    #[test]
    fn row_basis_trivial_cases() {
        let id = MatrixGF::identity(gf(3), 4);
        assert_eq!(id.row_basis(), id);
        let z = MatrixGF::zeros(gf(3), 3, 4);
        assert_eq!(z.row_basis().rows(), 0);
    }

    #[test]
    fn row_space_membership() {
        let m = example1_m();
        let top = MatrixGF::from_rows(gf(2), 5, &[m.row(0), m.row(1), m.row(2)]).unwrap();
        assert_eq!(top.in_row_space(m.row(3)), Ok(true));
        assert_eq!(top.in_row_space(&[0; 5]), Ok(true));
        assert_eq!(top.in_row_space(m.row(4)), Ok(false));

        let mt = MatrixGF::from_rows(gf(2), 4, &[[1, 0, 1, 0], [0, 1, 0, 1]]).unwrap();
        assert_eq!(mt.in_row_space(&[0, 0, 0, 1]), Ok(false));
        assert_eq!(mt.in_row_space(&[1, 1, 1, 1]), Ok(true));
        assert_eq!(mt.in_row_space(&[1, 1]), Err(GfError::DimensionMismatch { expected: 4, got: 2 }));
    }

    #[test]
    fn constructor_rejects_bad_entries() {
        assert!(matches!(MatrixGF::new(gf(3), 1, 2, vec![0, 3]), Err(GfError::EntryOutOfRange { .. })));
        assert!(matches!(MatrixGF::new(gf(3), 2, 2, vec![0, 1]), Err(GfError::ShapeMismatch { .. })));
    }

    #[test]
    fn mul_vec_gf3() {
        let m = MatrixGF::from_rows(gf(3), 3, &[[1, 2, 0], [2, 2, 1]]).unwrap();
        assert_eq!(m.mul_vec(&[1, 1, 1]).unwrap(), vec![0, 2]);
    }
}
