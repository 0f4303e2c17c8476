//! Dense linear algebra over GF(2) with bit-packed rows.
//!
//! Row `r` of a [`BitMatrix`] is a [`BitVec`]; bit `b` of word `w` holds column
//! `w * WORD_BITS + b`. Row XOR is therefore a word-wise XOR, which is the inner
//! loop of multiplication, elimination and everything built on top.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::text::{self, ParseError};

pub const WORD_BITS: usize = 64;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// Mask of the valid bits in the last storage word of a length-`len` vector.
#[inline]
fn tail_mask(len: usize) -> u64 {
    match len % WORD_BITS {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gf2Error {
    #[error("dimension mismatch in {op}: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    DimensionMismatch {
        op: &'static str,
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular (rank {rank} < {n})")]
    Singular { rank: usize, n: usize },
}

/// A fixed-length vector over GF(2).
///
/// Storage bits at positions `>= len` are always zero, so derived equality and
/// hashing are exact.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self {
            len,
            words: vec![u64::MAX; words_for(len)],
        };
        v.clear_tail();
        v
    }

    /// The standard basis vector `e_index`.
    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut v = Self::zeros(0);
        for bit in bits {
            v.push(bit);
        }
        v
    }

    /// Builds a vector of length `len` from its raw storage words; excess bits are cleared.
    pub fn from_words(len: usize, mut words: Vec<u64>) -> Self {
        words.resize(words_for(len), 0);
        let mut v = Self { len, words };
        v.clear_tail();
        v
    }

    fn clear_tail(&mut self) {
        if let Some(last) = self.words.last_mut() {
            *last &= tail_mask(self.len);
        }
    }

    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(WORD_BITS) {
            self.words.push(0);
        }
        self.len += 1;
        self.set(self.len - 1, bit);
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, index: usize) -> bool {
        assert!(
            index < self.len,
            "bit index {index} out of range for length {}",
            self.len
        );
        (self.words[index / WORD_BITS] >> (index % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, index: usize, value: bool) {
        assert!(
            index < self.len,
            "bit index {index} out of range for length {}",
            self.len
        );
        let mask = 1u64 << (index % WORD_BITS);
        if value {
            self.words[index / WORD_BITS] |= mask;
        } else {
            self.words[index / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn toggle(&mut self, index: usize) {
        assert!(
            index < self.len,
            "bit index {index} out of range for length {}",
            self.len
        );
        self.words[index / WORD_BITS] ^= 1u64 << (index % WORD_BITS);
    }

    /// `self += other` over GF(2).
    #[inline]
    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn xor(&self, other: &BitVec) -> BitVec {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn and(&self, other: &BitVec) -> BitVec {
        assert_eq!(self.len, other.len, "length mismatch in and");
        BitVec {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    /// Inner product over GF(2).
    #[inline]
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot");
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Index of the lowest set bit.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD_BITS + w.trailing_zeros() as usize)
    }

    /// Indices of set bits in increasing order.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * WORD_BITS + b)
                }
            })
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Bits `start..start + len` as a new vector.
    pub fn slice(&self, start: usize, len: usize) -> BitVec {
        assert!(start + len <= self.len, "slice out of range");
        BitVec::from_bools((start..start + len).map(|i| self.get(i)))
    }

    /// Concatenation `self || other`.
    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut out = self.clone();
        for bit in other.iter() {
            out.push(bit);
        }
        out
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for bit in self.iter() {
            f.write_str(if bit { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec[{self}]")
    }
}

/// The symplectic form `P = [[0, I], [I, 0]]` on `Z_2^{2n}`, vectors ordered `(z | x)`.
///
/// Never materialized unless [`SymplecticForm::matrix`] is called.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymplecticForm {
    n: usize,
}

impl SymplecticForm {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `uᵀ P v = u_z·v_x + u_x·v_z` for length-2n vectors.
    pub fn inner(&self, u: &BitVec, v: &BitVec) -> bool {
        assert_eq!(u.len(), 2 * self.n);
        assert_eq!(v.len(), 2 * self.n);
        let mut acc = false;
        for i in 0..self.n {
            acc ^= (u.get(i) & v.get(self.n + i)) ^ (u.get(self.n + i) & v.get(i));
        }
        acc
    }

    /// Computes `Sᵀ P T` for two 2n-row matrices: row-block swap of `T`, then a product.
    pub fn gram(&self, s: &BitMatrix, t: &BitMatrix) -> Result<BitMatrix, Gf2Error> {
        let pt = self.apply_left(t)?;
        s.transpose().mat_mul(&pt)
    }

    /// `P · T`: swaps the upper and lower n-row blocks.
    pub fn apply_left(&self, t: &BitMatrix) -> Result<BitMatrix, Gf2Error> {
        if t.rows() != 2 * self.n {
            return Err(Gf2Error::DimensionMismatch {
                op: "symplectic form",
                left_rows: 2 * self.n,
                left_cols: 2 * self.n,
                right_rows: t.rows(),
                right_cols: t.cols(),
            });
        }
        let rows = (0..2 * self.n)
            .map(|r| t.row((r + self.n) % (2 * self.n)).clone())
            .collect();
        Ok(BitMatrix::from_rows_unchecked(2 * self.n, t.cols(), rows))
    }

    pub fn matrix(&self) -> BitMatrix {
        let n = self.n;
        BitMatrix::from_fn(2 * n, 2 * n, |r, c| (r + n == c) || (c + n == r))
    }
}

/// A dense `rows × cols` matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVec>,
}

/// Result of an in-place reduction to reduced row echelon form.
struct Echelon {
    /// Pivot column of each of the first `pivots.len()` rows.
    pivots: Vec<usize>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BitVec::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rows: n,
            cols: n,
            data: (0..n).map(|i| BitVec::unit(n, i)).collect(),
        }
    }

    /// The all-ones matrix with zero diagonal (adjacency matrix of the complete graph).
    pub fn all_ones_offdiag(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| r != c)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        Self {
            rows,
            cols,
            data: (0..rows)
                .map(|r| BitVec::from_bools((0..cols).map(|c| f(r, c))))
                .collect(),
        }
    }

    /// Assembles a matrix from rows; every row must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Result<Self, Gf2Error> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Gf2Error::DimensionMismatch {
                op: "from_rows",
                left_rows: rows.len(),
                left_cols: cols,
                right_rows: 1,
                right_cols: bad.len(),
            });
        }
        Ok(Self::from_rows_unchecked(rows.len(), cols, rows))
    }

    pub(crate) fn from_rows_unchecked(rows: usize, cols: usize, data: Vec<BitVec>) -> Self {
        debug_assert_eq!(data.len(), rows);
        debug_assert!(data.iter().all(|r| r.len() == cols));
        Self { rows, cols, data }
    }

    /// Builds a matrix from 0/1 literals, handy in tests.
    pub fn from_u8(rows: &[&[u8]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), cols, "ragged matrix literal");
                BitVec::from_bools(r.iter().map(|&b| b != 0))
            })
            .collect();
        Self::from_rows_unchecked(rows.len(), cols, data)
    }

    /// Diagonal matrix with the given diagonal.
    pub fn diagonal_matrix(diag: &BitVec) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for i in diag.iter_ones() {
            m.set(i, i, true);
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.data[r].set(c, value)
    }

    #[inline]
    pub fn toggle(&mut self, r: usize, c: usize) {
        self.data[r].toggle(c)
    }

    #[inline]
    pub fn row(&self, r: usize) -> &BitVec {
        &self.data[r]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut BitVec {
        &mut self.data[r]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &BitVec> {
        self.data.iter()
    }

    pub fn into_rows(self) -> Vec<BitVec> {
        self.data
    }

    /// `row[target] += row[source]`.
    #[inline]
    pub fn add_row(&mut self, target: usize, source: usize) {
        assert_ne!(target, source);
        let (t, s) = if target < source {
            let (lo, hi) = self.data.split_at_mut(source);
            (&mut lo[target], &hi[0])
        } else {
            let (lo, hi) = self.data.split_at_mut(target);
            (&mut hi[0], &lo[source])
        };
        t.xor_assign(s);
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        self.data.swap(a, b);
    }

    pub fn column(&self, c: usize) -> BitVec {
        BitVec::from_bools(self.data.iter().map(|row| row.get(c)))
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.cols, self.rows);
        for (r, row) in self.data.iter().enumerate() {
            for c in row.iter_ones() {
                out.set(c, r, true);
            }
        }
        out
    }

    /// Exact product `self · other`: row `r` of the result is the XOR of the rows of
    /// `other` selected by the set bits of row `r` of `self`.
    pub fn mat_mul(&self, other: &BitMatrix) -> Result<BitMatrix, Gf2Error> {
        if self.cols != other.rows {
            return Err(self.mismatch("mat_mul", other));
        }
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut acc = BitVec::zeros(other.cols);
                for k in row.iter_ones() {
                    acc.xor_assign(&other.data[k]);
                }
                acc
            })
            .collect();
        Ok(BitMatrix::from_rows_unchecked(self.rows, other.cols, data))
    }

    /// `self · v` for a column vector `v`.
    pub fn mul_vec(&self, v: &BitVec) -> Result<BitVec, Gf2Error> {
        if self.cols != v.len() {
            return Err(Gf2Error::DimensionMismatch {
                op: "mul_vec",
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: v.len(),
                right_cols: 1,
            });
        }
        Ok(BitVec::from_bools(self.data.iter().map(|row| row.dot(v))))
    }

    /// Entry-wise sum over GF(2).
    pub fn add(&self, other: &BitMatrix) -> Result<BitMatrix, Gf2Error> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(self.mismatch("add", other));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.xor(b))
            .collect();
        Ok(BitMatrix::from_rows_unchecked(self.rows, self.cols, data))
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &BitMatrix) -> Result<BitMatrix, Gf2Error> {
        if self.cols != other.cols {
            return Err(self.mismatch("vstack", other));
        }
        let data = self.data.iter().chain(&other.data).cloned().collect();
        Ok(BitMatrix::from_rows_unchecked(
            self.rows + other.rows,
            self.cols,
            data,
        ))
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &BitMatrix) -> Result<BitMatrix, Gf2Error> {
        if self.rows != other.rows {
            return Err(self.mismatch("hstack", other));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.concat(b))
            .collect();
        Ok(BitMatrix::from_rows_unchecked(
            self.rows,
            self.cols + other.cols,
            data,
        ))
    }

    /// Rows `start..start + count` as a new matrix.
    pub fn row_block(&self, start: usize, count: usize) -> BitMatrix {
        assert!(start + count <= self.rows, "row block out of range");
        BitMatrix::from_rows_unchecked(count, self.cols, self.data[start..start + count].to_vec())
    }

    fn mismatch(&self, op: &'static str, other: &BitMatrix) -> Gf2Error {
        Gf2Error::DimensionMismatch {
            op,
            left_rows: self.rows,
            left_cols: self.cols,
            right_rows: other.rows,
            right_cols: other.cols,
        }
    }

    /// Reduces `self` in place to reduced row echelon form, mirroring every row
    /// operation on `shadow` when given. Pivots are taken from the lowest-index row.
    fn reduce(&mut self, mut shadow: Option<&mut BitMatrix>) -> Echelon {
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..self.cols {
            if next == self.rows {
                break;
            }
            let Some(pivot) = (next..self.rows).find(|&r| self.data[r].get(col)) else {
                continue;
            };
            if pivot != next {
                self.swap_rows(pivot, next);
                if let Some(s) = shadow.as_deref_mut() {
                    s.swap_rows(pivot, next);
                }
            }
            for r in 0..self.rows {
                if r != next && self.data[r].get(col) {
                    self.add_row(r, next);
                    if let Some(s) = shadow.as_deref_mut() {
                        s.add_row(r, next);
                    }
                }
            }
            pivots.push(col);
            next += 1;
        }
        Echelon { pivots }
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (BitMatrix, Vec<usize>) {
        let mut m = self.clone();
        let e = m.reduce(None);
        (m, e.pivots)
    }

    /// Like [`BitMatrix::rref`], also returning the invertible `T` with `T · self = rref`.
    pub fn rref_with_transform(&self) -> (BitMatrix, BitMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut t = BitMatrix::identity(self.rows);
        let e = m.reduce(Some(&mut t));
        (m, t, e.pivots)
    }

    pub fn rank(&self) -> usize {
        self.clone().reduce(None).pivots.len()
    }

    /// Gauss–Jordan inverse. A singular input is reported as [`Gf2Error::Singular`].
    pub fn invert(&self) -> Result<BitMatrix, Gf2Error> {
        if !self.is_square() {
            return Err(Gf2Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut work = self.clone();
        let mut inv = BitMatrix::identity(n);
        let e = work.reduce(Some(&mut inv));
        if e.pivots.len() < n {
            return Err(Gf2Error::Singular {
                rank: e.pivots.len(),
                n,
            });
        }
        Ok(inv)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Basis of the null space `{x : self · x = 0}`.
    ///
    /// One vector per free column, in increasing order of that column; the vector
    /// has a 1 at its free column, zeros at the other free columns, and the pivot
    /// coordinates read off the reduced echelon form.
    pub fn solve_homogeneous(&self) -> Vec<BitVec> {
        let (rref, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = BitVec::unit(self.cols, free);
                for (r, &p) in pivots.iter().enumerate() {
                    if rref.get(r, free) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows)
                .all(|r| ((r + 1)..self.cols).all(|c| self.get(r, c) == self.get(c, r)))
    }

    pub fn diagonal(&self) -> BitVec {
        BitVec::from_bools((0..self.rows.min(self.cols)).map(|i| self.get(i, i)))
    }

    pub fn set_diagonal_zero(&self) -> BitMatrix {
        let mut out = self.clone();
        for i in 0..self.rows.min(self.cols) {
            out.set(i, i, false);
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && self
                .data
                .iter()
                .enumerate()
                .all(|(i, row)| *row == BitVec::unit(self.cols, i))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BitVec::is_zero)
    }

    /// Parses the text format: a `rows cols` header, then one line of `0`/`1`
    /// characters per row.
    pub fn parse(input: &str) -> Result<BitMatrix, ParseError> {
        let lines = text::meaningful_lines(input);
        let (m, used) = Self::parse_lines(&lines, input)?;
        if let Some(extra) = lines.get(used) {
            return Err(extra.error(1, "unexpected content after matrix"));
        }
        Ok(m)
    }

    /// Parses one matrix block from the front of `lines`, returning the number of lines consumed.
    pub(crate) fn parse_lines(
        lines: &[text::Line<'_>],
        input: &str,
    ) -> Result<(BitMatrix, usize), ParseError> {
        let header = text::first_line(lines, input, "matrix header 'rows cols'")?;
        let dims = header.integers(2, "matrix header")?;
        let (rows, cols) = (dims[0], dims[1]);
        let body_lines = if cols == 0 { 0 } else { rows };
        let mut data = Vec::with_capacity(rows);
        for r in 0..body_lines {
            let line = lines.get(1 + r).ok_or_else(|| {
                text::unexpected_end(input, &format!("matrix row {} of {rows}", r + 1))
            })?;
            let body = line.text.trim_start();
            let offset = line.text.len() - body.len();
            if body.chars().count() != cols {
                return Err(line.error(
                    offset + 1,
                    format!(
                        "expected {cols} bits in matrix row, found {}",
                        body.chars().count()
                    ),
                ));
            }
            let mut bits = BitVec::zeros(cols);
            for (c, ch) in body.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => bits.set(c, true),
                    other => {
                        return Err(line.error(offset + c + 1, format!("invalid bit '{other}'")))
                    }
                }
            }
            data.push(bits);
        }
        if cols == 0 {
            data = vec![BitVec::zeros(0); rows];
        }
        Ok((
            BitMatrix::from_rows_unchecked(rows, cols, data),
            1 + body_lines,
        ))
    }
}

impl fmt::Display for BitMatrix {
    /// The text format read by [`BitMatrix::parse`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        if self.cols > 0 {
            for row in &self.data {
                writeln!(f, "{row}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows, self.cols)?;
        for row in &self.data {
            writeln!(f, "  {row}")?;
        }
        write!(f, "]")
    }
}

impl FromStr for BitMatrix {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> BitMatrix {
        BitMatrix::from_fn(rows, cols, |_, _| rng.random())
    }

    /// Row-major `Vec<Vec<u8>>` view used by the naive oracles.
    fn dense(m: &BitMatrix) -> Vec<Vec<u8>> {
        (0..m.rows())
            .map(|r| (0..m.cols()).map(|c| m.get(r, c) as u8).collect())
            .collect()
    }

    fn naive_mul(a: &[Vec<u8>], b: &[Vec<u8>]) -> Vec<Vec<u8>> {
        let (n, k, m) = (a.len(), b.len(), b.first().map_or(0, |r| r.len()));
        let mut out = vec![vec![0u8; m]; n];
        for i in 0..n {
            for j in 0..m {
                let mut s = 0u8;
                for l in 0..k {
                    s ^= a[i][l] & b[l][j];
                }
                out[i][j] = s;
            }
        }
        out
    }

    /// Plain forward elimination on a byte matrix, counting nonzero echelon rows.
    fn naive_rank(mut m: Vec<Vec<u8>>) -> usize {
        let rows = m.len();
        let cols = m.first().map_or(0, |r| r.len());
        let mut rank = 0;
        for c in 0..cols {
            if let Some(p) = (rank..rows).find(|&r| m[r][c] == 1) {
                m.swap(p, rank);
                let pivot = m[rank].clone();
                for row in &mut m[rank + 1..] {
                    if row[c] == 1 {
                        for (x, y) in row.iter_mut().zip(&pivot) {
                            *x ^= y;
                        }
                    }
                }
                rank += 1;
            }
        }
        m.iter().filter(|row| row.contains(&1)).count()
    }

    #[test]
    fn identity_times_matrix() {
        let m = BitMatrix::from_u8(&[&[1, 0, 1], &[0, 1, 1], &[1, 1, 0]]);
        assert_eq!(BitMatrix::identity(3).mat_mul(&m).unwrap(), m);
    }

    #[test]
    fn upper_unitriangular_squares_to_identity() {
        let m = BitMatrix::from_u8(&[&[1, 1], &[0, 1]]);
        assert_eq!(m.mat_mul(&m).unwrap(), BitMatrix::identity(2));
    }

    #[test]
    fn mat_mul_matches_naive_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let (n, k, m) = (
                rng.random_range(1..10),
                rng.random_range(1..10),
                rng.random_range(1..10),
            );
            let a = random_matrix(&mut rng, n, k);
            let b = random_matrix(&mut rng, k, m);
            assert_eq!(
                dense(&a.mat_mul(&b).unwrap()),
                naive_mul(&dense(&a), &dense(&b))
            );
        }
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let a = random_matrix(&mut rng, 8, 8);
        let b = random_matrix(&mut rng, 8, 8);
        assert_eq!(
            dense(&a.mat_mul(&b).unwrap()),
            naive_mul(&dense(&a), &dense(&b))
        );
    }

    #[test]
    fn mat_mul_rejects_mismatch() {
        let a = BitMatrix::zeros(2, 3);
        assert!(matches!(
            a.mat_mul(&a),
            Err(Gf2Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn invert_examples() {
        assert_eq!(
            BitMatrix::identity(4).invert().unwrap(),
            BitMatrix::identity(4)
        );
        let swap = BitMatrix::from_u8(&[&[0, 1], &[1, 0]]);
        assert_eq!(swap.invert().unwrap(), swap);
        let singular = BitMatrix::from_u8(&[&[1, 1], &[1, 1]]);
        assert_eq!(singular.invert(), Err(Gf2Error::Singular { rank: 1, n: 2 }));
        assert!(matches!(
            BitMatrix::zeros(2, 3).invert(),
            Err(Gf2Error::NotSquare { .. })
        ));
    }

    #[test]
    fn random_inverses_are_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        while checked < 500 {
            let n = rng.random_range(1..=12);
            let m = random_matrix(&mut rng, n, n);
            if let Ok(inv) = m.invert() {
                assert_eq!(inv.mat_mul(&m).unwrap(), BitMatrix::identity(n));
                assert_eq!(m.mat_mul(&inv).unwrap(), BitMatrix::identity(n));
                checked += 1;
            } else {
                assert!(naive_rank(dense(&m)) < n);
            }
        }
    }

    #[test]
    fn rank_examples() {
        assert_eq!(BitMatrix::zeros(3, 4).rank(), 0);
        assert_eq!(BitMatrix::identity(5).rank(), 5);
        assert_eq!(BitMatrix::from_u8(&[&[1, 1], &[1, 1]]).rank(), 1);
    }

    #[test]
    fn rank_matches_naive_elimination() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            let (rows, cols) = (rng.random_range(0..12), rng.random_range(0..12));
            let m = random_matrix(&mut rng, rows, cols);
            assert_eq!(m.rank(), naive_rank(dense(&m)));
        }
    }

    #[test]
    fn null_space_examples() {
        assert!(BitMatrix::identity(4).solve_homogeneous().is_empty());
        assert_eq!(BitMatrix::zeros(3, 3).solve_homogeneous().len(), 3);

        // [[1,1,0]]: enumerate all 8 vectors to find the true kernel.
        let m = BitMatrix::from_u8(&[&[1, 1, 0]]);
        let kernel: Vec<BitVec> = (0u8..8)
            .map(|k| BitVec::from_bools((0..3).map(|i| (k >> i) & 1 == 1)))
            .filter(|v| v.get(0) == v.get(1))
            .collect();
        assert_eq!(kernel.len(), 4);
        let basis = m.solve_homogeneous();
        assert_eq!(basis.len(), 2);
        for b in &basis {
            assert!(m.mul_vec(b).unwrap().is_zero());
            assert!(kernel.contains(b));
        }
        assert_eq!(basis[0], BitVec::from_bools([true, true, false]));
        assert_eq!(basis[1], BitVec::from_bools([false, false, true]));
    }

    #[test]
    fn helpers() {
        assert_eq!(
            BitMatrix::all_ones_offdiag(2),
            BitMatrix::from_u8(&[&[0, 1], &[1, 0]])
        );
        assert_eq!(
            BitMatrix::identity(2).diagonal(),
            BitVec::from_bools([true, true])
        );
        let m = BitMatrix::from_u8(&[&[1, 0, 1], &[0, 1, 1]]);
        assert_eq!(m.transpose().transpose(), m);
        assert_eq!(m.column(2), BitVec::from_bools([true, true]));
        assert!(!m.is_symmetric());
        assert!(BitMatrix::all_ones_offdiag(5).is_symmetric());
        assert_eq!(
            BitMatrix::identity(3).set_diagonal_zero(),
            BitMatrix::zeros(3, 3)
        );
    }

    #[test]
    fn symplectic_form_is_involutive_and_symmetric() {
        let p = SymplecticForm::new(3).matrix();
        assert!(p.is_symmetric());
        assert_eq!(p.mat_mul(&p).unwrap(), BitMatrix::identity(6));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let t = random_matrix(&mut rng, 6, 4);
        assert_eq!(
            SymplecticForm::new(3).apply_left(&t).unwrap(),
            p.mat_mul(&t).unwrap()
        );
    }

    #[test]
    fn multiword_rows() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let n = 130;
        let mut m = random_matrix(&mut rng, n, n);
        while !m.is_invertible() {
            m = random_matrix(&mut rng, n, n);
        }
        assert_eq!(
            m.invert().unwrap().mat_mul(&m).unwrap(),
            BitMatrix::identity(n)
        );
        assert_eq!(BitVec::ones(130).count_ones(), 130);
    }

    #[test]
    fn text_format() {
        let m = BitMatrix::from_u8(&[&[1, 0, 1], &[0, 1, 1]]);
        assert_eq!(m.to_string(), "2 3\n101\n011\n");
        assert_eq!(BitMatrix::parse("2 3\n101\n011\n").unwrap(), m);
        let err = BitMatrix::parse("2 3\n101\n0x1\n").unwrap_err();
        assert_eq!((err.line, err.column), (3, 2));
        let err = BitMatrix::parse("2 3\n101\n").unwrap_err();
        assert!(err.message.contains("unexpected end"));
        assert_eq!(BitMatrix::parse("3 0\n").unwrap(), BitMatrix::zeros(3, 0));
    }

    proptest! {
        #[test]
        fn text_round_trip(rows in 0usize..9, cols in 0usize..70, seed: u64) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_matrix(&mut rng, rows, cols);
            let text = m.to_string();
            let back = BitMatrix::parse(&text).unwrap();
            prop_assert_eq!(&back, &m);
            prop_assert_eq!(back.to_string(), text);
        }

        #[test]
        fn null_space_dimension(rows in 0usize..10, cols in 0usize..10, seed: u64) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_matrix(&mut rng, rows, cols);
            let basis = m.solve_homogeneous();
            prop_assert_eq!(basis.len(), cols - m.rank());
            for b in &basis {
                prop_assert!(m.mul_vec(b).unwrap().is_zero());
            }
        }
    }
}
