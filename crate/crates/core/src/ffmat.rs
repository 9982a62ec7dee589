//! Dense linear algebra over prime fields GF(p), p ≤ 31.
//!
//! Matrices are row-major `u32` arrays whose entries always lie in `[0, p)`.
//! Gaussian elimination pivots on the first nonzero entry of each column, so
//! every routine here is a deterministic function of its input.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Largest supported characteristic.
pub const MAX_PRIME: u32 = 31;

/// The prime field GF(p).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
    // ceil(2^16 / p): exact quotient for any x < 1024
    magic: u32,
}

impl fmt::Debug for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.p)
    }
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if !(2..=MAX_PRIME).contains(&p) || !(2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d)) {
            return Err(Error::input(format!(
                "characteristic {p} is not a prime in [2, {MAX_PRIME}]"
            )));
        }
        Ok(PrimeField { p, magic: 65536_u32.div_ceil(p) })
    }

    #[inline]
    pub fn prime(self) -> u32 {
        self.p
    }

    /// Reduces `x < 1024` without a division.
    #[inline(always)]
    pub fn reduce_small(self, x: u32) -> u32 {
        x - self.p * ((x * self.magic) >> 16)
    }

    #[inline]
    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        self.reduce_small(a + b)
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        self.reduce_small(a + self.p - b)
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        self.reduce_small(a * b)
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn inv(self, a: u32) -> Option<u32> {
        if a.is_multiple_of(self.p) {
            return None;
        }
        // a^(p-2)
        let mut result = 1;
        let mut base = a % self.p;
        let mut e = self.p - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        Some(result)
    }

    pub fn elem(self, value: i64) -> FieldElem {
        FieldElem { value: self.reduce(value), field: self }
    }

    /// Index of `value` read as a field element; `p - 1` reads as `-1`.
    pub fn signed(self, value: u32) -> i64 {
        if value > self.p / 2 {
            value as i64 - self.p as i64
        } else {
            value as i64
        }
    }
}

/// A single element of GF(p).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElem {
    value: u32,
    field: PrimeField,
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.field.p)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl FieldElem {
    pub fn value(self) -> u32 {
        self.value
    }

    pub fn field(self) -> PrimeField {
        self.field
    }

    pub fn inv(self) -> Option<FieldElem> {
        self.field.inv(self.value).map(|value| FieldElem { value, field: self.field })
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }
}

impl Add for FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: FieldElem) -> FieldElem {
        assert_eq!(self.field, rhs.field, "mixed fields");
        FieldElem { value: self.field.add(self.value, rhs.value), field: self.field }
    }
}

impl Sub for FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: FieldElem) -> FieldElem {
        assert_eq!(self.field, rhs.field, "mixed fields");
        FieldElem { value: self.field.sub(self.value, rhs.value), field: self.field }
    }
}

impl Mul for FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: FieldElem) -> FieldElem {
        assert_eq!(self.field, rhs.field, "mixed fields");
        FieldElem { value: self.field.mul(self.value, rhs.value), field: self.field }
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem { value: self.field.neg(self.value), field: self.field }
    }
}

/// A dense matrix over GF(p).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldMatrix {
    rows: usize,
    cols: usize,
    field: PrimeField,
    data: Vec<u32>,
}

impl fmt::Debug for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FieldMatrix {}x{} over {:?}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

impl FieldMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        FieldMatrix { rows, cols, field, data: vec![0; rows * cols] }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn scalar(field: PrimeField, n: usize, c: u32) -> Self {
        let mut m = Self::zeros(field, n, n);
        let c = c % field.p;
        for i in 0..n {
            m.data[i * n + i] = c;
        }
        m
    }

    /// Builds a matrix from integer rows, reducing every entry mod p.
    pub fn from_rows(field: PrimeField, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::input("ragged matrix rows"));
        }
        let data = rows.iter().flatten().map(|&v| field.reduce(v)).collect();
        Ok(FieldMatrix { rows: rows.len(), cols, field, data })
    }

    /// Wraps raw row-major data; entries are reduced mod p.
    pub fn from_vec(field: PrimeField, rows: usize, cols: usize, mut data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols, "data length does not match shape");
        for v in &mut data {
            *v %= field.p;
        }
        FieldMatrix { rows, cols, field, data }
    }

    pub fn from_fn(
        field: PrimeField,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> u32,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j) % field.p);
            }
        }
        FieldMatrix { rows, cols, field, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: PrimeField, rows: usize, columns: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for i in 0..rows {
                m.data[i * m.cols + j] = col[i] % field.p;
            }
        }
        m
    }

    /// Matrix whose rows are the given vectors.
    pub fn from_row_vectors(field: PrimeField, cols: usize, vectors: &[Vec<u32>]) -> Self {
        let mut data = Vec::with_capacity(vectors.len() * cols);
        for v in vectors {
            assert_eq!(v.len(), cols, "row length mismatch");
            data.extend(v.iter().map(|x| x % field.p));
        }
        FieldMatrix { rows: vectors.len(), cols, field, data }
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
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn prime(&self) -> u32 {
        self.field.p
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.field.p;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn into_data(self) -> Vec<u32> {
        self.data
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<u32>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                self.row(i).iter().enumerate().all(|(j, &v)| v == u32::from(i == j))
            })
    }

    fn assert_compatible(&self, other: &FieldMatrix) {
        assert_eq!(self.field, other.field, "prime mismatch");
    }

    pub fn add(&self, other: &FieldMatrix) -> FieldMatrix {
        self.assert_compatible(other);
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in add");
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        FieldMatrix { data, ..*self }
    }

    pub fn sub(&self, other: &FieldMatrix) -> FieldMatrix {
        self.assert_compatible(other);
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in sub");
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        FieldMatrix { data, ..*self }
    }

    pub fn scale(&self, c: u32) -> FieldMatrix {
        let f = self.field;
        let c = c % f.p;
        let data = self.data.iter().map(|&a| f.mul(a, c)).collect();
        FieldMatrix { data, ..*self }
    }

    pub fn neg(&self) -> FieldMatrix {
        self.scale(self.field.p - 1)
    }

    /// `self += c * other`, in place.
    pub fn add_scaled(&mut self, c: u32, other: &FieldMatrix) {
        self.assert_compatible(other);
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let f = self.field;
        let c = c % f.p;
        if c == 0 {
            return;
        }
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a = f.reduce_small(*a + c * b);
        }
    }

    pub fn mul(&self, other: &FieldMatrix) -> FieldMatrix {
        self.assert_compatible(other);
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let (n, k, m) = (self.rows, self.cols, other.cols);
        let p = self.field.p;
        let mut out = vec![0u32; n * m];
        // Unreduced accumulation: each product is < 31^2 so 4M terms fit in u32.
        let mut acc = vec![0u32; m];
        for i in 0..n {
            acc.iter_mut().for_each(|x| *x = 0);
            let mut pending = 0usize;
            for t in 0..k {
                let a = self.data[i * k + t];
                if a == 0 {
                    continue;
                }
                let brow = &other.data[t * m..(t + 1) * m];
                for (x, &b) in acc.iter_mut().zip(brow) {
                    *x += a * b;
                }
                pending += 1;
                if pending == 4_000_000 {
                    acc.iter_mut().for_each(|x| *x %= p);
                    pending = 0;
                }
            }
            for (o, &x) in out[i * m..(i + 1) * m].iter_mut().zip(&acc) {
                *o = x % p;
            }
        }
        FieldMatrix { rows: n, cols: m, field: self.field, data: out }
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len(), "shape mismatch in mul_vec");
        let p = self.field.p as u64;
        (0..self.rows)
            .map(|i| {
                let s: u64 = self.row(i).iter().zip(v).map(|(&a, &b)| (a * b) as u64).sum();
                (s % p) as u32
            })
            .collect()
    }

    pub fn transpose(&self) -> FieldMatrix {
        let mut out = FieldMatrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        out
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &FieldMatrix) -> FieldMatrix {
        self.assert_compatible(other);
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut out = FieldMatrix::zeros(self.field, r, c);
        let f = self.field;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.data[(i * other.rows + k) * c + j * other.cols + l] =
                            f.mul(a, other.get(k, l));
                    }
                }
            }
        }
        out
    }

    pub fn hstack(parts: &[&FieldMatrix]) -> FieldMatrix {
        assert!(!parts.is_empty(), "hstack of nothing");
        let rows = parts[0].rows;
        let field = parts[0].field;
        assert!(parts.iter().all(|m| m.rows == rows && m.field == field), "hstack mismatch");
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for m in parts {
                data.extend_from_slice(m.row(i));
            }
        }
        FieldMatrix { rows, cols, field, data }
    }

    pub fn vstack(parts: &[&FieldMatrix]) -> FieldMatrix {
        assert!(!parts.is_empty(), "vstack of nothing");
        let cols = parts[0].cols;
        let field = parts[0].field;
        assert!(parts.iter().all(|m| m.cols == cols && m.field == field), "vstack mismatch");
        let mut data = Vec::new();
        for m in parts {
            data.extend_from_slice(&m.data);
        }
        let rows = parts.iter().map(|m| m.rows).sum();
        FieldMatrix { rows, cols, field, data }
    }

    /// Block-diagonal matrix.
    pub fn block_diag(field: PrimeField, blocks: &[&FieldMatrix]) -> FieldMatrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = FieldMatrix::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            out.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        assert!(rows.end <= self.rows && cols.end <= self.cols, "submatrix out of range");
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for i in rows.clone() {
            data.extend_from_slice(&self.data[i * self.cols + cols.start..i * self.cols + cols.end]);
        }
        FieldMatrix { rows: rows.len(), cols: cols.len(), field: self.field, data }
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &FieldMatrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "block overflow");
        for i in 0..block.rows {
            let dst = (r0 + i) * self.cols + c0;
            self.data[dst..dst + block.cols].copy_from_slice(block.row(i));
        }
    }

    pub fn pow(&self, mut e: u64) -> FieldMatrix {
        assert!(self.is_square(), "pow of non-square matrix");
        let mut result = FieldMatrix::identity(self.field, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// In-place reduced row-echelon form; returns the pivot columns.
    fn rref_in_place(&mut self) -> Vec<usize> {
        let (rows, cols) = (self.rows, self.cols);
        let f = self.field;
        let p = f.p;
        let mut pivots = Vec::new();
        let mut r = 0;
        let mut pivot_row = vec![0u32; cols];
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            if pr != r {
                for j in c..cols {
                    self.data.swap(pr * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(self.data[r * cols + c]).expect("nonzero pivot");
            for j in c..cols {
                let v = f.mul(self.data[r * cols + j], inv);
                self.data[r * cols + j] = v;
                pivot_row[j] = v;
            }
            let tail = &pivot_row[c..cols];
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let factor = self.data[i * cols + c];
                if factor == 0 {
                    continue;
                }
                let nf = p - factor;
                let row = &mut self.data[i * cols + c..(i + 1) * cols];
                for (x, &y) in row.iter_mut().zip(tail) {
                    *x = f.reduce_small(*x + nf * y);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Reduced row-echelon form and pivot columns.
    pub fn rref(&self) -> (FieldMatrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        // eliminate on the shorter orientation
        if self.rows > self.cols {
            self.transpose().rref().1.len()
        } else {
            self.rref().1.len()
        }
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Basis of the right kernel `{v : self·v = 0}` as column vectors.
    pub fn nullspace(&self) -> Vec<Vec<u32>> {
        let (r, pivots) = self.rref();
        let f = self.field;
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u32; self.cols];
            v[free] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(r.get(i, free));
            }
            basis.push(v);
        }
        basis
    }

    /// Some `X` with `a·X = b`, or `None` when the system is inconsistent.
    pub fn solve(a: &FieldMatrix, b: &FieldMatrix) -> Result<Option<FieldMatrix>> {
        if a.rows != b.rows {
            return Err(Error::input(format!(
                "solve: {} equations but right-hand side has {} rows",
                a.rows, b.rows
            )));
        }
        if a.field != b.field {
            return Err(Error::input("solve: prime mismatch"));
        }
        let aug = FieldMatrix::hstack(&[a, b]);
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&c| c >= a.cols) {
            return Ok(None);
        }
        let mut x = FieldMatrix::zeros(a.field, a.cols, b.cols);
        for (i, &pc) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.data[pc * b.cols + j] = r.get(i, a.cols + j);
            }
        }
        Ok(Some(x))
    }

    /// Two-sided inverse, or `None` when singular.
    pub fn invert(&self) -> Result<Option<FieldMatrix>> {
        if !self.is_square() {
            return Err(Error::input(format!(
                "invert: matrix is {}x{}, not square",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let aug = FieldMatrix::hstack(&[self, &FieldMatrix::identity(self.field, n)]);
        let (r, pivots) = aug.rref();
        if pivots.len() < n || (n > 0 && pivots[n - 1] != n - 1) {
            return Ok(None);
        }
        Ok(Some(r.submatrix(0..n, n..2 * n)))
    }

    /// Flattened row-major entries as a vector (the `vec` used by hom spaces).
    pub fn to_vector(&self) -> Vec<u32> {
        self.data.clone()
    }

    pub fn from_vector(field: PrimeField, rows: usize, cols: usize, v: &[u32]) -> Self {
        FieldMatrix::from_vec(field, rows, cols, v.to_vec())
    }
}

/// A subspace of GF(p)^len, stored as a basis in reduced row-echelon form.
///
/// The RREF basis is canonical, so two handles are equal iff the subspaces
/// are equal, and the coordinates of a member are read off at the pivots.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    field: PrimeField,
    len: usize,
    basis: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: PrimeField, len: usize) -> Self {
        Subspace { field, len, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(field: PrimeField, len: usize) -> Self {
        let basis = (0..len)
            .map(|i| {
                let mut v = vec![0; len];
                v[i] = 1;
                v
            })
            .collect();
        Subspace { field, len, basis, pivots: (0..len).collect() }
    }

    /// The span of `vectors`.
    pub fn span(field: PrimeField, len: usize, vectors: &[Vec<u32>]) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != len) {
            return Err(Error::input(format!(
                "span: vector of length {} in a space of length {len}",
                v.len()
            )));
        }
        if vectors.is_empty() {
            return Ok(Self::zero(field, len));
        }
        let m = FieldMatrix::from_row_vectors(field, len, vectors);
        Ok(Self::from_row_space(&m))
    }

    /// The row space of `m`.
    pub fn from_row_space(m: &FieldMatrix) -> Self {
        let (r, pivots) = m.rref();
        let basis = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Subspace { field: m.field(), len: m.cols(), basis, pivots }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_len(&self) -> usize {
        self.len
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check(&self, other: &Subspace) -> Result<()> {
        if self.field != other.field || self.len != other.len {
            return Err(Error::input("subspaces live in different spaces"));
        }
        Ok(())
    }

    /// Remainder of `v` after eliminating the pivot coordinates.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.len, "vector length mismatch");
        let f = self.field;
        let mut out = v.to_vec();
        for (b, &pc) in self.basis.iter().zip(&self.pivots) {
            let c = out[pc];
            if c == 0 {
                continue;
            }
            let nc = f.p - c;
            for (x, &y) in out.iter_mut().zip(b) {
                *x = f.reduce_small(*x + nc * y);
            }
        }
        out
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Coordinates of `v` in the RREF basis, when `v` is a member.
    pub fn coordinates(&self, v: &[u32]) -> Option<Vec<u32>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&pc| v[pc]).collect())
    }

    /// Linear combination of the basis with the given coordinates.
    pub fn combine(&self, coords: &[u32]) -> Vec<u32> {
        assert_eq!(coords.len(), self.dim(), "coordinate count mismatch");
        let f = self.field;
        let mut out = vec![0; self.len];
        for (b, &c) in self.basis.iter().zip(coords) {
            if c == 0 {
                continue;
            }
            for (x, &y) in out.iter_mut().zip(b) {
                *x = f.reduce_small(*x + c * y);
            }
        }
        out
    }

    /// Adds `v` to the subspace; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        let mut r = self.reduce(v);
        let Some(q) = r.iter().position(|&x| x != 0) else {
            return false;
        };
        let f = self.field;
        let inv = f.inv(r[q]).expect("nonzero");
        for x in r.iter_mut() {
            *x = f.mul(*x, inv);
        }
        for b in self.basis.iter_mut() {
            let c = b[q];
            if c == 0 {
                continue;
            }
            let nc = f.p - c;
            for (x, &y) in b.iter_mut().zip(&r) {
                *x = f.reduce_small(*x + nc * y);
            }
        }
        let at = self.pivots.partition_point(|&pc| pc < q);
        self.pivots.insert(at, q);
        self.basis.insert(at, r);
        true
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        let mut out = self.clone();
        for v in &other.basis {
            out.insert(v);
        }
        Ok(out)
    }

    pub fn intersection(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        if self.dim() == 0 || other.dim() == 0 {
            return Ok(Subspace::zero(self.field, self.len));
        }
        // (a, b) in the kernel of [U^T | V^T] gives U^T a ∈ U ∩ V
        let cols: Vec<Vec<u32>> = self.basis.iter().chain(&other.basis).cloned().collect();
        let m = FieldMatrix::from_columns(self.field, self.len, &cols);
        let u = FieldMatrix::from_columns(self.field, self.len, &self.basis);
        let mut out = Subspace::zero(self.field, self.len);
        for k in m.nullspace() {
            out.insert(&u.mul_vec(&k[..self.dim()]));
        }
        Ok(out)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.field == other.field
            && self.len == other.len
            && self.basis.iter().all(|v| other.contains(v))
    }

    /// Unit vectors that extend this basis to the whole space, in index order.
    pub fn complement_basis(&self) -> Vec<Vec<u32>> {
        let mut is_pivot = vec![false; self.len];
        for &pc in &self.pivots {
            is_pivot[pc] = true;
        }
        (0..self.len)
            .filter(|&i| !is_pivot[i])
            .map(|i| {
                let mut v = vec![0; self.len];
                v[i] = 1;
                v
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn mat(p: u32, rows: &[&[i64]]) -> FieldMatrix {
        FieldMatrix::from_rows(gf(p), &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
            .unwrap()
    }

    #[test]
    fn field_construction_rejects_non_primes() {
        assert!(PrimeField::new(4).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(37).is_err());
        for p in [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
            assert!(PrimeField::new(p).is_ok());
        }
    }

    #[test]
    fn reduce_small_is_exact() {
        for p in [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
            let f = gf(p);
            for x in 0..1024 {
                assert_eq!(f.reduce_small(x), x % p, "p={p} x={x}");
            }
        }
    }

    #[test]
    fn elem_arithmetic() {
        let f = gf(5);
        let two = f.elem(2);
        assert_eq!((two * f.elem(3)).value(), 1);
        assert_eq!(two.inv().unwrap().value(), 3);
        assert_eq!((-two).value(), 3);
        assert!(f.elem(10).is_zero());
        assert_eq!(f.elem(-1).value(), 4);
    }

    #[test]
    fn rref_examples() {
        let id = FieldMatrix::identity(gf(2), 3);
        assert_eq!(id.rref(), (id.clone(), vec![0, 1, 2]));

        let z = FieldMatrix::zeros(gf(3), 2, 2);
        assert_eq!(z.rref(), (z.clone(), vec![]));

        let m = mat(2, &[&[1, 1], &[1, 1]]);
        assert_eq!(m.rref(), (mat(2, &[&[1, 1], &[0, 0]]), vec![0]));
    }

    #[test]
    fn nullspace_examples() {
        assert_eq!(mat(2, &[&[1, 1]]).nullspace(), vec![vec![1, 1]]);
        assert!(mat(3, &[&[1, 2], &[0, 1]]).nullspace().is_empty());
        assert_eq!(FieldMatrix::zeros(gf(5), 2, 3).nullspace().len(), 3);
    }

    #[test]
    fn solve_examples() {
        let b = mat(7, &[&[3, 1], &[4, 6]]);
        let x = FieldMatrix::solve(&FieldMatrix::identity(gf(7), 2), &b).unwrap().unwrap();
        assert_eq!(x, b);

        let a = mat(2, &[&[1, 1], &[1, 1]]);
        assert!(FieldMatrix::solve(&a, &mat(2, &[&[1], &[0]])).unwrap().is_none());

        let x = FieldMatrix::solve(&mat(5, &[&[2]]), &mat(5, &[&[1]])).unwrap().unwrap();
        assert_eq!(x, mat(5, &[&[3]]));
    }

    #[test]
    fn solve_input_errors() {
        let a = FieldMatrix::identity(gf(5), 2);
        assert!(FieldMatrix::solve(&a, &FieldMatrix::zeros(gf(5), 3, 1)).is_err());
        assert!(FieldMatrix::solve(&a, &FieldMatrix::zeros(gf(3), 2, 1)).is_err());
    }

    #[test]
    fn invert_examples() {
        let id = FieldMatrix::identity(gf(3), 4);
        assert_eq!(id.invert().unwrap().unwrap(), id);
        assert!(mat(2, &[&[1, 1], &[1, 1]]).invert().unwrap().is_none());
        let swap = mat(3, &[&[0, 1], &[1, 0]]);
        assert_eq!(swap.invert().unwrap().unwrap(), swap);
        assert!(FieldMatrix::zeros(gf(3), 2, 3).invert().is_err());
    }

    #[test]
    fn span_examples() {
        let f = gf(2);
        let s = Subspace::span(f, 2, &[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(s.dim(), 2);
        assert!(s.contains(&[1, 1]));
        assert_eq!(Subspace::span(f, 2, &[]).unwrap().dim(), 0);

        let f = gf(3);
        let u = Subspace::span(f, 3, &[vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
        let v = Subspace::span(f, 3, &[vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        assert_eq!(
            u.intersection(&v).unwrap(),
            Subspace::span(f, 3, &[vec![0, 1, 0]]).unwrap()
        );
        assert_eq!(u.sum(&v).unwrap().dim(), 3);
        assert!(Subspace::span(f, 3, &[vec![1, 0]]).is_err());
    }

    #[test]
    fn insert_keeps_rref() {
        let f = gf(5);
        let mut s = Subspace::zero(f, 3);
        assert!(s.insert(&[0, 2, 1]));
        assert!(s.insert(&[1, 1, 1]));
        assert!(!s.insert(&[1, 3, 2]));
        let direct = Subspace::span(f, 3, &[vec![0, 2, 1], vec![1, 1, 1]]).unwrap();
        assert_eq!(s, direct);
    }

    #[test]
    fn complement_extends_to_full_rank() {
        let f = gf(3);
        let s = Subspace::span(f, 4, &[vec![0, 1, 2, 0], vec![0, 0, 1, 1]]).unwrap();
        let comp = s.complement_basis();
        assert_eq!(comp.len(), 2);
        let all: Vec<_> = s.basis().iter().chain(&comp).cloned().collect();
        assert_eq!(Subspace::span(f, 4, &all).unwrap().dim(), 4);
        assert_eq!(comp[0], vec![1, 0, 0, 0]);
    }

    #[test]
    fn kron_and_transpose() {
        let a = mat(5, &[&[1, 2], &[3, 4]]);
        let b = mat(5, &[&[0, 1], &[1, 0]]);
        let k = a.kron(&b);
        assert_eq!(k.rows(), 4);
        assert_eq!(k.get(0, 1), 1);
        assert_eq!(k.get(3, 2), 4);
        assert_eq!(a.transpose().transpose(), a);
        // (A⊗B)(C⊗D) = AC⊗BD
        let c = mat(5, &[&[2, 0], &[1, 1]]);
        assert_eq!(k.mul(&c.kron(&b)), a.mul(&c).kron(&b.mul(&b)));
    }
}
