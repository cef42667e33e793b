//! Dense matrices and vectors over the prime field F_p.
//!
//! Entries are kept reduced to `[0, p)` at all times. Vectors are column
//! vectors; matrices act on the left. Subspaces are represented by their
//! reduced row echelon basis, which is canonical, so subspace equality is
//! plain struct equality.
#![allow(clippy::needless_range_loop)]

use crate::error::{Error, Result};

/// A prime modulus. Construction checks primality by trial division, which
/// is plenty for the desk-scale primes this library is used with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if p < 2 {
            return Err(Error::NotPrime(p));
        }
        let mut d = 2;
        while d * d <= p {
            if p.is_multiple_of(d) {
                return Err(Error::NotPrime(p));
            }
            d += 1;
        }
        Ok(Prime(p))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn require_odd(self) -> Result<Self> {
        if self.0 == 2 {
            Err(Error::EvenPrime(2))
        } else {
            Ok(self)
        }
    }

    pub fn require_greater_than_3(self) -> Result<Self> {
        if self.0 <= 3 {
            Err(Error::PrimeTooSmall(self.0))
        } else {
            Ok(self)
        }
    }

    pub fn reduce(self, x: i64) -> u64 {
        x.rem_euclid(self.0 as i64) as u64
    }

    pub fn add(self, a: u64, b: u64) -> u64 {
        (a + b) % self.0
    }

    pub fn sub(self, a: u64, b: u64) -> u64 {
        (a + self.0 - b % self.0) % self.0
    }

    pub fn mul(self, a: u64, b: u64) -> u64 {
        (a * b) % self.0
    }

    pub fn neg(self, a: u64) -> u64 {
        (self.0 - a % self.0) % self.0
    }

    /// Multiplicative inverse by Fermat's little theorem.
    pub fn inv(self, a: u64) -> u64 {
        assert!(!a.is_multiple_of(self.0), "inverse of zero mod {}", self.0);
        self.pow(a, self.0 - 2)
    }

    pub fn pow(self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.0;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.0;
            }
            base = base * base % self.0;
            e >>= 1;
        }
        acc
    }
}

impl std::fmt::Display for Prime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub type FpVector = Vec<u64>;

/// Row-major dense matrix over F_p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpMatrix {
    pub p: Prime,
    pub nrows: usize,
    pub ncols: usize,
    data: Vec<u64>,
}

impl FpMatrix {
    pub fn zero(p: Prime, nrows: usize, ncols: usize) -> Self {
        FpMatrix { p, nrows, ncols, data: vec![0; nrows * ncols] }
    }

    pub fn identity(p: Prime, n: usize) -> Self {
        let mut m = Self::zero(p, n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(p: Prime, rows: &[Vec<i64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zero(p, nrows, ncols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), ncols, "ragged rows");
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = p.reduce(x);
            }
        }
        m
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.ncols..(i + 1) * self.ncols]
    }

    pub fn rows_vec(&self) -> Vec<FpVector> {
        (0..self.nrows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut out = Self::zero(self.p, self.ncols, self.nrows);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.ncols, other.nrows, "shape mismatch in matrix product");
        let p = self.p;
        let mut out = Self::zero(p, self.nrows, other.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.ncols {
                    out[(i, j)] = (out[(i, j)] + a * other[(k, j)]) % p.get();
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u64]) -> FpVector {
        assert_eq!(self.ncols, v.len(), "shape mismatch in matrix-vector product");
        let p = self.p.get();
        (0..self.nrows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, &b)| (acc + a * b) % p)
            })
            .collect()
    }

    pub fn add(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let mut out = self.clone();
        for (a, &b) in out.data.iter_mut().zip(&other.data) {
            *a = (*a + b) % self.p.get();
        }
        out
    }

    pub fn sub(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let mut out = self.clone();
        for (a, &b) in out.data.iter_mut().zip(&other.data) {
            *a = self.p.sub(*a, b);
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> FpMatrix {
        assert_eq!(self.nrows, self.ncols, "pow of non-square matrix");
        let mut acc = Self::identity(self.p, self.nrows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn rank(&self) -> usize {
        let (rows, _) = rref(self.p, self.rows_vec());
        rows.len()
    }

    /// Gauss-Jordan inverse. Panics if the matrix is singular; callers that
    /// cannot guarantee invertibility should use `try_inverse`.
    pub fn inverse(&self) -> FpMatrix {
        self.try_inverse().expect("matrix is singular")
    }

    pub fn try_inverse(&self) -> Option<FpMatrix> {
        assert_eq!(self.nrows, self.ncols);
        let n = self.nrows;
        let p = self.p;
        let mut a = self.clone();
        let mut inv = Self::identity(p, n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| a[(r, col)] != 0)?;
            if pivot != col {
                a.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            let f = p.inv(a[(col, col)]);
            a.scale_row(col, f);
            inv.scale_row(col, f);
            for r in 0..n {
                if r != col && a[(r, col)] != 0 {
                    let f = a[(r, col)];
                    a.sub_scaled_row(r, col, f);
                    inv.sub_scaled_row(r, col, f);
                }
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        for c in 0..self.ncols {
            self.data.swap(i * self.ncols + c, j * self.ncols + c);
        }
    }

    fn scale_row(&mut self, i: usize, f: u64) {
        let p = self.p.get();
        for c in 0..self.ncols {
            self.data[i * self.ncols + c] = self.data[i * self.ncols + c] * f % p;
        }
    }

    fn sub_scaled_row(&mut self, i: usize, j: usize, f: u64) {
        let p = self.p;
        for c in 0..self.ncols {
            let x = self.data[j * self.ncols + c];
            let y = &mut self.data[i * self.ncols + c];
            *y = p.sub(*y, f * x % p.get());
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "p": self.p.get(),
            "rows": self.nrows,
            "cols": self.ncols,
            "entries": (0..self.nrows).map(|i| self.row(i).to_vec()).collect::<Vec<_>>(),
        })
    }
}

impl std::ops::Index<(usize, usize)> for FpMatrix {
    type Output = u64;
    fn index(&self, (i, j): (usize, usize)) -> &u64 {
        &self.data[i * self.ncols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for FpMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut u64 {
        &mut self.data[i * self.ncols + j]
    }
}

/// Reduced row echelon form. Returns the nonzero rows (pivots normalized to 1,
/// each pivot column cleared elsewhere) and the pivot column indices.
pub fn rref(p: Prime, mut rows: Vec<FpVector>) -> (Vec<FpVector>, Vec<usize>) {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let f = p.inv(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = *x * f % p.get();
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                for j in 0..ncols {
                    let x = rows[r][j];
                    rows[i][j] = p.sub(rows[i][j], f * x % p.get());
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

/// A subspace of F_p^n in canonical (reduced row echelon) form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    pub p: Prime,
    pub ambient_dim: usize,
    basis: Vec<FpVector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn from_spanning(p: Prime, ambient_dim: usize, vectors: Vec<FpVector>) -> Self {
        for v in &vectors {
            assert_eq!(v.len(), ambient_dim, "spanning vector has wrong length");
        }
        let (basis, pivots) = rref(p, vectors);
        Subspace { p, ambient_dim, basis, pivots }
    }

    pub fn zero(p: Prime, ambient_dim: usize) -> Self {
        Subspace { p, ambient_dim, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(p: Prime, ambient_dim: usize) -> Self {
        let id = FpMatrix::identity(p, ambient_dim);
        Subspace::from_spanning(p, ambient_dim, id.rows_vec())
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[FpVector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduce `v` against the echelon basis; returns the residue and the
    /// coefficients of the basis rows used. `v` is in the subspace iff the
    /// residue is zero.
    pub fn reduce(&self, v: &[u64]) -> (FpVector, FpVector) {
        assert_eq!(v.len(), self.ambient_dim, "vector has wrong length");
        let p = self.p;
        let mut residue = v.to_vec();
        let mut coeffs = vec![0u64; self.basis.len()];
        for (r, &c) in self.pivots.iter().enumerate() {
            let f = residue[c];
            if f != 0 {
                coeffs[r] = f;
                for j in 0..self.ambient_dim {
                    residue[j] = p.sub(residue[j], f * self.basis[r][j] % p.get());
                }
            }
        }
        (residue, coeffs)
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v).0.iter().all(|&x| x == 0)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient_dim, other.ambient_dim);
        let mut vecs = self.basis.clone();
        vecs.extend(other.basis.iter().cloned());
        Subspace::from_spanning(self.p, self.ambient_dim, vecs)
    }
}

/// Kernel of a matrix (right null space), as a canonical subspace.
pub fn kernel(m: &FpMatrix) -> Subspace {
    let p = m.p;
    let (rows, pivots) = rref(p, m.rows_vec());
    let free: Vec<usize> = (0..m.ncols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = vec![0u64; m.ncols];
        v[f] = 1;
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = p.neg(rows[r][f]);
        }
        basis.push(v);
    }
    Subspace::from_spanning(p, m.ncols, basis)
}

/// Column space of a matrix, as a canonical subspace of F_p^nrows.
pub fn column_space(m: &FpMatrix) -> Subspace {
    Subspace::from_spanning(m.p, m.nrows, m.transpose().rows_vec())
}
