//! Arithmetic in a prime field `F_p` with `p` odd, and dense matrices over it.

use std::fmt;

use crate::error::{Error, Result};

/// Default modulus for radical and quiver computations.
pub const DEFAULT_PRIME: u32 = 10007;

/// The prime field `F_p`. Construction rejects `p = 2` and composite moduli.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if p == 2 {
            return Err(Error::CharacteristicTwo);
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        // Products of two residues must fit in u64 with room for accumulation.
        if p >= 1 << 31 {
            return Err(Error::ModulusTooLarge(p));
        }
        Ok(Self { p })
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(&self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1u32;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self, a: u32) -> u32 {
        assert!(!a.is_multiple_of(self.p), "inverse of zero in F_{}", self.p);
        self.pow(a, self.p as u64 - 2)
    }

    /// Image of a signed integer.
    pub fn from_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    /// The inverse of 2; always exists since `p` is odd.
    pub fn half(&self) -> u32 {
        self.p.div_ceil(2)
    }

    /// Symmetric representative in `(-p/2, p/2]`, handy for printing.
    pub fn to_signed(&self, a: u32) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Dense row-major matrix over a prime field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for FMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FMatrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            let row: Vec<i64> = self.row(r).iter().map(|&v| self.field.to_signed(v)).collect();
            writeln!(f, "  {:?}", row)?;
        }
        Ok(())
    }
}

/// Output of [`FMatrix::reduce`].
#[derive(Debug, Clone)]
pub struct Reduction {
    pub rref: FMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl FMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from signed integer rows. All rows must have equal length.
    pub fn from_rows(field: PrimeField, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().map(|&v| field.from_i64(v)));
        }
        Self { field, rows: r, cols: c, data }
    }

    /// Wraps residues already in `[0, p)`.
    pub fn from_residues(field: PrimeField, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols, "entries length must be rows * cols");
        debug_assert!(data.iter().all(|&v| v < field.modulus()));
        Self { field, rows, cols, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: PrimeField, rows: usize, columns: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, &v) in col.iter().enumerate() {
                m.data[i * m.cols + j] = v;
            }
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
    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.field.modulus();
    }
    #[inline]
    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }
    pub fn entries(&self) -> &[u32] {
        &self.data
    }
    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn mul(&self, other: &FMatrix) -> FMatrix {
        assert_eq!(self.field, other.field, "modulus mismatch");
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let f = self.field;
        let p = f.modulus() as u64;
        let mut out = vec![0u64; self.rows * other.cols];
        for i in 0..self.rows {
            let acc = &mut out[i * other.cols..(i + 1) * other.cols];
            for l in 0..self.cols {
                let a = self.get(i, l) as u64;
                if a == 0 {
                    continue;
                }
                for (o, &b) in acc.iter_mut().zip(other.row(l)) {
                    *o = (*o + a * b as u64) % p;
                }
            }
        }
        FMatrix { field: f, rows: self.rows, cols: other.cols, data: out.into_iter().map(|v| v as u32).collect() }
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        let p = self.field.modulus() as u64;
        (0..self.rows)
            .map(|r| {
                let s = self.row(r).iter().zip(v).fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % p);
                s as u32
            })
            .collect()
    }

    pub fn add(&self, other: &FMatrix) -> FMatrix {
        self.zip_with(other, |f, a, b| f.add(a, b))
    }

    pub fn sub(&self, other: &FMatrix) -> FMatrix {
        self.zip_with(other, |f, a, b| f.sub(a, b))
    }

    pub fn scale(&self, s: u32) -> FMatrix {
        let f = self.field;
        FMatrix { data: self.data.iter().map(|&v| f.mul(v, s)).collect(), ..self.clone() }
    }

    fn zip_with(&self, other: &FMatrix, op: impl Fn(&PrimeField, u32, u32) -> u32) -> FMatrix {
        assert_eq!(self.field, other.field, "modulus mismatch");
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| op(&self.field, a, b)).collect();
        FMatrix { data, ..self.clone() }
    }

    /// Reduced row-echelon form, rank and pivot columns.
    pub fn reduce(&self) -> Reduction {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = f.inv(m.get(r, c));
            m.scale_row(r, inv);
            for i in 0..m.rows {
                if i != r {
                    let factor = m.get(i, c);
                    if factor != 0 {
                        m.row_axpy(i, r, f.neg(factor));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Reduction { rank: pivots.len(), rref: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.reduce().rank
    }

    /// Basis of `{v : M v = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<u32>> {
        let red = self.reduce();
        let f = self.field;
        let mut is_pivot = vec![false; self.cols];
        for &c in &red.pivots {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![0u32; self.cols];
                v[free] = 1;
                for (r, &pc) in red.pivots.iter().enumerate() {
                    v[pc] = f.neg(red.rref.get(r, free));
                }
                v
            })
            .collect()
    }

    /// Some `R` with `M R = I`, or `None` when the rows are dependent.
    pub fn right_inverse(&self) -> Option<FMatrix> {
        // Reduce [M | I]; the left block reaches full row rank iff M is right invertible.
        let f = self.field;
        let mut aug = FMatrix::zeros(f, self.rows, self.cols + self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.data[r * aug.cols + c] = self.get(r, c);
            }
            aug.data[r * aug.cols + self.cols + r] = 1;
        }
        let red = aug.reduce();
        let left_pivots: Vec<usize> = red.pivots.iter().copied().filter(|&c| c < self.cols).collect();
        if left_pivots.len() < self.rows {
            return None;
        }
        // Row r of the rref reads e_{pivot_r}^T M-combination = (E row r); with E M = rref,
        // setting R[pivot_r, :] = E[r, :] yields M R = I.
        let mut inv = FMatrix::zeros(f, self.cols, self.rows);
        for (r, &pc) in left_pivots.iter().enumerate() {
            for j in 0..self.rows {
                inv.data[pc * self.rows + j] = red.rref.get(r, self.cols + j);
            }
        }
        Some(inv)
    }

    /// Coordinates of `target` in the span of `basis` (all flattened to equal length).
    pub fn solve_in_span(field: PrimeField, basis: &[&[u32]], target: &[u32]) -> Option<Vec<u32>> {
        let len = target.len();
        let cols: Vec<Vec<u32>> = basis
            .iter()
            .map(|b| {
                assert_eq!(b.len(), len);
                b.to_vec()
            })
            .chain(std::iter::once(target.to_vec()))
            .collect();
        let aug = FMatrix::from_columns(field, len, &cols);
        let red = aug.reduce();
        let k = basis.len();
        if red.pivots.contains(&k) {
            return None;
        }
        let mut coords = vec![0u32; k];
        for (r, &pc) in red.pivots.iter().enumerate() {
            coords[pc] = red.rref.get(r, k);
        }
        Some(coords)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn scale_row(&mut self, r: usize, s: u32) {
        let f = self.field;
        for v in &mut self.data[r * self.cols..(r + 1) * self.cols] {
            *v = f.mul(*v, s);
        }
    }

    /// row[dst] += s * row[src]
    fn row_axpy(&mut self, dst: usize, src: usize, s: u32) {
        let f = self.field;
        let cols = self.cols;
        let (d, sr) = if dst < src {
            let (lo, hi) = self.data.split_at_mut(src * cols);
            (&mut lo[dst * cols..(dst + 1) * cols], &hi[..cols])
        } else {
            let (lo, hi) = self.data.split_at_mut(dst * cols);
            (&mut hi[..cols], &lo[src * cols..(src + 1) * cols])
        };
        for (x, &y) in d.iter_mut().zip(sr) {
            if y != 0 {
                *x = f.add(*x, f.mul(s, y));
            }
        }
    }
}
