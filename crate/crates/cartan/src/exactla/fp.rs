//! Prime fields `F_p` and dense matrices over them.

use std::fmt;

use crate::error::Error;
use crate::Result;

use super::poly::FpPoly;

/// A prime field `F_p` with `2 <= p <= 61`.
///
/// The bound keeps every product of canonical residues inside a `u64` with
/// lots of headroom, so matrix kernels can accumulate dot products before
/// reducing.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl fmt::Debug for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}", self.p)
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}", self.p)
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !(2..=61).contains(&p) || !is_prime(p) {
            return Err(Error::BadPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, x: i64) -> u64 {
        x.rem_euclid(self.p as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        (a * b) % self.p
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    /// Inverse by Fermat's little theorem; panics on zero.
    pub fn inv(&self, a: u64) -> u64 {
        assert!(a % self.p != 0, "division by zero in F_{}", self.p);
        self.pow(a, self.p - 2)
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        base %= self.p;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }
}

/// Dense row-major matrix over a prime field. Entries are canonical
/// residues in `[0, p)`.
#[derive(Clone, PartialEq, Eq)]
pub struct FpMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

/// Result of reduced row echelon form: the reduced matrix, the pivot
/// columns in order, and the rank.
#[derive(Clone, Debug)]
pub struct Rref {
    pub mat: FpMatrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl FpMatrix {
    pub fn zero(field: PrimeField, rows: usize, cols: usize) -> Self {
        FpMatrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(field: PrimeField, rows: &[Vec<u64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            for &x in row {
                data.push(x % field.p());
            }
        }
        FpMatrix {
            field,
            rows: r,
            cols: c,
            data,
        }
    }

    /// Matrix with the given flat row-major data, reduced mod p.
    pub fn from_flat(field: PrimeField, rows: usize, cols: usize, data: Vec<u64>) -> Self {
        assert_eq!(data.len(), rows * cols);
        let data = data.into_iter().map(|x| x % field.p()).collect();
        FpMatrix {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.field.p;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = FpMatrix::zero(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn add(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| self.field.add(a, b))
            .collect();
        FpMatrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| self.field.sub(a, b))
            .collect();
        FpMatrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, c: u64) -> FpMatrix {
        let c = c % self.field.p;
        let data = self.data.iter().map(|&a| self.field.mul(a, c)).collect();
        FpMatrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(
            self.cols, other.rows,
            "dimension mismatch in matrix product"
        );
        let p = self.field.p;
        let mut out = FpMatrix::zero(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                let orow = k * other.cols;
                let srow = i * other.cols;
                for j in 0..other.cols {
                    // a*entry < 61^2; accumulate then reduce.
                    out.data[srow + j] = (out.data[srow + j] + a * other.data[orow + j]) % p;
                }
            }
        }
        out
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(self.cols, v.len());
        let p = self.field.p;
        let mut out = vec![0u64; self.rows];
        for i in 0..self.rows {
            let mut acc = 0u64;
            for j in 0..self.cols {
                acc += self.get(i, j) * v[j];
            }
            out[i] = acc % p;
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> FpMatrix {
        assert_eq!(self.rows, self.cols);
        let mut acc = FpMatrix::identity(self.field, self.rows);
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

    /// Kronecker (tensor) product.
    pub fn kronecker(&self, other: &FpMatrix) -> FpMatrix {
        let mut out = FpMatrix::zero(self.field, self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(
                            i * other.rows + k,
                            j * other.cols + l,
                            self.field.mul(a, other.get(k, l)),
                        );
                    }
                }
            }
        }
        out
    }

    /// Stack `other` below `self`.
    pub fn stack(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        FpMatrix {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Reduced row echelon form with pivot bookkeeping.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let p = m.field;
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let mut pivot_row = None;
            for i in r..m.rows {
                if m.get(i, c) != 0 {
                    pivot_row = Some(i);
                    break;
                }
            }
            let Some(pr) = pivot_row else { continue };
            if pr != r {
                for j in 0..m.cols {
                    let tmp = m.get(r, j);
                    let v = m.get(pr, j);
                    m.set(r, j, v);
                    m.set(pr, j, tmp);
                }
            }
            let inv = p.inv(m.get(r, c));
            for j in 0..m.cols {
                let v = m.get(r, j);
                m.set(r, j, p.mul(v, inv));
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c);
                if f == 0 {
                    continue;
                }
                for j in 0..m.cols {
                    let v = p.sub(m.get(i, j), p.mul(f, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref {
            mat: m,
            pivots,
            rank: r,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis (as rows) of the right kernel `{ v : M v = 0 }`.
    pub fn nullspace(&self) -> FpMatrix {
        let Rref { mat, pivots, rank } = self.rref();
        let p = self.field;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![0u64; self.cols];
            v[fc] = 1;
            for (r, &pc) in pivots.iter().enumerate().take(rank) {
                v[pc] = p.neg(mat.get(r, fc));
            }
            basis.push(v);
        }
        if basis.is_empty() {
            return FpMatrix::zero(p, 0, self.cols);
        }
        FpMatrix::from_rows(p, &basis)
    }

    /// Characteristic polynomial via an exact Hessenberg reduction
    /// (similarity transforms only, valid over any field).
    pub fn charpoly(&self) -> Result<FpPoly> {
        if self.rows != self.cols {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let p = self.field;
        if n == 0 {
            return Ok(FpPoly::one(p));
        }
        let mut h = self.clone();
        // Reduce to upper Hessenberg form.
        for j in 0..n.saturating_sub(2) {
            let mut piv = None;
            for i in (j + 1)..n {
                if h.get(i, j) != 0 {
                    piv = Some(i);
                    break;
                }
            }
            let Some(piv) = piv else { continue };
            if piv != j + 1 {
                // swap rows piv, j+1 and the same columns (a similarity)
                for c in 0..n {
                    let a = h.get(piv, c);
                    let b = h.get(j + 1, c);
                    h.set(piv, c, b);
                    h.set(j + 1, c, a);
                }
                for r in 0..n {
                    let a = h.get(r, piv);
                    let b = h.get(r, j + 1);
                    h.set(r, piv, b);
                    h.set(r, j + 1, a);
                }
            }
            let inv = p.inv(h.get(j + 1, j));
            for i in (j + 2)..n {
                let f = p.mul(h.get(i, j), inv);
                if f == 0 {
                    continue;
                }
                // row_i -= f * row_{j+1}, then col_{j+1} += f * col_i
                for c in 0..n {
                    let v = p.sub(h.get(i, c), p.mul(f, h.get(j + 1, c)));
                    h.set(i, c, v);
                }
                for r in 0..n {
                    let v = p.add(h.get(r, j + 1), p.mul(f, h.get(r, i)));
                    h.set(r, j + 1, v);
                }
            }
        }
        // charpoly of a Hessenberg matrix by the standard recurrence
        let mut polys: Vec<FpPoly> = Vec::with_capacity(n + 1);
        polys.push(FpPoly::one(p)); // p_0
        for k in 1..=n {
            // p_k = (X - h[k-1][k-1]) p_{k-1}
            //       - sum_{i=1}^{k-1} h[i-1][k-1] (prod_{j=i}^{k-2} h[j+1][j]) p_{i-1}
            let xm = FpPoly::from_coeffs(p, vec![p.neg(h.get(k - 1, k - 1)), 1]);
            let mut pk = xm.mul(&polys[k - 1]);
            // prod accumulates the subdiagonal entries h[i][i-1] going down
            let mut prod = 1u64;
            for i in (1..k).rev() {
                prod = p.mul(prod, h.get(i, i - 1));
                if prod == 0 {
                    break;
                }
                let coeff = p.mul(h.get(i - 1, k - 1), prod);
                if coeff != 0 {
                    pk = pk.sub(&polys[i - 1].scale(coeff));
                }
            }
            polys.push(pk);
        }
        Ok(polys.pop().unwrap())
    }
}

impl fmt::Display for FpMatrix {
    /// Rows on separate lines, entries space-separated, decimal residues.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FpMatrix {}x{} over {}\n{}",
            self.rows, self.cols, self.field, self
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn prime_field_bounds() {
        assert!(PrimeField::new(2).is_ok());
        assert!(PrimeField::new(61).is_ok());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(4).is_err());
        assert!(PrimeField::new(67).is_err());
    }

    #[test]
    fn rref_identity_fixed() {
        let m = FpMatrix::identity(f(5), 3);
        let r = m.rref();
        assert_eq!(r.mat, m);
        assert_eq!(r.rank, 3);
        assert_eq!(r.pivots, vec![0, 1, 2]);
    }

    #[test]
    fn rref_duplicate_rows_f2() {
        let m = FpMatrix::from_rows(f(2), &[vec![1, 1], vec![1, 1]]);
        let r = m.rref();
        assert_eq!(r.rank, 1);
        assert_eq!(r.mat.row(0), &[1, 1]);
        assert_eq!(r.mat.row(1), &[0, 0]);
    }

    #[test]
    fn rref_idempotent() {
        let m = FpMatrix::from_rows(
            f(3),
            &[vec![2, 1, 0, 2], vec![1, 1, 1, 0], vec![0, 2, 2, 1]],
        );
        let once = m.rref().mat;
        let twice = once.rref().mat;
        assert_eq!(once, twice);
    }

    #[test]
    fn nullspace_identity_empty() {
        let m = FpMatrix::identity(f(3), 4);
        assert_eq!(m.nullspace().rows(), 0);
    }

    #[test]
    fn nullspace_forced_vector() {
        let m = FpMatrix::from_rows(f(2), &[vec![1, 1], vec![1, 1]]);
        let ns = m.nullspace();
        assert_eq!(ns.rows(), 1);
        assert_eq!(ns.row(0), &[1, 1]);
    }

    #[test]
    fn nullspace_substitution() {
        // every kernel vector really is killed by the matrix
        let m = FpMatrix::from_rows(
            f(5),
            &[vec![1, 2, 3, 4], vec![2, 4, 1, 3], vec![3, 1, 4, 2]],
        );
        let ns = m.nullspace();
        assert_eq!(ns.rows() + m.rank(), m.cols());
        for i in 0..ns.rows() {
            assert!(m.mul_vec(ns.row(i)).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn charpoly_zero_matrix() {
        let m = FpMatrix::zero(f(3), 2, 2);
        let cp = m.charpoly().unwrap();
        assert_eq!(cp.coeffs(), &[0, 0, 1]); // X^2
    }

    #[test]
    fn charpoly_companion_roundtrip() {
        // companion matrix of f = X^3 + 2X + 1 over F_5 has charpoly f
        let p = f(5);
        let fpoly = FpPoly::from_coeffs(p, vec![1, 2, 0, 1]);
        let m = FpPoly::companion(&fpoly);
        assert_eq!(m.charpoly().unwrap(), fpoly);
    }

    #[test]
    fn charpoly_cayley_hamilton() {
        let p = f(3);
        let m = FpMatrix::from_rows(p, &[vec![1, 2, 0], vec![2, 1, 1], vec![0, 1, 2]]);
        let cp = m.charpoly().unwrap();
        assert!(cp.eval_matrix(&m).is_zero());
    }

    #[test]
    fn charpoly_nonsquare_err() {
        let m = FpMatrix::zero(f(3), 2, 3);
        assert!(matches!(m.charpoly(), Err(Error::NonSquare { .. })));
    }
}
