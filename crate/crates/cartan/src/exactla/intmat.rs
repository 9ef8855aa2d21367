//! Arbitrary-precision integer matrices: Smith normal form, determinants,
//! integer kernels and lattice membership.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense integer matrix with `BigInt` entries.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

/// Smith normal form `d = u * a * v` with unimodular `u`, `v` and a
/// nonnegative diagonal divisor chain `d_1 | d_2 | ...`.
#[derive(Clone, Debug)]
pub struct Snf {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().map(|&x| BigInt::from(x)));
        }
        IntMatrix {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn from_u64_rows(rows: &[Vec<u64>]) -> Self {
        let v: Vec<Vec<i64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| x as i64).collect())
            .collect();
        Self::from_i64_rows(&v)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn scale(&self, c: i64) -> IntMatrix {
        let c = BigInt::from(c);
        let data = self.data.iter().map(|x| x * &c).collect();
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// Stack `other` below `self`.
    pub fn stack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        IntMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Concatenate `other` to the right of `self`.
    pub fn hcat(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        let mut out = IntMatrix::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = 1i64;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                let Some(sw) = (k + 1..n).find(|&i| !m.get(i, k).is_zero()) else {
                    return BigInt::zero();
                };
                for j in 0..n {
                    let a = m.get(k, j).clone();
                    let b = m.get(sw, j).clone();
                    m.set(k, j, b);
                    m.set(sw, j, a);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j)) / &prev;
                    m.set(i, j, v);
                }
                m.set(i, k, BigInt::zero());
            }
            prev = m.get(k, k).clone();
        }
        m.get(n - 1, n - 1) * BigInt::from(sign)
    }

    /// Smith normal form with unimodular transforms.
    pub fn smith_normal_form(&self) -> Snf {
        let mut d = self.clone();
        let mut u = IntMatrix::identity(self.rows);
        let mut v = IntMatrix::identity(self.cols);
        let n = self.rows.min(self.cols);
        let mut t = 0usize;
        while t < n {
            // find a nonzero pivot of minimal absolute value in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..self.rows {
                for j in t..self.cols {
                    if !d.get(i, j).is_zero()
                        && best.map_or(true, |(bi, bj)| d.get(i, j).abs() < d.get(bi, bj).abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
            // clear row and column t
            let mut dirty = true;
            while dirty {
                dirty = false;
                for i in t + 1..self.rows {
                    if d.get(i, t).is_zero() {
                        continue;
                    }
                    let q = floor_quot(d.get(i, t), d.get(t, t));
                    if !q.is_zero() {
                        d.row_sub(i, t, &q);
                        u.row_sub(i, t, &q);
                    }
                    if !d.get(i, t).is_zero() {
                        d.swap_rows(t, i);
                        u.swap_rows(t, i);
                        dirty = true;
                    }
                }
                for j in t + 1..self.cols {
                    if d.get(t, j).is_zero() {
                        continue;
                    }
                    let q = floor_quot(d.get(t, j), d.get(t, t));
                    if !q.is_zero() {
                        d.col_sub(j, t, &q);
                        v.col_sub(j, t, &q);
                    }
                    if !d.get(t, j).is_zero() {
                        d.swap_cols(t, j);
                        v.swap_cols(t, j);
                        dirty = true;
                    }
                }
            }
            // enforce divisibility of the rest of the block by d[t][t]
            let mut fixed = false;
            'scan: for i in t + 1..self.rows {
                for j in t + 1..self.cols {
                    if !(d.get(i, j) % d.get(t, t)).is_zero() {
                        // add row i to row t and restart this position
                        d.row_add(t, i);
                        u.row_add(t, i);
                        fixed = true;
                        break 'scan;
                    }
                }
            }
            if fixed {
                continue; // re-run elimination at the same t
            }
            if d.get(t, t).is_negative() {
                d.negate_row(t);
                u.negate_row(t);
            }
            t += 1;
        }
        Snf { d, u, v }
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

    fn row_sub(&mut self, i: usize, k: usize, q: &BigInt) {
        for j in 0..self.cols {
            let v = self.get(i, j) - q * self.get(k, j);
            self.set(i, j, v);
        }
    }

    fn row_add(&mut self, i: usize, k: usize) {
        for j in 0..self.cols {
            let v = self.get(i, j) + self.get(k, j);
            self.set(i, j, v);
        }
    }

    fn col_sub(&mut self, j: usize, k: usize, q: &BigInt) {
        for i in 0..self.rows {
            let v = self.get(i, j) - q * self.get(i, k);
            self.set(i, j, v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }

    /// Nonzero diagonal entries of the SNF (the elementary divisors).
    pub fn elementary_divisors(&self) -> Vec<BigInt> {
        let snf = self.smith_normal_form();
        let n = self.rows.min(self.cols);
        (0..n)
            .map(|i| snf.d.get(i, i).clone())
            .filter(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.elementary_divisors().len()
    }

    /// Basis of the integer right kernel `{x : A x = 0}`, one basis vector
    /// per row of the result.
    pub fn kernel_basis(&self) -> IntMatrix {
        let snf = self.smith_normal_form();
        let r = self.rank();
        // D = U A V, so A (V e_i) = 0 exactly when D e_i = 0
        let mut basis = Vec::new();
        for i in r..self.cols {
            let mut v = Vec::with_capacity(self.cols);
            for row in 0..self.cols {
                v.push(snf.v.get(row, i).clone());
            }
            basis.push(v);
        }
        let mut out = IntMatrix::zeros(basis.len(), self.cols);
        for (i, v) in basis.into_iter().enumerate() {
            for (j, x) in v.into_iter().enumerate() {
                out.set(i, j, x);
            }
        }
        out
    }

    /// Does `c` lie in the column lattice of `self`? (Integer solvability
    /// of `A x = c`.)
    pub fn column_lattice_contains(&self, c: &[BigInt]) -> bool {
        assert_eq!(c.len(), self.rows);
        let snf = self.smith_normal_form();
        // A x = c  <=>  D y = U c with y = V^{-1} x
        let mut b = vec![BigInt::zero(); self.rows];
        for (i, bi) in b.iter_mut().enumerate() {
            for j in 0..self.rows {
                *bi += snf.u.get(i, j) * &c[j];
            }
        }
        let n = self.rows.min(self.cols);
        for (i, bi) in b.iter().enumerate() {
            if i < n && !snf.d.get(i, i).is_zero() {
                if !(bi % snf.d.get(i, i)).is_zero() {
                    return false;
                }
            } else if !bi.is_zero() {
                return false;
            }
        }
        true
    }
}

fn floor_quot(a: &BigInt, b: &BigInt) -> BigInt {
    // rounded quotient so remainders shrink fast
    let (q, r) = a.div_rem(b);
    if (&r + &r).abs() > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix {}x{}\n{}", self.rows, self.cols, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snf_already_chain() {
        let a = IntMatrix::from_i64_rows(&[vec![2, 0], vec![0, 4]]);
        let snf = a.smith_normal_form();
        assert_eq!(snf.d.get(0, 0), &BigInt::from(2));
        assert_eq!(snf.d.get(1, 1), &BigInt::from(4));
    }

    #[test]
    fn snf_coprime_diag() {
        let a = IntMatrix::from_i64_rows(&[vec![2, 0], vec![0, 3]]);
        let snf = a.smith_normal_form();
        assert_eq!(snf.d.get(0, 0), &BigInt::from(1));
        assert_eq!(snf.d.get(1, 1), &BigInt::from(6));
        // gcd/determinant invariants: d1 = gcd of entries, d1*d2 = |det|
        assert_eq!(a.det().abs(), BigInt::from(6));
    }

    #[test]
    fn snf_transforms_unimodular_and_consistent() {
        let cases = [
            vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]],
            vec![vec![1, 2], vec![3, 4]],
            vec![vec![0, 0], vec![0, 0]],
            vec![vec![6, 10, 15]],
        ];
        for rows in cases {
            let a = IntMatrix::from_i64_rows(&rows);
            let snf = a.smith_normal_form();
            assert_eq!(snf.u.det().abs(), BigInt::one(), "U not unimodular");
            assert_eq!(snf.v.det().abs(), BigInt::one(), "V not unimodular");
            assert_eq!(snf.u.mul(&a).mul(&snf.v), snf.d, "D != U A V");
            // divisor chain
            let divs = a.elementary_divisors();
            for w in divs.windows(2) {
                assert!((&w[1] % &w[0]).is_zero(), "divisor chain broken: {divs:?}");
            }
            // off-diagonal zero
            for i in 0..snf.d.rows() {
                for j in 0..snf.d.cols() {
                    if i != j {
                        assert!(snf.d.get(i, j).is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn kernel_annihilates() {
        let a = IntMatrix::from_i64_rows(&[vec![1, 2, 3], vec![2, 4, 6]]);
        let k = a.kernel_basis();
        assert_eq!(k.rows(), 2);
        for i in 0..k.rows() {
            for r in 0..a.rows() {
                let mut acc = BigInt::zero();
                for j in 0..a.cols() {
                    acc += a.get(r, j) * k.get(i, j);
                }
                assert!(acc.is_zero());
            }
        }
    }

    #[test]
    fn lattice_membership() {
        let a = IntMatrix::from_i64_rows(&[vec![2, 0], vec![0, 3]]);
        assert!(a.column_lattice_contains(&[BigInt::from(4), BigInt::from(9)]));
        assert!(!a.column_lattice_contains(&[BigInt::from(1), BigInt::from(0)]));
    }

    #[test]
    fn det_known() {
        let a = IntMatrix::from_i64_rows(&[vec![2, 1], vec![1, 2]]);
        assert_eq!(a.det(), BigInt::from(3));
        let b = IntMatrix::from_i64_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(b.det(), BigInt::from(-1));
    }
}
