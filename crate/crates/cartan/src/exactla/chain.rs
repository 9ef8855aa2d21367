//! Chain rings `Z/p^n` and `F_p[t]/(t^m)` and Howell normal forms.
//!
//! Both rings are local with maximal ideal generated by a uniformizer `u`
//! (the prime `p`, resp. `t`) and composition length `len` over themselves.
//! Elements are encoded as a single `u64` in `[0, p^len)`: for `Z/p^n` the
//! canonical residue, for `F_p[t]/(t^m)` the base-`p` digit vector of the
//! coefficients. Under this encoding the uniformizer is the integer `p` in
//! both cases, valuations read off base-`p` digits, and division with
//! remainder by `u^k` is integer div/mod by `p^k`; only addition and
//! multiplication differ between the two kinds.

use std::fmt;

use crate::error::Error;
use crate::Result;

use super::fp::{is_prime, FpMatrix, PrimeField};

/// Which chain ring: integers mod `p^n`, or truncated polynomials
/// `F_p[t]/(t^m)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum ChainKind {
    ZmodPN,
    TruncPoly,
}

/// A local artinian chain ring of length `len` with residue field `F_p`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ChainRing {
    kind: ChainKind,
    p: u64,
    len: u32,
    modulus: u64, // p^len
}

impl fmt::Debug for ChainRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ChainRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ChainKind::ZmodPN => write!(f, "Z/{}^{}", self.p, self.len),
            ChainKind::TruncPoly => write!(f, "F{}[t]/t^{}", self.p, self.len),
        }
    }
}

impl ChainRing {
    pub fn new(kind: ChainKind, p: u64, len: u32) -> Result<Self> {
        if !(2..=61).contains(&p) || !is_prime(p) {
            return Err(Error::BadPrime(p));
        }
        if len == 0 {
            return Err(Error::CoeffSyntax("chain ring length must be >= 1".into()));
        }
        // keep p^len comfortably inside u64 products
        let mut modulus: u64 = 1;
        for _ in 0..len {
            modulus = modulus
                .checked_mul(p)
                .filter(|&m| m <= 1 << 31)
                .ok_or_else(|| Error::CoeffSyntax(format!("{p}^{len} is too large")))?;
        }
        Ok(ChainRing {
            kind,
            p,
            len,
            modulus,
        })
    }

    pub fn zmod(p: u64, n: u32) -> Result<Self> {
        Self::new(ChainKind::ZmodPN, p, n)
    }

    pub fn trunc_poly(p: u64, m: u32) -> Result<Self> {
        Self::new(ChainKind::TruncPoly, p, m)
    }

    pub fn kind(&self) -> ChainKind {
        self.kind
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Composition length `t` of the ring over itself.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> u32 {
        self.len
    }

    pub fn size(&self) -> u64 {
        self.modulus
    }

    pub fn residue_field(&self) -> PrimeField {
        PrimeField::new(self.p).expect("p validated at construction")
    }

    /// The uniformizer (p resp. t); encoding is `p` for both kinds.
    pub fn uniformizer(&self) -> u64 {
        if self.len == 1 {
            0 // the maximal ideal is zero in a field
        } else {
            self.p
        }
    }

    pub fn zero(&self) -> u64 {
        0
    }

    pub fn one(&self) -> u64 {
        1
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        match self.kind {
            ChainKind::ZmodPN => (a + b) % self.modulus,
            ChainKind::TruncPoly => {
                let mut out = 0u64;
                let mut mult = 1u64;
                let (mut a, mut b) = (a, b);
                for _ in 0..self.len {
                    out += ((a + b) % self.p) * mult;
                    a /= self.p;
                    b /= self.p;
                    mult *= self.p;
                }
                out
            }
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        match self.kind {
            ChainKind::ZmodPN => {
                if a == 0 {
                    0
                } else {
                    self.modulus - a
                }
            }
            ChainKind::TruncPoly => {
                let mut out = 0u64;
                let mut mult = 1u64;
                let mut a = a;
                for _ in 0..self.len {
                    let d = a % self.p;
                    out += (if d == 0 { 0 } else { self.p - d }) * mult;
                    a /= self.p;
                    mult *= self.p;
                }
                out
            }
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        match self.kind {
            ChainKind::ZmodPN => (a * b) % self.modulus,
            ChainKind::TruncPoly => {
                // truncated convolution of base-p digits
                let mut ad = [0u64; 32];
                let mut bd = [0u64; 32];
                let (mut a, mut b) = (a, b);
                let n = self.len as usize;
                for i in 0..n {
                    ad[i] = a % self.p;
                    bd[i] = b % self.p;
                    a /= self.p;
                    b /= self.p;
                }
                let mut out = 0u64;
                let mut mult = 1u64;
                for k in 0..n {
                    let mut acc = 0u64;
                    for i in 0..=k {
                        acc += ad[i] * bd[k - i];
                    }
                    out += (acc % self.p) * mult;
                    mult *= self.p;
                }
                out
            }
        }
    }

    /// u-adic valuation in `0..=len` (the zero element has valuation `len`).
    #[inline]
    pub fn val(&self, a: u64) -> u32 {
        if a == 0 {
            return self.len;
        }
        let mut v = 0;
        let mut a = a;
        while a % self.p == 0 {
            v += 1;
            a /= self.p;
        }
        v
    }

    pub fn is_unit(&self, a: u64) -> bool {
        a % self.p != 0
    }

    /// Image in the residue field `F_p`.
    #[inline]
    pub fn residue(&self, a: u64) -> u64 {
        a % self.p
    }

    /// Canonical lift of a residue-field element.
    pub fn lift(&self, a: u64) -> u64 {
        a % self.p
    }

    /// `u^k` as a ring element.
    pub fn uniformizer_pow(&self, k: u32) -> u64 {
        if k >= self.len {
            return 0;
        }
        let mut x = 1u64;
        for _ in 0..k {
            x *= self.p;
        }
        x
    }

    /// Multiplicative inverse of a unit.
    pub fn inv_unit(&self, a: u64) -> u64 {
        assert!(self.is_unit(a), "inverse of a non-unit in {self}");
        match self.kind {
            ChainKind::ZmodPN => {
                // lift the F_p inverse by Newton iteration x -> x(2 - ax)
                let f = self.residue_field();
                let mut x = f.inv(a % self.p);
                loop {
                    let ax = self.mul(a, x);
                    if ax == 1 {
                        return x;
                    }
                    x = self.mul(x, self.sub(2, ax));
                }
            }
            ChainKind::TruncPoly => {
                // power series inversion digit by digit
                let f = self.residue_field();
                let n = self.len as usize;
                let mut ad = vec![0u64; n];
                let mut aa = a;
                for d in ad.iter_mut() {
                    *d = aa % self.p;
                    aa /= self.p;
                }
                let c0_inv = f.inv(ad[0]);
                let mut inv = vec![0u64; n];
                inv[0] = c0_inv;
                for k in 1..n {
                    let mut acc = 0u64;
                    for i in 1..=k {
                        acc = f.add(acc, f.mul(ad[i], inv[k - i]));
                    }
                    inv[k] = f.mul(c0_inv, f.neg(acc));
                }
                let mut out = 0u64;
                let mut mult = 1u64;
                for d in inv {
                    out += d * mult;
                    mult *= self.p;
                }
                out
            }
        }
    }

    /// Exact division `a / b` when `val(a) >= val(b)`.
    pub fn divide_exact(&self, a: u64, b: u64) -> u64 {
        assert!(b != 0, "division by zero in {self}");
        let vb = self.val(b);
        debug_assert!(self.val(a) >= vb, "inexact chain-ring division");
        // strip u^vb from both; this is div by p^vb on encodings for both kinds
        let pk = {
            let mut x = 1u64;
            for _ in 0..vb {
                x *= self.p;
            }
            x
        };
        let a_strip = a / pk;
        let b_unit = b / pk;
        self.mul(a_strip, self.inv_unit(b_unit))
    }

    /// Canonical residue of `a` modulo the ideal `(u^k)`; integer `% p^k`
    /// under the encoding, for both kinds.
    #[inline]
    pub fn rem_upow(&self, a: u64, k: u32) -> u64 {
        if k >= self.len {
            return a;
        }
        let mut pk = 1u64;
        for _ in 0..k {
            pk *= self.p;
        }
        a % pk
    }

    /// Quotient of `a` by `u^k` discarding the remainder digits (exact when
    /// `val(a) >= k`); note the result is `a div p^k` for both kinds.
    #[inline]
    pub fn quot_upow(&self, a: u64, k: u32) -> u64 {
        let mut pk = 1u64;
        for _ in 0..k.min(self.len) {
            pk *= self.p;
        }
        a / pk
    }

    /// All ring elements, in encoding order (small rings only; used by
    /// exhaustive oracles and span enumeration).
    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.modulus
    }
}

/// Dense row-major matrix over a chain ring.
#[derive(Clone, PartialEq, Eq)]
pub struct ChainMatrix {
    ring: ChainRing,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl ChainMatrix {
    pub fn zero(ring: ChainRing, rows: usize, cols: usize) -> Self {
        ChainMatrix {
            ring,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(ring: ChainRing, n: usize) -> Self {
        let mut m = Self::zero(ring, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(ring: ChainRing, rows: &[Vec<u64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            for &x in row {
                assert!(
                    x < ring.size(),
                    "entry {x} not a canonical residue in {ring}"
                );
                data.push(x);
            }
        }
        ChainMatrix {
            ring,
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn ring(&self) -> ChainRing {
        self.ring
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
        debug_assert!(v < self.ring.size());
        self.data[i * self.cols + j] = v;
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

    pub fn transpose(&self) -> ChainMatrix {
        let mut t = ChainMatrix::zero(self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn add(&self, other: &ChainMatrix) -> ChainMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| self.ring.add(a, b))
            .collect();
        ChainMatrix {
            ring: self.ring,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &ChainMatrix) -> ChainMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| self.ring.sub(a, b))
            .collect();
        ChainMatrix {
            ring: self.ring,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, c: u64) -> ChainMatrix {
        let data = self.data.iter().map(|&a| self.ring.mul(a, c)).collect();
        ChainMatrix {
            ring: self.ring,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn mul(&self, other: &ChainMatrix) -> ChainMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = ChainMatrix::zero(self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = self
                        .ring
                        .add(out.get(i, j), self.ring.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![0u64; self.rows];
        for (i, oi) in out.iter_mut().enumerate() {
            let mut acc = 0u64;
            for j in 0..self.cols {
                acc = self.ring.add(acc, self.ring.mul(self.get(i, j), v[j]));
            }
            *oi = acc;
        }
        out
    }

    /// Entrywise reduction to the residue field.
    pub fn reduce_mod_max(&self) -> FpMatrix {
        let f = self.ring.residue_field();
        let data: Vec<u64> = self.data.iter().map(|&x| self.ring.residue(x)).collect();
        FpMatrix::from_flat(f, self.rows, self.cols, data)
    }

    /// Canonical lift of an `F_p` matrix.
    pub fn lift_from_residue(ring: ChainRing, m: &FpMatrix) -> ChainMatrix {
        let rows: Vec<Vec<u64>> = (0..m.rows())
            .map(|i| m.row(i).iter().map(|&x| ring.lift(x)).collect())
            .collect();
        ChainMatrix::from_rows(ring, &rows)
    }

    /// Howell normal form of the row span. Canonical: two matrices have the
    /// same row span (as an R-submodule of R^cols) iff their Howell forms
    /// are identical.
    pub fn howell(&self) -> ChainMatrix {
        HowellBuilder::new(self.ring, self.cols)
            .insert_all(self.row_vecs())
            .finish()
    }

    /// Basis rows spanning `{x : self * x = 0}` (right kernel).
    pub fn kernel(&self) -> ChainMatrix {
        // relations among the columns: Howell of [A^T | I], rows whose
        // A^T-part vanished carry the relation in their I-part
        let at = self.transpose();
        let n = at.rows; // = self.cols
        let m = at.cols; // = self.rows
        let mut aug_rows = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = at.row(i).to_vec();
            let mut id = vec![0u64; n];
            id[i] = 1;
            row.extend(id);
            aug_rows.push(row);
        }
        let aug = ChainMatrix::from_rows(self.ring, &aug_rows).howell();
        let mut kernel_rows = Vec::new();
        for i in 0..aug.rows {
            if aug.row(i)[..m].iter().all(|&x| x == 0) {
                kernel_rows.push(aug.row(i)[m..].to_vec());
            }
        }
        if kernel_rows.is_empty() {
            ChainMatrix::zero(self.ring, 0, n)
        } else {
            ChainMatrix::from_rows(self.ring, &kernel_rows).howell()
        }
    }

    /// Is `v` in the row span? (Requires `self` in Howell form.)
    pub fn howell_span_contains(&self, v: &[u64]) -> bool {
        self.howell_reduce(v).iter().all(|&x| x == 0)
    }

    /// Reduce `v` against a Howell-form matrix, returning the residual.
    pub fn howell_reduce(&self, v: &[u64]) -> Vec<u64> {
        let ring = self.ring;
        let mut v = v.to_vec();
        for i in 0..self.rows {
            let row = self.row(i);
            let Some(pc) = row.iter().position(|&x| x != 0) else {
                continue;
            };
            if v[pc] == 0 {
                continue;
            }
            let pv = ring.val(row[pc]);
            if ring.val(v[pc]) >= pv {
                let q = ring.quot_upow(v[pc], pv); // row pivot is exactly u^pv
                for (vj, &rj) in v.iter_mut().zip(row) {
                    *vj = ring.sub(*vj, ring.mul(q, rj));
                }
            }
        }
        v
    }
}

/// Incremental Howell-form builder: at most one stored row per pivot
/// column, each with pivot normalized to a power of the uniformizer.
pub(crate) struct HowellBuilder {
    ring: ChainRing,
    cols: usize,
    slots: Vec<Option<Vec<u64>>>,
}

impl HowellBuilder {
    pub fn new(ring: ChainRing, cols: usize) -> Self {
        HowellBuilder {
            ring,
            cols,
            slots: vec![None; cols],
        }
    }

    pub fn insert_all(mut self, rows: Vec<Vec<u64>>) -> Self {
        for r in rows {
            self.insert(r);
        }
        self
    }

    /// Insert a row, maintaining the Howell invariants. Returns true if the
    /// span grew.
    pub fn insert(&mut self, mut r: Vec<u64>) -> bool {
        let ring = self.ring;
        let t = ring.len();
        loop {
            let Some(j) = r.iter().position(|&x| x != 0) else {
                return false;
            };
            let v = ring.val(r[j]);
            match &self.slots[j] {
                None => {
                    // normalize pivot to u^v
                    let unit = ring.quot_upow(r[j], v);
                    let inv = ring.inv_unit(unit);
                    for x in r.iter_mut() {
                        *x = ring.mul(*x, inv);
                    }
                    let completion: Option<Vec<u64>> = if v > 0 {
                        let c = ring.uniformizer_pow(t - v);
                        Some(r.iter().map(|&x| ring.mul(x, c)).collect())
                    } else {
                        None
                    };
                    self.slots[j] = Some(r);
                    if let Some(c) = completion {
                        self.insert(c);
                    }
                    return true;
                }
                Some(s) => {
                    let w = ring.val(s[j]);
                    if v >= w {
                        // eliminate with the stored row (pivot is exactly u^w)
                        let q = ring.quot_upow(r[j], w);
                        let s = s.clone();
                        for (x, &sx) in r.iter_mut().zip(&s) {
                            *x = ring.sub(*x, ring.mul(q, sx));
                        }
                        // loop continues with the reduced row
                    } else {
                        // new row has the better pivot: swap it in
                        let unit = ring.quot_upow(r[j], v);
                        let inv = ring.inv_unit(unit);
                        for x in r.iter_mut() {
                            *x = ring.mul(*x, inv);
                        }
                        let old = self.slots[j].replace(r.clone()).unwrap();
                        if v > 0 {
                            let c = ring.uniformizer_pow(t - v);
                            self.insert(r.iter().map(|&x| ring.mul(x, c)).collect());
                        }
                        self.insert(old);
                        return true;
                    }
                }
            }
        }
    }

    /// Finalize: reduce entries above each pivot to canonical residues and
    /// emit rows in pivot-column order.
    pub fn finish(mut self) -> ChainMatrix {
        let ring = self.ring;
        let occupied: Vec<usize> = (0..self.cols)
            .filter(|&j| self.slots[j].is_some())
            .collect();
        // back-reduce left-to-right: a reduction at column j only touches
        // columns >= j, so pivot columns already canonicalized stay fixed
        for idx in 0..occupied.len() {
            let j = occupied[idx];
            let pivot_row = self.slots[j].clone().unwrap();
            let w = ring.val(pivot_row[j]);
            for &j2 in &occupied[..idx] {
                let row = self.slots[j2].as_mut().unwrap();
                // canonical residue mod u^w: subtract (row[j] div u^w) * pivot_row
                let q = ring.quot_upow(row[j], w);
                if q != 0 {
                    for (x, &px) in row.iter_mut().zip(&pivot_row) {
                        *x = ring.sub(*x, ring.mul(q, px));
                    }
                }
            }
        }
        let rows: Vec<Vec<u64>> = occupied
            .into_iter()
            .map(|j| self.slots[j].take().unwrap())
            .collect();
        if rows.is_empty() {
            ChainMatrix::zero(ring, 0, self.cols)
        } else {
            ChainMatrix::from_rows(ring, &rows)
        }
    }
}

impl fmt::Display for ChainMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for ChainMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ChainMatrix {}x{} over {}\n{}",
            self.rows, self.cols, self.ring, self
        )
    }
}
