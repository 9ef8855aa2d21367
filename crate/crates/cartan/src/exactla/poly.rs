//! Univariate polynomials over `F_p` and Berlekamp factorization.

use std::cmp::Ordering;
use std::fmt;

use crate::error::Error;
use crate::Result;

use super::fp::{FpMatrix, PrimeField};

/// Polynomial over `F_p`, coefficients stored lowest degree first with the
/// leading coefficient nonzero (the zero polynomial has an empty vector).
#[derive(Clone, PartialEq, Eq)]
pub struct FpPoly {
    field: PrimeField,
    coeffs: Vec<u64>,
}

impl FpPoly {
    pub fn zero(field: PrimeField) -> Self {
        FpPoly {
            field,
            coeffs: vec![],
        }
    }

    pub fn one(field: PrimeField) -> Self {
        FpPoly {
            field,
            coeffs: vec![1],
        }
    }

    pub fn x(field: PrimeField) -> Self {
        FpPoly {
            field,
            coeffs: vec![0, 1],
        }
    }

    pub fn constant(field: PrimeField, c: u64) -> Self {
        Self::from_coeffs(field, vec![c])
    }

    pub fn from_coeffs(field: PrimeField, coeffs: Vec<u64>) -> Self {
        let mut coeffs: Vec<u64> = coeffs.into_iter().map(|c| c % field.p()).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FpPoly { field, coeffs }
    }

    /// `X^m - 1`, the polynomial whose factorization controls cyclic group
    /// algebras.
    pub fn xm_minus_one(field: PrimeField, m: usize) -> Self {
        let mut c = vec![0u64; m + 1];
        c[0] = field.neg(1);
        c[m] = 1;
        Self::from_coeffs(field, c)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn add(&self, other: &FpPoly) -> FpPoly {
        let f = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| f.add(self.coeff(i), other.coeff(i)))
            .collect();
        FpPoly::from_coeffs(f, coeffs)
    }

    pub fn sub(&self, other: &FpPoly) -> FpPoly {
        let f = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| f.sub(self.coeff(i), other.coeff(i)))
            .collect();
        FpPoly::from_coeffs(f, coeffs)
    }

    pub fn scale(&self, c: u64) -> FpPoly {
        let f = self.field;
        FpPoly::from_coeffs(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &FpPoly) -> FpPoly {
        if self.is_zero() || other.is_zero() {
            return FpPoly::zero(self.field);
        }
        let f = self.field;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + a * b) % f.p();
            }
        }
        FpPoly::from_coeffs(f, out)
    }

    pub fn pow(&self, mut e: u32) -> FpPoly {
        let mut acc = FpPoly::one(self.field);
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

    /// Quotient and remainder; panics when dividing by zero.
    pub fn divrem(&self, div: &FpPoly) -> (FpPoly, FpPoly) {
        assert!(!div.is_zero(), "polynomial division by zero");
        let f = self.field;
        let dd = div.degree().unwrap();
        let lead_inv = f.inv(div.leading());
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let c = f.mul(*rem.last().unwrap(), lead_inv);
            if c != 0 {
                quot[k] = c;
                for (i, &dc) in div.coeffs.iter().enumerate() {
                    rem[k + i] = f.sub(rem[k + i], f.mul(c, dc));
                }
            }
            rem.pop();
            while rem.last() == Some(&0) {
                rem.pop();
            }
            if rem.len() <= dd {
                break;
            }
        }
        (FpPoly::from_coeffs(f, quot), FpPoly::from_coeffs(f, rem))
    }

    pub fn rem(&self, div: &FpPoly) -> FpPoly {
        self.divrem(div).1
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &FpPoly) -> FpPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> FpPoly {
        if self.is_zero() || self.leading() == 1 {
            return self.clone();
        }
        self.scale(self.field.inv(self.leading()))
    }

    pub fn derivative(&self) -> FpPoly {
        let f = self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(c, (i as u64) % f.p()))
            .collect();
        FpPoly::from_coeffs(f, coeffs)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let f = self.field;
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = f.add(f.mul(acc, x), c);
        }
        acc
    }

    /// Evaluate at a square matrix (Horner).
    pub fn eval_matrix(&self, m: &FpMatrix) -> FpMatrix {
        assert_eq!(m.rows(), m.cols());
        let n = m.rows();
        let mut acc = FpMatrix::zero(self.field, n, n);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(m);
            for i in 0..n {
                let v = self.field.add(acc.get(i, i), c);
                acc.set(i, i, v);
            }
        }
        acc
    }

    /// Companion matrix of a monic polynomial.
    pub fn companion(f: &FpPoly) -> FpMatrix {
        assert!(f.is_monic(), "companion matrix needs a monic polynomial");
        let n = f.degree().unwrap();
        let fld = f.field;
        let mut m = FpMatrix::zero(fld, n, n);
        for i in 1..n {
            m.set(i, i - 1, 1);
        }
        for i in 0..n {
            m.set(i, n - 1, fld.neg(f.coeff(i)));
        }
        m
    }

    /// Deterministic total order: by degree, then lexicographic on the
    /// coefficient vector. Used to make factorization output reproducible.
    pub fn cmp_key(&self, other: &FpPoly) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }

    /// Factor into monic irreducibles with exponents, deterministically.
    ///
    /// Berlekamp's algorithm (nullspace of Frobenius minus identity) on the
    /// squarefree parts; no randomness is involved, which is fine for the
    /// small primes this crate supports. Output is sorted by
    /// (degree, coefficients) and satisfies
    /// `leading * prod factor^exp == self` exactly.
    pub fn factor(&self) -> Result<Vec<(FpPoly, u32)>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut factors: Vec<(FpPoly, u32)> = Vec::new();
        squarefree_decompose(&self.monic(), 1, &mut factors)?;
        // merge duplicates, then sort deterministically
        factors.sort_by(|a, b| a.0.cmp_key(&b.0));
        let mut merged: Vec<(FpPoly, u32)> = Vec::new();
        for (f, e) in factors {
            match merged.last_mut() {
                Some((g, ge)) if *g == f => *ge += e,
                _ => merged.push((f, e)),
            }
        }
        // exact round-trip sanity
        let mut prod = FpPoly::constant(self.field, self.leading());
        for (f, e) in &merged {
            prod = prod.mul(&f.pow(*e));
        }
        debug_assert_eq!(&prod, self, "factorization round-trip failed");
        Ok(merged)
    }
}

/// Squarefree decomposition in characteristic p: peel off gcd(f, f') parts
/// and take p-th roots of the purely inseparable remainder (over F_p the
/// p-th root of a coefficient is the coefficient itself).
fn squarefree_decompose(f: &FpPoly, mult: u32, out: &mut Vec<(FpPoly, u32)>) -> Result<()> {
    let fld = f.field();
    let p = fld.p();
    if f.degree() == Some(0) {
        return Ok(());
    }
    let deriv = f.derivative();
    if deriv.is_zero() {
        // f = g(X^p): take the p-th root and recurse with multiplicity * p
        let deg = f.degree().unwrap();
        debug_assert_eq!(deg % p as usize, 0);
        let root_coeffs: Vec<u64> = (0..=deg / p as usize)
            .map(|i| f.coeff(i * p as usize))
            .collect();
        let root = FpPoly::from_coeffs(fld, root_coeffs);
        return squarefree_decompose(&root, mult * p as u32, out);
    }
    let mut c = f.gcd(&deriv);
    let mut w = f.divrem(&c).0;
    // w holds the product of factors with multiplicity not divisible by p
    let mut i = 1u32;
    while w.degree() != Some(0) {
        let y = w.gcd(&c);
        let piece = w.divrem(&y).0;
        if piece.degree() != Some(0) {
            for g in berlekamp_squarefree(&piece)? {
                out.push((g, mult * i));
            }
        }
        c = c.divrem(&y).0;
        w = y;
        i += 1;
    }
    if c.degree() != Some(0) {
        // remaining part is a p-th power
        squarefree_decompose(&c, mult, out)?;
    }
    Ok(())
}

/// Berlekamp on a monic squarefree polynomial: returns its monic
/// irreducible factors.
fn berlekamp_squarefree(f: &FpPoly) -> Result<Vec<FpPoly>> {
    let fld = f.field();
    let p = fld.p();
    let n = f.degree().unwrap();
    if n == 1 {
        return Ok(vec![f.clone()]);
    }
    // Q[i] = X^{i p} mod f, as rows; Berlekamp subalgebra = ker(Q - I)
    let xp = {
        // X^p mod f by square-and-multiply on polynomials
        let mut acc = FpPoly::one(fld);
        let x = FpPoly::x(fld);
        let mut e = p;
        let mut base = x.rem(f);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(f);
            }
            base = base.mul(&base).rem(f);
            e >>= 1;
        }
        acc
    };
    let mut q_rows: Vec<Vec<u64>> = Vec::with_capacity(n);
    let mut cur = FpPoly::one(fld);
    for _ in 0..n {
        let mut row = vec![0u64; n];
        for (j, &c) in cur.coeffs().iter().enumerate() {
            row[j] = c;
        }
        q_rows.push(row);
        cur = cur.mul(&xp).rem(f);
    }
    // we want v with v*Q = v, i.e. (Q^T - I) v = 0
    let mut qt = FpMatrix::from_rows(fld, &q_rows).transpose();
    for i in 0..n {
        let v = fld.sub(qt.get(i, i), 1);
        qt.set(i, i, v);
    }
    let kernel = qt.nullspace();
    let r = kernel.rows();
    if r == 1 {
        return Ok(vec![f.clone()]);
    }
    let mut factors = vec![f.clone()];
    'outer: for bi in 0..r {
        let h = FpPoly::from_coeffs(fld, kernel.row(bi).to_vec());
        if h.degree().map_or(true, |d| d == 0) {
            continue; // constant vector splits nothing
        }
        let mut next: Vec<FpPoly> = Vec::new();
        for g in factors.drain(..) {
            if g.degree() == Some(1) || factors_done(&next, r) {
                next.push(g);
                continue;
            }
            let mut pieces = Vec::new();
            let mut rest = g.clone();
            for c in 0..p {
                if rest.degree() == Some(0) {
                    break;
                }
                let d = rest.gcd(&h.sub(&FpPoly::constant(fld, c)));
                if d.degree().map_or(false, |deg| deg >= 1) {
                    rest = rest.divrem(&d).0;
                    pieces.push(d);
                }
            }
            if rest.degree().map_or(false, |deg| deg >= 1) {
                pieces.push(rest.monic());
            }
            next.extend(pieces);
        }
        factors = next;
        if factors.len() == r {
            break 'outer;
        }
    }
    debug_assert_eq!(factors.len(), r, "Berlekamp did not fully split");
    Ok(factors.into_iter().map(|g| g.monic()).collect())
}

fn factors_done(acc: &[FpPoly], target: usize) -> bool {
    acc.len() >= target
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let t = match i {
                0 => format!("{c}"),
                1 if c == 1 => "X".to_string(),
                1 => format!("{c}*X"),
                _ if c == 1 => format!("X^{i}"),
                _ => format!("{c}*X^{i}"),
            };
            terms.push(t);
        }
        write!(f, "{}", terms.join(" + "))
    }
}

impl fmt::Debug for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {}", self, self.field)
    }
}
