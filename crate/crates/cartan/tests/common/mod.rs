#![allow(dead_code)] // each test binary uses a different subset of the oracles

//! Brute-force reference oracles used by the integration tests. These are
//! deliberately independent of the library's search-based algorithms:
//! subspaces are enumerated exhaustively, ranks come from minor expansion,
//! and composition series are found by scanning every invariant subspace.

use std::sync::Arc;

use cartan::exactla::{FpMatrix, PrimeField};
use cartan::groupalg::GroupAlgebra;
use cartan::modrep::RepModule;

/// All subspaces of `F_p^dim`, each as a reduced-row-echelon basis matrix
/// (the zero subspace is the 0 x dim matrix). Enumerates rref patterns
/// directly, so each subspace appears exactly once.
pub fn all_subspaces(field: PrimeField, dim: usize) -> Vec<FpMatrix> {
    let p = field.p();
    assert!(
        (p == 2 && dim <= 9) || (p == 3 && dim <= 6) || (p == 5 && dim <= 5) || dim <= 3,
        "subspace enumeration budget exceeded: p={p}, dim={dim}"
    );
    let mut out = vec![FpMatrix::zero(field, 0, dim)];
    for k in 1..=dim {
        for pivots in combinations(dim, k) {
            // free positions: (row i, column c) with c not a pivot and c > pivots[i]
            let mut free = Vec::new();
            for (i, &pi) in pivots.iter().enumerate() {
                for c in pi + 1..dim {
                    if !pivots.contains(&c) {
                        free.push((i, c));
                    }
                }
            }
            let total = p.pow(free.len() as u32);
            for code in 0..total {
                let mut m = FpMatrix::zero(field, k, dim);
                for (i, &pi) in pivots.iter().enumerate() {
                    m.set(i, pi, 1);
                }
                let mut c = code;
                for &(i, col) in &free {
                    m.set(i, col, c % p);
                    c /= p;
                }
                out.push(m);
            }
        }
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn in_row_span(basis: &FpMatrix, v: &[u64]) -> bool {
    // basis is in rref; eliminate and check for a zero residual
    let f = basis.field();
    let mut v = v.to_vec();
    for i in 0..basis.rows() {
        let row = basis.row(i);
        let Some(pc) = row.iter().position(|&x| x != 0) else {
            continue;
        };
        let c = v[pc];
        if c != 0 {
            for (x, &r) in v.iter_mut().zip(row) {
                *x = f.sub(*x, f.mul(c, r));
            }
        }
    }
    v.iter().all(|&x| x == 0)
}

fn is_invariant(m: &RepModule, basis: &FpMatrix) -> bool {
    for a in m.actions() {
        for i in 0..basis.rows() {
            let w = a.mul_vec(basis.row(i));
            if !in_row_span(basis, &w) {
                return false;
            }
        }
    }
    true
}

/// All invariant subspaces (submodules) of a module, by exhaustive scan.
pub fn invariant_subspaces(m: &RepModule) -> Vec<FpMatrix> {
    let field = m
        .actions()
        .first()
        .map(|a| a.field())
        .expect("module needs actions");
    all_subspaces(field, m.dim())
        .into_iter()
        .filter(|b| is_invariant(m, b))
        .collect()
}

/// Composition multiset of a module computed without the MeatAxe: find a
/// minimal nonzero invariant subspace by exhaustive enumeration, record
/// its isomorphism class against the registry, and recurse on the
/// quotient.
pub fn oracle_chop(alg: &Arc<GroupAlgebra>, m: &RepModule) -> Vec<u64> {
    let simples = alg.simples().expect("registry");
    let mut counts = vec![0u64; simples.len()];
    let mut current = m.clone();
    loop {
        if current.dim() == 0 {
            return counts;
        }
        let subs = invariant_subspaces(&current);
        let minimal = subs
            .iter()
            .filter(|b| b.rows() > 0)
            .min_by_key(|b| b.rows())
            .expect("nonzero module has a minimal submodule");
        let spun = alg.spin(&current, &minimal.row_vecs());
        assert_eq!(
            spun.module.dim(),
            minimal.rows(),
            "minimal subspace must be invariant"
        );
        let mut identified = false;
        for s in &simples {
            if s.dim == spun.module.dim()
                && alg
                    .are_isomorphic_simples(&spun.module, &alg.simple_module(s.id).unwrap())
                    .unwrap()
            {
                counts[s.id] += 1;
                identified = true;
                break;
            }
        }
        assert!(identified, "oracle factor not in the registry");
        current = alg.quotient_module(&current, &spun.basis);
    }
}

/// Rank by brute-force minor expansion: the largest k with a nonsingular
/// k x k minor. Determinants are computed by Laplace expansion.
pub fn rank_by_minors(m: &FpMatrix) -> usize {
    let f = m.field();
    let max = m.rows().min(m.cols());
    for k in (1..=max).rev() {
        for rows in combinations(m.rows(), k) {
            for cols in combinations(m.cols(), k) {
                let mut minor = FpMatrix::zero(f, k, k);
                for (i, &r) in rows.iter().enumerate() {
                    for (j, &c) in cols.iter().enumerate() {
                        minor.set(i, j, m.get(r, c));
                    }
                }
                if laplace_det(&minor) != 0 {
                    return k;
                }
            }
        }
    }
    0
}

fn laplace_det(m: &FpMatrix) -> u64 {
    let f = m.field();
    let n = m.rows();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m.get(0, 0);
    }
    let mut acc = 0u64;
    for j in 0..n {
        let a = m.get(0, j);
        if a == 0 {
            continue;
        }
        let mut sub = FpMatrix::zero(f, n - 1, n - 1);
        for i in 1..n {
            let mut cc = 0;
            for c in 0..n {
                if c == j {
                    continue;
                }
                sub.set(i - 1, cc, m.get(i, c));
                cc += 1;
            }
        }
        let term = f.mul(a, laplace_det(&sub));
        acc = if j % 2 == 0 {
            f.add(acc, term)
        } else {
            f.sub(acc, term)
        };
    }
    acc
}
