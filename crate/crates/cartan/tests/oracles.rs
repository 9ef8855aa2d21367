//! Cross-checks of the search-based algorithms against exhaustive oracles.

mod common;

use std::sync::Arc;

use cartan::exactla::{FpMatrix, PrimeField};
use cartan::groupalg::GroupAlgebra;
use cartan::groups::Group;

use common::{invariant_subspaces, oracle_chop, rank_by_minors};

fn algebra(spec: &str, p: u64) -> Arc<GroupAlgebra> {
    GroupAlgebra::new(Group::parse(spec).unwrap(), PrimeField::new(p).unwrap())
}

#[test]
fn rref_rank_matches_minor_expansion() {
    let f = PrimeField::new(3).unwrap();
    let mut st = 42u64;
    let mut next = || {
        st = st
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (st >> 33) % 3
    };
    for _ in 0..10 {
        let rows: Vec<Vec<u64>> = (0..5).map(|_| (0..5).map(|_| next()).collect()).collect();
        let m = FpMatrix::from_rows(f, &rows);
        assert_eq!(m.rank(), rank_by_minors(&m));
    }
}

#[test]
fn radical_f3s3_by_exhaustive_annihilators() {
    // intersect the annihilators of all minimal submodules of the regular
    // module, found by exhaustive subspace scan
    let alg = algebra("S3", 3);
    let reg = alg.regular_module();
    let subs = invariant_subspaces(&reg);
    let minimal: Vec<_> = subs
        .iter()
        .filter(|b| {
            b.rows() > 0
                && !subs
                    .iter()
                    .any(|c| c.rows() > 0 && c.rows() < b.rows() && contained_in(c, b))
        })
        .collect();
    // constraint: a acts as zero on every minimal submodule
    let acts = alg.all_element_actions(&reg);
    let n = 6;
    let mut rows: Vec<Vec<u64>> = Vec::new();
    for w in &minimal {
        let spun = alg.spin(&reg, &w.row_vecs());
        let sub_actions: Vec<FpMatrix> = (0..n)
            .map(|g| {
                // action of basis element g on the minimal submodule, in its coords
                let full = &acts[g];
                let k = spun.basis.rows();
                let mut m = FpMatrix::zero(alg.field(), k, k);
                for j in 0..k {
                    let img = full.mul_vec(spun.basis.row(j));
                    // coordinates in the rref basis = values at pivot columns
                    let pivots: Vec<usize> = (0..k)
                        .map(|r| spun.basis.row(r).iter().position(|&x| x != 0).unwrap())
                        .collect();
                    for (i, &pc) in pivots.iter().enumerate() {
                        m.set(i, j, img[pc]);
                    }
                }
                m
            })
            .collect();
        let d = spun.basis.rows();
        for i in 0..d {
            for j in 0..d {
                rows.push((0..n).map(|g| sub_actions[g].get(i, j)).collect());
            }
        }
    }
    let oracle_rad = FpMatrix::from_rows(alg.field(), &rows)
        .nullspace()
        .rref()
        .mat;
    let oracle_dim = (0..oracle_rad.rows())
        .filter(|&i| oracle_rad.row(i).iter().any(|&x| x != 0))
        .count();
    assert_eq!(oracle_dim, 4, "dim rad F_3[S3] = 6 - 2");
    let rad = alg.radical().unwrap();
    assert_eq!(rad.dim(), 4);
    // same subspace: each radical basis vector is annihilated by the oracle system
    for i in 0..rad.basis().rows() {
        let v = rad.basis().row(i);
        assert!(in_span(&oracle_rad, v));
    }
}

fn contained_in(small: &FpMatrix, big: &FpMatrix) -> bool {
    (0..small.rows()).all(|i| in_span(big, small.row(i)))
}

fn in_span(basis: &FpMatrix, v: &[u64]) -> bool {
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

#[test]
fn radical_f2c2_unique_proper_ideal() {
    // exhaustive: the only proper nonzero submodule of the regular module
    // is the span of 1 + s, and that is the radical
    let alg = algebra("C2", 2);
    let reg = alg.regular_module();
    let subs = invariant_subspaces(&reg);
    let proper: Vec<_> = subs.iter().filter(|b| b.rows() == 1).collect();
    assert_eq!(proper.len(), 1);
    assert_eq!(proper[0].row(0), &[1, 1]);
    let rad = alg.radical().unwrap();
    assert_eq!(rad.dim(), 1);
    assert_eq!(rad.basis().row(0), &[1, 1]);
}

#[test]
fn chop_matches_oracle_f2c3() {
    let alg = algebra("C3", 2);
    let reg = alg.regular_module();
    let fast = alg.chop(&reg, 1).unwrap();
    let slow = oracle_chop(&alg, &reg);
    assert_eq!(fast.counts(), slow.as_slice());
    assert_eq!(slow, vec![1, 1]);
}

#[test]
fn chop_matches_oracle_fpcp() {
    for p in [2u64, 3, 5] {
        let alg = algebra(&format!("C{p}"), p);
        let reg = alg.regular_module();
        let fast = alg.chop(&reg, 1).unwrap();
        let slow = oracle_chop(&alg, &reg);
        assert_eq!(fast.counts(), slow.as_slice(), "F_{p}[C_{p}]");
        assert_eq!(slow, vec![p]);
    }
}

#[test]
fn cartan_f3s3_rows_match_oracle() {
    // chop both PIMs of F_3[S3] (dimension 3 each) with the exhaustive
    // oracle and compare with the Cartan rows
    let alg = algebra("S3", 3);
    let c = cartan::grothendieck::cartan_matrix(&alg, 1).unwrap();
    let pims = alg.pims(1).unwrap();
    for (i, pim) in pims.iter().enumerate() {
        let slow = oracle_chop(&alg, &pim.module);
        for (j, &count) in slow.iter().enumerate() {
            assert_eq!(
                c.matrix.get(i, j),
                &num_bigint::BigInt::from(count),
                "Cartan entry ({i},{j})"
            );
        }
    }
}

#[test]
fn howell_membership_spec_example() {
    use cartan::exactla::{ChainMatrix, ChainRing};
    let r = ChainRing::zmod(2, 2).unwrap();
    let m = ChainMatrix::from_rows(r, &[vec![1, 1], vec![0, 2]]).howell();
    // exhaustive span over all 16 coefficient pairs
    let mut span = std::collections::BTreeSet::new();
    for a in 0..4u64 {
        for b in 0..4u64 {
            span.insert(vec![
                r.add(r.mul(a, 1), r.mul(b, 0)),
                r.add(r.mul(a, 1), r.mul(b, 2)),
            ]);
        }
    }
    for v in 0..4u64 {
        for w in 0..4u64 {
            assert_eq!(m.howell_span_contains(&[v, w]), span.contains(&vec![v, w]));
        }
    }
}
