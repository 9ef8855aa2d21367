//! `K_0` and `G_0` as explicit integer lattices, the Cartan map as an
//! integer matrix, restriction/induction as lattice maps, the projection
//! formula, and the Artin-induction exponent bound.
//!
//! Both lattices are indexed by the canonical simple order of the
//! algebra's registry; `K_0` is aligned with `G_0` index-by-index through
//! the heads of the projective indecomposables, so the Cartan matrix needs
//! no basis bookkeeping beyond that.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::exactla::IntMatrix;
use crate::groupalg::GroupAlgebra;
use crate::groups::Subgroup;
use crate::modrep::{CompositionMultiset, RepModule};
use crate::Result;

/// The Cartan matrix of a field group algebra: row i lists the
/// composition multiplicities of PIM i in the canonical simple basis.
pub struct CartanMatrix {
    pub matrix: IntMatrix,
    pub simple_dims: Vec<usize>,
    pub pim_dims: Vec<usize>,
}

/// A map between the free abelian groups attached to two algebras
/// (restriction, induction, or Cartan); `matrix` has one column per
/// domain basis element, expressed in the codomain basis.
pub struct LatticeMap {
    pub matrix: IntMatrix,
}

pub fn cartan_matrix(alg: &Arc<GroupAlgebra>, seed: u64) -> Result<CartanMatrix> {
    let pims = alg.pims(seed)?;
    let simples = alg.simples()?;
    let mut rows = Vec::with_capacity(pims.len());
    for pim in pims.iter() {
        let counts = alg.chop(&pim.module, seed)?;
        rows.push(counts.counts().to_vec());
    }
    let matrix = IntMatrix::from_u64_rows(&rows);
    // row bookkeeping: sum_j c_ij dim S_j = dim P_i
    for (i, pim) in pims.iter().enumerate() {
        let total: u64 = rows[i]
            .iter()
            .zip(&simples)
            .map(|(&c, s)| c * s.dim as u64)
            .sum();
        if total != pim.module.dim() as u64 {
            return Err(Error::Internal(format!(
                "Cartan row {i} sums to dimension {total}, PIM has {}",
                pim.module.dim()
            )));
        }
    }
    Ok(CartanMatrix {
        matrix,
        simple_dims: simples.iter().map(|s| s.dim).collect(),
        pim_dims: pims.iter().map(|p| p.module.dim()).collect(),
    })
}

/// Determinant of the Cartan matrix and the injectivity verdict for the
/// Cartan map (injective iff the determinant is nonzero).
pub fn cartan_injectivity(alg: &Arc<GroupAlgebra>, seed: u64) -> Result<(BigInt, bool)> {
    let c = cartan_matrix(alg, seed)?;
    let det = c.matrix.det();
    let injective = !det.is_zero();
    Ok((det, injective))
}

/// Restriction map `G_0(kG) -> G_0(kH)`: column j is the composition
/// multiset of the restriction of the j-th simple.
pub fn restriction_map(alg: &Arc<GroupAlgebra>, sub: &Subgroup, seed: u64) -> Result<LatticeMap> {
    let sub_alg = alg.subgroup_algebra(sub);
    let n = alg.num_simples()?;
    let m = sub_alg.num_simples()?;
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let s = alg.simple_module(j)?;
        let (_, res) = alg.restrict(&s, sub);
        cols.push(sub_alg.chop(&res, seed)?.counts().to_vec());
    }
    Ok(LatticeMap {
        matrix: columns_to_matrix(m, &cols),
    })
}

/// Induction map `G_0(kH) -> G_0(kG)`: column j is the composition
/// multiset of the induced j-th simple of the subalgebra.
pub fn induction_map(alg: &Arc<GroupAlgebra>, sub: &Subgroup, seed: u64) -> Result<LatticeMap> {
    let sub_alg = alg.subgroup_algebra(sub);
    let n = alg.num_simples()?;
    let m = sub_alg.num_simples()?;
    let mut cols = Vec::with_capacity(m);
    for j in 0..m {
        let s = sub_alg.simple_module(j)?;
        let ind = alg.induce(&s, sub)?;
        cols.push(alg.chop(&ind, seed)?.counts().to_vec());
    }
    Ok(LatticeMap {
        matrix: columns_to_matrix(n, &cols),
    })
}

/// Restriction on `K_0`: column j decomposes the restriction of PIM j
/// into the subalgebra's PIMs (restrictions of projectives stay
/// projective since `kG` is free over `kH`).
pub fn k0_restriction_map(
    alg: &Arc<GroupAlgebra>,
    sub: &Subgroup,
    seed: u64,
) -> Result<LatticeMap> {
    let sub_alg = alg.subgroup_algebra(sub);
    let pims = alg.pims(seed)?;
    let m = sub_alg.num_simples()?;
    let mut cols = Vec::with_capacity(pims.len());
    for pim in pims.iter() {
        let (_, res) = alg.restrict(&pim.module, sub);
        cols.push(sub_alg.decompose_projective(&res, seed)?);
    }
    Ok(LatticeMap {
        matrix: columns_to_matrix(m, &cols),
    })
}

fn columns_to_matrix(nrows: usize, cols: &[Vec<u64>]) -> IntMatrix {
    let mut m = IntMatrix::zeros(nrows, cols.len());
    for (j, col) in cols.iter().enumerate() {
        assert_eq!(col.len(), nrows);
        for (i, &v) in col.iter().enumerate() {
            m.set(i, j, BigInt::from(v));
        }
    }
    m
}

/// One sampled instance of the projection formula.
#[derive(Debug, Serialize)]
pub struct FrobeniusSample {
    pub x_multiplicities: Vec<u64>,
    pub y_multiplicities: Vec<u64>,
    pub lhs: Vec<u64>,
    pub rhs: Vec<u64>,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct FrobeniusReport {
    pub samples: Vec<FrobeniusSample>,
    pub all_pass: bool,
}

/// Check the projection formula `ind(x) . y = ind(x . res(y))` on sampled
/// nonnegative classes realized as actual modules: both sides are built
/// as modules (induction, diagonal tensor) and chopped.
pub fn frobenius_identity_check(
    alg: &Arc<GroupAlgebra>,
    sub: &Subgroup,
    samples: usize,
    seed: u64,
) -> Result<FrobeniusReport> {
    let sub_alg = alg.subgroup_algebra(sub);
    let n_sub = sub_alg.num_simples()?;
    let n_top = alg.num_simples()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(samples);
    for _ in 0..samples {
        let xm: Vec<u64> = (0..n_sub).map(|_| rng.gen_range(0..=1u64)).collect();
        let ym: Vec<u64> = (0..n_top).map(|_| rng.gen_range(0..=1u64)).collect();
        let xm = ensure_nonzero(xm, &mut rng);
        let ym = ensure_nonzero(ym, &mut rng);
        let x = sum_of_simples(&sub_alg, &xm)?;
        let y = sum_of_simples(alg, &ym)?;
        // lhs: ind(x) tensor y
        let ind_x = alg.induce(&x, sub)?;
        let lhs_mod = alg.tensor_diagonal(&ind_x, &y);
        let lhs = alg.chop(&lhs_mod, seed)?;
        // rhs: ind(x tensor res(y))
        let (_, res_y) = alg.restrict(&y, sub);
        let prod = sub_alg.tensor_diagonal(&x, &res_y);
        let rhs_mod = alg.induce(&prod, sub)?;
        let rhs = alg.chop(&rhs_mod, seed)?;
        let pass = lhs == rhs;
        out.push(FrobeniusSample {
            x_multiplicities: xm,
            y_multiplicities: ym,
            lhs: lhs.0,
            rhs: rhs.0,
            pass,
        });
    }
    let all_pass = out.iter().all(|s| s.pass);
    Ok(FrobeniusReport {
        samples: out,
        all_pass,
    })
}

fn ensure_nonzero(mut v: Vec<u64>, rng: &mut ChaCha8Rng) -> Vec<u64> {
    if v.iter().all(|&x| x == 0) {
        let i = rng.gen_range(0..v.len());
        v[i] = 1;
    }
    v
}

fn sum_of_simples(alg: &Arc<GroupAlgebra>, mults: &[u64]) -> Result<RepModule> {
    let mut parts: Vec<RepModule> = Vec::new();
    for (id, &m) in mults.iter().enumerate() {
        for _ in 0..m {
            parts.push(alg.simple_module(id)?);
        }
    }
    let refs: Vec<&RepModule> = parts.iter().collect();
    Ok(alg.direct_sum(&refs))
}

/// Artin induction data: the cokernel of the stacked induction maps from
/// cyclic subgroup class representatives.
#[derive(Debug, Serialize)]
pub struct ArtinReport {
    /// Elementary divisors of the induction lattice.
    pub divisors: Vec<i64>,
    /// Exponent of the (finite) cokernel; 0 flags an infinite cokernel,
    /// which the theorem forbids.
    pub exponent: u64,
    pub finite: bool,
    /// exponent divides |G|^2
    pub bound_ok: bool,
    /// Adding induction columns from conjugate cyclic subgroups does not
    /// change the image lattice.
    pub conjugation_invariant: bool,
    pub num_cyclic_classes: usize,
}

pub fn artin_exponent_check(alg: &Arc<GroupAlgebra>, seed: u64) -> Result<ArtinReport> {
    let group = Arc::clone(alg.group());
    let classes = group.cyclic_subgroup_classes();
    let n = alg.num_simples()?;
    let mut blocks: Vec<IntMatrix> = Vec::new();
    for sub in &classes {
        blocks.push(induction_map(alg, sub, seed)?.matrix);
    }
    let stacked = hcat_all(n, &blocks);
    let divisors = stacked.elementary_divisors();
    let finite = divisors.len() == n;
    let exponent = if finite {
        divisors
            .last()
            .map(|d| {
                let (_, digits) = d.to_u64_digits();
                digits.first().copied().unwrap_or(1)
            })
            .unwrap_or(1)
    } else {
        0
    };
    let order = group.order() as u64;
    let bound_ok = finite && (order * order) % exponent.max(1) == 0 && exponent != 0;
    // invariance: induction from conjugate subgroups lands inside the image
    let mut conjugation_invariant = true;
    'outer: for sub in group.all_cyclic_subgroups() {
        // skip the representatives themselves
        if classes.iter().any(|c| c.elements() == sub.elements()) {
            continue;
        }
        let cols = induction_map(alg, &sub, seed)?.matrix;
        for j in 0..cols.cols() {
            let col: Vec<BigInt> = (0..n).map(|i| cols.get(i, j).clone()).collect();
            if !stacked.column_lattice_contains(&col) {
                conjugation_invariant = false;
                break 'outer;
            }
        }
        // and the divisor chain of the enlarged matrix is unchanged
        let enlarged = stacked.hcat(&cols);
        if enlarged.elementary_divisors() != divisors {
            conjugation_invariant = false;
            break;
        }
    }
    let divisors_i64: Vec<i64> = divisors
        .iter()
        .map(|d| {
            let (_, digits) = d.to_u64_digits();
            digits.first().copied().unwrap_or(0) as i64
        })
        .collect();
    Ok(ArtinReport {
        divisors: divisors_i64,
        exponent,
        finite,
        bound_ok,
        conjugation_invariant,
        num_cyclic_classes: classes.len(),
    })
}

fn hcat_all(nrows: usize, blocks: &[IntMatrix]) -> IntMatrix {
    let mut acc = IntMatrix::zeros(nrows, 0);
    for b in blocks {
        acc = acc.hcat(b);
    }
    acc
}

/// Intersection of the kernels of the `K_0` restriction maps to a class
/// of subgroups, restricted to the sublattice spanned by the rows of
/// `lattice` (coordinates in the `K_0` basis). Returns basis rows of the
/// intersection, expressed in `K_0` coordinates.
pub fn class_kernel(
    alg: &Arc<GroupAlgebra>,
    lattice: &IntMatrix,
    class: &[Subgroup],
    seed: u64,
) -> Result<IntMatrix> {
    assert!(!class.is_empty(), "class of subgroups must be nonempty");
    let n = alg.num_simples()?;
    assert_eq!(lattice.cols(), n);
    let r = lattice.rows();
    if r == 0 {
        return Ok(IntMatrix::zeros(0, n));
    }
    // condition on coefficients x (length r): T_H B^T x = 0 for all H
    let bt = lattice.transpose();
    let mut stacked_rows: Vec<IntMatrix> = Vec::new();
    for sub in class {
        let t = k0_restriction_map(alg, sub, seed)?.matrix;
        stacked_rows.push(t.mul(&bt));
    }
    let mut stacked = IntMatrix::zeros(0, r);
    for s in &stacked_rows {
        stacked = stacked.stack(s);
    }
    let kernel = stacked.kernel_basis(); // rows = coefficient vectors
    Ok(kernel.mul(lattice))
}

/// Integer kernel of the Cartan map (rows spanning `{x : x C = 0}`); the
/// injectivity theorems say this is zero, and the check computes it
/// directly.
pub fn cartan_kernel(alg: &Arc<GroupAlgebra>, seed: u64) -> Result<IntMatrix> {
    let c = cartan_matrix(alg, seed)?;
    // x C = 0 <=> C^T x^T = 0
    Ok(c.matrix.transpose().kernel_basis())
}

/// Multiset addition helper used by suites.
pub fn multiset_sum(parts: &[CompositionMultiset]) -> CompositionMultiset {
    let n = parts.first().map_or(0, |p| p.0.len());
    let mut acc = CompositionMultiset(vec![0; n]);
    for p in parts {
        acc = acc.add(p);
    }
    acc
}
