//! Group algebras `R[G]` as structure-constant algebras.
//!
//! The field case (`GroupAlgebra` over `F_p`) carries the heavy machinery:
//! Jacobson radical, semisimple quotient, primitive idempotents and their
//! lifts to exact idempotents. The chain-ring case (`ChainGroupAlgebra`)
//! reuses the residue-field computations: its radical is the preimage of
//! the residue radical, and idempotents are lifted through the nilpotent
//! ideal with the same `e <- 3e^2 - 2e^3` iteration.
//!
//! Algebras are identified by an id; elements remember the id of their
//! parent so cross-algebra arithmetic fails loudly instead of silently
//! producing garbage.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::Error;
use crate::exactla::{ChainMatrix, ChainRing, FpMatrix, PrimeField};
use crate::groups::{Group, Subgroup};
use crate::modrep::{engine, Pim, Registry, RepModule};
use crate::Result;

static NEXT_ALGEBRA_ID: AtomicU64 = AtomicU64::new(1);

fn fresh_id() -> u64 {
    NEXT_ALGEBRA_ID.fetch_add(1, Ordering::Relaxed)
}

/// Cache helper for fallible once-initialization.
pub(crate) fn cached<T: Clone>(cell: &OnceLock<T>, f: impl FnOnce() -> Result<T>) -> Result<T> {
    if let Some(v) = cell.get() {
        return Ok(v.clone());
    }
    let v = f()?;
    let _ = cell.set(v);
    Ok(cell.get().expect("just set").clone())
}

/// An element of a group algebra: a coefficient per group element.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlgElement {
    pub(crate) alg_id: u64,
    pub(crate) coeffs: Vec<u64>,
}

impl AlgElement {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }
}

/// Which module actions an ideal basis is verified closed under.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Sidedness {
    Left,
    Right,
    TwoSided,
}

/// A subspace of a field group algebra closed under the claimed actions,
/// stored as reduced row echelon basis rows of coefficient vectors.
#[derive(Clone, Debug)]
pub struct IdealBasis {
    pub(crate) alg_id: u64,
    pub(crate) basis: FpMatrix,
    pub sidedness: Sidedness,
}

impl IdealBasis {
    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &FpMatrix {
        &self.basis
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        engine::rref_reduce(&self.basis, v).iter().all(|&x| x == 0)
    }
}

/// The group algebra `F_p[G]`.
pub struct GroupAlgebra {
    id: u64,
    group: Arc<Group>,
    field: PrimeField,
    pub(crate) registry: RwLock<Registry>,
    pub(crate) regular_cache: OnceLock<RepModule>,
    pub(crate) radical_cache: OnceLock<Arc<IdealBasis>>,
    pub(crate) pims_cache: OnceLock<Arc<Vec<Pim>>>,
    pub(crate) sub_algebras: RwLock<HashMap<Vec<usize>, Arc<GroupAlgebra>>>,
}

impl std::fmt::Debug for GroupAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}[{}]", self.field, self.group.spec_string())
    }
}

impl GroupAlgebra {
    pub fn new(group: Arc<Group>, field: PrimeField) -> Arc<GroupAlgebra> {
        Arc::new(GroupAlgebra {
            id: fresh_id(),
            group,
            field,
            registry: RwLock::new(Registry::default()),
            regular_cache: OnceLock::new(),
            radical_cache: OnceLock::new(),
            pims_cache: OnceLock::new(),
            sub_algebras: RwLock::new(HashMap::new()),
        })
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.group.order()
    }

    pub fn zero(&self) -> AlgElement {
        AlgElement {
            alg_id: self.id,
            coeffs: vec![0; self.dim()],
        }
    }

    pub fn one(&self) -> AlgElement {
        self.basis_elem(0)
    }

    pub fn basis_elem(&self, g: usize) -> AlgElement {
        let mut coeffs = vec![0; self.dim()];
        coeffs[g] = 1;
        AlgElement {
            alg_id: self.id,
            coeffs,
        }
    }

    pub fn element(&self, coeffs: Vec<u64>) -> AlgElement {
        assert_eq!(coeffs.len(), self.dim());
        let p = self.field.p();
        AlgElement {
            alg_id: self.id,
            coeffs: coeffs.into_iter().map(|c| c % p).collect(),
        }
    }

    /// The sum of all group elements; central, and square zero exactly
    /// when the characteristic divides the group order.
    pub fn u_element(&self) -> AlgElement {
        AlgElement {
            alg_id: self.id,
            coeffs: vec![1; self.dim()],
        }
    }

    fn check_parent(&self, e: &AlgElement) -> Result<()> {
        if e.alg_id != self.id || e.coeffs.len() != self.dim() {
            return Err(Error::ParentMismatch);
        }
        Ok(())
    }

    pub fn add(&self, a: &AlgElement, b: &AlgElement) -> Result<AlgElement> {
        self.check_parent(a)?;
        self.check_parent(b)?;
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| self.field.add(x, y))
            .collect();
        Ok(AlgElement {
            alg_id: self.id,
            coeffs,
        })
    }

    pub fn sub(&self, a: &AlgElement, b: &AlgElement) -> Result<AlgElement> {
        self.check_parent(a)?;
        self.check_parent(b)?;
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| self.field.sub(x, y))
            .collect();
        Ok(AlgElement {
            alg_id: self.id,
            coeffs,
        })
    }

    pub fn scale(&self, a: &AlgElement, c: u64) -> AlgElement {
        let c = c % self.field.p();
        AlgElement {
            alg_id: self.id,
            coeffs: a.coeffs.iter().map(|&x| self.field.mul(x, c)).collect(),
        }
    }

    /// Bilinear extension of the group multiplication.
    pub fn mul(&self, a: &AlgElement, b: &AlgElement) -> Result<AlgElement> {
        self.check_parent(a)?;
        self.check_parent(b)?;
        Ok(AlgElement {
            alg_id: self.id,
            coeffs: self.mul_coeffs(&a.coeffs, &b.coeffs),
        })
    }

    pub(crate) fn mul_coeffs(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let n = self.dim();
        let p = self.field.p();
        let mut out = vec![0u64; n];
        for g in 0..n {
            if a[g] == 0 {
                continue;
            }
            for h in 0..n {
                if b[h] == 0 {
                    continue;
                }
                let gh = self.group.mul(g, h);
                out[gh] = (out[gh] + a[g] * b[h]) % p;
            }
        }
        out
    }

    /// The augmentation ideal of a subgroup: the right ideal generated by
    /// `{h - 1 : h in sub}`, spanned by the vectors `(h-1)g`. Two-sided
    /// exactly when the subgroup is normal; the sidedness flag records
    /// what was actually verified.
    pub fn augmentation_ideal(&self, sub: &Subgroup) -> IdealBasis {
        let n = self.dim();
        let mut rows = Vec::new();
        for &h in sub.elements().iter().skip(1) {
            for g in 0..n {
                let mut v = vec![0i64; n];
                v[self.group.mul(h, g)] += 1;
                v[g] -= 1;
                rows.push(
                    v.into_iter()
                        .map(|x| self.field.reduce(x))
                        .collect::<Vec<u64>>(),
                );
            }
        }
        if rows.is_empty() {
            return IdealBasis {
                alg_id: self.id,
                basis: FpMatrix::zero(self.field, 0, n),
                sidedness: Sidedness::TwoSided,
            };
        }
        let basis = FpMatrix::from_rows(self.field, &rows).rref().mat;
        let basis = engine::drop_zero_rows(&basis);
        let ideal = IdealBasis {
            alg_id: self.id,
            basis,
            sidedness: Sidedness::Right,
        };
        let sidedness = if self.is_left_closed(&ideal) {
            Sidedness::TwoSided
        } else {
            Sidedness::Right
        };
        IdealBasis { sidedness, ..ideal }
    }

    /// Is the span closed under left multiplication by the group?
    pub fn is_left_closed(&self, ideal: &IdealBasis) -> bool {
        for i in 0..ideal.basis.rows() {
            let v = ideal.basis.row(i);
            for &g in self.group.generators() {
                let gv = self.mul_coeffs(&self.basis_elem(g).coeffs, v);
                if !ideal.contains(&gv) {
                    return false;
                }
            }
        }
        true
    }

    /// Is the span closed under right multiplication by the group?
    pub fn is_right_closed(&self, ideal: &IdealBasis) -> bool {
        for i in 0..ideal.basis.rows() {
            let v = ideal.basis.row(i);
            for &g in self.group.generators() {
                let vg = self.mul_coeffs(v, &self.basis_elem(g).coeffs);
                if !ideal.contains(&vg) {
                    return false;
                }
            }
        }
        true
    }

    /// Span of pairwise products of two ideals' bases.
    pub fn ideal_product(&self, a: &IdealBasis, b: &IdealBasis) -> IdealBasis {
        let mut rows = Vec::new();
        for i in 0..a.basis.rows() {
            for j in 0..b.basis.rows() {
                rows.push(self.mul_coeffs(a.basis.row(i), b.basis.row(j)));
            }
        }
        let basis = if rows.is_empty() {
            FpMatrix::zero(self.field, 0, self.dim())
        } else {
            engine::drop_zero_rows(&FpMatrix::from_rows(self.field, &rows).rref().mat)
        };
        IdealBasis {
            alg_id: self.id,
            basis,
            sidedness: a.sidedness,
        }
    }

    /// Smallest k with I^k = 0, by explicit powering; errors out past
    /// dim+1 (impossible for a genuine nilpotent ideal).
    pub fn nilpotency_index(&self, ideal: &IdealBasis) -> Result<usize> {
        if ideal.dim() == 0 {
            return Ok(1);
        }
        let mut power = ideal.clone();
        for k in 1..=self.dim() + 1 {
            if power.dim() == 0 {
                return Ok(k);
            }
            power = self.ideal_product(&power, ideal);
        }
        Err(Error::Internal("ideal is not nilpotent".into()))
    }

    /// Jacobson radical: the intersection of the annihilators of the
    /// simple modules (equivalently, of the composition factors of the
    /// regular module). Canonical and seed-independent.
    pub fn radical(&self) -> Result<Arc<IdealBasis>> {
        cached(&self.radical_cache, || {
            let simples = self.simples()?;
            let n = self.dim();
            let mut rows: Vec<Vec<u64>> = Vec::new();
            for s in simples.iter() {
                let module = self.simple_module(s.id)?;
                let actions = self.all_element_actions(&module);
                let d = module.dim();
                for i in 0..d {
                    for j in 0..d {
                        rows.push((0..n).map(|g| actions[g].get(i, j)).collect());
                    }
                }
            }
            let constraint = FpMatrix::from_rows(self.field, &rows);
            let basis = engine::drop_zero_rows(&constraint.nullspace().rref().mat);
            let ideal = IdealBasis {
                alg_id: self.id,
                basis,
                sidedness: Sidedness::TwoSided,
            };
            debug_assert!(self.is_left_closed(&ideal) && self.is_right_closed(&ideal));
            Ok(Arc::new(ideal))
        })
    }

    /// Lift an idempotent of `A/N` (given by any representative) to an
    /// exact idempotent of `A`, by the Newton-style iteration
    /// `e <- 3e^2 - 2e^3`. The residue class mod `N` is preserved.
    pub fn lift_idempotent(&self, ebar: &AlgElement, nil: &IdealBasis) -> Result<AlgElement> {
        self.check_parent(ebar)?;
        if nil.alg_id != self.id {
            return Err(Error::ParentMismatch);
        }
        let esq = self.mul(ebar, ebar)?;
        let defect = self.sub(&esq, ebar)?;
        if !nil.contains(&defect.coeffs) {
            return Err(Error::NotApproxIdempotent);
        }
        let three = self.field.reduce(3);
        let two = self.field.reduce(2);
        let mut e = ebar.clone();
        for _ in 0..64 {
            let e2 = self.mul(&e, &e)?;
            if e2 == e {
                let diff = self.sub(&e, ebar)?;
                debug_assert!(nil.contains(&diff.coeffs));
                return Ok(e);
            }
            let e3 = self.mul(&e2, &e)?;
            e = self.sub(&self.scale(&e2, three), &self.scale(&e3, two))?;
        }
        Err(Error::Internal(
            "idempotent lifting did not converge".into(),
        ))
    }

    /// A complete orthogonal set of primitive idempotents of `A/J`,
    /// returned as representatives in `A` (each idempotent modulo `J`,
    /// pairwise orthogonal modulo `J`, summing to 1 modulo `J`).
    ///
    /// Recursive simple-submodule splitting: find a simple left ideal `L`
    /// of `A/J`, solve the linear system `x e = x` for `e in L` (free
    /// variables pinned to zero, so the solution is the canonical one),
    /// orthogonalize against the part already found, and recurse on the
    /// complement.
    pub fn semisimple_primitive_idempotents(&self, seed: u64) -> Result<Vec<AlgElement>> {
        let quotient = self.semisimple_quotient()?;
        let qdim = quotient.dim;
        let f = self.field;
        let mut idems: Vec<Vec<u64>> = Vec::new(); // in quotient coords
        let mut sum = vec![0u64; qdim];
        // complement left ideal: row space of (1 - sum) right-multiplications
        let mut rng_salt = 0u64;
        loop {
            let one_minus: Vec<u64> = {
                let mut v = vec![0u64; qdim];
                for (i, x) in v.iter_mut().enumerate() {
                    *x = f.sub(quotient.one[i], sum[i]);
                }
                v
            };
            let mut comp_rows = Vec::new();
            for i in 0..qdim {
                let mut basis_vec = vec![0u64; qdim];
                basis_vec[i] = 1;
                comp_rows.push(quotient.mul(&basis_vec, &one_minus));
            }
            let comp = engine::drop_zero_rows(&FpMatrix::from_rows(f, &comp_rows).rref().mat);
            if comp.rows() == 0 {
                break;
            }
            // restrict the regular action to the complement and find a simple summand
            let sub_actions = engine::submodule_actions(&quotient.left_mult, &comp);
            let simple_in_comp =
                engine::find_simple_submodule(f, comp.rows(), &sub_actions, seed ^ rng_salt)?;
            rng_salt = rng_salt.wrapping_add(0x9e3779b97f4a7c15);
            let simple = simple_in_comp.mul(&comp); // rows in quotient coords
                                                    // solve x e = x for all basis x of the simple ideal
            let l = simple.rows();
            let mut system = Vec::new();
            let mut rhs = Vec::new();
            for i in 0..l {
                let x = simple.row(i);
                // row block: for each coordinate c of the quotient
                let products: Vec<Vec<u64>> =
                    (0..l).map(|j| quotient.mul(x, simple.row(j))).collect();
                for c in 0..qdim {
                    system.push((0..l).map(|j| products[j][c]).collect::<Vec<u64>>());
                    rhs.push(x[c]);
                }
            }
            let e_coords = engine::solve_linear(f, &system, &rhs)
                .ok_or_else(|| Error::Internal("no idempotent in simple left ideal".into()))?;
            let mut e = vec![0u64; qdim];
            for (j, &c) in e_coords.iter().enumerate() {
                if c != 0 {
                    for (t, x) in e.iter_mut().enumerate() {
                        *x = f.add(*x, f.mul(c, simple.row(j)[t]));
                    }
                }
            }
            // orthogonalize: e <- (1 - sum) * e
            let e = quotient.mul(&one_minus, &e);
            let e2 = quotient.mul(&e, &e);
            if e.iter().all(|&x| x == 0) || e2 != e {
                return Err(Error::Internal("idempotent candidate failed".into()));
            }
            for (i, x) in sum.iter_mut().enumerate() {
                *x = f.add(*x, e[i]);
            }
            idems.push(e);
        }
        if sum != quotient.one {
            return Err(Error::Internal("idempotents do not sum to 1".into()));
        }
        for (i, a) in idems.iter().enumerate() {
            for (j, b) in idems.iter().enumerate() {
                if i != j && quotient.mul(a, b).iter().any(|&x| x != 0) {
                    return Err(Error::Internal("idempotents not orthogonal".into()));
                }
            }
        }
        Ok(idems
            .into_iter()
            .map(|e| self.element(quotient.section(&e)))
            .collect())
    }

    /// The semisimple quotient `A/J` as a structure-constant algebra with
    /// a linear section back to `A`.
    pub(crate) fn semisimple_quotient(&self) -> Result<QuotientAlgebra> {
        let rad = self.radical()?;
        QuotientAlgebra::new(self, &rad)
    }
}

/// `A/I` for a two-sided ideal `I`, with multiplication induced from `A`.
/// Basis: the standard basis vectors of `A` at the non-pivot columns of
/// the ideal's rref basis.
pub(crate) struct QuotientAlgebra {
    pub dim: usize,
    pub one: Vec<u64>,
    pub left_mult: Vec<FpMatrix>,
    /// non-pivot columns: quotient coordinate -> ambient coordinate
    section_cols: Vec<usize>,
    ideal_basis: FpMatrix,
    field: PrimeField,
}

impl QuotientAlgebra {
    fn new(alg: &GroupAlgebra, ideal: &IdealBasis) -> Result<QuotientAlgebra> {
        let n = alg.dim();
        let f = alg.field;
        let rref = ideal.basis.rref();
        let section_cols: Vec<usize> = (0..n).filter(|c| !rref.pivots.contains(c)).collect();
        let dim = section_cols.len();
        let project = |v: &[u64]| -> Vec<u64> {
            let reduced = engine::rref_reduce(&rref.mat, v);
            section_cols.iter().map(|&c| reduced[c]).collect()
        };
        let one = project(&alg.one().coeffs);
        let mut left_mult = Vec::with_capacity(dim);
        for &c in &section_cols {
            let mut m = FpMatrix::zero(f, dim, dim);
            for (j, &cj) in section_cols.iter().enumerate() {
                let mut a = vec![0u64; n];
                a[c] = 1;
                let mut b = vec![0u64; n];
                b[cj] = 1;
                let col = project(&alg.mul_coeffs(&a, &b));
                for (i, &v) in col.iter().enumerate() {
                    if v != 0 {
                        m.set(i, j, v);
                    }
                }
            }
            left_mult.push(m);
        }
        Ok(QuotientAlgebra {
            dim,
            one,
            left_mult,
            section_cols,
            ideal_basis: rref.mat,
            field: f,
        })
    }

    /// Multiply two quotient elements (coordinates in the section basis).
    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let f = self.field;
        let mut out = vec![0u64; self.dim];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            let col = &self.left_mult[i];
            for (k, o) in out.iter_mut().enumerate() {
                let mut acc = 0u64;
                for (j, &bj) in b.iter().enumerate() {
                    acc += col.get(k, j) * bj;
                }
                *o = f.add(*o, f.mul(ai, acc % f.p()));
            }
        }
        out
    }

    /// Canonical lift of quotient coordinates to an ambient coefficient
    /// vector (supported on the non-pivot columns).
    pub fn section(&self, v: &[u64]) -> Vec<u64> {
        let n = self.ideal_basis.cols();
        let mut out = vec![0u64; n];
        for (i, &c) in self.section_cols.iter().enumerate() {
            out[c] = v[i];
        }
        out
    }
}

// ---------------------------------------------------------------------------
// chain-ring group algebras
// ---------------------------------------------------------------------------

/// A subspan of a chain-ring group algebra in Howell form, closed under
/// the claimed actions.
#[derive(Clone, Debug)]
pub struct ChainIdealBasis {
    pub(crate) alg_id: u64,
    pub(crate) basis: ChainMatrix,
    pub sidedness: Sidedness,
}

impl ChainIdealBasis {
    pub fn basis(&self) -> &ChainMatrix {
        &self.basis
    }

    pub fn num_rows(&self) -> usize {
        self.basis.rows()
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.basis.howell_span_contains(v)
    }
}

/// The group algebra `R[G]` for a chain ring `R`.
pub struct ChainGroupAlgebra {
    id: u64,
    group: Arc<Group>,
    ring: ChainRing,
    residue: Arc<GroupAlgebra>,
    pub(crate) radical_cache: OnceLock<Arc<ChainIdealBasis>>,
    pub(crate) regular_cache: OnceLock<crate::artinring::ChainRepModule>,
    pub(crate) pims_cache: OnceLock<Arc<Vec<crate::artinring::ChainPim>>>,
}

impl std::fmt::Debug for ChainGroupAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}[{}]", self.ring, self.group.spec_string())
    }
}

impl ChainGroupAlgebra {
    pub fn new(group: Arc<Group>, ring: ChainRing) -> Arc<ChainGroupAlgebra> {
        let residue = GroupAlgebra::new(Arc::clone(&group), ring.residue_field());
        Arc::new(ChainGroupAlgebra {
            id: fresh_id(),
            group,
            ring,
            residue,
            radical_cache: OnceLock::new(),
            regular_cache: OnceLock::new(),
            pims_cache: OnceLock::new(),
        })
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn ring(&self) -> ChainRing {
        self.ring
    }

    pub fn dim(&self) -> usize {
        self.group.order()
    }

    /// The residue-field group algebra `k[G]`.
    pub fn residue_algebra(&self) -> &Arc<GroupAlgebra> {
        &self.residue
    }

    pub fn zero(&self) -> AlgElement {
        AlgElement {
            alg_id: self.id,
            coeffs: vec![0; self.dim()],
        }
    }

    pub fn one(&self) -> AlgElement {
        self.basis_elem(0)
    }

    pub fn basis_elem(&self, g: usize) -> AlgElement {
        let mut coeffs = vec![0; self.dim()];
        coeffs[g] = 1;
        AlgElement {
            alg_id: self.id,
            coeffs,
        }
    }

    pub fn element(&self, coeffs: Vec<u64>) -> AlgElement {
        assert_eq!(coeffs.len(), self.dim());
        assert!(coeffs.iter().all(|&c| c < self.ring.size()));
        AlgElement {
            alg_id: self.id,
            coeffs,
        }
    }

    fn check_parent(&self, e: &AlgElement) -> Result<()> {
        if e.alg_id != self.id || e.coeffs.len() != self.dim() {
            return Err(Error::ParentMismatch);
        }
        Ok(())
    }

    pub fn add(&self, a: &AlgElement, b: &AlgElement) -> Result<AlgElement> {
        self.check_parent(a)?;
        self.check_parent(b)?;
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| self.ring.add(x, y))
            .collect();
        Ok(AlgElement {
            alg_id: self.id,
            coeffs,
        })
    }

    pub fn sub(&self, a: &AlgElement, b: &AlgElement) -> Result<AlgElement> {
        self.check_parent(a)?;
        self.check_parent(b)?;
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| self.ring.sub(x, y))
            .collect();
        Ok(AlgElement {
            alg_id: self.id,
            coeffs,
        })
    }

    pub fn scale(&self, a: &AlgElement, c: u64) -> AlgElement {
        AlgElement {
            alg_id: self.id,
            coeffs: a.coeffs.iter().map(|&x| self.ring.mul(x, c)).collect(),
        }
    }

    pub fn mul(&self, a: &AlgElement, b: &AlgElement) -> Result<AlgElement> {
        self.check_parent(a)?;
        self.check_parent(b)?;
        Ok(AlgElement {
            alg_id: self.id,
            coeffs: self.mul_coeffs(&a.coeffs, &b.coeffs),
        })
    }

    pub(crate) fn mul_coeffs(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let n = self.dim();
        let mut out = vec![0u64; n];
        for g in 0..n {
            if a[g] == 0 {
                continue;
            }
            for h in 0..n {
                if b[h] == 0 {
                    continue;
                }
                let gh = self.group.mul(g, h);
                out[gh] = self.ring.add(out[gh], self.ring.mul(a[g], b[h]));
            }
        }
        out
    }

    /// Reduce a coefficient vector entrywise to the residue field.
    pub fn reduce_coeffs(&self, a: &[u64]) -> Vec<u64> {
        a.iter().map(|&x| self.ring.residue(x)).collect()
    }

    /// Canonical entrywise lift from the residue field.
    pub fn lift_coeffs(&self, a: &[u64]) -> Vec<u64> {
        a.iter().map(|&x| self.ring.lift(x)).collect()
    }

    /// rad(R[G]) as the preimage of rad(k[G]) under coefficient reduction:
    /// spanned by lifts of the residue radical plus `u * (basis)`. The
    /// maximal ideal times the algebra is nilpotent, which makes the
    /// preimage formula exact.
    pub fn radical_chain(&self) -> Result<Arc<ChainIdealBasis>> {
        cached(&self.radical_cache, || {
            let kr = self.residue.radical()?;
            let n = self.dim();
            let mut rows: Vec<Vec<u64>> = Vec::new();
            for i in 0..kr.basis.rows() {
                rows.push(self.lift_coeffs(kr.basis.row(i)));
            }
            let u = self.ring.uniformizer();
            if u != 0 {
                for g in 0..n {
                    let mut v = vec![0u64; n];
                    v[g] = u;
                    rows.push(v);
                }
            }
            let basis = if rows.is_empty() {
                ChainMatrix::zero(self.ring, 0, n)
            } else {
                ChainMatrix::from_rows(self.ring, &rows).howell()
            };
            Ok(Arc::new(ChainIdealBasis {
                alg_id: self.id,
                basis,
                sidedness: Sidedness::TwoSided,
            }))
        })
    }

    /// Augmentation ideal of a subgroup over the chain ring.
    pub fn augmentation_ideal(&self, sub: &Subgroup) -> ChainIdealBasis {
        let n = self.dim();
        let mut rows = Vec::new();
        for &h in sub.elements().iter().skip(1) {
            for g in 0..n {
                let mut v = vec![0u64; n];
                let hg = self.group.mul(h, g);
                v[hg] = self.ring.add(v[hg], 1);
                v[g] = self.ring.sub(v[g], 1);
                rows.push(v);
            }
        }
        let basis = if rows.is_empty() {
            ChainMatrix::zero(self.ring, 0, n)
        } else {
            ChainMatrix::from_rows(self.ring, &rows).howell()
        };
        let ideal = ChainIdealBasis {
            alg_id: self.id,
            basis,
            sidedness: Sidedness::Right,
        };
        let sidedness = if self.is_left_closed(&ideal) {
            Sidedness::TwoSided
        } else {
            Sidedness::Right
        };
        ChainIdealBasis { sidedness, ..ideal }
    }

    pub fn is_left_closed(&self, ideal: &ChainIdealBasis) -> bool {
        for i in 0..ideal.basis.rows() {
            let v = ideal.basis.row(i);
            for &g in self.group.generators() {
                let gv = self.mul_coeffs(&self.basis_elem(g).coeffs, v);
                if !ideal.contains(&gv) {
                    return false;
                }
            }
        }
        true
    }

    pub fn ideal_product(&self, a: &ChainIdealBasis, b: &ChainIdealBasis) -> ChainIdealBasis {
        let mut rows = Vec::new();
        for i in 0..a.basis.rows() {
            for j in 0..b.basis.rows() {
                rows.push(self.mul_coeffs(a.basis.row(i), b.basis.row(j)));
            }
        }
        let basis = if rows.is_empty() {
            ChainMatrix::zero(self.ring, 0, self.dim())
        } else {
            ChainMatrix::from_rows(self.ring, &rows).howell()
        };
        ChainIdealBasis {
            alg_id: self.id,
            basis,
            sidedness: a.sidedness,
        }
    }

    pub fn nilpotency_index(&self, ideal: &ChainIdealBasis) -> Result<usize> {
        if ideal.basis.is_zero() || ideal.num_rows() == 0 {
            return Ok(1);
        }
        let mut power = ideal.clone();
        // length of R[G] over R is dim * ring length; safe cap
        let cap = self.dim() * self.ring.len() as usize + 1;
        for k in 1..=cap {
            if power.num_rows() == 0 || power.basis.is_zero() {
                return Ok(k);
            }
            power = self.ideal_product(&power, ideal);
        }
        Err(Error::Internal("chain ideal is not nilpotent".into()))
    }

    /// Exact idempotent lifting over the chain ring.
    pub fn lift_idempotent(&self, ebar: &AlgElement, nil: &ChainIdealBasis) -> Result<AlgElement> {
        self.check_parent(ebar)?;
        if nil.alg_id != self.id {
            return Err(Error::ParentMismatch);
        }
        let esq = self.mul(ebar, ebar)?;
        let defect = self.sub(&esq, ebar)?;
        if !nil.contains(&defect.coeffs) {
            return Err(Error::NotApproxIdempotent);
        }
        let one = self.ring.one();
        let two = self.ring.add(one, one);
        let three = self.ring.add(two, one);
        let mut e = ebar.clone();
        for _ in 0..128 {
            let e2 = self.mul(&e, &e)?;
            if e2 == e {
                let diff = self.sub(&e, ebar)?;
                debug_assert!(nil.contains(&diff.coeffs));
                return Ok(e);
            }
            let e3 = self.mul(&e2, &e)?;
            e = self.sub(&self.scale(&e2, three), &self.scale(&e3, two))?;
        }
        Err(Error::Internal(
            "chain idempotent lifting did not converge".into(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn mul_identities() {
        let g = Group::parse("S3").unwrap();
        let alg = GroupAlgebra::new(g, fp(3));
        let a = alg.element(vec![1, 2, 0, 1, 0, 2]);
        assert_eq!(alg.mul(&alg.one(), &a).unwrap(), a);
        assert_eq!(alg.mul(&a, &alg.one()).unwrap(), a);
        // basis elements multiply like the group
        for g1 in 0..6 {
            for g2 in 0..6 {
                let prod = alg.mul(&alg.basis_elem(g1), &alg.basis_elem(g2)).unwrap();
                assert_eq!(prod, alg.basis_elem(alg.group().mul(g1, g2)));
            }
        }
    }

    #[test]
    fn parent_mismatch() {
        let g1 = Group::parse("C2").unwrap();
        let g2 = Group::parse("C2").unwrap();
        let a1 = GroupAlgebra::new(g1, fp(2));
        let a2 = GroupAlgebra::new(g2, fp(2));
        let x = a1.one();
        let y = a2.one();
        assert!(matches!(a1.mul(&x, &y), Err(Error::ParentMismatch)));
    }

    #[test]
    fn u_squared() {
        // u^2 = |G| u: zero exactly when char divides |G|
        for (spec, p, zero) in [("C2", 2u64, true), ("S3", 3, true), ("C3", 2, false)] {
            let g = Group::parse(spec).unwrap();
            let alg = GroupAlgebra::new(g, fp(p));
            let u = alg.u_element();
            let u2 = alg.mul(&u, &u).unwrap();
            let expected = alg.scale(&u, (alg.group().order() as u64) % p);
            assert_eq!(u2, expected);
            assert_eq!(u2.coeffs().iter().all(|&c| c == 0), zero, "{spec} p={p}");
        }
    }

    #[test]
    fn augmentation_trivial_subgroup_zero() {
        let g = Group::parse("S3").unwrap();
        let alg = GroupAlgebra::new(Arc::clone(&g), fp(3));
        let ideal = alg.augmentation_ideal(&g.trivial_subgroup());
        assert_eq!(ideal.dim(), 0);
    }

    #[test]
    fn augmentation_a3_in_f3s3_nilpotent() {
        let g = Group::parse("S3").unwrap();
        let alg = GroupAlgebra::new(Arc::clone(&g), fp(3));
        let a3: Vec<usize> = (0..6).filter(|&e| g.element_order(e) != 2).collect();
        let a3 = g.subgroup(a3).unwrap();
        let ideal = alg.augmentation_ideal(&a3);
        assert_eq!(ideal.sidedness, Sidedness::TwoSided);
        assert_eq!(ideal.dim(), 4);
        let i2 = alg.ideal_product(&ideal, &ideal);
        assert!(i2.dim() > 0, "I^2 != 0");
        let i3 = alg.ideal_product(&i2, &ideal);
        assert_eq!(i3.dim(), 0, "I^3 = 0 in characteristic 3");
        assert_eq!(alg.nilpotency_index(&ideal).unwrap(), 3);
    }

    #[test]
    fn chain_radical_of_trivial_group() {
        let g = Group::parse("C1").unwrap();
        let alg = ChainGroupAlgebra::new(g, ChainRing::zmod(2, 2).unwrap());
        let rad = alg.radical_chain().unwrap();
        // rad = 2 Z/4: one Howell row [2]
        assert_eq!(rad.basis().row_vecs(), vec![vec![2]]);
        assert_eq!(alg.nilpotency_index(&rad).unwrap(), 2);
    }

    #[test]
    fn chain_radical_z4c2() {
        let g = Group::parse("C2").unwrap();
        let alg = ChainGroupAlgebra::new(g, ChainRing::zmod(2, 2).unwrap());
        let rad = alg.radical_chain().unwrap();
        // preimage of span{1+s}: contains (1,1), (2,0), (0,2)
        assert!(rad.contains(&[1, 1]));
        assert!(rad.contains(&[2, 0]));
        assert!(!rad.contains(&[1, 0]));
        // index in R[G]: |R[G]| = 16, |rad| = 8
        let count = (0..4u64)
            .flat_map(|a| (0..4u64).map(move |b| [a, b]))
            .filter(|v| rad.contains(v))
            .count();
        assert_eq!(count, 8);
        // nilpotent
        assert!(alg.nilpotency_index(&rad).is_ok());
    }
}
