//! Modules over group algebras: spinning, composition series (MeatAxe
//! chop with Norton certification), hom spaces, tensor, restriction,
//! induction, projective indecomposables, covers and projectivity tests.
//!
//! A `RepModule` stores one action matrix per group generator; the action
//! of an arbitrary element is the word product. Vectors are columns and
//! `rho(gh) = rho(g) rho(h)` (left modules). The composition factors of
//! any module are identified against the algebra's `SimpleRegistry`, a
//! canonical catalog built once by chopping the regular module with seed 1
//! and ordered by (dimension, discovery).

pub(crate) mod engine;

use std::collections::HashMap;
use std::sync::Arc;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::exactla::FpMatrix;
use crate::groupalg::{cached, AlgElement, GroupAlgebra};
use crate::groups::Subgroup;
use crate::Result;

/// Where a module came from; carried for diagnostics only.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Provenance {
    Regular,
    Pim,
    Induced,
    File,
    Derived,
}

/// A module over a field group algebra, one action matrix per group
/// generator.
#[derive(Clone)]
pub struct RepModule {
    pub(crate) alg_id: u64,
    dim: usize,
    actions: Vec<FpMatrix>,
    provenance: Provenance,
}

impl std::fmt::Debug for RepModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "RepModule(dim {}, {:?})", self.dim, self.provenance)
    }
}

impl RepModule {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn actions(&self) -> &[FpMatrix] {
        &self.actions
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }
}

/// Multiset of composition factors, densely indexed by canonical simple
/// id.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CompositionMultiset(pub Vec<u64>);

impl CompositionMultiset {
    pub fn counts(&self) -> &[u64] {
        &self.0
    }

    pub fn add(&self, other: &CompositionMultiset) -> CompositionMultiset {
        CompositionMultiset(self.0.iter().zip(&other.0).map(|(&a, &b)| a + b).collect())
    }

    pub fn scale(&self, k: u64) -> CompositionMultiset {
        CompositionMultiset(self.0.iter().map(|&a| a * k).collect())
    }
}

/// Public description of a registered simple module.
#[derive(Clone, Debug, Serialize)]
pub struct SimpleInfo {
    pub id: usize,
    pub dim: usize,
    /// k-dimension of the endomorphism ring (the degree of the
    /// endomorphism field over F_p).
    pub endo_dim: usize,
}

pub(crate) struct SimpleEntry {
    actions: Vec<FpMatrix>,
    dim: usize,
    endo_dim: usize,
}

/// Canonical catalog of the simple modules of one algebra.
#[derive(Default)]
pub struct Registry {
    entries: Vec<SimpleEntry>,          // discovery order
    canonical: Option<Vec<usize>>,      // canonical position -> discovery index
    canonical_of_discovery: Vec<usize>, // discovery index -> canonical position
}

/// A projective indecomposable: the lifted idempotent, the module it
/// generates inside the regular module, the simple head it covers, and
/// its multiplicity in the regular module.
#[derive(Clone)]
pub struct Pim {
    pub idempotent: AlgElement,
    pub module: RepModule,
    pub head: usize,
    pub multiplicity: u64,
}

/// Result of spinning vectors: the subspace basis (rref rows) and the
/// action restricted to it.
pub struct SpunSubmodule {
    pub basis: FpMatrix,
    pub module: RepModule,
}

/// Internal helper for other modules of this crate that build residue
/// reductions and graded pieces.
pub(crate) fn engine_spinner(field: crate::exactla::PrimeField, dim: usize) -> engine::Spinner {
    engine::Spinner::new(field, dim)
}

pub(crate) fn drop_zero_rows_pub(m: &FpMatrix) -> FpMatrix {
    engine::drop_zero_rows(m)
}

impl GroupAlgebra {
    fn make_module(&self, actions: Vec<FpMatrix>, dim: usize, provenance: Provenance) -> RepModule {
        debug_assert_eq!(actions.len(), self.group().generators().len());
        RepModule {
            alg_id: self.id(),
            dim,
            actions,
            provenance,
        }
    }

    /// Build a module without the full Cayley validation (used internally
    /// for by-construction-valid modules like graded pieces).
    pub(crate) fn module_unchecked(
        &self,
        actions: Vec<FpMatrix>,
        dim: usize,
        provenance: Provenance,
    ) -> RepModule {
        self.make_module(actions, dim, provenance)
    }

    pub(crate) fn check_module(&self, m: &RepModule) -> Result<()> {
        if m.alg_id != self.id() {
            return Err(Error::ParentMismatch);
        }
        Ok(())
    }

    /// The regular module: left multiplication on the group basis.
    pub fn regular_module(&self) -> RepModule {
        if let Some(m) = self.regular_cache.get() {
            return m.clone();
        }
        let n = self.dim();
        let actions = self
            .group()
            .generators()
            .iter()
            .map(|&g| {
                let mut m = FpMatrix::zero(self.field(), n, n);
                for h in 0..n {
                    m.set(self.group().mul(g, h), h, 1);
                }
                m
            })
            .collect();
        let m = self.make_module(actions, n, Provenance::Regular);
        let _ = self.regular_cache.set(m.clone());
        m
    }

    /// The one-dimensional trivial module.
    pub fn trivial_module(&self) -> RepModule {
        let actions = vec![FpMatrix::identity(self.field(), 1); self.group().generators().len()];
        self.make_module(actions, 1, Provenance::Derived)
    }

    /// Build a module from explicit generator action matrices, validating
    /// every Cayley relation.
    pub fn module_from_actions(
        &self,
        actions: Vec<FpMatrix>,
        provenance: Provenance,
    ) -> Result<RepModule> {
        let gens = self.group().generators();
        if actions.len() != gens.len() {
            return Err(Error::ModuleFile(format!(
                "expected {} action matrices, got {}",
                gens.len(),
                actions.len()
            )));
        }
        let dim = if actions.is_empty() {
            0
        } else {
            actions[0].rows()
        };
        for a in &actions {
            if a.rows() != dim || a.cols() != dim {
                return Err(Error::ModuleFile(
                    "action matrices must be square of equal size".into(),
                ));
            }
            if a.field() != self.field() {
                return Err(Error::ModuleFile(
                    "action matrix over the wrong field".into(),
                ));
            }
        }
        let m = self.make_module(actions, dim, provenance);
        self.validate_module(&m)?;
        Ok(m)
    }

    /// Check that the map (generator word -> matrix product) respects every
    /// Cayley entry, and that the identity acts as the identity matrix.
    pub fn validate_module(&self, m: &RepModule) -> Result<()> {
        self.check_module(m)?;
        // the trivial group, or a 0-dim module: nothing to check
        if m.dim == 0 || self.group().order() == 1 {
            return Ok(());
        }
        let acts = self.all_element_actions(m);
        let n = self.group().order();
        if acts[0] != FpMatrix::identity(self.field(), m.dim) {
            return Err(Error::ModuleFile(
                "identity does not act as identity".into(),
            ));
        }
        for g in 0..n {
            for h in 0..n {
                if acts[g].mul(&acts[h]) != acts[self.group().mul(g, h)] {
                    return Err(Error::ModuleFile(format!(
                        "Cayley relation violated at ({g},{h})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Action matrix of one group element (product along its generator
    /// word).
    pub fn element_action(&self, m: &RepModule, elem: usize) -> FpMatrix {
        let mut acc = FpMatrix::identity(self.field(), m.dim);
        for &gi in self.group().word(elem) {
            acc = acc.mul(&m.actions[gi]);
        }
        acc
    }

    /// Action matrices of all group elements, computed along the BFS word
    /// tree (one matrix product per element).
    pub fn all_element_actions(&self, m: &RepModule) -> Vec<FpMatrix> {
        let n = self.group().order();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&e| self.group().word(e).len());
        let mut acts: Vec<Option<FpMatrix>> = vec![None; n];
        for e in order {
            let w = self.group().word(e);
            if w.is_empty() {
                acts[e] = Some(FpMatrix::identity(self.field(), m.dim));
            } else {
                let prefix = self.group().eval_word(&w[..w.len() - 1]);
                let prev = acts[prefix].as_ref().expect("BFS prefix already computed");
                acts[e] = Some(prev.mul(&m.actions[w[w.len() - 1]]));
            }
        }
        acts.into_iter()
            .map(|a| a.expect("all elements reached"))
            .collect()
    }

    /// Matrix by which an algebra element acts on a module.
    pub fn algebra_element_action(&self, m: &RepModule, a: &AlgElement) -> FpMatrix {
        let acts = self.all_element_actions(m);
        let mut out = FpMatrix::zero(self.field(), m.dim, m.dim);
        for (g, &c) in a.coeffs().iter().enumerate() {
            if c != 0 {
                out = out.add(&acts[g].scale(c));
            }
        }
        out
    }

    /// Smallest action-closed subspace containing the given vectors,
    /// together with the module structure on it.
    pub fn spin(&self, m: &RepModule, vectors: &[Vec<u64>]) -> SpunSubmodule {
        let basis = engine::spin_rows(self.field(), m.dim, &m.actions, vectors);
        let actions = engine::submodule_actions(&m.actions, &basis);
        let module = self.make_module(actions, basis.rows(), Provenance::Derived);
        SpunSubmodule { basis, module }
    }

    /// Quotient of `m` by an invariant subspace (rref basis rows).
    pub fn quotient_module(&self, m: &RepModule, sub_basis: &FpMatrix) -> RepModule {
        let actions = engine::quotient_actions(&m.actions, sub_basis, m.dim);
        self.make_module(actions, m.dim - sub_basis.rows(), Provenance::Derived)
    }

    /// Direct sum; actions are block diagonal.
    pub fn direct_sum(&self, parts: &[&RepModule]) -> RepModule {
        let total: usize = parts.iter().map(|m| m.dim).sum();
        let ngens = self.group().generators().len();
        let mut actions = Vec::with_capacity(ngens);
        for gi in 0..ngens {
            let mut big = FpMatrix::zero(self.field(), total, total);
            let mut off = 0;
            for m in parts {
                for i in 0..m.dim {
                    for j in 0..m.dim {
                        let v = m.actions[gi].get(i, j);
                        if v != 0 {
                            big.set(off + i, off + j, v);
                        }
                    }
                }
                off += m.dim;
            }
            actions.push(big);
        }
        self.make_module(actions, total, Provenance::Derived)
    }

    /// Diagonal tensor product: `g` acts by the Kronecker product.
    pub fn tensor_diagonal(&self, m: &RepModule, n: &RepModule) -> RepModule {
        let actions = m
            .actions
            .iter()
            .zip(&n.actions)
            .map(|(a, b)| a.kronecker(b))
            .collect();
        self.make_module(actions, m.dim * n.dim, Provenance::Derived)
    }

    // ---- registry and chop ----

    pub(crate) fn ensure_registry(&self) -> Result<()> {
        {
            let reg = self.registry.read().unwrap();
            if reg.canonical.is_some() {
                return Ok(());
            }
        }
        let regular = self.regular_module();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        self.chop_discovery(&regular.actions, regular.dim, &mut rng)?;
        let mut reg = self.registry.write().unwrap();
        if reg.canonical.is_none() {
            let mut order: Vec<usize> = (0..reg.entries.len()).collect();
            order.sort_by_key(|&i| (reg.entries[i].dim, i));
            let mut inverse = vec![0usize; order.len()];
            for (canon, &disc) in order.iter().enumerate() {
                inverse[disc] = canon;
            }
            reg.canonical = Some(order);
            reg.canonical_of_discovery = inverse;
        }
        Ok(())
    }

    /// The simple modules, in canonical order.
    pub fn simples(&self) -> Result<Vec<SimpleInfo>> {
        self.ensure_registry()?;
        let reg = self.registry.read().unwrap();
        let order = reg.canonical.as_ref().expect("registry initialized");
        Ok(order
            .iter()
            .enumerate()
            .map(|(id, &disc)| SimpleInfo {
                id,
                dim: reg.entries[disc].dim,
                endo_dim: reg.entries[disc].endo_dim,
            })
            .collect())
    }

    /// The simple module with the given canonical id.
    pub fn simple_module(&self, id: usize) -> Result<RepModule> {
        self.ensure_registry()?;
        let reg = self.registry.read().unwrap();
        let order = reg.canonical.as_ref().expect("registry initialized");
        let disc = *order
            .get(id)
            .ok_or_else(|| Error::Internal(format!("no simple with id {id}")))?;
        let e = &reg.entries[disc];
        Ok(RepModule {
            alg_id: self.id(),
            dim: e.dim,
            actions: e.actions.clone(),
            provenance: Provenance::Derived,
        })
    }

    pub fn num_simples(&self) -> Result<usize> {
        Ok(self.simples()?.len())
    }

    /// Composition multiset of a module. Output is independent of the
    /// seed; the seed only steers the search.
    pub fn chop(&self, m: &RepModule, seed: u64) -> Result<CompositionMultiset> {
        self.check_module(m)?;
        self.ensure_registry()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let by_discovery = self.chop_discovery(&m.actions, m.dim, &mut rng)?;
        let reg = self.registry.read().unwrap();
        let n = reg.entries.len();
        let mut counts = vec![0u64; n];
        for (disc, c) in by_discovery {
            counts[reg.canonical_of_discovery[disc]] += c;
        }
        // dimension bookkeeping must hold after every chop
        let total: u64 = counts
            .iter()
            .enumerate()
            .map(|(id, &c)| {
                let disc = reg.canonical.as_ref().unwrap()[id];
                c * reg.entries[disc].dim as u64
            })
            .sum();
        if total != m.dim as u64 {
            return Err(Error::Internal(format!(
                "chop bookkeeping: factors sum to {total}, module has dim {}",
                m.dim
            )));
        }
        Ok(CompositionMultiset(counts))
    }

    fn chop_discovery(
        &self,
        actions: &[FpMatrix],
        dim: usize,
        rng: &mut ChaCha8Rng,
    ) -> Result<HashMap<usize, u64>> {
        let mut counts: HashMap<usize, u64> = HashMap::new();
        let mut stack: Vec<(Vec<FpMatrix>, usize)> = vec![(actions.to_vec(), dim)];
        while let Some((gens, d)) = stack.pop() {
            if d == 0 {
                continue;
            }
            match engine::split(self.field(), d, &gens, rng)? {
                engine::SplitOutcome::Irreducible => {
                    let id = self.identify_or_register(&gens, d)?;
                    *counts.entry(id).or_insert(0) += 1;
                }
                engine::SplitOutcome::Split(basis) => {
                    let sub = engine::submodule_actions(&gens, &basis);
                    let quo = engine::quotient_actions(&gens, &basis, d);
                    let k = basis.rows();
                    stack.push((sub, k));
                    stack.push((quo, d - k));
                }
            }
        }
        Ok(counts)
    }

    fn identify_or_register(&self, gens: &[FpMatrix], dim: usize) -> Result<usize> {
        {
            let reg = self.registry.read().unwrap();
            for (idx, e) in reg.entries.iter().enumerate() {
                if e.dim == dim && engine::hom_nonzero(self.field(), dim, gens, e.dim, &e.actions) {
                    return Ok(idx);
                }
            }
            if reg.canonical.is_some() {
                return Err(Error::Internal(
                    "new simple module discovered after registry freeze".into(),
                ));
            }
        }
        let mut reg = self.registry.write().unwrap();
        for (idx, e) in reg.entries.iter().enumerate() {
            if e.dim == dim && engine::hom_nonzero(self.field(), dim, gens, e.dim, &e.actions) {
                return Ok(idx);
            }
        }
        let endo_dim = engine::hom_basis(self.field(), dim, gens, dim, gens).len();
        reg.entries.push(SimpleEntry {
            actions: gens.to_vec(),
            dim,
            endo_dim,
        });
        Ok(reg.entries.len() - 1)
    }

    /// Basis of intertwiners M -> N (matrices of shape `dim N x dim M`).
    pub fn hom_space(&self, m: &RepModule, n: &RepModule) -> Result<Vec<FpMatrix>> {
        self.check_module(m)?;
        self.check_module(n)?;
        Ok(engine::hom_basis(
            self.field(),
            m.dim,
            &m.actions,
            n.dim,
            &n.actions,
        ))
    }

    pub fn are_isomorphic_simples(&self, m: &RepModule, n: &RepModule) -> Result<bool> {
        Ok(m.dim == n.dim && !self.hom_space(m, n)?.is_empty())
    }

    // ---- restriction and induction ----

    /// The group algebra of a subgroup over the same field, cached per
    /// element set.
    pub fn subgroup_algebra(&self, sub: &Subgroup) -> Arc<GroupAlgebra> {
        let key: Vec<usize> = sub.elements().to_vec();
        if let Some(a) = self.sub_algebras.read().unwrap().get(&key) {
            return Arc::clone(a);
        }
        let alg = GroupAlgebra::new(Arc::clone(sub.group()), self.field());
        let mut w = self.sub_algebras.write().unwrap();
        Arc::clone(w.entry(key).or_insert(alg))
    }

    /// Restrict a module to a subgroup: actions of the subgroup's
    /// generators, evaluated through the parent representation.
    pub fn restrict(&self, m: &RepModule, sub: &Subgroup) -> (Arc<GroupAlgebra>, RepModule) {
        let sub_alg = self.subgroup_algebra(sub);
        let actions: Vec<FpMatrix> = sub
            .group()
            .generators()
            .iter()
            .map(|&sg| self.element_action(m, sub.to_parent_index(sg)))
            .collect();
        let module = RepModule {
            alg_id: sub_alg.id(),
            dim: m.dim,
            actions,
            provenance: Provenance::Derived,
        };
        (sub_alg, module)
    }

    /// Induce a module of a subgroup up to this algebra's group. Basis is
    /// (coset representative) x (basis of n); generators permute cosets
    /// with subgroup-valued cocycle blocks.
    pub fn induce(&self, n: &RepModule, sub: &Subgroup) -> Result<RepModule> {
        let sub_alg = self.subgroup_algebra(sub);
        sub_alg.check_module(n)?;
        let group = self.group();
        let reps = sub.left_coset_reps();
        let r = reps.len();
        let d = n.dim;
        // parent element -> which coset
        let mut coset_of = vec![usize::MAX; group.order()];
        for (i, &rep) in reps.iter().enumerate() {
            for &h in sub.elements() {
                coset_of[group.mul(rep, h)] = i;
            }
        }
        let mut actions = Vec::new();
        for &a in group.generators() {
            let mut big = FpMatrix::zero(self.field(), r * d, r * d);
            for (i, &rep) in reps.iter().enumerate() {
                let y = group.mul(a, rep);
                let j = coset_of[y];
                let h_parent = group.mul(group.inv(reps[j]), y);
                let h_sub = sub
                    .to_sub_index(h_parent)
                    .ok_or_else(|| Error::Internal("coset arithmetic left the subgroup".into()))?;
                let block = sub_alg.element_action(n, h_sub);
                for bi in 0..d {
                    for bj in 0..d {
                        let v = block.get(bi, bj);
                        if v != 0 {
                            big.set(j * d + bi, i * d + bj, v);
                        }
                    }
                }
            }
            actions.push(big);
        }
        Ok(self.make_module(actions, r * d, Provenance::Induced))
    }

    // ---- projectives ----

    /// The projective indecomposables, aligned index-by-index with the
    /// canonical simples via their heads.
    ///
    /// Each idempotent is lifted independently (not as an orthogonal
    /// family): multiplicities come from the semisimple quotient, so
    /// pairwise orthogonality after lifting is not required.
    pub fn pims(&self, seed: u64) -> Result<Arc<Vec<Pim>>> {
        if seed == 1 {
            return cached(&self.pims_cache, || self.compute_pims(1).map(Arc::new));
        }
        Ok(Arc::new(self.compute_pims(seed)?))
    }

    fn compute_pims(&self, seed: u64) -> Result<Vec<Pim>> {
        let idems = self.semisimple_primitive_idempotents(seed)?;
        let rad = self.radical()?;
        let regular = self.regular_module();
        let nsimples = self.num_simples()?;
        let mut by_head: Vec<Option<(AlgElement, RepModule)>> = vec![None; nsimples];
        let mut mults = vec![0u64; nsimples];
        for ebar in &idems {
            let e = self.lift_idempotent(ebar, &rad)?;
            let spun = self.spin(&regular, &[e.coeffs().to_vec()]);
            let mut pim_module = spun.module;
            pim_module.provenance = Provenance::Pim;
            let head_id = self.head_simple_id(&pim_module)?;
            mults[head_id] += 1;
            if by_head[head_id].is_none() {
                by_head[head_id] = Some((e, pim_module));
            }
        }
        let simples = self.simples()?;
        let mut out = Vec::with_capacity(nsimples);
        for (id, slot) in by_head.into_iter().enumerate() {
            let (idempotent, module) = slot.ok_or_else(|| {
                Error::Internal(format!("no idempotent found covering simple {id}"))
            })?;
            out.push(Pim {
                idempotent,
                module,
                head: id,
                multiplicity: mults[id],
            });
        }
        // dim A = sum of m_i * dim P_i
        let total: u64 = out
            .iter()
            .map(|p| p.multiplicity * p.module.dim as u64)
            .sum();
        if total != self.dim() as u64 {
            return Err(Error::Internal(format!(
                "PIM bookkeeping: sum m_i dim P_i = {total}, dim A = {}",
                self.dim()
            )));
        }
        let _ = simples;
        Ok(out)
    }

    /// Basis rows of rad(A) . M inside M.
    pub fn radical_submodule(&self, m: &RepModule) -> Result<FpMatrix> {
        let rad = self.radical()?;
        let mut sp = engine::Spinner::new(self.field(), m.dim);
        for i in 0..rad.basis().rows() {
            let a = AlgElement {
                alg_id: self.id(),
                coeffs: rad.basis().row(i).to_vec(),
            };
            let act = self.algebra_element_action(m, &a);
            for col in 0..m.dim {
                let v: Vec<u64> = (0..m.dim).map(|r| act.get(r, col)).collect();
                sp.insert(&v);
            }
        }
        Ok(sp.basis())
    }

    /// The head M / rad(A) M.
    pub fn head(&self, m: &RepModule) -> Result<RepModule> {
        let jm = self.radical_submodule(m)?;
        Ok(self.quotient_module(m, &jm))
    }

    fn head_simple_id(&self, pim: &RepModule) -> Result<usize> {
        let head = self.head(pim)?;
        let simples = self.simples()?;
        for s in &simples {
            if s.dim == head.dim {
                let sm = self.simple_module(s.id)?;
                if self.are_isomorphic_simples(&head, &sm)? {
                    return Ok(s.id);
                }
            }
        }
        Err(Error::Internal(
            "PIM head is not a registered simple".into(),
        ))
    }

    /// Multiplicities of each PIM in the projective cover of `m`, and the
    /// cover's total dimension.
    pub fn projective_cover_dims(&self, m: &RepModule, seed: u64) -> Result<(Vec<u64>, usize)> {
        let head = self.head(m)?;
        let counts = self.chop(&head, seed)?;
        let pims = self.pims(seed)?;
        let total: u64 = counts
            .counts()
            .iter()
            .zip(pims.iter())
            .map(|(&c, p)| c * p.module.dim as u64)
            .sum();
        Ok((counts.0, total as usize))
    }

    /// A module is projective exactly when it has the dimension of the
    /// projective cover of its head.
    pub fn is_projective(&self, m: &RepModule, seed: u64) -> Result<bool> {
        let (_, cover_dim) = self.projective_cover_dims(m, seed)?;
        debug_assert!(cover_dim >= m.dim);
        Ok(cover_dim == m.dim)
    }

    /// PIM multiplicity vector of a projective module (Krull-Schmidt).
    pub fn decompose_projective(&self, m: &RepModule, seed: u64) -> Result<Vec<u64>> {
        let (counts, cover_dim) = self.projective_cover_dims(m, seed)?;
        if cover_dim != m.dim {
            return Err(Error::NotProjective);
        }
        Ok(counts)
    }
}

// ---------------------------------------------------------------------------
// module files
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct ActionEntry {
    generator: usize,
    matrix: Vec<Vec<u64>>,
}

#[derive(Serialize, Deserialize)]
struct ModuleFile {
    group: String,
    coeff: String,
    dim: usize,
    actions: Vec<ActionEntry>,
}

/// A module loaded from disk, over whichever coefficient ring the file
/// declared.
pub enum LoadedModule {
    Field(Arc<GroupAlgebra>, RepModule),
    Chain(
        Arc<crate::groupalg::ChainGroupAlgebra>,
        crate::artinring::ChainRepModule,
    ),
}

/// Read a module file: `{"group": spec, "coeff": spec, "dim": d,
/// "actions": [{"generator": i, "matrix": [[...]]}]}`.
pub fn load_module(path: &str) -> Result<LoadedModule> {
    let text = std::fs::read_to_string(path)?;
    parse_module(&text)
}

pub fn parse_module(text: &str) -> Result<LoadedModule> {
    let mf: ModuleFile = serde_json::from_str(text)?;
    let group = crate::groups::Group::parse(&mf.group)?;
    let coeff = crate::artinring::CoeffSpec::parse(&mf.coeff)?;
    let ngens = group.generators().len();
    if mf.actions.len() != ngens {
        return Err(Error::ModuleFile(format!(
            "group {} has {} generators, file provides {} actions",
            mf.group,
            ngens,
            mf.actions.len()
        )));
    }
    let mut by_gen: Vec<Option<&ActionEntry>> = vec![None; ngens];
    for a in &mf.actions {
        if a.generator >= ngens {
            return Err(Error::ModuleFile(format!(
                "generator index {} out of range",
                a.generator
            )));
        }
        if by_gen[a.generator].replace(a).is_some() {
            return Err(Error::ModuleFile(format!(
                "duplicate action for generator {}",
                a.generator
            )));
        }
    }
    let read_matrix = |entry: &ActionEntry| -> Result<Vec<Vec<u64>>> {
        if entry.matrix.len() != mf.dim || entry.matrix.iter().any(|r| r.len() != mf.dim) {
            return Err(Error::ModuleFile(format!(
                "action for generator {} is not {d}x{d}",
                entry.generator,
                d = mf.dim
            )));
        }
        Ok(entry.matrix.clone())
    };
    match coeff {
        crate::artinring::CoeffSpec::Field(f) => {
            let alg = GroupAlgebra::new(group, f);
            let mut actions = Vec::with_capacity(ngens);
            for slot in by_gen {
                let entry = slot.expect("all generators covered");
                let rows = read_matrix(entry)?;
                for r in &rows {
                    for &x in r {
                        if x >= f.p() {
                            return Err(Error::ModuleFile(format!(
                                "entry {x} is not a canonical residue mod {}",
                                f.p()
                            )));
                        }
                    }
                }
                actions.push(FpMatrix::from_rows(f, &rows));
            }
            let m = alg.module_from_actions(actions, Provenance::File)?;
            Ok(LoadedModule::Field(alg, m))
        }
        crate::artinring::CoeffSpec::Chain(ring) => {
            let alg = crate::groupalg::ChainGroupAlgebra::new(group, ring);
            let mut actions = Vec::with_capacity(ngens);
            for slot in by_gen {
                let entry = slot.expect("all generators covered");
                let rows = read_matrix(entry)?;
                for r in &rows {
                    for &x in r {
                        if x >= ring.size() {
                            return Err(Error::ModuleFile(format!(
                                "entry {x} is not a canonical residue in {ring}"
                            )));
                        }
                    }
                }
                actions.push(crate::exactla::ChainMatrix::from_rows(ring, &rows));
            }
            let m = crate::artinring::chain_module_from_actions(&alg, actions)?;
            Ok(LoadedModule::Chain(alg, m))
        }
    }
}

/// Serialize a field module in the module-file format.
pub fn module_to_json(alg: &GroupAlgebra, m: &RepModule) -> serde_json::Value {
    let actions: Vec<ActionEntry> = m
        .actions()
        .iter()
        .enumerate()
        .map(|(i, a)| ActionEntry {
            generator: i,
            matrix: a.row_vecs(),
        })
        .collect();
    serde_json::to_value(ModuleFile {
        group: alg.group().spec_string().to_string(),
        coeff: format!("F{}", alg.field().p()),
        dim: m.dim(),
        actions,
    })
    .expect("module serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::PrimeField;
    use crate::groups::Group;

    fn algebra(spec: &str, p: u64) -> Arc<GroupAlgebra> {
        GroupAlgebra::new(Group::parse(spec).unwrap(), PrimeField::new(p).unwrap())
    }

    #[test]
    fn regular_c2_f2() {
        let alg = algebra("C2", 2);
        let reg = alg.regular_module();
        assert_eq!(reg.dim(), 2);
        assert_eq!(reg.actions()[0].row_vecs(), vec![vec![0, 1], vec![1, 0]]);
        alg.validate_module(&reg).unwrap();
    }

    #[test]
    fn regular_s3_f3_validates() {
        let alg = algebra("S3", 3);
        let reg = alg.regular_module();
        assert_eq!(reg.dim(), 6);
        alg.validate_module(&reg).unwrap();
        let acts = alg.all_element_actions(&reg);
        assert_eq!(acts[0], FpMatrix::identity(alg.field(), 6));
    }

    #[test]
    fn chop_regular_f2c3() {
        // F_2[C3] = F_2 x F_4: one trivial simple and one 2-dimensional
        let alg = algebra("C3", 2);
        let counts = alg.chop(&alg.regular_module(), 1).unwrap();
        assert_eq!(counts.counts(), &[1, 1]);
        let simples = alg.simples().unwrap();
        assert_eq!(simples.len(), 2);
        assert_eq!((simples[0].dim, simples[1].dim), (1, 2));
        assert_eq!((simples[0].endo_dim, simples[1].endo_dim), (1, 2));
    }

    #[test]
    fn chop_regular_fpcp() {
        // F_p[C_p] is local: p copies of the trivial module
        for p in [2u64, 3, 5] {
            let alg = algebra(&format!("C{p}"), p);
            let counts = alg.chop(&alg.regular_module(), 1).unwrap();
            assert_eq!(counts.counts(), &[p], "F_{p}[C_{p}]");
            assert_eq!(alg.simples().unwrap()[0].dim, 1);
        }
    }

    #[test]
    fn chop_zero_module() {
        let alg = algebra("C2", 2);
        let zero = alg
            .module_from_actions(vec![FpMatrix::zero(alg.field(), 0, 0)], Provenance::Derived)
            .unwrap();
        let counts = alg.chop(&zero, 1).unwrap();
        assert!(counts.counts().iter().all(|&c| c == 0));
    }

    #[test]
    fn chop_seed_independent() {
        for (spec, p) in [("S3", 2u64), ("S3", 3), ("D8", 2), ("Q8", 2), ("A4", 2)] {
            let alg = algebra(spec, p);
            let reg = alg.regular_module();
            let c1 = alg.chop(&reg, 1).unwrap();
            let c2 = alg.chop(&reg, 2).unwrap();
            let c3 = alg.chop(&reg, 3).unwrap();
            assert_eq!(c1, c2, "{spec} p={p}");
            assert_eq!(c1, c3, "{spec} p={p}");
        }
    }

    #[test]
    fn spin_of_u_is_trivial_line() {
        let alg = algebra("C2", 2);
        let reg = alg.regular_module();
        let spun = alg.spin(&reg, &[vec![1, 1]]);
        assert_eq!(spun.module.dim(), 1);
        // action-closed: generator fixes the line
        assert_eq!(spun.module.actions()[0].get(0, 0), 1);
    }

    #[test]
    fn spin_of_basis_is_everything() {
        let alg = algebra("S3", 3);
        let reg = alg.regular_module();
        let seeds: Vec<Vec<u64>> = (0..6)
            .map(|i| (0..6).map(|j| u64::from(i == j)).collect())
            .collect();
        assert_eq!(alg.spin(&reg, &seeds).module.dim(), 6);
    }

    #[test]
    fn hom_space_f2c3() {
        let alg = algebra("C3", 2);
        alg.ensure_registry().unwrap();
        let simples = alg.simples().unwrap();
        let triv = alg.simple_module(0).unwrap();
        let twodim = alg.simple_module(1).unwrap();
        assert_eq!(simples[1].dim, 2);
        // End of the 2-dim simple is F_4: dimension 2 over F_2
        let endo = alg.hom_space(&twodim, &twodim).unwrap();
        assert_eq!(endo.len(), 2);
        // closed under multiplication
        for a in &endo {
            for b in &endo {
                let prod = a.mul(b);
                // membership: solve in the span
                let mut sp = engine::Spinner::new(alg.field(), 4);
                for e in &endo {
                    let flat: Vec<u64> = (0..2)
                        .flat_map(|i| (0..2).map(|j| e.get(i, j)).collect::<Vec<_>>())
                        .collect();
                    sp.insert(&flat);
                }
                let flat: Vec<u64> = (0..2)
                    .flat_map(|i| (0..2).map(|j| prod.get(i, j)).collect::<Vec<_>>())
                    .collect();
                assert!(!sp.insert(&flat), "endo ring not closed under product");
            }
        }
        // off-diagonal hom vanishes
        assert!(alg.hom_space(&triv, &twodim).unwrap().is_empty());
        assert!(alg.hom_space(&twodim, &triv).unwrap().is_empty());
        // identity always intertwines M -> M
        assert!(!alg.hom_space(&triv, &triv).unwrap().is_empty());
    }

    #[test]
    fn tensor_with_trivial() {
        let alg = algebra("S3", 2);
        let reg = alg.regular_module();
        let triv = alg.trivial_module();
        let t = alg.tensor_diagonal(&triv, &reg);
        assert_eq!(t.dim(), 6);
        assert_eq!(alg.chop(&t, 1).unwrap(), alg.chop(&reg, 1).unwrap());
    }

    #[test]
    fn tensor_symmetry() {
        let alg = algebra("S3", 3);
        alg.ensure_registry().unwrap();
        let a = alg.simple_module(1).unwrap();
        let b = alg.regular_module();
        let ab = alg.tensor_diagonal(&a, &b);
        let ba = alg.tensor_diagonal(&b, &a);
        assert_eq!(alg.chop(&ab, 1).unwrap(), alg.chop(&ba, 1).unwrap());
    }

    #[test]
    fn tensor_with_regular_is_free() {
        // kG tensor M is free of rank dim M
        let alg = algebra("C6", 3);
        let reg = alg.regular_module();
        let m = alg.simple_module(0).unwrap();
        let two = alg.direct_sum(&[&m, &m]);
        let t = alg.tensor_diagonal(&reg, &two);
        let expected = alg.chop(&reg, 1).unwrap().scale(2);
        assert_eq!(alg.chop(&t, 1).unwrap(), expected);
    }

    #[test]
    fn restrict_regular_is_free() {
        let alg = algebra("S3", 3);
        let g = Arc::clone(alg.group());
        let syl = g.sylow_subgroup(3);
        let (sub_alg, res) = alg.restrict(&alg.regular_module(), &syl);
        let sub_reg = sub_alg.regular_module();
        let expected = sub_alg.chop(&sub_reg, 1).unwrap().scale(2); // index 2
        assert_eq!(sub_alg.chop(&res, 1).unwrap(), expected);
    }

    #[test]
    fn induce_trivial_from_trivial_subgroup_is_regular() {
        let alg = algebra("S3", 2);
        let g = Arc::clone(alg.group());
        let triv_sub = g.trivial_subgroup();
        let sub_alg = alg.subgroup_algebra(&triv_sub);
        let one = sub_alg.trivial_module();
        let ind = alg.induce(&one, &triv_sub).unwrap();
        assert_eq!(ind.dim(), 6);
        alg.validate_module(&ind).unwrap();
        assert_eq!(
            alg.chop(&ind, 1).unwrap(),
            alg.chop(&alg.regular_module(), 1).unwrap()
        );
    }

    #[test]
    fn induce_trivial_from_a3_to_s3() {
        // over F_3: the induced module splits as trivial + sign
        let alg = algebra("S3", 3);
        let g = Arc::clone(alg.group());
        let a3 = g.sylow_subgroup(3);
        let sub_alg = alg.subgroup_algebra(&a3);
        let one = sub_alg.trivial_module();
        let ind = alg.induce(&one, &a3).unwrap();
        assert_eq!(ind.dim(), 2);
        alg.validate_module(&ind).unwrap();
        let counts = alg.chop(&ind, 1).unwrap();
        assert_eq!(counts.counts(), &[1, 1], "trivial and sign each once");
    }

    #[test]
    fn restrict_to_whole_group_is_identity() {
        let alg = algebra("S3", 2);
        let g = Arc::clone(alg.group());
        let full = g.full_subgroup();
        let m = alg.simple_module(1).unwrap();
        let (sub_alg, res) = alg.restrict(&m, &full);
        // same group content: the restricted module has identical actions
        assert_eq!(res.dim(), m.dim());
        assert_eq!(res.actions(), m.actions());
        assert_eq!(sub_alg.group().order(), 6);
    }

    #[test]
    fn induce_from_whole_group_is_identity() {
        let alg = algebra("S3", 2);
        let g = Arc::clone(alg.group());
        let full = g.full_subgroup();
        let sub_alg = alg.subgroup_algebra(&full);
        let n = sub_alg.regular_module();
        let ind = alg.induce(&n, &full).unwrap();
        assert_eq!(ind.dim(), n.dim());
        assert_eq!(
            alg.chop(&ind, 1).unwrap(),
            alg.chop(&alg.regular_module(), 1).unwrap()
        );
    }

    #[test]
    fn frobenius_reciprocity_dims() {
        let alg = algebra("S3", 3);
        let g = Arc::clone(alg.group());
        let c2 = g.sylow_subgroup(2);
        let sub_alg = alg.subgroup_algebra(&c2);
        for n_id in 0..sub_alg.num_simples().unwrap() {
            let n = sub_alg.simple_module(n_id).unwrap();
            let ind = alg.induce(&n, &c2).unwrap();
            for m_id in 0..alg.num_simples().unwrap() {
                let m = alg.simple_module(m_id).unwrap();
                let lhs = alg.hom_space(&ind, &m).unwrap().len();
                let (_, m_res) = alg.restrict(&m, &c2);
                let rhs = sub_alg.hom_space(&n, &m_res).unwrap().len();
                assert_eq!(lhs, rhs, "Frobenius reciprocity at ({n_id},{m_id})");
            }
        }
    }

    #[test]
    fn pims_f2s3() {
        let alg = algebra("S3", 2);
        let pims = alg.pims(1).unwrap();
        let dims: Vec<usize> = pims.iter().map(|p| p.module.dim()).collect();
        assert_eq!(dims, vec![2, 2]);
        let heads: Vec<usize> = pims.iter().map(|p| p.head).collect();
        assert_eq!(heads, vec![0, 1]);
        let mults: Vec<u64> = pims.iter().map(|p| p.multiplicity).collect();
        assert_eq!(mults, vec![1, 2]);
        // idempotents are exact
        for p in pims.iter() {
            let e = &p.idempotent;
            assert_eq!(alg.mul(e, e).unwrap(), *e);
        }
    }

    #[test]
    fn pims_local_algebra() {
        // F_p[C_p] has a single PIM: the regular module
        let alg = algebra("C3", 3);
        let pims = alg.pims(1).unwrap();
        assert_eq!(pims.len(), 1);
        assert_eq!(pims[0].module.dim(), 3);
        assert_eq!(pims[0].idempotent, alg.one());
    }

    #[test]
    fn pims_semisimple_are_simples() {
        let alg = algebra("C3", 2);
        let pims = alg.pims(1).unwrap();
        for p in pims.iter() {
            let s = alg.simple_module(p.head).unwrap();
            assert_eq!(p.module.dim(), s.dim());
            assert!(alg.are_isomorphic_simples(&p.module, &s).unwrap());
        }
    }

    #[test]
    fn cover_of_simple_is_pim() {
        let alg = algebra("S3", 2);
        let pims = alg.pims(1).unwrap();
        for (i, pim) in pims.iter().enumerate() {
            let s = alg.simple_module(i).unwrap();
            let (counts, total) = alg.projective_cover_dims(&s, 1).unwrap();
            let mut expected = vec![0u64; pims.len()];
            expected[i] = 1;
            assert_eq!(counts, expected);
            assert_eq!(total, pim.module.dim());
            // cover of a PIM is itself
            let (pc, pt) = alg.projective_cover_dims(&pim.module, 1).unwrap();
            assert_eq!(pc, expected);
            assert_eq!(pt, pim.module.dim());
        }
    }

    #[test]
    fn regular_cover_is_itself() {
        let alg = algebra("D8", 2);
        let reg = alg.regular_module();
        let (_, total) = alg.projective_cover_dims(&reg, 1).unwrap();
        assert_eq!(total, 8);
        assert!(alg.is_projective(&reg, 1).unwrap());
    }

    #[test]
    fn quotient_by_u_not_projective() {
        for (spec, p) in [("C2", 2u64), ("S3", 3), ("C6", 2), ("Q8", 2)] {
            let alg = algebra(spec, p);
            let reg = alg.regular_module();
            let u = alg.u_element();
            let spun = alg.spin(&reg, &[u.coeffs().to_vec()]);
            let q = alg.quotient_module(&reg, &spun.basis);
            assert!(!alg.is_projective(&q, 1).unwrap(), "{spec} p={p}");
            assert!(matches!(
                alg.decompose_projective(&q, 1),
                Err(Error::NotProjective)
            ));
        }
    }

    #[test]
    fn natural_module_f2s3_projective() {
        // the 2-dimensional simple of F_2[S3] is projective
        let alg = algebra("S3", 2);
        alg.ensure_registry().unwrap();
        let m = alg.simple_module(1).unwrap();
        assert_eq!(m.dim(), 2);
        assert!(alg.is_projective(&m, 1).unwrap());
        // its restriction to a C2 is free: g - 1 has rank 1
        let g = Arc::clone(alg.group());
        let c2 = g.sylow_subgroup(2);
        let (_, res) = alg.restrict(&m, &c2);
        let gm = &res.actions()[0];
        let diff = gm.sub(&FpMatrix::identity(alg.field(), 2));
        assert_eq!(diff.rank(), 1);
    }

    #[test]
    fn decompose_regular_f2s3() {
        let alg = algebra("S3", 2);
        let reg = alg.regular_module();
        let dec = alg.decompose_projective(&reg, 1).unwrap();
        assert_eq!(dec, vec![1, 2]);
    }

    #[test]
    fn decompose_pim_sums() {
        let alg = algebra("S3", 3);
        let pims = alg.pims(1).unwrap();
        let m = alg.direct_sum(&[&pims[0].module, &pims[0].module, &pims[1].module]);
        assert!(alg.is_projective(&m, 1).unwrap());
        assert_eq!(alg.decompose_projective(&m, 1).unwrap(), vec![2, 1]);
    }

    #[test]
    fn module_file_roundtrip() {
        let alg = algebra("S3", 2);
        alg.ensure_registry().unwrap();
        let m = alg.simple_module(1).unwrap();
        let json = module_to_json(&alg, &m).to_string();
        match parse_module(&json).unwrap() {
            LoadedModule::Field(alg2, m2) => {
                assert_eq!(m2.dim(), 2);
                assert_eq!(alg2.chop(&m2, 1).unwrap().counts(), &[0, 1]);
            }
            _ => panic!("expected field module"),
        }
    }

    #[test]
    fn module_file_rejects_corrupt() {
        let alg = algebra("C4", 2);
        let reg = alg.regular_module();
        let mut json = module_to_json(&alg, &reg);
        // corrupt one entry of the generator action
        json["actions"][0]["matrix"][0][0] = serde_json::json!(1);
        assert!(matches!(
            parse_module(&json.to_string()),
            Err(Error::ModuleFile(_))
        ));
    }
}
