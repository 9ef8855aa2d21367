//! MeatAxe internals: spinning, splitting, Norton certificates, hom
//! spaces. Everything here works on a bare action set (one matrix per
//! algebra generator) so the same engine serves group-algebra modules and
//! the regular module of a quotient algebra.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::exactla::{FpMatrix, PrimeField};
use crate::Result;

/// How many random algebra elements to try before the deterministic
/// fallback kicks in.
pub(crate) const SPLIT_ATTEMPTS: usize = 64;

/// Reduce `v` against a matrix in reduced row echelon form (pivot of each
/// row = first nonzero entry, normalized to 1, pivot columns clear
/// elsewhere). Returns the residual.
pub(crate) fn rref_reduce(basis: &FpMatrix, v: &[u64]) -> Vec<u64> {
    let f = basis.field();
    let mut v = v.to_vec();
    for i in 0..basis.rows() {
        let row = basis.row(i);
        let Some(p) = row.iter().position(|&x| x != 0) else {
            continue;
        };
        let c = v[p];
        if c != 0 {
            for (x, &r) in v.iter_mut().zip(row) {
                *x = f.sub(*x, f.mul(c, r));
            }
        }
    }
    v
}

pub(crate) fn drop_zero_rows(m: &FpMatrix) -> FpMatrix {
    let rows: Vec<Vec<u64>> = (0..m.rows())
        .map(|i| m.row(i).to_vec())
        .filter(|r| r.iter().any(|&x| x != 0))
        .collect();
    if rows.is_empty() {
        FpMatrix::zero(m.field(), 0, m.cols())
    } else {
        FpMatrix::from_rows(m.field(), &rows)
    }
}

pub(crate) fn pivots_of(rref: &FpMatrix) -> Vec<usize> {
    (0..rref.rows())
        .map(|i| {
            rref.row(i)
                .iter()
                .position(|&x| x != 0)
                .expect("zero row in rref basis")
        })
        .collect()
}

/// Solve `A c = rhs` (rows of `system` are the rows of A). Returns the
/// canonical solution with all free variables zero, or None if
/// inconsistent.
pub(crate) fn solve_linear(f: PrimeField, system: &[Vec<u64>], rhs: &[u64]) -> Option<Vec<u64>> {
    assert_eq!(system.len(), rhs.len());
    if system.is_empty() {
        return Some(vec![]);
    }
    let ncols = system[0].len();
    let mut aug_rows = Vec::with_capacity(system.len());
    for (row, &b) in system.iter().zip(rhs) {
        let mut r = row.clone();
        r.push(b);
        aug_rows.push(r);
    }
    let aug = FpMatrix::from_rows(f, &aug_rows).rref();
    let mut sol = vec![0u64; ncols];
    for (i, &p) in aug.pivots.iter().enumerate() {
        if p == ncols {
            return None; // pivot in the rhs column: inconsistent
        }
        sol[p] = aug.mat.get(i, ncols);
    }
    Some(sol)
}

/// Incremental reduced-row-echelon basis for spinning.
pub(crate) struct Spinner {
    field: PrimeField,
    dim: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl Spinner {
    pub fn new(field: PrimeField, dim: usize) -> Self {
        Spinner {
            field,
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    /// Insert a vector; returns true if the span grew.
    pub fn insert(&mut self, v: &[u64]) -> bool {
        let f = self.field;
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v[p];
            if c != 0 {
                for (x, &r) in v.iter_mut().zip(row) {
                    *x = f.sub(*x, f.mul(c, r));
                }
            }
        }
        let Some(c) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(v[c]);
        for x in v.iter_mut() {
            *x = f.mul(*x, inv);
        }
        for row in self.rows.iter_mut() {
            let rc = row[c];
            if rc != 0 {
                for (x, &nv) in row.iter_mut().zip(&v) {
                    *x = f.sub(*x, f.mul(rc, nv));
                }
            }
        }
        let pos = self.pivots.partition_point(|&p| p < c);
        self.rows.insert(pos, v);
        self.pivots.insert(pos, c);
        true
    }

    pub fn basis(&self) -> FpMatrix {
        if self.rows.is_empty() {
            FpMatrix::zero(self.field, 0, self.dim)
        } else {
            FpMatrix::from_rows(self.field, &self.rows)
        }
    }
}

/// Smallest action-closed subspace containing the seed vectors, as rref
/// basis rows.
pub(crate) fn spin_rows(
    field: PrimeField,
    dim: usize,
    gens: &[FpMatrix],
    seeds: &[Vec<u64>],
) -> FpMatrix {
    let mut sp = Spinner::new(field, dim);
    let mut queue: Vec<Vec<u64>> = Vec::new();
    for s in seeds {
        if sp.insert(s) {
            queue.push(s.clone());
        }
    }
    while let Some(v) = queue.pop() {
        for a in gens {
            let w = a.mul_vec(&v);
            if sp.insert(&w) {
                queue.push(w);
            }
        }
    }
    sp.basis()
}

/// Action matrices restricted to an invariant subspace given by rref
/// basis rows.
pub(crate) fn submodule_actions(gens: &[FpMatrix], basis: &FpMatrix) -> Vec<FpMatrix> {
    let piv = pivots_of(basis);
    let k = basis.rows();
    let f = basis.field();
    gens.iter()
        .map(|a| {
            let mut m = FpMatrix::zero(f, k, k);
            for j in 0..k {
                let w = a.mul_vec(basis.row(j));
                debug_assert!(
                    rref_reduce(basis, &w).iter().all(|&x| x == 0),
                    "subspace not invariant"
                );
                for (i, &p) in piv.iter().enumerate() {
                    m.set(i, j, w[p]);
                }
            }
            m
        })
        .collect()
}

/// Action matrices on the quotient by an invariant subspace; quotient
/// coordinates are the non-pivot columns of the basis.
pub(crate) fn quotient_actions(
    gens: &[FpMatrix],
    basis: &FpMatrix,
    ambient_dim: usize,
) -> Vec<FpMatrix> {
    let piv = pivots_of(basis);
    let f = basis.field();
    let free: Vec<usize> = (0..ambient_dim).filter(|c| !piv.contains(c)).collect();
    let q = free.len();
    gens.iter()
        .map(|a| {
            let mut m = FpMatrix::zero(f, q, q);
            for (j, &c) in free.iter().enumerate() {
                let mut e = vec![0u64; ambient_dim];
                e[c] = 1;
                let w = a.mul_vec(&e);
                let w = rref_reduce(basis, &w);
                for (i, &fc) in free.iter().enumerate() {
                    m.set(i, j, w[fc]);
                }
            }
            m
        })
        .collect()
}

/// Outcome of one splitting pass.
pub(crate) enum SplitOutcome {
    /// A proper nonzero invariant subspace, as rref basis rows.
    Split(FpMatrix),
    /// Certified irreducible (Norton).
    Irreducible,
}

/// Split a module or certify it irreducible.
///
/// Random algebra elements are linear combinations of up to three words of
/// length <= 3 in the generators. A characteristic polynomial factor of
/// multiplicity one permits Norton's certificate: spin one kernel vector
/// in the module and one transpose-kernel vector in the dual; if both spin
/// to everything the module is irreducible. After `SPLIT_ATTEMPTS` random
/// elements a deterministic sweep over the span of the first few word
/// matrices runs (only for p <= 3 and dim <= 12); past that the module is
/// reported undecided rather than guessed at.
pub(crate) fn split(
    field: PrimeField,
    dim: usize,
    gens: &[FpMatrix],
    rng: &mut ChaCha8Rng,
) -> Result<SplitOutcome> {
    assert!(dim > 0, "cannot split the zero module");
    if dim == 1 {
        return Ok(SplitOutcome::Irreducible);
    }
    let mut attempts = 0usize;
    for _ in 0..SPLIT_ATTEMPTS {
        attempts += 1;
        let theta = random_theta(field, dim, gens, rng);
        if let Some(outcome) = try_theta(field, dim, gens, &theta)? {
            return Ok(outcome);
        }
    }
    // deterministic fallback: enumerate the span of the first few word
    // matrices (BFS order), for tiny fields and dimensions only
    if field.p() <= 3 && dim <= 12 {
        let words = word_matrices(field, dim, gens, 8);
        let k = words.len();
        let total = field.p().pow(k as u32);
        for code in 1..total {
            attempts += 1;
            let mut theta = FpMatrix::zero(field, dim, dim);
            let mut c = code;
            for w in &words {
                let coeff = c % field.p();
                c /= field.p();
                if coeff != 0 {
                    theta = theta.add(&w.scale(coeff));
                }
            }
            if let Some(outcome) = try_theta(field, dim, gens, &theta)? {
                return Ok(outcome);
            }
        }
    }
    Err(Error::IrreducibilityUndecided {
        dim,
        p: field.p(),
        attempts,
    })
}

/// Distinct matrices of short generator words, in BFS order.
fn word_matrices(field: PrimeField, dim: usize, gens: &[FpMatrix], cap: usize) -> Vec<FpMatrix> {
    let mut out = vec![FpMatrix::identity(field, dim)];
    let mut frontier = out.clone();
    for _ in 0..3 {
        let mut next = Vec::new();
        for m in &frontier {
            for g in gens {
                let w = m.mul(g);
                if !out.contains(&w) {
                    out.push(w.clone());
                    next.push(w);
                    if out.len() >= cap {
                        return out;
                    }
                }
            }
        }
        frontier = next;
    }
    out
}

fn random_theta(
    field: PrimeField,
    dim: usize,
    gens: &[FpMatrix],
    rng: &mut ChaCha8Rng,
) -> FpMatrix {
    let p = field.p();
    let mut theta = FpMatrix::zero(field, dim, dim);
    let terms = rng.gen_range(1..=3usize);
    for _ in 0..terms {
        let mut w = FpMatrix::identity(field, dim);
        let len = rng.gen_range(0..=3usize);
        if !gens.is_empty() {
            for _ in 0..len {
                w = w.mul(&gens[rng.gen_range(0..gens.len())]);
            }
        }
        let c = rng.gen_range(1..p);
        theta = theta.add(&w.scale(c));
    }
    theta
}

fn try_theta(
    field: PrimeField,
    dim: usize,
    gens: &[FpMatrix],
    theta: &FpMatrix,
) -> Result<Option<SplitOutcome>> {
    let cp = theta.charpoly()?;
    let factors = cp.factor()?;
    for (q, mult) in &factors {
        let nq = q.eval_matrix(theta);
        let ker = nq.nullspace();
        if ker.rows() == 0 {
            continue;
        }
        // try to split off a submodule from kernel vectors
        for vi in 0..ker.rows().min(3) {
            let basis = spin_rows(field, dim, gens, &[ker.row(vi).to_vec()]);
            if basis.rows() < dim {
                return Ok(Some(SplitOutcome::Split(basis)));
            }
        }
        if *mult == 1 {
            // Norton: nullity equals the factor degree, so one vector each way decides
            if ker.rows() != q.degree().unwrap_or(0) {
                return Err(Error::Internal(
                    "multiplicity-one factor with unexpected nullity".into(),
                ));
            }
            let gens_t: Vec<FpMatrix> = gens.iter().map(|g| g.transpose()).collect();
            let kert = nq.transpose().nullspace();
            let dual = spin_rows(field, dim, &gens_t, &[kert.row(0).to_vec()]);
            if dual.rows() < dim {
                // the annihilator of a proper dual submodule is a proper submodule
                let perp = dual.nullspace().rref().mat;
                let perp = drop_zero_rows(&perp);
                debug_assert!(perp.rows() > 0 && perp.rows() < dim);
                return Ok(Some(SplitOutcome::Split(perp)));
            }
            return Ok(Some(SplitOutcome::Irreducible));
        }
    }
    Ok(None)
}

/// Descend into submodules until an irreducible one is found; returns its
/// basis rows in the ambient coordinates.
pub(crate) fn find_simple_submodule(
    field: PrimeField,
    dim: usize,
    gens: &[FpMatrix],
    seed: u64,
) -> Result<FpMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut transform = FpMatrix::identity(field, dim);
    let mut cur_gens = gens.to_vec();
    let mut cur_dim = dim;
    loop {
        match split(field, cur_dim, &cur_gens, &mut rng)? {
            SplitOutcome::Irreducible => return Ok(transform),
            SplitOutcome::Split(basis) => {
                cur_gens = submodule_actions(&cur_gens, &basis);
                transform = basis.mul(&transform);
                cur_dim = basis.rows();
            }
        }
    }
}

/// Basis of the space of intertwiners `{X : X a = b X for all generator
/// pairs}`, i.e. Hom(M_a, M_b) as matrices of shape `dim_b x dim_a`.
pub(crate) fn hom_basis(
    field: PrimeField,
    dim_a: usize,
    gens_a: &[FpMatrix],
    dim_b: usize,
    gens_b: &[FpMatrix],
) -> Vec<FpMatrix> {
    assert_eq!(gens_a.len(), gens_b.len());
    let unknowns = dim_a * dim_b;
    if unknowns == 0 {
        return Vec::new();
    }
    let mut rows = Vec::new();
    for (a, b) in gens_a.iter().zip(gens_b) {
        // (X a - b X)[i][j'] = sum_j X[i][j] a[j][j'] - sum_i' b[i][i'] X[i'][j']
        for i in 0..dim_b {
            for jp in 0..dim_a {
                let mut row = vec![0u64; unknowns];
                for j in 0..dim_a {
                    let idx = i * dim_a + j;
                    row[idx] = field.add(row[idx], a.get(j, jp));
                }
                for ip in 0..dim_b {
                    let idx = ip * dim_a + jp;
                    row[idx] = field.sub(row[idx], b.get(i, ip));
                }
                rows.push(row);
            }
        }
    }
    if rows.is_empty() {
        // no generators: every matrix intertwines
        let mut out = Vec::with_capacity(unknowns);
        for i in 0..dim_b {
            for j in 0..dim_a {
                let mut m = FpMatrix::zero(field, dim_b, dim_a);
                m.set(i, j, 1);
                out.push(m);
            }
        }
        return out;
    }
    let ns = FpMatrix::from_rows(field, &rows).nullspace();
    (0..ns.rows())
        .map(|r| {
            let flat = ns.row(r);
            let mut m = FpMatrix::zero(field, dim_b, dim_a);
            for i in 0..dim_b {
                for j in 0..dim_a {
                    m.set(i, j, flat[i * dim_a + j]);
                }
            }
            m
        })
        .collect()
}

pub(crate) fn hom_nonzero(
    field: PrimeField,
    dim_a: usize,
    gens_a: &[FpMatrix],
    dim_b: usize,
    gens_b: &[FpMatrix],
) -> bool {
    !hom_basis(field, dim_a, gens_a, dim_b, gens_b).is_empty()
}
