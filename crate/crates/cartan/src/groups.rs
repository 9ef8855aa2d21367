//! Finite groups as validated Cayley tables.
//!
//! Groups are capped at order 64 so that the constructor can afford a full
//! associativity scan (O(n^3) is at most 262k triples); everything built on
//! top of a `Group` can then trust the table. Elements are indices `0..n`
//! with the identity at 0. Each group carries a canonical generating set
//! (greedy, lexicographically least) and a minimal-length generator word
//! per element, which is what lets modules store one action matrix per
//! generator only.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::Deserialize;

use crate::error::Error;
use crate::exactla::fp::is_prime;
use crate::Result;

pub const MAX_ORDER: usize = 64;

/// A finite group given by its Cayley table.
#[derive(Clone)]
pub struct Group {
    order: usize,
    cayley: Vec<usize>, // row-major n x n
    names: Vec<String>,
    inverses: Vec<usize>,
    generators: Vec<usize>,
    words: Vec<Vec<usize>>, // per element, indices into `generators`
    spec: String,           // the spec string this was parsed from, or "table"
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Group({}, order {})", self.spec, self.order)
    }
}

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.cayley == other.cayley
    }
}
impl Eq for Group {}

#[derive(Deserialize)]
struct TableFile {
    order: usize,
    cayley: Vec<Vec<usize>>,
    names: Option<Vec<String>>,
}

impl Group {
    /// Multiply element indices.
    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.cayley[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn name(&self, e: usize) -> &str {
        &self.names[e]
    }

    pub fn spec_string(&self) -> &str {
        &self.spec
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// Generator word for an element: evaluating left-to-right products of
    /// generators yields the element. BFS construction makes it minimal for
    /// the canonical generator order.
    pub fn word(&self, e: usize) -> &[usize] {
        &self.words[e]
    }

    pub fn element_order(&self, e: usize) -> usize {
        let mut x = e;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, e);
            k += 1;
        }
        k
    }

    /// Validate a raw table and build the group. This is the only
    /// constructor; every named group goes through it.
    pub fn from_cayley(
        table: Vec<Vec<usize>>,
        names: Option<Vec<String>>,
        spec: String,
    ) -> Result<Arc<Group>> {
        let n = table.len();
        if n == 0 {
            return Err(Error::NotAGroup {
                axiom: "nonempty".into(),
                witness: "empty table".into(),
            });
        }
        if n > MAX_ORDER {
            return Err(Error::OrderLimitExceeded(n));
        }
        let mut cayley = Vec::with_capacity(n * n);
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotAGroup {
                    axiom: "square table".into(),
                    witness: format!("row {i} has length {}", row.len()),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(Error::NotAGroup {
                        axiom: "index range".into(),
                        witness: format!("entry ({i},{j}) = {v}"),
                    });
                }
                cayley.push(v);
            }
        }
        // identity at index 0
        for i in 0..n {
            if cayley[i] != i {
                return Err(Error::NotAGroup {
                    axiom: "identity".into(),
                    witness: format!("0*{i} = {}", cayley[i]),
                });
            }
            if cayley[i * n] != i {
                return Err(Error::NotAGroup {
                    axiom: "identity".into(),
                    witness: format!("{i}*0 = {}", cayley[i * n]),
                });
            }
        }
        // Latin square
        for i in 0..n {
            let mut seen_row = vec![false; n];
            let mut seen_col = vec![false; n];
            for j in 0..n {
                let r = cayley[i * n + j];
                if seen_row[r] {
                    return Err(Error::NotAGroup {
                        axiom: "Latin square".into(),
                        witness: format!("row {i} repeats {r}"),
                    });
                }
                seen_row[r] = true;
                let c = cayley[j * n + i];
                if seen_col[c] {
                    return Err(Error::NotAGroup {
                        axiom: "Latin square".into(),
                        witness: format!("column {i} repeats {c}"),
                    });
                }
                seen_col[c] = true;
            }
        }
        // full associativity scan
        for a in 0..n {
            for b in 0..n {
                let ab = cayley[a * n + b];
                for c in 0..n {
                    if cayley[ab * n + c] != cayley[a * n + cayley[b * n + c]] {
                        return Err(Error::NotAGroup {
                            axiom: "associativity".into(),
                            witness: format!("({a},{b},{c})"),
                        });
                    }
                }
            }
        }
        let mut inverses = vec![0usize; n];
        for a in 0..n {
            inverses[a] = (0..n)
                .find(|&b| cayley[a * n + b] == 0)
                .expect("Latin square has inverses");
        }
        let names = names.unwrap_or_else(|| (0..n).map(|i| format!("g{i}")).collect());
        if names.len() != n {
            return Err(Error::NotAGroup {
                axiom: "names length".into(),
                witness: format!("{} names for {n} elements", names.len()),
            });
        }

        let mut g = Group {
            order: n,
            cayley,
            names,
            inverses,
            generators: vec![],
            words: vec![],
            spec,
        };
        g.generators = g.greedy_generators();
        g.words = g.bfs_words();
        Ok(Arc::new(g))
    }

    /// Closure of a set of elements under multiplication.
    pub fn closure(&self, seed: &[usize]) -> Vec<usize> {
        let mut in_set = vec![false; self.order];
        in_set[0] = true;
        let mut list = vec![0usize];
        let mut frontier: VecDeque<usize> = VecDeque::from([0]);
        for &s in seed {
            if !in_set[s] {
                in_set[s] = true;
                list.push(s);
                frontier.push_back(s);
            }
        }
        while let Some(x) = frontier.pop_front() {
            for &s in seed {
                for y in [self.mul(x, s), self.mul(s, x)] {
                    if !in_set[y] {
                        in_set[y] = true;
                        list.push(y);
                        frontier.push_back(y);
                    }
                }
            }
        }
        list.sort_unstable();
        list
    }

    fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut generated = vec![0usize]; // trivial subgroup
        while generated.len() < self.order {
            let next = (1..self.order)
                .find(|e| generated.binary_search(e).is_err())
                .expect("group not exhausted");
            gens.push(next);
            generated = self.closure(&gens);
        }
        gens
    }

    fn bfs_words(&self) -> Vec<Vec<usize>> {
        let mut words: Vec<Option<Vec<usize>>> = vec![None; self.order];
        words[0] = Some(vec![]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (gi, &g) in self.generators.iter().enumerate() {
                let y = self.mul(x, g);
                if words[y].is_none() {
                    let mut w = words[x].clone().unwrap();
                    w.push(gi);
                    words[y] = Some(w);
                    queue.push_back(y);
                }
            }
        }
        words
            .into_iter()
            .map(|w| w.expect("generators generate the group"))
            .collect()
    }

    /// Evaluate a generator word.
    pub fn eval_word(&self, word: &[usize]) -> usize {
        word.iter()
            .fold(0usize, |acc, &gi| self.mul(acc, self.generators[gi]))
    }

    /// Conjugacy classes of elements, each sorted, classes ordered by least
    /// element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order];
        let mut classes = Vec::new();
        for e in 0..self.order {
            if seen[e] {
                continue;
            }
            let mut class = BTreeSet::new();
            for g in 0..self.order {
                class.insert(self.mul(self.mul(g, e), self.inv(g)));
            }
            let class: Vec<usize> = class.into_iter().collect();
            for &x in &class {
                seen[x] = true;
            }
            classes.push(class);
        }
        classes
    }

    // ---- subgroups ----

    pub fn subgroup(self: &Arc<Group>, elements: Vec<usize>) -> Result<Subgroup> {
        Subgroup::new(Arc::clone(self), elements)
    }

    pub fn trivial_subgroup(self: &Arc<Group>) -> Subgroup {
        Subgroup::new(Arc::clone(self), vec![0]).expect("trivial subgroup is valid")
    }

    pub fn full_subgroup(self: &Arc<Group>) -> Subgroup {
        Subgroup::new(Arc::clone(self), (0..self.order).collect())
            .expect("whole group is a subgroup")
    }

    /// A Sylow p-subgroup, deterministic: among all Sylow p-subgroups the
    /// one with the lexicographically least element list. Order 1 if p
    /// does not divide |G|.
    pub fn sylow_subgroup(self: &Arc<Group>, p: u64) -> Subgroup {
        assert!(is_prime(p), "sylow_subgroup needs a prime");
        let n = self.order as u64;
        let mut pk = 1u64;
        while n % (pk * p) == 0 {
            pk *= p;
        }
        if pk == 1 {
            return self.trivial_subgroup();
        }
        // grow a p-subgroup inside its normalizer until Sylow order
        let mut h: Vec<usize> = vec![0];
        while (h.len() as u64) < pk {
            let normalizer = self.normalizer(&h);
            let x = normalizer
                .iter()
                .copied()
                .find(|&x| {
                    if h.binary_search(&x).is_ok() {
                        return false;
                    }
                    let o = self.element_order(x) as u64;
                    if !is_p_power(o, p) {
                        return false;
                    }
                    let bigger = self.closure(&union(&h, x));
                    is_p_power(bigger.len() as u64, p) && bigger.len() as u64 <= pk
                })
                .expect("Sylow theory guarantees an extension");
            h = self.closure(&union(&h, x));
        }
        // all conjugates, pick lexicographically least
        let mut best = h.clone();
        for g in 0..self.order {
            let conj = self.conjugate_set(&h, g);
            if conj < best {
                best = conj;
            }
        }
        Subgroup::new(Arc::clone(self), best).expect("conjugate of a subgroup is a subgroup")
    }

    fn conjugate_set(&self, h: &[usize], g: usize) -> Vec<usize> {
        let gi = self.inv(g);
        let mut out: Vec<usize> = h.iter().map(|&x| self.mul(self.mul(g, x), gi)).collect();
        out.sort_unstable();
        out
    }

    fn normalizer(&self, h: &[usize]) -> Vec<usize> {
        (0..self.order)
            .filter(|&g| self.conjugate_set(h, g) == h)
            .collect()
    }

    /// One representative per conjugacy class of cyclic subgroups,
    /// including the trivial one. Representatives are the lexicographically
    /// least member of their class, ordered by (order, elements).
    pub fn cyclic_subgroup_classes(self: &Arc<Group>) -> Vec<Subgroup> {
        let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
        for e in 0..self.order {
            all.insert(self.closure(&[e]));
        }
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        for h in &all {
            if seen.contains(h) {
                continue;
            }
            let mut orbit: BTreeSet<Vec<usize>> = BTreeSet::new();
            for g in 0..self.order {
                orbit.insert(self.conjugate_set(h, g));
            }
            let rep = orbit.iter().next().unwrap().clone();
            for o in orbit {
                seen.insert(o);
            }
            classes.push(rep);
        }
        classes.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        classes.dedup();
        classes
            .into_iter()
            .map(|els| Subgroup::new(Arc::clone(self), els).expect("cyclic subgroup valid"))
            .collect()
    }

    /// All cyclic subgroups (not just class representatives).
    pub fn all_cyclic_subgroups(self: &Arc<Group>) -> Vec<Subgroup> {
        let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
        for e in 0..self.order {
            all.insert(self.closure(&[e]));
        }
        all.into_iter()
            .map(|els| Subgroup::new(Arc::clone(self), els).expect("cyclic subgroup valid"))
            .collect()
    }

    /// All elementary abelian p-subgroups (isomorphic to (C_p)^k, k >= 1),
    /// with maximal ones flagged.
    pub fn elementary_abelian_subgroups(self: &Arc<Group>, p: u64) -> Vec<ElementaryAbelian> {
        let p_us = p as usize;
        let order_p: Vec<usize> = (1..self.order)
            .filter(|&e| self.element_order(e) == p_us)
            .collect();
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut frontier: Vec<Vec<usize>> = Vec::new();
        for &e in &order_p {
            let h = self.closure(&[e]);
            if found.insert(h.clone()) {
                frontier.push(h);
            }
        }
        while let Some(h) = frontier.pop() {
            for &x in &order_p {
                if h.binary_search(&x).is_ok() {
                    continue;
                }
                // x must commute with everything in h to stay elementary abelian
                if !h.iter().all(|&y| self.mul(x, y) == self.mul(y, x)) {
                    continue;
                }
                let bigger = self.closure(&union(&h, x));
                if bigger.len() == h.len() * p_us && found.insert(bigger.clone()) {
                    frontier.push(bigger);
                }
            }
        }
        let sets: Vec<Vec<usize>> = found.into_iter().collect();
        let mut out = Vec::new();
        for (i, h) in sets.iter().enumerate() {
            let maximal = !sets.iter().enumerate().any(|(j, k)| {
                i != j && h.len() < k.len() && h.iter().all(|e| k.binary_search(e).is_ok())
            });
            out.push(ElementaryAbelian {
                subgroup: Subgroup::new(Arc::clone(self), h.clone()).expect("valid"),
                maximal,
            });
        }
        out.sort_by(|a, b| {
            a.subgroup
                .elements()
                .len()
                .cmp(&b.subgroup.elements().len())
                .then_with(|| a.subgroup.elements().cmp(b.subgroup.elements()))
        });
        out
    }

    /// Quotient by a normal subgroup: the coset group and the projection
    /// map (element index -> coset index).
    pub fn quotient(self: &Arc<Group>, n: &Subgroup) -> Result<(Arc<Group>, Vec<usize>)> {
        if !n.is_normal() {
            let (by, moved) = n.normality_witness().expect("not normal implies witness");
            return Err(Error::NotNormal { by, moved });
        }
        let mut coset_of = vec![usize::MAX; self.order];
        let mut cosets: Vec<Vec<usize>> = Vec::new();
        for e in 0..self.order {
            if coset_of[e] != usize::MAX {
                continue;
            }
            let mut coset: Vec<usize> = n.elements().iter().map(|&h| self.mul(e, h)).collect();
            coset.sort_unstable();
            let idx = cosets.len();
            for &x in &coset {
                coset_of[x] = idx;
            }
            cosets.push(coset);
        }
        // identity coset contains 0 and is found first, so index 0 is the identity
        let q = cosets.len();
        let mut table = vec![vec![0usize; q]; q];
        for (i, ci) in cosets.iter().enumerate() {
            for (j, cj) in cosets.iter().enumerate() {
                table[i][j] = coset_of[self.mul(ci[0], cj[0])];
            }
        }
        let names = cosets
            .iter()
            .map(|c| format!("[{}]", self.names[c[0]]))
            .collect();
        let qg = Group::from_cayley(table, Some(names), format!("{}/N", self.spec))?;
        // verified homomorphism
        for a in 0..self.order {
            for b in 0..self.order {
                debug_assert_eq!(coset_of[self.mul(a, b)], qg.mul(coset_of[a], coset_of[b]));
            }
        }
        Ok((qg, coset_of))
    }

    // ---- named group constructors ----

    /// Parse a group spec: `Cn`, `Dn` (dihedral of order n, n even), `Q8`,
    /// `Sn` (n <= 4), `A4`, products with `x`, or `table:<path>` pointing
    /// to a JSON file `{order, cayley, names?}`.
    pub fn parse(spec: &str) -> Result<Arc<Group>> {
        let spec = spec.trim();
        if spec.is_empty() {
            return Err(Error::SpecSyntax("empty group spec".into()));
        }
        if let Some(path) = spec.strip_prefix("table:") {
            let text = std::fs::read_to_string(path)?;
            let tf: TableFile = serde_json::from_str(&text)?;
            if tf.cayley.len() != tf.order {
                return Err(Error::SpecSyntax(format!(
                    "table file declares order {} but has {} rows",
                    tf.order,
                    tf.cayley.len()
                )));
            }
            return Group::from_cayley(tf.cayley, tf.names, spec.to_string());
        }
        let parts: Vec<&str> = spec.split('x').collect();
        if parts.len() > 1 {
            let groups: Vec<Arc<Group>> = parts
                .iter()
                .map(|p| Group::parse_atom(p.trim()))
                .collect::<Result<_>>()?;
            return Group::direct_product(&groups, spec.to_string());
        }
        Group::parse_atom(spec)
    }

    fn parse_atom(spec: &str) -> Result<Arc<Group>> {
        let (head, num) = split_head(spec)?;
        match head {
            "C" => {
                let n = parse_order(spec, num)?;
                Group::cyclic(n)
            }
            "D" => {
                let n = parse_order(spec, num)?;
                if n < 2 || n % 2 != 0 {
                    return Err(Error::UnsupportedGroup(format!(
                        "D{n}: dihedral groups need even order >= 2"
                    )));
                }
                Group::dihedral(n)
            }
            "Q" => {
                if num != Some(8) {
                    return Err(Error::UnsupportedGroup(spec.to_string()));
                }
                Group::quaternion8()
            }
            "S" => match num {
                Some(n @ 1..=4) => Group::symmetric(n as usize),
                _ => Err(Error::UnsupportedGroup(format!(
                    "{spec}: only S1..S4 are supported"
                ))),
            },
            "A" => match num {
                Some(4) => Group::alternating4(),
                _ => Err(Error::UnsupportedGroup(format!(
                    "{spec}: only A4 is supported"
                ))),
            },
            _ => Err(Error::SpecSyntax(format!(
                "unrecognized group spec `{spec}`"
            ))),
        }
    }

    pub fn cyclic(n: usize) -> Result<Arc<Group>> {
        if n == 0 {
            return Err(Error::SpecSyntax("C0 is not a group".into()));
        }
        if n > MAX_ORDER {
            return Err(Error::OrderLimitExceeded(n));
        }
        let table: Vec<Vec<usize>> = (0..n)
            .map(|i| (0..n).map(|j| (i + j) % n).collect())
            .collect();
        let names = (0..n)
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "g".to_string(),
                _ => format!("g^{i}"),
            })
            .collect();
        Group::from_cayley(table, Some(names), format!("C{n}"))
    }

    /// Dihedral group of order `n` (n even): rotations r^i and reflections
    /// s r^i, indexed as i and n/2 + i.
    pub fn dihedral(n: usize) -> Result<Arc<Group>> {
        let m = n / 2;
        let idx = |i: usize, j: usize| j * m + i;
        let mut table = vec![vec![0usize; n]; n];
        for j1 in 0..2 {
            for i1 in 0..m {
                for j2 in 0..2 {
                    for i2 in 0..m {
                        // (i1, j1) * (i2, j2) = (i1 + (-1)^{j1} i2, j1 + j2)
                        let i = if j1 == 0 {
                            (i1 + i2) % m
                        } else {
                            (i1 + m - i2 % m) % m
                        };
                        table[idx(i1, j1)][idx(i2, j2)] = idx(i, (j1 + j2) % 2);
                    }
                }
            }
        }
        let mut names = Vec::with_capacity(n);
        for j in 0..2 {
            for i in 0..m {
                names.push(match (j, i) {
                    (0, 0) => "1".into(),
                    (0, 1) => "r".into(),
                    (0, _) => format!("r^{i}"),
                    (_, 0) => "s".into(),
                    (_, 1) => "s*r".into(),
                    (_, _) => format!("s*r^{i}"),
                });
            }
        }
        Group::from_cayley(table, Some(names), format!("D{n}"))
    }

    pub fn quaternion8() -> Result<Arc<Group>> {
        // elements (sign, axis): index = 2*axis + (sign < 0)
        // axes: 0 = 1, 1 = i, 2 = j, 3 = k
        let axis_mul = |a: usize, b: usize| -> (usize, bool) {
            match (a, b) {
                (0, x) => (x, false),
                (x, 0) => (x, false),
                (1, 1) | (2, 2) | (3, 3) => (0, true),
                (1, 2) => (3, false),
                (2, 3) => (1, false),
                (3, 1) => (2, false),
                (2, 1) => (3, true),
                (3, 2) => (1, true),
                (1, 3) => (2, true),
                _ => unreachable!(),
            }
        };
        let mut table = vec![vec![0usize; 8]; 8];
        for a in 0..4 {
            for sa in 0..2 {
                for b in 0..4 {
                    for sb in 0..2 {
                        let (c, flip) = axis_mul(a, b);
                        let sc = (sa + sb + flip as usize) % 2;
                        table[2 * a + sa][2 * b + sb] = 2 * c + sc;
                    }
                }
            }
        }
        let names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        Group::from_cayley(table, Some(names), "Q8".into())
    }

    pub fn symmetric(n: usize) -> Result<Arc<Group>> {
        let perms = permutations(n);
        Group::from_permutations(&perms, format!("S{n}"))
    }

    pub fn alternating4() -> Result<Arc<Group>> {
        let perms: Vec<Vec<usize>> = permutations(4)
            .into_iter()
            .filter(|p| permutation_sign(p))
            .collect();
        Group::from_permutations(&perms, "A4".into())
    }

    fn from_permutations(perms: &[Vec<usize>], spec: String) -> Result<Arc<Group>> {
        let index: HashMap<&Vec<usize>, usize> =
            perms.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let n = perms.len();
        let mut table = vec![vec![0usize; n]; n];
        for (i, p) in perms.iter().enumerate() {
            for (j, q) in perms.iter().enumerate() {
                // (p q)(x) = p(q(x))
                let comp: Vec<usize> = (0..p.len()).map(|x| p[q[x]]).collect();
                table[i][j] = index[&comp];
            }
        }
        let names = perms.iter().map(|p| cycle_notation(p)).collect();
        Group::from_cayley(table, Some(names), spec)
    }

    pub fn direct_product(groups: &[Arc<Group>], spec: String) -> Result<Arc<Group>> {
        let total: usize = groups.iter().map(|g| g.order()).product();
        if total > MAX_ORDER {
            return Err(Error::OrderLimitExceeded(total));
        }
        let mut acc = Arc::clone(&groups[0]);
        for g in &groups[1..] {
            acc = Group::product_of_two(&acc, g)?;
        }
        // rebuild with the requested spec string for reproducible labeling
        let table: Vec<Vec<usize>> = (0..acc.order())
            .map(|i| (0..acc.order()).map(|j| acc.mul(i, j)).collect())
            .collect();
        Group::from_cayley(table, Some(acc.names.clone()), spec)
    }

    fn product_of_two(a: &Arc<Group>, b: &Arc<Group>) -> Result<Arc<Group>> {
        let (na, nb) = (a.order(), b.order());
        let n = na * nb;
        if n > MAX_ORDER {
            return Err(Error::OrderLimitExceeded(n));
        }
        let idx = |x: usize, y: usize| x * nb + y;
        let mut table = vec![vec![0usize; n]; n];
        for x1 in 0..na {
            for y1 in 0..nb {
                for x2 in 0..na {
                    for y2 in 0..nb {
                        table[idx(x1, y1)][idx(x2, y2)] = idx(a.mul(x1, x2), b.mul(y1, y2));
                    }
                }
            }
        }
        let mut names = Vec::with_capacity(n);
        for x in 0..na {
            for y in 0..nb {
                names.push(format!("({},{})", a.name(x), b.name(y)));
            }
        }
        Group::from_cayley(table, Some(names), format!("{}x{}", a.spec, b.spec))
    }
}

fn union(h: &[usize], x: usize) -> Vec<usize> {
    let mut v = h.to_vec();
    v.push(x);
    v
}

fn is_p_power(mut n: u64, p: u64) -> bool {
    while n % p == 0 {
        n /= p;
    }
    n == 1
}

fn split_head(spec: &str) -> Result<(&str, Option<u64>)> {
    let head_len = spec.chars().take_while(|c| c.is_ascii_alphabetic()).count();
    if head_len == 0 {
        return Err(Error::SpecSyntax(format!(
            "group spec `{spec}` must start with a letter"
        )));
    }
    let (head, rest) = spec.split_at(head_len);
    if rest.is_empty() {
        Ok((head, None))
    } else {
        rest.parse::<u64>()
            .map(|n| (head, Some(n)))
            .map_err(|_| Error::SpecSyntax(format!("bad number in group spec `{spec}`")))
    }
}

fn parse_order(spec: &str, num: Option<u64>) -> Result<usize> {
    let n = num.ok_or_else(|| Error::SpecSyntax(format!("`{spec}` needs an order")))? as usize;
    if n > MAX_ORDER {
        return Err(Error::OrderLimitExceeded(n));
    }
    Ok(n)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    // lexicographic order, identity first
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next_permutation
        let Some(i) = (0..n.saturating_sub(1))
            .rev()
            .find(|&i| cur[i] < cur[i + 1])
        else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

fn permutation_sign(p: &[usize]) -> bool {
    // true = even
    let mut seen = vec![false; p.len()];
    let mut even = true;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = p[x];
            len += 1;
        }
        if len % 2 == 0 {
            even = !even;
        }
    }
    even
}

fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            seen[start] = true;
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut x = p[start];
        while x != start {
            seen[x] = true;
            cycle.push(x);
            x = p[x];
        }
        out.push('(');
        out.push_str(
            &cycle
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" "),
        );
        out.push(')');
    }
    if out.is_empty() {
        out.push('e');
    }
    out
}

/// A subgroup of a parent group, with its own materialized `Group`
/// reindexed to `0..|H|` and the embedding back into the parent.
#[derive(Clone)]
pub struct Subgroup {
    parent: Arc<Group>,
    elements: Vec<usize>, // sorted parent indices; the embedding
    group: Arc<Group>,
    parent_to_sub: HashMap<usize, usize>,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Subgroup(order {} of {:?})",
            self.elements.len(),
            self.parent
        )
    }
}

impl Subgroup {
    pub fn new(parent: Arc<Group>, mut elements: Vec<usize>) -> Result<Subgroup> {
        elements.sort_unstable();
        elements.dedup();
        if elements.first() != Some(&0) {
            return Err(Error::NotAGroup {
                axiom: "subgroup identity".into(),
                witness: "missing identity".into(),
            });
        }
        for &a in &elements {
            if a >= parent.order() {
                return Err(Error::NotAGroup {
                    axiom: "index range".into(),
                    witness: format!("{a}"),
                });
            }
            for &b in &elements {
                if elements.binary_search(&parent.mul(a, b)).is_err() {
                    return Err(Error::NotAGroup {
                        axiom: "subgroup closure".into(),
                        witness: format!("{a}*{b}"),
                    });
                }
            }
        }
        let parent_to_sub: HashMap<usize, usize> =
            elements.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let k = elements.len();
        let table: Vec<Vec<usize>> = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| parent_to_sub[&parent.mul(elements[i], elements[j])])
                    .collect()
            })
            .collect();
        let names = elements
            .iter()
            .map(|&e| parent.name(e).to_string())
            .collect();
        let spec = format!("{}|sub{:?}", parent.spec_string(), elements);
        let group = Group::from_cayley(table, Some(names), spec)?;
        Ok(Subgroup {
            parent,
            elements,
            group,
            parent_to_sub,
        })
    }

    pub fn parent(&self) -> &Arc<Group> {
        &self.parent
    }

    /// Sorted parent indices; this is the embedding map.
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    /// The subgroup as a standalone group on indices `0..|H|`.
    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index_in_parent(&self) -> usize {
        self.parent.order() / self.order()
    }

    pub fn contains(&self, parent_elem: usize) -> bool {
        self.elements.binary_search(&parent_elem).is_ok()
    }

    pub fn to_sub_index(&self, parent_elem: usize) -> Option<usize> {
        self.parent_to_sub.get(&parent_elem).copied()
    }

    pub fn to_parent_index(&self, sub_elem: usize) -> usize {
        self.elements[sub_elem]
    }

    pub fn is_normal(&self) -> bool {
        self.normality_witness().is_none()
    }

    fn normality_witness(&self) -> Option<(usize, usize)> {
        for g in 0..self.parent.order() {
            let gi = self.parent.inv(g);
            for &h in &self.elements {
                let c = self.parent.mul(self.parent.mul(g, h), gi);
                if !self.contains(c) {
                    return Some((g, h));
                }
            }
        }
        None
    }

    /// Left coset representatives, each the least element of its coset,
    /// identity coset first.
    pub fn left_coset_reps(&self) -> Vec<usize> {
        let mut assigned = vec![false; self.parent.order()];
        let mut reps = Vec::new();
        for e in 0..self.parent.order() {
            if assigned[e] {
                continue;
            }
            reps.push(e);
            for &h in &self.elements {
                assigned[self.parent.mul(e, h)] = true;
            }
        }
        reps
    }
}

/// An elementary abelian subgroup with a maximality flag.
#[derive(Clone, Debug)]
pub struct ElementaryAbelian {
    pub subgroup: Subgroup,
    pub maximal: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_c6() {
        let g = Group::parse("C6").unwrap();
        assert_eq!(g.order(), 6);
        for e in 0..6 {
            assert_eq!(g.mul(e, 1), (e + 1) % 6);
        }
    }

    #[test]
    fn parse_s3_conjugacy_classes() {
        let g = Group::parse("S3").unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(g.conjugacy_classes().len(), 3);
    }

    #[test]
    fn parse_klein() {
        let g = Group::parse("C2xC2").unwrap();
        assert_eq!(g.order(), 4);
        for e in 1..4 {
            assert_eq!(g.element_order(e), 2);
        }
    }

    #[test]
    fn parse_determinism() {
        let a = Group::parse("S4").unwrap();
        let b = Group::parse("S4").unwrap();
        assert_eq!(a.cayley, b.cayley);
        assert_eq!(a.generators, b.generators);
        assert_eq!(a.words, b.words);
    }

    #[test]
    fn parse_rejects() {
        assert!(matches!(
            Group::parse("A5"),
            Err(Error::UnsupportedGroup(_))
        ));
        assert!(matches!(
            Group::parse("S5"),
            Err(Error::UnsupportedGroup(_))
        ));
        assert!(matches!(
            Group::parse("C100"),
            Err(Error::OrderLimitExceeded(_))
        ));
        assert!(matches!(Group::parse(""), Err(Error::SpecSyntax(_))));
        assert!(matches!(
            Group::parse("D7"),
            Err(Error::UnsupportedGroup(_))
        ));
    }

    #[test]
    fn validate_c2() {
        let g = Group::from_cayley(vec![vec![0, 1], vec![1, 0]], None, "tab".into()).unwrap();
        assert_eq!(g.order(), 2);
    }

    #[test]
    fn validate_latin_failure() {
        let err = Group::from_cayley(vec![vec![0, 1], vec![1, 1]], None, "tab".into()).unwrap_err();
        match err {
            // row 1 repeats 1, caught either as Latin or identity violation
            Error::NotAGroup { .. } => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn validate_associativity_failure() {
        // perturb S3's table off the identity row/column and catch the broken triple
        let s3 = Group::parse("S3").unwrap();
        let mut table: Vec<Vec<usize>> = (0..6)
            .map(|i| (0..6).map(|j| s3.mul(i, j)).collect())
            .collect();
        // swap two entries in row 3 (columns 2 and 4) to keep it a Latin square
        table[3].swap(2, 4);
        let err = Group::from_cayley(table, None, "tab".into()).unwrap_err();
        match err {
            Error::NotAGroup { axiom, .. } => {
                assert!(
                    axiom == "associativity" || axiom == "Latin square",
                    "axiom = {axiom}"
                );
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn words_evaluate_back() {
        for spec in ["S4", "Q8", "D8", "C12"] {
            let g = Group::parse(spec).unwrap();
            for e in 0..g.order() {
                assert_eq!(g.eval_word(g.word(e)), e, "word of {e} in {spec}");
            }
            assert!(g.word(0).is_empty());
            for (gi, &gen) in g.generators().iter().enumerate() {
                assert_eq!(g.word(gen), &[gi]);
            }
        }
    }

    #[test]
    fn sylow_s3() {
        let g = Group::parse("S3").unwrap();
        assert_eq!(g.sylow_subgroup(2).order(), 2);
        assert_eq!(g.sylow_subgroup(3).order(), 3);
        assert_eq!(g.sylow_subgroup(5).order(), 1);
    }

    #[test]
    fn sylow_c12_unique() {
        let g = Group::parse("C12").unwrap();
        let s = g.sylow_subgroup(2);
        assert_eq!(s.order(), 4);
        assert!(s.is_normal());
    }

    #[test]
    fn sylow_count_mod_p() {
        for (spec, p) in [("S3", 2u64), ("S4", 2), ("S4", 3), ("A4", 3), ("D12", 2)] {
            let g = Group::parse(spec).unwrap();
            let syl = g.sylow_subgroup(p);
            let mut conjugates = BTreeSet::new();
            for e in 0..g.order() {
                conjugates.insert(g.conjugate_set(syl.elements(), e));
            }
            assert_eq!(
                conjugates.len() as u64 % p,
                1,
                "sylow count for {spec} at {p}"
            );
            for c in conjugates {
                assert_eq!(c.len(), syl.order());
            }
        }
    }

    #[test]
    fn cyclic_classes_s3() {
        let g = Group::parse("S3").unwrap();
        let classes = g.cyclic_subgroup_classes();
        let orders: Vec<usize> = classes.iter().map(|c| c.order()).collect();
        assert_eq!(orders, vec![1, 2, 3]);
    }

    #[test]
    fn cyclic_classes_c4() {
        let g = Group::parse("C4").unwrap();
        let orders: Vec<usize> = g
            .cyclic_subgroup_classes()
            .iter()
            .map(|c| c.order())
            .collect();
        assert_eq!(orders, vec![1, 2, 4]);
    }

    #[test]
    fn cyclic_classes_q8() {
        let g = Group::parse("Q8").unwrap();
        let orders: Vec<usize> = g
            .cyclic_subgroup_classes()
            .iter()
            .map(|c| c.order())
            .collect();
        assert_eq!(orders, vec![1, 2, 4, 4, 4]);
    }

    #[test]
    fn cyclic_classes_cover_all_cyclics() {
        for spec in ["S4", "D8", "Q8", "A4"] {
            let g = Group::parse(spec).unwrap();
            let classes = g.cyclic_subgroup_classes();
            for c in g.all_cyclic_subgroups() {
                let mut hit = 0;
                for rep in &classes {
                    if rep.order() != c.order() {
                        continue;
                    }
                    for e in 0..g.order() {
                        if g.conjugate_set(c.elements(), e) == rep.elements() {
                            hit += 1;
                            break;
                        }
                    }
                }
                assert_eq!(
                    hit,
                    1,
                    "{spec}: cyclic subgroup {:?} in {hit} classes",
                    c.elements()
                );
            }
        }
    }

    #[test]
    fn elementary_abelian_klein() {
        let g = Group::parse("C2xC2").unwrap();
        let eas = g.elementary_abelian_subgroups(2);
        let max: Vec<_> = eas.iter().filter(|e| e.maximal).collect();
        assert_eq!(max.len(), 1);
        assert_eq!(max[0].subgroup.order(), 4);
    }

    #[test]
    fn elementary_abelian_c4() {
        let g = Group::parse("C4").unwrap();
        let eas = g.elementary_abelian_subgroups(2);
        assert_eq!(eas.len(), 1);
        assert_eq!(eas[0].subgroup.order(), 2);
        assert!(eas[0].maximal);
    }

    #[test]
    fn elementary_abelian_d8_two_kleins() {
        let g = Group::parse("D8").unwrap();
        let eas = g.elementary_abelian_subgroups(2);
        let max: Vec<_> = eas.iter().filter(|e| e.maximal).collect();
        assert_eq!(max.len(), 2, "D8 has exactly two maximal Klein subgroups");
        for m in max {
            assert_eq!(m.subgroup.order(), 4);
        }
    }

    #[test]
    fn quotient_s3_by_a3() {
        let g = Group::parse("S3").unwrap();
        let a3_els: Vec<usize> = (0..6).filter(|&e| g.element_order(e) != 2).collect();
        let a3 = g.subgroup(a3_els).unwrap();
        assert_eq!(a3.order(), 3);
        let (q, proj) = g.quotient(&a3).unwrap();
        assert_eq!(q.order(), 2);
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(proj[g.mul(a, b)], q.mul(proj[a], proj[b]));
            }
        }
    }

    #[test]
    fn quotient_by_trivial_and_full() {
        let g = Group::parse("D8").unwrap();
        let (q1, _) = g.quotient(&g.trivial_subgroup()).unwrap();
        assert_eq!(q1.order(), g.order());
        // same table up to the identity relabeling
        for a in 0..8 {
            for b in 0..8 {
                assert_eq!(q1.mul(a, b), g.mul(a, b));
            }
        }
        let (q2, _) = g.quotient(&g.full_subgroup()).unwrap();
        assert_eq!(q2.order(), 1);
    }

    #[test]
    fn quotient_not_normal() {
        let g = Group::parse("S3").unwrap();
        let c2 = g.sylow_subgroup(2);
        assert!(matches!(g.quotient(&c2), Err(Error::NotNormal { .. })));
    }

    #[test]
    fn subgroup_rejects_non_closed() {
        let g = Group::parse("C4").unwrap();
        assert!(g.subgroup(vec![0, 1]).is_err());
    }
}
