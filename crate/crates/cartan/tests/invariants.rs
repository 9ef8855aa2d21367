//! Structural invariants checked across a sample of corpus algebras:
//! Schur's lemma at the registry level, the Maschke equivalence, induced
//! projectivity, radical fixpoints, and lattice-map functoriality.

use std::sync::Arc;

use num_bigint::BigInt;

use cartan::exactla::PrimeField;
use cartan::grothendieck::restriction_map;
use cartan::groupalg::GroupAlgebra;
use cartan::groups::{Group, Subgroup};

fn algebra(spec: &str, p: u64) -> Arc<GroupAlgebra> {
    GroupAlgebra::new(Group::parse(spec).unwrap(), PrimeField::new(p).unwrap())
}

const SAMPLE: [(&str, u64); 8] = [
    ("S3", 2),
    ("S3", 3),
    ("A4", 2),
    ("D8", 2),
    ("Q8", 2),
    ("C6", 3),
    ("S4", 2),
    ("C12", 2),
];

#[test]
fn schur_registry_check() {
    // hom between distinct registry simples vanishes; endomorphisms of a
    // simple form a division algebra (closed under product, nonzero
    // products of nonzero sampled elements)
    for (spec, p) in SAMPLE {
        let alg = algebra(spec, p);
        let n = alg.num_simples().unwrap();
        for i in 0..n {
            for j in 0..n {
                let si = alg.simple_module(i).unwrap();
                let sj = alg.simple_module(j).unwrap();
                let hom = alg.hom_space(&si, &sj).unwrap();
                if i != j {
                    assert!(hom.is_empty(), "{spec} F{p}: Hom(S{i}, S{j}) != 0");
                } else {
                    assert!(!hom.is_empty());
                    // closure under product and absence of zero divisors
                    // among the basis products
                    for a in &hom {
                        for b in &hom {
                            let prod = a.mul(b);
                            assert!(!prod.is_zero(), "{spec} F{p}: zero divisor in End(S{i})");
                            // membership in the hom space: intertwines again
                            for (ga, gb) in si.actions().iter().zip(sj.actions()) {
                                assert_eq!(prod.mul(ga), gb.mul(&prod));
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn maschke_both_directions() {
    // rad(k[G]) = 0 exactly when the characteristic does not divide |G|
    let groups = [
        "C2", "C3", "C4", "C6", "C8", "C12", "C2xC2", "C2xC4", "C2xC2xC2", "D8", "Q8", "S3", "S4",
        "A4", "D12",
    ];
    for spec in groups {
        let g = Group::parse(spec).unwrap();
        for p in [2u64, 3, 5] {
            let alg = algebra(spec, p);
            let rad = alg.radical().unwrap();
            let coprime = g.order() as u64 % p != 0;
            assert_eq!(
                rad.dim() == 0,
                coprime,
                "{spec} at p={p}: rad dim {} with gcd {}",
                rad.dim(),
                if coprime { 1 } else { p }
            );
        }
    }
}

#[test]
fn radical_is_nilpotent_by_powering() {
    for (spec, p) in SAMPLE {
        let alg = algebra(spec, p);
        let rad = alg.radical().unwrap();
        let idx = alg.nilpotency_index(&rad).unwrap();
        assert!(idx <= alg.dim() + 1, "{spec} F{p}: index {idx}");
        if rad.dim() > 0 {
            assert!(idx >= 2, "{spec} F{p}: nonzero radical has index >= 2");
        }
    }
}

#[test]
fn cartan_diagonal_iff_offdiagonal_homs_vanish() {
    use cartan::grothendieck::cartan_matrix;
    use num_traits::Zero;
    for (spec, p) in SAMPLE {
        let alg = algebra(spec, p);
        let c = cartan_matrix(&alg, 1).unwrap();
        let n = c.matrix.rows();
        let mut diagonal = true;
        for i in 0..n {
            for j in 0..n {
                if i != j && !c.matrix.get(i, j).is_zero() {
                    diagonal = false;
                }
            }
        }
        let pims = alg.pims(1).unwrap();
        let mut homs_vanish = true;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let hom = alg.hom_space(&pims[i].module, &pims[j].module).unwrap();
                if !hom.is_empty() {
                    homs_vanish = false;
                }
            }
        }
        assert_eq!(
            diagonal, homs_vanish,
            "{spec} F{p}: diagonal Cartan must coincide with vanishing off-diagonal Hom(P_i, P_j)"
        );
    }
}

#[test]
fn induced_from_sylow_stays_projective() {
    for (spec, p) in SAMPLE {
        let alg = algebra(spec, p);
        let group = Arc::clone(alg.group());
        if group.order() as u64 % p != 0 {
            continue;
        }
        let sylow = group.sylow_subgroup(p);
        for pim in alg.pims(1).unwrap().iter() {
            let m = &pim.module;
            assert!(alg.is_projective(m, 1).unwrap());
            let (_, res) = alg.restrict(m, &sylow);
            let ind = alg.induce(&res, &sylow).unwrap();
            assert!(
                alg.is_projective(&ind, 1).unwrap(),
                "{spec} F{p}: induced restriction of a projective is projective"
            );
        }
    }
}

#[test]
fn radical_recomputation_fixpoint() {
    // the semisimple quotient is genuinely semisimple: its regular module
    // decomposes into simple left ideals generated by orthogonal
    // primitive idempotents summing to 1, which the idempotent search
    // verifies internally; on top of that the lifted idempotents
    // reassemble the algebra dimension
    for (spec, p) in SAMPLE {
        let alg = algebra(spec, p);
        let idems = alg.semisimple_primitive_idempotents(1).unwrap();
        let rad = alg.radical().unwrap();
        // number of idempotents = total multiplicity sum m_i
        let pims = alg.pims(1).unwrap();
        let total_mult: u64 = pims.iter().map(|pp| pp.multiplicity).sum();
        assert_eq!(idems.len() as u64, total_mult, "{spec} F{p}");
        // dim A = dim rad + sum m_i dim S_i
        let simples = alg.simples().unwrap();
        let ss_dim: u64 = pims
            .iter()
            .map(|pp| pp.multiplicity * simples[pp.head].dim as u64)
            .sum();
        assert_eq!(
            alg.dim() as u64,
            rad.dim() as u64 + ss_dim,
            "{spec} F{p}: dim A = dim J + dim A/J"
        );
    }
}

#[test]
fn restriction_functoriality_chain() {
    // restriction along S4 >= A4 >= V4 composes: the two-step product of
    // restriction matrices equals the direct one. V4 inherits the same
    // element order from both paths, so the target registries coincide.
    let s4 = Group::parse("S4").unwrap();
    // A4 = closure of the order-3 elements
    let order3: Vec<usize> = (0..24).filter(|&e| s4.element_order(e) == 3).collect();
    let a4_els = s4.closure(&order3);
    assert_eq!(a4_els.len(), 12);
    let a4 = Subgroup::new(Arc::clone(&s4), a4_els).unwrap();
    // V4 = identity plus the three double transpositions (order 2,
    // central in A4's normal structure): the elements of order 2 inside
    // A4
    let v4_els: Vec<usize> = a4
        .elements()
        .iter()
        .copied()
        .filter(|&e| e == 0 || s4.element_order(e) == 2)
        .collect();
    assert_eq!(v4_els.len(), 4);
    let v4_in_s4 = Subgroup::new(Arc::clone(&s4), v4_els.clone()).unwrap();
    // V4 as a subgroup of the materialized A4 group
    let a4_group = Arc::clone(a4.group());
    let v4_in_a4_els: Vec<usize> = v4_els
        .iter()
        .map(|&e| a4.to_sub_index(e).unwrap())
        .collect();
    let v4_in_a4 = Subgroup::new(Arc::clone(&a4_group), v4_in_a4_els).unwrap();
    // same labeling on both paths
    assert_eq!(v4_in_s4.group().order(), v4_in_a4.group().order(),);
    for a in 0..4 {
        for b in 0..4 {
            assert_eq!(v4_in_s4.group().mul(a, b), v4_in_a4.group().mul(a, b));
        }
    }

    let p = PrimeField::new(3).unwrap();
    let alg = GroupAlgebra::new(Arc::clone(&s4), p);
    let a4_alg = alg.subgroup_algebra(&a4);

    let direct = restriction_map(&alg, &v4_in_s4, 1).unwrap().matrix;
    let step1 = restriction_map(&alg, &a4, 1).unwrap().matrix;
    let step2 = restriction_map(&a4_alg, &v4_in_a4, 1).unwrap().matrix;
    let composite = step2.mul(&step1);
    assert_eq!(composite.rows(), direct.rows());
    assert_eq!(composite.cols(), direct.cols());
    for i in 0..direct.rows() {
        for j in 0..direct.cols() {
            assert_eq!(
                composite.get(i, j),
                direct.get(i, j),
                "functoriality fails at ({i},{j})"
            );
        }
    }
    // sanity: the V4 algebra over F_3 is semisimple with 4 characters
    assert_eq!(direct.rows(), 4);
    let col_sum: BigInt = (0..4).map(|i| direct.get(i, 0).clone()).sum();
    assert!(col_sum > BigInt::from(0));
}

#[test]
fn group_table_file_roundtrip() {
    // the table:<path> group spec loads and validates
    let c2 = serde_json::json!({
        "order": 2,
        "cayley": [[0, 1], [1, 0]],
        "names": ["1", "s"],
    });
    let path = std::env::temp_dir().join("cartan_test_table_c2.json");
    std::fs::write(&path, c2.to_string()).unwrap();
    let g = Group::parse(&format!("table:{}", path.display())).unwrap();
    assert_eq!(g.order(), 2);
    assert_eq!(g.name(1), "s");

    // a broken table is rejected with a witness
    let bad = serde_json::json!({
        "order": 2,
        "cayley": [[0, 1], [1, 1]],
    });
    std::fs::write(&path, bad.to_string()).unwrap();
    assert!(Group::parse(&format!("table:{}", path.display())).is_err());
}
