//! Projectivity testing three ways: over the full algebra, after
//! restriction to a Sylow p-subgroup, and after restriction to every
//! maximal elementary abelian subgroup of the Sylow. The three verdicts
//! always agree; this example shows them agreeing on projective and
//! non-projective modules alike.
//!
//! Run with: cargo run --example projectivity

use std::sync::Arc;

use cartan::exactla::PrimeField;
use cartan::groupalg::GroupAlgebra;
use cartan::groups::{Group, Subgroup};
use cartan::modrep::RepModule;

fn three_way(alg: &Arc<GroupAlgebra>, label: &str, m: &RepModule) {
    let p = alg.field().p();
    let group = Arc::clone(alg.group());
    let sylow = group.sylow_subgroup(p);
    let full = alg.is_projective(m, 1).unwrap();
    let (syl_alg, syl_res) = alg.restrict(m, &sylow);
    let syl = syl_alg.is_projective(&syl_res, 1).unwrap();
    let mut elab = Vec::new();
    for ea in sylow.group().elementary_abelian_subgroups(p) {
        if !ea.maximal {
            continue;
        }
        let parent_els: Vec<usize> = ea
            .subgroup
            .elements()
            .iter()
            .map(|&i| sylow.to_parent_index(i))
            .collect();
        let e = Subgroup::new(Arc::clone(&group), parent_els).unwrap();
        let (e_alg, e_res) = alg.restrict(m, &e);
        elab.push(e_alg.is_projective(&e_res, 1).unwrap());
    }
    println!(
        "  {label:<28} dim {:>3}   full: {full:<5} sylow: {syl:<5} elem abelians: {elab:?}",
        m.dim()
    );
    assert_eq!(full, syl);
    assert_eq!(syl, elab.iter().all(|&v| v));
}

fn main() {
    let group = Group::parse("S4").unwrap();
    let alg = GroupAlgebra::new(Arc::clone(&group), PrimeField::new(2).unwrap());
    println!("F_2[S4]: Sylow 2-subgroup has order 8 (dihedral)");

    let regular = alg.regular_module();
    three_way(&alg, "regular module", &regular);

    for (i, pim) in alg.pims(1).unwrap().iter().enumerate() {
        three_way(&alg, &format!("projective indecomposable {i}"), &pim.module);
    }

    // the square-zero central witness: k[G]/(u) is never projective when
    // p divides |G|
    let u = alg.u_element();
    let u2 = alg.mul(&u, &u).unwrap();
    assert!(
        u2.coeffs().iter().all(|&c| c == 0),
        "u^2 = 0 in characteristic 2"
    );
    let spun = alg.spin(&regular, &[u.coeffs().to_vec()]);
    let quotient = alg.quotient_module(&regular, &spun.basis);
    three_way(&alg, "k[G]/(u)", &quotient);

    for s in alg.simples().unwrap() {
        let m = alg.simple_module(s.id).unwrap();
        three_way(&alg, &format!("simple S{}", s.id), &m);
    }

    println!("\nall three verdicts agreed on every module");
}
