//! Restriction, induction, and the projection formula.
//!
//! For a subgroup H of G, induction and restriction connect modules over
//! k[H] and k[G]. Two classical identities are checked here on concrete
//! modules: Frobenius reciprocity for hom-space dimensions, and the
//! projection formula ind(x) . y = ind(x . res(y)) in the Grothendieck
//! group, with both sides realized as actual modules and chopped.
//!
//! Run with: cargo run --example frobenius_reciprocity

use std::sync::Arc;

use cartan::exactla::PrimeField;
use cartan::grothendieck::frobenius_identity_check;
use cartan::groupalg::GroupAlgebra;
use cartan::groups::Group;

fn main() {
    let group = Group::parse("S3").unwrap();
    let alg = GroupAlgebra::new(Arc::clone(&group), PrimeField::new(3).unwrap());
    let c2 = group.sylow_subgroup(2);
    let sub_alg = alg.subgroup_algebra(&c2);

    println!("G = S3, H = C2, k = F_3");
    println!("\nFrobenius reciprocity dim Hom(ind N, M) = dim Hom(N, res M):");
    for n_id in 0..sub_alg.num_simples().unwrap() {
        let n = sub_alg.simple_module(n_id).unwrap();
        let ind = alg.induce(&n, &c2).unwrap();
        for m_id in 0..alg.num_simples().unwrap() {
            let m = alg.simple_module(m_id).unwrap();
            let lhs = alg.hom_space(&ind, &m).unwrap().len();
            let (_, res) = alg.restrict(&m, &c2);
            let rhs = sub_alg.hom_space(&n, &res).unwrap().len();
            println!("  N = S'{n_id}, M = S{m_id}:  {lhs} = {rhs}");
            assert_eq!(lhs, rhs);
        }
    }

    println!("\ninduced trivial module from A3 (index 2):");
    let a3 = group.sylow_subgroup(3);
    let a3_alg = alg.subgroup_algebra(&a3);
    let ind = alg.induce(&a3_alg.trivial_module(), &a3).unwrap();
    let counts = alg.chop(&ind, 1).unwrap();
    println!(
        "  dim {} with factors {:?} (trivial and sign)",
        ind.dim(),
        counts.counts()
    );

    println!("\nprojection formula on 8 sampled module classes:");
    let report = frobenius_identity_check(&alg, &c2, 8, 1).unwrap();
    for (i, s) in report.samples.iter().enumerate() {
        println!(
            "  sample {i}: x = {:?}, y = {:?}  ->  both sides chop to {:?}",
            s.x_multiplicities, s.y_multiplicities, s.lhs
        );
        assert!(s.pass);
    }
    println!("all samples agree");
}
