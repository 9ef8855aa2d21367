//! Lift idempotents through nilpotent ideals.
//!
//! Primitive idempotents are found in the semisimple quotient A/J and
//! lifted to exact idempotents of A with the iteration e <- 3e^2 - 2e^3,
//! which converges quadratically modulo powers of the radical. The same
//! iteration lifts field idempotents through Z/p^n coefficients.
//!
//! Run with: cargo run --example idempotent_lifting

use std::sync::Arc;

use cartan::artinring::chain_pims;
use cartan::exactla::{ChainRing, PrimeField};
use cartan::groupalg::{ChainGroupAlgebra, GroupAlgebra};
use cartan::groups::Group;

fn main() {
    // F_2[C3] = F_2 x F_4 is semisimple with two primitive idempotents
    let group = Group::parse("C3").unwrap();
    let alg = GroupAlgebra::new(Arc::clone(&group), PrimeField::new(2).unwrap());
    let idems = alg.semisimple_primitive_idempotents(1).unwrap();
    println!("primitive idempotents of F_2[C3]:");
    let mut sum = alg.zero();
    for e in &idems {
        println!("  {:?}", e.coeffs());
        assert_eq!(alg.mul(e, e).unwrap(), *e);
        sum = alg.add(&sum, e).unwrap();
    }
    assert_eq!(sum, alg.one());
    println!("  exact idempotents, pairwise orthogonal, summing to 1");

    // F_2[S3] has a radical; idempotents live in A/J and lift exactly
    let s3 = Group::parse("S3").unwrap();
    let alg2 = GroupAlgebra::new(Arc::clone(&s3), PrimeField::new(2).unwrap());
    let rad = alg2.radical().unwrap();
    println!("\nF_2[S3]: radical dimension {}", rad.dim());
    for ebar in alg2.semisimple_primitive_idempotents(1).unwrap() {
        let e = alg2.lift_idempotent(&ebar, &rad).unwrap();
        let e2 = alg2.mul(&e, &e).unwrap();
        assert_eq!(e2, e);
        // e and its lift agree modulo the radical
        let diff = alg2.sub(&e, &ebar).unwrap();
        assert!(rad.contains(diff.coeffs()));
        println!("  lifted idempotent {:?} with e^2 = e exactly", e.coeffs());
    }

    // over Z/4 the lift goes through the chain-ring radical
    let c3 = Group::parse("C3").unwrap();
    let chain = ChainGroupAlgebra::new(Arc::clone(&c3), ChainRing::zmod(2, 2).unwrap());
    println!("\nZ/4[C3]: lifting the two field idempotents through Z/4");
    for pim in chain_pims(&chain, 1).unwrap().iter() {
        let e = &pim.idempotent;
        assert_eq!(chain.mul(e, e).unwrap(), *e);
        println!(
            "  chain PIM of rank {} generated by idempotent {:?} (e^2 = e over Z/4)",
            pim.module.rank(),
            e.coeffs()
        );
    }

    // e and 1 - e lift to an orthogonal pair
    let one_minus = chain
        .sub(&chain.one(), &chain_pims(&chain, 1).unwrap()[0].idempotent)
        .unwrap();
    let sq = chain.mul(&one_minus, &one_minus).unwrap();
    assert_eq!(sq, one_minus, "1 - e is idempotent too");
    println!("  1 - e is again idempotent, and e(1-e) = 0");
}
