//! The Cartan scaling law over chain rings.
//!
//! For a local artinian chain ring R of length t with residue field k,
//! each lifted projective indecomposable P over R[G] carries a filtration
//! by powers of the uniformizer whose graded pieces are all isomorphic to
//! P/uP. Consequently Cartan(R[G]) = t * Cartan(k[G]) entrywise. The left
//! side here is computed honestly: Howell-form filtrations of the lifted
//! PIMs, each graded piece chopped over the residue field.
//!
//! Run with: cargo run --example chain_scaling

use std::sync::Arc;

use cartan::artinring::{cartan_chain, chain_pims, graded_pieces};
use cartan::exactla::ChainRing;
use cartan::groupalg::ChainGroupAlgebra;
use cartan::groups::Group;

fn show(spec: &str, ring: ChainRing) {
    let group = Group::parse(spec).unwrap();
    let alg = ChainGroupAlgebra::new(Arc::clone(&group), ring);
    let c = cartan_chain(&alg, 1).unwrap();
    println!("{ring}[{spec}]  (length t = {})", ring.len());
    println!("  Cartan over the chain ring:");
    for line in c.matrix.to_string().lines() {
        println!("    {line}");
    }
    println!("  Cartan over the residue field:");
    for line in c.field_matrix.to_string().lines() {
        println!("    {line}");
    }
    println!(
        "  scaling law holds: {}   det = {} = t^n * {}",
        c.scaling_ok, c.det, c.field_det
    );
    println!();
}

fn main() {
    show("C2", ChainRing::zmod(2, 2).unwrap());
    show("S3", ChainRing::zmod(3, 2).unwrap());
    show("S3", ChainRing::trunc_poly(3, 3).unwrap());
    show("Q8", ChainRing::zmod(2, 3).unwrap());

    // look inside one filtration
    let group = Group::parse("S3").unwrap();
    let ring = ChainRing::zmod(3, 2).unwrap();
    let alg = ChainGroupAlgebra::new(Arc::clone(&group), ring);
    let kalg = alg.residue_algebra();
    println!("filtration of the first PIM of Z/9[S3]:");
    let pims = chain_pims(&alg, 1).unwrap();
    let graded = graded_pieces(&alg, &pims[0].module).unwrap();
    for (i, piece) in graded.pieces.iter().enumerate() {
        let counts = kalg.chop(piece, 1).unwrap();
        println!(
            "  u^{i} P / u^{} P: dim {} with factor multiset {:?}",
            i + 1,
            piece.dim(),
            counts.counts()
        );
    }
}
