//! Compute Cartan matrices of group algebras over prime fields.
//!
//! The Cartan matrix records, for each projective indecomposable P_i, the
//! multiplicities of the simple modules among its composition factors.
//! Its determinant never vanishes; this example computes a few classical
//! cases exactly.
//!
//! Run with: cargo run --example cartan_matrix

use std::sync::Arc;

use cartan::exactla::PrimeField;
use cartan::grothendieck::{cartan_injectivity, cartan_matrix};
use cartan::groupalg::GroupAlgebra;
use cartan::groups::Group;

fn show(spec: &str, p: u64) {
    let group = Group::parse(spec).unwrap();
    let alg = GroupAlgebra::new(Arc::clone(&group), PrimeField::new(p).unwrap());
    let simples = alg.simples().unwrap();
    let c = cartan_matrix(&alg, 1).unwrap();
    let (det, injective) = cartan_injectivity(&alg, 1).unwrap();
    println!("F_{p}[{spec}]  (order {})", group.order());
    print!(
        "  simples: {}",
        simples
            .iter()
            .map(|s| format!("S{} (dim {}, endo degree {})", s.id, s.dim, s.endo_dim))
            .collect::<Vec<_>>()
            .join(", ")
    );
    println!();
    println!("  PIM dims: {:?}", c.pim_dims);
    println!("  Cartan matrix:");
    for line in c.matrix.to_string().lines() {
        println!("    {line}");
    }
    println!("  det = {det}, Cartan map injective: {injective}");
    println!();
}

fn main() {
    // semisimple: gcd(|G|, p) = 1 forces the identity matrix
    show("C3", 2);
    // local algebra: one simple, Cartan = [|G|]
    show("C4", 2);
    // two blocks with an off-diagonal link
    show("S3", 3);
    // a projective simple makes the matrix diagonal but not scalar
    show("S3", 2);
    // bigger: S4 at both bad primes
    show("S4", 2);
    show("S4", 3);
}
