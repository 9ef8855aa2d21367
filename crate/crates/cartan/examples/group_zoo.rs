//! Tour of the group layer: spec parsing, validated Cayley tables, words,
//! Sylow subgroups, elementary abelians, cyclic classes and quotients.
//!
//! Run with: cargo run --example group_zoo

use cartan::groups::Group;

fn main() {
    for spec in ["C6", "C2xC2", "D8", "Q8", "S3", "S4", "A4", "D12"] {
        let g = Group::parse(spec).unwrap();
        let classes = g.conjugacy_classes();
        println!(
            "{spec:<6} order {:>2}, {} conjugacy classes, generators {:?}",
            g.order(),
            classes.len(),
            g.generators()
        );
    }

    let s4 = Group::parse("S4").unwrap();
    println!("\nS4 in detail:");
    for p in [2u64, 3] {
        let syl = s4.sylow_subgroup(p);
        println!(
            "  Sylow {p}-subgroup: order {}, normal: {}",
            syl.order(),
            syl.is_normal()
        );
    }
    let cyc = s4.cyclic_subgroup_classes();
    println!(
        "  cyclic subgroup classes: orders {:?}",
        cyc.iter().map(|c| c.order()).collect::<Vec<_>>()
    );

    let d8 = Group::parse("D8").unwrap();
    let eas = d8.elementary_abelian_subgroups(2);
    let maximal: Vec<_> = eas.iter().filter(|e| e.maximal).collect();
    println!(
        "\nD8: {} elementary abelian 2-subgroups, {} maximal (the two Kleins)",
        eas.len(),
        maximal.len()
    );

    // every element's word evaluates back to it
    for e in 0..s4.order() {
        assert_eq!(s4.eval_word(s4.word(e)), e);
    }
    println!(
        "\nS4 generator words verified; longest word has length {}",
        (0..s4.order()).map(|e| s4.word(e).len()).max().unwrap()
    );

    // quotient of S3 by its normal Sylow 3-subgroup
    let s3 = Group::parse("S3").unwrap();
    let a3 = s3.sylow_subgroup(3);
    let (q, projection) = s3.quotient(&a3).unwrap();
    println!(
        "\nS3 / A3 has order {} with projection {:?}",
        q.order(),
        projection
    );
}
