//! Run the full default verification corpus: every suite on every (group,
//! coefficient ring) point, with incompatible combinations skipped.
//!
//! Run with: cargo run --release --example verify_corpus

use std::time::Instant;

use cartan::verify::{default_corpus, run_corpus, Status};

fn main() {
    let config = default_corpus();
    println!(
        "corpus: {} groups x {} coefficient rings x {} suites",
        config.groups.len(),
        config.coeffs.len(),
        config.suites().len()
    );
    let start = Instant::now();
    let reports = run_corpus(&config, 1).unwrap();
    let elapsed = start.elapsed();

    let mut pass = 0;
    let mut fail = 0;
    let mut skip = 0;
    for r in &reports {
        if r.skipped() {
            skip += 1;
        } else if r.passed() {
            pass += 1;
        } else {
            fail += 1;
            println!(
                "FAIL {} on {} / {}",
                r.suite, r.inputs.group, r.inputs.coeff
            );
            for c in r.checks.iter().filter(|c| c.status == Status::Fail) {
                println!("  {}: {}", c.name, c.evidence);
            }
        }
    }
    println!(
        "{} suite runs in {elapsed:?}: {pass} passed, {fail} failed, {skip} skipped",
        reports.len()
    );

    // per-suite tally
    for suite in cartan::verify::SUITES {
        let ran = reports
            .iter()
            .filter(|r| r.suite == suite && !r.skipped())
            .count();
        let ok = reports
            .iter()
            .filter(|r| r.suite == suite && !r.skipped() && r.passed())
            .count();
        println!("  {suite:<18} {ok}/{ran}");
    }
    assert_eq!(fail, 0);
}
