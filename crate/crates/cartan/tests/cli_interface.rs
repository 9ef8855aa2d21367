//! End-to-end tests of the command-line interface: exit codes, JSON
//! round-trips, and reproducibility.

use std::process::{Command, Output};

fn cartan_bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cartan"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

#[test]
fn cartan_json_s3_f3() {
    let out = cartan_bin(&["cartan", "--group", "S3", "--coeff", "F3", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(v["det"], 3);
    assert_eq!(v["injective"], true);
    assert_eq!(v["cartan"], serde_json::json!([[2, 1], [1, 2]]));
    assert_eq!(v["simples"].as_array().unwrap().len(), 2);
    // round-trip: recompute the determinant from the emitted matrix
    let m = v["cartan"].as_array().unwrap();
    let a = m[0][0].as_i64().unwrap();
    let b = m[0][1].as_i64().unwrap();
    let c = m[1][0].as_i64().unwrap();
    let d = m[1][1].as_i64().unwrap();
    assert_eq!(a * d - b * c, v["det"].as_i64().unwrap());
}

#[test]
fn cartan_semisimple_identity_output() {
    let out = cartan_bin(&["cartan", "--group", "C3", "--coeff", "F2", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(v["cartan"], serde_json::json!([[1, 0], [0, 1]]));
    assert_eq!(v["det"], 1);
}

#[test]
fn verify_all_single_point_exits_zero() {
    let out = cartan_bin(&["verify", "--all", "--group", "C4", "--coeff", "Z/2^2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout_str(&out));
}

#[test]
fn verify_single_suite() {
    let out = cartan_bin(&[
        "verify",
        "--suite",
        "brauer_nesbitt",
        "--group",
        "S3",
        "--coeff",
        "F2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_str(&out).contains("1 passed"));
}

#[test]
fn usage_errors_exit_two() {
    let out = cartan_bin(&["cartan", "--group", "A5", "--coeff", "F2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unsupported"));

    let out = cartan_bin(&["cartan", "--group", "S3", "--coeff", "Z/4"]);
    assert_eq!(out.status.code(), Some(2));

    let out = cartan_bin(&[
        "verify", "--suite", "nonsense", "--group", "C2", "--coeff", "F2",
    ]);
    assert_eq!(out.status.code(), Some(2));

    let out = cartan_bin(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn stable_json_byte_identical() {
    let args = [
        "verify",
        "--suite",
        "brauer_nesbitt",
        "--group",
        "S3",
        "--coeff",
        "F3",
        "--json",
        "--stable",
    ];
    let a = cartan_bin(&args);
    let b = cartan_bin(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "stable output must be byte-identical");
}

#[test]
fn chop_and_projtest_module_file() {
    use cartan::exactla::PrimeField;
    use cartan::groupalg::GroupAlgebra;
    use cartan::groups::Group;

    // write the 2-dimensional simple of F_2[S3] to a module file
    let alg = GroupAlgebra::new(Group::parse("S3").unwrap(), PrimeField::new(2).unwrap());
    let m = alg.simple_module(1).unwrap();
    let json = cartan::modrep::module_to_json(&alg, &m);
    let dir = std::env::temp_dir();
    let path = dir.join("cartan_cli_test_module.json");
    std::fs::write(&path, json.to_string()).unwrap();
    let path = path.to_str().unwrap();

    let out = cartan_bin(&["chop", "--module", path, "--json"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(v["dim"], 2);
    let factors = v["factors"].as_array().unwrap();
    assert_eq!(factors[1]["multiplicity"], 1);

    // the module is projective and all three verdicts agree
    let out = cartan_bin(&["projtest", "--module", path, "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(v["projective"], true);
    assert_eq!(v["verdicts_agree"], true);
}

#[test]
fn projtest_nonprojective_module() {
    use cartan::exactla::PrimeField;
    use cartan::groupalg::GroupAlgebra;
    use cartan::groups::Group;

    // k[G]/(u) for C2 over F_2 is not projective but the verdicts agree
    let alg = GroupAlgebra::new(Group::parse("C2").unwrap(), PrimeField::new(2).unwrap());
    let reg = alg.regular_module();
    let u = alg.u_element();
    let spun = alg.spin(&reg, &[u.coeffs().to_vec()]);
    let q = alg.quotient_module(&reg, &spun.basis);
    let json = cartan::modrep::module_to_json(&alg, &q);
    let path = std::env::temp_dir().join("cartan_cli_test_nonproj.json");
    std::fs::write(&path, json.to_string()).unwrap();

    let out = cartan_bin(&["projtest", "--module", path.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0), "verdicts agree, exit 0");
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(v["projective"], false);
    assert_eq!(v["verdicts_agree"], true);
}

#[test]
fn corrupt_module_file_exits_two() {
    let path = std::env::temp_dir().join("cartan_cli_test_corrupt.json");
    std::fs::write(
        &path,
        r#"{"group": "C2", "coeff": "F2", "dim": 2,
            "actions": [{"generator": 0, "matrix": [[1,0],[0,1]]}]}"#,
    )
    .unwrap();
    // the identity matrix is not the regular action of the generator:
    // rho(g * g) = rho(1) = I holds, but rho(g) must square to rho(g^2)...
    // here rho(g) = I makes a VALID C2 module (trivial + trivial), so use
    // a genuinely broken one: non-invertible action
    std::fs::write(
        &path,
        r#"{"group": "C2", "coeff": "F2", "dim": 2,
            "actions": [{"generator": 0, "matrix": [[1,1],[1,1]]}]}"#,
    )
    .unwrap();
    let out = cartan_bin(&["chop", "--module", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_with_corpus_file() {
    let cfg = serde_json::json!({
        "groups": ["S3", "C4"],
        "coeffs": ["F2", "Z/2^2"],
        "suites": ["brauer_nesbitt", "scaling"],
    });
    let path = std::env::temp_dir().join("cartan_cli_test_corpus.json");
    std::fs::write(&path, cfg.to_string()).unwrap();
    let out = cartan_bin(&["verify", "--corpus", path.to_str().unwrap(), "--json", "--stable"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let reports: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    // 2 groups x 2 coeffs x 2 suites
    assert_eq!(reports.as_array().unwrap().len(), 8);
    // the scaling suite is skipped on field points and runs on chain points
    let scaling_on_field = reports
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["suite"] == "scaling" && r["inputs"]["coeff"] == "F2")
        .unwrap();
    assert_eq!(scaling_on_field["checks"][0]["status"], "skipped");

    // a corpus file with an unknown suite is a usage error
    let bad = serde_json::json!({"groups": ["C2"], "coeffs": ["F2"], "suites": ["bogus"]});
    std::fs::write(&path, bad.to_string()).unwrap();
    let out = cartan_bin(&["verify", "--corpus", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn artin_table_output() {
    let out = cartan_bin(&["artin", "--group", "S4", "--coeff", "F2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    assert!(text.contains("cokernel finite: true"));
    assert!(text.contains("image invariant under conjugation: true"));
}

#[test]
fn describe_table() {
    let out = cartan_bin(&["describe", "--group", "S3", "--coeff", "F2"]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    assert!(text.contains("S0  dim 1"));
    assert!(text.contains("S1  dim 2"));
}

#[test]
fn chain_cartan_json() {
    let out = cartan_bin(&["cartan", "--group", "S3", "--coeff", "F3[t]/t^3", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(v["det"], 27);
    assert_eq!(v["scaling_ok"], true);
    assert_eq!(v["field_det"], 3);
    assert_eq!(v["cartan"], serde_json::json!([[6, 3], [3, 6]]));
}
