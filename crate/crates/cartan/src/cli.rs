//! Command-line front end.
//!
//! Subcommands: `describe`, `cartan`, `chop`, `projtest`, `artin`,
//! `verify`. Exit codes: 0 all checks passed, 1 a check failed, 2 usage
//! or input error, 3 computational error (e.g. an undecided
//! irreducibility test).

use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::json;

use crate::artinring::{cartan_chain, is_chain_projective, reduce_mod_max, AnyAlgebra, CoeffSpec};
use crate::error::Error;
use crate::exactla::IntMatrix;
use crate::grothendieck::{artin_exponent_check, cartan_matrix};
use crate::groupalg::GroupAlgebra;
use crate::groups::{Group, Subgroup};
use crate::modrep::{load_module, LoadedModule, RepModule};
use crate::verify::{self, CorpusConfig, Status, SuiteReport};
use crate::Result;

#[derive(Parser)]
#[command(
    name = "cartan",
    about = "Exact modular representation theory: group algebras, composition series, Cartan matrices and structure-theorem verification",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct PointArgs {
    /// Group spec: Cn, Dn (order n), Q8, Sn (n<=4), A4, products with x,
    /// or table:<path>
    #[arg(long)]
    group: String,
    /// Coefficient spec: F<p>, Z/<p>^<n>, or F<p>[t]/t^<m>
    #[arg(long)]
    coeff: String,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Seed for randomized searches (results are seed-independent)
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Emit machine-readable JSON instead of tables
    #[arg(long)]
    json: bool,
    /// Omit timing fields so identical runs are byte-identical
    #[arg(long)]
    stable: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Describe an algebra: simple modules, projective indecomposables,
    /// radical dimension
    Describe {
        #[command(flatten)]
        point: PointArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Cartan matrix, determinant and injectivity of the Cartan map
    Cartan {
        #[command(flatten)]
        point: PointArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Composition multiset of a module file
    Chop {
        /// Path to a module JSON file
        #[arg(long)]
        module: String,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Three-way projectivity test (full / Sylow restriction / maximal
    /// elementary abelians) for a module file
    Projtest {
        #[arg(long)]
        module: String,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Artin induction: exponent of the cokernel of induction from cyclic
    /// subgroups
    Artin {
        #[command(flatten)]
        point: PointArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run verification suites
    Verify {
        /// A single suite name (default: all suites)
        #[arg(long, conflicts_with = "all")]
        suite: Option<String>,
        /// Run all suites (the default)
        #[arg(long)]
        all: bool,
        /// Restrict to one corpus point
        #[arg(long, requires = "coeff")]
        group: Option<String>,
        #[arg(long, requires = "group")]
        coeff: Option<String>,
        /// Corpus config JSON file: {"groups": [...], "coeffs": [...],
        /// "suites": [...]}
        #[arg(long, conflicts_with_all = ["group", "coeff"])]
        corpus: Option<String>,
        #[command(flatten)]
        common: CommonArgs,
    },
}

/// Entry point used by the binary; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap prints its own message; usage errors exit 2, help/version 0
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Describe { point, common } => describe(&point, &common),
        Command::Cartan { point, common } => cartan_cmd(&point, &common),
        Command::Chop { module, common } => chop_cmd(&module, &common),
        Command::Projtest { module, common } => projtest_cmd(&module, &common),
        Command::Artin { point, common } => artin_cmd(&point, &common),
        Command::Verify {
            suite,
            all,
            group,
            coeff,
            corpus,
            common,
        } => verify_cmd(suite, all, group, coeff, corpus, &common),
    }
}

fn build_point(point: &PointArgs) -> Result<AnyAlgebra> {
    let group = Group::parse(&point.group)?;
    let coeff = CoeffSpec::parse(&point.coeff)?;
    Ok(AnyAlgebra::build(group, coeff))
}

fn bigint_json(v: &BigInt) -> serde_json::Value {
    match i64::try_from(v.clone()) {
        Ok(n) => json!(n),
        Err(_) => json!(v.to_string()),
    }
}

fn int_matrix_rows(m: &IntMatrix) -> Vec<Vec<serde_json::Value>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| bigint_json(m.get(i, j))).collect())
        .collect()
}

fn print_int_matrix(m: &IntMatrix) {
    print!("{m}");
}

fn describe(point: &PointArgs, common: &CommonArgs) -> Result<i32> {
    let alg = build_point(point)?;
    let kalg = alg.residue_algebra();
    let simples = kalg.simples()?;
    let pims = kalg.pims(common.seed)?;
    let rad = kalg.radical()?;
    let length = alg.coeff().length();
    if common.json {
        let out = json!({
            "group": point.group,
            "coeff": point.coeff,
            "order": alg.group().order(),
            "algebra_dim": alg.group().order(),
            "coefficient_length": length,
            "residue_radical_dim": rad.dim(),
            "simples": simples.iter().map(|s| json!({
                "id": s.id, "dim": s.dim, "endo_degree": s.endo_dim,
            })).collect::<Vec<_>>(),
            "pims": pims.iter().map(|p| json!({
                "head": p.head, "dim": p.module.dim(), "multiplicity": p.multiplicity,
            })).collect::<Vec<_>>(),
        });
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        println!(
            "group {} (order {}), coefficients {}",
            point.group,
            alg.group().order(),
            point.coeff
        );
        println!("residue field radical dimension: {}", rad.dim());
        println!("simple modules:");
        for s in &simples {
            println!("  S{}  dim {}  endo degree {}", s.id, s.dim, s.endo_dim);
        }
        println!("projective indecomposables (over the residue field):");
        for p in pims.iter() {
            println!(
                "  P{}  dim {}  head S{}  multiplicity {} in the regular module",
                p.head,
                p.module.dim(),
                p.head,
                p.multiplicity
            );
        }
        if length > 1 {
            println!("coefficient ring has length {length}; lifted PIMs have the same ranks");
        }
    }
    Ok(0)
}

fn cartan_cmd(point: &PointArgs, common: &CommonArgs) -> Result<i32> {
    let alg = build_point(point)?;
    match &alg {
        AnyAlgebra::Field(a) => {
            let c = cartan_matrix(a, common.seed)?;
            let det = c.matrix.det();
            let injective = !det.is_zero();
            if common.json {
                let simples = a.simples()?;
                let out = json!({
                    "simples": simples.iter().map(|s| json!({"dim": s.dim, "endo_degree": s.endo_dim})).collect::<Vec<_>>(),
                    "cartan": int_matrix_rows(&c.matrix),
                    "det": bigint_json(&det),
                    "injective": injective,
                });
                println!("{}", serde_json::to_string_pretty(&out)?);
            } else {
                println!("Cartan matrix of {}[{}]:", point.coeff, point.group);
                print_int_matrix(&c.matrix);
                println!("det = {det}");
                println!("Cartan map injective: {injective}");
            }
            Ok(if injective { 0 } else { 1 })
        }
        AnyAlgebra::Chain(a) => {
            let c = cartan_chain(a, common.seed)?;
            let injective = !c.det.is_zero();
            if common.json {
                let simples = a.residue_algebra().simples()?;
                let out = json!({
                    "simples": simples.iter().map(|s| json!({"dim": s.dim, "endo_degree": s.endo_dim})).collect::<Vec<_>>(),
                    "cartan": int_matrix_rows(&c.matrix),
                    "det": bigint_json(&c.det),
                    "injective": injective,
                    "length": a.ring().len(),
                    "field_cartan": int_matrix_rows(&c.field_matrix),
                    "field_det": bigint_json(&c.field_det),
                    "scaling_ok": c.scaling_ok,
                });
                println!("{}", serde_json::to_string_pretty(&out)?);
            } else {
                println!("Cartan matrix of {}[{}]:", point.coeff, point.group);
                print_int_matrix(&c.matrix);
                println!("det = {}", c.det);
                println!("residue field Cartan matrix:");
                print_int_matrix(&c.field_matrix);
                println!("field det = {}", c.field_det);
                println!("scaling law (length x field Cartan): {}", c.scaling_ok);
                println!("Cartan map injective: {injective}");
            }
            Ok(if injective && c.scaling_ok { 0 } else { 1 })
        }
    }
}

fn chop_cmd(path: &str, common: &CommonArgs) -> Result<i32> {
    match load_module(path)? {
        LoadedModule::Field(alg, m) => {
            let counts = alg.chop(&m, common.seed)?;
            let simples = alg.simples()?;
            if common.json {
                let out = json!({
                    "dim": m.dim(),
                    "factors": simples.iter().zip(counts.counts()).map(|(s, &c)| json!({
                        "id": s.id, "dim": s.dim, "multiplicity": c,
                    })).collect::<Vec<_>>(),
                });
                println!("{}", serde_json::to_string_pretty(&out)?);
            } else {
                println!("module of dimension {}", m.dim());
                println!("composition factors:");
                for (s, &c) in simples.iter().zip(counts.counts()) {
                    if c > 0 {
                        println!("  S{} (dim {}) x {}", s.id, s.dim, c);
                    }
                }
            }
            Ok(0)
        }
        LoadedModule::Chain(_, _) => Err(Error::ModuleFile(
            "chop is defined over field coefficients; chain modules are analyzed through their graded pieces".into(),
        )),
    }
}

fn three_way_field(
    alg: &Arc<GroupAlgebra>,
    m: &RepModule,
    seed: u64,
) -> Result<(bool, bool, Vec<(usize, bool)>)> {
    let p = alg.field().p();
    let group = Arc::clone(alg.group());
    let sylow = group.sylow_subgroup(p);
    let full = alg.is_projective(m, seed)?;
    let (syl_alg, syl_res) = alg.restrict(m, &sylow);
    let syl = syl_alg.is_projective(&syl_res, seed)?;
    let mut elabs = Vec::new();
    for e in elementary_abelians_in_parent(&group, &sylow, p)? {
        let (e_alg, e_res) = alg.restrict(m, &e);
        elabs.push((e.order(), e_alg.is_projective(&e_res, seed)?));
    }
    Ok((full, syl, elabs))
}

fn elementary_abelians_in_parent(
    group: &Arc<Group>,
    sylow: &Subgroup,
    p: u64,
) -> Result<Vec<Subgroup>> {
    let mut out = Vec::new();
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
        out.push(Subgroup::new(Arc::clone(group), parent_els)?);
    }
    Ok(out)
}

fn projtest_cmd(path: &str, common: &CommonArgs) -> Result<i32> {
    let (full, syl, elabs, dim, group, coeff) = match load_module(path)? {
        LoadedModule::Field(alg, m) => {
            let (f, s, e) = three_way_field(&alg, &m, common.seed)?;
            (
                f,
                s,
                e,
                m.dim(),
                alg.group().spec_string().to_string(),
                format!("F{}", alg.field().p()),
            )
        }
        LoadedModule::Chain(alg, m) => {
            let p = alg.ring().p();
            let group = Arc::clone(alg.group());
            let sylow = group.sylow_subgroup(p);
            let full = is_chain_projective(&alg, &m, common.seed)?;
            let (syl_alg, syl_res) = alg.restrict(&m, &sylow);
            let syl = is_chain_projective(&syl_alg, &syl_res, common.seed)?;
            let mut elabs = Vec::new();
            for e in elementary_abelians_in_parent(&group, &sylow, p)? {
                let (e_alg, e_res) = alg.restrict(&m, &e);
                elabs.push((e.order(), is_chain_projective(&e_alg, &e_res, common.seed)?));
            }
            let _ = reduce_mod_max(&alg, &m)?;
            (
                full,
                syl,
                elabs,
                m.rank(),
                group.spec_string().to_string(),
                format!("{}", alg.ring()),
            )
        }
    };
    let elab_all = elabs.iter().all(|&(_, v)| v);
    let agree = full == syl && syl == elab_all;
    if common.json {
        let out = json!({
            "group": group,
            "coeff": coeff,
            "dim": dim,
            "projective": full,
            "sylow_restriction_projective": syl,
            "elementary_abelian_restrictions": elabs.iter().map(|&(o, v)| json!({
                "order": o, "projective": v,
            })).collect::<Vec<_>>(),
            "verdicts_agree": agree,
        });
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        println!("module over {coeff}[{group}], dim {dim}");
        println!("  projective over the full algebra:    {full}");
        println!("  projective restricted to Sylow:      {syl}");
        for (o, v) in &elabs {
            println!("  projective restricted to E (order {o}): {v}");
        }
        println!("verdicts agree: {agree}");
    }
    Ok(if agree { 0 } else { 1 })
}

fn artin_cmd(point: &PointArgs, common: &CommonArgs) -> Result<i32> {
    let alg = build_point(point)?;
    let AnyAlgebra::Field(a) = &alg else {
        return Err(Error::IncompatibleInput {
            suite: "artin".into(),
            reason: "Artin induction lattices are computed over field coefficients".into(),
        });
    };
    let report = artin_exponent_check(a, common.seed)?;
    let ok = report.finite && report.bound_ok && report.conjugation_invariant;
    if common.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&serde_json::to_value(&report)?)?
        );
    } else {
        let n = a.group().order();
        println!("Artin induction for {}[{}]:", point.coeff, point.group);
        println!("  cyclic subgroup classes: {}", report.num_cyclic_classes);
        println!("  elementary divisors: {:?}", report.divisors);
        println!("  cokernel finite: {}", report.finite);
        println!(
            "  exponent: {} (divides |G|^2 = {}: {})",
            report.exponent,
            n * n,
            report.bound_ok
        );
        println!(
            "  image invariant under conjugation: {}",
            report.conjugation_invariant
        );
    }
    Ok(if ok { 0 } else { 1 })
}

fn verify_cmd(
    suite: Option<String>,
    _all: bool,
    group: Option<String>,
    coeff: Option<String>,
    corpus: Option<String>,
    common: &CommonArgs,
) -> Result<i32> {
    let suites: Vec<String> = match &suite {
        Some(s) => vec![s.clone()],
        None => verify::SUITES.iter().map(|s| s.to_string()).collect(),
    };
    let config = if let (Some(g), Some(c)) = (&group, &coeff) {
        CorpusConfig {
            groups: vec![g.clone()],
            coeffs: vec![c.clone()],
            suites,
        }
    } else if let Some(path) = &corpus {
        let text = std::fs::read_to_string(path)?;
        let mut cfg = CorpusConfig::from_json(&text)?;
        if cfg.suites.is_empty() {
            cfg.suites = suites;
        }
        cfg
    } else {
        let mut cfg = verify::default_corpus();
        cfg.suites = suites;
        cfg
    };
    let reports = verify::run_corpus(&config, common.seed)?;
    let failed = reports.iter().filter(|r| !r.passed()).count();
    if common.json {
        let arr: Vec<serde_json::Value> =
            reports.iter().map(|r| r.to_json(common.stable)).collect();
        println!("{}", serde_json::to_string_pretty(&arr)?);
    } else {
        print_report_table(&reports);
    }
    Ok(if failed == 0 { 0 } else { 1 })
}

fn print_report_table(reports: &[SuiteReport]) {
    let mut pass = 0;
    let mut fail = 0;
    let mut skip = 0;
    for r in reports {
        let status = if r.skipped() {
            skip += 1;
            "skip"
        } else if r.passed() {
            pass += 1;
            "pass"
        } else {
            fail += 1;
            "FAIL"
        };
        println!(
            "{status}  {:<18} {:<10} {}",
            r.suite, r.inputs.group, r.inputs.coeff
        );
        if status == "FAIL" {
            for c in r.checks.iter().filter(|c| c.status == Status::Fail) {
                println!("      failed check {}: {}", c.name, c.evidence);
            }
        }
    }
    println!(
        "{} suite runs: {pass} passed, {fail} failed, {skip} skipped",
        reports.len()
    );
}
