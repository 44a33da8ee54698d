use std::process::Command;

use cohomotopy::cli::{exit, run};
use cohomotopy::db::SHIPPED;

fn cli(args: &[&str]) -> cohomotopy::cli::Outcome {
    run(std::iter::once("cohomotopy").chain(args.iter().copied()))
}

fn temp_db(name: &str, text: &str) -> String {
    let path = std::env::temp_dir().join(format!(
        "cohomotopy-cli-{}-{name}.cohdb",
        std::process::id()
    ));
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn compute_prints_group_generators_and_citations() {
    let o = cli(&["compute", "--n", "6", "--k", "6"]);
    assert_eq!(o.code, exit::OK, "{}", o.stderr);
    assert!(
        o.stdout.contains("group: Z/4 + Z/4 + Z/9 + Z/3  ["),
        "{}",
        o.stdout
    );
    assert!(o.stdout.contains("table notation: 4^2+9+3"));
    assert!(o.stdout.contains("  nubar_6 . ext(2i_14)\n"));
    let cites = o.stdout.split("citations:\n").nth(1).unwrap();
    assert!(cites.lines().count() >= 3);
}

#[test]
fn compute_csv_is_one_row() {
    let o = cli(&["--format", "csv", "compute", "--n", "10", "--k", "7"]);
    let lines: Vec<&str> = o.stdout.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(
        lines[1].starts_with("10,7,Z + Z/8 + Z/2 + Z/9 + Z/7,inf+8+2+63,"),
        "{}",
        lines[1]
    );
}

#[test]
fn verify_passes_with_one_documented_discrepancy() {
    let o = cli(&["verify"]);
    assert_eq!(o.code, exit::OK);
    assert_eq!(
        o.stdout.lines().last().unwrap(),
        "all golden cells pass; 1 documented discrepancy (components n=7)"
    );
    // Every cell line names its source.
    for line in o
        .stdout
        .lines()
        .filter(|l| l.contains(" PASS ") || l.contains(" DOCUMENTED "))
    {
        assert!(line.ends_with(']'), "{line}");
    }
}

#[test]
fn table_csv_for_k8() {
    let o = cli(&["table", "--k", "8", "--format", "csv"]);
    assert_eq!(o.code, exit::OK);
    let lines: Vec<&str> = o.stdout.lines().collect();
    assert_eq!(lines.len(), 14);
    assert_eq!(lines[0], "k,n,canonical,paper_notation");
    assert!(lines[13].ends_with(",14,3,3"), "{}", lines[13]);
}

#[test]
fn ascii_table_rows_carry_sources() {
    let o = cli(&["table", "--k", "6"]);
    let rows: Vec<&str> = o.stdout.lines().skip(2).collect();
    assert_eq!(rows.len(), 11);
    assert!(
        rows.iter().all(|r| !r.trim_end().ends_with(" -")),
        "{}",
        o.stdout
    );
    assert!(rows.last().unwrap().starts_with("12+"));
}

#[test]
fn gottlieb_components_and_mapspace() {
    let o = cli(&["gottlieb", "--n", "3"]);
    assert!(
        o.stdout.starts_with("G_3(CP^2, S^4) = Z + Z/2  ["),
        "{}",
        o.stdout
    );
    assert!(o.stdout.contains("index 6"));
    let o = cli(&["components", "--n", "7"]);
    assert_eq!(o.code, exit::OK);
    assert!(o.stdout.contains("7 classes"));
    assert!(o.stdout.contains("documented-discrepancy"));
    let o = cli(&["mapspace", "--n", "11"]);
    assert!(
        o.stdout
            .starts_with("pi_11(map_*(CP^2, CP^2)) = Z/4 + Z/9  ["),
        "{}",
        o.stdout
    );
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["verify"][..],
        &["table", "--k", "7"],
        &["compute", "--n", "4", "--k", "8"],
    ] {
        assert_eq!(cli(args), cli(args));
    }
}

#[test]
fn output_is_ascii() {
    for args in [
        &["verify"][..],
        &["components", "--n", "5"],
        &["gottlieb", "--n", "8"],
        &["table", "--k", "8"],
    ] {
        assert!(cli(args).stdout.is_ascii(), "{args:?}");
    }
}

#[test]
fn usage_errors() {
    assert_eq!(cli(&[]).code, exit::USAGE);
    assert_eq!(cli(&["compute", "--n", "4"]).code, exit::USAGE);
    assert_eq!(cli(&["compute", "--n", "0", "--k", "6"]).code, exit::USAGE);
    assert_eq!(cli(&["table", "--k", "9"]).code, exit::USAGE);
    assert_eq!(cli(&["mapspace", "--n", "20"]).code, exit::USAGE);
    assert_eq!(cli(&["--format", "json", "verify"]).code, exit::USAGE);
    let help = cli(&["--help"]);
    assert_eq!(help.code, exit::OK);
    assert!(help.stdout.contains("db-check"));
}

#[test]
fn invalid_databases_exit_2() {
    let o = cli(&["--db", "/nonexistent/paper.cohdb", "verify"]);
    assert_eq!(o.code, exit::INVALID_DB);
    assert!(!o.stderr.is_empty());

    let bad = SHIPPED.replacen(
        "generators = nu_4 . sigma' : 8, S(eps') : 2",
        "generators = nu_4 . sigma' : 3, S(eps') : 2",
        1,
    );
    let path = temp_db("corrupt", &bad);
    let o = cli(&["--db", &path, "db-check"]);
    assert_eq!(o.code, exit::INVALID_DB);
    assert!(o.stdout.contains("FAIL generator-orders"), "{}", o.stdout);
    assert_eq!(
        cli(&["--db", &path, "compute", "--n", "4", "--k", "6"]).code,
        exit::INVALID_DB
    );

    let ok = cli(&["db-check"]);
    assert_eq!(ok.code, exit::OK);
    assert!(ok.stdout.ends_with(" 0 failures\n"));
}

#[test]
fn golden_mismatch_exits_1() {
    let bad = SHIPPED.replacen("components = 4", "components = 5", 1);
    let o = cli(&["--db", &temp_db("mismatch", &bad), "verify"]);
    assert_eq!(o.code, exit::MISMATCH, "{}{}", o.stdout, o.stderr);
    assert!(o.stdout.lines().last().unwrap().starts_with("1 of "));
}

#[test]
fn missing_evidence_exits_3() {
    let db = cohomotopy::db::Database::shipped();
    let mut thin = db.clone();
    thin.evidence.retain(|e| !(e.k == 7 && e.rows.contains(4)));
    let path = temp_db("thin", &thin.to_cohdb());
    let o = cli(&["--db", &path, "compute", "--n", "4", "--k", "7"]);
    assert_eq!(o.code, exit::UNRESOLVED, "{}", o.stderr);
}

#[test]
fn binary_exit_status() {
    let status = Command::new(env!("CARGO_BIN_EXE_cohomotopy"))
        .args(["verify"])
        .current_dir(concat!(env!("CARGO_MANIFEST_DIR"), "/../.."))
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(0));
    let usage = Command::new(env!("CARGO_BIN_EXE_cohomotopy"))
        .output()
        .unwrap();
    assert_eq!(usage.status.code(), Some(4));
}
