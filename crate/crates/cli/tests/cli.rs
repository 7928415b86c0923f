//! End-to-end tests of the `bigraph` binary: output schemas, exit codes,
//! and round trips.

use std::process::{Command, Output};

fn bigraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bigraph"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_str(stdout(out).trim()).expect("stdout is valid JSON")
}

#[test]
fn gen_emits_valid_json_graph() {
    let out = bigraph(&["gen", "--family", "Q", "--n", "4", "--k", "1"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["m"], 4);
    assert_eq!(v["n"], 4);
    assert_eq!(v["edges"].as_array().unwrap().len(), 10);
}

#[test]
fn gen_round_trips_through_both_encodings() {
    let compact = bigraph(&["gen", "--family", "S", "--n", "5", "--k", "2", "--compact"]);
    assert!(compact.status.success());
    let compact_str = stdout(&compact).trim().to_string();

    let json_out = bigraph(&["gen", "--family", "S", "--n", "5", "--k", "2"]);
    let from_compact = bigraph::codec::from_compact(&compact_str).unwrap();
    let from_json = bigraph::codec::from_json(stdout(&json_out).trim()).unwrap();
    assert_eq!(from_compact, from_json);
    assert_eq!(
        bigraph::canon::canonical_form(&from_compact).unwrap(),
        bigraph::canon::canonical_form(&from_json).unwrap()
    );
}

#[test]
fn gen_family_names_case_insensitive_and_validated() {
    assert!(bigraph(&["gen", "--family", "lspider", "--compact"])
        .status
        .success());
    assert!(bigraph(&["gen", "--family", "GAMMA0", "--n", "5"])
        .status
        .success());
    let bad = bigraph(&["gen", "--family", "B", "--n", "4", "--k", "3"]);
    assert_eq!(bad.status.code(), Some(2));
    let unknown = bigraph(&["gen", "--family", "Z", "--n", "4"]);
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn spectrum_of_k33() {
    let out = bigraph(&["spectrum", "3:3:777"]);
    assert!(out.status.success());
    let v = json(&out);
    assert!((v["rho"].as_f64().unwrap() - 3.0).abs() < 1e-9);
    assert!((v["q"].as_f64().unwrap() - 6.0).abs() < 1e-9);
}

#[test]
fn spectrum_reads_files_and_stdin() {
    let dir = std::env::temp_dir().join("bigraph-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("k22.json");
    std::fs::write(&path, r#"{"m":2,"n":2,"edges":[[0,0],[0,1],[1,0],[1,1]]}"#).unwrap();
    let out = bigraph(&["spectrum", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!((json(&out)["rho"].as_f64().unwrap() - 2.0).abs() < 1e-9);
}

#[test]
fn bounds_csv_schema() {
    let out = bigraph(&["bounds", "3:3:777"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "bound,left,right,satisfied,slack");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 4);
    for (row, name) in rows
        .iter()
        .zip(["nosal", "q_upper", "rho_lower", "q_lower"])
    {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 5);
        assert_eq!(fields[0], name);
        assert_eq!(fields[3], "true");
        fields[1].parse::<f64>().unwrap();
        fields[2].parse::<f64>().unwrap();
        fields[4].parse::<f64>().unwrap();
    }
}

#[test]
fn closure_reports_added_pairs() {
    // Spanning 6-cycle on (3,3): every addition qualifies, closure is
    // complete.
    let c6 = "3:3:536";
    let g = bigraph::codec::from_compact(c6).unwrap();
    assert_eq!(g.edge_count(), 6);
    let out = bigraph(&["closure", c6]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["added"], 3);
    assert_eq!(v["graph"]["edges"].as_array().unwrap().len(), 9);
    let unbalanced = bigraph(&["closure", "2:3:777"]);
    assert_eq!(unbalanced.status.code(), Some(2));
}

#[test]
fn hamilton_exit_codes() {
    let yes = bigraph(&["hamilton", "3:3:777", "--cycle"]);
    assert_eq!(yes.status.code(), Some(0));
    let v = json(&yes);
    assert_eq!(v["found"], true);
    assert_eq!(v["certificate"].as_array().unwrap().len(), 6);

    let spider = bigraph(&["gen", "--family", "lspider", "--compact"]);
    let spider = stdout(&spider);
    let no = bigraph(&["hamilton", spider.trim(), "--path"]);
    assert_eq!(no.status.code(), Some(3));
    assert_eq!(json(&no)["found"], false);

    let usage = bigraph(&["hamilton", "3:3:777"]);
    assert_eq!(usage.status.code(), Some(2));
}

#[test]
fn biclique_of_complete_graph() {
    let out = bigraph(&["biclique", "3:4:fff"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["s"], 4);
    assert_eq!(v["t"], 3);
    assert_eq!(v["order"], 7);
}

#[test]
fn verify_t24_clean_run() {
    let out = bigraph(&[
        "verify",
        "--theorem",
        "T2.4",
        "--n",
        "3",
        "--mode",
        "exhaustive",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "theorem,n,k,mode,scanned,hits,confirmed,exceptions,counterexamples,seconds"
    );
    let row = lines.next().unwrap();
    assert!(row.starts_with("T2.4,3,0,exhaustive,512,"));
}

#[test]
fn verify_writes_report_file() {
    let dir = std::env::temp_dir().join("bigraph-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("t24.json");
    let out = bigraph(&[
        "verify",
        "--theorem",
        "T2.4",
        "--n",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["theorem"], "T2.4");
    assert_eq!(report["counterexample_count"], 0);
    assert_eq!(
        report["hits"].as_u64().unwrap(),
        report["confirmed"].as_u64().unwrap()
            + report["exceptions"].as_u64().unwrap()
            + report["counterexample_count"].as_u64().unwrap()
    );
}

#[test]
fn verify_rejects_unknown_theorem_and_bad_params() {
    assert_eq!(
        bigraph(&["verify", "--theorem", "T9.9", "--n", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        bigraph(&["verify", "--theorem", "MM", "--n", "4", "--k", "3"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn verify_random_mode_is_deterministic() {
    let args = [
        "verify",
        "--theorem",
        "T2.4",
        "--n",
        "4",
        "--mode",
        "random",
        "--samples",
        "100",
        "--seed",
        "5",
        "--format",
        "csv",
    ];
    let a = bigraph(&args);
    let b = bigraph(&args);
    assert_eq!(a.status.code(), Some(0));
    // CSV rows match except the timing column.
    let strip = |o: &Output| {
        stdout(o)
            .lines()
            .last()
            .unwrap()
            .rsplit_once(',')
            .unwrap()
            .0
            .to_string()
    };
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn enum_counts_and_dense() {
    let out = bigraph(&["enum", "--m", "2", "--ny", "2", "--count-only"]);
    assert_eq!(stdout(&out).trim(), "16");
    let out = bigraph(&["enum", "--m", "2", "--ny", "2", "--dedup", "--count-only"]);
    assert_eq!(stdout(&out).trim(), "6");
    let out = bigraph(&[
        "enum",
        "--m",
        "3",
        "--ny",
        "3",
        "--dense",
        "0",
        "--count-only",
    ]);
    assert_eq!(stdout(&out).trim(), "1");
    let lines = bigraph(&["enum", "--m", "1", "--ny", "1"]);
    assert_eq!(stdout(&lines).lines().count(), 2);
    let too_big = bigraph(&["enum", "--m", "6", "--ny", "6", "--count-only"]);
    assert_eq!(too_big.status.code(), Some(2));
}

#[test]
fn audit_exit_codes() {
    let ok = bigraph(&[
        "audit", "--family", "R", "--n", "6", "--k", "2", "--format", "csv",
    ]);
    assert_eq!(ok.status.code(), Some(0));
    let bad = bigraph(&["audit", "--family", "R", "--n", "6", "--k", "5"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn spectral_tol_env_override() {
    let out = Command::new(env!("CARGO_BIN_EXE_bigraph"))
        .args(["spectrum", "2:2:33"])
        .env("SPECTRAL_TOL", "1e-6")
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert!((v["rho"].as_f64().unwrap() - 2.0).abs() < 1e-5);
}
