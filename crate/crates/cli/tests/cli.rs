use std::process::{Command, Output};

fn terwilliger(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_terwilliger"))
        .args(args)
        .env("RUST_LOG", "warn")
        .env_remove("TERW_GROUP")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn s4_report_json() {
    let o = terwilliger(&["report", "--group", "sym:4", "--format", "json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["scheme"]["dim_t0"], 42);
    assert_eq!(v["closure"]["dim_t"], 43);
    assert_eq!(v["centralizer"]["total"], 43);
    let sizes: Vec<u64> =
        v["wedderburn"]["components"].as_array().unwrap().iter().map(|c| c["size"].as_u64().unwrap()).collect();
    assert_eq!(sizes, vec![5, 2, 3, 2, 1]);
}

#[test]
fn output_is_reproducible() {
    let a = terwilliger(&["report", "--group", "sym:4", "--seed", "9"]);
    let b = terwilliger(&["report", "--group", "sym:4", "--seed", "9"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn environment_mirrors_flags() {
    let o = Command::new(env!("CARGO_BIN_EXE_terwilliger"))
        .args(["scheme", "--format", "json"])
        .env("TERW_GROUP", "sym:5")
        .env("RUST_LOG", "warn")
        .output()
        .unwrap();
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["scheme"]["dim_t0"], 124);
}

#[test]
fn growth_cells_in_csv() {
    let o = terwilliger(&["terwilliger", "--group", "sym:5", "--format", "csv", "--blocks", "[5]"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("\"[5]\",\"[5]\",4+4"), "{}", stdout(&o));
}

#[test]
fn conjecture_subcommand() {
    let o = terwilliger(&["conjecture", "--group", "sym:5", "--format", "csv"]);
    assert!(o.status.success());
    assert!(stdout(&o).trim_end().ends_with(",false"), "{}", stdout(&o));
}

#[test]
fn bad_input_fails_with_diagnostics() {
    let o = terwilliger(&["report", "--group", "sym:4", "--prime", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("exactla"));
    assert!(o.stdout.is_empty());

    let o = terwilliger(&["centralizer", "--group", "sym:4", "--blocks", "[9]"]);
    assert_eq!(o.status.code(), Some(2));

    let o = terwilliger(&["conjecture", "--group", "file:/nonexistent"]);
    assert!(!o.status.success());
}
