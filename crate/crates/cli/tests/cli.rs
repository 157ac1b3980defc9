use std::process::{Command, Output};

use covercount::analysis::{ConjectureReport, KpReportEntry};
use covercount::genseries::{GenEntry, GenFunction, GenFunctionJson};
use covercount::oracle::{CountEntry, CountTable};
use covercount::{Rat, RatPolyM};

fn covercount(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_covercount"))
        .args(args)
        .env_remove("COVERCOUNT_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = covercount(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    covercount(args).status.code().unwrap()
}

#[test]
fn count_examples() {
    assert_eq!(stdout(&["count", "--genus", "0", "--nu", "1,1", "--m", "2"]), "1/2\n");
    assert_eq!(stdout(&["count", "--genus", "1", "--nu", "2"]), "[0, 1/6, -1/4, 1/12]\n");
    assert_eq!(stdout(&["count", "--genus", "0", "--nu", "3", "--m", "1"]), "1/3\n");
}

#[test]
fn bms_examples() {
    assert_eq!(stdout(&["bms", "--nu", "3"]), "m(3m-1)/2\n");
    assert_eq!(stdout(&["bms", "--nu", "2"]), "m\n");
    assert_eq!(stdout(&["bms", "--nu", "3", "--m", "2"]), "5\n");
}

#[test]
fn golden_outputs() {
    assert_eq!(
        stdout(&["series", "--genus", "1", "--max-weight", "4"]),
        include_str!("golden/series_g1_w4.txt")
    );
    assert_eq!(stdout(&["oracle", "--n", "2", "--m", "2"]), include_str!("golden/oracle_n2_m2.txt"));
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["count", "--genus", "0", "--nu", ""]), 2);
    assert_eq!(code(&["count", "--genus", "0", "--nu", "1,2"]), 2);
    assert_eq!(code(&["count", "--genus", "0", "--nu", "a"]), 2);
    assert_eq!(code(&["count", "--nu", "2"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&["count", "--genus", "0", "--nu", "7"]), 3);
    assert_eq!(code(&["count", "--genus", "3", "--nu", "2"]), 3);
    assert_eq!(code(&["oracle", "--n", "5", "--m", "3", "--budget", "1000"]), 3);
    assert_eq!(code(&["--budget", "0", "oracle", "--n", "2", "--m", "2"]), 2);
    assert_eq!(code(&["--weight-bound", "7", "count", "--genus", "0", "--nu", "7", "--m", "2"]), 0);
}

#[test]
fn json_roundtrips() {
    let text = stdout(&["--output", "json", "series", "--genus", "1", "--max-weight", "4"]);
    let json: GenFunctionJson = serde_json::from_str(&text).unwrap();
    let gf = GenFunction::from_json(&json).unwrap();
    assert_eq!(gf.entries().len(), 10);
    assert_eq!(serde_json::to_string_pretty(&gf.to_json()).unwrap() + "\n", text);

    let text = stdout(&["--output", "json", "count", "--genus", "1", "--nu", "2"]);
    let entry: GenEntry = serde_json::from_str(&text).unwrap();
    assert_eq!(entry.m_poly, RatPolyM::from_coeffs(vec![Rat::zero(), Rat::new(1, 6), Rat::new(-1, 4), Rat::new(1, 12)]));

    let text = stdout(&["--output", "json", "oracle", "--n", "3", "--m", "2"]);
    let entries: Vec<CountEntry> = serde_json::from_str(&text).unwrap();
    let table = CountTable::from_entries(3, 2, &entries).unwrap();
    assert_eq!(table.to_entries(), entries);

    let text = stdout(&["--output", "json", "kp", "--max-weight", "6", "--genus-cap", "1"]);
    let report: Vec<KpReportEntry> = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&report).unwrap() + "\n", text);

    let text = stdout(&["--output", "json", "conjecture", "--max-n", "3"]);
    let reports: Vec<ConjectureReport> = serde_json::from_str(&text).unwrap();
    assert_eq!(reports.len(), 6);
    assert_eq!(serde_json::to_string_pretty(&reports).unwrap() + "\n", text);
}

#[test]
fn repeated_runs_are_identical() {
    let args = ["--output", "json", "oracle", "--n", "4", "--m", "2"];
    assert_eq!(stdout(&args), stdout(&args));
}
