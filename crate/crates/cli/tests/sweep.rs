use std::fs;
use std::path::Path;
use std::process::Command;

use charmean::cache::{Cache, CacheKey};
use charmean::report::CSV_HEADER;
use charmean::{emit_report, run_sweep, OutputFormat, PrimeRange, RunReport, Summary, SweepConfig, SweepError};
use charmean_core::{IdentityId, Status, Tolerance};
use serde_json::Value;

fn config(lo: u64, hi: u64, ids: &[IdentityId]) -> SweepConfig {
    SweepConfig { primes: PrimeRange::new(lo, hi), identities: ids.to_vec(), ..Default::default() }
}

fn strip_timing(report: &RunReport) -> Vec<Value> {
    report
        .records
        .iter()
        .map(|r| {
            let mut v = serde_json::to_value(r).unwrap();
            v.as_object_mut().unwrap().remove("elapsed_ms");
            v
        })
        .collect()
}

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_charmean"));
    cmd.env_remove("CHARMEAN_CACHE");
    cmd
}

#[test]
fn th1_over_two_primes() {
    let report = run_sweep(&config(5, 7, &[IdentityId::Th1])).unwrap();
    assert_eq!(report.records.len(), 2);
    assert!(report.records.iter().all(|r| r.status == Status::Pass));
    assert_eq!(report.records[0].rhs, 500.0);
    assert_eq!(report.records[1].rhs, 4638.0);
}

#[test]
fn full_suite_at_five() {
    let report = run_sweep(&config(5, 5, &IdentityId::ALL)).unwrap();
    assert_eq!(report.records.len(), 18);
    assert!(report.records.iter().all(|r| r.status == Status::Pass), "{:#?}", report.records);
    let ids: Vec<_> = report.records.iter().map(|r| r.identity).collect();
    assert_eq!(ids, IdentityId::ALL.to_vec());
    assert_eq!(report.summary.pass, 18);
}

#[test]
fn invalid_range() {
    assert!(matches!(run_sweep(&config(4, 4, &IdentityId::ALL)), Err(SweepError::InvalidRange(_))));
    assert!(matches!(run_sweep(&config(24, 28, &IdentityId::ALL)), Err(SweepError::InvalidRange(_))));
}

#[test]
fn serial_and_parallel_agree() {
    let serial = run_sweep(&config(5, 41, &IdentityId::ALL)).unwrap();
    let parallel = run_sweep(&SweepConfig { jobs: 3, ..config(5, 41, &IdentityId::ALL) }).unwrap();
    assert_eq!(strip_timing(&serial), strip_timing(&parallel));
}

#[test]
fn vary_nk_adds_pairs_deterministically() {
    let c = SweepConfig { vary_nk: true, seed: 7, ..config(11, 13, &IdentityId::ALL) };
    let a = run_sweep(&c).unwrap();
    let b = run_sweep(&SweepConfig { jobs: 2, ..c.clone() }).unwrap();
    assert_eq!(strip_timing(&a), strip_timing(&b));
    let dependent = IdentityId::ALL.iter().filter(|id| id.depends_on_nk()).count();
    assert_eq!(a.records.len(), 2 * (18 + 3 * dependent));
    assert!(!a.any_failed());
}

#[test]
fn empty_report_is_valid_json() {
    let report = RunReport {
        config: SweepConfig::default(),
        records: vec![],
        summary: Summary::tally(&[], 0.0),
        tool_version: "0".into(),
        timestamp: "now".into(),
    };
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.json");
    emit_report(&report, OutputFormat::Json, Some(&path)).unwrap();
    let v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["records"].as_array().unwrap().len(), 0);
    for field in ["total", "pass", "fail", "skipped"] {
        assert_eq!(v["summary"][field], 0);
    }
}

#[test]
fn csv_has_header_plus_rows() {
    let report = run_sweep(&config(5, 7, &[IdentityId::Th1])).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.csv");
    emit_report(&report, OutputFormat::Csv, Some(&path)).unwrap();
    let text = fs::read_to_string(&path).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], CSV_HEADER.join(","));
    assert!(lines[1].starts_with("TH1,5,"));
}

#[test]
fn json_fields_in_schema_order() {
    let report = run_sweep(&config(5, 5, &[IdentityId::Th2])).unwrap();
    let text = serde_json::to_string(&report.records[0]).unwrap();
    let mut last = 0;
    for field in CSV_HEADER {
        let at = text.find(&format!("\"{field}\"")).unwrap();
        assert!(at >= last, "{field} out of order");
        last = at;
    }
}

#[test]
fn unwritable_output_names_the_path() {
    let report = run_sweep(&config(5, 5, &[IdentityId::Th1])).unwrap();
    let path = Path::new("/nonexistent-dir/report.json");
    let err = emit_report(&report, OutputFormat::Json, Some(path)).unwrap_err();
    assert!(err.to_string().contains("/nonexistent-dir/report.json"));
}

fn cached(dir: &Path, lo: u64, hi: u64, ids: &[IdentityId]) -> RunReport {
    run_sweep(&SweepConfig { cache_dir: Some(dir.to_path_buf()), ..config(lo, hi, ids) }).unwrap()
}

#[test]
fn cache_hit_on_rerun() {
    let dir = tempfile::tempdir().unwrap();
    let first = cached(dir.path(), 97, 97, &[IdentityId::Th2]);
    assert_eq!(first.summary.cache_hits, 0);
    let second = cached(dir.path(), 97, 97, &[IdentityId::Th2]);
    assert_eq!(second.summary.cache_hits, 1);
    assert!(second.records[0].cache_hit);
    let (mut a, mut b) = (strip_timing(&first), strip_timing(&second));
    a[0].as_object_mut().unwrap().remove("cache_hit");
    b[0].as_object_mut().unwrap().remove("cache_hit");
    assert_eq!(a, b);
}

#[test]
fn corrupt_entry_is_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    cached(dir.path(), 7, 7, &[IdentityId::Th1]);
    let entries: Vec<_> = fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(entries.len(), 1);
    fs::write(&entries[0], b"{ not json").unwrap();
    let again = cached(dir.path(), 7, 7, &[IdentityId::Th1]);
    assert_eq!(again.summary.cache_hits, 0);
    assert_eq!(again.records[0].status, Status::Pass);
    // rewritten with a valid entry
    let third = cached(dir.path(), 7, 7, &[IdentityId::Th1]);
    assert_eq!(third.summary.cache_hits, 1);
}

#[test]
fn other_version_entries_are_ignored() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::open(dir.path()).unwrap();
    let report = run_sweep(&config(5, 5, &[IdentityId::Th1])).unwrap();
    let key = |version: &str| CacheKey {
        version: version.into(),
        prime: 5,
        identity: IdentityId::Th1,
        n: 1,
        k: 1,
        tolerance: Tolerance::default(),
        max_cubic_prime: 199,
    };
    cache.store(&key("0.0.0-old"), &report.records[0]).unwrap();
    assert!(cache.lookup(&key("0.0.0-old")).is_some());
    assert!(cache.lookup(&key(charmean::TOOL_VERSION)).is_none());
    let rerun = cached(dir.path(), 5, 5, &[IdentityId::Th1]);
    assert_eq!(rerun.summary.cache_hits, 0);
}

#[test]
fn entry_under_wrong_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::open(dir.path()).unwrap();
    let report = run_sweep(&config(5, 5, &[IdentityId::Th1])).unwrap();
    let key = CacheKey {
        version: charmean::TOOL_VERSION.into(),
        prime: 5,
        identity: IdentityId::Th1,
        n: 1,
        k: 1,
        tolerance: Tolerance::default(),
        max_cubic_prime: 199,
    };
    cache.store(&key, &report.records[0]).unwrap();
    let other = CacheKey { n: 2, ..key.clone() };
    fs::copy(cache.path_for(&key), cache.path_for(&other)).unwrap();
    assert!(cache.lookup(&other).is_none());
}

#[test]
fn exit_codes() {
    let ok = bin().args(["verify", "--primes", "5..7", "--identities", "TH1"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(v["summary"]["pass"], 2);

    let bad_range = bin().args(["verify", "--primes", "4..4"]).output().unwrap();
    assert_eq!(bad_range.status.code(), Some(2));
    let bad_id = bin().args(["verify", "--primes", "5..5", "--identities", "TH9"]).output().unwrap();
    assert_eq!(bad_id.status.code(), Some(2));
    let bad_flag = bin().args(["verify", "--bogus"]).output().unwrap();
    assert_eq!(bad_flag.status.code(), Some(2));

    // a zero tolerance turns rounding noise into failures
    let strict = bin()
        .args(["verify", "--primes", "5..13", "--identities", "TH1,L4_1", "--tolerance", "0"])
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&strict.stdout).unwrap();
    let failed = v["summary"]["fail"].as_u64().unwrap();
    assert_eq!(strict.status.code(), Some(if failed > 0 { 1 } else { 0 }));
}

#[test]
fn env_cache_and_csv_out() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let cache = dir.path().join("cache");
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_charmean"))
            .env("CHARMEAN_CACHE", &cache)
            .args(["verify", "--primes", "11..13", "--identities", "T_DELTA", "--format", "csv", "--out"])
            .arg(&out)
            .output()
            .unwrap()
    };
    assert!(run().status.success());
    assert!(run().status.success());
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true")));
}

#[test]
fn show_prints_intermediates() {
    let out = bin().args(["show", "--prime", "7", "--identity", "TH2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("T(p)  direct      = 29"));
    assert!(text.contains("T(p)  Delta form  = 29"));
    assert!(text.contains("T(p)  |U| - |U0|  = 29"));
    assert!(text.contains("T_L(p)            = 2"));
    let bad = bin().args(["show", "--prime", "9", "--identity", "TH2"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn bench_reports_timings() {
    let out = bin().args(["bench", "--primes", "5..11", "--identities", "TH1,TH2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("TH1") && text.contains("TH2") && text.contains("wall"));
}

#[test]
fn corrupt_entry_warns_on_stderr() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        bin()
            .args(["verify", "--primes", "5..5", "--identities", "TH1", "--cache"])
            .arg(dir.path())
            .output()
            .unwrap()
    };
    assert!(run().status.success());
    for entry in fs::read_dir(dir.path()).unwrap() {
        fs::write(entry.unwrap().path(), b"garbage").unwrap();
    }
    let again = run();
    assert!(again.status.success());
    let stderr = String::from_utf8(again.stderr).unwrap();
    assert!(stderr.contains("corrupt cache entry"), "{stderr}");
    let v: Value = serde_json::from_slice(&again.stdout).unwrap();
    assert_eq!(v["records"][0]["cache_hit"], false);
}
