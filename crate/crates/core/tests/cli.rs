use std::path::Path;
use std::process::{Command, Output};

fn afs(args: &[&str], cache: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_afs"))
        .args(args)
        .env("AFS_CACHE", cache)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn build_prints_summary_and_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("xa3.scheme");
    let o = afs(&["build", "--p", "3", "--out", out.to_str().unwrap()], dir.path());
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "degree 9, rank 5, valencies [2,2,2,2]");
    let x = afs::scheme::Scheme::from_bytes(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!(x.rank(), 5);

    let o = afs(&["build", "--p", "13", "--out", out.to_str().unwrap()], dir.path());
    assert!(stdout(&o).starts_with("degree 169, rank 15"));
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["build", "--p", "4"][..],
        &["sweep", "--p", "11"],
        &["classify", "--p", "3", "--partition", "1000"],
        &["classify", "--p", "3", "--partition", "012"],
        &["subgroups", "--p", "5", "--spec", "Cyclic:0"],
        &["frobnicate"],
    ] {
        assert_eq!(afs(args, dir.path()).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn classify_prints_a_record() {
    let dir = tempfile::tempdir().unwrap();
    let o = afs(&["classify", "--p", "3", "--partition", "0123"], dir.path());
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "SubtensorOfTrivial");
    assert_eq!(v["partition_rgs"], "0123");
    assert_eq!(v["witness"]["kind"], "Subtensor");
}

#[test]
fn subgroups_report_orbits_and_absence() {
    let dir = tempfile::tempdir().unwrap();
    let o = afs(&["subgroups", "--p", "7", "--spec", "A4"], dir.path());
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("order 12"));
    assert!(text.contains("orbit sizes [4, 4]"));

    let o = afs(&["subgroups", "--p", "7", "--spec", "A5"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("absent"));
}

#[test]
fn sweep_outputs_are_deterministic_and_consistent() {
    let dir = tempfile::tempdir().unwrap();
    let path = |name: &str| dir.path().join(name).to_str().unwrap().to_string();
    for (name, jobs, format) in [("a.json", "1", "json"), ("b.json", "3", "json"), ("c.csv", "2", "csv")] {
        let o = afs(
            &["sweep", "--p", "3", "--out", &path(name), "--jobs", jobs, "--format", format],
            dir.path(),
        );
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let a = std::fs::read_to_string(path("a.json")).unwrap();
    assert_eq!(a, std::fs::read_to_string(path("b.json")).unwrap());
    assert!(dir.path().join("a.json.timing.json").exists());

    let report = afs::report::Report::from_json(&a).unwrap();
    assert_eq!(report.summary.total, 15);
    let csv = afs::report::records_from_csv(&std::fs::read_to_string(path("c.csv")).unwrap()).unwrap();
    assert_eq!(csv, report.records);
}

#[test]
fn verify_survives_a_corrupted_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let report = dir.path().join("r.json");
    let o = afs(&["sweep", "--p", "3", "--out", report.to_str().unwrap()], &cache);
    assert!(o.status.success());
    let mut corrupted = 0;
    for entry in std::fs::read_dir(&cache).unwrap() {
        std::fs::write(entry.unwrap().path(), "{ not json").unwrap();
        corrupted += 1;
    }
    assert!(corrupted > 0, "sweep left no cache entries");
    let o = afs(&["verify-paper", "--level", "quick"], &cache);
    let text = stdout(&o);
    assert!(o.status.success(), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 10);

    let again = afs(&["sweep", "--p", "3"], &cache);
    assert_eq!(stdout(&again), std::fs::read_to_string(&report).unwrap());
}
