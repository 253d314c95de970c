//! Runs a full sweep, writes the JSON and CSV reports to a temporary
//! directory, and prints the summary.
//!
//! `cargo run --release --example sweep_report -- 5 4`

use std::time::Instant;

use afs::classify::Classifier;
use afs::report::{records_from_csv, records_to_csv, write_atomic, Report};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let p: u32 = args.next().map_or(Ok(5), |s| s.parse())?;
    let jobs: usize = args.next().map_or(Ok(1), |s| s.parse())?;

    let start = Instant::now();
    let items = Classifier::new().sweep(p, None, jobs)?;
    let report = Report::from_sweep(p, &items);
    println!("p = {p}: {} fusions in {:.2?}", report.summary.total, start.elapsed());
    for (verdict, count) in &report.summary.counts_by_verdict {
        println!("  {verdict:<40} {count}");
    }

    let dir = tempfile::tempdir()?;
    let json = dir.path().join("report.json");
    let csv = dir.path().join("report.csv");
    write_atomic(&json, report.to_json().as_bytes())?;
    write_atomic(&csv, records_to_csv(&report.records)?.as_bytes())?;
    let from_csv = records_from_csv(&std::fs::read_to_string(&csv)?)?;
    assert_eq!(from_csv, report.records);
    assert_eq!(Report::from_json(&std::fs::read_to_string(&json)?)?, report);
    println!("digest {}", report.digest());
    Ok(())
}
