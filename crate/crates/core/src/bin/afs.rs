use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use afs::affine::{build_affine_scheme, partition_from_group, SlopePartition};
use afs::classify::{ClassifyError, Classifier, SweepItem};
use afs::geometry::{check_prime, find_subgroup, Pgl, SubgroupSpec, DEFAULT_PRIME_BOUND};
use afs::report::cache::AutCache;
use afs::report::checks::{run_checks, Level};
use afs::report::{records_to_csv, timings_path, write_atomic, Report, ReportRecord, Timings};

#[derive(Parser)]
#[command(name = "afs", version, about = "Fusions of the affine-plane scheme of prime order")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build X_A for a prime and write its scheme file.
    Build {
        #[arg(long)]
        p: u32,
        /// Defaults to `xa_p<p>.scheme`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify every fusion for p in {3, 5, 7}.
    Sweep {
        #[arg(long)]
        p: u32,
        /// Report path; printed to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Classify a single fusion and print its record.
    Classify {
        #[arg(long)]
        p: u32,
        /// Canonical restricted growth string of length p + 1.
        #[arg(long)]
        partition: String,
    },
    /// Orbit report for subgroups of PGL(2,p).
    Subgroups {
        #[arg(long)]
        p: u32,
        /// `Cyclic:d`, `Dihedral:d`, `FrobeniusPD:d`, `A4`, `S4`, `A5` or `all`.
        #[arg(long, default_value = "all")]
        spec: String,
    },
    /// Run the verification suite.
    VerifyPaper {
        #[arg(long, value_enum, default_value_t = LevelArg::Quick)]
        level: LevelArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

enum Failure {
    Usage(String),
    Failed(String),
}

type CmdResult = Result<(), Failure>;

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn failed(e: impl ToString) -> Failure {
    Failure::Failed(e.to_string())
}

fn classifier() -> Classifier {
    Classifier::new().with_cache(AutCache::from_env())
}

fn cmd_build(p: u32, out: Option<PathBuf>) -> CmdResult {
    check_prime(p, DEFAULT_PRIME_BOUND).map_err(usage)?;
    let x = build_affine_scheme(p).map_err(usage)?;
    let out = out.unwrap_or_else(|| PathBuf::from(format!("xa_p{p}.scheme")));
    let bytes = x.to_bytes().map_err(failed)?;
    write_atomic(&out, &bytes).map_err(failed)?;
    let vals: Vec<String> = x.valencies().iter().map(u32::to_string).collect();
    println!("degree {}, rank {}, valencies [{}]", x.n(), x.rank(), vals.join(","));
    eprintln!("wrote {}", out.display());
    Ok(())
}

fn cmd_sweep(p: u32, out: Option<PathBuf>, format: Format, jobs: usize) -> CmdResult {
    if ![3, 5, 7].contains(&p) {
        return Err(usage(ClassifyError::SweepPrime(p)));
    }
    let start = Instant::now();
    let items: Vec<SweepItem> = classifier().sweep(p, None, jobs).map_err(failed)?;
    let total_ms = start.elapsed().as_secs_f64() * 1e3;
    let report = Report::from_sweep(p, &items);
    let text = match format {
        Format::Json => report.to_json(),
        Format::Csv => records_to_csv(&report.records).map_err(failed)?,
    };
    match &out {
        Some(path) => {
            write_atomic(path, text.as_bytes()).map_err(failed)?;
            let timings = Timings::from_sweep(p, jobs, total_ms, &items);
            let json = serde_json::to_string_pretty(&timings).map_err(failed)?;
            write_atomic(&timings_path(path), json.as_bytes()).map_err(failed)?;
        }
        None => print!("{text}"),
    }
    eprintln!("p={p}: {} records", report.summary.total);
    for (verdict, count) in &report.summary.counts_by_verdict {
        eprintln!("  {verdict}: {count}");
    }
    eprintln!("digest {}", report.digest());
    if report.has_failures() {
        return Err(failed(format!(
            "{} failing records:\n  {}",
            report.summary.failures.len(),
            report.summary.failures.join("\n  ")
        )));
    }
    Ok(())
}

fn cmd_classify(p: u32, partition: &str) -> CmdResult {
    check_prime(p, DEFAULT_PRIME_BOUND).map_err(usage)?;
    let part = SlopePartition::parse_for(partition, p as usize + 1).map_err(usage)?;
    let items = classifier().sweep(p, Some(vec![part]), 1).map_err(failed)?;
    let record = ReportRecord::from_item(p, &items[0]);
    println!("{}", serde_json::to_string_pretty(&record).map_err(failed)?);
    if record.is_failure() {
        return Err(failed(record.error.unwrap_or_default()));
    }
    Ok(())
}

fn cmd_subgroups(p: u32, spec: &str) -> CmdResult {
    check_prime(p, DEFAULT_PRIME_BOUND).map_err(usage)?;
    let specs = if spec == "all" {
        SubgroupSpec::all_for(p)
    } else {
        vec![spec.parse::<SubgroupSpec>().map_err(usage)?]
    };
    let pgl = Pgl::new(p).map_err(usage)?;
    for spec in specs {
        match find_subgroup(&pgl, spec).map_err(usage)? {
            None => println!("{spec}: absent"),
            Some(sub) => {
                let data = sub.orbit_data();
                let gens: Vec<String> = sub.generators.iter().map(|g| g.to_string()).collect();
                println!("{spec}: order {}", sub.order());
                println!("  generators {}", gens.join(" "));
                println!("  orbit sizes {:?}", data.sizes);
                println!("  N(K) {:?}", data.size_set);
                println!("  partition {}", partition_from_group(&sub.group));
            }
        }
    }
    Ok(())
}

fn cmd_verify(level: LevelArg) -> CmdResult {
    let level = match level {
        LevelArg::Quick => Level::Quick,
        LevelArg::Full => Level::Full,
    };
    let outcomes = run_checks(level, &classifier());
    let width = outcomes.iter().map(|o| o.name.len()).max().unwrap_or(0);
    for o in &outcomes {
        let status = if o.passed { "PASS" } else { "FAIL" };
        println!(
            "{status}  {:width$}  {:>9.1} ms  {}",
            o.name, o.elapsed_ms, o.detail
        );
    }
    let failing: Vec<&str> = outcomes.iter().filter(|o| !o.passed).map(|o| o.name).collect();
    if failing.is_empty() {
        Ok(())
    } else {
        Err(failed(format!("failing checks: {}", failing.join(", "))))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Build { p, out } => cmd_build(p, out),
        Command::Sweep {
            p,
            out,
            format,
            jobs,
        } => cmd_sweep(p, out, format, jobs),
        Command::Classify { p, partition } => cmd_classify(p, &partition),
        Command::Subgroups { p, spec } => cmd_subgroups(p, &spec),
        Command::VerifyPaper { level } => cmd_verify(level),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Failed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}
