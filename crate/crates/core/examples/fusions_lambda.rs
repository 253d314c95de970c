//! Lists every fusion of X_A for a small prime with its valencies, Lambda set
//! and the primitivity / pseudocyclicity that Lambda predicts.
//!
//! `cargo run --example fusions_lambda -- 3`

use afs::affine::{fuse, lambda_criteria, partitions_iter};
use afs::scheme::{is_primitive, is_pseudocyclic};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p: u32 = std::env::args().nth(1).map_or(Ok(3), |s| s.parse())?;
    println!("{:<10} {:>4}  {:<20} {:<10} primitive pseudocyclic", "partition", "rank", "valencies", "lambda");
    for part in partitions_iter(p as usize + 1)? {
        let rec = fuse(p, &part)?;
        let crit = lambda_criteria(&rec);
        assert_eq!(!crit.imprimitive, is_primitive(&rec.scheme)?);
        assert_eq!(crit.pseudocyclic, is_pseudocyclic(&rec.scheme));
        println!(
            "{:<10} {:>4}  {:<20} {:<10} {:<9} {}",
            part.to_text(),
            rec.scheme.rank(),
            format!("{:?}", rec.valencies),
            format!("{:?}", rec.lambda),
            !crit.imprimitive,
            crit.pseudocyclic
        );
    }
    Ok(())
}
