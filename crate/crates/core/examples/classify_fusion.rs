//! Classifies a single fusion and re-checks its witness.
//!
//! `cargo run --example classify_fusion -- 5 001122`

use afs::affine::SlopePartition;
use afs::classify::{verify_witness, Classifier};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let p: u32 = args.next().map_or(Ok(5), |s| s.parse())?;
    let text = args.next().unwrap_or_else(|| "001122".into());
    let part = SlopePartition::parse_for(&text, p as usize + 1)?;

    let classifier = Classifier::new();
    let r = classifier.classify(p, &part)?;
    println!("p = {p}, partition {part}");
    println!("  rank {}, valencies {:?}, lambda {:?}", r.rank, r.valencies, r.lambda);
    println!("  |Aut| = {:?}, schurian {:?}", r.flags.aut_order, r.flags.schurian);
    println!("  verdict {}", r.verdict);
    println!("  witness {}", serde_json::to_string(&r.witness)?);
    verify_witness(p, &r.partition, &r.verdict, &r.witness)?;
    println!("  witness re-verified");

    if r.flags.schurian == Some(true) {
        if let Ok(Some(inv)) = classifier.find_proper_involutive_presentation(p, &part) {
            println!(
                "  involutive presentation: {} via {:?} ({})",
                inv.inner, inv.involution, inv.inner_verdict
            );
        }
    }
    Ok(())
}
