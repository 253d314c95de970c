//! Builds X_A for a prime, prints its parameters and round-trips the scheme file.
//!
//! `cargo run --example build_affine -- 5`

use afs::affine::{build_affine_scheme, slope_label};
use afs::scheme::Scheme;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p: u32 = std::env::args().nth(1).map_or(Ok(3), |s| s.parse())?;
    let x = build_affine_scheme(p)?;
    println!("X_A for p = {p}: degree {}, rank {}", x.n(), x.rank());
    for s in 1..x.rank() {
        println!("  color {s}: slope {}, valency {}", slope_label(s - 1, p), x.valency(s));
    }

    let bytes = x.to_bytes()?;
    let back = Scheme::from_bytes(&bytes)?;
    assert_eq!(back.digest()?, x.digest()?);
    println!("scheme file: {} bytes, digest {}", bytes.len(), x.digest()?);
    Ok(())
}
