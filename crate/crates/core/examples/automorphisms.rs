//! Automorphism groups and 2-orbits of small schemes.
//!
//! `cargo run --example automorphisms`

use afs::affine::{build_affine_scheme, fuse};
use afs::aut::{automorphism_group, is_schurian_with, orbitals};
use afs::scheme::{tensor_product, trivial_scheme, wreath_product, Scheme};

fn show(name: &str, x: &Scheme) -> Result<(), Box<dyn std::error::Error>> {
    let aut = automorphism_group(x)?;
    let orb = orbitals(aut.generators(), x.n());
    println!(
        "{name:<22} degree {:>3} rank {:>2}  |Aut| = {:<10} orbitals {:>2}  schurian {}  ({} nodes)",
        x.n(),
        x.rank(),
        aut.order(),
        orb.len(),
        is_schurian_with(x, &aut),
        aut.nodes()
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let t3 = trivial_scheme(3);
    show("trivial T9", &trivial_scheme(9))?;
    show("T3 x T3", &tensor_product(&t3, &t3)?)?;
    show("T3 wr T3", &wreath_product(&t3, &t3)?)?;
    show("X_A, p = 3", &build_affine_scheme(3)?)?;
    show("X_A, p = 5", &build_affine_scheme(5)?)?;
    show("fusion 0110, p = 3", &fuse(3, &"0110".parse()?)?.scheme)?;
    show("fusion 001122, p = 5", &fuse(5, &"001122".parse()?)?.scheme)?;
    Ok(())
}
