//! Subgroups of PGL(2,p): the named families with their orbit sizes, and for
//! small primes the full lattice of subgroups up to conjugacy.
//!
//! `cargo run --example pgl_subgroups -- 7`

use afs::affine::partition_from_group;
use afs::classify::SubgroupLattice;
use afs::geometry::{find_subgroup, Pgl, SubgroupSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p: u32 = std::env::args().nth(1).map_or(Ok(5), |s| s.parse())?;
    let pgl = Pgl::new(p)?;
    println!("PGL(2,{p}) has {} elements", pgl.len());
    for spec in SubgroupSpec::all_for(p) {
        match find_subgroup(&pgl, spec)? {
            Some(sub) => {
                let data = sub.orbit_data();
                println!(
                    "  {spec:<14} order {:>4}  orbits {:?}  N = {:?}  partition {}",
                    sub.order(),
                    data.sizes,
                    data.size_set,
                    partition_from_group(&sub.group)
                );
            }
            None => println!("  {spec:<14} absent"),
        }
    }

    if p <= 7 {
        let lattice = SubgroupLattice::new(p)?;
        println!("{} subgroups in {} conjugacy classes", lattice.len(), lattice.num_classes());
    }
    Ok(())
}
