//! Parabolics, quotients and restrictions of fusions, and the wreath and
//! tensor shapes they reveal.
//!
//! `cargo run --example products_and_parabolics`

use afs::affine::fuse;
use afs::scheme::{is_subtensor, parabolics, quotient, restriction, tensor_product, trivial_scheme};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = 5u32;
    for text in ["000001", "001111", "012222", "011222"] {
        let x = fuse(p, &text.parse()?)?.scheme;
        println!("fusion {text}: rank {}", x.rank());
        let es = parabolics(&x)?;
        for e in &es {
            if e.is_trivial(&x) {
                continue;
            }
            let q = quotient(&x, e)?;
            let r = restriction(&x, e, 0)?;
            println!(
                "  parabolic mask {:#b}: {} classes, quotient rank {}, restriction rank {}",
                e.mask(),
                e.num_classes(),
                q.rank(),
                r.rank()
            );
        }
        for (i, e1) in es.iter().enumerate() {
            for e2 in &es[i + 1..] {
                if !e1.is_trivial(&x) && !e2.is_trivial(&x) && is_subtensor(&x, e1, e2) {
                    println!("  subtensor along {:#b} and {:#b}", e1.mask(), e2.mask());
                }
            }
        }
    }

    let t = tensor_product(&trivial_scheme(p as usize), &trivial_scheme(p as usize))?;
    println!("T{p} x T{p}: rank {}, valencies {:?}", t.rank(), t.valencies());
    Ok(())
}
