use std::collections::BTreeSet;

use afs::geometry::{
    family_instances, moebius_apply, pgl_canonical, pgl_generators, slope_permutation, Pgl,
    PglElement, ProjectivePoint, SubgroupSpec,
};
use proptest::prelude::*;

const PRIMES: [u32; 5] = [3, 5, 7, 11, 13];

/// Entries of an invertible 2x2 matrix over F_p.
fn invertible(p: u32) -> impl Strategy<Value = [u32; 4]> {
    prop::array::uniform4(0..p).prop_filter("singular", move |e| {
        (e[0] as u64 * e[3] as u64 + (p as u64) * (p as u64) - e[1] as u64 * e[2] as u64) % p as u64
            != 0
    })
}

fn element(e: [u32; 4], p: u32) -> PglElement {
    pgl_canonical(e[0] as i64, e[1] as i64, e[2] as i64, e[3] as i64, p).unwrap()
}

fn point(i: u32, p: u32) -> ProjectivePoint {
    if i == p {
        ProjectivePoint::Infinity
    } else {
        ProjectivePoint::Finite(i)
    }
}

fn product(x: [u32; 4], y: [u32; 4], p: u32) -> [u32; 4] {
    let m = |a: u32, b: u32, c: u32, d: u32| ((a as u64 * b as u64 + c as u64 * d as u64) % p as u64) as u32;
    [
        m(x[0], y[0], x[1], y[2]),
        m(x[0], y[1], x[1], y[3]),
        m(x[2], y[0], x[3], y[2]),
        m(x[2], y[1], x[3], y[3]),
    ]
}

fn scale(x: [u32; 4], k: u32, p: u32) -> [u32; 4] {
    x.map(|v| ((v as u64 * k as u64) % p as u64) as u32)
}

fn prime_and_pair() -> impl Strategy<Value = (u32, [u32; 4], [u32; 4])> {
    prop::sample::select(PRIMES.to_vec()).prop_flat_map(|p| (Just(p), invertible(p), invertible(p)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn product_of_canonical_forms_is_well_defined(
        (p, x, y) in prime_and_pair(),
        k1 in 1u32..1000,
        k2 in 1u32..1000,
    ) {
        let (k1, k2) = (1 + k1 % (p - 1), 1 + k2 % (p - 1));
        let direct = element(product(x, y, p), p);
        let scaled = element(product(scale(x, k1, p), scale(y, k2, p), p), p);
        prop_assert_eq!(direct, scaled);
        prop_assert_eq!(element(x, p).compose(&element(y, p)), direct);
    }

    #[test]
    fn moebius_action_is_bijective_and_multiplicative((p, x, y) in prime_and_pair()) {
        let (g, h) = (element(x, p), element(y, p));
        let images: BTreeSet<_> = (0..=p).map(|i| moebius_apply(&g, point(i, p))).collect();
        prop_assert_eq!(images.len(), p as usize + 1);
        for i in 0..=p {
            let x = point(i, p);
            prop_assert_eq!(moebius_apply(&g.compose(&h), x), moebius_apply(&g, moebius_apply(&h, x)));
        }
    }
}

macro_rules! slope_agrees_with_moebius {
    ($name:ident, $p:expr) => {
        proptest! {
            #![proptest_config(ProptestConfig::with_cases(1000))]
            #[test]
            fn $name(e in invertible($p), i in 0..=$p) {
                let g = element(e, $p);
                let image = slope_permutation(&g).apply(i as usize);
                prop_assert_eq!(point(image as u32, $p), moebius_apply(&g, point(i, $p)));
            }
        }
    };
}

slope_agrees_with_moebius!(slope_agrees_with_moebius_3, 3u32);
slope_agrees_with_moebius!(slope_agrees_with_moebius_5, 5u32);
slope_agrees_with_moebius!(slope_agrees_with_moebius_7, 7u32);
slope_agrees_with_moebius!(slope_agrees_with_moebius_11, 11u32);
slope_agrees_with_moebius!(slope_agrees_with_moebius_13, 13u32);

#[test]
fn generators_close_to_the_whole_group() {
    for p in [3u32, 5, 7] {
        let pgl = Pgl::new(p).unwrap();
        let gens: Vec<usize> = pgl_generators(p)
            .unwrap()
            .iter()
            .map(|g| pgl.index_of(g))
            .collect();
        assert_eq!(pgl.closure(&gens).len() as u32, p * p * p - p);
    }
}

#[test]
fn orbit_sizes_divide_order_and_cover_the_line() {
    for p in [5u32, 7, 11, 13] {
        let pgl = Pgl::new(p).unwrap();
        for spec in SubgroupSpec::all_for(p) {
            for sub in family_instances(&pgl, spec).unwrap() {
                let data = sub.orbit_data();
                assert_eq!(data.sizes.iter().sum::<usize>(), p as usize + 1, "{spec} at {p}");
                for s in &data.sizes {
                    assert_eq!(sub.order() % s, 0, "{spec} at {p}: orbit {s}");
                }
            }
        }
    }
}
