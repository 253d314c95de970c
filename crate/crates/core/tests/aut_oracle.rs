use afs::affine::{build_affine_scheme, fuse};
use afs::aut::{automorphism_group, is_schurian_with, orbitals, preserves_colors};
use afs::scheme::{tensor_product, trivial_scheme, verify_scheme, wreath_product, ColorMatrix, Scheme};
use num_bigint::BigUint;
use proptest::prelude::*;

fn cyclic(n: usize, symmetric: bool) -> Scheme {
    let m = ColorMatrix::from_labels(n, |a, b| {
        let d = (b + n - a) % n;
        if symmetric {
            d.min(n - d)
        } else {
            d
        }
    })
    .unwrap();
    verify_scheme(m).unwrap()
}

/// Distance scheme of the cube graph.
fn cube() -> Scheme {
    let m = ColorMatrix::from_labels(8, |a: usize, b: usize| (a ^ b).count_ones()).unwrap();
    verify_scheme(m).unwrap()
}

fn small_schemes() -> Vec<(&'static str, Scheme)> {
    let t = trivial_scheme;
    vec![
        ("T5", t(5)),
        ("T8", t(8)),
        ("T2 x T2", tensor_product(&t(2), &t(2)).unwrap()),
        ("T2 x T3", tensor_product(&t(2), &t(3)).unwrap()),
        ("T2 x T4", tensor_product(&t(2), &t(4)).unwrap()),
        ("T2 wr T3", wreath_product(&t(2), &t(3)).unwrap()),
        ("T3 wr T2", wreath_product(&t(3), &t(2)).unwrap()),
        ("T2 wr T4", wreath_product(&t(2), &t(4)).unwrap()),
        ("T4 wr T2", wreath_product(&t(4), &t(2)).unwrap()),
        ("Z7", cyclic(7, false)),
        ("Z8 sym", cyclic(8, true)),
        ("C6 distance", cyclic(6, true)),
        ("cube", cube()),
    ]
}

/// Number of color-preserving permutations, by enumerating all of them.
fn brute_force_order(x: &Scheme) -> u64 {
    let n = x.n();
    let preserves = |g: &[usize]| {
        (0..n).all(|a| (0..n).all(|b| x.matrix().get(a, b) == x.matrix().get(g[a], g[b])))
    };
    let mut g: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    let mut count = u64::from(preserves(&g));
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                g.swap(0, i);
            } else {
                g.swap(c[i], i);
            }
            count += u64::from(preserves(&g));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    count
}

#[test]
fn order_matches_enumeration() {
    for (name, x) in small_schemes() {
        let aut = automorphism_group(&x).unwrap();
        assert_eq!(*aut.order(), BigUint::from(brute_force_order(&x)), "{name}");
        for g in aut.generators() {
            assert!(preserves_colors(&x, g), "{name}");
        }
    }
}

#[test]
fn generators_are_deterministic() {
    for (name, x) in small_schemes() {
        let a = automorphism_group(&x).unwrap();
        let b = automorphism_group(&x).unwrap();
        assert_eq!(a.generators(), b.generators(), "{name}");
        assert_eq!(a.base(), b.base(), "{name}");
    }
}

#[test]
fn small_schemes_are_schurian() {
    // every scheme here is the 2-orbit scheme of a group acting on it
    for (name, x) in small_schemes() {
        let aut = automorphism_group(&x).unwrap();
        let orb = orbitals(aut.generators(), x.n());
        assert_eq!(orb.len(), x.rank(), "{name}");
        assert!(is_schurian_with(&x, &aut), "{name}");
    }
}

fn relabel(x: &Scheme, perm: &[usize]) -> Scheme {
    verify_scheme(x.matrix().relabel_points(perm)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn relabeling_preserves_order_and_schurity(
        which in 0..6usize,
        perm in Just((0..25).collect::<Vec<usize>>()).prop_shuffle(),
    ) {
        // `None`: only invariance under relabeling is checked
        let (x, schurian) = match which {
            0 => (build_affine_scheme(3).unwrap(), Some(true)),
            1 => (build_affine_scheme(5).unwrap(), Some(true)),
            2 => (fuse(3, &"0110".parse().unwrap()).unwrap().scheme, Some(true)),
            3 => (fuse(5, &"001122".parse().unwrap()).unwrap().scheme, None),
            4 => (fuse(5, &"011222".parse().unwrap()).unwrap().scheme, None),
            _ => (wreath_product(&trivial_scheme(5), &trivial_scheme(5)).unwrap(), Some(true)),
        };
        let n = x.n();
        let perm: Vec<usize> = if n == 25 {
            perm
        } else {
            perm.into_iter().filter(|&v| v < n).collect()
        };
        let y = relabel(&x, &perm);
        let ax = automorphism_group(&x).unwrap();
        let ay = automorphism_group(&y).unwrap();
        prop_assert_eq!(ax.order(), ay.order());
        prop_assert_eq!(is_schurian_with(&y, &ay), is_schurian_with(&x, &ax));
        if let Some(s) = schurian {
            prop_assert_eq!(is_schurian_with(&x, &ax), s);
        }
    }
}
