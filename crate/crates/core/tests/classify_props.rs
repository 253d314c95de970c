use afs::affine::{fuse, partition_from_group};
use afs::classify::{verify_witness, Classifier, Verdict, Witness};
use afs::geometry::{family_instances, Pgl, SubgroupSpec};
use afs::scheme::{trivial_scheme, wreath_product};
use num_bigint::BigUint;

fn sweep(p: u32) -> Vec<afs::classify::ClassificationResult> {
    Classifier::new()
        .sweep(p, None, 1)
        .unwrap()
        .into_iter()
        .map(|item| item.result.unwrap())
        .collect()
}

#[test]
fn sweeps_are_complete_and_witnessed() {
    for p in [3u32, 5] {
        for r in sweep(p) {
            let part = &r.partition;
            verify_witness(p, part, &r.verdict, &r.witness).unwrap_or_else(|e| panic!("{part}: {e}"));
            match r.flags.schurian {
                Some(true) => assert!(r.verdict.is_classified(), "{part}: {}", r.verdict),
                Some(false) => assert_eq!(r.verdict, Verdict::NonSchurian, "{part}"),
                None => panic!("{part}: automorphism search did not finish"),
            }
            if r.verdict.is_imprimitive_shape() {
                assert!(!r.flags.primitive, "{part}");
            }
            if let Verdict::InvolutiveOf(inner) = &r.verdict {
                assert!(inner.is_basic(), "{part}");
                assert!(matches!(r.witness, Witness::Involutive { .. }), "{part}");
            }
        }
    }
}

#[test]
fn basic_verdicts_at_three() {
    let c = Classifier::new();
    let verdict = |rgs: &str| c.classify(3, &rgs.parse().unwrap()).unwrap();
    assert_eq!(verdict("0123").verdict, Verdict::SubtensorOfTrivial);
    let trivial = verdict("0000");
    assert_eq!(trivial.verdict, Verdict::PrimitivePseudocyclic);
    assert_eq!(trivial.rank, 2);

    // {0}, {1, 2, inf}: rank 3 with a parabolic of 3 classes of size 3
    let r = verdict("0111");
    assert_eq!(r.verdict, Verdict::WreathOfTrivial);
    assert_eq!(r.valencies, vec![2, 6]);
    let x = fuse(3, &"0111".parse().unwrap()).unwrap().scheme;
    let model = wreath_product(&trivial_scheme(3), &trivial_scheme(3)).unwrap();
    let sorted = |mut v: Vec<u32>| {
        v.sort_unstable();
        v
    };
    assert_eq!(sorted(x.valencies()), sorted(model.valencies()));
    // |Sym(3) wr Sym(3)| = 6^3 * 6
    assert_eq!(r.flags.aut_order, Some(BigUint::from(6u32.pow(4))));
}

#[test]
fn alternating_orbit_fusions_at_seven() {
    // 7 = 1 mod 3, so A4 has two orbits of size 4 on the line
    let pgl = Pgl::new(7).unwrap();
    let c = Classifier::new();
    let instances = family_instances(&pgl, SubgroupSpec::Alt4).unwrap();
    assert!(!instances.is_empty());
    for sub in instances {
        let part = partition_from_group(&sub.group);
        assert_eq!(part.block_sizes(), vec![4, 4]);
        let r = c.classify(7, &part).unwrap();
        assert!(r.flags.labels.contains(&Verdict::ExceptionalA4), "{part}: {:?}", r.flags.labels);
        verify_witness(7, &part, &r.verdict, &r.witness).unwrap();
    }
}

#[test]
fn cached_and_fresh_results_agree() {
    let dir = tempfile::tempdir().unwrap();
    let cached = Classifier::new().with_cache(afs::report::cache::AutCache::new(dir.path()));
    let first = cached.sweep(5, None, 1).unwrap();
    let again = Classifier::new()
        .with_cache(afs::report::cache::AutCache::new(dir.path()))
        .sweep(5, None, 1)
        .unwrap();
    let fresh = Classifier::new().sweep(5, None, 1).unwrap();
    let digest = |items: &[afs::classify::SweepItem]| afs::report::Report::from_sweep(5, items).digest();
    assert_eq!(digest(&first), digest(&fresh));
    assert_eq!(digest(&again), digest(&fresh));
}
