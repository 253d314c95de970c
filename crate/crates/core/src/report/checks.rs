//! The verification suite behind the `verify-paper` command.
//!
//! `Quick` covers p in {3, 5}; `Full` adds the p = 7 sweep and the larger
//! primes.

use std::collections::BTreeSet;
use std::time::Instant;

use num_bigint::BigUint;

use crate::affine::{build_affine_scheme, fuse, lambda_criteria, partition_from_group, partitions_iter};
use crate::classify::{match_pgl_subgroup, verify_witness, Classifier, Verdict};
use crate::geometry::{family_instances, find_subgroup, Pgl, SubgroupSpec};
use crate::perm::factorial;
use crate::report::Report;
use crate::scheme::{is_algebraic_map, is_primitive, is_pseudocyclic, Scheme};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: f64,
}

type CheckResult = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Each nonzero color is a disjoint union of `p` cliques of size `p`.
fn colors_are_parallel_classes(x: &Scheme, p: usize) -> bool {
    let n = x.n();
    (1..x.rank()).all(|s| {
        (0..n).all(|a| {
            let nbrs: Vec<usize> = x.matrix().neighbors(a, s).collect();
            nbrs.len() == p - 1
                && nbrs
                    .iter()
                    .all(|&b| nbrs.iter().all(|&c| b == c || x.matrix().get(b, c) == s))
        })
    })
}

fn affine_laws(primes: &[u32]) -> CheckResult {
    for &p in primes {
        let x = build_affine_scheme(p).map_err(|e| e.to_string())?;
        let pu = p as usize;
        ensure(x.n() == pu * pu && x.rank() == pu + 2, || format!("p={p}: degree or rank"))?;
        ensure(x.valencies().iter().all(|&v| v == p - 1), || format!("p={p}: valencies"))?;
        ensure(colors_are_parallel_classes(&x, pu), || format!("p={p}: clique structure"))?;
    }
    Ok(format!("p in {primes:?}"))
}

fn fusions_are_schemes(primes: &[u32]) -> CheckResult {
    let mut total = 0;
    for &p in primes {
        for part in partitions_iter(p as usize + 1).map_err(|e| e.to_string())? {
            fuse(p, &part).map_err(|e| e.to_string())?;
            total += 1;
        }
    }
    Ok(format!("{total} fusions verified"))
}

fn all_color_permutations_algebraic(primes: &[u32]) -> CheckResult {
    let mut total = 0;
    for &p in primes {
        let x = build_affine_scheme(p).map_err(|e| e.to_string())?;
        let mut colors: Vec<usize> = (1..x.rank()).collect();
        // Heap's algorithm over the nonzero colors
        let k = colors.len();
        let mut c = vec![0usize; k];
        let check = |colors: &[usize]| {
            let mut image = vec![0];
            image.extend_from_slice(colors);
            is_algebraic_map(&x, &image)
        };
        ensure(check(&colors), || format!("p={p}: identity"))?;
        total += 1;
        let mut i = 0;
        while i < k {
            if c[i] < i {
                if i % 2 == 0 {
                    colors.swap(0, i);
                } else {
                    colors.swap(c[i], i);
                }
                ensure(check(&colors), || format!("p={p}: {colors:?} not algebraic"))?;
                total += 1;
                c[i] += 1;
                i = 0;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
    }
    Ok(format!("{total} color permutations are algebraic"))
}

fn lambda_agrees(primes: &[u32]) -> CheckResult {
    let mut total = 0;
    for &p in primes {
        for part in partitions_iter(p as usize + 1).map_err(|e| e.to_string())? {
            let rec = fuse(p, &part).map_err(|e| e.to_string())?;
            let crit = lambda_criteria(&rec);
            let primitive = is_primitive(&rec.scheme).map_err(|e| e.to_string())?;
            ensure(crit.imprimitive != primitive, || format!("p={p} {part}: primitivity"))?;
            ensure(crit.pseudocyclic == is_pseudocyclic(&rec.scheme), || {
                format!("p={p} {part}: pseudocyclicity")
            })?;
            total += 1;
        }
    }
    Ok(format!("{total} fusions agree"))
}

fn orbit_size_sets(primes: &[u32]) -> CheckResult {
    let mut total = 0;
    for &p in primes {
        let pgl = Pgl::new(p).map_err(|e| e.to_string())?;
        for spec in SubgroupSpec::all_for(p) {
            let allowed: BTreeSet<usize> = match spec {
                SubgroupSpec::Cyclic(d) => [1, d as usize].into(),
                // D_p is the Frobenius group C_p x| C_2
                SubgroupSpec::Dihedral(d) if d == p => [1, p as usize].into(),
                SubgroupSpec::Dihedral(d) => [2, d as usize, 2 * d as usize].into(),
                SubgroupSpec::FrobeniusPD(_) => [1, p as usize].into(),
                _ => continue,
            };
            for sub in family_instances(&pgl, spec).map_err(|e| e.to_string())? {
                let n = sub.orbit_data().size_set;
                ensure(n.is_subset(&allowed), || format!("p={p} {spec}: N = {n:?}"))?;
                total += 1;
            }
        }
    }
    Ok(format!("{total} subgroups checked"))
}

fn sweeps(classifier: &Classifier, primes: &[u32]) -> Result<(String, Vec<Report>), String> {
    let mut reports = Vec::new();
    let mut details = Vec::new();
    for &p in primes {
        let items = classifier.sweep(p, None, 1).map_err(|e| e.to_string())?;
        for item in &items {
            let r = item.result.as_ref().map_err(|e| e.to_string())?;
            ensure(r.verdict != Verdict::Unknown, || format!("p={p} {}: unknown", r.partition))?;
            verify_witness(p, &r.partition, &r.verdict, &r.witness)?;
        }
        let report = Report::from_sweep(p, &items);
        details.push(format!("p={p}: {} records", report.summary.total));
        reports.push(report);
    }
    Ok((details.join(", "), reports))
}

fn realization(classifier: &Classifier, primes: &[u32]) -> CheckResult {
    let mut matched = 0;
    let mut exempt = 0;
    for &p in primes {
        let f = factorial(p as usize);
        let exempt_orders = [
            &f * &f,
            f.pow(p) * &f,
            BigUint::from(2u32) * &f * &f,
            factorial((p * p) as usize),
        ];
        for part in partitions_iter(p as usize + 1).map_err(|e| e.to_string())? {
            let r = classifier.classify(p, &part).map_err(|e| e.to_string())?;
            if r.flags.schurian != Some(true) {
                continue;
            }
            if !match_pgl_subgroup(p, &part).map_err(|e| e.to_string())?.is_empty() {
                matched += 1;
            } else if r.flags.aut_order.as_ref().is_some_and(|o| exempt_orders.contains(o)) {
                exempt += 1;
            } else {
                return Err(format!("p={p} {part}: no subgroup and Aut order not exempt"));
            }
        }
    }
    Ok(format!("{matched} matched by a subgroup, {exempt} by Aut order"))
}

fn aut_orders(classifier: &Classifier) -> CheckResult {
    let order = |rgs: &str| -> Result<BigUint, String> {
        let r = classifier
            .classify(3, &rgs.parse().map_err(|e| format!("{e}"))?)
            .map_err(|e| e.to_string())?;
        r.flags.aut_order.ok_or_else(|| "no Aut order".to_string())
    };
    // one block; {0,inf},{1,2} (Hamming); {0,1,2},{inf} (wreath)
    let expected = [
        ("0000", factorial(9)),
        ("0110", BigUint::from(72u32)),
        ("0001", BigUint::from(1296u32)),
        ("0112", BigUint::from(36u32)),
    ];
    for (rgs, want) in expected {
        let got = order(rgs)?;
        ensure(got == want, || format!("{rgs}: {got} != {want}"))?;
    }
    Ok("9!, 72, 1296 (and 36 for the rank-4 tensor product)".into())
}

fn exceptional_flags(primes_specs: &[(u32, SubgroupSpec)]) -> CheckResult {
    let mut details = Vec::new();
    for &(p, spec) in primes_specs {
        let pgl = Pgl::new(p).map_err(|e| e.to_string())?;
        let sub = find_subgroup(&pgl, spec)
            .map_err(|e| e.to_string())?
            .ok_or_else(|| format!("no {spec} in PGL(2,{p})"))?;
        let part = partition_from_group(&sub.group);
        let rec = fuse(p, &part).map_err(|e| e.to_string())?;
        let primitive = is_primitive(&rec.scheme).map_err(|e| e.to_string())?;
        ensure(primitive && is_pseudocyclic(&rec.scheme), || {
            format!("p={p} {spec}: not primitive pseudocyclic")
        })?;
        details.push(format!("{spec} at p={p}: degree {}, rank {}", rec.scheme.n(), rec.scheme.rank()));
    }
    Ok(details.join("; "))
}

fn determinism(first: &[Report], primes: &[u32]) -> CheckResult {
    for (report, &p) in first.iter().zip(primes) {
        let again = Classifier::new().sweep(p, None, 4).map_err(|e| e.to_string())?;
        let digest = Report::from_sweep(p, &again).digest();
        ensure(digest == report.digest(), || format!("p={p}: digests differ"))?;
    }
    Ok(format!("identical digests for p in {primes:?}"))
}

fn timed(name: &'static str, f: impl FnOnce() -> CheckResult) -> CheckOutcome {
    let start = Instant::now();
    let result = f();
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    let (passed, detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CheckOutcome {
        name,
        passed,
        detail,
        elapsed_ms,
    }
}

/// Runs every check in order and reports each outcome.
pub fn run_checks(level: Level, classifier: &Classifier) -> Vec<CheckOutcome> {
    let full = level == Level::Full;
    let law_primes: &[u32] = if full { &[3, 5, 7, 11, 13] } else { &[3, 5] };
    let sweep_primes: &[u32] = if full { &[3, 5, 7] } else { &[3, 5] };
    let orbit_primes: &[u32] = if full { &[5, 7, 11, 13] } else { &[5] };
    let exceptional: &[(u32, SubgroupSpec)] = if full {
        &[(5, SubgroupSpec::Alt4), (19, SubgroupSpec::Alt5), (11, SubgroupSpec::Alt4)]
    } else {
        &[(5, SubgroupSpec::Alt4)]
    };

    let mut out = vec![
        timed("affine-scheme-laws", || affine_laws(law_primes)),
        timed("fusions-are-schemes", || fusions_are_schemes(sweep_primes)),
        timed("affine-algebraic-automorphisms", || all_color_permutations_algebraic(&[3, 5])),
        timed("lambda-criteria", || lambda_agrees(&[3, 5])),
        timed("orbit-size-sets", || orbit_size_sets(orbit_primes)),
    ];
    let mut reports = Vec::new();
    out.push(timed("classification-sweeps", || {
        let (detail, r) = sweeps(classifier, sweep_primes)?;
        reports = r;
        Ok(detail)
    }));
    out.push(timed("subgroup-realization", || realization(classifier, &[3, 5])));
    out.push(timed("automorphism-orders", || aut_orders(classifier)));
    out.push(timed("exceptional-primitive-pseudocyclic", || {
        exceptional_flags(exceptional)
    }));
    out.push(timed("sweep-determinism", || {
        if reports.len() != sweep_primes.len() {
            return Err("sweeps did not complete".into());
        }
        determinism(&reports, sweep_primes)
    }));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suite_passes() {
        let outcomes = run_checks(Level::Quick, &Classifier::new());
        assert_eq!(outcomes.len(), 10);
        for o in &outcomes {
            assert!(o.passed, "{}: {}", o.name, o.detail);
        }
    }
}
