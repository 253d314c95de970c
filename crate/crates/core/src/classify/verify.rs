//! Re-checks witnesses by direct construction, without the detection code
//! used during classification.

use std::collections::HashMap;

use petgraph::unionfind::UnionFind;

use super::{Verdict, Witness};
use crate::affine::{fuse, partition_from_group, SlopePartition};
use crate::geometry::{slope_permutation, PglElement, SubgroupSpec};
use crate::perm::{Perm, PermGroup};
use crate::scheme::{
    is_algebraic_map, relation_stats, tensor_product, trivial_scheme, verify_scheme, wreath_product,
    Scheme,
};

/// Classes of the relation formed by the diagonal and the given colors,
/// provided that relation is an equivalence whose classes all have size `size`.
fn classes_of(x: &Scheme, colors: &[usize], size: usize) -> Result<Vec<usize>, String> {
    let n = x.n();
    let inside = |s: usize| s == 0 || colors.contains(&s);
    let mut uf = UnionFind::<usize>::new(n);
    for a in 0..n {
        for b in 0..n {
            if inside(x.matrix().get(a, b)) {
                uf.union(a, b);
            }
        }
    }
    let mut label = HashMap::new();
    let class: Vec<usize> = (0..n)
        .map(|a| {
            let next = label.len();
            *label.entry(uf.find(a)).or_insert(next)
        })
        .collect();
    for a in 0..n {
        for b in 0..n {
            if inside(x.matrix().get(a, b)) != (class[a] == class[b]) {
                return Err(format!("colors {colors:?} do not form an equivalence relation"));
            }
        }
    }
    let mut sizes = vec![0; label.len()];
    for &c in &class {
        sizes[c] += 1;
    }
    if sizes.iter().any(|&s| s != size) {
        return Err(format!("classes of {colors:?} have sizes {sizes:?}, expected {size}"));
    }
    Ok(class)
}

/// Whether `x` relabelled by `relabel` (old point -> new point) has every
/// color inside a single color of `model`; with `exact` the correspondence
/// must be a bijection of colors.
fn fits_model(x: &Scheme, relabel: &[usize], model: &Scheme, exact: bool) -> bool {
    let n = x.n();
    let mut forward: HashMap<usize, usize> = HashMap::new();
    let mut backward: HashMap<usize, usize> = HashMap::new();
    for a in 0..n {
        for b in 0..n {
            let s = x.matrix().get(a, b);
            let t = model.matrix().get(relabel[a], relabel[b]);
            if *forward.entry(s).or_insert(t) != t {
                return false;
            }
            if exact && *backward.entry(t).or_insert(s) != s {
                return false;
            }
        }
    }
    true
}

fn verify_wreath(x: &Scheme, p: usize, colors: &[usize]) -> Result<(), String> {
    let class = classes_of(x, colors, p)?;
    // point -> (position in class, class) with index class * p + position
    let mut filled = vec![0usize; p];
    let mut relabel = vec![0usize; x.n()];
    for a in 0..x.n() {
        relabel[a] = class[a] * p + filled[class[a]];
        filled[class[a]] += 1;
    }
    let model = wreath_product(&trivial_scheme(p), &trivial_scheme(p)).map_err(|e| e.to_string())?;
    if fits_model(x, &relabel, &model, true) {
        Ok(())
    } else {
        Err("scheme is not the wreath product along the witness parabolic".into())
    }
}

fn verify_subtensor(x: &Scheme, p: usize, first: &[usize], second: &[usize]) -> Result<(), String> {
    let c1 = classes_of(x, first, p)?;
    let c2 = classes_of(x, second, p)?;
    let mut relabel = vec![0usize; x.n()];
    let mut used = vec![false; x.n()];
    for a in 0..x.n() {
        let k = c1[a] * p + c2[a];
        if used[k] {
            return Err("the two parabolics do not form a grid".into());
        }
        used[k] = true;
        relabel[a] = k;
    }
    let model = tensor_product(&trivial_scheme(p), &trivial_scheme(p)).map_err(|e| e.to_string())?;
    if fits_model(x, &relabel, &model, false) {
        Ok(())
    } else {
        Err("a color meets two products of quotient colors".into())
    }
}

/// Every nonzero color is a strongly connected digraph.
fn connected_colors(x: &Scheme) -> bool {
    let n = x.n();
    (1..x.rank()).all(|s| {
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(a) = stack.pop() {
            for b in x.matrix().neighbors(a, s) {
                if !seen[b] {
                    seen[b] = true;
                    stack.push(b);
                }
            }
        }
        seen.iter().all(|&v| v)
    })
}

fn verify_primitive_pseudocyclic(
    x: &Scheme,
    partition: &SlopePartition,
    lambda: &[usize],
) -> Result<(), String> {
    if !connected_colors(x) {
        return Err("some color is disconnected, so the scheme is imprimitive".into());
    }
    let stats = relation_stats(x);
    let k = stats.valency.get(1).copied().unwrap_or(0);
    let pseudo = (1..x.rank()).all(|s| stats.valency[s] == k && stats.indistinguishing[s] + 1 == k);
    if !pseudo {
        return Err("valencies or indistinguishing numbers are not uniform".into());
    }
    let mut sizes = partition.block_sizes();
    sizes.sort_unstable();
    sizes.dedup();
    if sizes != lambda {
        return Err(format!("lambda {lambda:?} differs from block sizes {sizes:?}"));
    }
    Ok(())
}

fn verify_exceptional(
    p: u32,
    partition: &SlopePartition,
    spec: SubgroupSpec,
    generators: &[[u32; 4]],
) -> Result<(), String> {
    let perms = generators
        .iter()
        .map(|&e| PglElement::from_entries(e, p).map(|g| slope_permutation(&g)))
        .collect::<Result<Vec<Perm>, _>>()
        .map_err(|e| e.to_string())?;
    let group = PermGroup::from_generators(p as usize + 1, perms)
        .and_then(|g| g.with_closure(200))
        .map_err(|e| e.to_string())?;
    let elements = group.elements().expect("closed");
    let has_order = |k: u64| elements.iter().any(|g| g.order() == k);
    let shape_ok = match spec {
        SubgroupSpec::Alt4 => elements.len() == 12 && has_order(3) && !has_order(6),
        SubgroupSpec::Alt5 => elements.len() == 60 && has_order(5) && !has_order(6),
        _ => false,
    };
    if !shape_ok {
        return Err(format!("generators do not produce a group of type {spec}"));
    }
    if partition.num_blocks() < 2 {
        return Err("exceptional witness on the trivial scheme".into());
    }
    if partition_from_group(&group) != *partition {
        return Err("orbit partition of the witness group differs".into());
    }
    Ok(())
}

fn verify_involutive(
    p: u32,
    x: &Scheme,
    inner_partition: &SlopePartition,
    involution: &[usize],
    inner_verdict: &Verdict,
    inner_witness: &Witness,
) -> Result<(), String> {
    let inner = fuse(p, inner_partition).map_err(|e| e.to_string())?.scheme;
    if !is_algebraic_map(&inner, involution) {
        return Err("witness involution is not an algebraic automorphism".into());
    }
    if (0..involution.len()).any(|s| involution[involution[s]] != s) {
        return Err("witness map has order greater than 2".into());
    }
    // merge each color with its image and compare with the outer scheme
    let class: Vec<usize> = (0..involution.len()).map(|s| s.min(involution[s])).collect();
    let merged = inner.matrix().merge(&class).map_err(|e| e.to_string())?;
    let merged_scheme = verify_scheme(merged).map_err(|e| e.to_string())?;
    let identity: Vec<usize> = (0..inner.n()).collect();
    if !fits_model(x, &identity, &merged_scheme, true) {
        return Err("merging along the involution does not give the scheme".into());
    }
    if !inner_verdict.is_basic() {
        return Err(format!("inner verdict {inner_verdict} is not a basic case"));
    }
    verify_witness(p, inner_partition, inner_verdict, inner_witness)
}

/// Checks that `witness` certifies `verdict` for the fusion along `partition`.
pub fn verify_witness(
    p: u32,
    partition: &SlopePartition,
    verdict: &Verdict,
    witness: &Witness,
) -> Result<(), String> {
    let x = fuse(p, partition).map_err(|e| e.to_string())?.scheme;
    let pu = p as usize;
    match (verdict, witness) {
        (Verdict::WreathOfTrivial, Witness::Wreath { parabolic }) => verify_wreath(&x, pu, parabolic),
        (Verdict::SubtensorOfTrivial, Witness::Subtensor { first, second }) => {
            verify_subtensor(&x, pu, first, second)
        }
        (Verdict::PrimitivePseudocyclic, Witness::Lambda { lambda }) => {
            verify_primitive_pseudocyclic(&x, partition, lambda)
        }
        (Verdict::ExceptionalA4, Witness::Exceptional { spec, generators })
            if *spec == SubgroupSpec::Alt4 =>
        {
            verify_exceptional(p, partition, *spec, generators)
        }
        (Verdict::ExceptionalA5, Witness::Exceptional { spec, generators })
            if *spec == SubgroupSpec::Alt5 =>
        {
            verify_exceptional(p, partition, *spec, generators)
        }
        (
            Verdict::InvolutiveOf(inner),
            Witness::Involutive {
                inner_partition,
                involution,
                inner_verdict,
                inner_witness,
            },
        ) if **inner == *inner_verdict => verify_involutive(
            p,
            &x,
            inner_partition,
            involution,
            inner_verdict,
            inner_witness,
        ),
        (Verdict::NonSchurian | Verdict::Unknown, Witness::None) => Ok(()),
        _ => Err(format!("witness kind does not match verdict {verdict}")),
    }
}
