use std::collections::{HashMap, HashSet};
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::affine::{partition_from_group, SlopePartition};
use crate::geometry::{family_instances, GeometryError, Pgl, PglSubgroup, SubgroupSpec};

/// Largest prime for which the full subgroup lattice is enumerated.
pub const LATTICE_PRIME_BOUND: u32 = 7;

/// One subgroup of PGL(2,p) whose slope orbits form a given partition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupMatch {
    /// Family of the subgroup when it belongs to one of the named families.
    pub spec: Option<SubgroupSpec>,
    pub order: usize,
    /// Canonical matrix entries `[a, b, c, d]` of the generators.
    pub generators: Vec<[u32; 4]>,
    /// Conjugacy class index within the lattice; absent in family mode.
    pub class: Option<usize>,
}

/// All subgroups of PGL(2,p), each listed once, with conjugacy classes.
#[derive(Debug)]
pub struct SubgroupLattice {
    pgl: Pgl,
    /// `(generators, sorted elements)` in order of discovery.
    subgroups: Vec<(Vec<usize>, Vec<usize>)>,
    class_of: Vec<usize>,
    partitions: Vec<SlopePartition>,
}

impl SubgroupLattice {
    /// Every subgroup of PGL(2,p) is generated by two elements, so the
    /// closures of all pairs give the whole lattice.
    pub fn new(p: u32) -> Result<SubgroupLattice, GeometryError> {
        if p > LATTICE_PRIME_BOUND {
            return Err(GeometryError::UnsupportedPrime {
                p,
                bound: LATTICE_PRIME_BOUND,
            });
        }
        let pgl = Pgl::new(p)?;
        let m = pgl.len();
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut subgroups = Vec::new();
        let id = pgl.identity_index();
        seen.insert(vec![id]);
        subgroups.push((Vec::new(), vec![id]));
        for i in 0..m {
            if i == id {
                continue;
            }
            let cyclic = pgl.closure(&[i]);
            if seen.insert(cyclic.clone()) {
                subgroups.push((vec![i], cyclic.clone()));
            }
            for j in i + 1..m {
                if j == id || cyclic.binary_search(&j).is_ok() {
                    continue;
                }
                let elems = pgl.closure(&[i, j]);
                if seen.insert(elems.clone()) {
                    subgroups.push((vec![i, j], elems));
                }
            }
        }
        subgroups.sort_by(|a, b| a.1.len().cmp(&b.1.len()).then_with(|| a.1.cmp(&b.1)));

        let index: HashMap<&[usize], usize> = subgroups
            .iter()
            .enumerate()
            .map(|(k, (_, e))| (e.as_slice(), k))
            .collect();
        let mut class_of = vec![usize::MAX; subgroups.len()];
        let mut next_class = 0;
        for k in 0..subgroups.len() {
            if class_of[k] != usize::MAX {
                continue;
            }
            for g in 0..m {
                let g_inv = pgl.inv(g);
                let mut conj: Vec<usize> = subgroups[k]
                    .1
                    .iter()
                    .map(|&h| pgl.mul(pgl.mul(g, h), g_inv))
                    .collect();
                conj.sort_unstable();
                class_of[index[conj.as_slice()]] = next_class;
            }
            next_class += 1;
        }
        let partitions = subgroups
            .iter()
            .map(|(gens, _)| partition_from_group(&PglSubgroup::from_generators(&pgl, None, gens).group))
            .collect();
        Ok(SubgroupLattice {
            pgl,
            subgroups,
            class_of,
            partitions,
        })
    }

    /// Shared lattice for `p`, built once per process.
    pub fn cached(p: u32) -> Result<Arc<SubgroupLattice>, GeometryError> {
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<SubgroupLattice>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(l) = cache.lock().expect("lattice cache").get(&p) {
            return Ok(l.clone());
        }
        let lattice = Arc::new(SubgroupLattice::new(p)?);
        cache
            .lock()
            .expect("lattice cache")
            .insert(p, lattice.clone());
        Ok(lattice)
    }

    pub fn pgl(&self) -> &Pgl {
        &self.pgl
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn num_classes(&self) -> usize {
        self.class_of.iter().max().map_or(0, |c| c + 1)
    }

    pub fn elements(&self, k: usize) -> &[usize] {
        &self.subgroups[k].1
    }

    pub fn class_of(&self, k: usize) -> usize {
        self.class_of[k]
    }

    /// Orbit partition of subgroup `k` on the slopes.
    pub fn partition(&self, k: usize) -> &SlopePartition {
        &self.partitions[k]
    }

    pub fn subgroup(&self, k: usize) -> PglSubgroup {
        let (gens, _) = &self.subgroups[k];
        let spec = identify_subgroup(&self.pgl, &self.subgroups[k].1);
        PglSubgroup::from_generators(&self.pgl, spec, gens)
    }
}

/// Names a subgroup given by its elements when it belongs to one of the
/// named families. PSL(2,p) and PGL(2,p) themselves get `None` unless they
/// are isomorphic to a polyhedral group.
pub fn identify_subgroup(pgl: &Pgl, elements: &[usize]) -> Option<SubgroupSpec> {
    let p = pgl.p() as usize;
    let n = elements.len();
    let orders: Vec<u32> = elements.iter().map(|&e| pgl.order_of(e)).collect();
    if orders.iter().any(|&o| o as usize == n) {
        return Some(SubgroupSpec::Cyclic(n as u32));
    }
    if n % p == 0 && (p - 1) % (n / p) == 0 {
        // a Borel subgroup fixes a point of the line
        let fixes_point = (0..=p).any(|x| elements.iter().all(|&e| pgl.perm(e).apply(x) == x));
        if fixes_point {
            return Some(SubgroupSpec::FrobeniusPD((n / p) as u32));
        }
    }
    if n % 2 == 0 && n >= 4 {
        let d = n / 2;
        let involutions = orders.iter().filter(|&&o| o == 2).count();
        if orders.iter().any(|&o| o as usize == d) && involutions >= d {
            return Some(SubgroupSpec::Dihedral(d as u32));
        }
    }
    match n {
        12 => Some(SubgroupSpec::Alt4),
        24 => Some(SubgroupSpec::Sym4),
        60 => Some(SubgroupSpec::Alt5),
        _ => None,
    }
}

/// Subgroups of PGL(2,p) whose orbits on slopes form `partition`.
///
/// For `p <= 7` the whole lattice is scanned and one subgroup per conjugacy
/// class is reported; for larger `p` only the named families are searched,
/// one instance per family.
pub fn match_pgl_subgroup(
    p: u32,
    partition: &SlopePartition,
) -> Result<Vec<SubgroupMatch>, GeometryError> {
    if p <= LATTICE_PRIME_BOUND {
        let lattice = SubgroupLattice::cached(p)?;
        let mut seen_classes = HashSet::new();
        let mut out = Vec::new();
        for k in 0..lattice.len() {
            let class = lattice.class_of(k);
            if seen_classes.contains(&class) || lattice.partition(k) != partition {
                continue;
            }
            let sub = lattice.subgroup(k);
            seen_classes.insert(class);
            out.push(SubgroupMatch {
                spec: sub.spec,
                order: sub.order(),
                generators: sub.generators.iter().map(|g| g.entries()).collect(),
                class: Some(class),
            });
        }
        return Ok(out);
    }
    let pgl = Pgl::new(p)?;
    let mut out = Vec::new();
    for spec in SubgroupSpec::all_for(p) {
        let found = family_instances(&pgl, spec)?
            .into_iter()
            .find(|sub| partition_from_group(&sub.group) == *partition);
        if let Some(sub) = found {
            out.push(SubgroupMatch {
                spec: Some(spec),
                order: sub.order(),
                generators: sub.generators.iter().map(|g| g.entries()).collect(),
                class: None,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_of_pgl_2_3() {
        // PGL(2,3) is Sym(4): 30 subgroups in 11 conjugacy classes
        let l = SubgroupLattice::new(3).unwrap();
        assert_eq!(l.len(), 30);
        assert_eq!(l.num_classes(), 11);
    }

    #[test]
    fn lattice_of_pgl_2_5() {
        // PGL(2,5) is Sym(5): 156 subgroups in 19 conjugacy classes
        let l = SubgroupLattice::new(5).unwrap();
        assert_eq!(l.len(), 156);
        assert_eq!(l.num_classes(), 19);
    }

    #[test]
    fn identification_agrees_with_families() {
        let pgl = Pgl::new(7).unwrap();
        for spec in SubgroupSpec::all_for(7) {
            for sub in family_instances(&pgl, spec).unwrap() {
                let got = identify_subgroup(&pgl, &sub.elements).unwrap();
                // C_7 and D_14 coincide with the Borel groups C_7 x| C_1 and C_7 x| C_2
                let same = got == spec
                    || (spec == SubgroupSpec::FrobeniusPD(1) && got == SubgroupSpec::Cyclic(7))
                    || (spec == SubgroupSpec::Dihedral(7) && got == SubgroupSpec::FrobeniusPD(2));
                assert!(same, "{spec} identified as {got}");
            }
        }
    }

    #[test]
    fn identity_partition_matches_only_trivial_group() {
        for p in [3, 5, 7] {
            let m = match_pgl_subgroup(p, &SlopePartition::discrete(p as usize + 1)).unwrap();
            assert_eq!(m.len(), 1);
            assert_eq!(m[0].order, 1);
        }
    }

    #[test]
    fn negation_is_matched() {
        // blocks {0}, {1,2}, {inf}
        let m = match_pgl_subgroup(3, &"0112".parse().unwrap()).unwrap();
        assert!(m
            .iter()
            .any(|s| s.order == 2 && s.generators.contains(&[1, 0, 0, 2])));
    }

    #[test]
    fn transitive_subgroups_at_five() {
        let m = match_pgl_subgroup(5, &SlopePartition::one_block(6)).unwrap();
        assert!(m.iter().any(|s| s.order == 120));
        assert!(m.iter().any(|s| s.spec == Some(SubgroupSpec::Alt5)));
    }
}
