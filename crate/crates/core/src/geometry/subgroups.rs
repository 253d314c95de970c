use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::field::mult_order;
use super::pgl::{pgl_canonical, Pgl, PglElement};
use super::GeometryError;
use crate::perm::{Perm, PermGroup};

/// The subgroup families of PGL(2,p) with intransitive actions on the
/// projective line, plus the three polyhedral groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SubgroupSpec {
    Cyclic(u32),
    Dihedral(u32),
    /// `C_p x| C_d`, the affine maps `z -> a z + b` with `a` of order dividing `d`.
    FrobeniusPD(u32),
    Alt4,
    Sym4,
    Alt5,
}

impl SubgroupSpec {
    /// Order of the abstract group.
    pub fn expected_order(&self, p: u32) -> usize {
        match *self {
            SubgroupSpec::Cyclic(d) => d as usize,
            SubgroupSpec::Dihedral(d) => 2 * d as usize,
            SubgroupSpec::FrobeniusPD(d) => (p * d) as usize,
            SubgroupSpec::Alt4 => 12,
            SubgroupSpec::Sym4 => 24,
            SubgroupSpec::Alt5 => 60,
        }
    }

    fn validate(&self) -> Result<(), GeometryError> {
        match *self {
            SubgroupSpec::Cyclic(0) | SubgroupSpec::FrobeniusPD(0) => {
                Err(GeometryError::InvalidSpec(self.to_string()))
            }
            SubgroupSpec::Dihedral(d) if d < 2 => Err(GeometryError::InvalidSpec(self.to_string())),
            _ => Ok(()),
        }
    }

    /// Every spec that can possibly occur in PGL(2,p): cyclic and dihedral
    /// groups of each order up to `p + 1`, the Borel subgroups `C_p x| C_d`
    /// for `d | p - 1`, and the polyhedral groups.
    pub fn all_for(p: u32) -> Vec<SubgroupSpec> {
        let mut specs: Vec<SubgroupSpec> = (1..=p + 1).map(SubgroupSpec::Cyclic).collect();
        specs.extend((2..=p + 1).map(SubgroupSpec::Dihedral));
        specs.extend((1..p).filter(|d| (p - 1) % d == 0).map(SubgroupSpec::FrobeniusPD));
        specs.extend([SubgroupSpec::Alt4, SubgroupSpec::Sym4, SubgroupSpec::Alt5]);
        specs
    }
}

impl fmt::Display for SubgroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubgroupSpec::Cyclic(d) => write!(f, "Cyclic:{d}"),
            SubgroupSpec::Dihedral(d) => write!(f, "Dihedral:{d}"),
            SubgroupSpec::FrobeniusPD(d) => write!(f, "FrobeniusPD:{d}"),
            SubgroupSpec::Alt4 => write!(f, "A4"),
            SubgroupSpec::Sym4 => write!(f, "S4"),
            SubgroupSpec::Alt5 => write!(f, "A5"),
        }
    }
}

impl FromStr for SubgroupSpec {
    type Err = GeometryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GeometryError::InvalidSpec(s.to_string());
        let spec = match s {
            "A4" | "Alt4" => SubgroupSpec::Alt4,
            "S4" | "Sym4" => SubgroupSpec::Sym4,
            "A5" | "Alt5" => SubgroupSpec::Alt5,
            _ => {
                let (family, d) = s.split_once(':').ok_or_else(bad)?;
                let d: u32 = d.parse().map_err(|_| bad())?;
                match family {
                    "Cyclic" | "C" => SubgroupSpec::Cyclic(d),
                    "Dihedral" | "D" => SubgroupSpec::Dihedral(d),
                    "FrobeniusPD" | "F" => SubgroupSpec::FrobeniusPD(d),
                    _ => return Err(bad()),
                }
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// A subgroup of PGL(2,p) together with its action on the projective line.
#[derive(Debug, Clone)]
pub struct PglSubgroup {
    pub spec: Option<SubgroupSpec>,
    pub generators: Vec<PglElement>,
    /// Sorted element indices into the ambient [`Pgl`] table.
    pub elements: Vec<usize>,
    pub group: PermGroup,
}

impl PglSubgroup {
    pub fn from_generators(pgl: &Pgl, spec: Option<SubgroupSpec>, gens: &[usize]) -> Self {
        let elements = pgl.closure(gens);
        let perms: Vec<Perm> = elements.iter().map(|&i| pgl.perm(i).clone()).collect();
        let gen_perms = gens.iter().map(|&i| pgl.perm(i).clone()).collect();
        PglSubgroup {
            spec,
            generators: gens.iter().map(|&i| *pgl.element(i)).collect(),
            elements,
            group: PermGroup::from_parts(pgl.p() as usize + 1, gen_perms, perms),
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn orbit_data(&self) -> OrbitData {
        orbit_partition(&self.group)
    }
}

/// Orbits of a group on the projective line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitData {
    /// Orbits as sorted point indices, listed by smallest member.
    pub orbits: Vec<Vec<usize>>,
    /// Orbit sizes, sorted ascending.
    pub sizes: Vec<usize>,
    /// `N(K)`: the distinct orbit sizes.
    pub size_set: BTreeSet<usize>,
}

pub fn orbit_partition(group: &PermGroup) -> OrbitData {
    let orbits = group.orbits();
    let mut sizes: Vec<usize> = orbits.iter().map(Vec::len).collect();
    sizes.sort_unstable();
    let size_set = sizes.iter().copied().collect();
    OrbitData {
        orbits,
        sizes,
        size_set,
    }
}

fn elements_of_order(pgl: &Pgl, k: u32) -> Vec<usize> {
    (0..pgl.len()).filter(|&i| pgl.order_of(i) == k).collect()
}

/// Generator tuples for `spec` in lexicographic order of table indices.
/// Each tuple satisfies the defining relations of the family; the caller
/// checks the order of the generated group.
fn candidate_tuples<'a>(
    pgl: &'a Pgl,
    spec: SubgroupSpec,
) -> Box<dyn Iterator<Item = Vec<usize>> + 'a> {
    let p = pgl.p();
    match spec {
        SubgroupSpec::Cyclic(1) => Box::new(std::iter::once(Vec::new())),
        SubgroupSpec::Cyclic(d) => Box::new(elements_of_order(pgl, d).into_iter().map(|x| vec![x])),
        SubgroupSpec::Dihedral(d) => {
            let xs = elements_of_order(pgl, d);
            let ys = elements_of_order(pgl, 2);
            Box::new(xs.into_iter().flat_map(move |x| {
                let cyclic = pgl.closure(&[x]);
                let x_inv = pgl.inv(x);
                let ys = ys.clone();
                ys.into_iter().filter_map(move |y| {
                    if cyclic.binary_search(&y).is_ok() {
                        return None;
                    }
                    (pgl.mul(pgl.mul(y, x), y) == x_inv).then(|| vec![x, y])
                })
            }))
        }
        SubgroupSpec::FrobeniusPD(d) => {
            if (p - 1) % d != 0 {
                return Box::new(std::iter::empty());
            }
            let xs = elements_of_order(pgl, p);
            if d == 1 {
                return Box::new(xs.into_iter().map(|x| vec![x]));
            }
            let ys = elements_of_order(pgl, d);
            Box::new(xs.into_iter().flat_map(move |x| {
                let cyclic = pgl.closure(&[x]);
                let ys = ys.clone();
                ys.into_iter().filter_map(move |y| {
                    let conj = pgl.mul(pgl.mul(y, x), pgl.inv(y));
                    cyclic.binary_search(&conj).is_ok().then(|| vec![x, y])
                })
            }))
        }
        SubgroupSpec::Alt4 | SubgroupSpec::Sym4 | SubgroupSpec::Alt5 => {
            let k = match spec {
                SubgroupSpec::Alt4 => 3,
                SubgroupSpec::Sym4 => 4,
                _ => 5,
            };
            let invols = elements_of_order(pgl, 2);
            let triples = elements_of_order(pgl, 3);
            Box::new(invols.into_iter().flat_map(move |a| {
                let triples = triples.clone();
                triples
                    .into_iter()
                    .filter_map(move |b| (pgl.order_of(pgl.mul(a, b)) == k).then(|| vec![a, b]))
            }))
        }
    }
}

/// The first subgroup of type `spec` in the fixed order of generator tuples,
/// or `None` when PGL(2,p) has no such subgroup.
///
/// `FrobeniusPD(d)` is built directly as `<z -> z + 1, z -> g z>` with `g`
/// the smallest element of multiplicative order `d`.
pub fn find_subgroup(pgl: &Pgl, spec: SubgroupSpec) -> Result<Option<PglSubgroup>, GeometryError> {
    spec.validate()?;
    let p = pgl.p();
    let target = spec.expected_order(p);
    if let SubgroupSpec::FrobeniusPD(d) = spec {
        if (p - 1) % d != 0 {
            return Ok(None);
        }
        let translation = pgl.index_of(&pgl_canonical(1, 1, 0, 1, p)?);
        let mut gens = vec![translation];
        if d > 1 {
            let g = (2..p).find(|&g| mult_order(g, p) == d).expect("F_p^* is cyclic");
            gens.push(pgl.index_of(&pgl_canonical(g as i64, 0, 0, 1, p)?));
        }
        let sub = PglSubgroup::from_generators(pgl, Some(spec), &gens);
        debug_assert_eq!(sub.order(), target);
        return Ok(Some(sub));
    }
    for gens in candidate_tuples(pgl, spec) {
        if pgl.closure(&gens).len() == target {
            return Ok(Some(PglSubgroup::from_generators(pgl, Some(spec), &gens)));
        }
    }
    Ok(None)
}

/// Every subgroup of type `spec`, each listed once, in order of first
/// appearance among the generator tuples.
pub fn family_instances(pgl: &Pgl, spec: SubgroupSpec) -> Result<Vec<PglSubgroup>, GeometryError> {
    spec.validate()?;
    let target = spec.expected_order(pgl.p());
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut found: Vec<PglSubgroup> = Vec::new();
    let mut members: Vec<Vec<bool>> = Vec::new();
    for gens in candidate_tuples(pgl, spec) {
        if members.iter().any(|m| gens.iter().all(|&g| m[g])) {
            continue;
        }
        let elems = pgl.closure(&gens);
        if elems.len() != target || !seen.insert(elems.clone()) {
            continue;
        }
        let mut m = vec![false; pgl.len()];
        for &e in &elems {
            m[e] = true;
        }
        members.push(m);
        found.push(PglSubgroup::from_generators(pgl, Some(spec), &gens));
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_text_round_trip() {
        for s in ["Cyclic:4", "Dihedral:3", "FrobeniusPD:2", "A4", "S4", "A5"] {
            assert_eq!(s.parse::<SubgroupSpec>().unwrap().to_string(), s);
        }
        assert!("Dihedral:1".parse::<SubgroupSpec>().is_err());
        assert!("Cyclic:0".parse::<SubgroupSpec>().is_err());
        assert!("Q8".parse::<SubgroupSpec>().is_err());
    }

    #[test]
    fn trivial_cyclic_group() {
        let pgl = Pgl::new(5).unwrap();
        let k = find_subgroup(&pgl, SubgroupSpec::Cyclic(1)).unwrap().unwrap();
        assert_eq!(k.order(), 1);
        assert_eq!(k.orbit_data().sizes, vec![1; 6]);
    }

    #[test]
    fn cyclic_of_order_p_minus_one() {
        let pgl = Pgl::new(5).unwrap();
        // oracle: scan element orders directly
        let has_order_4 = (0..pgl.len()).any(|i| pgl.perm(i).order() == 4);
        assert!(has_order_4);
        let k = find_subgroup(&pgl, SubgroupSpec::Cyclic(4)).unwrap().unwrap();
        assert_eq!(k.order(), 4);
    }

    #[test]
    fn alt4_at_seven() {
        let pgl = Pgl::new(7).unwrap();
        let k = find_subgroup(&pgl, SubgroupSpec::Alt4).unwrap().unwrap();
        assert_eq!(k.order(), 12);
        let profile: BTreeSet<u32> = k.elements.iter().map(|&e| pgl.order_of(e)).collect();
        assert_eq!(profile, BTreeSet::from([1, 2, 3]));
    }

    #[test]
    fn absent_subgroups() {
        let pgl = Pgl::new(7).unwrap();
        // 7 is not +-1 mod 10 and 7 != 5: no A5
        assert!(find_subgroup(&pgl, SubgroupSpec::Alt5).unwrap().is_none());
        // 3 does not divide 6? it does; 4 does not divide 6
        assert!(find_subgroup(&pgl, SubgroupSpec::FrobeniusPD(4)).unwrap().is_none());
        // no element of order 5 in PGL(2,7)
        assert!(find_subgroup(&pgl, SubgroupSpec::Cyclic(5)).unwrap().is_none());
    }

    #[test]
    fn negation_orbits_on_p5() {
        let pgl = Pgl::new(5).unwrap();
        let neg = pgl.index_of(&pgl_canonical(-1, 0, 0, 1, 5).unwrap());
        let k = PglSubgroup::from_generators(&pgl, Some(SubgroupSpec::Cyclic(2)), &[neg]);
        let data = k.orbit_data();
        assert_eq!(data.orbits, vec![vec![0], vec![1, 4], vec![2, 3], vec![5]]);
        assert_eq!(data.sizes, vec![1, 1, 2, 2]);
        assert_eq!(data.size_set, BTreeSet::from([1, 2]));
    }

    #[test]
    fn frobenius_orbits() {
        let pgl = Pgl::new(7).unwrap();
        for d in [1, 2, 3, 6] {
            let k = find_subgroup(&pgl, SubgroupSpec::FrobeniusPD(d)).unwrap().unwrap();
            assert_eq!(k.order(), 7 * d as usize);
            assert_eq!(k.orbit_data().sizes, vec![1, 7]);
        }
    }

    #[test]
    fn alt4_subgroups_form_one_family() {
        // |PGL(2,7)| / |S4| = 14 copies of A4 (normalizer of A4 is S4)
        let pgl = Pgl::new(7).unwrap();
        let all = family_instances(&pgl, SubgroupSpec::Alt4).unwrap();
        assert_eq!(all.len(), 14);
        assert!(all.iter().all(|k| k.order() == 12));
    }
}
