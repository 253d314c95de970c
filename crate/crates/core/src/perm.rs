//! Permutations, finitely generated permutation groups, orbits and
//! stabilizer chains.
//!
//! A [`Perm`] is stored as its image list: `perm[i]` is the image of `i`.
//! Products are written left to right: `a.then(&b)` applies `a` first.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use num_bigint::BigUint;
use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default cap on the number of elements materialized by [`group_closure`].
pub const DEFAULT_CLOSURE_CAP: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("image list of length {len} is not a bijection")]
    NotBijection { len: usize },
    #[error("generator acts on {found} points, expected {expected}")]
    DomainMismatch { expected: usize, found: usize },
    #[error("group closure exceeded the cap of {cap} elements")]
    ClosureBudgetExceeded { cap: usize },
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    /// Builds a permutation from its image list, checking bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(PermError::NotBijection { len: n });
            }
            seen[x] = true;
        }
        Ok(Perm(images))
    }

    /// Builds a permutation on `n` points from disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self, PermError> {
        let mut images: Vec<usize> = (0..n).collect();
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                if x >= n {
                    return Err(PermError::NotBijection { len: n });
                }
                images[x] = cycle[(k + 1) % cycle.len()];
            }
        }
        Perm::from_images(images)
    }

    pub(crate) fn from_images_unchecked(images: Vec<usize>) -> Self {
        debug_assert!(Perm::from_images(images.clone()).is_ok());
        Perm(images)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&x| other.0[x]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Perm(inv)
    }

    pub fn first_moved_point(&self) -> Option<usize> {
        self.0.iter().enumerate().find(|(i, &x)| *i != x).map(|(i, _)| i)
    }

    /// Lengths of all cycles, fixed points included.
    pub fn cycle_lengths(&self) -> Vec<usize> {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut lengths = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.0[x];
                len += 1;
            }
            lengths.push(len);
        }
        lengths
    }

    /// Order of the permutation (lcm of cycle lengths).
    pub fn order(&self) -> u64 {
        self.cycle_lengths()
            .into_iter()
            .fold(1u64, |acc, l| lcm(acc, l as u64))
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut wrote = false;
        for start in 0..n {
            if seen[start] || self.0[start] == start {
                continue;
            }
            write!(f, "(")?;
            let mut x = start;
            let mut first = true;
            while !seen[x] {
                seen[x] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
                first = false;
                x = self.0[x];
            }
            write!(f, ")")?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// A permutation group given by generators, optionally carrying its full
/// element list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermGroup {
    domain_size: usize,
    generators: Vec<Perm>,
    elements: Option<Vec<Perm>>,
}

impl PermGroup {
    /// A group carried by generators only. Identity generators are dropped.
    pub fn from_generators(domain_size: usize, generators: Vec<Perm>) -> Result<Self, PermError> {
        for g in &generators {
            if g.degree() != domain_size {
                return Err(PermError::DomainMismatch {
                    expected: domain_size,
                    found: g.degree(),
                });
            }
        }
        let generators = generators.into_iter().filter(|g| !g.is_identity()).collect();
        Ok(PermGroup {
            domain_size,
            generators,
            elements: None,
        })
    }

    pub fn trivial(domain_size: usize) -> Self {
        PermGroup {
            domain_size,
            generators: Vec::new(),
            elements: Some(vec![Perm::identity(domain_size)]),
        }
    }

    /// A group from a complete, already closed element list. A small
    /// generating set is extracted greedily in list order.
    pub fn from_closed_elements(domain_size: usize, mut elements: Vec<Perm>) -> Self {
        elements.sort();
        let mut generators = Vec::new();
        let mut span: HashSet<Perm> = HashSet::from([Perm::identity(domain_size)]);
        for e in &elements {
            if span.contains(e) {
                continue;
            }
            generators.push(e.clone());
            span = closure_set(domain_size, &generators, usize::MAX)
                .expect("uncapped closure cannot fail");
        }
        debug_assert_eq!(span.len(), elements.len());
        PermGroup {
            domain_size,
            generators,
            elements: Some(elements),
        }
    }

    /// Generators plus an element list known to be their closure.
    pub(crate) fn from_parts(domain_size: usize, generators: Vec<Perm>, mut elements: Vec<Perm>) -> Self {
        elements.sort();
        PermGroup {
            domain_size,
            generators: generators.into_iter().filter(|g| !g.is_identity()).collect(),
            elements: Some(elements),
        }
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn elements(&self) -> Option<&[Perm]> {
        self.elements.as_deref()
    }

    /// Materializes the element list (sorted) if it is not present yet.
    pub fn with_closure(mut self, cap: usize) -> Result<Self, PermError> {
        if self.elements.is_none() {
            let mut elems: Vec<Perm> = closure_set(self.domain_size, &self.generators, cap)?
                .into_iter()
                .collect();
            elems.sort();
            self.elements = Some(elems);
        }
        Ok(self)
    }

    /// Group order: the element count when materialized, otherwise via a
    /// Schreier-Sims stabilizer chain.
    pub fn order(&self) -> BigUint {
        match &self.elements {
            Some(e) => BigUint::from(e.len()),
            None => StabChain::schreier_sims(self.domain_size, &self.generators).order(),
        }
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        orbits(self.domain_size, &self.generators)
    }

    pub fn contains(&self, g: &Perm) -> bool {
        match &self.elements {
            Some(e) => e.binary_search(g).is_ok(),
            None => StabChain::schreier_sims(self.domain_size, &self.generators).contains(g),
        }
    }
}

fn closure_set(n: usize, generators: &[Perm], cap: usize) -> Result<HashSet<Perm>, PermError> {
    let id = Perm::identity(n);
    let mut set = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in generators {
            let y = x.then(g);
            if !set.contains(&y) {
                if set.len() >= cap {
                    return Err(PermError::ClosureBudgetExceeded { cap });
                }
                set.insert(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(set)
}

/// Full element closure of the group generated by `generators` on
/// `domain_size` points. Closure under products suffices for inverses
/// because every element has finite order.
pub fn group_closure(
    generators: &[Perm],
    domain_size: usize,
    cap: usize,
) -> Result<PermGroup, PermError> {
    PermGroup::from_generators(domain_size, generators.to_vec())?.with_closure(cap)
}

/// Orbits of `<generators>` on `0..n`, via union-find over generator images.
/// Orbits are sorted internally and listed by smallest member.
pub fn orbits(n: usize, generators: &[Perm]) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::<usize>::new(n);
    for g in generators {
        for x in 0..n {
            uf.union(x, g.apply(x));
        }
    }
    group_by_root(n, |x| uf.find(x))
}

/// Groups `0..n` by a class function, classes ordered by smallest member.
pub(crate) fn group_by_root(n: usize, mut root: impl FnMut(usize) -> usize) -> Vec<Vec<usize>> {
    let mut index_of_root = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for x in 0..n {
        let r = root(x);
        if index_of_root[r] == usize::MAX {
            index_of_root[r] = classes.len();
            classes.push(Vec::new());
        }
        classes[index_of_root[r]].push(x);
    }
    classes
}

/// Orbit of a single point, in breadth-first discovery order.
pub fn orbit_of(point: usize, n: usize, generators: &[Perm]) -> Vec<usize> {
    let mut seen = vec![false; n];
    seen[point] = true;
    let mut orbit = vec![point];
    let mut i = 0;
    while i < orbit.len() {
        let x = orbit[i];
        for g in generators {
            let y = g.apply(x);
            if !seen[y] {
                seen[y] = true;
                orbit.push(y);
            }
        }
        i += 1;
    }
    orbit
}

#[derive(Debug, Clone)]
struct ChainLevel {
    base_point: usize,
    /// `transversal[x]` maps the base point to `x`, for `x` in the basic orbit.
    transversal: Vec<Option<Perm>>,
    orbit: Vec<usize>,
}

/// A stabilizer chain `G = G_0 > G_1 > ... > G_k = 1` relative to a base,
/// with one global strong generating set. Level `i` is acted on by the
/// strong generators fixing the first `i` base points.
#[derive(Debug, Clone)]
pub struct StabChain {
    n: usize,
    strong: Vec<Perm>,
    levels: Vec<ChainLevel>,
}

impl StabChain {
    /// Deterministic Schreier-Sims: builds a base and strong generating set
    /// for `<generators>`.
    pub fn schreier_sims(n: usize, generators: &[Perm]) -> Self {
        let mut chain = StabChain {
            n,
            strong: Vec::new(),
            levels: Vec::new(),
        };
        for g in generators {
            if g.is_identity() {
                continue;
            }
            if chain.levels.iter().all(|l| g.apply(l.base_point) == l.base_point) {
                let b = g.first_moved_point().expect("non-identity");
                chain.levels.push(ChainLevel {
                    base_point: b,
                    transversal: Vec::new(),
                    orbit: Vec::new(),
                });
            }
            chain.strong.push(g.clone());
        }
        for i in 0..chain.levels.len() {
            chain.rebuild_level(i);
        }
        let mut i = chain.levels.len() as isize - 1;
        while i >= 0 {
            let level = i as usize;
            chain.rebuild_level(level);
            match chain.first_residue(level) {
                Some((drop, h)) => {
                    if drop == chain.levels.len() {
                        let b = h.first_moved_point().expect("non-identity residue");
                        chain.levels.push(ChainLevel {
                            base_point: b,
                            transversal: Vec::new(),
                            orbit: Vec::new(),
                        });
                    }
                    chain.strong.push(h);
                    for j in level + 1..=drop.min(chain.levels.len() - 1) {
                        chain.rebuild_level(j);
                    }
                    i = drop.min(chain.levels.len() - 1) as isize;
                }
                None => i -= 1,
            }
        }
        chain
    }

    /// Chain from a known base and strong generating set. No sifting is
    /// performed, so the caller vouches for the strong generation property.
    pub fn from_base_and_strong_generators(n: usize, base: &[usize], generators: &[Perm]) -> Self {
        let mut chain = StabChain {
            n,
            strong: generators.to_vec(),
            levels: base
                .iter()
                .map(|&b| ChainLevel {
                    base_point: b,
                    transversal: Vec::new(),
                    orbit: Vec::new(),
                })
                .collect(),
        };
        for i in 0..chain.levels.len() {
            chain.rebuild_level(i);
        }
        chain
    }

    fn level_generators(&self, level: usize) -> impl Iterator<Item = &Perm> + '_ {
        let fixed: Vec<usize> = self.levels[..level].iter().map(|l| l.base_point).collect();
        self.strong
            .iter()
            .filter(move |g| fixed.iter().all(|&x| g.apply(x) == x))
    }

    fn rebuild_level(&mut self, level: usize) {
        let gens: Vec<Perm> = self.level_generators(level).cloned().collect();
        let b = self.levels[level].base_point;
        let mut transversal = vec![None; self.n];
        transversal[b] = Some(Perm::identity(self.n));
        let mut orbit = vec![b];
        let mut k = 0;
        while k < orbit.len() {
            let x = orbit[k];
            for g in &gens {
                let y = g.apply(x);
                if transversal[y].is_none() {
                    let t = transversal[x].as_ref().expect("orbit point").then(g);
                    transversal[y] = Some(t);
                    orbit.push(y);
                }
            }
            k += 1;
        }
        self.levels[level].transversal = transversal;
        self.levels[level].orbit = orbit;
    }

    /// First Schreier generator of `level` that does not sift through the
    /// levels below, with the level where sifting stopped.
    fn first_residue(&self, level: usize) -> Option<(usize, Perm)> {
        let gens: Vec<&Perm> = self.level_generators(level).collect();
        let lvl = &self.levels[level];
        for &x in &lvl.orbit {
            let tx = lvl.transversal[x].as_ref().expect("orbit point");
            for s in &gens {
                let y = s.apply(x);
                let ty = lvl.transversal[y].as_ref().expect("orbit point");
                let schreier = tx.then(s).then(&ty.inverse());
                if schreier.is_identity() {
                    continue;
                }
                let (drop, residue) = self.sift_from(level + 1, &schreier);
                if let Some(h) = residue {
                    return Some((drop, h));
                }
            }
        }
        None
    }

    fn sift_from(&self, start: usize, g: &Perm) -> (usize, Option<Perm>) {
        let mut h = g.clone();
        for (i, level) in self.levels.iter().enumerate().skip(start) {
            let x = h.apply(level.base_point);
            match &level.transversal[x] {
                Some(t) => h = h.then(&t.inverse()),
                None => return (i, Some(h)),
            }
        }
        if h.is_identity() {
            (self.levels.len(), None)
        } else {
            (self.levels.len(), Some(h))
        }
    }

    pub fn contains(&self, g: &Perm) -> bool {
        g.degree() == self.n && self.sift_from(0, g).1.is_none()
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base_point).collect()
    }

    pub fn strong_generators(&self) -> &[Perm] {
        &self.strong
    }

    pub fn basic_orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    /// Product of the basic orbit lengths.
    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::from(1u32), |acc, l| acc * BigUint::from(l.orbit.len()))
    }
}

/// `n!` as a big integer.
pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::from(1u32), |acc, k| acc * BigUint::from(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(n: usize, cycles: &[&[usize]]) -> Perm {
        Perm::from_cycles(n, cycles).unwrap()
    }

    #[test]
    fn composition_is_left_to_right() {
        let a = cyc(3, &[&[0, 1]]);
        let b = cyc(3, &[&[1, 2]]);
        // 0 -a-> 1 -b-> 2
        assert_eq!(a.then(&b).apply(0), 2);
        assert!(a.then(&a.inverse()).is_identity());
    }

    #[test]
    fn rejects_non_bijection() {
        assert!(Perm::from_images(vec![0, 0, 1]).is_err());
        assert!(Perm::from_images(vec![0, 3, 1]).is_err());
    }

    #[test]
    fn closure_small_cases() {
        let g = group_closure(&[], 4, DEFAULT_CLOSURE_CAP).unwrap();
        assert_eq!(g.elements().unwrap().len(), 1);
        let g = group_closure(&[cyc(3, &[&[0, 1]])], 3, DEFAULT_CLOSURE_CAP).unwrap();
        assert_eq!(g.elements().unwrap().len(), 2);
        let s4 = [cyc(4, &[&[0, 1]]), cyc(4, &[&[0, 1, 2, 3]])];
        let g = group_closure(&s4, 4, DEFAULT_CLOSURE_CAP).unwrap();
        assert_eq!(g.elements().unwrap().len(), 24);
    }

    #[test]
    fn closure_cap_is_enforced() {
        let s5 = [cyc(5, &[&[0, 1]]), cyc(5, &[&[0, 1, 2, 3, 4]])];
        let err = group_closure(&s5, 5, 50).unwrap_err();
        assert_eq!(err, PermError::ClosureBudgetExceeded { cap: 50 });
    }

    #[test]
    fn schreier_sims_orders() {
        let s6 = [cyc(6, &[&[0, 1]]), cyc(6, &[&[0, 1, 2, 3, 4, 5]])];
        assert_eq!(StabChain::schreier_sims(6, &s6).order(), factorial(6));
        let a5 = [cyc(5, &[&[0, 1, 2]]), cyc(5, &[&[0, 1, 2, 3, 4]])];
        assert_eq!(StabChain::schreier_sims(5, &a5).order(), BigUint::from(60u32));
        // Sym(3) wr Sym(2) on 6 points.
        let w = [
            cyc(6, &[&[0, 1]]),
            cyc(6, &[&[0, 1, 2]]),
            cyc(6, &[&[0, 3], &[1, 4], &[2, 5]]),
        ];
        assert_eq!(StabChain::schreier_sims(6, &w).order(), BigUint::from(72u32));
        assert_eq!(StabChain::schreier_sims(4, &[]).order(), BigUint::from(1u32));
    }

    #[test]
    fn membership() {
        let a4 = [cyc(4, &[&[0, 1, 2]]), cyc(4, &[&[1, 2, 3]])];
        let chain = StabChain::schreier_sims(4, &a4);
        assert!(chain.contains(&cyc(4, &[&[0, 1], &[2, 3]])));
        assert!(!chain.contains(&cyc(4, &[&[0, 1]])));
    }

    #[test]
    fn orbits_by_union_find() {
        let g = [cyc(6, &[&[0, 2]]), cyc(6, &[&[3, 4]])];
        assert_eq!(orbits(6, &g), vec![vec![0, 2], vec![1], vec![3, 4], vec![5]]);
        assert_eq!(orbit_of(3, 6, &g), vec![3, 4]);
    }

    #[test]
    fn order_of_permutation() {
        assert_eq!(cyc(5, &[&[0, 1], &[2, 3, 4]]).order(), 6);
        assert_eq!(Perm::identity(3).order(), 1);
    }
}
