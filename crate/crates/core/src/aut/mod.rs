//! Automorphism groups of schemes by individualization and refinement.
//!
//! The first path down the search tree fixes a base `b_0, ..., b_k`. Levels
//! are then processed deepest first: for each point `v` of the target cell
//! at level `i` that is not yet in the orbit of `b_i` under the generators
//! found so far, the subtree below `v` is searched for a leaf that induces
//! an automorphism. Generators found this way form a strong generating set
//! for the base, which gives the group order directly.

mod refine;

use num_bigint::BigUint;
use petgraph::unionfind::UnionFind;
use thiserror::Error;

use crate::perm::{orbit_of, Perm, PermGroup, StabChain};
use crate::scheme::Scheme;

pub use refine::{refine, VertexColoring};
use refine::refine_traced;

pub const DEFAULT_NODE_BUDGET: usize = 10_000_000;
pub const MAX_AUT_DEGREE: usize = 400;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutError {
    #[error("search tree exceeded {0} nodes")]
    BudgetExceeded(usize),
    #[error("degree {n} exceeds the supported maximum {max}")]
    TooLarge { n: usize, max: usize },
    #[error("generator {0:?} does not preserve the coloring")]
    Unsound(Perm),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutGroup {
    n: usize,
    generators: Vec<Perm>,
    base: Vec<usize>,
    order: BigUint,
    nodes: usize,
}

impl AutGroup {
    /// Builds an `AutGroup` from externally supplied data, checking every
    /// generator against `x` and recomputing the order.
    pub fn from_generators(
        x: &Scheme,
        base: Vec<usize>,
        generators: Vec<Perm>,
    ) -> Result<AutGroup, AutError> {
        for g in &generators {
            if g.degree() != x.n() || !preserves_colors(x, g) {
                return Err(AutError::Unsound(g.clone()));
            }
        }
        let order = StabChain::from_base_and_strong_generators(x.n(), &base, &generators).order();
        Ok(AutGroup {
            n: x.n(),
            generators,
            base,
            order,
            nodes: 0,
        })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn base(&self) -> &[usize] {
        &self.base
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    /// Search tree nodes visited.
    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn to_perm_group(&self) -> PermGroup {
        PermGroup::from_generators(self.n, self.generators.clone()).expect("same degree")
    }
}

/// Whether `g` maps every color class of `x` onto itself.
pub fn preserves_colors(x: &Scheme, g: &Perm) -> bool {
    let n = x.n();
    let m = x.matrix();
    (0..n).all(|a| {
        let ga = g.apply(a);
        let row = m.row(a);
        let image_row = m.row(ga);
        (0..n).all(|b| row[b] == image_row[g.apply(b)])
    })
}

pub fn automorphism_group(x: &Scheme) -> Result<AutGroup, AutError> {
    automorphism_group_with_budget(x, DEFAULT_NODE_BUDGET)
}

pub fn automorphism_group_with_budget(x: &Scheme, budget: usize) -> Result<AutGroup, AutError> {
    let n = x.n();
    if n > MAX_AUT_DEGREE {
        return Err(AutError::TooLarge {
            n,
            max: MAX_AUT_DEGREE,
        });
    }
    let mut search = Search {
        x,
        nodes: 0,
        budget,
        path_traces: Vec::new(),
        leaf0: Vec::new(),
    };

    // first path
    let (root, root_trace) = refine_traced(x, &VertexColoring::uniform(n));
    search.tick()?;
    let mut path: Vec<(VertexColoring, Vec<usize>)> = Vec::new();
    let mut base = Vec::new();
    let mut node = root;
    search.path_traces.push(root_trace);
    while let Some(t) = node.target_cell() {
        let cell: Vec<usize> = (0..n).filter(|&a| node.color(a) == t).collect();
        let b = cell[0];
        let (child, trace) = refine_traced(x, &node.individualize(b));
        search.tick()?;
        search.path_traces.push(trace);
        base.push(b);
        path.push((node, cell));
        node = child;
    }
    search.leaf0 = leaf_order(&node);

    let mut generators: Vec<Perm> = Vec::new();
    for level in (0..path.len()).rev() {
        let (parent, cell) = &path[level];
        let b = base[level];
        let mut reached = orbit_of(b, n, &generators);
        let mut failed: Vec<usize> = Vec::new();
        for &v in cell {
            if reached.contains(&v) || failed.contains(&v) {
                continue;
            }
            let (child, trace) = refine_traced(x, &parent.individualize(v));
            search.tick()?;
            let found = if trace == search.path_traces[level + 1] {
                search.dfs(child, level + 1)?
            } else {
                None
            };
            match found {
                Some(g) => {
                    generators.push(g);
                    reached = orbit_of(b, n, &generators);
                }
                None => failed.extend(orbit_of(v, n, &generators)),
            }
        }
    }

    for g in &generators {
        if !preserves_colors(x, g) {
            return Err(AutError::Unsound(g.clone()));
        }
    }
    let order = StabChain::from_base_and_strong_generators(n, &base, &generators).order();
    Ok(AutGroup {
        n,
        generators,
        base,
        order,
        nodes: search.nodes,
    })
}

fn leaf_order(c: &VertexColoring) -> Vec<usize> {
    let mut order = vec![0; c.n()];
    for a in 0..c.n() {
        order[c.color(a) as usize] = a;
    }
    order
}

struct Search<'a> {
    x: &'a Scheme,
    nodes: usize,
    budget: usize,
    path_traces: Vec<u64>,
    leaf0: Vec<usize>,
}

impl Search<'_> {
    fn tick(&mut self) -> Result<(), AutError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            Err(AutError::BudgetExceeded(self.budget))
        } else {
            Ok(())
        }
    }

    /// First leaf below `node` whose labelling, matched against the first
    /// leaf, is an automorphism.
    fn dfs(&mut self, node: VertexColoring, depth: usize) -> Result<Option<Perm>, AutError> {
        let Some(t) = node.target_cell() else {
            let leaf = leaf_order(&node);
            let mut images = vec![0; leaf.len()];
            for (k, &a) in self.leaf0.iter().enumerate() {
                images[a] = leaf[k];
            }
            let g = Perm::from_images(images).expect("leaves are orderings");
            return Ok(preserves_colors(self.x, &g).then_some(g));
        };
        if depth + 1 >= self.path_traces.len() {
            return Ok(None);
        }
        for w in (0..node.n()).filter(|&a| node.color(a) == t) {
            let (child, trace) = refine_traced(self.x, &node.individualize(w));
            self.tick()?;
            if trace != self.path_traces[depth + 1] {
                continue;
            }
            if let Some(g) = self.dfs(child, depth + 1)? {
                return Ok(Some(g));
            }
        }
        Ok(None)
    }
}

/// The orbits of a group on ordered pairs, `pair = a * n + b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitalPartition {
    n: usize,
    labels: Vec<u32>,
    count: usize,
}

impl OrbitalPartition {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Orbital of `(a, b)`; orbitals are numbered by first pair in
    /// row-major order, so the diagonal of point 0 is orbital 0.
    pub fn label(&self, a: usize, b: usize) -> usize {
        self.labels[a * self.n + b] as usize
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }
}

pub fn orbitals(generators: &[Perm], n: usize) -> OrbitalPartition {
    let mut uf = UnionFind::<usize>::new(n * n);
    for g in generators {
        for a in 0..n {
            let ga = g.apply(a);
            for b in 0..n {
                uf.union(a * n + b, ga * n + g.apply(b));
            }
        }
    }
    let mut first = vec![u32::MAX; n * n];
    let mut labels = vec![0u32; n * n];
    let mut count = 0u32;
    for (i, label) in labels.iter_mut().enumerate() {
        let root = uf.find(i);
        if first[root] == u32::MAX {
            first[root] = count;
            count += 1;
        }
        *label = first[root];
    }
    OrbitalPartition {
        n,
        labels,
        count: count as usize,
    }
}

/// Schurity given an already computed automorphism group.
pub fn is_schurian_with(x: &Scheme, aut: &AutGroup) -> bool {
    let orb = orbitals(aut.generators(), x.n());
    debug_assert!(
        orbitals_refine_colors(x, &orb),
        "orbitals must refine the color partition"
    );
    orb.len() == x.rank()
}

fn orbitals_refine_colors(x: &Scheme, orb: &OrbitalPartition) -> bool {
    let n = x.n();
    let mut color_of = vec![usize::MAX; orb.len()];
    (0..n * n).all(|i| {
        let s = x.matrix().get(i / n, i % n);
        let slot = &mut color_of[orb.labels[i] as usize];
        if *slot == usize::MAX {
            *slot = s;
        }
        *slot == s
    })
}

pub fn is_schurian(x: &Scheme) -> Result<bool, AutError> {
    Ok(is_schurian_with(x, &automorphism_group(x)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::build_affine_scheme;
    use crate::perm::factorial;
    use crate::scheme::{tensor_product, trivial_scheme, verify_scheme, wreath_product};

    #[test]
    fn trivial_nine() {
        let g = automorphism_group(&trivial_scheme(9)).unwrap();
        assert_eq!(*g.order(), factorial(9));
    }

    #[test]
    fn hamming_and_wreath() {
        let t3 = trivial_scheme(3);
        let t = tensor_product(&t3, &t3).unwrap();
        assert_eq!(*automorphism_group(&t).unwrap().order(), BigUint::from(36u32));
        // rank 3 Hamming scheme: the two coordinate colors merged
        let h = verify_scheme(t.matrix().merge(&[0, 1, 1, 2]).unwrap()).unwrap();
        assert_eq!(*automorphism_group(&h).unwrap().order(), BigUint::from(72u32));
        let w = wreath_product(&t3, &t3).unwrap();
        assert_eq!(
            *automorphism_group(&w).unwrap().order(),
            BigUint::from(1296u32)
        );
    }

    #[test]
    fn orbitals_small() {
        assert_eq!(orbitals(&[], 3).len(), 9);
        let s3 = vec![
            Perm::from_cycles(3, &[&[0, 1]]).unwrap(),
            Perm::from_cycles(3, &[&[0, 1, 2]]).unwrap(),
        ];
        assert_eq!(orbitals(&s3, 3).len(), 2);
    }

    #[test]
    fn affine_three_is_schurian() {
        let x = build_affine_scheme(3).unwrap();
        let g = automorphism_group(&x).unwrap();
        let orb = orbitals(g.generators(), 9);
        assert_eq!(orb.len(), 5);
        for a in 0..9 {
            for b in 0..9 {
                let same = (0..9).flat_map(|c| (0..9).map(move |d| (c, d)));
                for (c, d) in same {
                    assert_eq!(
                        orb.label(a, b) == orb.label(c, d),
                        x.matrix().get(a, b) == x.matrix().get(c, d)
                    );
                }
            }
        }
    }

    #[test]
    fn budget_is_reported() {
        assert_eq!(
            automorphism_group_with_budget(&trivial_scheme(9), 3),
            Err(AutError::BudgetExceeded(3))
        );
    }

    #[test]
    fn deterministic() {
        let x = build_affine_scheme(5).unwrap();
        assert_eq!(automorphism_group(&x).unwrap(), automorphism_group(&x).unwrap());
    }
}
