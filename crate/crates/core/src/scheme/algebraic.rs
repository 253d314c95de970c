use num_bigint::BigUint;

use super::{verify_scheme, Scheme, SchemeError};
use crate::perm::{orbits, Perm, PermGroup};

/// Largest rank for which [`algebraic_automorphisms`] runs its search.
pub const MAX_AAUT_RANK: usize = 16;

/// A permutation of the colors of a scheme fixing the diagonal color.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlgebraicMap {
    image: Vec<usize>,
}

impl AlgebraicMap {
    /// Checks that `image` is an algebraic automorphism of `x`.
    pub fn new(x: &Scheme, image: Vec<usize>) -> Result<Self, SchemeError> {
        if is_algebraic_map(x, &image) {
            Ok(AlgebraicMap { image })
        } else {
            Err(SchemeError::NotAlgebraic(image))
        }
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn apply(&self, s: usize) -> usize {
        self.image[s]
    }

    pub fn order(&self) -> u64 {
        Perm::from_images(self.image.clone())
            .expect("validated bijection")
            .order()
    }
}

/// A color bijection fixing 0, commuting with transposition and preserving
/// every intersection number.
pub fn is_algebraic_map(x: &Scheme, image: &[usize]) -> bool {
    let r = x.rank();
    if image.len() != r || image[0] != 0 || Perm::from_images(image.to_vec()).is_err() {
        return false;
    }
    if (0..r).any(|s| image[x.star(s)] != x.star(image[s])) {
        return false;
    }
    for a in 0..r {
        for b in 0..r {
            for t in 0..r {
                if x.c(a, b, t) != x.c(image[a], image[b], image[t]) {
                    return false;
                }
            }
        }
    }
    true
}

/// The group of all algebraic automorphisms as permutations of the colors.
///
/// Backtracking assigns images to colors sorted by (valency, self-paired),
/// candidates restricted to colors of the same kind, checking intersection
/// numbers among assigned colors at every step. At most `cap` elements are
/// materialized.
pub fn algebraic_automorphisms(x: &Scheme, cap: usize) -> Result<PermGroup, SchemeError> {
    let r = x.rank();
    if r > MAX_AAUT_RANK {
        return Err(SchemeError::RankTooLarge {
            rank: r,
            max: MAX_AAUT_RANK,
        });
    }
    let kind = |s: usize| (x.valency(s), x.star(s) == s);
    let mut order: Vec<usize> = (1..r).collect();
    order.sort_by_key(|&s| (kind(s), s));

    let mut image = vec![usize::MAX; r];
    image[0] = 0;
    let mut used = vec![false; r];
    used[0] = true;
    let mut assigned = vec![0usize];
    let mut found = Vec::new();
    search(
        x, &order, 0, &mut image, &mut used, &mut assigned, &mut found, cap, &kind,
    )?;
    Ok(PermGroup::from_closed_elements(r, found))
}

#[allow(clippy::too_many_arguments)]
fn search(
    x: &Scheme,
    order: &[usize],
    depth: usize,
    image: &mut Vec<usize>,
    used: &mut Vec<bool>,
    assigned: &mut Vec<usize>,
    found: &mut Vec<Perm>,
    cap: usize,
    kind: &dyn Fn(usize) -> (u32, bool),
) -> Result<(), SchemeError> {
    if depth == order.len() {
        if found.len() >= cap {
            return Err(SchemeError::BudgetExceeded(cap));
        }
        found.push(Perm::from_images(image.clone()).expect("bijection"));
        return Ok(());
    }
    let s = order[depth];
    for t in 1..x.rank() {
        if used[t] || kind(t) != kind(s) {
            continue;
        }
        image[s] = t;
        if !consistent(x, image, assigned, s) {
            image[s] = usize::MAX;
            continue;
        }
        used[t] = true;
        assigned.push(s);
        search(x, order, depth + 1, image, used, assigned, found, cap, kind)?;
        assigned.pop();
        used[t] = false;
        image[s] = usize::MAX;
    }
    Ok(())
}

fn consistent(x: &Scheme, image: &[usize], assigned: &[usize], s: usize) -> bool {
    let st = x.star(s);
    if image[st] != usize::MAX && image[st] != x.star(image[s]) {
        return false;
    }
    let mut all: Vec<usize> = assigned.to_vec();
    all.push(s);
    for &a in &all {
        for &b in &all {
            let triples = [(s, a, b), (a, s, b), (a, b, s)];
            for (u, v, w) in triples {
                if x.c(u, v, w) != x.c(image[u], image[v], image[w]) {
                    return false;
                }
            }
        }
    }
    true
}

/// An algebraic fusion `X^K` with the color map that produced it.
#[derive(Debug, Clone)]
pub struct AlgebraicFusion {
    pub scheme: Scheme,
    /// `color_map[s]` is the fused color containing the old color `s`.
    pub color_map: Vec<usize>,
    /// The fusing group has order 2.
    pub involutive: bool,
}

/// Merges the colors of `x` along the orbits of `k`, a group of algebraic
/// automorphisms given as permutations of the colors. Fused colors are
/// numbered by their smallest original color.
pub fn algebraic_fusion(x: &Scheme, k: &PermGroup) -> Result<AlgebraicFusion, SchemeError> {
    let r = x.rank();
    if k.domain_size() != r {
        return Err(SchemeError::InvalidMatrix(format!(
            "group acts on {} colors, scheme has rank {r}",
            k.domain_size()
        )));
    }
    for g in k.generators() {
        if !is_algebraic_map(x, g.images()) {
            return Err(SchemeError::NotAlgebraic(g.images().to_vec()));
        }
    }
    let color_orbits = orbits(r, k.generators());
    let mut class = vec![0usize; r];
    for (i, orb) in color_orbits.iter().enumerate() {
        for &c in orb {
            class[c] = i;
        }
    }
    let merged = x.matrix().merge(&class)?;
    let scheme = verify_scheme(merged)?;
    Ok(AlgebraicFusion {
        scheme,
        color_map: class,
        involutive: k.order() == BigUint::from(2u32),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::{tensor_product, trivial_scheme};

    #[test]
    fn trivial_scheme_has_trivial_aaut() {
        let g = algebraic_automorphisms(&trivial_scheme(4), 1000).unwrap();
        assert_eq!(g.elements().unwrap().len(), 1);
    }

    #[test]
    fn hamming_aaut_swaps_coordinates() {
        let h = tensor_product(&trivial_scheme(3), &trivial_scheme(3)).unwrap();
        let g = algebraic_automorphisms(&h, 1000).unwrap();
        assert_eq!(g.elements().unwrap().len(), 2);
        let swap = g.elements().unwrap().iter().find(|e| !e.is_identity()).unwrap();
        // colors (0,1) = 1 and (1,0) = 2 are exchanged
        assert_eq!(swap.apply(1), 2);
        let fused = algebraic_fusion(&h, &g).unwrap();
        assert!(fused.involutive);
        assert_eq!(fused.scheme.rank(), 3);
    }

    #[test]
    fn rejects_non_algebraic_generator() {
        let h = tensor_product(&trivial_scheme(3), &trivial_scheme(3)).unwrap();
        // swapping a valency-2 color with the valency-4 color
        let bad = Perm::from_images(vec![0, 3, 2, 1]).unwrap();
        let k = PermGroup::from_generators(4, vec![bad]).unwrap();
        assert!(matches!(
            algebraic_fusion(&h, &k),
            Err(SchemeError::NotAlgebraic(_))
        ));
    }

    #[test]
    fn budget_is_reported() {
        let h = tensor_product(&trivial_scheme(3), &trivial_scheme(3)).unwrap();
        assert_eq!(
            algebraic_automorphisms(&h, 1).unwrap_err(),
            SchemeError::BudgetExceeded(1)
        );
    }
}
