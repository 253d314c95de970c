use std::fmt;

use super::field::{check_prime, mod_inv, DEFAULT_PRIME_BOUND};
use super::GeometryError;
use crate::perm::Perm;

/// A point of the projective line P^1(F_p).
///
/// Points are indexed `0..=p`: `Finite(x)` has index `x` and `Infinity`
/// has index `p`. This is also the slope order `(0, 1, ..., p-1, inf)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProjectivePoint {
    /// `[x : 1]`
    Finite(u32),
    /// `[1 : 0]`
    Infinity,
}

impl ProjectivePoint {
    pub fn index(self, p: u32) -> usize {
        match self {
            ProjectivePoint::Finite(x) => x as usize,
            ProjectivePoint::Infinity => p as usize,
        }
    }

    pub fn from_index(i: usize, p: u32) -> Self {
        if i == p as usize {
            ProjectivePoint::Infinity
        } else {
            assert!(i < p as usize, "point index {i} out of range for p = {p}");
            ProjectivePoint::Finite(i as u32)
        }
    }

    /// Normalizes homogeneous coordinates `[u : v]`, not both zero.
    pub fn from_homogeneous(u: u32, v: u32, p: u32) -> Self {
        if v % p == 0 {
            debug_assert!(u % p != 0);
            ProjectivePoint::Infinity
        } else {
            let inv = mod_inv(v, p).expect("nonzero");
            ProjectivePoint::Finite(((u as u64 * inv as u64) % p as u64) as u32)
        }
    }

    pub fn all(p: u32) -> impl Iterator<Item = ProjectivePoint> {
        (0..=p as usize).map(move |i| ProjectivePoint::from_index(i, p))
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjectivePoint::Finite(x) => write!(f, "{x}"),
            ProjectivePoint::Infinity => write!(f, "inf"),
        }
    }
}

/// An element of PGL(2,p): the canonical representative of a coset of the
/// scalar matrices, with first nonzero entry (in order a, b, c, d) equal to 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PglElement {
    a: u32,
    b: u32,
    c: u32,
    d: u32,
    p: u32,
}

impl PglElement {
    pub fn identity(p: u32) -> Self {
        PglElement {
            a: 1,
            b: 0,
            c: 0,
            d: 1,
            p,
        }
    }

    pub fn entries(&self) -> [u32; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    /// Rebuilds an element from its four entries, re-canonicalizing.
    pub fn from_entries(e: [u32; 4], p: u32) -> Result<Self, GeometryError> {
        pgl_canonical(e[0] as i64, e[1] as i64, e[2] as i64, e[3] as i64, p)
    }

    /// Matrix product `self * other` (acting on column vectors, so `other`
    /// acts first).
    pub fn compose(&self, other: &PglElement) -> PglElement {
        let p = self.p as u64;
        let (a, b, c, d) = (self.a as u64, self.b as u64, self.c as u64, self.d as u64);
        let (e, f, g, h) = (other.a as u64, other.b as u64, other.c as u64, other.d as u64);
        pgl_canonical(
            ((a * e + b * g) % p) as i64,
            ((a * f + b * h) % p) as i64,
            ((c * e + d * g) % p) as i64,
            ((c * f + d * h) % p) as i64,
            self.p,
        )
        .expect("product of invertible matrices")
    }

    pub fn inverse(&self) -> PglElement {
        // adjugate; the determinant is a scalar
        let p = self.p as i64;
        pgl_canonical(
            self.d as i64,
            p - self.b as i64,
            p - self.c as i64,
            self.a as i64,
            self.p,
        )
        .expect("inverse of invertible matrix")
    }

    /// The permutation of the `p + 1` projective points induced by the
    /// Mobius action.
    pub fn line_permutation(&self) -> Perm {
        let images = ProjectivePoint::all(self.p)
            .map(|x| moebius_apply(self, x).index(self.p))
            .collect();
        Perm::from_images_unchecked(images)
    }
}

impl fmt::Display for PglElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

/// Canonical representative of the class of `(a b; c d)` modulo scalars.
pub fn pgl_canonical(a: i64, b: i64, c: i64, d: i64, p: u32) -> Result<PglElement, GeometryError> {
    let m = p as i64;
    let e = [a, b, c, d].map(|x| x.rem_euclid(m) as u64);
    let det = (e[0] * e[3] % p as u64 + p as u64 * p as u64 - e[1] * e[2] % p as u64) % p as u64;
    if det == 0 {
        return Err(GeometryError::SingularMatrix);
    }
    let lead = e.iter().copied().find(|&x| x != 0).expect("nonzero determinant");
    let inv = mod_inv(lead as u32, p).expect("nonzero lead") as u64;
    let n = e.map(|x| (x * inv % p as u64) as u32);
    Ok(PglElement {
        a: n[0],
        b: n[1],
        c: n[2],
        d: n[3],
        p,
    })
}

/// Mobius action `[u : v] -> [a u + b v : c u + d v]`.
pub fn moebius_apply(g: &PglElement, x: ProjectivePoint) -> ProjectivePoint {
    let p = g.p as u64;
    let (u, v) = match x {
        ProjectivePoint::Finite(x) => (x as u64, 1u64),
        ProjectivePoint::Infinity => (1, 0),
    };
    let nu = (g.a as u64 * u + g.b as u64 * v) % p;
    let nv = (g.c as u64 * u + g.d as u64 * v) % p;
    ProjectivePoint::from_homogeneous(nu as u32, nv as u32, g.p)
}

/// Slope of the direction `(dx, dy)` as a slope index (`p` for vertical).
#[inline]
pub(crate) fn slope_index(dx: u32, dy: u32, p: u32) -> usize {
    if dx == 0 {
        p as usize
    } else {
        ((dy as u64 * mod_inv(dx, p).expect("nonzero") as u64) % p as u64) as usize
    }
}

/// The permutation of slope labels `(0, ..., p-1, inf)` induced by `g`
/// acting linearly on the plane.
///
/// The matrix acts on direction vectors as `(dx, dy) -> (d dx + c dy, b dx + a dy)`,
/// the conjugate of `g` by the coordinate swap. With slope `m` identified
/// with the point `[m : 1]` this is exactly the Mobius action.
pub fn slope_permutation(g: &PglElement) -> Perm {
    let p = g.p;
    let pp = p as u64;
    let images = (0..=p as usize)
        .map(|slope| {
            let (dx, dy) = if slope == p as usize {
                (0u64, 1u64)
            } else {
                (1u64, slope as u64)
            };
            let ndx = (g.d as u64 * dx + g.c as u64 * dy) % pp;
            let ndy = (g.b as u64 * dx + g.a as u64 * dy) % pp;
            slope_index(ndx as u32, ndy as u32, p)
        })
        .collect();
    Perm::from_images_unchecked(images)
}

/// All of PGL(2,p) in lexicographic order of canonical entries, with the
/// induced permutations of the projective line and element orders.
#[derive(Debug, Clone)]
pub struct Pgl {
    p: u32,
    elements: Vec<PglElement>,
    perms: Vec<Perm>,
    orders: Vec<u32>,
    /// Entry tuple `(a, b, c, d)` encoded base `p` to element index.
    lookup: Vec<u32>,
}

impl Pgl {
    pub fn new(p: u32) -> Result<Self, GeometryError> {
        Pgl::with_bound(p, DEFAULT_PRIME_BOUND)
    }

    pub fn with_bound(p: u32, bound: u32) -> Result<Self, GeometryError> {
        check_prime(p, bound)?;
        let pu = p as usize;
        let mut lookup = vec![u32::MAX; pu.pow(4)];
        let mut elements = Vec::with_capacity(pu * pu * pu - pu);
        for a in 0..p {
            for b in 0..p {
                for c in 0..p {
                    for d in 0..p {
                        let first = [a, b, c, d].into_iter().find(|&x| x != 0);
                        if first != Some(1) {
                            continue;
                        }
                        if (a as u64 * d as u64 + (p as u64) * (p as u64) - b as u64 * c as u64)
                            % p as u64
                            == 0
                        {
                            continue;
                        }
                        let g = PglElement { a, b, c, d, p };
                        lookup[Self::key(p, &g)] = elements.len() as u32;
                        elements.push(g);
                    }
                }
            }
        }
        debug_assert_eq!(elements.len(), pu * pu * pu - pu);
        let perms: Vec<Perm> = elements.iter().map(|g| g.line_permutation()).collect();
        let orders = perms.iter().map(|q| q.order() as u32).collect();
        Ok(Pgl {
            p,
            elements,
            perms,
            orders,
            lookup,
        })
    }

    fn key(p: u32, g: &PglElement) -> usize {
        let p = p as usize;
        ((g.a as usize * p + g.b as usize) * p + g.c as usize) * p + g.d as usize
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[PglElement] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &PglElement {
        &self.elements[i]
    }

    pub fn perm(&self, i: usize) -> &Perm {
        &self.perms[i]
    }

    pub fn order_of(&self, i: usize) -> u32 {
        self.orders[i]
    }

    pub fn index_of(&self, g: &PglElement) -> usize {
        let i = self.lookup[Self::key(self.p, g)];
        debug_assert!(i != u32::MAX);
        i as usize
    }

    pub fn identity_index(&self) -> usize {
        self.index_of(&PglElement::identity(self.p))
    }

    /// Index of the matrix product `elements[i] * elements[j]`.
    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.index_of(&self.elements[i].compose(&self.elements[j]))
    }

    pub fn inv(&self, i: usize) -> usize {
        self.index_of(&self.elements[i].inverse())
    }

    /// Sorted element indices of `<gens>`.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let id = self.identity_index();
        let mut seen = vec![false; self.len()];
        seen[id] = true;
        let mut out = vec![id];
        let mut k = 0;
        while k < out.len() {
            let x = out[k];
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
            k += 1;
        }
        out.sort_unstable();
        out
    }
}

/// Generators of PGL(2,p): `z -> g z` for a primitive root `g`,
/// `z -> z + 1` and `z -> 1/z`.
pub fn pgl_generators(p: u32) -> Result<Vec<PglElement>, GeometryError> {
    check_prime(p, u32::MAX)?;
    let g = (2..p)
        .find(|&g| super::field::mult_order(g, p) == p - 1)
        .unwrap_or(1);
    Ok(vec![
        pgl_canonical(g as i64, 0, 0, 1, p)?,
        pgl_canonical(1, 1, 0, 1, p)?,
        pgl_canonical(0, 1, 1, 0, p)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{group_closure, DEFAULT_CLOSURE_CAP};

    #[test]
    fn canonical_forms() {
        assert_eq!(pgl_canonical(1, 0, 0, 1, 3).unwrap().entries(), [1, 0, 0, 1]);
        assert_eq!(pgl_canonical(2, 0, 0, 2, 3).unwrap().entries(), [1, 0, 0, 1]);
        assert_eq!(pgl_canonical(0, 2, 1, 0, 5).unwrap().entries(), [0, 1, 3, 0]);
        assert_eq!(pgl_canonical(1, 2, 2, 4, 5), Err(GeometryError::SingularMatrix));
    }

    #[test]
    fn moebius_examples() {
        let id = PglElement::identity(3);
        for x in ProjectivePoint::all(3) {
            assert_eq!(moebius_apply(&id, x), x);
        }
        let swap = pgl_canonical(0, 1, 1, 0, 3).unwrap();
        assert_eq!(
            moebius_apply(&swap, ProjectivePoint::Finite(0)),
            ProjectivePoint::Infinity
        );
        let neg = pgl_canonical(2, 0, 0, 1, 3).unwrap();
        assert_eq!(
            moebius_apply(&neg, ProjectivePoint::Finite(1)),
            ProjectivePoint::Finite(2)
        );
    }

    #[test]
    fn slope_permutation_examples() {
        assert!(slope_permutation(&PglElement::identity(5)).is_identity());
        // z -> -z on p = 3: 0 and inf fixed, 1 <-> 2
        let neg = pgl_canonical(2, 0, 0, 1, 3).unwrap();
        assert_eq!(slope_permutation(&neg).images(), &[0, 2, 1, 3]);
        // z -> 1/z on p = 5: 0 <-> inf, 1 and 4 fixed, 2 <-> 3
        let inv = pgl_canonical(0, 1, 1, 0, 5).unwrap();
        assert_eq!(slope_permutation(&inv).images(), &[5, 1, 3, 2, 4, 0]);
    }

    #[test]
    fn table_sizes_and_closure() {
        for p in [3u32, 5, 7] {
            let t = Pgl::new(p).unwrap();
            assert_eq!(t.len() as u32, p * p * p - p);
            let gens: Vec<Perm> = pgl_generators(p)
                .unwrap()
                .iter()
                .map(|g| g.line_permutation())
                .collect();
            let g = group_closure(&gens, p as usize + 1, DEFAULT_CLOSURE_CAP).unwrap();
            assert_eq!(g.elements().unwrap().len() as u32, p * p * p - p);
        }
    }

    #[test]
    fn action_is_homomorphism() {
        let t = Pgl::new(5).unwrap();
        for i in (0..t.len()).step_by(7) {
            for j in (0..t.len()).step_by(11) {
                let prod = t.mul(i, j);
                // matrix product acts right factor first
                assert_eq!(*t.perm(prod), t.perm(j).then(t.perm(i)));
            }
            assert_eq!(t.mul(i, t.inv(i)), t.identity_index());
        }
    }

    #[test]
    fn rejects_bad_primes() {
        assert_eq!(Pgl::new(2).unwrap_err(), GeometryError::NotOddPrime(2));
        assert!(matches!(
            Pgl::new(37).unwrap_err(),
            GeometryError::UnsupportedPrime { .. }
        ));
    }
}
