use std::collections::{BTreeSet, HashMap, VecDeque};

use super::{verify_scheme, Color, ColorMatrix, Scheme, SchemeError, MAX_MASK_RANK};

/// An equivalence relation that is a union of basis relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParabolicSet {
    /// Member colors, ascending; always contains 0.
    pub colors: Vec<usize>,
    /// Equivalence classes, each sorted, listed by smallest member.
    pub classes: Vec<Vec<usize>>,
    pub class_size: usize,
}

impl ParabolicSet {
    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn mask(&self) -> u64 {
        self.colors.iter().fold(0u64, |m, &c| m | 1 << c)
    }

    pub fn is_trivial(&self, x: &Scheme) -> bool {
        self.colors.len() == 1 || self.colors.len() == x.rank()
    }

    /// Class index of every point.
    pub fn class_of(&self, n: usize) -> Vec<usize> {
        let mut of = vec![usize::MAX; n];
        for (i, cls) in self.classes.iter().enumerate() {
            for &a in cls {
                of[a] = i;
            }
        }
        of
    }

    /// Builds the parabolic for a color set, checking that its union is an
    /// equivalence relation with classes of one size.
    pub fn from_colors(x: &Scheme, colors: &[usize]) -> Result<ParabolicSet, SchemeError> {
        let r = x.rank();
        if r > MAX_MASK_RANK {
            return Err(SchemeError::RankTooLarge {
                rank: r,
                max: MAX_MASK_RANK,
            });
        }
        let set: BTreeSet<usize> = colors.iter().copied().collect();
        if set.iter().any(|&c| c >= r) {
            return Err(SchemeError::NotParabolic(colors.to_vec()));
        }
        let mask = set.iter().fold(0u64, |m, &c| m | 1 << c);
        if closure(x, mask) != mask {
            return Err(SchemeError::NotParabolic(colors.to_vec()));
        }
        build(x, mask)
    }
}

/// Smallest star-closed, product-closed color set containing `mask` and 0.
fn closure(x: &Scheme, mask: u64) -> u64 {
    let r = x.rank();
    let mut m = mask | 1;
    loop {
        let mut next = m;
        for a in 0..r {
            if m >> a & 1 == 0 {
                continue;
            }
            next |= 1 << x.star(a);
            for b in 0..r {
                if m >> b & 1 == 0 {
                    continue;
                }
                for t in 0..r {
                    if x.c(a, b, t) > 0 {
                        next |= 1 << t;
                    }
                }
            }
        }
        if next == m {
            return m;
        }
        m = next;
    }
}

fn build(x: &Scheme, mask: u64) -> Result<ParabolicSet, SchemeError> {
    let n = x.n();
    let m = x.matrix();
    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for a in 0..n {
        if class_of[a] != usize::MAX {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|&b| mask >> m.get(a, b) & 1 == 1).collect();
        for &b in &members {
            if class_of[b] != usize::MAX {
                return Err(SchemeError::NotParabolic(mask_colors(mask)));
            }
            class_of[b] = classes.len();
        }
        classes.push(members);
    }
    let class_size = classes[0].len();
    if classes.iter().any(|c| c.len() != class_size) {
        return Err(SchemeError::NonHomogeneous);
    }
    Ok(ParabolicSet {
        colors: mask_colors(mask),
        classes,
        class_size,
    })
}

fn mask_colors(mask: u64) -> Vec<usize> {
    (0..64).filter(|&c| mask >> c & 1 == 1).collect()
}

/// All parabolics, trivial ones included, ordered by number of colors and
/// then by color mask.
///
/// Every parabolic is reached from `{0}` by repeatedly adding one color and
/// closing, so a breadth-first walk over closures visits all of them.
pub fn parabolics(x: &Scheme) -> Result<Vec<ParabolicSet>, SchemeError> {
    let r = x.rank();
    if r > MAX_MASK_RANK {
        return Err(SchemeError::RankTooLarge {
            rank: r,
            max: MAX_MASK_RANK,
        });
    }
    let start = closure(x, 1);
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(mask) = queue.pop_front() {
        for c in 0..r {
            if mask >> c & 1 == 1 {
                continue;
            }
            let next = closure(x, mask | 1 << c);
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    let mut masks: Vec<u64> = seen.into_iter().collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    masks.into_iter().map(|m| build(x, m)).collect()
}

/// Only the two trivial parabolics exist.
pub fn is_primitive(x: &Scheme) -> Result<bool, SchemeError> {
    Ok(parabolics(x)?.len() <= 2)
}

/// The quotient scheme on the classes of `e`.
pub fn quotient(x: &Scheme, e: &ParabolicSet) -> Result<Scheme, SchemeError> {
    let n = x.n();
    let k = e.num_classes();
    let class_of = e.class_of(n);
    let r = x.rank();
    // relation of each color, as a sorted set of class pairs
    let mut rel: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); r];
    for a in 0..n {
        for b in 0..n {
            rel[x.matrix().get(a, b)].insert(class_of[a] * k + class_of[b]);
        }
    }
    let mut id_of_rel: HashMap<&BTreeSet<usize>, usize> = HashMap::new();
    let mut pair_label = vec![usize::MAX; k * k];
    for set in &rel {
        let next = id_of_rel.len();
        let id = *id_of_rel.entry(set).or_insert(next);
        for &pair in set {
            if pair_label[pair] != usize::MAX && pair_label[pair] != id {
                return Err(SchemeError::InvalidMatrix(
                    "quotient relations overlap; not a parabolic of a scheme".into(),
                ));
            }
            pair_label[pair] = id;
        }
    }
    let m = ColorMatrix::from_labels(k, |a, b| pair_label[a * k + b])?;
    verify_scheme(m)
}

/// The restriction of `x` to the class `class_index` of `e`.
pub fn restriction(x: &Scheme, e: &ParabolicSet, class_index: usize) -> Result<Scheme, SchemeError> {
    let members = &e.classes[class_index];
    let m = ColorMatrix::from_labels(members.len(), |a, b| {
        x.matrix().get(members[a], members[b]) as Color
    })?;
    verify_scheme(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::{tensor_product, trivial_scheme, wreath_product};

    #[test]
    fn trivial_scheme_has_two_parabolics() {
        let x = trivial_scheme(5);
        let ps = parabolics(&x).unwrap();
        assert_eq!(ps.len(), 2);
        assert!(is_primitive(&x).unwrap());
        assert_eq!(ps[0].num_classes(), 5);
        assert_eq!(ps[1].num_classes(), 1);
    }

    #[test]
    fn hamming_has_four_parabolics() {
        let h = tensor_product(&trivial_scheme(3), &trivial_scheme(3)).unwrap();
        let ps = parabolics(&h).unwrap();
        assert_eq!(ps.len(), 4);
        assert!(!is_primitive(&h).unwrap());
        for e in &ps[1..3] {
            assert_eq!((e.num_classes(), e.class_size), (3, 3));
            let q = quotient(&h, e).unwrap();
            assert!(q.is_trivial());
            assert_eq!(q.n(), 3);
        }
    }

    #[test]
    fn quotient_by_diagonal_is_isomorphic_copy() {
        let w = wreath_product(&trivial_scheme(3), &trivial_scheme(2)).unwrap();
        let ps = parabolics(&w).unwrap();
        let q = quotient(&w, &ps[0]).unwrap();
        assert_eq!(q.n(), w.n());
        assert_eq!(q.rank(), w.rank());
    }

    #[test]
    fn restriction_of_wreath() {
        let w = wreath_product(&trivial_scheme(3), &trivial_scheme(3)).unwrap();
        let ps = parabolics(&w).unwrap();
        assert_eq!(ps.len(), 3);
        let e = &ps[1];
        for i in 0..e.num_classes() {
            let sub = restriction(&w, e, i).unwrap();
            assert!(sub.is_trivial());
            assert_eq!(sub.n(), 3);
        }
    }

    #[test]
    fn from_colors_rejects_non_parabolic() {
        let h = tensor_product(&trivial_scheme(3), &trivial_scheme(3)).unwrap();
        // the "both coordinates differ" color alone is not an equivalence
        let far = (1..h.rank()).find(|&c| h.valency(c) == 4).unwrap();
        assert!(ParabolicSet::from_colors(&h, &[0, far]).is_err());
    }
}
