use super::parabolic::{quotient, ParabolicSet};
use super::{verify_scheme, Color, ColorMatrix, Scheme, SchemeError};

/// The rank-2 scheme of degree `n` (rank 1 when `n = 1`).
pub fn trivial_scheme(n: usize) -> Scheme {
    let cells = (0..n * n)
        .map(|i| if i / n == i % n { 0 } else { 1 })
        .collect();
    verify_scheme(ColorMatrix::new(n, cells).expect("valid trivial matrix"))
        .expect("trivial scheme satisfies the axioms")
}

/// Wreath product on `Omega_1 x Omega_2`: point `(a1, a2)` has index
/// `a2 * n1 + a1`, so the blocks `Omega_1 x {a2}` are contiguous.
///
/// Inside a block the colors are those of `x1`; between blocks `a2 != b2`
/// the color is `r1 - 1 + cell_2(a2, b2)`. Rank is `r1 + r2 - 1`.
pub fn wreath_product(x1: &Scheme, x2: &Scheme) -> Result<Scheme, SchemeError> {
    let (n1, n2) = (x1.n(), x2.n());
    let r1 = x1.rank();
    let n = n1 * n2;
    let mut cells = vec![0 as Color; n * n];
    for a in 0..n {
        let (a1, a2) = (a % n1, a / n1);
        for b in 0..n {
            let (b1, b2) = (b % n1, b / n1);
            cells[a * n + b] = if a2 == b2 {
                x1.matrix().get(a1, b1) as Color
            } else {
                (r1 - 1 + x2.matrix().get(a2, b2)) as Color
            };
        }
    }
    verify_scheme(ColorMatrix::new(n, cells)?)
}

/// Tensor product: point `(a1, a2)` has index `a1 * n2 + a2` and the pair
/// of colors `(s1, s2)` becomes color `s1 * r2 + s2`.
pub fn tensor_product(x1: &Scheme, x2: &Scheme) -> Result<Scheme, SchemeError> {
    let (n1, n2) = (x1.n(), x2.n());
    let r2 = x2.rank();
    let n = n1 * n2;
    let mut cells = vec![0 as Color; n * n];
    for a in 0..n {
        let (a1, a2) = (a / n2, a % n2);
        for b in 0..n {
            let (b1, b2) = (b / n2, b % n2);
            cells[a * n + b] = (x1.matrix().get(a1, b1) * r2 + x2.matrix().get(a2, b2)) as Color;
        }
    }
    verify_scheme(ColorMatrix::new(n, cells)?)
}

/// Whether `x` is a subtensor product with respect to the parabolics `e1`
/// and `e2`: their classes form a grid identifying the points with
/// `Omega/e1 x Omega/e2`, and every color of `x` lies in a single product
/// `s1 (x) s2` of quotient colors, pairing `(a1, b1)` with `(a2, b2)`.
pub fn is_subtensor(x: &Scheme, e1: &ParabolicSet, e2: &ParabolicSet) -> bool {
    subtensor_check(x, e1, e2).unwrap_or(false)
}

fn subtensor_check(x: &Scheme, e1: &ParabolicSet, e2: &ParabolicSet) -> Result<bool, SchemeError> {
    let n = x.n();
    // both must really be parabolics of x
    let e1 = ParabolicSet::from_colors(x, &e1.colors)?;
    let e2 = ParabolicSet::from_colors(x, &e2.colors)?;
    if e1.num_classes() * e2.num_classes() != n {
        return Ok(false);
    }
    let c1 = e1.class_of(n);
    let c2 = e2.class_of(n);
    let mut cell_owner = vec![usize::MAX; n];
    for a in 0..n {
        let key = c1[a] * e2.num_classes() + c2[a];
        if cell_owner[key] != usize::MAX {
            return Ok(false);
        }
        cell_owner[key] = a;
    }
    let q1 = quotient(x, &e1)?;
    let q2 = quotient(x, &e2)?;
    let mut product_of = vec![None; x.rank()];
    for a in 0..n {
        for b in 0..n {
            let s = x.matrix().get(a, b);
            let pair = (q1.matrix().get(c1[a], c1[b]), q2.matrix().get(c2[a], c2[b]));
            match product_of[s] {
                None => product_of[s] = Some(pair),
                Some(prev) if prev != pair => return Ok(false),
                _ => {}
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::parabolics;

    #[test]
    fn wreath_of_trivial_threes() {
        let w = wreath_product(&trivial_scheme(3), &trivial_scheme(3)).unwrap();
        assert_eq!(w.rank(), 3);
        assert_eq!(w.valencies(), vec![2, 6]);
    }

    #[test]
    fn tensor_of_trivial_threes_is_hamming() {
        let h = tensor_product(&trivial_scheme(3), &trivial_scheme(3)).unwrap();
        assert_eq!(h.rank(), 4);
        let mut v = h.valencies();
        v.sort();
        assert_eq!(v, vec![2, 2, 4]);
    }

    #[test]
    fn wreath_with_degenerate_factor() {
        let x = tensor_product(&trivial_scheme(2), &trivial_scheme(3)).unwrap();
        let w = wreath_product(&x, &trivial_scheme(1)).unwrap();
        assert_eq!(w.matrix(), x.matrix());
    }

    #[test]
    fn hamming_is_subtensor() {
        let h = tensor_product(&trivial_scheme(3), &trivial_scheme(3)).unwrap();
        let ps = parabolics(&h).unwrap();
        assert!(is_subtensor(&h, &ps[1], &ps[2]));
        assert!(!is_subtensor(&h, &ps[1], &ps[1]));
    }

    #[test]
    fn wreath_is_not_subtensor() {
        let w = wreath_product(&trivial_scheme(3), &trivial_scheme(3)).unwrap();
        let ps = parabolics(&w).unwrap();
        assert_eq!(ps.len(), 3);
        assert!(!is_subtensor(&w, &ps[1], &ps[1]));
    }
}
