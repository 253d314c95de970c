//! The scheme of the Galois affine plane AG(2,p) and its fusions.
//!
//! Points of the plane are the pairs `(x, y)` over F_p, indexed row-major
//! as `x * p + y`. The color of a pair of distinct points is `1 + slope`
//! where the slope index runs over `(0, 1, ..., p-1, inf)`; `inf` is the
//! vertical direction and has index `p`. A fusion is described by a
//! [`SlopePartition`] of those `p + 1` labels: its block `b` becomes color
//! `b + 1`.

mod partition;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::geometry::{
    check_prime, slope_index, slope_permutation, GeometryError, PglElement, DEFAULT_PRIME_BOUND,
};
use crate::perm::{Perm, PermGroup};
use crate::scheme::{verify_scheme, Color, ColorMatrix, Scheme, SchemeError};

pub use partition::{partitions_iter, PartitionError, PartitionsIter, SlopePartition, MAX_LABELS};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AffineError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    /// A slope fusion failed the scheme axioms. Every coarsening of the
    /// affine scheme is a scheme, so this signals a bug.
    #[error("fusion {partition} failed scheme verification: {source}")]
    FusionNotScheme {
        partition: String,
        source: SchemeError,
    },
}

/// Display name of a slope label.
pub fn slope_label(slope: usize, p: u32) -> String {
    if slope == p as usize {
        "inf".to_string()
    } else {
        slope.to_string()
    }
}

/// Coordinates of a point index.
pub fn point_coords(point: usize, p: u32) -> (u32, u32) {
    ((point / p as usize) as u32, (point % p as usize) as u32)
}

/// Slope index of the line through two distinct points.
pub fn slope_between(a: usize, b: usize, p: u32) -> usize {
    let (x1, y1) = point_coords(a, p);
    let (x2, y2) = point_coords(b, p);
    slope_index((x2 + p - x1) % p, (y2 + p - y1) % p, p)
}

fn slope_matrix(p: u32, color_of_slope: impl Fn(usize) -> Color) -> ColorMatrix {
    let n = (p * p) as usize;
    let mut cells = vec![0 as Color; n * n];
    for a in 0..n {
        for b in 0..n {
            if a != b {
                cells[a * n + b] = color_of_slope(slope_between(a, b, p));
            }
        }
    }
    ColorMatrix::new(n, cells).expect("every slope occurs")
}

/// The scheme X_A of AG(2,p): degree `p^2`, rank `p + 2`, color `1 + slope`.
pub fn build_affine_scheme(p: u32) -> Result<Scheme, AffineError> {
    check_prime(p, DEFAULT_PRIME_BOUND)?;
    let m = slope_matrix(p, |s| (s + 1) as Color);
    Ok(verify_scheme(m)?)
}

/// A fusion of X_A with its Lambda set.
#[derive(Debug, Clone)]
pub struct FusionRecord {
    pub p: u32,
    pub partition: SlopePartition,
    pub scheme: Scheme,
    /// Lambda(X) = { valency / (p - 1) } over nonzero colors: the block sizes.
    pub lambda: BTreeSet<usize>,
    /// Nonzero valencies, sorted ascending.
    pub valencies: Vec<u32>,
}

/// Builds the fusion of X_A along `partition` and re-verifies the axioms.
pub fn fuse(p: u32, partition: &SlopePartition) -> Result<FusionRecord, AffineError> {
    check_prime(p, DEFAULT_PRIME_BOUND)?;
    if partition.len() != p as usize + 1 {
        return Err(PartitionError::WrongLength {
            expected: p as usize + 1,
            found: partition.len(),
        }
        .into());
    }
    let m = slope_matrix(p, |s| (partition.block_of(s) + 1) as Color);
    let scheme = verify_scheme(m).map_err(|source| AffineError::FusionNotScheme {
        partition: partition.to_text(),
        source,
    })?;
    let sizes = partition.block_sizes();
    for (b, &size) in sizes.iter().enumerate() {
        let expected = size as u32 * (p - 1);
        if scheme.valency(b + 1) != expected {
            return Err(AffineError::FusionNotScheme {
                partition: partition.to_text(),
                source: SchemeError::InvalidMatrix(format!(
                    "block {b} has valency {}, expected {expected}",
                    scheme.valency(b + 1)
                )),
            });
        }
    }
    let mut valencies = scheme.valencies();
    valencies.sort_unstable();
    Ok(FusionRecord {
        p,
        partition: partition.clone(),
        lambda: sizes.into_iter().collect(),
        valencies,
        scheme,
    })
}

/// Primitivity and pseudocyclicity read off the Lambda set alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LambdaCriteria {
    /// `1` is in Lambda.
    pub imprimitive: bool,
    /// Lambda has exactly one element.
    pub pseudocyclic: bool,
}

pub fn lambda_criteria(rec: &FusionRecord) -> LambdaCriteria {
    LambdaCriteria {
        imprimitive: rec.lambda.contains(&1),
        pseudocyclic: rec.lambda.len() == 1,
    }
}

/// The slope partition formed by the orbits of a group acting on the
/// projective line (point `i` is slope `i`).
pub fn partition_from_group(k: &PermGroup) -> SlopePartition {
    let orbits = k.orbits();
    SlopePartition::from_blocks(k.domain_size(), &orbits).expect("orbits partition the line")
}

/// The group induced on the `p + 2` colors of X_A by matrices acting on
/// slopes; color 0 is fixed.
pub fn induced_color_group(p: u32, generators: &[PglElement]) -> PermGroup {
    let r = p as usize + 2;
    let gens = generators
        .iter()
        .map(|g| {
            let sp = slope_permutation(g);
            let mut images = vec![0usize; r];
            for s in 0..=p as usize {
                images[s + 1] = sp.apply(s) + 1;
            }
            Perm::from_images(images).expect("slope permutation lifts")
        })
        .collect();
    PermGroup::from_generators(r, gens).expect("domain sizes agree")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::{is_pseudocyclic, relation_stats};

    #[test]
    fn affine_scheme_small() {
        let x = build_affine_scheme(3).unwrap();
        assert_eq!((x.n(), x.rank()), (9, 5));
        assert_eq!(x.valencies(), vec![2, 2, 2, 2]);
        assert!(x.is_symmetric());
        // (0,0) -> (1,1) lies on y = x
        assert_eq!(x.matrix().get(0, 4), 1 + 1);
        // (0,0) -> (0,1) is vertical
        assert_eq!(x.matrix().get(0, 1), 1 + 3);
    }

    #[test]
    fn affine_scheme_is_pseudocyclic() {
        let x = build_affine_scheme(5).unwrap();
        let stats = relation_stats(&x);
        assert!(stats.valency[1..].iter().all(|&v| v == 4));
        assert!(stats.indistinguishing[1..].iter().all(|&c| c == 3));
        assert!(is_pseudocyclic(&x));
    }

    #[test]
    fn rejects_even_and_large_primes() {
        assert!(build_affine_scheme(2).is_err());
        assert!(build_affine_scheme(4).is_err());
        assert!(build_affine_scheme(37).is_err());
    }

    #[test]
    fn fusion_examples() {
        let id = fuse(3, &SlopePartition::discrete(4)).unwrap();
        assert_eq!(id.scheme, build_affine_scheme(3).unwrap());
        assert_eq!(id.lambda, BTreeSet::from([1]));

        // blocks {0}, {1,2}, {inf}
        let h = fuse(3, &"0112".parse().unwrap()).unwrap();
        assert_eq!(h.scheme.rank(), 4);
        assert_eq!(h.valencies, vec![2, 2, 4]);
        assert_eq!(h.lambda, BTreeSet::from([1, 2]));

        let t = fuse(3, &SlopePartition::one_block(4)).unwrap();
        assert!(t.scheme.is_trivial());
        assert_eq!(t.lambda, BTreeSet::from([4]));
    }

    #[test]
    fn lambda_examples() {
        let c = |rgs: &str| lambda_criteria(&fuse(3, &rgs.parse().unwrap()).unwrap());
        assert_eq!(
            c("0123"),
            LambdaCriteria {
                imprimitive: true,
                pseudocyclic: true
            }
        );
        // {0,1}, {2,inf}
        assert_eq!(
            c("0011"),
            LambdaCriteria {
                imprimitive: false,
                pseudocyclic: true
            }
        );
        assert_eq!(
            c("0112"),
            LambdaCriteria {
                imprimitive: true,
                pseudocyclic: false
            }
        );
    }

    #[test]
    fn wrong_length_partition() {
        assert!(matches!(
            fuse(3, &SlopePartition::discrete(5)),
            Err(AffineError::Partition(PartitionError::WrongLength { .. }))
        ));
    }
}
