//! Arithmetic over F_p, the projective line P^1(F_p), the group PGL(2,p)
//! acting by Mobius transformations, and its named subgroup families.

mod field;
mod pgl;
mod subgroups;

use thiserror::Error;

pub use field::{check_prime, fp_inv, is_prime, Fp, DEFAULT_PRIME_BOUND};
pub use pgl::{
    moebius_apply, pgl_canonical, pgl_generators, slope_permutation, Pgl, PglElement,
    ProjectivePoint,
};
pub(crate) use pgl::slope_index;
pub use subgroups::{
    family_instances, find_subgroup, orbit_partition, OrbitData, PglSubgroup, SubgroupSpec,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("{0} is not an odd prime")]
    NotOddPrime(u32),
    #[error("prime {p} exceeds the supported bound {bound}")]
    UnsupportedPrime { p: u32, bound: u32 },
    #[error("invalid subgroup spec '{0}'")]
    InvalidSpec(String),
}
