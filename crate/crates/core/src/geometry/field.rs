use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::GeometryError;

/// Largest prime accepted by default at the library entry points.
pub const DEFAULT_PRIME_BOUND: u32 = 31;

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Validates an odd prime within `bound`.
pub fn check_prime(p: u32, bound: u32) -> Result<(), GeometryError> {
    if !is_prime(p) || p == 2 {
        return Err(GeometryError::NotOddPrime(p));
    }
    if p > bound {
        return Err(GeometryError::UnsupportedPrime { p, bound });
    }
    Ok(())
}

#[inline]
pub(crate) fn mod_inv(a: u32, p: u32) -> Option<u32> {
    let a = a % p;
    if a == 0 {
        return None;
    }
    // Fermat: a^(p-2)
    let mut result = 1u64;
    let mut base = a as u64;
    let mut e = p - 2;
    let m = p as u64;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    Some(result as u32)
}

/// Multiplicative order of `a` modulo `p`.
pub(crate) fn mult_order(a: u32, p: u32) -> u32 {
    let mut x = a % p;
    let mut k = 1;
    while x != 1 {
        x = x * a % p;
        k += 1;
    }
    k
}

/// An element of the prime field F_p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u32,
    modulus: u32,
}

impl Fp {
    pub fn new(value: i64, modulus: u32) -> Self {
        let m = modulus as i64;
        Fp {
            value: value.rem_euclid(m) as u32,
            modulus,
        }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn inv(self) -> Result<Fp, GeometryError> {
        mod_inv(self.value, self.modulus)
            .map(|value| Fp {
                value,
                modulus: self.modulus,
            })
            .ok_or(GeometryError::ZeroInverse)
    }
}

/// Inverse of a field element; errors on zero.
pub fn fp_inv(a: Fp) -> Result<Fp, GeometryError> {
    a.inv()
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.modulus, rhs.modulus);
        Fp {
            value: (self.value + rhs.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.modulus, rhs.modulus);
        Fp {
            value: (self.value + self.modulus - rhs.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.modulus, rhs.modulus);
        Fp {
            value: ((self.value as u64 * rhs.value as u64) % self.modulus as u64) as u32,
            modulus: self.modulus,
        }
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp {
            value: (self.modulus - self.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}
