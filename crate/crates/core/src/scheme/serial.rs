//! Canonical binary form of a scheme.
//!
//! ```text
//! offset        size      content
//! 0             4         magic "AFSS"
//! 4             4         format version, u32 little-endian (= 1)
//! 8             4         n (degree), u32 LE
//! 12            4         r (rank), u32 LE
//! 16            n*n       color matrix, row-major, one unsigned byte per cell
//! 16+n*n        r         star map, one byte per color
//! 16+n*n+r      4*r^3     intersection numbers c(a,b,t), u32 LE, index (a*r+b)*r+t
//! ```
//!
//! Rank is limited to 256 by the byte encoding. The SHA-256 of this form is
//! the scheme's cache key.

use sha2::{Digest, Sha256};

use super::{verify_scheme, Color, ColorMatrix, Scheme, SchemeError};

pub const SCHEME_FILE_MAGIC: &[u8; 4] = b"AFSS";
const VERSION: u32 = 1;

impl Scheme {
    pub fn to_bytes(&self) -> Result<Vec<u8>, SchemeError> {
        let (n, r) = (self.n(), self.rank());
        if r > 256 {
            return Err(SchemeError::RankTooLarge { rank: r, max: 256 });
        }
        let mut out = Vec::with_capacity(16 + n * n + r + 4 * r * r * r);
        out.extend_from_slice(SCHEME_FILE_MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&(n as u32).to_le_bytes());
        out.extend_from_slice(&(r as u32).to_le_bytes());
        out.extend(self.matrix().cells().iter().map(|&c| c as u8));
        out.extend(self.star_map().iter().map(|&s| s as u8));
        for &v in self.tensor() {
            out.extend_from_slice(&v.to_le_bytes());
        }
        Ok(out)
    }

    /// Parses the canonical form, re-verifies the axioms and checks that the
    /// stored star map and tensor agree with the recomputed ones.
    pub fn from_bytes(bytes: &[u8]) -> Result<Scheme, SchemeError> {
        let bad = |msg: &str| SchemeError::Malformed(msg.to_string());
        if bytes.len() < 16 || &bytes[..4] != SCHEME_FILE_MAGIC {
            return Err(bad("missing magic"));
        }
        let word = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().expect("4 bytes"));
        if word(4) != VERSION {
            return Err(bad("unsupported version"));
        }
        let n = word(8) as usize;
        let r = word(12) as usize;
        let expected = 16 + n * n + r + 4 * r * r * r;
        if bytes.len() != expected {
            return Err(bad("length does not match header"));
        }
        let cells: Vec<Color> = bytes[16..16 + n * n].iter().map(|&b| b as Color).collect();
        let scheme = verify_scheme(ColorMatrix::new(n, cells)?)?;
        if scheme.rank() != r {
            return Err(bad("rank does not match header"));
        }
        let star_off = 16 + n * n;
        let star_ok = (0..r).all(|s| bytes[star_off + s] as usize == scheme.star(s));
        let tensor_off = star_off + r;
        let tensor_ok = scheme
            .tensor()
            .iter()
            .enumerate()
            .all(|(i, &v)| word(tensor_off + 4 * i) == v);
        if !star_ok || !tensor_ok {
            return Err(bad("stored star map or tensor disagrees with the matrix"));
        }
        Ok(scheme)
    }

    /// Hex SHA-256 of [`Scheme::to_bytes`].
    pub fn digest(&self) -> Result<String, SchemeError> {
        Ok(hex::encode(Sha256::digest(self.to_bytes()?)))
    }
}
