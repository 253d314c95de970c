//! Association schemes given by color matrices: axiom verification,
//! intersection numbers, parabolics, quotients and restrictions, wreath
//! and tensor products, algebraic automorphisms and algebraic fusions.
//!
//! A scheme on `n` points is an `n x n` matrix of colors `0..rank` where
//! color `0` is exactly the diagonal. The intersection number
//! `c(r, s, t)` counts the points `g` with `cell(a, g) = r` and
//! `cell(g, b) = s` for any pair `(a, b)` of color `t`.

mod algebraic;
mod parabolic;
mod products;
mod serial;

use thiserror::Error;

pub use algebraic::{
    algebraic_automorphisms, algebraic_fusion, is_algebraic_map, AlgebraicFusion, AlgebraicMap,
};
pub use parabolic::{is_primitive, parabolics, quotient, restriction, ParabolicSet};
pub use products::{is_subtensor, tensor_product, trivial_scheme, wreath_product};
pub use serial::SCHEME_FILE_MAGIC;

pub type Color = u16;

/// Largest rank accepted for subset-based operations (color masks are `u64`).
pub const MAX_MASK_RANK: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchemeError {
    #[error("invalid color matrix: {0}")]
    InvalidMatrix(String),
    #[error("the transpose of color {color} is not a single color")]
    NotStarClosed { color: usize },
    #[error(
        "c({r},{s},{t}) differs between pairs {first:?} and {second:?} of color {t}"
    )]
    InconsistentIntersection {
        r: usize,
        s: usize,
        t: usize,
        first: (usize, usize),
        second: (usize, usize),
    },
    #[error("rank {rank} exceeds the supported maximum {max}")]
    RankTooLarge { rank: usize, max: usize },
    #[error("color set {0:?} is not a parabolic")]
    NotParabolic(Vec<usize>),
    #[error("parabolic classes have unequal sizes")]
    NonHomogeneous,
    #[error("color permutation {0:?} is not an algebraic automorphism")]
    NotAlgebraic(Vec<usize>),
    #[error("search exceeded its budget of {0}")]
    BudgetExceeded(usize),
    #[error("malformed scheme file: {0}")]
    Malformed(String),
}

/// A partition of the ordered pairs of `0..n` into colors `0..rank`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ColorMatrix {
    n: usize,
    rank: usize,
    cells: Vec<Color>,
}

impl ColorMatrix {
    /// Checks: diagonal cells are 0, off-diagonal cells are nonzero, every
    /// color below the rank occurs.
    pub fn new(n: usize, cells: Vec<Color>) -> Result<Self, SchemeError> {
        if cells.len() != n * n {
            return Err(SchemeError::InvalidMatrix(format!(
                "expected {} cells, got {}",
                n * n,
                cells.len()
            )));
        }
        let rank = cells.iter().copied().max().map_or(1, |m| m as usize + 1);
        let mut seen = vec![false; rank];
        for a in 0..n {
            for b in 0..n {
                let c = cells[a * n + b];
                if (a == b) != (c == 0) {
                    return Err(SchemeError::InvalidMatrix(format!(
                        "cell ({a},{b}) has color {c}; color 0 must be exactly the diagonal"
                    )));
                }
                seen[c as usize] = true;
            }
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(SchemeError::InvalidMatrix(format!("color {missing} does not occur")));
        }
        Ok(ColorMatrix { n, rank, cells })
    }

    /// Builds a matrix from arbitrary labels, renumbering colors by first
    /// occurrence in row-major order. The diagonal must carry labels not
    /// used off the diagonal; all diagonal labels collapse to color 0.
    pub fn from_labels<L: Eq + std::hash::Hash + Clone>(
        n: usize,
        mut label: impl FnMut(usize, usize) -> L,
    ) -> Result<Self, SchemeError> {
        use std::collections::HashMap;
        let mut diag_labels = std::collections::HashSet::new();
        for a in 0..n {
            diag_labels.insert(label(a, a));
        }
        let mut ids: HashMap<L, Color> = HashMap::new();
        let mut next: usize = 1;
        let mut cells = vec![0 as Color; n * n];
        for a in 0..n {
            for b in 0..n {
                if a == b {
                    continue;
                }
                let l = label(a, b);
                if diag_labels.contains(&l) {
                    return Err(SchemeError::InvalidMatrix(
                        "an off-diagonal pair shares a label with the diagonal".into(),
                    ));
                }
                let id = *ids.entry(l).or_insert_with(|| {
                    let id = next;
                    next += 1;
                    id as Color
                });
                cells[a * n + b] = id;
            }
        }
        if next > Color::MAX as usize {
            return Err(SchemeError::RankTooLarge {
                rank: next,
                max: Color::MAX as usize,
            });
        }
        ColorMatrix::new(n, cells)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.rank
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> usize {
        self.cells[a * self.n + b] as usize
    }

    #[inline]
    pub fn row(&self, a: usize) -> &[Color] {
        &self.cells[a * self.n..(a + 1) * self.n]
    }

    pub fn cells(&self) -> &[Color] {
        &self.cells
    }

    /// Merges colors: `class[c]` is the class label of color `c`. New colors
    /// are numbered by the smallest original color of each class; the
    /// diagonal must stay a class of its own.
    pub fn merge(&self, class: &[usize]) -> Result<ColorMatrix, SchemeError> {
        if class.len() != self.rank {
            return Err(SchemeError::InvalidMatrix("merge map has wrong length".into()));
        }
        if (1..self.rank).any(|c| class[c] == class[0]) {
            return Err(SchemeError::InvalidMatrix(
                "merge would join the diagonal with another color".into(),
            ));
        }
        let mut new_id = vec![usize::MAX; self.rank];
        let mut label_id = std::collections::HashMap::new();
        for c in 0..self.rank {
            let next = label_id.len();
            new_id[c] = *label_id.entry(class[c]).or_insert(next);
        }
        let cells = self.cells.iter().map(|&c| new_id[c as usize] as Color).collect();
        ColorMatrix::new(self.n, cells)
    }

    /// The matrix with points renamed: point `x` of `self` becomes `perm[x]`.
    pub fn relabel_points(&self, perm: &[usize]) -> ColorMatrix {
        let n = self.n;
        let mut cells = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                cells[perm[a] * n + perm[b]] = self.cells[a * n + b];
            }
        }
        ColorMatrix {
            n,
            rank: self.rank,
            cells,
        }
    }

    /// Points `b` with `cell(a, b) = color`.
    pub fn neighbors(&self, a: usize, color: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(a)
            .iter()
            .enumerate()
            .filter(move |(_, &c)| c as usize == color)
            .map(|(b, _)| b)
    }
}

/// A verified association scheme: color matrix, transposition map and the
/// dense intersection tensor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scheme {
    matrix: ColorMatrix,
    star: Vec<usize>,
    tensor: Vec<u32>,
}

/// Valency and indistinguishing number per color.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationStats {
    /// `valency[s] = c(s, s*, 0)`; index 0 is the diagonal (valency 1).
    pub valency: Vec<u32>,
    /// `indistinguishing[s] = sum_r c(r, r*, s)`.
    pub indistinguishing: Vec<u32>,
}

/// Verifies the scheme axioms and computes the intersection tensor.
pub fn verify_scheme(m: ColorMatrix) -> Result<Scheme, SchemeError> {
    let n = m.n;
    let r = m.rank;

    let mut star = vec![usize::MAX; r];
    for a in 0..n {
        for b in 0..n {
            let s = m.get(a, b);
            let st = m.get(b, a);
            if star[s] == usize::MAX {
                star[s] = st;
            } else if star[s] != st {
                return Err(SchemeError::NotStarClosed { color: s });
            }
        }
    }

    let mut tensor = vec![0u32; r * r * r];
    let mut reference: Vec<Option<(usize, usize)>> = vec![None; r];
    let mut counts = vec![0u32; r * r];
    // Column-major copy so that cell(g, b) reads contiguously.
    let mut transposed = vec![0 as Color; n * n];
    for a in 0..n {
        for b in 0..n {
            transposed[b * n + a] = m.cells[a * n + b];
        }
    }
    for a in 0..n {
        let row_a = m.row(a);
        for b in 0..n {
            let t = row_a[b] as usize;
            let col_b = &transposed[b * n..(b + 1) * n];
            counts.iter_mut().for_each(|c| *c = 0);
            for g in 0..n {
                counts[row_a[g] as usize * r + col_b[g] as usize] += 1;
            }
            match reference[t] {
                None => {
                    reference[t] = Some((a, b));
                    for rs in 0..r * r {
                        tensor[rs * r + t] = counts[rs];
                    }
                }
                Some(first) => {
                    for rs in 0..r * r {
                        if tensor[rs * r + t] != counts[rs] {
                            return Err(SchemeError::InconsistentIntersection {
                                r: rs / r,
                                s: rs % r,
                                t,
                                first,
                                second: (a, b),
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(Scheme {
        matrix: m,
        star,
        tensor,
    })
}

impl Scheme {
    pub fn matrix(&self) -> &ColorMatrix {
        &self.matrix
    }

    pub fn n(&self) -> usize {
        self.matrix.n
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank
    }

    pub fn star(&self, s: usize) -> usize {
        self.star[s]
    }

    pub fn star_map(&self) -> &[usize] {
        &self.star
    }

    #[inline]
    pub fn c(&self, r: usize, s: usize, t: usize) -> u32 {
        let k = self.matrix.rank;
        self.tensor[(r * k + s) * k + t]
    }

    pub fn tensor(&self) -> &[u32] {
        &self.tensor
    }

    pub fn valency(&self, s: usize) -> u32 {
        self.c(s, self.star[s], 0)
    }

    /// Nonzero color valencies in color order.
    pub fn valencies(&self) -> Vec<u32> {
        (1..self.rank()).map(|s| self.valency(s)).collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.rank() == 2
    }

    pub fn is_symmetric(&self) -> bool {
        self.star.iter().enumerate().all(|(s, &t)| s == t)
    }

    /// Counts `|{g : cell(a,g) = r, cell(g,b) = s}|` directly.
    pub fn count_directly(&self, r: usize, s: usize, a: usize, b: usize) -> u32 {
        (0..self.n())
            .filter(|&g| self.matrix.get(a, g) == r && self.matrix.get(g, b) == s)
            .count() as u32
    }
}

pub fn relation_stats(x: &Scheme) -> RelationStats {
    let r = x.rank();
    let valency = (0..r).map(|s| x.valency(s)).collect();
    let indistinguishing = (0..r)
        .map(|s| (0..r).map(|q| x.c(q, x.star(q), s)).sum())
        .collect();
    RelationStats {
        valency,
        indistinguishing,
    }
}

/// All nonzero colors share one valency `k` with `c(s) = k - 1`.
pub fn is_pseudocyclic(x: &Scheme) -> bool {
    let stats = relation_stats(x);
    let Some(&k) = stats.valency.get(1) else {
        return true;
    };
    (1..x.rank()).all(|s| stats.valency[s] == k && stats.indistinguishing[s] + 1 == k)
}
