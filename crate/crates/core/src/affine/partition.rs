use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Largest label count representable in the one-character-per-label text form.
pub const MAX_LABELS: usize = 36;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("'{0}' is not a canonical restricted growth string")]
    NonCanonicalPartition(String),
    #[error("partition has {found} labels, expected {expected}")]
    WrongLength { expected: usize, found: usize },
    #[error("label count {0} is outside 1..={MAX_LABELS}")]
    UnsupportedSize(usize),
}

/// A set partition of the labels `0..n`, stored as its canonical restricted
/// growth string: label `i` lies in block `rgs[i]`, and blocks are numbered
/// by first occurrence.
///
/// For slopes the labels are `(0, 1, ..., p-1, inf)`. The text form writes
/// one character per label, `0-9` then `a-z`, so `"0012"` at `p = 3` means
/// the blocks `{0,1}`, `{2}`, `{inf}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SlopePartition {
    rgs: Vec<u8>,
}

fn digit(b: u8) -> char {
    char::from_digit(b as u32, 36).expect("block index below 36")
}

impl SlopePartition {
    pub fn from_rgs(rgs: Vec<u8>) -> Result<Self, PartitionError> {
        if rgs.is_empty() || rgs.len() > MAX_LABELS {
            return Err(PartitionError::UnsupportedSize(rgs.len()));
        }
        let mut next = 0u8;
        for &b in &rgs {
            if b > next {
                return Err(PartitionError::NonCanonicalPartition(
                    rgs.iter().map(|&b| digit(b.min(35))).collect(),
                ));
            }
            if b == next {
                next += 1;
            }
        }
        Ok(SlopePartition { rgs })
    }

    /// Canonical partition from an arbitrary block labelling of `0..n`.
    pub fn from_labels<L: PartialEq>(labels: &[L]) -> Result<Self, PartitionError> {
        let mut firsts: Vec<&L> = Vec::new();
        let rgs = labels
            .iter()
            .map(|l| match firsts.iter().position(|f| *f == l) {
                Some(i) => i as u8,
                None => {
                    firsts.push(l);
                    (firsts.len() - 1) as u8
                }
            })
            .collect();
        SlopePartition::from_rgs(rgs)
    }

    /// Partition whose blocks are the given disjoint covering sets.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self, PartitionError> {
        let mut label = vec![usize::MAX; n];
        for (i, block) in blocks.iter().enumerate() {
            for &x in block {
                if x >= n || label[x] != usize::MAX {
                    return Err(PartitionError::NonCanonicalPartition(format!("{blocks:?}")));
                }
                label[x] = i;
            }
        }
        if label.contains(&usize::MAX) {
            return Err(PartitionError::NonCanonicalPartition(format!("{blocks:?}")));
        }
        SlopePartition::from_labels(&label)
    }

    /// Parses the text form and checks it has `expected_len` labels.
    pub fn parse_for(text: &str, expected_len: usize) -> Result<Self, PartitionError> {
        let part: SlopePartition = text.parse()?;
        if part.len() != expected_len {
            return Err(PartitionError::WrongLength {
                expected: expected_len,
                found: part.len(),
            });
        }
        Ok(part)
    }

    /// Every label in its own block.
    pub fn discrete(n: usize) -> Self {
        SlopePartition::from_rgs((0..n as u8).collect()).expect("canonical")
    }

    pub fn one_block(n: usize) -> Self {
        SlopePartition::from_rgs(vec![0; n]).expect("canonical")
    }

    pub fn len(&self) -> usize {
        self.rgs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rgs.is_empty()
    }

    pub fn rgs(&self) -> &[u8] {
        &self.rgs
    }

    #[inline]
    pub fn block_of(&self, label: usize) -> usize {
        self.rgs[label] as usize
    }

    pub fn num_blocks(&self) -> usize {
        self.rgs.iter().copied().max().map_or(0, |m| m as usize + 1)
    }

    /// Blocks in canonical order, each ascending.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.num_blocks()];
        for (i, &b) in self.rgs.iter().enumerate() {
            blocks[b as usize].push(i);
        }
        blocks
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.num_blocks()];
        for &b in &self.rgs {
            sizes[b as usize] += 1;
        }
        sizes
    }

    /// Every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &SlopePartition) -> bool {
        if self.len() != coarser.len() {
            return false;
        }
        let mut parent = vec![usize::MAX; self.num_blocks()];
        for i in 0..self.len() {
            let b = self.block_of(i);
            let c = coarser.block_of(i);
            if parent[b] == usize::MAX {
                parent[b] = c;
            } else if parent[b] != c {
                return false;
            }
        }
        true
    }

    pub fn to_text(&self) -> String {
        self.rgs.iter().map(|&b| digit(b)).collect()
    }
}

impl fmt::Display for SlopePartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for SlopePartition {
    type Err = PartitionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let rgs = s
            .chars()
            .map(|c| c.to_digit(36).map(|d| d as u8))
            .collect::<Option<Vec<u8>>>()
            .ok_or_else(|| PartitionError::NonCanonicalPartition(s.to_string()))?;
        if s.chars().any(|c| c.is_ascii_uppercase()) {
            return Err(PartitionError::NonCanonicalPartition(s.to_string()));
        }
        SlopePartition::from_rgs(rgs).map_err(|e| match e {
            PartitionError::NonCanonicalPartition(_) => {
                PartitionError::NonCanonicalPartition(s.to_string())
            }
            other => other,
        })
    }
}

impl Serialize for SlopePartition {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_text())
    }
}

impl<'de> Deserialize<'de> for SlopePartition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Iterator over all set partitions of `n` labels in lexicographic order of
/// restricted growth strings.
#[derive(Debug, Clone)]
pub struct PartitionsIter {
    current: Option<Vec<u8>>,
}

pub fn partitions_iter(n: usize) -> Result<PartitionsIter, PartitionError> {
    if n == 0 || n > MAX_LABELS {
        return Err(PartitionError::UnsupportedSize(n));
    }
    Ok(PartitionsIter {
        current: Some(vec![0; n]),
    })
}

impl Iterator for PartitionsIter {
    type Item = SlopePartition;

    fn next(&mut self) -> Option<SlopePartition> {
        let cur = self.current.take()?;
        let out = SlopePartition { rgs: cur.clone() };
        // prefix maxima: an entry may grow up to 1 + max of the entries before it
        let mut prefix_max = vec![0u8; cur.len()];
        for i in 1..cur.len() {
            prefix_max[i] = prefix_max[i - 1].max(cur[i - 1]);
        }
        let mut next = cur;
        for i in (1..next.len()).rev() {
            if next[i] <= prefix_max[i] {
                next[i] += 1;
                for x in next.iter_mut().skip(i + 1) {
                    *x = 0;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}
