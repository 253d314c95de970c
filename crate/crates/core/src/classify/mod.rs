//! Classification of schurian fusions of the affine-plane scheme.
//!
//! Every fusion is sorted into one of four cases: (1) a wreath or subtensor
//! product of two trivial schemes of degree `p`, (2) a primitive
//! pseudocyclic scheme, (3) the orbit scheme of an `A4` or `A5` inside
//! PGL(2,p), or (4) an involutive fusion of a scheme from (1)-(3). Each
//! verdict carries a witness that [`verify_witness`] re-checks by direct
//! construction.

mod lattice;
mod shapes;
mod verify;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};
use std::time::Instant;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::affine::{
    fuse, partition_from_group, partitions_iter, AffineError, FusionRecord, SlopePartition,
};
use crate::aut::{automorphism_group_with_budget, is_schurian_with, AutError, AutGroup, DEFAULT_NODE_BUDGET};
use crate::geometry::{family_instances, GeometryError, Pgl, SubgroupSpec};
use crate::report::cache::AutCache;
use crate::scheme::{is_algebraic_map, is_primitive, is_pseudocyclic, SchemeError};

pub use lattice::{
    identify_subgroup, match_pgl_subgroup, SubgroupLattice, SubgroupMatch, LATTICE_PRIME_BOUND,
};
pub use verify::verify_witness;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error(transparent)]
    Affine(#[from] AffineError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("fusion {0} is not schurian")]
    NotSchurian(String),
    #[error("fusion {0} is schurian but matches no case")]
    UnclassifiableSchurian(String),
    #[error("witness for {partition} rejected: {reason}")]
    WitnessRejected { partition: String, reason: String },
    #[error("full sweeps are limited to p in {{3, 5, 7}}, got {0}")]
    SweepPrime(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Verdict {
    WreathOfTrivial,
    SubtensorOfTrivial,
    PrimitivePseudocyclic,
    ExceptionalA4,
    ExceptionalA5,
    InvolutiveOf(Box<Verdict>),
    NonSchurian,
    Unknown,
}

impl Verdict {
    /// Cases (1)-(3).
    pub fn is_basic(&self) -> bool {
        matches!(
            self,
            Verdict::WreathOfTrivial
                | Verdict::SubtensorOfTrivial
                | Verdict::PrimitivePseudocyclic
                | Verdict::ExceptionalA4
                | Verdict::ExceptionalA5
        )
    }

    /// A positive classification, cases (1)-(4).
    pub fn is_classified(&self) -> bool {
        self.is_basic() || matches!(self, Verdict::InvolutiveOf(_))
    }

    pub fn is_imprimitive_shape(&self) -> bool {
        matches!(self, Verdict::WreathOfTrivial | Verdict::SubtensorOfTrivial)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::WreathOfTrivial => f.write_str("WreathOfTrivial"),
            Verdict::SubtensorOfTrivial => f.write_str("SubtensorOfTrivial"),
            Verdict::PrimitivePseudocyclic => f.write_str("PrimitivePseudocyclic"),
            Verdict::ExceptionalA4 => f.write_str("ExceptionalA4"),
            Verdict::ExceptionalA5 => f.write_str("ExceptionalA5"),
            Verdict::InvolutiveOf(inner) => write!(f, "InvolutiveOf({inner})"),
            Verdict::NonSchurian => f.write_str("NonSchurian"),
            Verdict::Unknown => f.write_str("Unknown"),
        }
    }
}

impl FromStr for Verdict {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "WreathOfTrivial" => Verdict::WreathOfTrivial,
            "SubtensorOfTrivial" => Verdict::SubtensorOfTrivial,
            "PrimitivePseudocyclic" => Verdict::PrimitivePseudocyclic,
            "ExceptionalA4" => Verdict::ExceptionalA4,
            "ExceptionalA5" => Verdict::ExceptionalA5,
            "NonSchurian" => Verdict::NonSchurian,
            "Unknown" => Verdict::Unknown,
            _ => {
                let inner = s
                    .strip_prefix("InvolutiveOf(")
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| format!("unknown verdict '{s}'"))?;
                Verdict::InvolutiveOf(Box::new(inner.parse()?))
            }
        })
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Verdict {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        String::deserialize(deserializer)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Witness {
    None,
    /// Colors of the parabolic whose classes are the wreath blocks.
    Wreath { parabolic: Vec<usize> },
    /// Colors of the two parabolics forming the grid.
    Subtensor { first: Vec<usize>, second: Vec<usize> },
    Lambda { lambda: Vec<usize> },
    Exceptional {
        spec: SubgroupSpec,
        generators: Vec<[u32; 4]>,
    },
    /// The scheme is obtained from the fusion along `inner_partition` by
    /// merging each color with its image under `involution`.
    Involutive {
        inner_partition: SlopePartition,
        involution: Vec<usize>,
        inner_verdict: Verdict,
        inner_witness: Box<Witness>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flags {
    pub primitive: bool,
    pub pseudocyclic: bool,
    pub schurian: Option<bool>,
    pub aut_order: Option<BigUint>,
    /// Every basic case that applies, in precedence order.
    pub labels: Vec<Verdict>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationResult {
    pub p: u32,
    pub partition: SlopePartition,
    pub rank: usize,
    pub valencies: Vec<u32>,
    pub lambda: Vec<usize>,
    pub verdict: Verdict,
    pub witness: Witness,
    pub flags: Flags,
}

/// An inner fusion and a color involution whose merge gives the fusion
/// under study. The involution is the identity for the degenerate
/// presentation of a basic scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvolutivePresentation {
    pub inner: SlopePartition,
    pub involution: Vec<usize>,
    pub inner_verdict: Verdict,
    pub inner_witness: Witness,
}

impl InvolutivePresentation {
    pub fn is_degenerate(&self) -> bool {
        self.involution.iter().enumerate().all(|(i, &j)| i == j)
    }
}

type ExceptionalTable = Vec<(SlopePartition, Vec<[u32; 4]>)>;

/// Orbit partitions of all instances of `spec` with at least two orbits.
fn exceptional_partitions(p: u32, spec: SubgroupSpec) -> Result<Arc<ExceptionalTable>, GeometryError> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, SubgroupSpec), Arc<ExceptionalTable>>>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().expect("exceptional cache").get(&(p, spec)) {
        return Ok(t.clone());
    }
    let pgl = Pgl::new(p)?;
    let table: ExceptionalTable = family_instances(&pgl, spec)?
        .into_iter()
        .map(|sub| {
            (
                partition_from_group(&sub.group),
                sub.generators.iter().map(|g| g.entries()).collect(),
            )
        })
        .filter(|(part, _)| part.num_blocks() > 1)
        .collect();
    let table = Arc::new(table);
    cache
        .lock()
        .expect("exceptional cache")
        .insert((p, spec), table.clone());
    Ok(table)
}

/// Basic cases (1)-(3) that apply to a fusion, in precedence order:
/// wreath, subtensor, exceptional, primitive pseudocyclic.
fn basic_cases(rec: &FusionRecord) -> Result<Vec<(Verdict, Witness)>, ClassifyError> {
    let x = &rec.scheme;
    let p = rec.p as usize;
    let mut out = Vec::new();
    let primitive = is_primitive(x)?;
    if !primitive {
        if let Some(e) = shapes::find_wreath(x, p)? {
            out.push((
                Verdict::WreathOfTrivial,
                Witness::Wreath {
                    parabolic: nonzero(&e.colors),
                },
            ));
        }
        if let Some((e1, e2)) = shapes::find_subtensor(x, p)? {
            out.push((
                Verdict::SubtensorOfTrivial,
                Witness::Subtensor {
                    first: nonzero(&e1.colors),
                    second: nonzero(&e2.colors),
                },
            ));
        }
    }
    if !x.is_trivial() {
        for (spec, verdict) in [
            (SubgroupSpec::Alt4, Verdict::ExceptionalA4),
            (SubgroupSpec::Alt5, Verdict::ExceptionalA5),
        ] {
            let table = exceptional_partitions(rec.p, spec)?;
            if let Some((_, gens)) = table.iter().find(|(part, _)| *part == rec.partition) {
                out.push((
                    verdict,
                    Witness::Exceptional {
                        spec,
                        generators: gens.clone(),
                    },
                ));
            }
        }
    }
    if primitive && is_pseudocyclic(x) {
        out.push((
            Verdict::PrimitivePseudocyclic,
            Witness::Lambda {
                lambda: rec.lambda.iter().copied().collect(),
            },
        ));
    }
    Ok(out)
}

fn nonzero(colors: &[usize]) -> Vec<usize> {
    colors.iter().copied().filter(|&c| c != 0).collect()
}

/// Refinements of `part` splitting some blocks into two halves of equal
/// size, in canonical order. Unequal halves cannot be exchanged by an
/// algebraic automorphism since their valencies differ.
pub fn halving_refinements(part: &SlopePartition) -> Vec<SlopePartition> {
    let blocks = part.blocks();
    // per block: None, or the half containing the block's first label
    let mut options: Vec<Vec<Option<Vec<usize>>>> = Vec::new();
    for block in &blocks {
        let mut opts = vec![None];
        let m = block.len();
        if m % 2 == 0 {
            let rest = &block[1..];
            for mask in 0u32..(1 << rest.len()) {
                if mask.count_ones() as usize == m / 2 - 1 {
                    let mut half = vec![block[0]];
                    half.extend((0..rest.len()).filter(|&i| mask >> i & 1 == 1).map(|i| rest[i]));
                    opts.push(Some(half));
                }
            }
        }
        options.push(opts);
    }
    let mut out = Vec::new();
    let mut choice = vec![0usize; blocks.len()];
    loop {
        if choice.iter().any(|&c| c > 0) {
            let mut labels = vec![0usize; part.len()];
            for (b, block) in blocks.iter().enumerate() {
                for &s in block {
                    let second = match &options[b][choice[b]] {
                        Some(half) => !half.contains(&s),
                        None => false,
                    };
                    labels[s] = 2 * b + usize::from(second);
                }
            }
            out.push(SlopePartition::from_labels(&labels).expect("valid labels"));
        }
        let mut i = 0;
        while i < blocks.len() {
            choice[i] += 1;
            if choice[i] < options[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
        if i == blocks.len() {
            break;
        }
    }
    out.sort();
    out
}

/// The color map of the fine fusion exchanging, for each split block, its
/// two halves.
pub fn halving_involution(coarse: &SlopePartition, fine: &SlopePartition) -> Vec<usize> {
    let mut image: Vec<usize> = (0..=fine.num_blocks()).collect();
    let mut parts: Vec<Vec<usize>> = vec![Vec::new(); coarse.num_blocks()];
    for s in 0..fine.len() {
        let f = fine.block_of(s);
        let c = coarse.block_of(s);
        if !parts[c].contains(&f) {
            parts[c].push(f);
        }
    }
    for halves in parts {
        if let [a, b] = halves[..] {
            image[a + 1] = b + 1;
            image[b + 1] = a + 1;
        }
    }
    image
}

/// Runs the classification pipeline with a shared automorphism memo and an
/// optional on-disk cache.
#[derive(Debug)]
pub struct Classifier {
    budget: usize,
    disk: Option<AutCache>,
    memo: Mutex<HashMap<String, Result<Arc<AutGroup>, AutError>>>,
}

impl Default for Classifier {
    fn default() -> Self {
        Classifier::new()
    }
}

impl Classifier {
    pub fn new() -> Self {
        Classifier {
            budget: DEFAULT_NODE_BUDGET,
            disk: None,
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn with_cache(mut self, cache: AutCache) -> Self {
        self.disk = Some(cache);
        self
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn automorphisms(&self, x: &crate::scheme::Scheme) -> Result<Arc<AutGroup>, AutError> {
        let digest = x.digest().expect("fusions have small rank");
        if let Some(hit) = self.memo.lock().expect("memo").get(&digest) {
            return hit.clone();
        }
        let result = match self.disk.as_ref().and_then(|d| d.load(x, &digest)) {
            Some(g) => Ok(Arc::new(g)),
            None => {
                let computed = automorphism_group_with_budget(x, self.budget).map(Arc::new);
                if let (Ok(g), Some(disk)) = (&computed, &self.disk) {
                    // the cache is advisory; a failed write only costs time later
                    let _ = disk.store(&digest, g);
                }
                computed
            }
        };
        self.memo
            .lock()
            .expect("memo")
            .insert(digest, result.clone());
        result
    }

    pub fn classify(&self, p: u32, part: &SlopePartition) -> Result<ClassificationResult, ClassifyError> {
        let rec = fuse(p, part)?;
        let x = &rec.scheme;
        let mut result = ClassificationResult {
            p,
            partition: part.clone(),
            rank: x.rank(),
            valencies: rec.valencies.clone(),
            lambda: rec.lambda.iter().copied().collect(),
            verdict: Verdict::Unknown,
            witness: Witness::None,
            flags: Flags {
                primitive: is_primitive(x)?,
                pseudocyclic: is_pseudocyclic(x),
                schurian: None,
                aut_order: None,
                labels: Vec::new(),
            },
        };
        let aut = match self.automorphisms(x) {
            Ok(g) => g,
            Err(AutError::BudgetExceeded(_) | AutError::TooLarge { .. }) => return Ok(result),
            Err(e @ AutError::Unsound(_)) => {
                return Err(ClassifyError::WitnessRejected {
                    partition: part.to_text(),
                    reason: e.to_string(),
                })
            }
        };
        result.flags.aut_order = Some(aut.order().clone());
        let schurian = is_schurian_with(x, &aut);
        result.flags.schurian = Some(schurian);
        if !schurian {
            result.verdict = Verdict::NonSchurian;
            return Ok(result);
        }
        let cases = basic_cases(&rec)?;
        result.flags.labels = cases.iter().map(|(v, _)| v.clone()).collect();
        if let Some((verdict, witness)) = cases.into_iter().next() {
            result.verdict = verdict;
            result.witness = witness;
        } else if let Some(pres) = self.search_halvings(p, part)? {
            result.verdict = Verdict::InvolutiveOf(Box::new(pres.inner_verdict.clone()));
            result.witness = Witness::Involutive {
                inner_partition: pres.inner,
                involution: pres.involution,
                inner_verdict: pres.inner_verdict,
                inner_witness: Box::new(pres.inner_witness),
            };
        } else {
            return Err(ClassifyError::UnclassifiableSchurian(part.to_text()));
        }
        verify_witness(p, part, &result.verdict, &result.witness).map_err(|reason| {
            ClassifyError::WitnessRejected {
                partition: part.to_text(),
                reason,
            }
        })?;
        Ok(result)
    }

    /// First halving refinement whose fusion is schurian, falls into a basic
    /// case, and has the halving exchange as an algebraic automorphism.
    fn search_halvings(
        &self,
        p: u32,
        part: &SlopePartition,
    ) -> Result<Option<InvolutivePresentation>, ClassifyError> {
        for fine in halving_refinements(part) {
            let rec = fuse(p, &fine)?;
            let phi = halving_involution(part, &fine);
            if !is_algebraic_map(&rec.scheme, &phi) {
                continue;
            }
            let Ok(aut) = self.automorphisms(&rec.scheme) else {
                continue;
            };
            if !is_schurian_with(&rec.scheme, &aut) {
                continue;
            }
            if let Some((verdict, witness)) = basic_cases(&rec)?.into_iter().next() {
                return Ok(Some(InvolutivePresentation {
                    inner: fine,
                    involution: phi,
                    inner_verdict: verdict,
                    inner_witness: witness,
                }));
            }
        }
        Ok(None)
    }

    fn require_schurian(&self, p: u32, part: &SlopePartition) -> Result<FusionRecord, ClassifyError> {
        let rec = fuse(p, part)?;
        let schurian = self
            .automorphisms(&rec.scheme)
            .map(|g| is_schurian_with(&rec.scheme, &g))
            .unwrap_or(false);
        if !schurian {
            return Err(ClassifyError::NotSchurian(part.to_text()));
        }
        Ok(rec)
    }

    /// An involutive presentation of a schurian fusion. A fusion that is
    /// already basic is presented by itself with the identity map.
    pub fn find_involutive_presentation(
        &self,
        p: u32,
        part: &SlopePartition,
    ) -> Result<Option<InvolutivePresentation>, ClassifyError> {
        let rec = self.require_schurian(p, part)?;
        if let Some((verdict, witness)) = basic_cases(&rec)?.into_iter().next() {
            return Ok(Some(InvolutivePresentation {
                inner: part.clone(),
                involution: (0..rec.scheme.rank()).collect(),
                inner_verdict: verdict,
                inner_witness: witness,
            }));
        }
        self.search_halvings(p, part)
    }

    /// Like [`Classifier::find_involutive_presentation`] but never returns
    /// the degenerate presentation.
    pub fn find_proper_involutive_presentation(
        &self,
        p: u32,
        part: &SlopePartition,
    ) -> Result<Option<InvolutivePresentation>, ClassifyError> {
        self.require_schurian(p, part)?;
        self.search_halvings(p, part)
    }

    /// Classifies the given partitions, or all of them for `p` in {3, 5, 7},
    /// on `jobs` worker threads. Items come back sorted by partition.
    pub fn sweep(
        &self,
        p: u32,
        partitions: Option<Vec<SlopePartition>>,
        jobs: usize,
    ) -> Result<Vec<SweepItem>, ClassifyError> {
        let parts = match partitions {
            Some(list) => list,
            None => {
                if ![3, 5, 7].contains(&p) {
                    return Err(ClassifyError::SweepPrime(p));
                }
                partitions_iter(p as usize + 1)
                    .map_err(AffineError::from)?
                    .collect()
            }
        };
        let run = || -> Vec<SweepItem> {
            parts
                .par_iter()
                .map(|part| {
                    let start = Instant::now();
                    let result = self.classify(p, part);
                    SweepItem {
                        partition: part.clone(),
                        result,
                        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
                    }
                })
                .collect()
        };
        let mut items = match rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build() {
            Ok(pool) => pool.install(run),
            Err(_) => run(),
        };
        items.sort_by(|a, b| a.partition.cmp(&b.partition));
        Ok(items)
    }
}

#[derive(Debug, Clone)]
pub struct SweepItem {
    pub partition: SlopePartition,
    pub result: Result<ClassificationResult, ClassifyError>,
    pub elapsed_ms: f64,
}

/// Classifies one fusion with a fresh in-memory classifier.
pub fn classify(p: u32, part: &SlopePartition) -> Result<ClassificationResult, ClassifyError> {
    Classifier::new().classify(p, part)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(p: u32, rgs: &str) -> ClassificationResult {
        classify(p, &rgs.parse().unwrap()).unwrap()
    }

    #[test]
    fn small_examples() {
        assert_eq!(run(3, "0000").verdict, Verdict::PrimitivePseudocyclic);
        assert_eq!(run(3, "0123").verdict, Verdict::SubtensorOfTrivial);
        // blocks {0,1,2}, {inf}
        assert_eq!(run(3, "0001").verdict, Verdict::WreathOfTrivial);
    }

    #[test]
    fn hamming_scheme() {
        // blocks {0,inf}, {1,2}: at p = 3 the Hamming scheme is also pseudocyclic
        let r = run(3, "0110");
        assert_eq!(r.verdict, Verdict::PrimitivePseudocyclic);
        assert_eq!(r.flags.aut_order, Some(BigUint::from(72u32)));
        let pres = Classifier::new()
            .find_proper_involutive_presentation(3, &r.partition)
            .unwrap()
            .unwrap();
        assert_eq!(pres.inner_verdict, Verdict::SubtensorOfTrivial);
        assert!(!pres.is_degenerate());
    }

    #[test]
    fn verdict_text_round_trip() {
        let v = Verdict::InvolutiveOf(Box::new(Verdict::ExceptionalA4));
        assert_eq!(v.to_string().parse::<Verdict>().unwrap(), v);
        assert!("Involutive(".parse::<Verdict>().is_err());
    }

    #[test]
    fn halving_refinements_of_small_partition() {
        let part: SlopePartition = "0011".parse().unwrap();
        let texts: Vec<String> = halving_refinements(&part)
            .iter()
            .map(|p| p.to_text())
            .collect();
        assert_eq!(texts, vec!["0012", "0122", "0123"]);
        let phi = halving_involution(&part, &"0122".parse().unwrap());
        assert_eq!(phi, vec![0, 2, 1, 3]);
    }

    #[test]
    fn wrong_witness_is_rejected() {
        let r = run(3, "0123");
        let bogus = Witness::Wreath {
            parabolic: vec![1],
        };
        assert!(verify_witness(3, &r.partition, &Verdict::WreathOfTrivial, &bogus).is_err());
        assert!(verify_witness(3, &r.partition, &r.verdict, &r.witness).is_ok());
    }

    #[test]
    fn non_schurian_precondition() {
        // at p = 5 most fusions are not schurian; find one and check the search refuses it
        let c = Classifier::new();
        let part = partitions_iter(6)
            .unwrap()
            .find(|q| c.classify(5, q).unwrap().verdict == Verdict::NonSchurian)
            .unwrap();
        assert!(matches!(
            c.find_involutive_presentation(5, &part),
            Err(ClassifyError::NotSchurian(_))
        ));
    }
}
