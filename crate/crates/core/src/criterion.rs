//! Criterion-set claims checked exhaustively over bounded spaces of forms.
//!
//! A [`SearchSpace`] fixes the rank and a cap on the diagonal of a reduced
//! Gram matrix. [`enumerate_classes`] lists one representative per isometry
//! class in that space, and the checks below scan those representatives.
//! Every verdict is relative to its space.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::decomposition::{indecomposable_summands, Decomposition};
use crate::embedding::{is_isometric, represents, Embedding};
use crate::enumeration::{min_dual_norm, min_norm, norm_counts, short_vectors_up_to};
use crate::error::{LatticeError, Result};
use crate::gram::{GramMatrix, IntMatrix};
use crate::hnf;
use crate::intops;
use crate::reduction::lll_reduce;

/// Finite set of pairwise non-isometric forms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormSet {
    members: Vec<GramMatrix>,
    description: String,
}

impl FormSet {
    pub fn new(members: Vec<GramMatrix>, description: impl Into<String>) -> Result<FormSet> {
        for i in 0..members.len() {
            for j in i + 1..members.len() {
                if is_isometric(&members[i], &members[j]).is_some() {
                    return Err(LatticeError::DuplicateMember(i, j));
                }
            }
        }
        Ok(FormSet { members, description: description.into() })
    }

    pub fn members(&self) -> &[GramMatrix] {
        &self.members
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// The set with member `i` removed.
    pub fn without(&self, i: usize) -> FormSet {
        let mut members = self.members.clone();
        members.remove(i);
        FormSet { members, description: format!("{} without member {i}", self.description) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSpace {
    pub rank: usize,
    pub max_diag: i64,
    pub max_det: Option<i64>,
}

impl SearchSpace {
    pub fn new(rank: usize, max_diag: i64) -> Result<SearchSpace> {
        if rank == 0 {
            return Err(LatticeError::InvalidSpace("rank must be at least 1".into()));
        }
        if max_diag < 1 {
            return Err(LatticeError::InvalidSpace("max_diag must be at least 1".into()));
        }
        Ok(SearchSpace { rank, max_diag, max_det: None })
    }

    pub fn with_max_det(mut self, max_det: i64) -> Result<SearchSpace> {
        if max_det < 1 {
            return Err(LatticeError::InvalidSpace("max_det must be at least 1".into()));
        }
        self.max_det = Some(max_det);
        Ok(self)
    }
}

impl fmt::Display for SearchSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rank {}, max_diag {}", self.rank, self.max_diag)?;
        if let Some(d) = self.max_det {
            write!(f, ", max_det {d}")?;
        }
        Ok(())
    }
}

/// Shard `index` of `count`. Classes are assigned by a hash of their
/// invariant fingerprint, so isometric candidates always land together.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shard {
    pub index: usize,
    pub count: usize,
}

impl Shard {
    pub const ALL: Shard = Shard { index: 0, count: 1 };

    pub fn new(index: usize, count: usize) -> Result<Shard> {
        if count == 0 || index >= count {
            return Err(LatticeError::InvalidSpace(format!("shard {index} of {count} does not exist")));
        }
        Ok(Shard { index, count })
    }

    fn contains(&self, fp: &Fingerprint) -> bool {
        self.count == 1 || (fp_hash(fp) % self.count as u64) as usize == self.index
    }
}

type Fingerprint = (BigInt, Vec<usize>);

fn fingerprint(g: &GramMatrix, up_to: i64) -> Fingerprint {
    (g.det(), norm_counts(g, up_to))
}

// FNV-1a, fixed so shard assignment is stable across builds
fn fp_hash(fp: &Fingerprint) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |bytes: &[u8]| {
        for &b in bytes {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    };
    eat(&fp.0.to_signed_bytes_le());
    for c in &fp.1 {
        eat(&(*c as u64).to_le_bytes());
    }
    h
}

/// A class representative and its position in the candidate order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassRep {
    pub ordinal: usize,
    pub gram: GramMatrix,
}

/// All candidate Gram matrices of the space, in canonical order: positive
/// definite, `g11 <= g22 <= ... <= max_diag`, `2|gij| <= min(gii, gjj)`, and
/// in each column the first nonzero entry above the diagonal is positive
/// (flipping a basis vector achieves this without touching earlier columns).
pub fn candidates(space: &SearchSpace) -> Vec<GramMatrix> {
    let n = space.rank;
    let mut m = vec![vec![0i64; n]; n];
    let mut out = Vec::new();
    fill_column(space, &mut m, 0, &mut out);
    out
}

fn fill_column(space: &SearchSpace, m: &mut [Vec<i64>], j: usize, out: &mut Vec<GramMatrix>) {
    let n = space.rank;
    if j == n {
        let g = GramMatrix::from_rows(m).expect("candidate is positive definite");
        if space.max_det.is_none_or(|d| g.det() <= BigInt::from(d)) {
            out.push(g);
        }
        return;
    }
    let lo = if j == 0 { 1 } else { m[j - 1][j - 1] };
    for d in lo..=space.max_diag {
        m[j][j] = d;
        fill_entry(space, m, j, 0, false, out);
    }
    m[j][j] = 0;
}

fn fill_entry(space: &SearchSpace, m: &mut [Vec<i64>], j: usize, i: usize, nonzero: bool, out: &mut Vec<GramMatrix>) {
    if i == j {
        let block: Vec<Vec<BigInt>> =
            (0..=j).map(|a| (0..=j).map(|b| BigInt::from(m[a][b])).collect()).collect();
        if intops::det_big(&block) > BigInt::from(0) {
            fill_column(space, m, j + 1, out);
        }
        return;
    }
    let bound = m[i][i] / 2;
    let lo = if nonzero { -bound } else { 0 };
    for v in lo..=bound {
        m[i][j] = v;
        m[j][i] = v;
        fill_entry(space, m, j, i + 1, nonzero || v != 0, out);
    }
    m[i][j] = 0;
    m[j][i] = 0;
}

/// One representative per isometry class of the space (restricted to a
/// shard), ordered by the position of the class's first candidate.
pub fn class_representatives(space: &SearchSpace, shard: Shard) -> Vec<ClassRep> {
    let cands = candidates(space);
    let prints: Vec<Fingerprint> = cands.par_iter().map(|g| fingerprint(g, space.max_diag)).collect();
    let mut buckets: BTreeMap<&Fingerprint, Vec<usize>> = BTreeMap::new();
    for (i, fp) in prints.iter().enumerate() {
        if shard.contains(fp) {
            buckets.entry(fp).or_default().push(i);
        }
    }
    let buckets: Vec<Vec<usize>> = buckets.into_values().collect();
    let mut reps: Vec<usize> = buckets
        .par_iter()
        .flat_map_iter(|idxs| {
            let mut keep: Vec<usize> = Vec::new();
            for &i in idxs {
                if !keep.iter().any(|&k| is_isometric(&cands[k], &cands[i]).is_some()) {
                    keep.push(i);
                }
            }
            keep
        })
        .collect();
    reps.sort_unstable();
    reps.into_iter().map(|i| ClassRep { ordinal: i, gram: cands[i].clone() }).collect()
}

pub fn enumerate_classes(space: &SearchSpace) -> Vec<GramMatrix> {
    class_representatives(space, Shard::ALL).into_iter().map(|c| c.gram).collect()
}

/// Embeddings of every member of `s` into `q`, or `None` if one is missing.
pub fn represent_all(q: &GramMatrix, s: &FormSet) -> Option<Vec<Embedding>> {
    s.members().iter().map(|l| represents(q, l)).collect()
}

pub fn represents_all(q: &GramMatrix, s: &FormSet) -> bool {
    s.members().iter().all(|l| represents(q, l).is_some())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    VerifiedWithinSpace,
    Counterexample,
}

/// A form universal for the candidate set that misses a target.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    /// Position of `q` in the candidate order of the space.
    pub ordinal: usize,
    pub q: GramMatrix,
    pub missing: GramMatrix,
    /// One embedding matrix per member of the candidate set, in order.
    pub certificates: Vec<IntMatrix>,
}

impl Counterexample {
    /// Re-check the certificates and the missing representation from scratch.
    pub fn verify(&self, s_prime: &FormSet) -> bool {
        self.certificates.len() == s_prime.len()
            && s_prime
                .members()
                .iter()
                .zip(&self.certificates)
                .all(|(l, map)| Embedding::new(l.clone(), self.q.clone(), map.clone()).is_ok())
            && represents(&self.q, &self.missing).is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionReport {
    pub verdict: Verdict,
    pub space: SearchSpace,
    pub shard: Shard,
    pub classes_checked: usize,
    pub counterexample: Option<Counterexample>,
}

impl CriterionReport {
    pub fn verified(&self) -> bool {
        self.verdict == Verdict::VerifiedWithinSpace
    }
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shard = if self.shard.count > 1 {
            format!(" (shard {} of {})", self.shard.index, self.shard.count)
        } else {
            String::new()
        };
        match &self.counterexample {
            None => writeln!(
                f,
                "verified-within-space: {} classes checked in {}{shard}",
                self.classes_checked, self.space
            ),
            Some(cx) => {
                writeln!(f, "counterexample in {}{shard} after {} classes", self.space, self.classes_checked)?;
                writeln!(f, "Q =\n{}", cx.q)?;
                writeln!(f, "does not represent\n{}", cx.missing)?;
                for (i, map) in cx.certificates.iter().enumerate() {
                    writeln!(f, "member {i} embeds via")?;
                    for row in map {
                        let row: Vec<String> = row.iter().map(ToString::to_string).collect();
                        writeln!(f, "  {}", row.join(" "))?;
                    }
                }
                Ok(())
            }
        }
    }
}

fn find_counterexample(q: &ClassRep, targets: &[GramMatrix], s_prime: &FormSet) -> Option<Counterexample> {
    let certs = represent_all(&q.gram, s_prime)?;
    let missing = targets.iter().find(|t| represents(&q.gram, t).is_none())?;
    Some(Counterexample {
        ordinal: q.ordinal,
        q: q.gram.clone(),
        missing: missing.clone(),
        certificates: certs.into_iter().map(|e| e.map).collect(),
    })
}

fn scan(targets: &[GramMatrix], s_prime: &FormSet, space: &SearchSpace, shard: Shard) -> CriterionReport {
    let classes = class_representatives(space, shard);
    let hit = classes
        .par_iter()
        .enumerate()
        .find_map_first(|(pos, q)| find_counterexample(q, targets, s_prime).map(|cx| (pos, cx)));
    match hit {
        Some((pos, cx)) => CriterionReport {
            verdict: Verdict::Counterexample,
            space: *space,
            shard,
            classes_checked: pos + 1,
            counterexample: Some(cx),
        },
        None => CriterionReport {
            verdict: Verdict::VerifiedWithinSpace,
            space: *space,
            shard,
            classes_checked: classes.len(),
            counterexample: None,
        },
    }
}

/// Does every `S'`-universal form of the space represent `a`? Each member of
/// `S'` must itself be represented by `a`.
pub fn check_criterion(a: &GramMatrix, s_prime: &FormSet, space: &SearchSpace) -> Result<CriterionReport> {
    check_criterion_sharded(a, s_prime, space, Shard::ALL)
}

pub fn check_criterion_sharded(
    a: &GramMatrix,
    s_prime: &FormSet,
    space: &SearchSpace,
    shard: Shard,
) -> Result<CriterionReport> {
    if let Some(index) = s_prime.members().iter().position(|l| represents(a, l).is_none()) {
        return Err(LatticeError::MemberNotInS { index });
    }
    Ok(scan(std::slice::from_ref(a), s_prime, space, shard))
}

/// Does every `S'`-universal form of the space represent every member of
/// `targets`? Each member of `S'` must be isometric to one of the targets.
pub fn check_family_criterion(targets: &FormSet, s_prime: &FormSet, space: &SearchSpace) -> Result<CriterionReport> {
    for (index, l) in s_prime.members().iter().enumerate() {
        if !targets.members().iter().any(|t| is_isometric(l, t).is_some()) {
            return Err(LatticeError::MemberNotInS { index });
        }
    }
    Ok(scan(targets.members(), s_prime, space, Shard::ALL))
}

/// Combine shard reports of one space: counts add up and the counterexample
/// earliest in candidate order wins.
pub fn merge_reports(reports: &[CriterionReport]) -> Option<CriterionReport> {
    let first = reports.first()?;
    let counterexample = reports.iter().filter_map(|r| r.counterexample.clone()).min_by_key(|cx| cx.ordinal);
    Some(CriterionReport {
        verdict: if counterexample.is_some() { Verdict::Counterexample } else { Verdict::VerifiedWithinSpace },
        space: first.space,
        shard: Shard::ALL,
        classes_checked: reports.iter().map(|r| r.classes_checked).sum(),
        counterexample,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "index")]
pub enum WitnessSource {
    /// Index into the provided witness list.
    Provided(usize),
    /// Candidate ordinal in the search space.
    Space(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub q: GramMatrix,
    pub source: WitnessSource,
    /// Embeddings of the remaining members, in order.
    pub certificates: Vec<IntMatrix>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Drop {
    pub dropped: usize,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinimalityReport {
    pub space: Option<SearchSpace>,
    pub drops: Vec<Drop>,
}

impl MinimalityReport {
    pub fn minimal(&self) -> bool {
        self.drops.iter().all(|d| d.witness.is_some())
    }
}

impl fmt::Display for MinimalityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.drops {
            match &d.witness {
                Some(w) => {
                    let from = match w.source {
                        WitnessSource::Provided(i) => format!("provided witness {i}"),
                        WitnessSource::Space(o) => format!("search space candidate {o}"),
                    };
                    writeln!(f, "drop member {}: witnessed by {from}", d.dropped)?;
                    writeln!(f, "{}", w.q)?;
                }
                None => writeln!(f, "drop member {}: no witness found", d.dropped)?,
            }
        }
        let verdict = if self.minimal() { "minimal" } else { "minimality not established" };
        match &self.space {
            Some(s) => writeln!(f, "{verdict} (witnesses searched in {s})"),
            None => writeln!(f, "{verdict}"),
        }
    }
}

fn witness_for(q: &GramMatrix, a: &GramMatrix, rest: &FormSet) -> Option<Vec<IntMatrix>> {
    let certs = represent_all(q, rest)?;
    represents(q, a).is_none().then(|| certs.into_iter().map(|e| e.map).collect())
}

/// For each member `L` of `S'`, look for a form that represents `S' \ {L}`
/// but not `a`: first among `witnesses`, then through the space.
pub fn check_minimality(
    a: &GramMatrix,
    s_prime: &FormSet,
    witnesses: &[GramMatrix],
    space: Option<&SearchSpace>,
) -> MinimalityReport {
    let mut classes: Option<Vec<ClassRep>> = None;
    let mut drops = Vec::new();
    for i in 0..s_prime.len() {
        let rest = s_prime.without(i);
        let mut found = witnesses.iter().enumerate().find_map(|(k, q)| {
            witness_for(q, a, &rest).map(|certificates| Witness {
                q: q.clone(),
                source: WitnessSource::Provided(k),
                certificates,
            })
        });
        if found.is_none() {
            if let Some(space) = space {
                let classes = classes.get_or_insert_with(|| class_representatives(space, Shard::ALL));
                found = classes.par_iter().find_map_first(|c| {
                    witness_for(&c.gram, a, &rest).map(|certificates| Witness {
                        q: c.gram.clone(),
                        source: WitnessSource::Space(c.ordinal),
                        certificates,
                    })
                });
            }
        }
        drops.push(Drop { dropped: i, witness: found });
    }
    MinimalityReport { space: space.copied(), drops }
}

/// Every norm-2 vector of `q` is orthogonal to all norm-1 vectors or is the
/// sum of two orthogonal norm-1 vectors.
pub fn check_norm2_lemma(q: &GramMatrix) -> bool {
    if q.rank() == 0 {
        return true;
    }
    let list = short_vectors_up_to(q, 2);
    let ones: Vec<Vec<i64>> = list
        .of_norm(1)
        .flat_map(|v| [v.coords.clone(), v.coords.iter().map(|c| -c).collect()])
        .collect();
    let ok = list.of_norm(2).all(|v| {
        let orthogonal = ones.iter().all(|u| q.inner(u, &v.coords) == 0);
        let split = ones.iter().any(|u1| {
            ones.iter().any(|u2| {
                q.inner(u1, u2) == 0 && u1.iter().zip(u2).zip(&v.coords).all(|((a, b), c)| a + b == *c)
            })
        });
        orthogonal || split
    });
    ok
}

fn ser_display<T: fmt::Display, S: Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Prop2Report {
    pub holds: bool,
    #[serde(serialize_with = "ser_display")]
    pub min_dual_norm: BigRational,
    pub generating_bound: i64,
}

impl fmt::Display for Prop2Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = if self.holds { "<" } else { ">=" };
        writeln!(
            f,
            "{}: generated by norms <= {} {rel} minimal dual norm {}",
            if self.holds { "holds" } else { "fails" },
            self.generating_bound,
            self.min_dual_norm
        )
    }
}

/// Smallest `b` such that vectors of norm `<= b` generate `g`.
pub fn minimal_generating_bound(g: &GramMatrix) -> Result<i64> {
    if g.rank() == 0 {
        return Ok(0);
    }
    let top = lll_reduce(g).gram.diag().into_iter().max().expect("nonzero rank");
    let list = short_vectors_up_to(g, top);
    for b in 1..=top {
        let coords: Vec<Vec<i64>> = list.vectors.iter().filter(|v| v.norm <= b).map(|v| v.coords.clone()).collect();
        if hnf::spans_full_lattice(&coords, g.rank()) {
            return Ok(b);
        }
    }
    Err(LatticeError::NotGenerated { bound: top })
}

/// `l_prime` is generated by vectors of norm smaller than the minimal norm
/// of the dual of `l`.
pub fn check_prop2_hypothesis(l: &GramMatrix, l_prime: &GramMatrix) -> Result<Prop2Report> {
    let generating_bound = minimal_generating_bound(l_prime)?;
    let min_dual_norm = min_dual_norm(l);
    let holds = BigRational::from_integer(BigInt::from(generating_bound)) < min_dual_norm;
    Ok(Prop2Report { holds, min_dual_norm, generating_bound })
}

/// A ground set of lattices and a family of subsets of it, given by indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartitionFamily {
    ground: FormSet,
    parts: Vec<Vec<usize>>,
}

impl PartitionFamily {
    pub fn new(ground: FormSet, parts: Vec<Vec<usize>>) -> Result<PartitionFamily> {
        for (k, p) in parts.iter().enumerate() {
            if p.is_empty() {
                return Err(LatticeError::InvalidFamily(format!("part {k} is empty")));
            }
            if let Some(&i) = p.iter().find(|&&i| i >= ground.len()) {
                return Err(LatticeError::InvalidFamily(format!("part {k} refers to member {i} of {}", ground.len())));
            }
        }
        Ok(PartitionFamily { ground, parts })
    }

    pub fn ground(&self) -> &FormSet {
        &self.ground
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Prop3Report {
    pub unimodular: Vec<bool>,
    /// `(i, j, coprime)` for every pair of ground members.
    pub coprime: Vec<(usize, usize, bool)>,
    pub covers: bool,
    /// Per part: the remaining parts no longer cover the ground set.
    pub minimal: Vec<bool>,
    /// Direct sum of each part, represented inside `a` by block inclusion.
    pub criterion_set: Vec<GramMatrix>,
    pub a: GramMatrix,
}

impl Prop3Report {
    pub fn passed(&self) -> bool {
        self.unimodular.iter().all(|&u| u)
            && self.coprime.iter().all(|c| c.2)
            && self.covers
            && self.minimal.iter().all(|&m| m)
    }
}

impl fmt::Display for Prop3Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = |b: bool| if b { "ok" } else { "FAILED" };
        for (i, u) in self.unimodular.iter().enumerate() {
            writeln!(f, "member {i} unimodular: {}", mark(*u))?;
        }
        for (i, j, c) in &self.coprime {
            writeln!(f, "members {i}, {j} coprime: {}", mark(*c))?;
        }
        writeln!(f, "parts cover the ground set: {}", mark(self.covers))?;
        for (k, m) in self.minimal.iter().enumerate() {
            writeln!(f, "part {k} is needed: {}", mark(*m))?;
        }
        let ranks: Vec<String> = self.criterion_set.iter().map(|g| format!("rank {} det {}", g.rank(), g.det())).collect();
        writeln!(f, "criterion set: [{}] for A of rank {}", ranks.join("; "), self.a.rank())?;
        writeln!(f, "{}", if self.passed() { "all checks passed" } else { "some checks failed" })
    }
}

/// Block inclusion of `⊕_{i in pick} blocks[i]` into `⊕ blocks`.
pub fn block_inclusion(blocks: &[GramMatrix], pick: &[usize]) -> Embedding {
    let offsets: Vec<usize> = blocks
        .iter()
        .scan(0, |acc, b| {
            let o = *acc;
            *acc += b.rank();
            Some(o)
        })
        .collect();
    let target = blocks.iter().fold(GramMatrix::empty(), |acc, b| acc.direct_sum(b));
    let source = pick.iter().fold(GramMatrix::empty(), |acc, &i| acc.direct_sum(&blocks[i]));
    let mut map = vec![vec![0i64; source.rank()]; target.rank()];
    let mut col = 0;
    for &i in pick {
        for k in 0..blocks[i].rank() {
            map[offsets[i] + k][col] = 1;
            col += 1;
        }
    }
    Embedding::new(source, target, map).expect("block inclusion preserves the form")
}

pub fn check_prop3(family: &PartitionFamily) -> Prop3Report {
    let ground = family.ground.members();
    let n = ground.len();
    let unimodular = ground.iter().map(|g| g.det() == BigInt::from(1)).collect();
    let decomps: Vec<Decomposition> = ground.par_iter().map(indecomposable_summands).collect();
    let mut coprime = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let shared = decomps[i]
                .summands
                .iter()
                .any(|a| decomps[j].summands.iter().any(|b| is_isometric(a, b).is_some()));
            coprime.push((i, j, !shared));
        }
    }
    let covered = |parts: &mut dyn Iterator<Item = &Vec<usize>>| {
        let mut seen = vec![false; n];
        for p in parts {
            for &i in p {
                seen[i] = true;
            }
        }
        seen.iter().all(|&s| s)
    };
    let covers = covered(&mut family.parts.iter());
    let minimal = (0..family.parts.len())
        .map(|k| !covered(&mut family.parts.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, p)| p)))
        .collect();
    let all: Vec<usize> = (0..n).collect();
    let a = block_inclusion(ground, &all).target;
    let criterion_set = family.parts.iter().map(|p| block_inclusion(ground, p).source).collect();
    Prop3Report { unimodular, coprime, covers, minimal, criterion_set, a }
}

/// A cheap reason why `q` cannot represent `l`, if there is one.
pub fn obstruction(q: &GramMatrix, l: &GramMatrix) -> Option<&'static str> {
    if l.rank() > q.rank() {
        return Some("rank");
    }
    if l.rank() == 0 {
        return None;
    }
    if l.rank() == q.rank() {
        let (quot, rem) = num_integer::Integer::div_rem(&l.det(), &q.det());
        if rem != BigInt::from(0) || num_integer::Roots::sqrt(&quot).pow(2) != quot {
            return Some("determinant");
        }
    }
    if min_norm(l) < min_norm(q) {
        return Some("norm");
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentFact {
    pub statement: String,
    pub holds: bool,
}

/// Checkable facts about `A = <1,1,2> ⊕ E8 ⊕ Λ23` and its two claimed
/// criterion sets `{A}` and `{<1,1>, <2,2,2> ⊕ E8, Λ23}`. Membership is
/// certified by explicit embeddings; each dropped-member witness is a sum of
/// the remaining members, and its failure to represent `A` is shown by a
/// rank or norm obstruction. Whether no other forms break minimality is
/// not checked.
pub fn mixed_example_facts() -> Vec<ComponentFact> {
    let lat = |s: &str| crate::expr::parse_expr(s).expect("catalog expression");
    let a3 = lat("diag(1,1,2)");
    let e8 = lat("E8");
    let l23 = lat("Lambda23");
    let b = lat("diag(1,1)");
    let c = lat("diag(2,2,2)");
    let blocks = [a3.clone(), e8.clone(), l23.clone()];
    let a_mixed = block_inclusion(&blocks, &[0, 1, 2]).target;
    let ce8 = c.direct_sum(&e8);
    let mut facts = Vec::new();
    let mut fact = |statement: String, holds: bool| facts.push(ComponentFact { statement, holds });

    fact(format!("A has rank 34 and determinant 8 (rank {}, det {})", a_mixed.rank(), a_mixed.det()), {
        a_mixed.rank() == 34 && a_mixed.det() == BigInt::from(8)
    });

    let first_two = block_inclusion(&blocks, &[0, 1]);
    let b_in_a = represents(&a3, &b).and_then(|e| block_inclusion(&blocks, &[0]).compose(&e).ok());
    fact("A represents <1,1> inside its <1,1,2> block".into(), b_in_a.is_some());
    let c_e8_in_a = represents(&a3, &c).and_then(|e| first_two.compose(&e.direct_sum(&Embedding::identity(&e8))).ok());
    fact("A represents <2,2,2> + E8 inside its <1,1,2> + E8 block".into(), c_e8_in_a.is_some());
    let l23_in_a = block_inclusion(&blocks, &[2]);
    fact("A represents Lambda23 as its last block".into(), l23_in_a.verify());

    let set2 = FormSet::new(vec![b.clone(), ce8.clone(), l23.clone()], "second set");
    fact("members of the second set are pairwise non-isometric".into(), set2.is_ok());

    let why = obstruction(&lat("Zn(1)"), &a_mixed);
    fact(
        format!("dropping A from {{A}}: <1> does not represent A ({} obstruction)", why.unwrap_or("no")),
        why.is_some(),
    );

    let members = [b, ce8, l23];
    for drop in 0..3 {
        let rest: Vec<GramMatrix> = (0..3).filter(|&i| i != drop).map(|i| members[i].clone()).collect();
        let w = rest[0].direct_sum(&rest[1]);
        let reps = (0..2).all(|k| block_inclusion(&rest, &[k]).verify());
        let why = obstruction(&w, &a_mixed);
        fact(
            format!(
                "dropping member {drop} of the second set: the sum of the other two (rank {}) represents both but not A ({} obstruction)",
                w.rank(),
                why.unwrap_or("no")
            ),
            reps && why.is_some(),
        );
    }
    facts
}
