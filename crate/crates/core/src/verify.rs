//! Independent checks of the bitrade property.
//!
//! Every check only visits the support `T0 ∪ T1` and its neighborhood: a
//! vertex whose ball misses the support sees zero words of either part and
//! satisfies every condition trivially. The `*_full` variants sweep the
//! whole graph and exist to cross-check that shortcut on small graphs.

use std::collections::{HashMap, HashSet};
use std::fmt;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::construct::{Bitrade, BitradeKind};
use crate::error::{param, Result};
use crate::hamming::{binomial, code_distance, Distance, Face, HammingParams, Word};

/// At most this many witnesses are kept per report.
pub const MAX_WITNESSES: usize = 10;

/// Default number of faces examined before the face check switches to sampling.
pub const DEFAULT_FACE_BUDGET: u64 = 1_000_000;

/// Largest graph the full-sweep verifiers accept.
pub const FULL_SWEEP_LIMIT: u64 = 3u64.pow(12);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    Definition,
    Eigen,
    Dist2Count,
    Delsarte,
    MinDist,
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Criterion::Definition => "definition",
            Criterion::Eigen => "eigen",
            Criterion::Dist2Count => "dist2",
            Criterion::Delsarte => "delsarte",
            Criterion::MinDist => "mindist",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Location {
    Vertex(Word),
    Face(Face),
    Global,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Vertex(w) => write!(f, "vertex {w}"),
            Location::Face(face) => write!(f, "{face}"),
            Location::Global => f.write_str("global"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub location: Location,
    pub detail: String,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.detail)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub criterion: Criterion,
    pub passed: bool,
    /// First failures in a deterministic order, capped at [`MAX_WITNESSES`].
    pub witnesses: Vec<Witness>,
    /// Total number of failures, including those not kept as witnesses.
    pub failures: usize,
    pub notes: Vec<String>,
}

impl VerificationReport {
    fn new(criterion: Criterion) -> Self {
        Self {
            criterion,
            passed: true,
            witnesses: Vec::new(),
            failures: 0,
            notes: Vec::new(),
        }
    }

    fn fail(&mut self, location: Location, detail: impl Into<String>) {
        self.passed = false;
        self.failures += 1;
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(Witness {
                location,
                detail: detail.into(),
            });
        }
    }

    fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    fn absorb(&mut self, other: VerificationReport) {
        for w in other.witnesses {
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(w);
            }
        }
        self.failures += other.failures;
        self.passed &= other.passed;
        self.notes.extend(other.notes);
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed {
            write!(f, "PASS {}", self.criterion)?;
        } else {
            write!(f, "FAIL {} ({} failures)", self.criterion, self.failures)?;
        }
        for note in &self.notes {
            write!(f, "\n  note: {note}")?;
        }
        for w in &self.witnesses {
            write!(f, "\n  witness {w}")?;
        }
        Ok(())
    }
}

/// `chi_T0 - chi_T1` stored on its support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedFunction {
    params: HammingParams,
    values: HashMap<Word, i8>,
}

impl SignedFunction {
    pub fn new(
        params: HammingParams,
        values: impl IntoIterator<Item = (Word, i8)>,
    ) -> Result<Self> {
        let mut map = HashMap::new();
        for (w, v) in values {
            if w.params() != params {
                return param(format!("word {w} does not belong to {params}"));
            }
            if v != 1 && v != -1 {
                return param(format!("value {v} at {w} is not ±1"));
            }
            if map.insert(w.clone(), v).is_some() {
                return param(format!("word {w} listed twice"));
            }
        }
        Ok(Self {
            params,
            values: map,
        })
    }

    /// A word in both parts cancels out and is left off the support.
    pub fn from_bitrade(b: &Bitrade) -> Self {
        let mut values = HashMap::new();
        for (w, part) in b.tagged_words() {
            let v: i8 = if part == 0 { 1 } else { -1 };
            let e = values.entry(w.clone()).or_insert(0i8);
            *e += v;
        }
        values.retain(|_, v| *v != 0);
        Self {
            params: b.params(),
            values,
        }
    }

    pub fn params(&self) -> HammingParams {
        self.params
    }

    pub fn value(&self, w: &Word) -> i64 {
        self.values.get(w).copied().unwrap_or(0) as i64
    }

    pub fn support_len(&self) -> usize {
        self.values.len()
    }

    /// Support in lexicographic order.
    pub fn support(&self) -> Vec<(&Word, i8)> {
        self.values
            .iter()
            .map(|(w, &v)| (w, v))
            .sorted_by(|a, b| a.0.cmp(b.0))
            .collect()
    }
}

fn merge_counts<K: std::hash::Hash + Eq, V: Copy + std::ops::AddAssign + Default>(
    mut a: HashMap<K, V>,
    b: HashMap<K, V>,
) -> HashMap<K, V> {
    if a.len() < b.len() {
        return merge_counts(b, a);
    }
    for (k, v) in b {
        *a.entry(k).or_default() += v;
    }
    a
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
struct PartCounts([u32; 2]);

impl std::ops::AddAssign for PartCounts {
    fn add_assign(&mut self, rhs: Self) {
        self.0[0] += rhs.0[0];
        self.0[1] += rhs.0[1];
    }
}

/// For every vertex hit, how many words of each part lie in its sphere
/// (or ball, with `include_center`).
fn neighborhood_counts(b: &Bitrade, include_center: bool) -> HashMap<Word, PartCounts> {
    let tagged: Vec<(&Word, usize)> = b.tagged_words().collect();
    tagged
        .par_iter()
        .fold(
            HashMap::new,
            |mut acc: HashMap<Word, PartCounts>, &(w, part)| {
                if include_center {
                    acc.entry(w.clone()).or_default().0[part] += 1;
                }
                for nb in w.neighbors() {
                    acc.entry(nb).or_default().0[part] += 1;
                }
                acc
            },
        )
        .reduce(HashMap::new, merge_counts)
}

fn overlap_check(b: &Bitrade, report: &mut VerificationReport) {
    for w in b.t0().iter().filter(|w| b.t1().contains(w)) {
        report.fail(Location::Vertex(w.clone()), "word lies in both parts");
    }
}

/// As [`neighborhood_counts`], keyed by lexicographic vertex index and
/// returned in index order.
fn indexed_counts(b: &Bitrade, include_center: bool) -> Vec<(u64, PartCounts)> {
    let params = b.params();
    let mut hits: Vec<(u64, usize)> = Vec::with_capacity(
        (b.t0().len() + b.t1().len()) * (params.sphere_size() + include_center as usize),
    );
    for (w, part) in b.tagged_words() {
        if include_center {
            hits.push((params.index_of(w), part));
        }
        hits.extend(params.neighbor_indices(w).map(|x| (x, part)));
    }
    hits.par_sort_unstable();
    hits.chunk_by(|a, b| a.0 == b.0)
        .map(|run| {
            let mut c = PartCounts::default();
            for &(_, part) in run {
                c.0[part] += 1;
            }
            (run[0].0, c)
        })
        .collect()
}

fn count_check(b: &Bitrade, include_center: bool) -> VerificationReport {
    let mut report = VerificationReport::new(Criterion::Definition);
    overlap_check(b, &mut report);
    let balanced = |c: &PartCounts| c.0[0] == c.0[1] && c.0[0] <= 1;
    // lexicographic order of words equals numeric order of indices
    let bad: Vec<(Word, PartCounts)> = if b.params().vertex_count().is_some() {
        indexed_counts(b, include_center)
            .into_iter()
            .filter(|(_, c)| !balanced(c))
            .map(|(x, c)| (b.params().word_at(x), c))
            .collect()
    } else {
        neighborhood_counts(b, include_center)
            .into_iter()
            .filter(|(_, c)| !balanced(c))
            .sorted_by(|a, b| a.0.cmp(&b.0))
            .collect()
    };
    let shape = if include_center { "ball" } else { "sphere" };
    for (x, c) in bad {
        report.fail(
            Location::Vertex(x),
            format!(
                "{shape} holds {} T0 and {} T1 words; expected 0/0 or 1/1",
                c.0[0], c.0[1]
            ),
        );
    }
    report
}

/// `|O(x) ∩ T0| = |O(x) ∩ T1| ∈ {0, 1}` for every vertex `x`.
pub fn verify_spherical(b: &Bitrade) -> VerificationReport {
    count_check(b, false)
}

/// `|B(x) ∩ T0| = |B(x) ∩ T1| ∈ {0, 1}` for every vertex `x`.
pub fn verify_perfect(b: &Bitrade) -> VerificationReport {
    count_check(b, true)
}

/// The defining condition for the bitrade's own kind.
pub fn verify_definition(b: &Bitrade) -> VerificationReport {
    match b.kind() {
        BitradeKind::Spherical => verify_spherical(b),
        BitradeKind::Perfect => verify_perfect(b),
    }
}

fn full_sweep(b: &Bitrade, include_center: bool) -> Result<VerificationReport> {
    let params = b.params();
    let count = params.enumerable()?;
    if count > FULL_SWEEP_LIMIT {
        return Err(crate::Error::Ceiling(format!(
            "full sweep over {params} exceeds {FULL_SWEEP_LIMIT} vertices"
        )));
    }
    let mut report = VerificationReport::new(Criterion::Definition);
    overlap_check(b, &mut report);
    let shape = if include_center { "ball" } else { "sphere" };
    for x in params.vertices()? {
        let mut c = [0usize; 2];
        let center = include_center.then(|| x.clone());
        for y in center.into_iter().chain(x.neighbors()) {
            c[0] += b.t0().contains(&y) as usize;
            c[1] += b.t1().contains(&y) as usize;
        }
        if !(c[0] == c[1] && c[0] <= 1) {
            report.fail(
                Location::Vertex(x),
                format!(
                    "{shape} holds {} T0 and {} T1 words; expected 0/0 or 1/1",
                    c[0], c[1]
                ),
            );
        }
    }
    report.note(format!("full sweep over {count} vertices"));
    Ok(report)
}

/// [`verify_spherical`] by sweeping every vertex of the graph.
pub fn verify_spherical_full(b: &Bitrade) -> Result<VerificationReport> {
    full_sweep(b, false)
}

/// [`verify_perfect`] by sweeping every vertex of the graph.
pub fn verify_perfect_full(b: &Bitrade) -> Result<VerificationReport> {
    full_sweep(b, true)
}

/// `lambda f(x) = sum_{y ~ x} f(y)` at every vertex of `supp f ∪ N(supp f)`.
pub fn eigen_check(f: &SignedFunction, lambda: i64) -> VerificationReport {
    let mut report = VerificationReport::new(Criterion::Eigen);
    if f.params.eigen_index(lambda).is_none() {
        report.note(format!(
            "{lambda} is not an eigenvalue of {} (eigenvalues {:?})",
            f.params,
            f.params.eigenvalues()
        ));
    }
    if f.values.is_empty() {
        report.fail(
            Location::Global,
            "the zero function is not an eigenfunction",
        );
        return report;
    }
    let support: Vec<(&Word, i8)> = f.values.iter().map(|(w, &v)| (w, v)).collect();
    let sums: HashMap<Word, i64> = support
        .par_iter()
        .fold(HashMap::new, |mut acc: HashMap<Word, i64>, &(w, v)| {
            for nb in w.neighbors() {
                *acc.entry(nb).or_default() += v as i64;
            }
            acc
        })
        .reduce(HashMap::new, merge_counts);
    let mut bad: Vec<(Word, i64, i64)> = Vec::new();
    for (x, &s) in &sums {
        let lhs = lambda * f.value(x);
        if lhs != s {
            bad.push((x.clone(), lhs, s));
        }
    }
    for (x, &v) in &f.values {
        if !sums.contains_key(x) && lambda * v as i64 != 0 {
            bad.push((x.clone(), lambda * v as i64, 0));
        }
    }
    bad.sort();
    for (x, lhs, rhs) in bad {
        report.fail(
            Location::Vertex(x),
            format!("lambda*f(x) = {lhs} but neighbor sum = {rhs}"),
        );
    }
    report
}

/// Both parts have minimum distance exactly 3.
pub fn mindist_check(b: &Bitrade) -> VerificationReport {
    let mut report = VerificationReport::new(Criterion::MinDist);
    for i in 0..2 {
        let d = b.part(i).min_distance();
        if d != Distance::Finite(3) {
            report.fail(Location::Global, format!("d(T{i}) = {d}, expected 3"));
        }
    }
    report
}

/// Words at distance exactly 2 from `x`.
fn distance_two(x: &Word) -> impl Iterator<Item = Word> + '_ {
    let n = x.len();
    let q = x.q() as u16;
    (0..n).tuple_combinations().flat_map(move |(i, j)| {
        (0..q)
            .filter(move |&a| a != x.symbols()[i])
            .cartesian_product((0..q).filter(move |&b| b != x.symbols()[j]))
            .map(move |(a, b)| x.with(i, a).with(j, b))
    })
}

/// Minimum distances 3, `d(T0, T1) = 2`, and every word has exactly
/// `(q-1)n/2` words of the other part at distance 2.
pub fn dist2_count_check(b: &Bitrade) -> VerificationReport {
    let mut report = VerificationReport::new(Criterion::Dist2Count);
    let params = b.params();
    overlap_check(b, &mut report);
    let degree = params.sphere_size();
    if !degree.is_multiple_of(2) {
        report.fail(
            Location::Global,
            format!("(q-1)n = {degree} is odd; no word can have (q-1)n/2 partners"),
        );
    }
    let expected = degree / 2;
    report.absorb(mindist_check(b).relabel(Criterion::Dist2Count));
    match code_distance(b.t0(), b.t1()) {
        Ok(Distance::Finite(2)) => {}
        Ok(d) => report.fail(Location::Global, format!("d(T0,T1) = {d}, expected 2")),
        Err(e) => report.fail(Location::Global, e.to_string()),
    }
    let tagged: Vec<(&Word, usize)> = b.tagged_words().collect();
    let mut bad: Vec<(Word, usize, usize)> = tagged
        .par_iter()
        .filter_map(|&(x, part)| {
            let other = b.part(part ^ 1);
            let count = distance_two(x).filter(|y| other.contains(y)).count();
            (count != expected).then(|| (x.clone(), part, count))
        })
        .collect();
    bad.sort();
    for (x, part, count) in bad {
        report.fail(
            Location::Vertex(x),
            format!(
                "T{part} word has {count} T{} words at distance 2, expected {expected}",
                part ^ 1
            ),
        );
    }
    report
}

impl VerificationReport {
    fn relabel(mut self, criterion: Criterion) -> Self {
        self.criterion = criterion;
        self
    }
}

#[derive(Default, Clone, Copy)]
struct FaceTally {
    sum: i64,
    nonzero: u32,
}

impl std::ops::AddAssign for FaceTally {
    fn add_assign(&mut self, rhs: Self) {
        self.sum += rhs.sum;
        self.nonzero += rhs.nonzero;
    }
}

/// Support sums on the faces fixing exactly the positions `fixed` (0-based),
/// keyed by the fixed values. Faces missing from the map carry no support.
fn face_tallies(f: &SignedFunction, fixed: &[usize]) -> HashMap<Vec<u16>, FaceTally> {
    let mut map: HashMap<Vec<u16>, FaceTally> = HashMap::new();
    for (w, &v) in &f.values {
        let key: Vec<u16> = fixed.iter().map(|&i| w.symbols()[i]).collect();
        *map.entry(key).or_default() += FaceTally {
            sum: v as i64,
            nonzero: 1,
        };
    }
    map
}

fn face_of(params: HammingParams, fixed: &[usize], values: &[u16]) -> Face {
    Face::new(
        params,
        fixed.iter().map(|&i| i + 1).zip(values.iter().copied()),
    )
    .expect("positions and values come from the graph")
}

/// Zero face sums for a claimed `(n(q-1) - mq)`-eigenfunction: every face
/// with `m - 1` fixed positions must have zero sum and either no support or
/// at least two support words.
///
/// All `C(n, m-1) q^(m-1)` faces are examined when that count is within
/// `sample_budget`; otherwise `sample_budget` faces are drawn uniformly
/// with the given seed.
pub fn delsarte_face_check(
    f: &SignedFunction,
    m: usize,
    sample_budget: u64,
    seed: u64,
) -> VerificationReport {
    let mut report = VerificationReport::new(Criterion::Delsarte);
    let params = f.params;
    let (n, q) = (params.n(), params.q());
    if m == 0 {
        report.note("m = 0: no face conditions");
        return report;
    }
    if m > n {
        report.fail(Location::Global, format!("m = {m} exceeds n = {n}"));
        return report;
    }
    let k = m - 1;
    let total = binomial(n, k).saturating_mul((q as u128).saturating_pow(k as u32));
    let mut bad: Vec<(Face, FaceTally)> = Vec::new();
    if total <= sample_budget as u128 {
        report.note(format!(
            "exhaustive over {total} faces with {k} fixed positions"
        ));
        let subsets: Vec<Vec<usize>> = (0..n).combinations(k).collect();
        bad = subsets
            .par_iter()
            .flat_map_iter(|fixed| {
                face_tallies(f, fixed)
                    .into_iter()
                    .filter(|(_, t)| t.sum != 0 || t.nonzero == 1)
                    .map(|(values, t)| (face_of(params, fixed, &values), t))
                    .collect::<Vec<_>>()
            })
            .collect();
    } else {
        report.note(format!(
            "sampled {sample_budget} of {total} faces with {k} fixed positions (seed {seed})"
        ));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut by_subset: HashMap<Vec<usize>, Vec<Vec<u16>>> = HashMap::new();
        for _ in 0..sample_budget {
            let mut fixed = rand::seq::index::sample(&mut rng, n, k).into_vec();
            fixed.sort_unstable();
            let values: Vec<u16> = (0..k).map(|_| rng.random_range(0..q as u16)).collect();
            by_subset.entry(fixed).or_default().push(values);
        }
        let mut seen = HashSet::new();
        for (fixed, faces) in by_subset.iter().sorted_by(|a, b| a.0.cmp(b.0)) {
            let tallies = face_tallies(f, fixed);
            for values in faces {
                if let Some(t) = tallies.get(values) {
                    if (t.sum != 0 || t.nonzero == 1)
                        && seen.insert((fixed.clone(), values.clone()))
                    {
                        bad.push((face_of(params, fixed, values), *t));
                    }
                }
            }
        }
    }
    bad.sort_by_key(|(face, _)| {
        face.fixed()
            .iter()
            .map(|(&p, &v)| (p, v))
            .collect::<Vec<_>>()
    });
    for (face, t) in bad {
        let detail = if t.sum != 0 {
            format!(
                "signed sum {} over {} support words, expected 0",
                t.sum, t.nonzero
            )
        } else {
            "exactly one nonzero value on the face".to_string()
        };
        report.fail(Location::Face(face), detail);
    }
    report
}

/// The `m` in `lambda = n(q-1) - mq` for the bitrade's kind, if `lambda` is an
/// eigenvalue of its graph.
pub fn delsarte_index(b: &Bitrade) -> Option<usize> {
    b.params().eigen_index(b.kind().eigenvalue())
}

/// [`delsarte_face_check`] on `chi_T0 - chi_T1` with `m` derived from the kind.
pub fn delsarte_bitrade_check(b: &Bitrade, sample_budget: u64, seed: u64) -> VerificationReport {
    let f = SignedFunction::from_bitrade(b);
    match delsarte_index(b) {
        Some(m) => delsarte_face_check(&f, m, sample_budget, seed),
        None => {
            let mut report = VerificationReport::new(Criterion::Delsarte);
            report.fail(
                Location::Global,
                format!(
                    "{} is not an eigenvalue of {}",
                    b.kind().eigenvalue(),
                    b.params()
                ),
            );
            report
        }
    }
}

/// Eigen equation for the kind's eigenvalue (0 or -1).
pub fn eigen_bitrade_check(b: &Bitrade) -> VerificationReport {
    eigen_check(&SignedFunction::from_bitrade(b), b.kind().eigenvalue())
}

/// Every check that applies to the bitrade's kind, in a fixed order:
/// definition, mindist, eigen, dist2 (spherical only), delsarte.
pub fn verify_all(b: &Bitrade, sample_budget: u64, seed: u64) -> Vec<VerificationReport> {
    let mut out = vec![
        verify_definition(b),
        mindist_check(b),
        eigen_bitrade_check(b),
    ];
    if b.kind() == BitradeKind::Spherical {
        out.push(dist2_count_check(b));
    }
    out.push(delsarte_bitrade_check(b, sample_budget, seed));
    out
}
