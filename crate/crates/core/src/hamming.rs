//! Vertices, metric and neighborhoods of the Hamming graph `H(n, q)`.
//!
//! Words are stored as plain symbol vectors. Their ordering is lexicographic
//! with the first coordinate most significant. Externally visible positions
//! (faces, documents) are 1-based.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use itertools::Itertools;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};

/// Largest vertex count accepted by operations that sweep the whole graph.
pub const ENUMERATION_CEILING: u64 = 1 << 48;

/// Codes up to this size get their minimum distance by direct pair comparison.
pub const PAIRWISE_LIMIT: usize = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HammingParams {
    n: usize,
    q: u16,
}

impl HammingParams {
    pub fn new(n: usize, q: usize) -> Result<Self> {
        if n == 0 {
            return param("word length n must be at least 1");
        }
        if q < 2 {
            return param(format!("alphabet size q must be at least 2, got {q}"));
        }
        if q > u16::MAX as usize {
            return param(format!("alphabet size {q} exceeds {}", u16::MAX));
        }
        Ok(Self { n, q: q as u16 })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.q as usize
    }

    /// `q^n`, or `None` when it does not fit in 64 bits.
    pub fn vertex_count(&self) -> Option<u64> {
        (self.q as u64).checked_pow(u32::try_from(self.n).ok()?)
    }

    /// Vertex count, provided the whole graph may be enumerated.
    pub fn enumerable(&self) -> Result<u64> {
        match self.vertex_count() {
            Some(v) if v <= ENUMERATION_CEILING => Ok(v),
            _ => Err(Error::Ceiling(format!(
                "H({},{}) has more than 2^48 vertices",
                self.n, self.q
            ))),
        }
    }

    /// Degree of every vertex, `n(q-1)`.
    pub fn sphere_size(&self) -> usize {
        self.n * (self.q() - 1)
    }

    pub fn ball_size(&self) -> usize {
        self.sphere_size() + 1
    }

    /// Adjacency eigenvalues `n(q-1) - qi`, `i = 0..=n`, in decreasing order.
    pub fn eigenvalues(&self) -> Vec<i64> {
        (0..=self.n).map(|i| self.eigenvalue(i)).collect()
    }

    pub fn eigenvalue(&self, index: usize) -> i64 {
        (self.n * (self.q() - 1)) as i64 - (self.q() * index) as i64
    }

    /// The `i` with `eigenvalue(i) == lambda`, if `lambda` is an eigenvalue.
    pub fn eigen_index(&self, lambda: i64) -> Option<usize> {
        let top = (self.n * (self.q() - 1)) as i64;
        let diff = top - lambda;
        let q = self.q() as i64;
        if diff < 0 || diff % q != 0 {
            return None;
        }
        let i = (diff / q) as usize;
        (i <= self.n).then_some(i)
    }

    pub fn word(&self, symbols: impl Into<Vec<u16>>) -> Result<Word> {
        Word::new(*self, symbols)
    }

    pub fn zero(&self) -> Word {
        Word {
            symbols: vec![0; self.n],
            q: self.q,
        }
    }

    pub fn random_word<R: Rng + ?Sized>(&self, rng: &mut R) -> Word {
        Word {
            symbols: (0..self.n).map(|_| rng.random_range(0..self.q)).collect(),
            q: self.q,
        }
    }

    /// All `q^n` words in lexicographic order.
    pub fn vertices(&self) -> Result<impl Iterator<Item = Word>> {
        self.enumerable()?;
        Ok(Face::free(*self).into_words())
    }

    /// Position of `w` in lexicographic order, for graphs that fit in 64 bits.
    pub fn index_of(&self, w: &Word) -> u64 {
        w.symbols
            .iter()
            .fold(0u64, |acc, &s| acc * self.q as u64 + s as u64)
    }

    /// Neighbour indices of `w` in the order of [`Word::neighbors`]; requires
    /// [`Self::vertex_count`] to be finite.
    pub(crate) fn neighbor_indices<'a>(&self, w: &'a Word) -> impl Iterator<Item = u64> + 'a {
        let q = self.q as u64;
        let base = self.index_of(w);
        let n = self.n;
        w.symbols.iter().enumerate().flat_map(move |(i, &a)| {
            let weight = q.pow((n - 1 - i) as u32);
            let origin = base - a as u64 * weight;
            (0..q)
                .filter(move |&s| s != a as u64)
                .map(move |s| origin + s * weight)
        })
    }

    pub fn word_at(&self, mut index: u64) -> Word {
        let mut symbols = vec![0u16; self.n];
        for s in symbols.iter_mut().rev() {
            *s = (index % self.q as u64) as u16;
            index /= self.q as u64;
        }
        Word { symbols, q: self.q }
    }
}

impl fmt::Display for HammingParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H({},{})", self.n, self.q)
    }
}

/// A vertex of `H(n, q)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    symbols: Vec<u16>,
    q: u16,
}

impl Word {
    pub fn new(params: HammingParams, symbols: impl Into<Vec<u16>>) -> Result<Self> {
        let symbols = symbols.into();
        if symbols.len() != params.n {
            return param(format!(
                "word has length {}, expected {}",
                symbols.len(),
                params.n
            ));
        }
        if let Some(&s) = symbols.iter().find(|&&s| s >= params.q) {
            return param(format!("symbol {s} out of range for q = {}", params.q));
        }
        Ok(Self {
            symbols,
            q: params.q,
        })
    }

    pub fn symbols(&self) -> &[u16] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn q(&self) -> usize {
        self.q as usize
    }

    pub fn params(&self) -> HammingParams {
        HammingParams {
            n: self.symbols.len(),
            q: self.q,
        }
    }

    /// Copy of the word with coordinate `index` (0-based) set to `symbol`.
    pub fn with(&self, index: usize, symbol: u16) -> Word {
        let mut w = self.clone();
        w.symbols[index] = symbol;
        w
    }

    /// Applies one alphabet permutation to every coordinate.
    pub fn map_symbols(&self, perm: &[u16]) -> Word {
        Word {
            symbols: self.symbols.iter().map(|&s| perm[s as usize]).collect(),
            q: self.q,
        }
    }

    /// Coordinate permutation: position `i` of the result holds `self[perm[i]]`.
    pub fn permute_positions(&self, perm: &[usize]) -> Word {
        Word {
            symbols: perm.iter().map(|&i| self.symbols[i]).collect(),
            q: self.q,
        }
    }

    /// Number of coordinates in which the words differ; no parameter check.
    pub(crate) fn diff_count(&self, other: &Word) -> usize {
        self.symbols
            .iter()
            .zip(&other.symbols)
            .filter(|(a, b)| a != b)
            .count()
    }

    /// Words at distance exactly one, ordered by position then symbol.
    pub fn neighbors(&self) -> impl Iterator<Item = Word> + '_ {
        (0..self.symbols.len()).flat_map(move |i| {
            (0..self.q)
                .filter(move |&s| s != self.symbols[i])
                .map(move |s| self.with(i, s))
        })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q <= 10 {
            for s in &self.symbols {
                write!(f, "{s}")?;
            }
            Ok(())
        } else {
            write!(f, "({})", self.symbols.iter().join(","))
        }
    }
}

fn same_params(x: &Word, y: &Word) -> Result<()> {
    if x.params() != y.params() {
        return param(format!(
            "words from different graphs: {} vs {}",
            x.params(),
            y.params()
        ));
    }
    Ok(())
}

pub fn hamming_distance(x: &Word, y: &Word) -> Result<usize> {
    same_params(x, y)?;
    Ok(x.diff_count(y))
}

/// The `n(q-1)` neighbors of `x`; `x` itself is excluded.
pub fn sphere(x: &Word) -> Vec<Word> {
    x.neighbors().collect()
}

/// `sphere(x)` together with `x`, center first.
pub fn ball(x: &Word) -> Vec<Word> {
    std::iter::once(x.clone()).chain(x.neighbors()).collect()
}

pub fn concat(x: &Word, y: &Word) -> Result<Word> {
    if x.q != y.q {
        return param(format!("alphabet mismatch: q = {} vs q = {}", x.q, y.q));
    }
    let mut symbols = Vec::with_capacity(x.len() + y.len());
    symbols.extend_from_slice(&x.symbols);
    symbols.extend_from_slice(&y.symbols);
    Ok(Word { symbols, q: x.q })
}

/// A graph distance, with `Infinite` standing for "no pair to measure".
///
/// Variants are ordered so that `Infinite` compares above every finite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Distance {
    Finite(usize),
    Infinite,
}

impl Distance {
    pub fn at_least(self, d: usize) -> bool {
        self >= Distance::Finite(d)
    }

    pub fn finite(self) -> Option<usize> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Infinite => None,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Infinite => write!(f, "inf"),
        }
    }
}

/// A set of words of one Hamming graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Code {
    params: HammingParams,
    words: BTreeSet<Word>,
}

impl Code {
    pub fn new(params: HammingParams) -> Self {
        Self {
            params,
            words: BTreeSet::new(),
        }
    }

    pub fn from_words(
        params: HammingParams,
        words: impl IntoIterator<Item = Word>,
    ) -> Result<Self> {
        let mut code = Self::new(params);
        for w in words {
            code.insert(w)?;
        }
        Ok(code)
    }

    pub fn params(&self) -> HammingParams {
        self.params
    }

    /// Returns `false` if the word was already present.
    pub fn insert(&mut self, w: Word) -> Result<bool> {
        if w.params() != self.params {
            return param(format!("word {w} does not belong to {}", self.params));
        }
        Ok(self.words.insert(w))
    }

    pub fn remove(&mut self, w: &Word) -> bool {
        self.words.remove(w)
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.words.contains(w)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Words in lexicographic order.
    pub fn iter(&self) -> impl ExactSizeIterator<Item = &Word> + Clone {
        self.words.iter()
    }

    pub fn min_distance(&self) -> Distance {
        min_distance(self)
    }

    pub fn difference(&self, other: &Code) -> Code {
        Code {
            params: self.params,
            words: self.words.difference(&other.words).cloned().collect(),
        }
    }

    pub fn is_disjoint(&self, other: &Code) -> bool {
        self.words.is_disjoint(&other.words)
    }

    /// `{x|y : x in self, y in other}`.
    pub fn product(&self, other: &Code) -> Result<Code> {
        if self.params.q != other.params.q {
            return param("alphabet mismatch in code product");
        }
        let params = HammingParams::new(self.params.n + other.params.n, self.params.q())?;
        let words = self
            .words
            .iter()
            .cartesian_product(other.words.iter())
            .map(|(x, y)| concat(x, y))
            .collect::<Result<BTreeSet<_>>>()?;
        Ok(Code { params, words })
    }

    /// Appends the constant symbol `s` to every word.
    pub fn extend_with(&self, s: u16) -> Result<Code> {
        let params = HammingParams::new(self.params.n + 1, self.params.q())?;
        let tail = params_one(self.params.q)?.word(vec![s])?;
        let words = self
            .words
            .iter()
            .map(|w| concat(w, &tail))
            .collect::<Result<BTreeSet<_>>>()?;
        Ok(Code { params, words })
    }
}

fn params_one(q: u16) -> Result<HammingParams> {
    HammingParams::new(1, q as usize)
}

impl<'a> IntoIterator for &'a Code {
    type Item = &'a Word;
    type IntoIter = std::collections::btree_set::Iter<'a, Word>;

    fn into_iter(self) -> Self::IntoIter {
        self.words.iter()
    }
}

/// Minimum distance over distinct pairs; `Infinite` for codes with fewer
/// than two words.
///
/// Codes above [`PAIRWISE_LIMIT`] words are handled by deleting `k`
/// coordinates at a time for increasing `k`: the first `k` at which two
/// words collide is the minimum distance.
pub fn min_distance(c: &Code) -> Distance {
    let words: Vec<&Word> = c.iter().collect();
    if words.len() < 2 {
        return Distance::Infinite;
    }
    if words.len() <= PAIRWISE_LIMIT {
        return pairwise_self(&words);
    }
    bucketed(&words, None, c.params.n).unwrap_or_else(|| pairwise_self(&words))
}

/// `min d(x, y)` over `x` in `c`, `y` in `d`; `Infinite` if either is empty.
pub fn code_distance(c: &Code, d: &Code) -> Result<Distance> {
    if c.params != d.params {
        return param(format!(
            "code distance between {} and {}",
            c.params, d.params
        ));
    }
    if c.is_empty() || d.is_empty() {
        return Ok(Distance::Infinite);
    }
    let a: Vec<&Word> = c.iter().collect();
    let b: Vec<&Word> = d.iter().collect();
    if a.len().saturating_mul(b.len()) <= PAIRWISE_LIMIT * PAIRWISE_LIMIT / 2 {
        return Ok(pairwise_cross(&a, &b));
    }
    Ok(bucketed(&a, Some(&b), c.params.n).unwrap_or_else(|| pairwise_cross(&a, &b)))
}

fn pairwise_self(words: &[&Word]) -> Distance {
    let best = (0..words.len())
        .into_par_iter()
        .filter_map(|i| words[i + 1..].iter().map(|y| words[i].diff_count(y)).min())
        .min();
    best.map_or(Distance::Infinite, Distance::Finite)
}

fn pairwise_cross(a: &[&Word], b: &[&Word]) -> Distance {
    let best = a
        .par_iter()
        .filter_map(|x| b.iter().map(|y| x.diff_count(y)).min())
        .min();
    best.map_or(Distance::Infinite, Distance::Finite)
}

/// Deletion-fingerprint search. Returns `None` once the next round would
/// cost more than plain pair comparison.
fn bucketed(a: &[&Word], b: Option<&[&Word]>, n: usize) -> Option<Distance> {
    let pair_cost = match b {
        None => (a.len() as u128 * a.len() as u128) / 2,
        Some(b) => a.len() as u128 * b.len() as u128,
    };
    let start = if b.is_some() { 0 } else { 1 };
    for k in start..=n {
        let subsets = binomial(n, k);
        if subsets * (a.len() + b.map_or(0, |b| b.len())) as u128 > pair_cost {
            return None;
        }
        let collided = (0..n).combinations(k).any(|deleted| {
            let keep: Vec<usize> = (0..n).filter(|i| !deleted.contains(i)).collect();
            let project = |w: &Word| -> Vec<u16> { keep.iter().map(|&i| w.symbols[i]).collect() };
            match b {
                None => {
                    let mut seen = HashSet::with_capacity(a.len());
                    a.iter().any(|w| !seen.insert(project(w)))
                }
                Some(b) => {
                    let seen: HashSet<Vec<u16>> = a.iter().map(|w| project(w)).collect();
                    b.iter().any(|w| seen.contains(&project(w)))
                }
            }
        });
        if collided {
            return Some(Distance::Finite(k));
        }
    }
    Some(Distance::Infinite)
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

/// A face `Γ`: the words agreeing with a partial assignment of coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Face {
    params: HammingParams,
    /// 1-based position -> symbol.
    fixed: BTreeMap<usize, u16>,
}

impl Face {
    pub fn new(
        params: HammingParams,
        fixed: impl IntoIterator<Item = (usize, u16)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (pos, value) in fixed {
            if pos == 0 || pos > params.n {
                return param(format!("face position {pos} outside 1..={}", params.n));
            }
            if value >= params.q {
                return param(format!(
                    "face value {value} out of range for q = {}",
                    params.q
                ));
            }
            if map.insert(pos, value).is_some() {
                return param(format!("face position {pos} fixed twice"));
            }
        }
        Ok(Self { params, fixed: map })
    }

    /// The face with no fixed positions, i.e. the whole graph.
    pub fn free(params: HammingParams) -> Self {
        Self {
            params,
            fixed: BTreeMap::new(),
        }
    }

    pub fn params(&self) -> HammingParams {
        self.params
    }

    pub fn fixed(&self) -> &BTreeMap<usize, u16> {
        &self.fixed
    }

    /// Free positions, 1-based, ascending.
    pub fn free_positions(&self) -> Vec<usize> {
        (1..=self.params.n)
            .filter(|p| !self.fixed.contains_key(p))
            .collect()
    }

    /// `q^(free count)`, or `None` on overflow.
    pub fn size(&self) -> Option<u64> {
        (self.params.q as u64).checked_pow((self.params.n - self.fixed.len()) as u32)
    }

    pub fn contains(&self, w: &Word) -> bool {
        w.params() == self.params
            && self
                .fixed
                .iter()
                .all(|(&pos, &value)| w.symbols[pos - 1] == value)
    }

    /// Words of the face in lexicographic order of the free coordinates.
    pub fn words(&self) -> FaceWords {
        self.clone().into_words()
    }

    pub fn into_words(self) -> FaceWords {
        let mut start = vec![0u16; self.params.n];
        for (&pos, &value) in &self.fixed {
            start[pos - 1] = value;
        }
        FaceWords {
            free: self.free_positions().into_iter().map(|p| p - 1).collect(),
            current: Some(Word {
                symbols: start,
                q: self.params.q,
            }),
        }
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "face[{}]",
            self.fixed
                .iter()
                .map(|(p, v)| format!("x{p}={v}"))
                .join(",")
        )
    }
}

/// Odometer over the free coordinates of a face.
pub struct FaceWords {
    free: Vec<usize>,
    current: Option<Word>,
}

impl Iterator for FaceWords {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let out = self.current.take()?;
        let mut next = out.clone();
        for &i in self.free.iter().rev() {
            if next.symbols[i] + 1 < next.q {
                next.symbols[i] += 1;
                self.current = Some(next);
                return Some(out);
            }
            next.symbols[i] = 0;
        }
        Some(out)
    }
}

/// An automorphism of `H(n, q)`: a coordinate permutation followed by one
/// alphabet permutation per coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automorphism {
    /// Position `i` of the image takes coordinate `positions[i]` of the source.
    pub positions: Vec<usize>,
    pub symbols: Vec<Vec<u16>>,
}

impl Automorphism {
    pub fn identity(params: HammingParams) -> Self {
        Self {
            positions: (0..params.n).collect(),
            symbols: vec![(0..params.q).collect(); params.n],
        }
    }

    pub fn random<R: Rng + ?Sized>(params: HammingParams, rng: &mut R) -> Self {
        use rand::seq::SliceRandom;
        let mut positions: Vec<usize> = (0..params.n).collect();
        positions.shuffle(rng);
        let symbols = (0..params.n)
            .map(|_| {
                let mut p: Vec<u16> = (0..params.q).collect();
                p.shuffle(rng);
                p
            })
            .collect();
        Self { positions, symbols }
    }

    pub fn apply(&self, w: &Word) -> Word {
        Word {
            symbols: self
                .positions
                .iter()
                .enumerate()
                .map(|(i, &src)| self.symbols[i][w.symbols[src] as usize])
                .collect(),
            q: w.q,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(params: HammingParams, s: &[u16]) -> Word {
        params.word(s.to_vec()).unwrap()
    }

    #[test]
    fn distance_examples() {
        let h3 = HammingParams::new(3, 3).unwrap();
        assert_eq!(
            hamming_distance(&w(h3, &[0, 1, 2]), &w(h3, &[0, 1, 2])).unwrap(),
            0
        );
        assert_eq!(
            hamming_distance(&w(h3, &[0, 1, 2]), &w(h3, &[0, 2, 1])).unwrap(),
            2
        );
        let h4 = HammingParams::new(4, 4).unwrap();
        assert_eq!(
            hamming_distance(&w(h4, &[0, 1, 2, 3]), &w(h4, &[1, 2, 3, 0])).unwrap(),
            4
        );
    }

    #[test]
    fn distance_rejects_mismatched_params() {
        let a = HammingParams::new(3, 3).unwrap().zero();
        let b = HammingParams::new(3, 4).unwrap().zero();
        let c = HammingParams::new(4, 3).unwrap().zero();
        assert!(matches!(hamming_distance(&a, &b), Err(Error::Parameter(_))));
        assert!(matches!(hamming_distance(&a, &c), Err(Error::Parameter(_))));
    }

    #[test]
    fn params_validation() {
        assert!(HammingParams::new(0, 3).is_err());
        assert!(HammingParams::new(3, 1).is_err());
        assert!(HammingParams::new(3, 70_000).is_err());
        assert!(HammingParams::new(49, 2).unwrap().enumerable().is_err());
        assert_eq!(
            HammingParams::new(48, 2).unwrap().enumerable().unwrap(),
            1 << 48
        );
        assert!(HammingParams::new(100, 7).unwrap().vertex_count().is_none());
        let h = HammingParams::new(3, 3).unwrap();
        assert!(h.word(vec![0, 3, 0]).is_err());
        assert!(h.word(vec![0, 1]).is_err());
    }

    #[test]
    fn sphere_and_ball_sizes() {
        for (n, q, s) in [(3, 3, 6), (4, 3, 8), (6, 5, 24)] {
            let h = HammingParams::new(n, q).unwrap();
            let x = h.zero();
            let sp = sphere(&x);
            assert_eq!(sp.len(), s);
            assert!(!sp.contains(&x));
            assert_eq!(ball(&x).len(), s + 1);
        }
        let h = HammingParams::new(1, 5).unwrap();
        let b: BTreeSet<Word> = ball(&h.zero()).into_iter().collect();
        let all: BTreeSet<Word> = h.vertices().unwrap().collect();
        assert_eq!(b, all);
    }

    #[test]
    fn sphere_and_ball_sizes_exhaustive_small() {
        for (n, q) in [(3, 3), (4, 3), (3, 4), (2, 7)] {
            let h = HammingParams::new(n, q).unwrap();
            for x in h.vertices().unwrap() {
                let sp: HashSet<Word> = sphere(&x).into_iter().collect();
                assert_eq!(sp.len(), n * (q - 1));
                assert!(sp.iter().all(|y| x.diff_count(y) == 1));
                assert_eq!(ball(&x).len(), n * (q - 1) + 1);
            }
        }
    }

    #[test]
    fn min_distance_examples() {
        let h = HammingParams::new(3, 3).unwrap();
        let c =
            Code::from_words(h, [w(h, &[0, 1, 2]), w(h, &[1, 2, 0]), w(h, &[2, 0, 1])]).unwrap();
        // brute force over the three pairs
        let words: Vec<&Word> = c.iter().collect();
        let oracle = words
            .iter()
            .tuple_combinations()
            .map(|(a, b)| {
                a.symbols
                    .iter()
                    .zip(&b.symbols)
                    .filter(|(x, y)| x != y)
                    .count()
            })
            .min()
            .unwrap();
        assert_eq!(oracle, 3);
        assert_eq!(min_distance(&c), Distance::Finite(3));
        let single = Code::from_words(h, [h.zero()]).unwrap();
        assert_eq!(min_distance(&single), Distance::Infinite);
        assert_eq!(min_distance(&Code::new(h)), Distance::Infinite);
    }

    #[test]
    fn code_distance_examples() {
        let h = HammingParams::new(3, 3).unwrap();
        let c = Code::from_words(h, [w(h, &[0, 0, 0])]).unwrap();
        let d = Code::from_words(h, [w(h, &[1, 1, 1])]).unwrap();
        assert_eq!(code_distance(&c, &d).unwrap(), Distance::Finite(3));
        assert_eq!(code_distance(&c, &c).unwrap(), Distance::Finite(0));
        assert_eq!(
            code_distance(&c, &Code::new(h)).unwrap(),
            Distance::Infinite
        );
        let other = Code::new(HammingParams::new(3, 4).unwrap());
        assert!(code_distance(&c, &other).is_err());
    }

    #[test]
    fn bucketed_agrees_with_pairwise() {
        let mut rng = rand::rng();
        for (n, q, size) in [(6, 3, 40), (8, 4, 200), (5, 5, 300), (4, 3, 2)] {
            let h = HammingParams::new(n, q).unwrap();
            let c = Code::from_words(h, (0..size).map(|_| h.random_word(&mut rng))).unwrap();
            let d = Code::from_words(h, (0..size).map(|_| h.random_word(&mut rng))).unwrap();
            let a: Vec<&Word> = c.iter().collect();
            let b: Vec<&Word> = d.iter().collect();
            if a.len() >= 2 {
                // force the fingerprint path with an unbounded budget
                assert_eq!(bucketed_unbounded(&a, None, n), pairwise_self(&a));
            }
            assert_eq!(bucketed_unbounded(&a, Some(&b), n), pairwise_cross(&a, &b));
        }
    }

    fn bucketed_unbounded(a: &[&Word], b: Option<&[&Word]>, n: usize) -> Distance {
        let start = if b.is_some() { 0 } else { 1 };
        for k in start..=n {
            for deleted in (0..n).combinations(k) {
                let keep: Vec<usize> = (0..n).filter(|i| !deleted.contains(i)).collect();
                let project =
                    |w: &Word| -> Vec<u16> { keep.iter().map(|&i| w.symbols[i]).collect() };
                let hit = match b {
                    None => {
                        let mut seen = HashSet::new();
                        a.iter().any(|w| !seen.insert(project(w)))
                    }
                    Some(b) => {
                        let seen: HashSet<_> = a.iter().map(|w| project(w)).collect();
                        b.iter().any(|w| seen.contains(&project(w)))
                    }
                };
                if hit {
                    return Distance::Finite(k);
                }
            }
        }
        Distance::Infinite
    }

    #[test]
    fn large_code_uses_fingerprints() {
        // 3^10 and 3^11 / 3 both exceed PAIRWISE_LIMIT: the full space has
        // distance 1, the sum-zero subcode (mod 3) has distance 2.
        let h = HammingParams::new(10, 3).unwrap();
        let all = Code::from_words(h, h.vertices().unwrap()).unwrap();
        assert_eq!(min_distance(&all), Distance::Finite(1));
        let h11 = HammingParams::new(11, 3).unwrap();
        let even11 = Code::from_words(
            h11,
            h11.vertices()
                .unwrap()
                .filter(|w| w.symbols().iter().map(|&s| s as u32).sum::<u32>() % 3 == 0),
        )
        .unwrap();
        assert!(even11.len() > PAIRWISE_LIMIT);
        assert_eq!(min_distance(&even11), Distance::Finite(2));
    }

    #[test]
    fn face_examples() {
        let h = HammingParams::new(4, 3).unwrap();
        let all_fixed = Face::new(h, [(1, 0), (2, 1), (3, 2), (4, 0)]).unwrap();
        assert_eq!(all_fixed.words().count(), 1);
        assert_eq!(Face::free(h).words().count(), 81);
        let f = Face::new(h, [(1, 0), (2, 0)]).unwrap();
        let words: Vec<Word> = f.words().collect();
        assert_eq!(words.len(), 9);
        assert!(words.windows(2).all(|p| p[0] < p[1]));
        assert!(words.iter().all(|x| f.contains(x)));
        assert_eq!(f.free_positions(), vec![3, 4]);
        assert!(Face::new(h, [(0, 0)]).is_err());
        assert!(Face::new(h, [(5, 0)]).is_err());
        assert!(Face::new(h, [(1, 3)]).is_err());
        assert!(Face::new(h, [(1, 0), (1, 1)]).is_err());
    }

    #[test]
    fn concat_examples() {
        let h2 = HammingParams::new(2, 3).unwrap();
        let h1 = HammingParams::new(1, 3).unwrap();
        let h3 = HammingParams::new(3, 3).unwrap();
        assert_eq!(
            concat(&w(h2, &[0, 1]), &w(h1, &[2])).unwrap(),
            w(h3, &[0, 1, 2])
        );
        let x = w(h3, &[0, 1, 2]);
        let h6 = HammingParams::new(6, 3).unwrap();
        assert_eq!(concat(&x, &x).unwrap(), w(h6, &[0, 1, 2, 0, 1, 2]));
        let y = HammingParams::new(1, 4).unwrap().zero();
        assert!(concat(&x, &y).is_err());
    }

    #[test]
    fn index_round_trip() {
        let h = HammingParams::new(4, 3).unwrap();
        for (i, x) in h.vertices().unwrap().enumerate() {
            assert_eq!(h.index_of(&x), i as u64);
            assert_eq!(h.word_at(i as u64), x);
        }
    }

    #[test]
    fn eigen_index_inverts_eigenvalue() {
        let h = HammingParams::new(4, 3).unwrap();
        assert_eq!(h.eigenvalues(), vec![8, 5, 2, -1, -4]);
        assert_eq!(h.eigen_index(-1), Some(3));
        assert_eq!(h.eigen_index(0), None);
        assert_eq!(h.eigen_index(11), None);
        assert_eq!(h.eigen_index(-7), None);
    }

    fn small_params() -> impl Strategy<Value = HammingParams> {
        (1usize..6, 2usize..6).prop_map(|(n, q)| HammingParams::new(n, q).unwrap())
    }

    fn word_in(h: HammingParams) -> impl Strategy<Value = Word> {
        proptest::collection::vec(0..h.q() as u16, h.n()).prop_map(move |s| h.word(s).unwrap())
    }

    proptest! {
        #[test]
        fn distance_is_a_metric(
            (x, y, z) in small_params().prop_flat_map(|h| (word_in(h), word_in(h), word_in(h)))
        ) {
            let dxy = hamming_distance(&x, &y).unwrap();
            prop_assert_eq!(dxy, hamming_distance(&y, &x).unwrap());
            prop_assert_eq!(dxy == 0, x == y);
            let dxz = hamming_distance(&x, &z).unwrap();
            let dzy = hamming_distance(&z, &y).unwrap();
            prop_assert!(dxy <= dxz + dzy);
        }

        #[test]
        fn face_words_match_assignment(
            (h, mask, values) in small_params().prop_flat_map(|h| {
                (Just(h), proptest::collection::vec(any::<bool>(), h.n()),
                 proptest::collection::vec(0..h.q() as u16, h.n()))
            })
        ) {
            let fixed: Vec<(usize, u16)> = (0..h.n()).filter(|&i| mask[i]).map(|i| (i + 1, values[i])).collect();
            let face = Face::new(h, fixed.clone()).unwrap();
            let words: Vec<Word> = face.words().collect();
            prop_assert_eq!(words.len() as u64, face.size().unwrap());
            prop_assert_eq!(words.len() as u64, (h.q() as u64).pow((h.n() - fixed.len()) as u32));
            for x in &words {
                for &(p, v) in &fixed {
                    prop_assert_eq!(x.symbols()[p - 1], v);
                }
            }
        }

        #[test]
        fn distance_three_iff_balls_hold_one_word(
            (h, words) in (2usize..5, 2usize..5).prop_flat_map(|(n, q)| {
                let h = HammingParams::new(n, q).unwrap();
                (Just(h), proptest::collection::vec(word_in(h), 1..6))
            })
        ) {
            let code = Code::from_words(h, words).unwrap();
            let d3 = min_distance(&code).at_least(3);
            let balls_ok = h.vertices().unwrap().all(|x| {
                ball(&x).iter().filter(|y| code.contains(y)).count() <= 1
            });
            prop_assert_eq!(d3, balls_ok);
            if h.q() >= 3 {
                let spheres_ok = h.vertices().unwrap().all(|x| {
                    sphere(&x).iter().filter(|y| code.contains(y)).count() <= 1
                });
                prop_assert_eq!(d3, spheres_ok);
            }
        }
    }
}
