//! Exhaustive and randomized search for small bitrades.
//!
//! Both kinds reduce to the same capacity constraint: every block (the ball
//! around a vertex for perfect bitrades, the sphere for spherical ones) must
//! hold either no support words or exactly one word of each part.
//!
//! The exhaustive engine grows `(T0, T1)` from a fixed seed. At each node it
//! picks the unbalanced block with the fewest feasible completions and
//! branches on which vertex supplies the missing part. A block holds at most
//! one word per part, so the branches are disjoint and every bitrade
//! containing the current partial assignment lies below exactly one of them.
//! Minimality follows from iterative deepening on the volume bound.

use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::construct::{Bitrade, BitradeKind};
use crate::error::{param, Error, Result};
use crate::hamming::{Code, HammingParams};
use crate::verify::{verify_all, DEFAULT_FACE_BUDGET};

/// Largest graph accepted by exhaustive mode.
pub const EXHAUSTIVE_CEILING: u64 = 59_049; // 3^10

/// Largest graph accepted by local mode, which keeps per-vertex state.
pub const LOCAL_CEILING: u64 = 1 << 24;

pub const DEFAULT_LOCAL_BUDGET: Duration = Duration::from_secs(60);
pub const DEFAULT_LOCAL_STEPS: u64 = 200_000;
const TABU_TENURE: usize = 50;
const DEFAULT_DIVE_NODES: u64 = 10_000;
const DIVE_MAX_RESTARTS: u64 = 4096;
const STAGNATION_STEPS: u64 = 5_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    Local,
    /// Randomized restarts of the exhaustive engine with growing node limits.
    Dive,
}

impl std::str::FromStr for SearchMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(SearchMode::Exhaustive),
            "local" => Ok(SearchMode::Local),
            "dive" => Ok(SearchMode::Dive),
            other => param(format!("unknown search mode '{other}'")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub params: HammingParams,
    pub mode: SearchMode,
    /// Only bitrades of at most this volume are of interest.
    pub volume_upper_bound: Option<usize>,
    pub symmetry_breaking: bool,
    /// Wall-clock cap; `None` means unlimited.
    pub time_budget: Option<Duration>,
    pub seed: u64,
    /// Local mode: number of moves per restart. Dive mode: base node limit.
    pub max_steps: u64,
    /// Local mode: independent restarts. Dive mode: restarts per round.
    /// Both run them in parallel.
    pub restarts: usize,
    /// Local mode: starting configuration instead of a single seed word.
    pub initial: Option<Bitrade>,
    /// Exhaustive mode: report node counts on stderr after each bound.
    pub progress: bool,
}

impl SearchConfig {
    pub fn exhaustive(params: HammingParams) -> Self {
        Self {
            params,
            mode: SearchMode::Exhaustive,
            volume_upper_bound: None,
            symmetry_breaking: true,
            time_budget: None,
            seed: 0,
            max_steps: DEFAULT_LOCAL_STEPS,
            restarts: 4,
            initial: None,
            progress: false,
        }
    }

    pub fn local(params: HammingParams, seed: u64) -> Self {
        Self {
            mode: SearchMode::Local,
            time_budget: Some(DEFAULT_LOCAL_BUDGET),
            seed,
            ..Self::exhaustive(params)
        }
    }

    pub fn dive(params: HammingParams, seed: u64) -> Self {
        Self {
            mode: SearchMode::Dive,
            max_steps: DEFAULT_DIVE_NODES,
            ..Self::local(params, seed)
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub kind: BitradeKind,
    /// Smallest bitrade found, re-verified before being returned.
    pub best: Option<Bitrade>,
    /// Exhaustive mode finished: `best` is a minimum, or no bitrade within
    /// the volume bound exists when `best` is `None`.
    pub proven_minimum: bool,
    pub nodes_explored: u64,
    pub wall_time: Duration,
    pub budget_exhausted: bool,
}

impl SearchResult {
    pub fn volume(&self) -> Option<usize> {
        self.best.as_ref().map(Bitrade::volume)
    }
}

/// Minimum-volume perfect bitrade in `H(n, q)`, `n ≡ 1 (mod q)`.
pub fn min_perfect_volume(cfg: &SearchConfig) -> Result<SearchResult> {
    run(cfg, BitradeKind::Perfect)
}

/// Minimum-volume spherical bitrade in `H(n, q)`, `n ≡ 0 (mod q)`.
pub fn find_spherical(cfg: &SearchConfig) -> Result<SearchResult> {
    run(cfg, BitradeKind::Spherical)
}

fn run(cfg: &SearchConfig, kind: BitradeKind) -> Result<SearchResult> {
    kind.check_length(cfg.params)?;
    if cfg.params.q() < 3 {
        return param("searches need q >= 3");
    }
    match cfg.mode {
        SearchMode::Exhaustive => exhaustive(cfg, kind),
        SearchMode::Local => local(cfg, kind),
        SearchMode::Dive => dive(cfg, kind),
    }
}

/// Every bitrade of volume at most `max_volume` (with the symmetry-breaking
/// seed applied when requested), in branch order.
pub fn enumerate_bitrades(
    params: HammingParams,
    kind: BitradeKind,
    max_volume: usize,
    symmetry_breaking: bool,
) -> Result<Vec<Bitrade>> {
    kind.check_length(params)?;
    let graph = Graph::new(params, kind, EXHAUSTIVE_CEILING)?;
    let never = AtomicBool::new(false);
    let branches = graph.branches(symmetry_breaking);
    let per_branch: Vec<Vec<Parts>> = branches
        .par_iter()
        .map(|prefix| {
            let mut dfs = Dfs::new(&graph, max_volume, None, &never, true);
            if dfs.state.apply(prefix) {
                dfs.descend();
            }
            dfs.found
        })
        .collect();
    per_branch
        .into_iter()
        .flatten()
        .map(|parts| graph.to_bitrade(&parts))
        .collect()
}

type Parts = [Vec<u32>; 2];

const FREE: u8 = 0;
const OUT: u8 = 3;
const NONE: u32 = u32::MAX;

/// Vertex indices with their blocks. Blocks are symmetric: `v` lies in the
/// block of `x` exactly when `x` lies in the block of `v`.
struct Graph {
    params: HammingParams,
    kind: BitradeKind,
    blocks: Vec<Vec<u32>>,
}

impl Graph {
    fn new(params: HammingParams, kind: BitradeKind, ceiling: u64) -> Result<Self> {
        let count = params.enumerable()?;
        if count > ceiling {
            return Err(Error::Ceiling(format!(
                "{params} has {count} vertices; this search mode is limited to {ceiling}"
            )));
        }
        let (n, q) = (params.n(), params.q() as u64);
        let weights: Vec<u64> = (0..n).map(|i| q.pow((n - 1 - i) as u32)).collect();
        let blocks = (0..count)
            .map(|v| {
                let mut block = Vec::with_capacity(params.ball_size());
                if kind == BitradeKind::Perfect {
                    block.push(v as u32);
                }
                for &w in &weights {
                    let digit = (v / w) % q;
                    let base = v - digit * w;
                    for s in 0..q {
                        if s != digit {
                            block.push((base + s * w) as u32);
                        }
                    }
                }
                block
            })
            .collect();
        Ok(Self {
            params,
            kind,
            blocks,
        })
    }

    fn len(&self) -> usize {
        self.blocks.len()
    }

    fn block_size(&self) -> usize {
        self.blocks[0].len()
    }

    fn index(&self, symbols: &[u16]) -> u32 {
        let w = self.params.word(symbols.to_vec()).expect("valid symbols");
        self.params.index_of(&w) as u32
    }

    /// Top-level branches: each is a list of `(vertex, state)` assignments.
    ///
    /// With symmetry breaking, `0 ∈ T0` (translations act transitively and the
    /// parts may be swapped) and one more word is fixed using the stabilizer
    /// of `0`: for perfect bitrades the `T1` word in the ball of `0` is a
    /// neighbor of `0`, taken to be `(0,...,0,1)`; for spherical ones the
    /// sphere of `y = (0,...,0,1)` holds one `T1` word at distance 2 from `0`,
    /// taken to be `(0,...,0,1,1)`. The branches then split over the
    /// completions of the first unbalanced block.
    fn branches(&self, symmetry_breaking: bool) -> Vec<Vec<(u32, u8)>> {
        if !symmetry_breaking {
            // the least support word, taken in T0; smaller vertices are out
            return (0..self.len() as u32)
                .map(|v| {
                    let mut prefix: Vec<(u32, u8)> = (0..v).map(|u| (u, OUT)).collect();
                    prefix.push((v, 1));
                    prefix
                })
                .collect();
        }
        let prefix = self.seed_prefix();
        let never = AtomicBool::new(false);
        let mut probe = Dfs::new(self, usize::MAX, None, &never, false);
        if !probe.state.apply(&prefix) {
            return Vec::new();
        }
        match probe.state.pick_block() {
            Pick::Branch { part, candidates } if !candidates.is_empty() => candidates
                .into_iter()
                .map(|v| {
                    let mut p = prefix.clone();
                    p.push((v, part as u8 + 1));
                    p
                })
                .collect(),
            _ => vec![prefix],
        }
    }

    /// `0 ∈ T0` plus the second word fixed by the stabilizer of `0`.
    fn seed_prefix(&self) -> Vec<(u32, u8)> {
        let n = self.params.n();
        let mut prefix = vec![(0u32, 1u8)];
        let mut second = vec![0u16; n];
        second[n - 1] = 1;
        match self.kind {
            BitradeKind::Perfect => prefix.push((self.index(&second), 2)),
            BitradeKind::Spherical if n >= 2 => {
                second[n - 2] = 1;
                prefix.push((self.index(&second), 2));
            }
            BitradeKind::Spherical => {}
        }
        prefix
    }

    fn to_bitrade(&self, parts: &Parts) -> Result<Bitrade> {
        let code = |list: &Vec<u32>| {
            Code::from_words(
                self.params,
                list.iter().map(|&v| self.params.word_at(v as u64)),
            )
        };
        let mut b = Bitrade::new(code(&parts[0])?, code(&parts[1])?, self.kind)?;
        b.set_unverified(true);
        Ok(b)
    }
}

enum Pick {
    /// No unbalanced block: the assignment is a bitrade.
    Complete,
    /// Some unbalanced block has no completion, or the volume bound is hit.
    Dead,
    Branch {
        part: usize,
        candidates: Vec<u32>,
    },
}

/// Partial assignment. Every block holds at most one word per part, so a
/// block is empty, balanced, or missing exactly one part.
struct State<'g> {
    g: &'g Graph,
    part: Vec<u8>,
    counts: Vec<[u8; 2]>,
    /// Number of blocks through each vertex that already hold a word of part p.
    blocked: Vec<[u16; 2]>,
    /// Blocks missing exactly one part, as an indexed set.
    unbalanced: Vec<u32>,
    slot: Vec<u32>,
    missing: [usize; 2],
    placed: Vec<u32>,
    size: [usize; 2],
    bound: usize,
}

impl<'g> State<'g> {
    fn new(g: &'g Graph, bound: usize) -> Self {
        Self {
            g,
            part: vec![FREE; g.len()],
            counts: vec![[0, 0]; g.len()],
            blocked: vec![[0, 0]; g.len()],
            unbalanced: Vec::new(),
            slot: vec![NONE; g.len()],
            missing: [0, 0],
            placed: Vec::new(),
            size: [0, 0],
            bound,
        }
    }

    fn can_place(&self, v: u32, p: usize) -> bool {
        self.part[v as usize] == FREE && self.blocked[v as usize][p] == 0
    }

    /// Updates the unbalanced set and tallies after block `x` changed from `old`.
    fn update(&mut self, x: u32, old: [u8; 2]) {
        let new = self.counts[x as usize];
        let missing_part = |c: [u8; 2]| (c[0] != c[1]).then_some((c[0] != 0) as usize);
        if let Some(p) = missing_part(old) {
            self.missing[p] -= 1;
        }
        if let Some(p) = missing_part(new) {
            self.missing[p] += 1;
        }
        let was = self.slot[x as usize] != NONE;
        let now = new[0] != new[1];
        if now && !was {
            self.slot[x as usize] = self.unbalanced.len() as u32;
            self.unbalanced.push(x);
        } else if was && !now {
            let i = self.slot[x as usize];
            let last = *self.unbalanced.last().expect("tracked block");
            self.unbalanced.swap_remove(i as usize);
            if last != x {
                self.slot[last as usize] = i;
            }
            self.slot[x as usize] = NONE;
        }
    }

    fn place(&mut self, v: u32, p: usize) {
        debug_assert!(self.can_place(v, p));
        self.part[v as usize] = p as u8 + 1;
        let g = self.g;
        for &x in &g.blocks[v as usize] {
            let old = self.counts[x as usize];
            self.counts[x as usize][p] = 1;
            for &u in &g.blocks[x as usize] {
                self.blocked[u as usize][p] += 1;
            }
            self.update(x, old);
        }
        self.placed.push(v);
        self.size[p] += 1;
    }

    fn unplace(&mut self, v: u32) {
        let p = (self.part[v as usize] - 1) as usize;
        self.part[v as usize] = FREE;
        let g = self.g;
        for &x in &g.blocks[v as usize] {
            let old = self.counts[x as usize];
            self.counts[x as usize][p] = 0;
            for &u in &g.blocks[x as usize] {
                self.blocked[u as usize][p] -= 1;
            }
            self.update(x, old);
        }
        let popped = self.placed.pop();
        debug_assert_eq!(popped, Some(v));
        self.size[p] -= 1;
    }

    /// Applies a branch prefix; `false` if it is infeasible.
    fn apply(&mut self, prefix: &[(u32, u8)]) -> bool {
        for &(v, s) in prefix {
            if s == OUT {
                if self.part[v as usize] != FREE {
                    return false;
                }
                self.part[v as usize] = OUT;
            } else {
                let p = (s - 1) as usize;
                if !self.can_place(v, p) {
                    return false;
                }
                self.place(v, p);
            }
        }
        true
    }

    fn options(&self, x: u32, p: usize) -> usize {
        self.g.blocks[x as usize]
            .iter()
            .filter(|&&u| self.can_place(u, p))
            .count()
    }

    fn pick_block(&mut self) -> Pick {
        if self.unbalanced.is_empty() {
            return Pick::Complete;
        }
        // each new word of part p balances at most block_size blocks
        let bs = self.g.block_size();
        for p in 0..2 {
            if self.size[p] + self.missing[p].div_ceil(bs) > self.bound {
                return Pick::Dead;
            }
        }
        let mut best: Option<(usize, u32, usize)> = None;
        for &x in &self.unbalanced {
            let p = (self.counts[x as usize][0] != 0) as usize;
            let key = (self.options(x, p), x);
            if best.is_none_or(|(o, bx, _)| key < (o, bx)) {
                best = Some((key.0, x, p));
                if key.0 == 0 {
                    return Pick::Dead;
                }
            }
        }
        let (_, x, part) = best.expect("nonempty");
        let candidates = self.g.blocks[x as usize]
            .iter()
            .copied()
            .filter(|&u| self.can_place(u, part))
            .collect();
        Pick::Branch { part, candidates }
    }

    fn parts(&self) -> Parts {
        let mut parts: Parts = [Vec::new(), Vec::new()];
        for &v in &self.placed {
            parts[(self.part[v as usize] - 1) as usize].push(v);
        }
        parts[0].sort_unstable();
        parts[1].sort_unstable();
        parts
    }
}

#[derive(PartialEq, Eq)]
enum Flow {
    Continue,
    Stop,
}

struct Dfs<'g> {
    state: State<'g>,
    nodes: u64,
    deadline: Option<Instant>,
    aborted: &'g AtomicBool,
    collect_all: bool,
    found: Vec<Parts>,
    /// Dive mode: shuffles the candidates of every branch.
    shuffle: Option<ChaCha8Rng>,
    node_limit: Option<u64>,
}

impl<'g> Dfs<'g> {
    fn new(
        g: &'g Graph,
        bound: usize,
        deadline: Option<Instant>,
        aborted: &'g AtomicBool,
        collect_all: bool,
    ) -> Self {
        Self {
            state: State::new(g, bound),
            nodes: 0,
            deadline,
            aborted,
            collect_all,
            found: Vec::new(),
            shuffle: None,
            node_limit: None,
        }
    }

    fn descend(&mut self) -> Flow {
        self.nodes += 1;
        if self.nodes.is_multiple_of(4096) {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.aborted.store(true, Ordering::Relaxed);
                }
            }
        }
        if self.aborted.load(Ordering::Relaxed) || self.node_limit.is_some_and(|l| self.nodes > l) {
            return Flow::Stop;
        }
        match self.state.pick_block() {
            Pick::Complete => {
                self.found.push(self.state.parts());
                if self.collect_all {
                    Flow::Continue
                } else {
                    Flow::Stop
                }
            }
            Pick::Dead => Flow::Continue,
            Pick::Branch {
                part,
                mut candidates,
            } => {
                if let Some(rng) = self.shuffle.as_mut() {
                    candidates.shuffle(rng);
                }
                for v in candidates {
                    if self.state.size[part] + 1 > self.state.bound {
                        break;
                    }
                    self.state.place(v, part);
                    let flow = self.descend();
                    self.state.unplace(v);
                    if flow == Flow::Stop {
                        return Flow::Stop;
                    }
                }
                Flow::Continue
            }
        }
    }
}

fn exhaustive(cfg: &SearchConfig, kind: BitradeKind) -> Result<SearchResult> {
    let start = Instant::now();
    let graph = Graph::new(cfg.params, kind, EXHAUSTIVE_CEILING)?;
    let deadline = cfg.time_budget.map(|b| start + b);
    let aborted = AtomicBool::new(false);
    let branches = graph.branches(cfg.symmetry_breaking);
    let limit = cfg.volume_upper_bound.unwrap_or(graph.len() / 2);
    let mut nodes = 0u64;
    let mut best = None;
    for bound in 1..=limit {
        let outcomes: Vec<(u64, Option<Parts>)> = branches
            .par_iter()
            .map(|prefix| {
                let mut dfs = Dfs::new(&graph, bound, deadline, &aborted, false);
                if dfs.state.apply(prefix) {
                    dfs.descend();
                }
                (dfs.nodes, dfs.found.into_iter().next())
            })
            .collect();
        nodes += outcomes.iter().map(|o| o.0).sum::<u64>();
        if cfg.progress {
            eprintln!(
                "volume bound {bound}: {nodes} nodes, {:.1}s",
                start.elapsed().as_secs_f64()
            );
        }
        if aborted.load(Ordering::Relaxed) {
            break;
        }
        if let Some(parts) = outcomes.into_iter().find_map(|o| o.1) {
            best = Some(parts);
            break;
        }
    }
    let budget_exhausted = aborted.load(Ordering::Relaxed);
    let best = match best {
        Some(parts) => Some(certified(graph.to_bitrade(&parts)?)?),
        None => None,
    };
    Ok(SearchResult {
        kind,
        best,
        proven_minimum: !budget_exhausted,
        nodes_explored: nodes,
        wall_time: start.elapsed(),
        budget_exhausted,
    })
}

/// Runs the full verification suite; search never vouches for its own output.
fn certified(mut b: Bitrade) -> Result<Bitrade> {
    for report in verify_all(&b, DEFAULT_FACE_BUDGET, 0) {
        if !report.passed {
            return Err(Error::Domain(format!(
                "search produced an invalid bitrade: {report}"
            )));
        }
    }
    b.set_unverified(false);
    Ok(b)
}

/// Tabu search over vertex states `{free, T0, T1}` minimizing the number of
/// unbalanced or overfull blocks. One vertex stays pinned in `T0` so the
/// empty configuration is never reached.
struct Local<'g> {
    g: &'g Graph,
    part: Vec<u8>,
    counts: Vec<[u32; 2]>,
    violation: u64,
    size: [usize; 2],
    pinned: u32,
    tabu: std::collections::VecDeque<u32>,
    /// Violated blocks as an indexed set: `slot[x]` is the position of `x`
    /// in `violated`, or `NONE`.
    violated: Vec<u32>,
    slot: Vec<u32>,
}

fn block_violation(c: [u32; 2]) -> u64 {
    if c[0] == c[1] && c[0] <= 1 {
        0
    } else {
        (c[0].abs_diff(c[1]) + c[0].max(c[1]).saturating_sub(1)) as u64
    }
}

impl<'g> Local<'g> {
    fn new(g: &'g Graph, pinned: u32) -> Self {
        Self {
            g,
            part: vec![FREE; g.len()],
            counts: vec![[0, 0]; g.len()],
            violation: 0,
            size: [0, 0],
            pinned,
            tabu: Default::default(),
            violated: Vec::new(),
            slot: vec![NONE; g.len()],
        }
    }

    fn mark(&mut self, x: u32, bad: bool) {
        let i = self.slot[x as usize];
        if bad && i == NONE {
            self.slot[x as usize] = self.violated.len() as u32;
            self.violated.push(x);
        } else if !bad && i != NONE {
            let last = *self.violated.last().unwrap();
            self.violated.swap_remove(i as usize);
            if last != x {
                self.slot[last as usize] = i;
            }
            self.slot[x as usize] = NONE;
        }
    }

    /// Change in total violation if `v` moves to state `to` (0 free, 1/2 parts).
    fn delta(&self, v: u32, to: u8) -> i64 {
        let from = self.part[v as usize];
        let mut d = 0i64;
        for &x in &self.g.blocks[v as usize] {
            let c = self.counts[x as usize];
            let mut n = c;
            if from != FREE {
                n[(from - 1) as usize] -= 1;
            }
            if to != FREE {
                n[(to - 1) as usize] += 1;
            }
            d += block_violation(n) as i64 - block_violation(c) as i64;
        }
        d
    }

    fn set(&mut self, v: u32, to: u8) {
        let from = self.part[v as usize];
        let g = self.g;
        for &x in &g.blocks[v as usize] {
            let c = &mut self.counts[x as usize];
            let before = block_violation(*c);
            if from != FREE {
                c[(from - 1) as usize] -= 1;
            }
            if to != FREE {
                c[(to - 1) as usize] += 1;
            }
            let after = block_violation(*c);
            self.violation = self.violation + after - before;
            self.mark(x, after > 0);
        }
        if from != FREE {
            self.size[(from - 1) as usize] -= 1;
        }
        if to != FREE {
            self.size[(to - 1) as usize] += 1;
        }
        self.part[v as usize] = to;
    }

    fn parts(&self) -> Parts {
        let mut parts: Parts = [Vec::new(), Vec::new()];
        for (v, &s) in self.part.iter().enumerate() {
            if s != FREE {
                parts[(s - 1) as usize].push(v as u32);
            }
        }
        parts
    }

    fn violated_block(&self, rng: &mut ChaCha8Rng) -> Option<u32> {
        if self.violated.is_empty() {
            None
        } else {
            Some(self.violated[rng.random_range(0..self.violated.len())])
        }
    }

    fn step(&mut self, rng: &mut ChaCha8Rng, best_violation: u64) -> bool {
        let Some(x) = self.violated_block(rng) else {
            return false;
        };
        let mut moves: Vec<(i64, u32, u8)> = Vec::new();
        for &v in &self.g.blocks[x as usize] {
            if v == self.pinned {
                continue;
            }
            for to in [FREE, 1, 2] {
                if to == self.part[v as usize] {
                    continue;
                }
                let d = self.delta(v, to);
                let tabu = self.tabu.contains(&v);
                let aspiration = (self.violation as i64 + d) < best_violation as i64;
                if !tabu || aspiration {
                    moves.push((d, v, to));
                }
            }
        }
        if moves.is_empty() {
            return false;
        }
        let best = moves.iter().map(|m| m.0).min().unwrap();
        let ties: Vec<_> = moves.into_iter().filter(|m| m.0 == best).collect();
        let (_, v, to) = ties[rng.random_range(0..ties.len())];
        self.set(v, to);
        self.tabu.push_back(v);
        if self.tabu.len() > TABU_TENURE {
            self.tabu.pop_front();
        }
        true
    }
}

struct RestartOutcome {
    best: Option<Parts>,
    steps: u64,
}

fn local_restart(
    g: &Graph,
    cfg: &SearchConfig,
    seed: u64,
    deadline: Option<Instant>,
    initial: Option<&Parts>,
) -> RestartOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target = cfg.volume_upper_bound;
    let pinned = initial.map_or(0, |p| p[0][0]);
    let reset = |local: &mut Local, rng: &mut ChaCha8Rng| {
        for v in 0..g.len() as u32 {
            if local.part[v as usize] != FREE {
                local.set(v, FREE);
            }
        }
        match initial {
            Some(parts) => {
                for (p, list) in parts.iter().enumerate() {
                    for &v in list {
                        local.set(v, p as u8 + 1);
                    }
                }
            }
            None => {
                local.set(pinned, 1);
                let nb = g.blocks[pinned as usize]
                    .iter()
                    .copied()
                    .filter(|&u| u != pinned)
                    .nth(rng.random_range(0..g.params.sphere_size()))
                    .unwrap();
                if g.kind == BitradeKind::Perfect {
                    local.set(nb, 2);
                }
            }
        }
        local.tabu.clear();
    };
    let mut local = Local::new(g, pinned);
    reset(&mut local, &mut rng);
    let mut best: Option<Parts> = None;
    let mut best_violation = local.violation;
    let mut since_improvement = 0u64;
    let mut steps = 0u64;
    while steps < cfg.max_steps {
        if local.violation == 0 {
            let vol = local.size[0];
            let better = best.as_ref().is_none_or(|b| vol < b[0].len());
            if better {
                best = Some(local.parts());
            }
            if target.is_none_or(|t| vol <= t) {
                break;
            }
            // too large: start over from a fresh seed
            reset(&mut local, &mut rng);
            best_violation = local.violation;
            since_improvement = 0;
        }
        if steps.is_multiple_of(256) && deadline.is_some_and(|d| Instant::now() >= d) {
            break;
        }
        if !local.step(&mut rng, best_violation) || since_improvement > STAGNATION_STEPS {
            reset(&mut local, &mut rng);
            best_violation = local.violation;
            since_improvement = 0;
        }
        steps += 1;
        if local.violation < best_violation {
            best_violation = local.violation;
            since_improvement = 0;
        } else {
            since_improvement += 1;
        }
    }
    RestartOutcome { best, steps }
}

fn local(cfg: &SearchConfig, kind: BitradeKind) -> Result<SearchResult> {
    let start = Instant::now();
    let graph = Graph::new(cfg.params, kind, LOCAL_CEILING)?;
    let deadline = cfg.time_budget.map(|b| start + b);
    let initial: Option<Parts> = match &cfg.initial {
        Some(b) => {
            if b.params() != cfg.params || b.kind() != kind {
                return param(format!(
                    "initial bitrade is a {} one in {}, expected {kind} in {}",
                    b.kind(),
                    b.params(),
                    cfg.params
                ));
            }
            if b.t0().is_empty() {
                return param("initial bitrade has an empty T0");
            }
            let idx = |c: &Code| {
                c.iter()
                    .map(|w| cfg.params.index_of(w) as u32)
                    .collect::<Vec<_>>()
            };
            Some([idx(b.t0()), idx(b.t1())])
        }
        None => None,
    };
    let restarts = cfg.restarts.max(1) as u64;
    let outcomes: Vec<RestartOutcome> = (0..restarts)
        .into_par_iter()
        .map(|i| {
            local_restart(
                &graph,
                cfg,
                cfg.seed.wrapping_add(i),
                deadline,
                initial.as_ref(),
            )
        })
        .collect();
    let nodes = outcomes.iter().map(|o| o.steps).sum();
    let best_parts = outcomes
        .into_iter()
        .filter_map(|o| o.best)
        .min_by_key(|p| p[0].len());
    let best = match best_parts {
        Some(parts) => Some(certified(graph.to_bitrade(&parts)?)?),
        None => None,
    };
    Ok(SearchResult {
        kind,
        best,
        proven_minimum: false,
        nodes_explored: nodes,
        wall_time: start.elapsed(),
        budget_exhausted: deadline.is_some_and(|d| Instant::now() >= d),
    })
}

/// Luby restart sequence 1, 1, 2, 1, 1, 2, 4, ... for `i >= 1`.
fn luby(mut i: u64) -> u64 {
    loop {
        let k = 64 - i.leading_zeros();
        if i == (1u64 << k) - 1 {
            return 1 << (k - 1);
        }
        i -= (1u64 << (k - 1)) - 1;
    }
}

/// Restart `i` of a dive: shuffled candidate order from `seed + i` and a
/// node limit of `max_steps * luby(i + 1)`.
fn dive_restart(
    graph: &Graph,
    cfg: &SearchConfig,
    i: u64,
    bound: usize,
    deadline: Option<Instant>,
    aborted: &AtomicBool,
) -> (u64, Option<Parts>) {
    let mut dfs = Dfs::new(graph, bound, deadline, aborted, false);
    dfs.shuffle = Some(ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(i)));
    dfs.node_limit = Some(cfg.max_steps.max(1).saturating_mul(luby(i + 1)));
    if dfs.state.apply(&graph.seed_prefix()) {
        dfs.descend();
    }
    (dfs.nodes, dfs.found.into_iter().next())
}

/// Stops at the first bitrade within the volume bound, at the deadline, or
/// after `DIVE_MAX_RESTARTS` restarts.
fn dive(cfg: &SearchConfig, kind: BitradeKind) -> Result<SearchResult> {
    let start = Instant::now();
    let graph = Graph::new(cfg.params, kind, LOCAL_CEILING)?;
    let deadline = cfg.time_budget.map(|b| start + b);
    let aborted = AtomicBool::new(false);
    let bound = cfg.volume_upper_bound.unwrap_or(usize::MAX);
    let batch = cfg.restarts.max(1) as u64;
    let mut nodes = 0u64;
    let mut best = None;
    let mut first = 0u64;
    while first < DIVE_MAX_RESTARTS && !aborted.load(Ordering::Relaxed) {
        let last = (first + batch).min(DIVE_MAX_RESTARTS);
        let outcomes: Vec<(u64, Option<Parts>)> = (first..last)
            .into_par_iter()
            .map(|i| dive_restart(&graph, cfg, i, bound, deadline, &aborted))
            .collect();
        nodes += outcomes.iter().map(|o| o.0).sum::<u64>();
        if cfg.progress {
            eprintln!(
                "restarts {first}..{last}: {nodes} nodes, {:.1}s",
                start.elapsed().as_secs_f64()
            );
        }
        if let Some(parts) = outcomes.into_iter().find_map(|o| o.1) {
            best = Some(parts);
            break;
        }
        first = last;
    }
    let best = match best {
        Some(parts) => Some(certified(graph.to_bitrade(&parts)?)?),
        None => None,
    };
    Ok(SearchResult {
        kind,
        best,
        proven_minimum: false,
        nodes_explored: nodes,
        wall_time: start.elapsed(),
        budget_exhausted: aborted.load(Ordering::Relaxed),
    })
}
