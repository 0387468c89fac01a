//! Finite connected covers of a rose, encoded as transitive permutation
//! tuples, and the search for covers in which a curve lifts to a simple
//! closed curve.
//!
//! Covers are enumerated as based covers (equivalently, finite-index
//! subgroups of the free group). Sheets are numbered by first visit in a
//! breadth-first scan from sheet 0 reading `a, A, b, B, ...`, so every
//! subgroup appears exactly once. Partial tables are filled in that scan
//! order; a new sheet may only be introduced as the next unused number,
//! which prunes every non-canonical prefix.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::intersection::{is_simple_path, CurvePath};
use crate::ribbon::{cover_ribbon, Dart, RibbonGraph};
use crate::word::CyclicWord;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<usize>,
    preimages: Vec<usize>,
}

impl Perm {
    pub fn identity(d: usize) -> Self {
        Self { images: (0..d).collect(), preimages: (0..d).collect() }
    }

    /// Builds a permutation of `0..d` from its image array.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let d = images.len();
        let mut preimages = vec![usize::MAX; d];
        for (i, &t) in images.iter().enumerate() {
            if t >= d || preimages[t] != usize::MAX {
                return Err(Error::InvalidCover(format!("{images:?} is not a permutation")));
            }
            preimages[t] = i;
        }
        Ok(Self { images, preimages })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn preimage(&self, i: usize) -> usize {
        self.preimages[i]
    }

    pub fn inverse(&self) -> Self {
        Self { images: self.preimages.clone(), preimages: self.images.clone() }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Perm) -> Self {
        let images = self.images.iter().map(|&i| next.image(i)).collect();
        Self::from_images(images).expect("composition of permutations")
    }

    /// Cycles, each starting at its least element, ordered by that element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i);
                i = self.image(i);
            }
            out.push(cycle);
        }
        out
    }
}

/// A connected cover of a rose: one permutation of the sheets per generator.
/// `sigma(x)[i]` is the sheet reached from sheet `i` along the `x` edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PermCover {
    sigmas: Vec<Perm>,
}

impl PermCover {
    pub fn new(sigmas: Vec<Perm>) -> Result<Self> {
        let Some(first) = sigmas.first() else {
            return Err(Error::InvalidCover("no generators".into()));
        };
        let d = first.degree();
        if d == 0 {
            return Err(Error::InvalidCover("degree 0".into()));
        }
        if sigmas.iter().any(|s| s.degree() != d) {
            return Err(Error::InvalidCover("permutations of different degrees".into()));
        }
        let cover = Self { sigmas };
        if cover.bfs_order().len() != d {
            return Err(Error::InvalidCover("action is not transitive".into()));
        }
        Ok(cover)
    }

    pub fn from_images(images: Vec<Vec<usize>>) -> Result<Self> {
        Self::new(images.into_iter().map(Perm::from_images).collect::<Result<_>>()?)
    }

    pub fn identity(rank: usize) -> Self {
        Self { sigmas: vec![Perm::identity(1); rank] }
    }

    pub fn degree(&self) -> usize {
        self.sigmas[0].degree()
    }

    pub fn rank(&self) -> usize {
        self.sigmas.len()
    }

    pub fn sigma(&self, generator: usize) -> &Perm {
        &self.sigmas[generator]
    }

    pub fn sigmas(&self) -> &[Perm] {
        &self.sigmas
    }

    /// Sheets in order of first visit from sheet 0 reading `a, A, b, B, ...`.
    fn bfs_order(&self) -> Vec<usize> {
        let d = self.degree();
        let mut label = vec![usize::MAX; d];
        let mut order = vec![0];
        label[0] = 0;
        let mut queue = VecDeque::from([0]);
        while let Some(s) = queue.pop_front() {
            for sigma in &self.sigmas {
                for t in [sigma.image(s), sigma.preimage(s)] {
                    if label[t] == usize::MAX {
                        label[t] = order.len();
                        order.push(t);
                        queue.push_back(t);
                    }
                }
            }
        }
        order
    }

    /// Relabels sheets into breadth-first first-visit order.
    pub fn canonical(&self) -> Self {
        let order = self.bfs_order();
        let mut relabel = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            relabel[old] = new;
        }
        let sigmas = self
            .sigmas
            .iter()
            .map(|s| {
                let mut images = vec![0; order.len()];
                for (new, &old) in order.iter().enumerate() {
                    images[new] = relabel[s.image(old)];
                }
                Perm::from_images(images).expect("relabeling preserves bijectivity")
            })
            .collect();
        Self { sigmas }
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical() == *self
    }

    fn check_rank(&self, word: &CyclicWord) -> Result<()> {
        if word.rank() != self.rank() {
            return Err(Error::RankMismatch { expected: self.rank(), found: word.rank() });
        }
        Ok(())
    }
}

/// The sheet permutation obtained by reading `word` letter by letter.
pub fn sigma_of_word(cover: &PermCover, word: &CyclicWord) -> Result<Perm> {
    cover.check_rank(word)?;
    let images = (0..cover.degree()).map(|s| end_sheet(cover, word, s)).collect();
    Perm::from_images(images)
}

fn end_sheet(cover: &PermCover, word: &CyclicWord, mut s: usize) -> usize {
    for l in word.letters() {
        let sigma = cover.sigma(l.generator);
        s = if l.inverse { sigma.preimage(s) } else { sigma.image(s) };
    }
    s
}

/// A component of the preimage of a closed curve in a cover.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Elevation {
    pub start_sheet: usize,
    pub traversal_degree: usize,
    pub path: CurvePath,
}

/// Darts traversed by the lift of `word^times` starting at `start`, in the
/// graph built by [`cover_ribbon`].
fn lift_darts(cover: &PermCover, word: &CyclicWord, start: usize, times: usize) -> Vec<Dart> {
    let d = cover.degree();
    let mut s = start;
    let mut darts = Vec::with_capacity(word.len() * times);
    for _ in 0..times {
        for l in word.letters() {
            let sigma = cover.sigma(l.generator);
            if l.inverse {
                s = sigma.preimage(s);
                darts.push(Dart::head(l.generator * d + s));
            } else {
                darts.push(Dart::tail(l.generator * d + s));
                s = sigma.image(s);
            }
        }
    }
    darts
}

/// One elevation per cycle of the word's sheet permutation.
pub fn elevations(base: &RibbonGraph, cover: &PermCover, word: &CyclicWord) -> Result<Vec<Elevation>> {
    let graph = cover_ribbon(base, cover)?;
    elevations_in(&graph, cover, word)
}

/// As [`elevations`], reusing an already built cover graph.
pub fn elevations_in(graph: &RibbonGraph, cover: &PermCover, word: &CyclicWord) -> Result<Vec<Elevation>> {
    word.require_root()?;
    let sigma = sigma_of_word(cover, word)?;
    sigma
        .cycles()
        .into_iter()
        .map(|cycle| {
            let m = cycle.len();
            let path = CurvePath::new(graph, lift_darts(cover, word, cycle[0], m))?;
            Ok(Elevation { start_sheet: cycle[0], traversal_degree: m, path })
        })
        .collect()
}

/// Number of index-`d` subgroups of the free group of the given rank, by
/// M. Hall's recursion `a_d = d (d!)^(r-1) - sum_{k<d} ((d-k)!)^(r-1) a_k`.
pub fn hall_count(rank: usize, d: usize) -> u128 {
    assert!(d >= 1, "degree must be positive");
    let fact: Vec<u128> = (0..=d).scan(1u128, |f, k| {
        if k > 0 {
            *f *= k as u128;
        }
        Some(*f)
    })
    .collect();
    let pow = |x: u128| x.pow(rank.saturating_sub(1) as u32);
    let mut a = vec![0u128; d + 1];
    for n in 1..=d {
        let mut value = n as u128 * pow(fact[n]);
        for k in 1..n {
            value -= pow(fact[n - k]) * a[k];
        }
        a[n] = value;
    }
    a[d]
}

const UNSET: u32 = u32::MAX;

/// A partially filled coset table in canonical scan order.
#[derive(Debug, Clone)]
struct Partial {
    rank: usize,
    degree: usize,
    fwd: Vec<Vec<u32>>,
    bwd: Vec<Vec<u32>>,
    sheets: usize,
    scan: usize,
}

enum Step {
    Complete,
    Dead,
    Branch(Vec<Partial>),
}

impl Partial {
    fn root(rank: usize, degree: usize) -> Self {
        Self {
            rank,
            degree,
            fwd: vec![vec![UNSET; degree]; rank],
            bwd: vec![vec![UNSET; degree]; rank],
            sheets: 1,
            scan: 0,
        }
    }

    fn entry(&self, pos: usize) -> (usize, usize, bool) {
        let cols = 2 * self.rank;
        (pos / cols, (pos % cols) / 2, pos % 2 == 1)
    }

    fn is_set(&self, pos: usize) -> bool {
        let (s, g, inverse) = self.entry(pos);
        let table = if inverse { &self.bwd } else { &self.fwd };
        table[g][s] != UNSET
    }

    fn step(&self) -> Step {
        let mut pos = self.scan;
        while pos < self.sheets * 2 * self.rank && self.is_set(pos) {
            pos += 1;
        }
        let (s, g, inverse) = self.entry(pos);
        if s >= self.sheets {
            return if self.sheets == self.degree { Step::Complete } else { Step::Dead };
        }
        let free_target = |t: usize| {
            let opposite = if inverse { &self.fwd } else { &self.bwd };
            opposite[g][t] == UNSET
        };
        let mut children = Vec::new();
        let mut targets: Vec<usize> = (0..self.sheets).filter(|&t| free_target(t)).collect();
        if self.sheets < self.degree {
            targets.push(self.sheets);
        }
        for t in targets {
            let mut child = self.clone();
            if t == child.sheets {
                child.sheets += 1;
            }
            let (from, to) = if inverse { (t, s) } else { (s, t) };
            child.fwd[g][from] = to as u32;
            child.bwd[g][to] = from as u32;
            child.scan = pos + 1;
            children.push(child);
        }
        Step::Branch(children)
    }

    fn to_cover(&self) -> PermCover {
        let sigmas = self
            .fwd
            .iter()
            .map(|row| {
                Perm::from_images(row.iter().map(|&t| t as usize).collect())
                    .expect("complete coset table rows are permutations")
            })
            .collect();
        PermCover { sigmas }
    }

    fn walk(&self, visit: &mut dyn FnMut(PermCover)) {
        match self.step() {
            Step::Complete => visit(self.to_cover()),
            Step::Dead => {}
            Step::Branch(children) => {
                for c in children {
                    c.walk(visit);
                }
            }
        }
    }
}

/// Shards at least this many, when the tree is wide enough.
const TARGET_SHARDS: usize = 256;

/// Splits the enumeration tree into independent subtrees, listed in the
/// order a sequential depth-first walk would visit them.
fn shards(rank: usize, degree: usize) -> Vec<Partial> {
    let mut frontier = vec![Partial::root(rank, degree)];
    loop {
        if frontier.len() >= TARGET_SHARDS {
            return frontier;
        }
        let mut next = Vec::with_capacity(frontier.len() * 2);
        let mut grew = false;
        for p in frontier {
            match p.step() {
                Step::Branch(children) => {
                    grew = true;
                    next.extend(children);
                }
                Step::Complete => next.push(p),
                Step::Dead => {}
            }
        }
        frontier = next;
        if !grew {
            return frontier;
        }
    }
}

/// Visits every connected degree-`d` cover once, in canonical order.
pub fn enumerate_covers(rank: usize, degree: usize, mut visitor: impl FnMut(&PermCover)) -> u64 {
    assert!(degree >= 1, "degree must be positive");
    let mut count = 0;
    Partial::root(rank, degree).walk(&mut |c| {
        count += 1;
        visitor(&c);
    });
    count
}

/// Folds each shard independently and returns the per-shard results in
/// canonical order.
pub fn fold_covers<T, I, F>(rank: usize, degree: usize, mode: Execution, init: I, fold: F) -> Vec<T>
where
    T: Send,
    I: Fn() -> T + Sync,
    F: Fn(T, &PermCover) -> T + Sync,
{
    assert!(degree >= 1, "degree must be positive");
    exec::map_ordered(shards(rank, degree), mode, |shard| {
        let mut acc = Some(init());
        shard.walk(&mut |c| {
            let a = acc.take().expect("accumulator present");
            acc = Some(fold(a, &c));
        });
        acc.expect("accumulator present")
    })
}

pub fn count_covers(rank: usize, degree: usize, mode: Execution) -> u64 {
    fold_covers(rank, degree, mode, || 0u64, |n, _| n + 1).into_iter().sum()
}

/// All connected degree-`d` covers in canonical order.
pub fn covers_of_degree(rank: usize, degree: usize, mode: Execution) -> Vec<PermCover> {
    fold_covers(rank, degree, mode, Vec::new, |mut v, c| {
        v.push(c.clone());
        v
    })
    .into_iter()
    .flatten()
    .collect()
}

/// A cover together with a closed lift of the curve that is simple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftWitness {
    pub cover: PermCover,
    pub elevation: Elevation,
}

impl LiftWitness {
    pub fn degree(&self) -> usize {
        self.cover.degree()
    }

    fn key(&self) -> (&PermCover, usize) {
        (&self.cover, self.elevation.start_sheet)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LiftSearch {
    Found(LiftWitness),
    NotFoundUpTo(usize),
}

/// The least start sheet of a closed lift of `word` in `cover` that is simple.
pub fn simple_closed_lift(base: &RibbonGraph, cover: &PermCover, word: &CyclicWord) -> Result<Option<LiftWitness>> {
    let sigma = sigma_of_word(cover, word)?;
    let fixed: Vec<usize> = (0..cover.degree()).filter(|&s| sigma.image(s) == s).collect();
    if fixed.is_empty() {
        return Ok(None);
    }
    let graph = cover_ribbon(base, cover)?;
    for s in fixed {
        let path = CurvePath::new(&graph, lift_darts(cover, word, s, 1))?;
        if is_simple_path(&graph, &path)? {
            let elevation = Elevation { start_sheet: s, traversal_degree: 1, path };
            return Ok(Some(LiftWitness { cover: cover.clone(), elevation }));
        }
    }
    Ok(None)
}

fn better(a: Option<LiftWitness>, b: Option<LiftWitness>) -> Option<LiftWitness> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if y.key() < x.key() { y } else { x }),
        (x, None) => x,
        (None, y) => y,
    }
}

fn merge(results: Vec<Result<Option<LiftWitness>>>) -> Result<Option<LiftWitness>> {
    results.into_iter().try_fold(None, |best, r| Ok(better(best, r?)))
}

/// The least witness (ordered by sheet permutations, then start sheet)
/// among all connected covers of degree `d`.
pub fn simple_lift_at_degree(
    base: &RibbonGraph,
    word: &CyclicWord,
    degree: usize,
    mode: Execution,
) -> Result<Option<LiftWitness>> {
    word.require_root()?;
    let rank = base.edge_count();
    if word.rank() != rank {
        return Err(Error::RankMismatch { expected: rank, found: word.rank() });
    }
    let results = fold_covers(rank, degree, mode, || Ok(None), |acc: Result<Option<LiftWitness>>, c| {
        let best = acc?;
        Ok(better(best, simple_closed_lift(base, c, word)?))
    });
    merge(results)
}

/// As [`simple_lift_at_degree`] over a precomputed list of covers.
pub fn simple_lift_among(
    base: &RibbonGraph,
    word: &CyclicWord,
    covers: &[PermCover],
    mode: Execution,
) -> Result<Option<LiftWitness>> {
    word.require_root()?;
    let results = exec::map_ordered(covers.chunks(64).collect(), mode, |chunk| {
        chunk.iter().try_fold(None, |best, c| Ok(better(best, simple_closed_lift(base, c, word)?)))
    });
    merge(results)
}

/// Least degree of a connected cover in which `word` has a simple closed
/// lift, searching degrees `1..=cap`.
pub fn min_simple_lift_degree(base: &RibbonGraph, word: &CyclicWord, cap: usize, mode: Execution) -> Result<LiftSearch> {
    min_simple_lift_degree_with(word, cap, |d| simple_lift_at_degree(base, word, d, mode))
}

/// Degree-by-degree search with a caller-supplied per-degree search.
pub fn min_simple_lift_degree_with(
    word: &CyclicWord,
    cap: usize,
    mut at_degree: impl FnMut(usize) -> Result<Option<LiftWitness>>,
) -> Result<LiftSearch> {
    word.require_root()?;
    for d in 1..=cap {
        if let Some(w) = at_degree(d)? {
            return Ok(LiftSearch::Found(w));
        }
    }
    Ok(LiftSearch::NotFoundUpTo(cap))
}
