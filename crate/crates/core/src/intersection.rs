//! Self-intersection numbers of closed curves carried by ribbon graphs.
//!
//! A closed edge path is pulled taut so that all double points sit inside
//! vertex disks. Lift the path to the universal cover, a planar tree whose
//! ends are circularly ordered. Two lifts cross exactly when their endpoint
//! pairs interleave, and interleaving lifts share a finite segment of the
//! tree. Each such segment contributes one double point, which is assigned
//! to a single pair of passages at one end of the segment.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ribbon::{Dart, RibbonGraph, EDGE_A, EDGE_B};
use crate::word::CyclicWord;

/// A closed, reduced, primitive edge path, stored as the darts it leaves
/// through in order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurvePath {
    darts: Vec<Dart>,
}

/// One visit of the path to a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VertexPassage {
    pub index: usize,
    pub vertex: usize,
    pub incoming: Dart,
    pub outgoing: Dart,
}

impl CurvePath {
    pub fn new(graph: &RibbonGraph, darts: Vec<Dart>) -> Result<Self> {
        let n = darts.len();
        if n == 0 {
            return Err(Error::Domain("empty curve path".into()));
        }
        for (k, d) in darts.iter().enumerate() {
            if d.edge >= graph.edge_count() {
                return Err(Error::Domain(format!("dart {d:?} is not in the graph")));
            }
            let next = darts[(k + 1) % n];
            if graph.vertex_of(d.opposite()) != graph.vertex_of(next) {
                return Err(Error::Domain(format!("path is not connected after step {k}")));
            }
            if next == d.opposite() {
                return Err(Error::Domain(format!("path backtracks after step {k}")));
            }
        }
        let exponent = cyclic_exponent(&darts);
        if exponent != 1 {
            return Err(Error::NonPrimitive { exponent });
        }
        Ok(Self { darts })
    }

    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }

    pub fn darts(&self) -> &[Dart] {
        &self.darts
    }

    fn out(&self, i: isize) -> Dart {
        self.darts[i.rem_euclid(self.darts.len() as isize) as usize]
    }

    fn inc(&self, i: isize) -> Dart {
        self.out(i - 1).opposite()
    }

    pub fn passage(&self, graph: &RibbonGraph, index: usize) -> VertexPassage {
        let i = index as isize;
        VertexPassage {
            index,
            vertex: graph.vertex_of(self.out(i)),
            incoming: self.inc(i),
            outgoing: self.out(i),
        }
    }

    pub fn passages(&self, graph: &RibbonGraph) -> Vec<VertexPassage> {
        (0..self.len()).map(|i| self.passage(graph, i)).collect()
    }

    /// Label word read along the path.
    pub fn word(&self, graph: &RibbonGraph) -> Result<CyclicWord> {
        let letters: Vec<_> = self.darts.iter().map(|&d| graph.letter(d)).collect();
        CyclicWord::from_letters(graph.label_count(), &letters)
    }
}

/// Largest `k` such that the cyclic sequence is a `k`-th power.
fn cyclic_exponent<T: PartialEq>(s: &[T]) -> usize {
    let n = s.len();
    (1..=n)
        .filter(|p| n.is_multiple_of(*p))
        .find(|&p| (p..n).all(|i| s[i] == s[i - p]))
        .map_or(1, |p| n / p)
}

/// Reads a word as an edge path around the single vertex of a rose.
pub fn as_path(word: &CyclicWord, graph: &RibbonGraph) -> Result<CurvePath> {
    if graph.vertex_count() != 1 {
        return Err(Error::NotARose(graph.vertex_count()));
    }
    if word.rank() != graph.label_count() {
        return Err(Error::RankMismatch { expected: graph.label_count(), found: word.rank() });
    }
    word.require_root()?;
    let mut edge_of_label = vec![usize::MAX; graph.label_count()];
    for (e, edge) in graph.edges().iter().enumerate() {
        edge_of_label[edge.label] = e;
    }
    let darts = word
        .letters()
        .iter()
        .map(|l| {
            let e = edge_of_label[l.generator];
            if l.inverse { Dart::head(e) } else { Dart::tail(e) }
        })
        .collect();
    CurvePath::new(graph, darts)
}

/// A ray in the universal cover starting at a passage, going forward or
/// backward along the path.
#[derive(Clone, Copy)]
struct Ray<'a> {
    path: &'a CurvePath,
    phase: isize,
    forward: bool,
}

impl Ray<'_> {
    fn departure(&self, k: isize) -> Dart {
        if self.forward {
            self.path.out(self.phase + k)
        } else {
            self.path.inc(self.phase - k)
        }
    }

    fn arrival(&self, k: isize) -> Dart {
        if self.forward {
            self.path.out(self.phase + k - 1).opposite()
        } else {
            self.path.out(self.phase - k)
        }
    }
}

/// Circular position of an end of the tree, cut just before the first dart
/// of the starting vertex: at each step the turn made relative to the
/// arrival dart.
fn step_key(graph: &RibbonGraph, ray: &Ray<'_>, k: isize) -> usize {
    let dep = ray.departure(k);
    if k == 0 {
        return graph.position(dep);
    }
    let arr = ray.arrival(k);
    let deg = graph.degree(graph.vertex_of(arr));
    (graph.position(dep) + deg - graph.position(arr)) % deg
}

fn compare_rays(graph: &RibbonGraph, r: &Ray<'_>, s: &Ray<'_>, bound: usize) -> Result<Ordering> {
    for k in 0..bound as isize {
        if r.departure(k) != s.departure(k) {
            return Ok(step_key(graph, r, k).cmp(&step_key(graph, s, k)));
        }
    }
    Err(Error::NonDivergent { bound })
}

fn divergence_bound(path: &CurvePath) -> usize {
    2 * path.len()
}

/// Whether the lifts through passages `i` and `j` (at the same vertex of a
/// common lift of that vertex) have interleaved endpoints.
pub fn linked(graph: &RibbonGraph, path: &CurvePath, i: usize, j: usize) -> Result<bool> {
    let bound = divergence_bound(path);
    let ray = |phase: usize, forward: bool| Ray { path, phase: phase as isize, forward };
    let (x_fwd, x_bwd) = (ray(i, true), ray(i, false));
    let (x_lo, x_hi) = match compare_rays(graph, &x_fwd, &x_bwd, bound)? {
        Ordering::Less => (x_fwd, x_bwd),
        _ => (x_bwd, x_fwd),
    };
    let between = |y: Ray<'_>| -> Result<bool> {
        Ok(compare_rays(graph, &x_lo, &y, bound)? == Ordering::Less
            && compare_rays(graph, &y, &x_hi, bound)? == Ordering::Less)
    };
    Ok(between(ray(j, true))? != between(ray(j, false))?)
}

/// Whether the strand through passage `p` shares no edge with the strand
/// through `q` on its incoming side.
fn incoming_free(path: &CurvePath, p: usize, q: usize) -> bool {
    let (p, q) = (p as isize, q as isize);
    let inc = path.inc(p);
    inc != path.inc(q) && inc != path.out(q)
}

/// Whether the two strands through passages `i` and `j` of the same vertex
/// cross inside that vertex disk.
///
/// A crossing is placed at the start of the shared segment of the two lifts.
/// For oppositely oriented strands the segment has two starts; the one with
/// the lexicographically smaller passage pair wins.
pub fn crossing(graph: &RibbonGraph, path: &CurvePath, i: usize, j: usize) -> Result<bool> {
    if i == j {
        return Err(Error::Domain("crossing needs two distinct passages".into()));
    }
    let n = path.len();
    if i >= n || j >= n {
        return Err(Error::Domain("passage index out of range".into()));
    }
    if graph.vertex_of(path.out(i as isize)) != graph.vertex_of(path.out(j as isize)) {
        return Ok(false);
    }
    let free_i = incoming_free(path, i, j);
    let free_j = incoming_free(path, j, i);
    if !free_i && !free_j {
        return Ok(false);
    }
    if !linked(graph, path, i, j)? {
        return Ok(false);
    }
    if free_i && free_j {
        return Ok(true);
    }
    // Antiparallel shared segment: `x` leaves along the edge `y` arrives on.
    let (x, y) = if free_i { (i as isize, j as isize) } else { (j as isize, i as isize) };
    let bound = divergence_bound(path) as isize;
    let mut m = 0;
    while path.out(x + m) == path.inc(y - m) {
        m += 1;
        if m > bound {
            return Err(Error::NonDivergent { bound: bound as usize });
        }
    }
    let wrap = |k: isize| k.rem_euclid(n as isize) as usize;
    let here = sorted(i, j);
    let there = sorted(wrap(x + m), wrap(y - m));
    Ok(here < there)
}

fn sorted(a: usize, b: usize) -> (usize, usize) {
    if a <= b { (a, b) } else { (b, a) }
}

/// Unordered passage pairs that cross.
pub fn crossing_pairs(graph: &RibbonGraph, path: &CurvePath) -> Result<Vec<(usize, usize)>> {
    let n = path.len();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if crossing(graph, path, i, j)? {
                pairs.push((i, j));
            }
        }
    }
    Ok(pairs)
}

pub fn path_self_intersection(graph: &RibbonGraph, path: &CurvePath) -> Result<usize> {
    Ok(crossing_pairs(graph, path)?.len())
}

/// Geometric self-intersection number of a primitive word on a rose.
pub fn self_intersection(word: &CyclicWord, graph: &RibbonGraph) -> Result<usize> {
    path_self_intersection(graph, &as_path(word, graph)?)
}

pub fn is_simple(word: &CyclicWord, graph: &RibbonGraph) -> Result<bool> {
    Ok(self_intersection(word, graph)? == 0)
}

pub fn is_simple_path(graph: &RibbonGraph, path: &CurvePath) -> Result<bool> {
    Ok(path_self_intersection(graph, path)? == 0)
}

/// The orientation-preserving symmetry of the pants rose exchanging the two
/// generator cuffs: `a -> B`, `b -> A`.
pub fn pants_symmetry(word: &CyclicWord) -> Result<CyclicWord> {
    use crate::word::Letter;
    debug_assert_eq!((EDGE_A, EDGE_B), (0, 1));
    word.substitute(&[vec![Letter::inv(1)], vec![Letter::inv(0)]], 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ribbon::pants_base;
    use crate::word::gamma_n;

    fn w(s: &str) -> CyclicWord {
        CyclicWord::parse(s, 2).unwrap()
    }

    fn iota(s: &str) -> usize {
        self_intersection(&w(s), &pants_base()).unwrap()
    }

    /// Half the number of ordered passage pairs that are linked and whose
    /// first strand starts the shared segment.
    fn ordered_count(graph: &RibbonGraph, path: &CurvePath) -> usize {
        let n = path.len();
        let mut total = 0;
        for i in 0..n {
            for j in 0..n {
                if i != j
                    && graph.vertex_of(path.out(i as isize)) == graph.vertex_of(path.out(j as isize))
                    && incoming_free(path, i, j)
                    && linked(graph, path, i, j).unwrap()
                {
                    total += 1;
                }
            }
        }
        assert_eq!(total % 2, 0);
        total / 2
    }

    #[test]
    fn as_path_examples() {
        let p = pants_base();
        assert_eq!(as_path(&w("a"), &p).unwrap().len(), 1);
        assert_eq!(as_path(&w("abbbb"), &p).unwrap().len(), 5);
        assert_eq!(as_path(&w("abab"), &p), Err(Error::NonPrimitive { exponent: 2 }));
    }

    #[test]
    fn gamma_series_small() {
        assert_eq!(iota("a"), 0);
        assert_eq!(iota("ab"), 1);
        assert_eq!(iota("abb"), 2);
        assert_eq!(iota("abbbb"), 4);
    }

    #[test]
    fn boundary_parallel_curve_is_simple() {
        let p = pants_base();
        assert_eq!(iota("aB"), 0);
        let path = as_path(&w("aB"), &p).unwrap();
        assert!(!crossing(&p, &path, 0, 1).unwrap());
        assert!(!crossing(&p, &path, 1, 0).unwrap());
    }

    #[test]
    fn ab_passages_cross() {
        let p = pants_base();
        let path = as_path(&w("ab"), &p).unwrap();
        assert!(crossing(&p, &path, 0, 1).unwrap());
    }

    #[test]
    fn gamma_four_has_four_crossing_pairs() {
        let p = pants_base();
        let path = as_path(&gamma_n(4), &p).unwrap();
        assert_eq!(crossing_pairs(&p, &path).unwrap().len(), 4);
    }

    #[test]
    fn crossing_is_symmetric() {
        let p = pants_base();
        for s in ["abbAB", "aabAbbAB", "abABaB", "aaBaBBabb"] {
            let path = as_path(&w(s), &p).unwrap();
            for i in 0..path.len() {
                for j in 0..path.len() {
                    if i != j {
                        assert_eq!(
                            crossing(&p, &path, i, j).unwrap(),
                            crossing(&p, &path, j, i).unwrap(),
                            "{s} {i} {j}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn placement_matches_ordered_count() {
        let p = pants_base();
        for s in ["abbAB", "aabAbbAB", "abABaB", "aaBaBBabb", "aabb", "aaabAAB", "abAB"] {
            let path = as_path(&w(s), &p).unwrap();
            assert_eq!(path_self_intersection(&p, &path).unwrap(), ordered_count(&p, &path), "{s}");
        }
    }

    #[test]
    fn mirrored_gamma_series() {
        // a^n b is the image of (a b^n)^-1 under the cuff-swapping symmetry.
        assert_eq!(iota("aab"), 2);
        assert_eq!(iota("aaab"), 3);
    }

    #[test]
    fn symmetry_swaps_the_cuffs() {
        assert_eq!(pants_symmetry(&w("a")).unwrap(), w("B"));
        // the third cuff is fixed
        assert_eq!(pants_symmetry(&w("aB")).unwrap(), w("aB"));
        for n in 0..6 {
            assert_eq!(
                self_intersection(&pants_symmetry(&gamma_n(n)).unwrap(), &pants_base()).unwrap(),
                n
            );
        }
    }

    #[test]
    fn crossing_rejects_bad_indices() {
        let p = pants_base();
        let path = as_path(&w("ab"), &p).unwrap();
        assert!(crossing(&p, &path, 0, 0).is_err());
        assert!(crossing(&p, &path, 0, 5).is_err());
    }

    #[test]
    fn paths_are_validated() {
        let p = pants_base();
        assert!(CurvePath::new(&p, vec![Dart::tail(0), Dart::head(0)]).is_err());
        assert_eq!(
            CurvePath::new(&p, vec![Dart::tail(0), Dart::tail(1), Dart::tail(0), Dart::tail(1)]),
            Err(Error::NonPrimitive { exponent: 2 })
        );
    }
}
