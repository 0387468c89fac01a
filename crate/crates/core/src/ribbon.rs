//! Ribbon graphs as combinatorial oriented surfaces with boundary.
//!
//! Every edge has two ends ("darts"): the tail end sits at the origin vertex
//! and the head end at the terminus. Each vertex carries the counterclockwise
//! cyclic order of the darts attached to it. A boundary component is a cycle
//! of the face permutation `h -> rot(opp(h))`: leave along `h`, arrive at the
//! opposite end, then turn to the next dart in the cyclic order there.

use std::collections::VecDeque;

use serde::Serialize;

use crate::cover::PermCover;
use crate::error::{Error, Result};
use crate::word::{CyclicWord, Letter};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum End {
    Tail,
    Head,
}

/// One end of an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Dart {
    pub edge: usize,
    pub end: End,
}

impl Dart {
    pub const fn tail(edge: usize) -> Self {
        Self { edge, end: End::Tail }
    }

    pub const fn head(edge: usize) -> Self {
        Self { edge, end: End::Head }
    }

    pub fn id(self) -> usize {
        2 * self.edge + usize::from(self.end == End::Head)
    }

    pub fn from_id(id: usize) -> Self {
        Self { edge: id / 2, end: if id.is_multiple_of(2) { End::Tail } else { End::Head } }
    }

    pub fn opposite(self) -> Self {
        match self.end {
            End::Tail => Self::head(self.edge),
            End::Head => Self::tail(self.edge),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub origin: usize,
    pub terminus: usize,
    pub label: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RibbonGraph {
    vertex_count: usize,
    edges: Vec<Edge>,
    rotations: Vec<Vec<Dart>>,
    dart_vertex: Vec<usize>,
    dart_pos: Vec<usize>,
}

#[derive(Serialize)]
struct RibbonGraphJson<'a> {
    vertex_count: usize,
    edges: &'a [Edge],
    rotations: &'a [Vec<Dart>],
}

impl Serialize for RibbonGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RibbonGraphJson {
            vertex_count: self.vertex_count,
            edges: &self.edges,
            rotations: &self.rotations,
        }
        .serialize(s)
    }
}

impl RibbonGraph {
    pub fn new(vertex_count: usize, edges: Vec<Edge>, rotations: Vec<Vec<Dart>>) -> Result<Self> {
        let bad = |msg: String| Err(Error::MalformedGraph(msg));
        if vertex_count == 0 {
            return bad("no vertices".into());
        }
        if rotations.len() != vertex_count {
            return bad(format!("{} rotations for {} vertices", rotations.len(), vertex_count));
        }
        let darts = 2 * edges.len();
        let mut dart_vertex = vec![usize::MAX; darts];
        let mut dart_pos = vec![usize::MAX; darts];
        for (v, rot) in rotations.iter().enumerate() {
            for (pos, d) in rot.iter().enumerate() {
                let Some(e) = edges.get(d.edge) else {
                    return bad(format!("dart refers to missing edge {}", d.edge));
                };
                let expected = match d.end {
                    End::Tail => e.origin,
                    End::Head => e.terminus,
                };
                if expected != v {
                    return bad(format!("dart {d:?} listed at vertex {v}, belongs to {expected}"));
                }
                if dart_vertex[d.id()] != usize::MAX {
                    return bad(format!("dart {d:?} listed twice"));
                }
                dart_vertex[d.id()] = v;
                dart_pos[d.id()] = pos;
            }
        }
        if dart_vertex.contains(&usize::MAX) {
            return bad("some dart is not attached to any vertex".into());
        }
        let g = Self { vertex_count, edges, rotations, dart_vertex, dart_pos };
        if !g.is_connected() {
            return bad("graph is disconnected".into());
        }
        Ok(g)
    }

    /// One-vertex graph with one loop per generator and the given cyclic order.
    pub fn rose(rank: usize, rotation: Vec<Dart>) -> Result<Self> {
        let edges = (0..rank).map(|label| Edge { origin: 0, terminus: 0, label }).collect();
        Self::new(1, edges, vec![rotation])
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.vertex_count];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for d in &self.rotations[v] {
                let w = self.dart_vertex[d.opposite().id()];
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> Edge {
        self.edges[e]
    }

    pub fn rotation(&self, v: usize) -> &[Dart] {
        &self.rotations[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rotations[v].len()
    }

    pub fn vertex_of(&self, d: Dart) -> usize {
        self.dart_vertex[d.id()]
    }

    /// Index of the dart in its vertex's cyclic order.
    pub fn position(&self, d: Dart) -> usize {
        self.dart_pos[d.id()]
    }

    pub fn next_around(&self, d: Dart) -> Dart {
        let v = self.vertex_of(d);
        let rot = &self.rotations[v];
        rot[(self.position(d) + 1) % rot.len()]
    }

    /// Number of distinct edge labels (the rank of a rose or of a cover of one).
    pub fn label_count(&self) -> usize {
        self.edges.iter().map(|e| e.label + 1).max().unwrap_or(0)
    }

    /// Letter read when leaving through `d`.
    pub fn letter(&self, d: Dart) -> Letter {
        Letter::new(self.edges[d.edge].label, d.end == End::Head)
    }

    /// Boundary components, ordered by their least dart id. Each walk is
    /// listed as the darts it leaves through, starting from its least dart.
    pub fn boundary_walks(&self) -> Vec<BoundaryWalk> {
        let n = 2 * self.edges.len();
        let mut seen = vec![false; n];
        let mut walks = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut darts = Vec::new();
            let mut d = Dart::from_id(start);
            while !seen[d.id()] {
                seen[d.id()] = true;
                darts.push(d);
                d = self.next_around(d.opposite());
            }
            walks.push(BoundaryWalk { darts });
        }
        walks
    }

    pub fn euler_and_genus(&self) -> Result<SurfaceInvariants> {
        let chi = self.vertex_count as i64 - self.edges.len() as i64;
        let boundary = self.boundary_walks().len() as i64;
        let twice_genus = 2 - chi - boundary;
        if twice_genus < 0 || twice_genus % 2 != 0 {
            return Err(Error::MalformedGraph(format!(
                "chi = {chi} with {boundary} boundary components gives non-integral genus"
            )));
        }
        Ok(SurfaceInvariants { euler_characteristic: chi, boundary_components: boundary as usize, genus: (twice_genus / 2) as usize })
    }

    /// Label word of a boundary walk.
    pub fn walk_word(&self, walk: &BoundaryWalk) -> Result<CyclicWord> {
        let letters: Vec<Letter> = walk.darts.iter().map(|&d| self.letter(d)).collect();
        CyclicWord::from_letters(self.label_count(), &letters)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SurfaceInvariants {
    pub euler_characteristic: i64,
    pub boundary_components: usize,
    pub genus: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundaryWalk {
    pub darts: Vec<Dart>,
}

impl BoundaryWalk {
    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }
}

/// Edge ids of the generators of the pants rose.
pub const EDGE_A: usize = 0;
pub const EDGE_B: usize = 1;

/// The pair of pants as a two-petal rose with cyclic order
/// `(a tail, a head, b head, b tail)`.
///
/// Its boundary curves read `A`, `b` and `aB`, and the curve `ab` crosses
/// itself once.
pub fn pants_base() -> RibbonGraph {
    RibbonGraph::rose(
        2,
        vec![Dart::tail(EDGE_A), Dart::head(EDGE_A), Dart::head(EDGE_B), Dart::tail(EDGE_B)],
    )
    .expect("pants rose is well formed")
}

/// Pulls the cyclic order of a one-vertex base back to a cover.
///
/// Edge `label * d + i` is the lift of generator `label` starting at sheet `i`.
pub fn cover_ribbon(base: &RibbonGraph, cover: &PermCover) -> Result<RibbonGraph> {
    if base.vertex_count() != 1 {
        return Err(Error::NotARose(base.vertex_count()));
    }
    let rank = base.edge_count();
    if base.edges().iter().enumerate().any(|(e, edge)| edge.label != e) {
        return Err(Error::MalformedGraph("rose edges must be labeled by their index".into()));
    }
    if cover.rank() != rank {
        return Err(Error::RankMismatch { expected: rank, found: cover.rank() });
    }
    let d = cover.degree();
    let mut edges = Vec::with_capacity(rank * d);
    for base_edge in base.edges() {
        let sigma = cover.sigma(base_edge.label);
        for i in 0..d {
            edges.push(Edge { origin: i, terminus: sigma.image(i), label: base_edge.label });
        }
    }
    let edge_of_base = |b: usize| base.edge(b).label;
    let rotations = (0..d)
        .map(|i| {
            base.rotation(0)
                .iter()
                .map(|bd| {
                    let sigma = cover.sigma(edge_of_base(bd.edge));
                    match bd.end {
                        End::Tail => Dart::tail(bd.edge * d + i),
                        End::Head => Dart::head(bd.edge * d + sigma.preimage(i)),
                    }
                })
                .collect()
        })
        .collect();
    RibbonGraph::new(d, edges, rotations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::Perm;

    fn annulus() -> RibbonGraph {
        RibbonGraph::rose(1, vec![Dart::tail(0), Dart::head(0)]).unwrap()
    }

    fn torus() -> RibbonGraph {
        RibbonGraph::rose(2, vec![Dart::tail(0), Dart::tail(1), Dart::head(0), Dart::head(1)]).unwrap()
    }

    #[test]
    fn annulus_has_two_boundaries() {
        let walks = annulus().boundary_walks();
        assert_eq!(walks.len(), 2);
        assert_eq!(walks[0].darts, vec![Dart::tail(0)]);
        assert_eq!(walks[1].darts, vec![Dart::head(0)]);
    }

    #[test]
    fn pants_is_calibrated() {
        let p = pants_base();
        assert_eq!(p.boundary_walks().len(), 3);
        let inv = p.euler_and_genus().unwrap();
        assert_eq!((inv.euler_characteristic, inv.boundary_components, inv.genus), (-1, 3, 0));
        let words: Vec<String> =
            p.boundary_walks().iter().map(|w| p.walk_word(w).unwrap().to_string()).collect();
        assert_eq!(words, vec!["aB", "A", "b"]);
    }

    #[test]
    fn third_cuff_is_ab_inverse() {
        let p = pants_base();
        let target = CyclicWord::parse("aB", 2).unwrap();
        let hit = p.boundary_walks().iter().any(|w| {
            let word = p.walk_word(w).unwrap();
            word == target || word == target.invert()
        });
        assert!(hit);
    }

    #[test]
    fn one_holed_torus() {
        let t = torus();
        assert_eq!(t.boundary_walks().len(), 1);
        let inv = t.euler_and_genus().unwrap();
        assert_eq!((inv.euler_characteristic, inv.boundary_components, inv.genus), (-1, 1, 1));
    }

    #[test]
    fn walk_lengths_sum_to_twice_edges() {
        for g in [annulus(), torus(), pants_base()] {
            let total: usize = g.boundary_walks().iter().map(|w| w.len()).sum();
            assert_eq!(total, 2 * g.edge_count());
        }
    }

    #[test]
    fn identity_cover_is_the_base() {
        let c = PermCover::new(vec![Perm::identity(1), Perm::identity(1)]).unwrap();
        assert_eq!(cover_ribbon(&pants_base(), &c).unwrap(), pants_base());
    }

    #[test]
    fn double_cover_doubles_chi() {
        let c = PermCover::new(vec![Perm::from_images(vec![1, 0]).unwrap(), Perm::identity(2)]).unwrap();
        let g = cover_ribbon(&pants_base(), &c).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (2, 4));
        assert_eq!(g.euler_and_genus().unwrap().euler_characteristic, -2);
    }

    #[test]
    fn malformed_graphs_are_rejected() {
        assert!(RibbonGraph::rose(1, vec![Dart::tail(0)]).is_err());
        assert!(RibbonGraph::rose(1, vec![Dart::tail(0), Dart::tail(0)]).is_err());
        let edges = vec![Edge { origin: 0, terminus: 0, label: 0 }];
        assert!(RibbonGraph::new(2, edges, vec![vec![Dart::tail(0), Dart::head(0)], vec![]]).is_err());
    }

    #[test]
    fn cover_requires_a_rose() {
        let c = PermCover::new(vec![Perm::identity(1)]).unwrap();
        assert!(matches!(cover_ribbon(&pants_base(), &c), Err(Error::RankMismatch { .. })));
    }
}
