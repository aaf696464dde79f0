//! Edge-colored multigraphs ("gems") and their residues.
//!
//! A [`ColoredGraph`] is an `(n+1)`-regular multigraph without loops whose
//! edges carry colors in `{0, .., n}` with every vertex seeing each color
//! exactly once. Vertex and edge ids are dense integers; edges are stored in
//! canonical `(color, u, v)` order with `u < v`, so every derived listing is
//! deterministic.

mod colorset;
mod moves;
mod residue;

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

pub use colorset::ColorSet;
pub use moves::{blob_insert, connected_sum, handle_insert};
pub use residue::{bicolored_cycles, residue_labels, residues, BicoloredCycle, Residue, ResidueCensus};

use crate::error::GraphError;

pub type Vertex = usize;
pub type EdgeId = usize;
pub type Color = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub u: Vertex,
    pub v: Vertex,
    pub color: Color,
}

impl Edge {
    pub fn other(&self, w: Vertex) -> Vertex {
        if w == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// An edge traversed in a direction. `reversed == false` means from `u` to `v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Dart {
    pub edge: EdgeId,
    pub reversed: bool,
}

impl Dart {
    pub fn new(edge: EdgeId, reversed: bool) -> Self {
        Dart { edge, reversed }
    }

    /// The dart of `edge` leaving `from`.
    pub fn leaving(g: &ColoredGraph, edge: EdgeId, from: Vertex) -> Self {
        Dart { edge, reversed: g.edge(edge).u != from }
    }

    pub fn rev(self) -> Self {
        Dart { edge: self.edge, reversed: !self.reversed }
    }

    pub fn tail(self, g: &ColoredGraph) -> Vertex {
        let e = g.edge(self.edge);
        if self.reversed {
            e.v
        } else {
            e.u
        }
    }

    pub fn head(self, g: &ColoredGraph) -> Vertex {
        let e = g.edge(self.edge);
        if self.reversed {
            e.u
        } else {
            e.v
        }
    }

    /// `+1` along the canonical orientation, `-1` against it.
    pub fn sign(self) -> i64 {
        if self.reversed {
            -1
        } else {
            1
        }
    }
}

/// Outcome of a BFS 2-coloring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bipartition {
    /// `class[v]` is 0 or 1; vertex 0 is in class 0.
    Bipartite { class: Vec<u8> },
    /// A closed walk of odd length.
    NonBipartite { odd_walk: Vec<Dart> },
}

impl Bipartition {
    pub fn is_bipartite(&self) -> bool {
        matches!(self, Bipartition::Bipartite { .. })
    }
}

/// A connected component of a color-restricted subgraph, re-indexed as a
/// standalone colored graph.
#[derive(Clone, Debug)]
pub struct Subgraph {
    pub graph: ColoredGraph,
    /// new vertex id -> vertex id in the parent
    pub vertex_map: Vec<Vertex>,
    /// new edge id -> edge id in the parent
    pub edge_map: Vec<EdgeId>,
    /// new color -> color in the parent (increasing)
    pub color_map: Vec<Color>,
}

#[derive(Debug)]
pub struct ColoredGraph {
    n: usize,
    edges: Vec<Edge>,
    // incident[v * (n + 1) + c] = edge id
    incident: Vec<EdgeId>,
    census: OnceLock<ResidueCensus>,
    bipartition: OnceLock<Bipartition>,
}

impl Clone for ColoredGraph {
    fn clone(&self) -> Self {
        ColoredGraph {
            n: self.n,
            edges: self.edges.clone(),
            incident: self.incident.clone(),
            census: OnceLock::new(),
            bipartition: OnceLock::new(),
        }
    }
}

impl PartialEq for ColoredGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges
    }
}

impl Eq for ColoredGraph {}

impl ColoredGraph {
    /// Validate an edge list and build the graph.
    ///
    /// Vertices must be exactly `0..V` for some `V`; the graph must be
    /// connected, loop-free and properly `(n+1)`-edge-colored.
    pub fn build(n: usize, edge_list: &[(Vertex, Vertex, Color)]) -> Result<Self, GraphError> {
        if n < 2 {
            return Err(GraphError::DimensionTooSmall(n));
        }
        if n > 30 {
            return Err(GraphError::DimensionTooLarge(n));
        }
        if edge_list.is_empty() {
            return Err(GraphError::Empty);
        }
        let mut edges = Vec::with_capacity(edge_list.len());
        let mut order = 0;
        for &(a, b, c) in edge_list {
            if c > n {
                return Err(GraphError::InvalidColor { color: c, n });
            }
            if a == b {
                return Err(GraphError::LoopEdge { vertex: a, color: c });
            }
            order = order.max(a + 1).max(b + 1);
            edges.push(Edge { u: a.min(b), v: a.max(b), color: c });
        }
        edges.sort_by_key(|e| (e.color, e.u, e.v));

        let k = n + 1;
        let mut incident = vec![usize::MAX; order * k];
        for (id, e) in edges.iter().enumerate() {
            for w in [e.u, e.v] {
                let slot = &mut incident[w * k + e.color];
                if *slot != usize::MAX {
                    return Err(GraphError::DegreeViolation {
                        vertex: w,
                        detail: format!("color {} appears more than once", e.color),
                    });
                }
                *slot = id;
            }
        }
        for w in 0..order {
            for c in 0..k {
                if incident[w * k + c] == usize::MAX {
                    return Err(GraphError::DegreeViolation {
                        vertex: w,
                        detail: format!("missing color {c}"),
                    });
                }
            }
        }
        let g = ColoredGraph {
            n,
            edges,
            incident,
            census: OnceLock::new(),
            bipartition: OnceLock::new(),
        };
        let (_, count) = residue_labels(&g, ColorSet::full(n));
        if count != 1 {
            return Err(GraphError::Disconnected { components: count });
        }
        Ok(g)
    }

    /// Dimension `n` (colors are `0..=n`).
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of vertices `2p`.
    pub fn order(&self) -> usize {
        self.incident.len() / (self.n + 1)
    }

    /// Half the order.
    pub fn p(&self) -> usize {
        self.order() / 2
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id]
    }

    pub fn colors(&self) -> ColorSet {
        ColorSet::full(self.n)
    }

    /// The edge of color `c` at `v`.
    pub fn edge_at(&self, v: Vertex, c: Color) -> EdgeId {
        self.incident[v * (self.n + 1) + c]
    }

    /// The `c`-adjacent vertex of `v`.
    pub fn neighbor(&self, v: Vertex, c: Color) -> Vertex {
        self.edges[self.edge_at(v, c)].other(v)
    }

    /// Ids of the edges of color `c`, increasing.
    pub fn edges_of_color(&self, c: Color) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter(move |(_, e)| e.color == c)
            .map(|(i, _)| i)
    }

    /// Cached census of residue counts.
    pub fn census(&self) -> &ResidueCensus {
        self.census.get_or_init(|| ResidueCensus::compute(self))
    }

    pub fn bipartition(&self) -> &Bipartition {
        self.bipartition.get_or_init(|| compute_bipartition(self))
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_bipartite()
    }

    /// Edge list as `(u, v, c)` triples in canonical order.
    pub fn edge_triples(&self) -> Vec<(Vertex, Vertex, Color)> {
        self.edges.iter().map(|e| (e.u, e.v, e.color)).collect()
    }

    /// Canonical text serialization (`gem n=<n>` then one `u v c` per edge).
    pub fn to_text(&self) -> String {
        let mut s = format!("gem n={}\n", self.n);
        for e in &self.edges {
            let _ = writeln!(s, "{} {} {}", e.u, e.v, e.color);
        }
        s
    }

    /// Swap two colors. Returns the new graph and the map old edge id -> new edge id.
    pub fn swap_colors(&self, a: Color, b: Color) -> (ColoredGraph, Vec<EdgeId>) {
        let swap = |c: Color| {
            if c == a {
                b
            } else if c == b {
                a
            } else {
                c
            }
        };
        let triples: Vec<_> = self.edges.iter().map(|e| (e.u, e.v, swap(e.color))).collect();
        let g = ColoredGraph::build(self.n, &triples).expect("color swap preserves validity");
        let map = self
            .edges
            .iter()
            .map(|e| {
                let nb = g.edge_at(e.u, swap(e.color));
                debug_assert_eq!(g.edge(nb).other(e.u), e.v);
                nb
            })
            .collect();
        (g, map)
    }

    /// The components of the subgraph spanned by `colors`, each re-indexed as
    /// an `|colors|`-colored graph (colors relabeled `0..` in increasing order).
    /// Components come in order of their minimum vertex.
    pub fn restrict(&self, colors: ColorSet) -> Result<Vec<Subgraph>, GraphError> {
        if !colors.is_subset(self.colors()) {
            return Err(GraphError::InvalidColorSet(colors));
        }
        if colors.len() < 3 {
            return Err(GraphError::DimensionTooSmall(colors.len().saturating_sub(1)));
        }
        let color_map: Vec<Color> = colors.iter().collect();
        let mut new_color = vec![usize::MAX; self.n + 1];
        for (i, &c) in color_map.iter().enumerate() {
            new_color[c] = i;
        }
        let comps = residues(self, colors)?;
        let mut out = Vec::with_capacity(comps.len());
        for r in comps {
            let mut local = vec![usize::MAX; self.order()];
            for (i, &v) in r.vertices.iter().enumerate() {
                local[v] = i;
            }
            let triples: Vec<_> = r
                .edges
                .iter()
                .map(|&id| {
                    let e = &self.edges[id];
                    (local[e.u], local[e.v], new_color[e.color])
                })
                .collect();
            let graph = ColoredGraph::build(color_map.len() - 1, &triples)?;
            let edge_map = graph
                .edges
                .iter()
                .map(|e| {
                    let (pu, c) = (r.vertices[e.u], color_map[e.color]);
                    self.edge_at(pu, c)
                })
                .collect();
            out.push(Subgraph {
                graph,
                vertex_map: r.vertices.clone(),
                edge_map,
                color_map: color_map.clone(),
            });
        }
        Ok(out)
    }
}

fn compute_bipartition(g: &ColoredGraph) -> Bipartition {
    let order = g.order();
    let mut class = vec![u8::MAX; order];
    // parent dart used to reach each vertex
    let mut parent: Vec<Option<Dart>> = vec![None; order];
    let mut queue = VecDeque::new();
    class[0] = 0;
    queue.push_back(0);
    while let Some(v) = queue.pop_front() {
        for c in 0..=g.n() {
            let id = g.edge_at(v, c);
            let w = g.edge(id).other(v);
            if class[w] == u8::MAX {
                class[w] = 1 - class[v];
                parent[w] = Some(Dart::leaving(g, id, v));
                queue.push_back(w);
            } else if class[w] == class[v] {
                // tree path root->v, edge v->w, tree path w->root
                let path_to = |mut x: Vertex| {
                    let mut p = Vec::new();
                    while let Some(d) = parent[x] {
                        p.push(d);
                        x = d.tail(g);
                    }
                    p.reverse();
                    p
                };
                let mut walk = path_to(v);
                walk.push(Dart::leaving(g, id, v));
                walk.extend(path_to(w).into_iter().rev().map(Dart::rev));
                return Bipartition::NonBipartite { odd_walk: walk };
            }
        }
    }
    Bipartition::Bipartite { class }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s4() -> ColoredGraph {
        ColoredGraph::build(4, &(0..5).map(|c| (0, 1, c)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn order_two_gems() {
        let g = s4();
        assert_eq!(g.order(), 2);
        assert_eq!(g.p(), 1);
        let s3 = ColoredGraph::build(3, &(0..4).map(|c| (0, 1, c)).collect::<Vec<_>>()).unwrap();
        assert_eq!(s3.p(), 1);
        assert_eq!(s3.edge_count(), 4);
    }

    #[test]
    fn degree_violation() {
        let err = ColoredGraph::build(4, &[(0, 1, 0), (0, 1, 1), (0, 1, 2), (0, 1, 3), (0, 1, 3)]);
        assert!(matches!(err, Err(GraphError::DegreeViolation { .. })));
        let missing = ColoredGraph::build(4, &[(0, 1, 0), (0, 1, 1), (0, 1, 2), (0, 1, 3)]);
        assert!(matches!(missing, Err(GraphError::DegreeViolation { .. })));
    }

    #[test]
    fn loop_and_disconnected() {
        assert!(matches!(
            ColoredGraph::build(2, &[(0, 0, 0)]),
            Err(GraphError::LoopEdge { .. })
        ));
        let two: Vec<_> = (0..3).map(|c| (0, 1, c)).chain((0..3).map(|c| (2, 3, c))).collect();
        assert!(matches!(
            ColoredGraph::build(2, &two),
            Err(GraphError::Disconnected { components: 2 })
        ));
    }

    #[test]
    fn canonical_order_and_text_round_trip() {
        let g = ColoredGraph::build(2, &[(1, 0, 2), (1, 0, 0), (0, 1, 1)]).unwrap();
        assert_eq!(g.edge_triples(), vec![(0, 1, 0), (0, 1, 1), (0, 1, 2)]);
        assert!(g.to_text().starts_with("gem n=2\n0 1 0\n"));
    }

    #[test]
    fn bipartite_order_two() {
        match s4().bipartition() {
            Bipartition::Bipartite { class } => assert_eq!(class, &vec![0, 1]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn restrict_relabels_colors() {
        let g = s4();
        let subs = g.restrict(ColorSet::full(4).without(2)).unwrap();
        assert_eq!(subs.len(), 1);
        assert_eq!(subs[0].graph.n(), 3);
        assert_eq!(subs[0].color_map, vec![0, 1, 3, 4]);
        // new color 2 is old color 3 -> edge id 3 in the parent
        let new_id = subs[0].graph.edge_at(0, 2);
        assert_eq!(subs[0].edge_map[new_id], 3);
    }
}
