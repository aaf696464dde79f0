//! Manifold-preserving generator moves used to grow test corpora.

use super::{ColoredGraph, EdgeId, Vertex};
use crate::error::GraphError;

/// Insert an `n`-dipole ("blob") on edge `edge_id`.
///
/// For `e = {u, v}` of color `c`, two new vertices `x` (next to `u`) and `y`
/// (next to `v`) are added, joined by one edge of every color except `c`;
/// `e` is replaced by `u–x` and `y–v`, both colored `c`.
pub fn blob_insert(g: &ColoredGraph, edge_id: EdgeId) -> Result<ColoredGraph, GraphError> {
    if edge_id >= g.edge_count() {
        return Err(GraphError::InvalidEdge(edge_id));
    }
    let target = *g.edge(edge_id);
    let x = g.order();
    let y = x + 1;
    let mut triples = Vec::with_capacity(g.edge_count() + g.n() + 1);
    for (id, e) in g.edges().iter().enumerate() {
        if id != edge_id {
            triples.push((e.u, e.v, e.color));
        }
    }
    triples.push((target.u, x, target.color));
    triples.push((y, target.v, target.color));
    for c in 0..=g.n() {
        if c != target.color {
            triples.push((x, y, c));
        }
    }
    ColoredGraph::build(g.n(), &triples)
}

/// Graph connected sum: delete `v1` from `g1` and `v2` from `g2`, then weld
/// the hanging edges of equal color.
///
/// Vertices of `g1` keep their relative order and come first.
pub fn connected_sum(
    g1: &ColoredGraph,
    g2: &ColoredGraph,
    v1: Vertex,
    v2: Vertex,
) -> Result<ColoredGraph, GraphError> {
    if g1.n() != g2.n() {
        return Err(GraphError::DimensionMismatch(g1.n(), g2.n()));
    }
    if v1 >= g1.order() {
        return Err(GraphError::InvalidVertex(v1));
    }
    if v2 >= g2.order() {
        return Err(GraphError::InvalidVertex(v2));
    }
    let shift1 = |w: Vertex| if w > v1 { w - 1 } else { w };
    let offset = g1.order() - 1;
    let shift2 = |w: Vertex| offset + if w > v2 { w - 1 } else { w };

    let mut triples = Vec::with_capacity(g1.edge_count() + g2.edge_count());
    for e in g1.edges() {
        if e.u != v1 && e.v != v1 {
            triples.push((shift1(e.u), shift1(e.v), e.color));
        }
    }
    for e in g2.edges() {
        if e.u != v2 && e.v != v2 {
            triples.push((shift2(e.u), shift2(e.v), e.color));
        }
    }
    for c in 0..=g1.n() {
        let a = g1.neighbor(v1, c);
        let b = g2.neighbor(v2, c);
        triples.push((shift1(a), shift2(b), c));
    }
    ColoredGraph::build(g1.n(), &triples)
}

/// Self connected sum: delete `x` and `y` from `g` and weld the hanging
/// edges of equal color.
///
/// Adds a handle when `x` and `y` lie in different `ĉ`-residues for every
/// color `c`; with `x` and `y` in opposite bipartition classes the result
/// stays bipartite. Fails if `x` and `y` are adjacent.
pub fn handle_insert(g: &ColoredGraph, x: Vertex, y: Vertex) -> Result<ColoredGraph, GraphError> {
    for v in [x, y] {
        if v >= g.order() {
            return Err(GraphError::InvalidVertex(v));
        }
    }
    if x == y {
        return Err(GraphError::InvalidVertex(y));
    }
    let shift = |w: Vertex| w - (w > x) as usize - (w > y) as usize;
    let mut triples = Vec::with_capacity(g.edge_count());
    for e in g.edges() {
        if e.u == x || e.v == x || e.u == y || e.v == y {
            if (e.u == x && e.v == y) || (e.u == y && e.v == x) {
                return Err(GraphError::InvalidEdge(g.edge_at(x, e.color)));
            }
            continue;
        }
        triples.push((shift(e.u), shift(e.v), e.color));
    }
    for c in 0..=g.n() {
        triples.push((shift(g.neighbor(x, c)), shift(g.neighbor(y, c)), c));
    }
    ColoredGraph::build(g.n(), &triples)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s4() -> ColoredGraph {
        ColoredGraph::build(4, &(0..5).map(|c| (0, 1, c)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn blob_increases_order() {
        let g = s4();
        let b = blob_insert(&g, 4).unwrap();
        assert_eq!(b.order(), 4);
        assert!(b.is_bipartite());
        let bb = blob_insert(&b, 0).unwrap();
        assert_eq!(bb.order(), 6);
        assert!(bb.is_bipartite());
        assert!(matches!(blob_insert(&g, 9), Err(GraphError::InvalidEdge(9))));
    }

    #[test]
    fn sum_of_order_two_gems_is_order_two() {
        let g = s4();
        let s = connected_sum(&g, &g, 0, 1).unwrap();
        assert_eq!(s, g);
    }

    #[test]
    fn sum_orders_add() {
        let g = s4();
        let b = blob_insert(&g, 4).unwrap();
        let s = connected_sum(&b, &g, 2, 0).unwrap();
        assert_eq!(s.order(), 4);
        assert!(s.is_bipartite());
    }

    #[test]
    fn handle_removes_two_vertices() {
        let b = blob_insert(&blob_insert(&s4(), 4).unwrap(), 0).unwrap();
        let h = handle_insert(&b, 0, 5).unwrap();
        assert_eq!(h.order(), 4);
        assert!(matches!(handle_insert(&s4(), 0, 1), Err(GraphError::InvalidEdge(_))));
    }

    #[test]
    fn dimension_mismatch() {
        let s3 = ColoredGraph::build(3, &(0..4).map(|c| (0, 1, c)).collect::<Vec<_>>()).unwrap();
        assert!(matches!(
            connected_sum(&s4(), &s3, 0, 0),
            Err(GraphError::DimensionMismatch(4, 3))
        ));
    }
}
