//! Gem-induced trisections: the square complex `Q(Γ,ε)`, stabilization
//! along 4-colored edges, and collapse orderings of the squares.
//!
//! Everything here assumes the apex color is 4. Other apex colors are
//! handled by swapping colors first (see [`ApexFrame`]).

mod schedule;

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use schedule::{collapse_schedule, verify_ordering, CollapseOrdering, CollapseStep, OrderingCheck, Violation};

use crate::embedding::{rho, rho_hat, CyclicPermutation, Genus};
use crate::error::TrisectionError;
use crate::graph::{residue_labels, Color, ColorSet, ColoredGraph, EdgeId};

pub const APEX: Color = 4;

/// A node of `Q_1`: the `index`-th residue of a mixed color set `{i, j, 4}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QNode {
    pub colors: ColorSet,
    pub index: usize,
}

/// An edge of `Q_1`: one `{i,4}`-cycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QEdge {
    pub color: Color,
    /// index among the `{color,4}`-cycles
    pub cycle: usize,
    /// 4-colored edges on the cycle, increasing
    pub four_edges: Vec<EdgeId>,
    /// the two mixed residues containing the cycle
    pub ends: (usize, usize),
}

/// The square complex: one square per 4-colored edge, whose side of color
/// `i` lies on the `Q_1` edge of the `{i,4}`-cycle through that edge.
#[derive(Clone, Debug)]
pub struct QComplex {
    pub permutation: CyclicPermutation,
    /// square -> 4-colored edge id, increasing
    pub squares: Vec<EdgeId>,
    square_index: Vec<usize>,
    /// `sides[square][i]` = `Q_1` edge of color `i`
    pub sides: Vec<[usize; 4]>,
    pub nodes: Vec<QNode>,
    pub edges: Vec<QEdge>,
}

impl QComplex {
    pub fn is_square(&self, e: EdgeId) -> bool {
        self.square_index.get(e).is_some_and(|&s| s != usize::MAX)
    }

    /// Square index of a 4-colored edge. Panics on other edges.
    pub fn square_of(&self, e: EdgeId) -> usize {
        let s = self.square_index[e];
        assert!(s != usize::MAX, "edge {e} is not 4-colored");
        s
    }

    /// `Q_1` edge of the `{i,4}`-cycle with the given index.
    pub fn q_edge(&self, color: Color, cycle: usize) -> Option<usize> {
        self.edges.iter().position(|e| e.color == color && e.cycle == cycle)
    }

    pub fn p(&self) -> usize {
        self.squares.len()
    }
}

/// Build `Q(Γ,ε)`. Requires `ε_4 = 4` (always true in canonical form) and a
/// connected residue missing color 4.
pub fn build_q(g: &ColoredGraph, eps: &CyclicPermutation) -> Result<QComplex, TrisectionError> {
    assert_eq!(g.n(), 4, "trisections need 5-colored graphs");
    assert_eq!(eps.at(4), APEX);
    let apex_residues = g.census().hat(APEX);
    if apex_residues != 1 {
        return Err(TrisectionError::ApexResidueDisconnected(apex_residues));
    }
    let (e0, e1, e2, e3) = (eps.at(0), eps.at(1), eps.at(2), eps.at(3));
    let squares: Vec<EdgeId> = g.edges_of_color(APEX).collect();
    let mut square_index = vec![usize::MAX; g.edge_count()];
    for (s, &e) in squares.iter().enumerate() {
        square_index[e] = s;
    }

    let mixed: Vec<ColorSet> = [(e0, e1), (e0, e3), (e2, e1), (e2, e3)]
        .iter()
        .map(|&(i, j)| [i, j, APEX].into_iter().collect())
        .collect();
    let mut nodes = Vec::new();
    let mut labels = Vec::new();
    let mut offset = Vec::new();
    for &s in &mixed {
        let (lab, count) = residue_labels(g, s);
        offset.push(nodes.len());
        nodes.extend((0..count).map(|index| QNode { colors: s, index }));
        labels.push(lab);
    }
    let node_of = |set: ColorSet, v: usize| {
        let k = mixed.iter().position(|&m| m == set).unwrap();
        offset[k] + labels[k][v]
    };
    let set = |a: Color, b: Color| -> ColorSet { [a, b, APEX].into_iter().collect() };

    let mut edges = Vec::new();
    let mut sides = vec![[usize::MAX; 4]; squares.len()];
    for i in 0..4 {
        for (ci, cyc) in g.census().cycles(i, APEX).iter().enumerate() {
            let v = cyc.darts[0].tail(g);
            let ends = if i == e0 || i == e2 {
                (node_of(set(i, e1), v), node_of(set(i, e3), v))
            } else {
                (node_of(set(e0, i), v), node_of(set(e2, i), v))
            };
            let mut four: Vec<EdgeId> = cyc.edges().filter(|&e| g.edge(e).color == APEX).collect();
            four.sort_unstable();
            for &e in &four {
                sides[square_index[e]][i] = edges.len();
            }
            edges.push(QEdge { color: i, cycle: ci, four_edges: four, ends });
        }
    }
    Ok(QComplex { permutation: eps.clone(), squares, square_index, sides, nodes, edges })
}

/// Spanning forest (Kruskal, increasing edge id) of the graph whose nodes
/// are the `{ε_0,ε_3}`-cycles and whose edges are the 4-colored edges.
/// Its size is `g_{ε_0 ε_3} - g_{ε_0 ε_3 4} = ρ_ε(Γ) - ρ_ε(Γ_ĥ4)`.
pub fn stabilization_set(g: &ColoredGraph, eps: &CyclicPermutation) -> Vec<EdgeId> {
    let (lab, count) = residue_labels(g, [eps.at(0), eps.at(3)].into_iter().collect());
    let mut parent: Vec<usize> = (0..count).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut out = Vec::new();
    for e in g.edges_of_color(APEX) {
        let edge = g.edge(e);
        let (a, b) = (find(&mut parent, lab[edge.u]), find(&mut parent, lab[edge.v]));
        if a != b {
            parent[a.max(b)] = a.min(b);
            out.push(e);
        }
    }
    out
}

/// How the stabilized set of a certificate was found.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KSource {
    /// the unstabilized greedy collapse already completes
    Greedy,
    /// stabilize one residual square at a time
    Heuristic,
    /// smallest subset of the residual found within the search budget
    Exhaustive,
    /// the spanning forest from [`stabilization_set`]
    Fallback,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// closed 4-manifold
    TrisectionClosed,
    /// boundary `#_m(S^1 x S^2)`: a trisection of the closed manifold obtained by capping off
    TrisectionOfClosure,
    /// generalized trisection of a bounded manifold
    GTrisection,
}

/// Everything needed to reproduce and check a gem-induced trisection.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrisectionCertificate {
    /// `ε_0 .. ε_4` in the colors of the input gem; the last entry is the apex color
    pub permutation: Vec<Color>,
    pub apex: Color,
    pub ordering: CollapseOrdering,
    pub k: usize,
    /// `ρ_ε(Γ_ĥ4) + k`
    pub genus: Genus,
    pub rho_gamma: Genus,
    pub rho_gamma_hat: Genus,
    /// size of the spanning-forest stabilization set
    pub k_bar: usize,
    pub source: KSource,
    /// subsets evaluated by the exhaustive search
    pub evaluations: u64,
}

/// Options for [`minimize_k`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimizeOptions {
    /// maximal number of stabilized subsets to try exhaustively (0 disables the search)
    pub budget: u64,
}

fn certificate(
    g: &ColoredGraph,
    eps: &CyclicPermutation,
    ordering: CollapseOrdering,
    k_bar: usize,
    source: KSource,
    evaluations: u64,
) -> TrisectionCertificate {
    let rho_gamma = rho(g, eps);
    let rho_gamma_hat = rho_hat(g, eps, APEX).expect("apex residue is connected");
    let k = ordering.k();
    TrisectionCertificate {
        permutation: eps.as_slice().to_vec(),
        apex: APEX,
        k,
        genus: rho_gamma_hat + Genus::from_int(k as i64),
        rho_gamma,
        rho_gamma_hat,
        k_bar,
        source,
        evaluations,
        ordering,
    }
}

/// Search for a small stabilized set: unstabilized greedy first, then a
/// one-square-at-a-time heuristic, an optional exhaustive search over
/// subsets of the unstabilized residual, and finally the spanning-forest
/// set (whose size is never exceeded). The result is the best found, not
/// necessarily optimal.
pub fn minimize_k(
    g: &ColoredGraph,
    eps: &CyclicPermutation,
    opts: MinimizeOptions,
) -> Result<TrisectionCertificate, TrisectionError> {
    let q = build_q(g, eps)?;
    let fallback = stabilization_set(g, eps);
    let k_bar = fallback.len();
    if let Ok(ord) = collapse_schedule(&q, &[]) {
        return Ok(certificate(g, eps, ord, k_bar, KSource::Greedy, 0));
    }
    let (residual0, _) = schedule::greedy_residual(&q, &[]);

    let mut chosen: Vec<EdgeId> = Vec::new();
    loop {
        let (residual, count) = schedule::greedy_residual(&q, &chosen);
        if residual.is_empty() || chosen.len() >= k_bar {
            break;
        }
        let key = |&e: &EdgeId| {
            let s = q.sides[q.square_of(e)];
            let c: Vec<usize> = s.iter().map(|&x| count[x]).collect();
            (*c.iter().min().unwrap(), c.iter().sum::<usize>(), e)
        };
        chosen.push(*residual.iter().min_by_key(|e| key(e)).unwrap());
    }
    let heuristic_ok = schedule::greedy_residual(&q, &chosen).0.is_empty() && chosen.len() <= k_bar;
    let (mut best, mut source) =
        if heuristic_ok { (chosen, KSource::Heuristic) } else { (fallback.clone(), KSource::Fallback) };

    let mut evaluations = 0u64;
    if opts.budget > 0 {
        'sizes: for size in 1..best.len() {
            let mut idx: Vec<usize> = (0..size).collect();
            if size > residual0.len() {
                break;
            }
            loop {
                if evaluations >= opts.budget {
                    break 'sizes;
                }
                evaluations += 1;
                let subset: Vec<EdgeId> = idx.iter().map(|&i| residual0[i]).collect();
                if schedule::greedy_residual(&q, &subset).0.is_empty() {
                    best = subset;
                    source = KSource::Exhaustive;
                    break 'sizes;
                }
                if !next_combination(&mut idx, residual0.len()) {
                    break;
                }
            }
        }
    }
    let ordering = collapse_schedule(&q, &best)?;
    Ok(certificate(g, eps, ordering, k_bar, source, evaluations))
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
        return false;
    };
    idx[i] += 1;
    for j in i + 1..k {
        idx[j] = idx[j - 1] + 1;
    }
    true
}

/// Run [`minimize_k`] for every cyclic permutation and keep the smallest
/// `(genus, k, permutation)`.
pub fn sweep(g: &ColoredGraph, opts: MinimizeOptions) -> Result<TrisectionCertificate, TrisectionError> {
    let results: Vec<Result<TrisectionCertificate, TrisectionError>> = crate::embedding::cyclic_permutations(4)
        .par_iter()
        .map(|eps| minimize_k(g, eps, opts))
        .collect();
    let mut best: Option<TrisectionCertificate> = None;
    for r in results {
        let c = r?;
        let better = best.as_ref().is_none_or(|b| {
            (c.genus, c.k, &c.permutation) < (b.genus, b.k, &b.permutation)
        });
        if better {
            best = Some(c);
        }
    }
    Ok(best.expect("twelve permutations"))
}

/// The gem with colors `apex` and 4 swapped, so the engine can always use 4.
#[derive(Clone, Debug)]
pub struct ApexFrame {
    pub apex: Color,
    pub graph: ColoredGraph,
    /// working edge id -> input edge id
    pub to_input: Vec<EdgeId>,
    /// input edge id -> working edge id
    pub to_working: Vec<EdgeId>,
}

impl ApexFrame {
    pub fn new(g: &ColoredGraph, apex: Color) -> Self {
        assert!(apex <= 4);
        if apex == APEX {
            let id: Vec<EdgeId> = (0..g.edge_count()).collect();
            return ApexFrame { apex, graph: g.clone(), to_input: id.clone(), to_working: id };
        }
        let (graph, to_working) = g.swap_colors(apex, APEX);
        let mut to_input = vec![0; to_working.len()];
        for (old, &new) in to_working.iter().enumerate() {
            to_input[new] = old;
        }
        ApexFrame { apex, graph, to_input, to_working }
    }

    pub fn color_to_input(&self, c: Color) -> Color {
        if c == self.apex {
            APEX
        } else if c == APEX {
            self.apex
        } else {
            c
        }
    }

    /// Same map in both directions.
    pub fn color_to_working(&self, c: Color) -> Color {
        self.color_to_input(c)
    }

    /// A permutation given in input colors, as a canonical working permutation.
    pub fn working_permutation(&self, seq: &[Color]) -> Result<CyclicPermutation, crate::embedding::NotAPermutation> {
        CyclicPermutation::new(seq.iter().map(|&c| self.color_to_working(c)).collect())
    }

    /// Express a certificate computed on the working graph in input ids and colors.
    /// Witness cycle indices are unchanged: cycles are ordered by minimum vertex.
    pub fn certificate_to_input(&self, mut c: TrisectionCertificate) -> TrisectionCertificate {
        c.permutation = c.permutation.iter().map(|&x| self.color_to_input(x)).collect();
        c.apex = self.apex;
        for e in c.ordering.stabilized.iter_mut() {
            *e = self.to_input[*e];
        }
        for s in c.ordering.collapsed.iter_mut() {
            s.edge = self.to_input[s.edge];
            s.witness_color = self.color_to_input(s.witness_color);
        }
        c
    }

    /// Inverse of [`ApexFrame::certificate_to_input`].
    pub fn certificate_to_working(&self, mut c: TrisectionCertificate) -> TrisectionCertificate {
        c.permutation = c.permutation.iter().map(|&x| self.color_to_working(x)).collect();
        c.apex = APEX;
        for e in c.ordering.stabilized.iter_mut() {
            *e = self.to_working[*e];
        }
        for s in c.ordering.collapsed.iter_mut() {
            s.edge = self.to_working[s.edge];
            s.witness_color = self.color_to_working(s.witness_color);
        }
        c
    }
}

/// Colors other than 4 that may serve as apex: those with a connected complementary residue.
pub fn apex_candidates(g: &ColoredGraph) -> BTreeSet<Color> {
    (0..=g.n()).filter(|&c| g.census().hat(c) == 1).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::blob_insert;

    fn s4() -> ColoredGraph {
        ColoredGraph::build(4, &(0..5).map(|c| (0, 1, c)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn s4_square_complex() {
        let g = s4();
        let q = build_q(&g, &CyclicPermutation::identity(4)).unwrap();
        assert_eq!(q.squares, vec![4]);
        assert_eq!(q.nodes.len(), 4);
        assert_eq!(q.edges.len(), 4);
        // Q_1 is a 4-cycle: every node has degree 2
        let mut deg = vec![0; 4];
        for e in &q.edges {
            deg[e.ends.0] += 1;
            deg[e.ends.1] += 1;
        }
        assert_eq!(deg, vec![2; 4]);
        assert!(stabilization_set(&g, &CyclicPermutation::identity(4)).is_empty());
        let ord = collapse_schedule(&q, &[]).unwrap();
        assert_eq!(ord.sequence(), vec![4]);
        assert!(verify_ordering(&q, &ord).valid);
    }

    #[test]
    fn disconnected_apex_residue() {
        let g = s4();
        let b = blob_insert(&g, 4).unwrap();
        assert!(matches!(
            build_q(&b, &CyclicPermutation::identity(4)),
            Err(TrisectionError::ApexResidueDisconnected(2))
        ));
    }

    #[test]
    fn blob_gem_has_k_zero() {
        let g = blob_insert(&s4(), 0).unwrap();
        for eps in crate::embedding::cyclic_permutations(4) {
            let c = minimize_k(&g, &eps, MinimizeOptions::default()).unwrap();
            assert_eq!(c.k, 0);
            assert_eq!(c.genus, Genus::ZERO);
            let q = build_q(&g, &eps).unwrap();
            assert_eq!(q.squares.len(), 2);
            assert!(verify_ordering(&q, &c.ordering).valid);
        }
    }

    #[test]
    fn combinations() {
        let mut idx = vec![0, 1];
        let mut all = vec![idx.clone()];
        while next_combination(&mut idx, 4) {
            all.push(idx.clone());
        }
        assert_eq!(all.len(), 6);
        assert_eq!(all.last().unwrap(), &vec![2, 3]);
    }

    #[test]
    fn apex_frame_round_trip() {
        let g = blob_insert(&s4(), 2).unwrap();
        let f = ApexFrame::new(&g, 1);
        assert_eq!(f.graph.edges_of_color(4).count(), g.edges_of_color(1).count());
        for (w, &i) in f.to_input.iter().enumerate() {
            assert_eq!(f.to_working[i], w);
            assert_eq!(f.color_to_input(f.graph.edge(w).color), g.edge(i).color);
        }
    }
}
