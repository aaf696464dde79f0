use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Color, ColorSet, ColoredGraph, Dart, EdgeId, Vertex};
use crate::error::GraphError;

/// A connected component of the subgraph spanned by `colors`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Residue {
    pub colors: ColorSet,
    /// sorted
    pub vertices: Vec<Vertex>,
    /// sorted
    pub edges: Vec<EdgeId>,
}

/// Component label of every vertex in the subgraph spanned by `colors`.
///
/// Labels are numbered in order of the minimum vertex of each component.
pub fn residue_labels(g: &ColoredGraph, colors: ColorSet) -> (Vec<usize>, usize) {
    let order = g.order();
    let mut label = vec![usize::MAX; order];
    let mut count = 0;
    let mut stack = Vec::new();
    let palette: Vec<Color> = colors.iter().filter(|&c| c <= g.n()).collect();
    for start in 0..order {
        if label[start] != usize::MAX {
            continue;
        }
        label[start] = count;
        stack.push(start);
        while let Some(v) = stack.pop() {
            for &c in &palette {
                let w = g.neighbor(v, c);
                if label[w] == usize::MAX {
                    label[w] = count;
                    stack.push(w);
                }
            }
        }
        count += 1;
    }
    (label, count)
}

/// The `colors`-residues of `g`, ordered by minimum vertex.
pub fn residues(g: &ColoredGraph, colors: ColorSet) -> Result<Vec<Residue>, GraphError> {
    if !colors.is_subset(g.colors()) {
        return Err(GraphError::InvalidColorSet(colors));
    }
    let (label, count) = residue_labels(g, colors);
    let mut out: Vec<Residue> = (0..count)
        .map(|_| Residue { colors, vertices: Vec::new(), edges: Vec::new() })
        .collect();
    for (v, &l) in label.iter().enumerate() {
        out[l].vertices.push(v);
    }
    for (id, e) in g.edges().iter().enumerate() {
        if colors.contains(e.color) {
            out[label[e.u]].edges.push(id);
        }
    }
    Ok(out)
}

/// A `{c, d}`-colored cycle written as a closed walk of darts.
///
/// The walk starts at the cycle's minimum vertex with its `c`-colored edge
/// (`c < d`), so the representation is unique.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BicoloredCycle {
    pub colors: (Color, Color),
    pub darts: Vec<Dart>,
}

impl BicoloredCycle {
    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }

    pub fn vertices<'a>(&'a self, g: &'a ColoredGraph) -> impl Iterator<Item = Vertex> + 'a {
        self.darts.iter().map(move |d| d.tail(g))
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.darts.iter().map(|d| d.edge)
    }
}

/// All `{c, d}`-colored cycles, ordered by minimum vertex.
pub fn bicolored_cycles(
    g: &ColoredGraph,
    c: Color,
    d: Color,
) -> Result<Vec<BicoloredCycle>, GraphError> {
    if c > g.n() || d > g.n() || c == d {
        return Err(GraphError::InvalidColorSet([c, d].into_iter().collect()));
    }
    let (c, d) = (c.min(d), c.max(d));
    let mut seen = vec![false; g.order()];
    let mut out = Vec::new();
    for start in 0..g.order() {
        if seen[start] {
            continue;
        }
        let mut darts = Vec::new();
        let mut v = start;
        let mut color = c;
        loop {
            seen[v] = true;
            let id = g.edge_at(v, color);
            let dart = Dart::leaving(g, id, v);
            darts.push(dart);
            v = dart.head(g);
            color = if color == c { d } else { c };
            if v == start && color == c {
                break;
            }
        }
        out.push(BicoloredCycle { colors: (c, d), darts });
    }
    Ok(out)
}

/// Residue counts `g_S` for every color subset `S`, plus the bicolored cycles
/// of every color pair.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ResidueCensus {
    n: usize,
    counts: Vec<usize>,
    cycles: BTreeMap<(Color, Color), Vec<BicoloredCycle>>,
}

impl ResidueCensus {
    pub(crate) fn compute(g: &ColoredGraph) -> Self {
        let n = g.n();
        let total = 1usize << (n + 1);
        let counts = (0..total)
            .map(|bits| residue_labels(g, ColorSet::from_bits(bits as u32)).1)
            .collect();
        let mut cycles = BTreeMap::new();
        for c in 0..=n {
            for d in c + 1..=n {
                cycles.insert((c, d), bicolored_cycles(g, c, d).expect("valid colors"));
            }
        }
        ResidueCensus { n, counts, cycles }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `g_S`, the number of `S`-residues.
    pub fn count(&self, colors: ColorSet) -> usize {
        self.counts[colors.bits() as usize]
    }

    /// `g_{c,d}`.
    pub fn pair(&self, c: Color, d: Color) -> usize {
        self.count([c, d].into_iter().collect())
    }

    pub fn triple(&self, a: Color, b: Color, c: Color) -> usize {
        self.count([a, b, c].into_iter().collect())
    }

    /// `g_ĉ`, the number of residues missing only color `c`.
    pub fn hat(&self, c: Color) -> usize {
        self.count(ColorSet::full(self.n).without(c))
    }

    pub fn cycles(&self, c: Color, d: Color) -> &[BicoloredCycle] {
        &self.cycles[&(c.min(d), c.max(d))]
    }

    /// Counts for all subsets of the given size.
    pub fn by_size(&self, size: usize) -> BTreeMap<ColorSet, usize> {
        ColorSet::subsets_of_size(self.n, size)
            .into_iter()
            .map(|s| (s, self.count(s)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::blob_insert;

    fn s4() -> ColoredGraph {
        ColoredGraph::build(4, &(0..5).map(|c| (0, 1, c)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn s4_residues() {
        let g = s4();
        let r = residues(&g, [0, 1].into_iter().collect()).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].vertices, vec![0, 1]);
        assert_eq!(residues(&g, ColorSet::EMPTY).unwrap().len(), 2);
        for bits in 1..32u32 {
            assert_eq!(g.census().count(ColorSet::from_bits(bits)), 1);
        }
    }

    #[test]
    fn invalid_color() {
        let g = s4();
        assert!(residues(&g, [5].into_iter().collect()).is_err());
        assert!(bicolored_cycles(&g, 1, 7).is_err());
    }

    #[test]
    fn blob_on_four_edge_census() {
        let g = s4();
        let four = g.edges_of_color(4).next().unwrap();
        let b = blob_insert(&g, four).unwrap();
        assert_eq!(residues(&b, [0, 1].into_iter().collect()).unwrap().len(), 2);
        assert_eq!(b.census().pair(0, 1), 2);
        assert_eq!(b.census().pair(3, 4), 1);
    }

    #[test]
    fn cycles_alternate_and_cover() {
        let g = s4();
        let b = blob_insert(&blob_insert(&g, 2).unwrap(), 0).unwrap();
        for c in 0..5 {
            for d in c + 1..5 {
                let cyc = bicolored_cycles(&b, c, d).unwrap();
                let total: usize = cyc.iter().map(|z| z.len()).sum();
                assert_eq!(total, b.order());
                for z in &cyc {
                    assert_eq!(z.len() % 2, 0);
                    for (i, dart) in z.darts.iter().enumerate() {
                        let want = if i % 2 == 0 { c } else { d };
                        assert_eq!(b.edge(dart.edge).color, want);
                        let next = z.darts[(i + 1) % z.len()];
                        assert_eq!(dart.head(&b), next.tail(&b));
                    }
                }
            }
        }
    }
}
