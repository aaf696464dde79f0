//! Regular embeddings of colored graphs and their genus.
//!
//! For a cyclic permutation `ε = (ε_0, .., ε_n)` of the colors, every vertex
//! gets the rotation `ε` (reversed on one bipartition class), and the faces
//! are exactly the `{ε_j, ε_{j+1}}`-colored cycles. The genus is available
//! both from residue counts ([`rho`]) and by tracing faces
//! ([`regular_embedding`]); the two must agree.

mod ribbon;

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use ribbon::{RibbonGraph, TracedFace};

use crate::graph::{Bipartition, Color, ColorSet, ColoredGraph, Dart, ResidueCensus};

/// A cyclic ordering of all colors `0..=n`, stored in canonical form:
/// `ε_n = n` and `ε_0 < ε_{n-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Color>", into = "Vec<Color>")]
pub struct CyclicPermutation(Vec<Color>);

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{0:?} is not a permutation of 0..={1}")]
pub struct NotAPermutation(pub Vec<Color>, pub usize);

impl CyclicPermutation {
    /// Canonicalize any sequence that is a permutation of `0..=n` (`n = len - 1`).
    pub fn new(seq: Vec<Color>) -> Result<Self, NotAPermutation> {
        let n = seq.len().wrapping_sub(1);
        let mut seen = vec![false; seq.len()];
        for &c in &seq {
            if c >= seq.len() || seen[c] {
                return Err(NotAPermutation(seq, n));
            }
            seen[c] = true;
        }
        if seq.len() < 3 {
            return Err(NotAPermutation(seq, n));
        }
        let at = seq.iter().position(|&c| c == n).unwrap();
        let mut v: Vec<Color> = (1..=n).map(|i| seq[(at + i) % seq.len()]).collect();
        if v[0] > v[n - 1] {
            v.reverse();
        }
        v.push(n);
        Ok(CyclicPermutation(v))
    }

    /// `(0, 1, .., n)`.
    pub fn identity(n: usize) -> Self {
        CyclicPermutation((0..=n).collect())
    }

    pub fn n(&self) -> usize {
        self.0.len() - 1
    }

    pub fn as_slice(&self) -> &[Color] {
        &self.0
    }

    /// `ε_j`.
    pub fn at(&self, j: usize) -> Color {
        self.0[j % self.0.len()]
    }

    /// Consecutive pairs `(ε_j, ε_{j+1})`, cyclically.
    pub fn pairs(&self) -> impl Iterator<Item = (Color, Color)> + '_ {
        (0..self.0.len()).map(|j| (self.at(j), self.at(j + 1)))
    }

    pub fn reversed(&self) -> Self {
        let mut v = self.0.clone();
        v.reverse();
        CyclicPermutation::new(v).unwrap()
    }

    /// The induced cyclic order on the remaining colors, as a raw sequence.
    pub fn without(&self, c: Color) -> Vec<Color> {
        self.0.iter().copied().filter(|&x| x != c).collect()
    }
}

impl TryFrom<Vec<Color>> for CyclicPermutation {
    type Error = NotAPermutation;
    fn try_from(v: Vec<Color>) -> Result<Self, Self::Error> {
        CyclicPermutation::new(v)
    }
}

impl From<CyclicPermutation> for Vec<Color> {
    fn from(p: CyclicPermutation) -> Self {
        p.0
    }
}

impl fmt::Display for CyclicPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// All canonical cyclic permutations of `0..=n`, sorted. There are `n!/2`.
pub fn cyclic_permutations(n: usize) -> Vec<CyclicPermutation> {
    assert!(n >= 2);
    let mut out = Vec::new();
    let mut cur: Vec<Color> = (0..n).collect();
    loop {
        if cur[0] < cur[n - 1] {
            let mut v = cur.clone();
            v.push(n);
            out.push(CyclicPermutation(v));
        }
        if !next_permutation(&mut cur) {
            break;
        }
    }
    out
}

fn next_permutation(v: &mut [Color]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Regular genus stored as `2ρ = 2 - χ`.
///
/// For orientable embeddings this is twice the genus; for non-orientable
/// ones it is the non-orientable genus, so `ρ` may be a half-integer.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Genus {
    pub twice: i64,
}

impl Genus {
    pub const ZERO: Genus = Genus { twice: 0 };

    pub fn from_chi(chi: i64) -> Self {
        Genus { twice: 2 - chi }
    }

    pub fn from_int(g: i64) -> Self {
        Genus { twice: 2 * g }
    }

    pub fn chi(self) -> i64 {
        2 - self.twice
    }

    pub fn is_integral(self) -> bool {
        self.twice % 2 == 0
    }

    /// `ρ` when integral.
    pub fn as_int(self) -> Option<i64> {
        self.is_integral().then_some(self.twice / 2)
    }

    pub fn as_f64(self) -> f64 {
        self.twice as f64 / 2.0
    }
}

impl std::ops::Sub for Genus {
    type Output = Genus;
    fn sub(self, o: Genus) -> Genus {
        Genus { twice: self.twice - o.twice }
    }
}

impl std::ops::Add for Genus {
    type Output = Genus;
    fn add(self, o: Genus) -> Genus {
        Genus { twice: self.twice + o.twice }
    }
}

impl fmt::Display for Genus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_int() {
            Some(g) => write!(f, "{g}"),
            None => write!(f, "{}/2", self.twice),
        }
    }
}

impl Serialize for Genus {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.as_int() {
            Some(g) => s.serialize_i64(g),
            None => s.serialize_f64(self.as_f64()),
        }
    }
}

impl<'de> Deserialize<'de> for Genus {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let x = f64::deserialize(d)?;
        let twice = (2.0 * x).round();
        if (twice - 2.0 * x).abs() > 1e-9 {
            return Err(serde::de::Error::custom("genus must be a multiple of 1/2"));
        }
        Ok(Genus { twice: twice as i64 })
    }
}

/// A face of a regular embedding: a bicolored cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    /// the two colors, increasing
    pub colors: (Color, Color),
    pub darts: Vec<Dart>,
}

/// The regular embedding `F_ε(Γ)` with its traced faces.
#[derive(Clone, Debug)]
pub struct SurfaceEmbedding {
    pub permutation: CyclicPermutation,
    pub ribbon: RibbonGraph,
    pub faces: Vec<Face>,
    pub vertices: usize,
    pub edges: usize,
    pub euler_characteristic: i64,
    pub orientable: bool,
    pub rho: Genus,
}

/// Signed rotation system of the regular embedding for the raw cyclic
/// sequence `cycle` of colors. Colors may be omitted: their edges are dropped
/// and the remaining edges renumbered in increasing id order.
pub(crate) fn regular_rotation(g: &ColoredGraph, cycle: &[Color]) -> RibbonGraph {
    let keep: ColorSet = cycle.iter().copied().collect();
    let ends: Vec<_> = g.edges().iter().map(|e| (e.u, e.v)).collect();
    let (class, twist) = match g.bipartition() {
        Bipartition::Bipartite { class } => (class.clone(), false),
        Bipartition::NonBipartite { .. } => (vec![0; g.order()], true),
    };
    let mut rotation = Vec::with_capacity(g.order());
    for v in 0..g.order() {
        let mut rot: Vec<Dart> = cycle
            .iter()
            .map(|&c| Dart::leaving(g, g.edge_at(v, c), v))
            .collect();
        if class[v] == 1 {
            rot.reverse();
        }
        rotation.push(rot);
    }
    if keep.len() == g.n() + 1 {
        return RibbonGraph::new(g.order(), ends, vec![twist; g.edge_count()], rotation);
    }
    let mut new_id = vec![usize::MAX; g.edge_count()];
    let mut kept_ends = Vec::new();
    for (id, e) in g.edges().iter().enumerate() {
        if keep.contains(e.color) {
            new_id[id] = kept_ends.len();
            kept_ends.push((e.u, e.v));
        }
    }
    let rotation = rotation
        .into_iter()
        .map(|rot| rot.into_iter().map(|d| Dart::new(new_id[d.edge], d.reversed)).collect())
        .collect();
    let m = kept_ends.len();
    RibbonGraph::new(g.order(), kept_ends, vec![twist; m], rotation)
}

/// Build the regular embedding of `g` for `eps` and trace its faces.
pub fn regular_embedding(g: &ColoredGraph, eps: &CyclicPermutation) -> SurfaceEmbedding {
    assert_eq!(eps.n(), g.n(), "permutation dimension mismatch");
    let ribbon = regular_rotation(g, eps.as_slice());
    let faces: Vec<Face> = ribbon
        .faces()
        .into_iter()
        .map(|f| {
            let a = g.edge(f.darts[0].edge).color;
            let b = g.edge(f.darts[1 % f.darts.len()].edge).color;
            Face { colors: (a.min(b), a.max(b)), darts: f.darts }
        })
        .collect();
    let chi = g.order() as i64 - g.edge_count() as i64 + faces.len() as i64;
    SurfaceEmbedding {
        permutation: eps.clone(),
        orientable: ribbon.is_orientable(),
        ribbon,
        vertices: g.order(),
        edges: g.edge_count(),
        euler_characteristic: chi,
        rho: Genus::from_chi(chi),
        faces,
    }
}

/// `χ = Σ_j g_{ε_j ε_{j+1}} + (1 - n) p` for a connected graph, over the raw
/// cyclic color sequence `cycle` (its length is `n + 1`).
pub(crate) fn census_chi(census: &ResidueCensus, cycle: &[Color], p: usize) -> i64 {
    let n = cycle.len() as i64 - 1;
    let faces: usize = (0..cycle.len())
        .map(|j| census.pair(cycle[j], cycle[(j + 1) % cycle.len()]))
        .sum();
    faces as i64 + (1 - n) * p as i64
}

/// `ρ_ε(Γ)` from residue counts alone.
pub fn rho(g: &ColoredGraph, eps: &CyclicPermutation) -> Genus {
    assert_eq!(eps.n(), g.n(), "permutation dimension mismatch");
    Genus::from_chi(census_chi(g.census(), eps.as_slice(), g.p()))
}

/// Minimum of `ρ_ε` over all cyclic permutations, with every minimizer in canonical order.
pub fn rho_min(g: &ColoredGraph) -> (Genus, Vec<CyclicPermutation>) {
    let all: Vec<(Genus, CyclicPermutation)> =
        cyclic_permutations(g.n()).into_iter().map(|e| (rho(g, &e), e)).collect();
    let best = all.iter().map(|(r, _)| *r).min().unwrap();
    (best, all.into_iter().filter(|(r, _)| *r == best).map(|(_, e)| e).collect())
}

/// Genus of `Γ_ĉ` for the cyclic order induced by `eps`, one entry per component.
pub fn subgraph_rho(g: &ColoredGraph, eps: &CyclicPermutation, drop: Color) -> Vec<Genus> {
    let colors = g.colors().without(drop);
    let cycle = eps.without(drop);
    if g.census().count(colors) == 1 {
        return vec![Genus::from_chi(census_chi(g.census(), &cycle, g.p()))];
    }
    g.restrict(colors)
        .expect("drop color is in the palette")
        .into_iter()
        .map(|sub| {
            let mut local = vec![usize::MAX; g.n() + 1];
            for (i, &c) in sub.color_map.iter().enumerate() {
                local[c] = i;
            }
            let induced: Vec<Color> = cycle.iter().map(|&c| local[c]).collect();
            Genus::from_chi(census_chi(sub.graph.census(), &induced, sub.graph.p()))
        })
        .collect()
}

/// `ρ_ε(Γ_ĥc)` when `Γ_ĉ` is connected.
pub fn rho_hat(g: &ColoredGraph, eps: &CyclicPermutation, drop: Color) -> Option<Genus> {
    let v = subgraph_rho(g, eps, drop);
    (v.len() == 1).then(|| v[0])
}
