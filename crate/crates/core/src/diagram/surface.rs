//! The central surface `Σ'`: the regular embedding of the apex residue with
//! one tube per stabilized apex edge, and the intersection pairing of
//! closed walks on it.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::{Curve, Step};
use crate::embedding::{Genus, RibbonGraph};
use crate::graph::{Color, Dart, EdgeId, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceEdge {
    pub id: EdgeId,
    pub u: Vertex,
    pub v: Vertex,
    pub color: Color,
}

/// Combinatorial descriptor of `Σ'`.
///
/// The rotation at `v` follows `permutation` (reversed when `class[v] = 1`),
/// restricted to the residue edges plus the handle at `v`, if any. Handle `j`
/// is a tube attached at the `ε_3|ε_0` corners of both ends of `handles[j]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizedSurface {
    pub permutation: Vec<Color>,
    pub vertex_count: usize,
    pub class: Vec<u8>,
    /// every edge twisted (non-bipartite gems)
    pub twisted: bool,
    pub edges: Vec<SurfaceEdge>,
    pub handles: Vec<SurfaceEdge>,
    pub rho_hat: Genus,
}

impl StabilizedSurface {
    pub fn k(&self) -> usize {
        self.handles.len()
    }

    pub fn genus(&self) -> Genus {
        self.rho_hat + Genus::from_int(self.k() as i64)
    }

    pub fn orientable(&self) -> bool {
        !self.twisted
    }

    pub(crate) fn model(&self) -> Result<SurfaceModel, String> {
        SurfaceModel::new(self)
    }
}

/// A curve as a closed dart walk on the ribbon graph of residue edges and
/// handle cores, or a handle meridian.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Walk {
    Path(Vec<Dart>),
    Meridian(usize),
}

pub(crate) struct SurfaceModel {
    /// residue edges `0..m`, handle `j` is edge `m + j`
    pub ribbon: RibbonGraph,
    pub m: usize,
    pub k: usize,
    local: HashMap<EdgeId, usize>,
    /// faces of the residue embedding alone
    pub faces: usize,
    pub chi_base: i64,
    edge_faces: Vec<[usize; 2]>,
    handle_faces: Vec<(usize, usize)>,
}

impl SurfaceModel {
    fn new(s: &StabilizedSurface) -> Result<Self, String> {
        if s.permutation.len() != 5 || s.class.len() != s.vertex_count {
            return Err("malformed surface descriptor".into());
        }
        let apex = s.permutation[4];
        let m = s.edges.len();
        let k = s.handles.len();
        let mut local = HashMap::new();
        let mut at: Vec<HashMap<Color, usize>> = vec![HashMap::new(); s.vertex_count];
        let mut ends = Vec::with_capacity(m + k);
        for (i, e) in s.edges.iter().chain(&s.handles).enumerate() {
            let expected_apex = i >= m;
            if (e.color == apex) != expected_apex || e.u >= s.vertex_count || e.v >= s.vertex_count || e.u == e.v {
                return Err(format!("bad surface edge {}", e.id));
            }
            if local.insert(e.id, i).is_some() {
                return Err(format!("edge {} listed twice", e.id));
            }
            for w in [e.u, e.v] {
                if at[w].insert(e.color, i).is_some() {
                    return Err(format!("two {}-edges at vertex {w}", e.color));
                }
            }
            ends.push((e.u, e.v));
        }
        let dart_at = |v: Vertex, i: usize| Dart::new(i, ends[i].0 != v);
        let mut rotation = Vec::with_capacity(s.vertex_count);
        let mut base_rotation = Vec::with_capacity(s.vertex_count);
        for v in 0..s.vertex_count {
            let mut rot = Vec::with_capacity(5);
            for &c in &s.permutation {
                match at[v].get(&c) {
                    Some(&i) => rot.push(dart_at(v, i)),
                    None if c == apex => {}
                    None => return Err(format!("vertex {v} misses color {c}")),
                }
            }
            if s.class[v] == 1 {
                rot.reverse();
            }
            base_rotation.push(rot.iter().copied().filter(|d| d.edge < m).collect::<Vec<_>>());
            rotation.push(rot);
        }
        let ribbon = RibbonGraph::new(s.vertex_count, ends.clone(), vec![s.twisted; m + k], rotation);
        let base = RibbonGraph::new(s.vertex_count, ends[..m].to_vec(), vec![s.twisted; m], base_rotation);
        let traced = base.faces();
        let mut edge_faces = vec![[usize::MAX; 2]; m];
        for (f, face) in traced.iter().enumerate() {
            for d in &face.darts {
                let slot = &mut edge_faces[d.edge];
                if slot[0] == usize::MAX {
                    slot[0] = f;
                } else {
                    slot[1] = f;
                }
            }
        }
        // the face through the ε3|ε0 corner at w is the {ε0,ε3}-face through w
        let corner = [s.permutation[0], s.permutation[3]];
        let face_at = |w: Vertex| {
            traced
                .iter()
                .position(|f| {
                    f.darts.iter().any(|d| {
                        base.tail(*d) == w && corner.contains(&s.edges[d.edge].color)
                    }) && f.darts.iter().all(|d| corner.contains(&s.edges[d.edge].color))
                })
                .expect("every vertex lies on an {ε0,ε3}-face")
        };
        let handle_faces = s.handles.iter().map(|h| (face_at(h.u), face_at(h.v))).collect();
        let chi_base = s.vertex_count as i64 - m as i64 + traced.len() as i64;
        Ok(SurfaceModel { ribbon, m, k, local, faces: traced.len(), chi_base, edge_faces, handle_faces })
    }

    /// Euler characteristic of `Σ'`.
    pub fn chi(&self) -> i64 {
        self.chi_base - 2 * self.k as i64
    }

    /// Translate a curve into a walk, checking that it closes up.
    pub fn walk(&self, c: &Curve) -> Result<Walk, String> {
        if let [Step::StabCircle { j }] = c.steps.as_slice() {
            return if *j < self.k { Ok(Walk::Meridian(*j)) } else { Err(format!("no handle {j}")) };
        }
        let mut darts = Vec::with_capacity(c.steps.len());
        for st in &c.steps {
            let d = match *st {
                Step::Edge { edge, forward } => {
                    let &i = self.local.get(&edge).ok_or_else(|| format!("edge {edge} is not on the surface"))?;
                    if i >= self.m {
                        return Err(format!("edge {edge} is a handle core"));
                    }
                    Dart::new(i, !forward)
                }
                Step::Handle { j, forward } => {
                    if j >= self.k {
                        return Err(format!("no handle {j}"));
                    }
                    Dart::new(self.m + j, !forward)
                }
                Step::StabCircle { .. } => return Err("meridian inside a walk".into()),
            };
            darts.push(d);
        }
        if darts.is_empty() {
            return Err("empty curve".into());
        }
        for w in 0..darts.len() {
            let next = darts[(w + 1) % darts.len()];
            if self.ribbon.head(darts[w]) != self.ribbon.tail(next) {
                return Err(format!("walk breaks after step {w}"));
            }
        }
        Ok(Walk::Path(darts))
    }

    /// Signed count of the edge ends of `x` at every dart slot: `+1` where
    /// `x` leaves along the dart, `-1` where it arrives.
    pub fn ends(&self, x: &Walk) -> Vec<i64> {
        let mut out = vec![0i64; 2 * (self.m + self.k)];
        if let Walk::Path(darts) = x {
            for &d in darts {
                out[slot(d)] += 1;
                out[slot(d.rev())] -= 1;
            }
        }
        out
    }

    /// Whether a path walk is orientation preserving.
    pub fn two_sided(&self, x: &Walk) -> bool {
        match x {
            Walk::Path(darts) => darts.iter().filter(|d| self.ribbon.is_twisted(d.edge)).count() % 2 == 0,
            Walk::Meridian(_) => true,
        }
    }

    /// Algebraic intersection of `x` with the left push-off of `y`
    /// (meaningful mod 2 on non-orientable surfaces). `x_ends` is `self.ends(x)`.
    pub fn pair(&self, x: &Walk, x_ends: &[i64], y: &Walk) -> i64 {
        match (x, y) {
            (Walk::Meridian(_), Walk::Meridian(_)) => 0,
            (Walk::Path(p), Walk::Meridian(j)) => handle_count(p, self.m + j),
            (Walk::Meridian(j), Walk::Path(p)) => -handle_count(p, self.m + j),
            (Walk::Path(xs), Walk::Path(ys)) => {
                let mut total = 0;
                let mut s = false;
                let len = ys.len();
                for i in 0..len {
                    let b = ys[i];
                    let a = ys[(i + len - 1) % len];
                    let v = self.ribbon.tail(b);
                    let rot = self.ribbon.rotation(v);
                    let l = rot.len();
                    let (i_in, i_out) = (self.ribbon.index_of(a.rev()), self.ribbon.index_of(b));
                    let (from, to) = if s { (i_in, i_out) } else { (i_out, i_in) };
                    let mut t = (from + 1) % l;
                    while t != to {
                        total += x_ends[slot(rot[t])];
                        t = (t + 1) % l;
                    }
                    s ^= self.ribbon.is_twisted(b.edge);
                }
                if s {
                    // one-sided: the push-off changes sides along the closing edge
                    total += xs.iter().filter(|d| d.edge == ys[len - 1].edge).count() as i64;
                }
                total
            }
        }
    }

    /// A spanning set of `H_1(Σ')`: fundamental cycles of the ribbon graph
    /// with handle cores, plus all meridians.
    pub fn homology_spanning_set(&self) -> Vec<Walk> {
        let n = self.ribbon.vertex_count();
        let mut parent: Vec<Option<Dart>> = vec![None; n];
        let mut reached = vec![false; n];
        let mut in_tree = vec![false; self.m + self.k];
        reached[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            for &d in self.ribbon.rotation(v) {
                let w = self.ribbon.head(d);
                if !reached[w] {
                    reached[w] = true;
                    in_tree[d.edge] = true;
                    parent[w] = Some(d);
                    queue.push_back(w);
                }
            }
        }
        let up = |mut v: Vertex| {
            let mut path = Vec::new();
            while let Some(d) = parent[v] {
                path.push(d.rev());
                v = self.ribbon.tail(d);
            }
            path
        };
        let mut out = Vec::new();
        for e in 0..self.m + self.k {
            if in_tree[e] {
                continue;
            }
            let d = Dart::new(e, false);
            let mut walk: Vec<Dart> = up(self.ribbon.tail(d)).into_iter().rev().map(Dart::rev).collect();
            walk.push(d);
            walk.extend(up(self.ribbon.head(d)));
            out.push(Walk::Path(cyclic_reduce(&walk)));
        }
        out.extend((0..self.k).map(Walk::Meridian));
        out
    }

    /// Cut `Σ'` along a system of pairwise vertex-disjoint simple cycles of
    /// residue edges and meridians, cap the boundary circles with disks,
    /// and return `(components, χ)`.
    pub fn cut(&self, system: &[Walk]) -> (usize, i64) {
        let mut uf = UnionFind::new(self.faces);
        let mut cut_edge = vec![false; self.m];
        let mut cut_handle = vec![false; self.k];
        let mut circles = 0i64;
        for w in system {
            match w {
                Walk::Path(darts) => {
                    for d in darts {
                        cut_edge[d.edge] = true;
                    }
                    circles += if self.two_sided(w) { 2 } else { 1 };
                }
                Walk::Meridian(j) => {
                    cut_handle[*j] = true;
                    circles += 2;
                }
            }
        }
        for (e, faces) in self.edge_faces.iter().enumerate() {
            if !cut_edge[e] {
                uf.union(faces[0], faces[1]);
            }
        }
        for (j, &(a, b)) in self.handle_faces.iter().enumerate() {
            if !cut_handle[j] {
                uf.union(a, b);
            }
        }
        (uf.count(), self.chi() + circles)
    }

    pub fn is_simple(&self, w: &Walk) -> bool {
        match w {
            Walk::Meridian(_) => true,
            Walk::Path(darts) => {
                let mut seen = std::collections::HashSet::new();
                darts.iter().all(|d| seen.insert(self.ribbon.tail(*d)))
            }
        }
    }

    pub fn vertices(&self, w: &Walk) -> Vec<Vertex> {
        match w {
            Walk::Meridian(_) => Vec::new(),
            Walk::Path(darts) => darts.iter().map(|d| self.ribbon.tail(*d)).collect(),
        }
    }
}

fn slot(d: Dart) -> usize {
    2 * d.edge + d.reversed as usize
}

fn handle_count(p: &[Dart], edge: usize) -> i64 {
    p.iter().filter(|d| d.edge == edge).map(|d| d.sign()).sum()
}

pub(crate) fn cyclic_reduce(walk: &[Dart]) -> Vec<Dart> {
    let mut out: Vec<Dart> = Vec::with_capacity(walk.len());
    for &d in walk {
        if out.last() == Some(&d.rev()) {
            out.pop();
        } else {
            out.push(d);
        }
    }
    let mut a = 0;
    let mut b = out.len();
    while b - a >= 2 && out[a] == out[b - 1].rev() {
        a += 1;
        b -= 1;
    }
    out[a..b].to_vec()
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
    sets: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), sets: n }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        self.parent[a.max(b)] = a.min(b);
        self.sets -= 1;
        true
    }

    pub fn count(&self) -> usize {
        self.sets
    }
}
