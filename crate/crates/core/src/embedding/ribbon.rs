//! Signed rotation systems and face tracing.

use std::collections::VecDeque;

use crate::graph::{Dart, EdgeId, Vertex};

/// A graph with a cyclic order of darts at every vertex and a twist flag
/// per edge. Describes a cellular embedding in a closed surface.
#[derive(Clone, Debug)]
pub struct RibbonGraph {
    vertex_count: usize,
    ends: Vec<(Vertex, Vertex)>,
    twisted: Vec<bool>,
    rotation: Vec<Vec<Dart>>,
    // (vertex, index in rotation) of each dart, indexed by dart_index
    position: Vec<(Vertex, usize)>,
}

/// A traced face: the closed walk of darts along its boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TracedFace {
    pub darts: Vec<Dart>,
}

pub(crate) fn dart_index(d: Dart) -> usize {
    2 * d.edge + d.reversed as usize
}

impl RibbonGraph {
    /// `ends[e] = (u, v)`; `rotation[v]` lists the darts leaving `v` in cyclic order.
    ///
    /// Panics if the rotation does not contain every dart exactly once at its tail.
    pub fn new(
        vertex_count: usize,
        ends: Vec<(Vertex, Vertex)>,
        twisted: Vec<bool>,
        rotation: Vec<Vec<Dart>>,
    ) -> Self {
        assert_eq!(ends.len(), twisted.len());
        assert_eq!(rotation.len(), vertex_count);
        let mut position = vec![(usize::MAX, usize::MAX); 2 * ends.len()];
        for (v, rot) in rotation.iter().enumerate() {
            for (i, &d) in rot.iter().enumerate() {
                let (a, b) = ends[d.edge];
                let tail = if d.reversed { b } else { a };
                assert_eq!(tail, v, "dart {d:?} listed at vertex {v}");
                let slot = &mut position[dart_index(d)];
                assert_eq!(slot.0, usize::MAX, "dart {d:?} listed twice");
                *slot = (v, i);
            }
        }
        assert!(position.iter().all(|p| p.0 != usize::MAX), "rotation misses a dart");
        RibbonGraph { vertex_count, ends, twisted, rotation, position }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.ends.len()
    }

    pub fn ends(&self, e: EdgeId) -> (Vertex, Vertex) {
        self.ends[e]
    }

    pub fn is_twisted(&self, e: EdgeId) -> bool {
        self.twisted[e]
    }

    pub fn rotation(&self, v: Vertex) -> &[Dart] {
        &self.rotation[v]
    }

    pub fn tail(&self, d: Dart) -> Vertex {
        self.position[dart_index(d)].0
    }

    pub fn head(&self, d: Dart) -> Vertex {
        self.tail(d.rev())
    }

    /// Index of `d` in the rotation at its tail.
    pub fn index_of(&self, d: Dart) -> usize {
        self.position[dart_index(d)].1
    }

    /// Neighbor of `d` in the rotation at its tail: `step = 1` successor, `-1` predecessor.
    pub fn rotate(&self, d: Dart, step: isize) -> Dart {
        let (v, i) = self.position[dart_index(d)];
        let len = self.rotation[v].len() as isize;
        self.rotation[v][(i as isize + step).rem_euclid(len) as usize]
    }

    /// Faces as closed dart walks. Each face is reported once.
    pub fn faces(&self) -> Vec<TracedFace> {
        let flags = 4 * self.ends.len();
        let idx = |d: Dart, s: bool| 2 * dart_index(d) + s as usize;
        let mut seen = vec![false; flags];
        let mut out = Vec::new();
        for start_edge in 0..self.ends.len() {
            for start in [Dart::new(start_edge, false), Dart::new(start_edge, true)] {
                for s0 in [false, true] {
                    if seen[idx(start, s0)] {
                        continue;
                    }
                    let mut darts = Vec::new();
                    let (mut d, mut s) = (start, s0);
                    loop {
                        seen[idx(d, s)] = true;
                        darts.push(d);
                        let arrive = d.rev();
                        let s_next = s ^ self.twisted[d.edge];
                        // the same side walked backwards
                        seen[idx(arrive, !s_next)] = true;
                        d = self.rotate(arrive, if s_next { -1 } else { 1 });
                        s = s_next;
                        if d == start && s == s0 {
                            break;
                        }
                    }
                    out.push(TracedFace { darts });
                }
            }
        }
        out
    }

    /// `V - E + F` of the closed surface.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count as i64 - self.ends.len() as i64 + self.faces().len() as i64
    }

    /// Orientable iff the vertices admit local flips that untwist every edge.
    pub fn is_orientable(&self) -> bool {
        let mut flip = vec![u8::MAX; self.vertex_count];
        let mut adj: Vec<Vec<(Vertex, bool)>> = vec![Vec::new(); self.vertex_count];
        for (e, &(a, b)) in self.ends.iter().enumerate() {
            adj[a].push((b, self.twisted[e]));
            adj[b].push((a, self.twisted[e]));
        }
        for root in 0..self.vertex_count {
            if flip[root] != u8::MAX {
                continue;
            }
            flip[root] = 0;
            let mut queue = VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                for &(w, t) in &adj[v] {
                    let want = flip[v] ^ t as u8;
                    if flip[w] == u8::MAX {
                        flip[w] = want;
                        queue.push_back(w);
                    } else if flip[w] != want {
                        return false;
                    }
                }
            }
        }
        true
    }
}
