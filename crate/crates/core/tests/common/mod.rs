#![allow(dead_code)]

use gemtri::corpus::{bounded_corpus, handle_corpus, rng, sphere_corpus};
use gemtri::graph::{connected_sum, ColoredGraph, EdgeId};
use gemtri::io::GemFile;
use gemtri::trisection::{apex_candidates, ApexFrame, APEX};
use rand::Rng;

pub const SEED: u64 = 20_241;

pub struct Corpus {
    pub spheres: Vec<GemFile>,
    pub handles: Vec<GemFile>,
    pub twisted: Vec<GemFile>,
    pub sums: Vec<GemFile>,
    pub bounded: Vec<GemFile>,
}

impl Corpus {
    pub fn closed_non_spheres(&self) -> impl Iterator<Item = &GemFile> {
        self.handles.iter().chain(&self.twisted).chain(&self.sums)
    }

    pub fn all(&self) -> impl Iterator<Item = &GemFile> {
        self.spheres.iter().chain(self.closed_non_spheres()).chain(&self.bounded)
    }
}

/// Connected sums of two or three handle gems, kept when some color has a
/// connected complementary residue.
pub fn handle_sums(handles: &[GemFile], twisted: &[GemFile], count: usize, seed: u64) -> Vec<GemFile> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    let mut i = 0;
    while out.len() < count {
        let a = &handles[i % handles.len()].graph;
        let b = if i % 2 == 0 { &handles[(i + 3) % handles.len()].graph } else { &twisted[i % twisted.len()].graph };
        let mut g = connected_sum(a, b, r.gen_range(0..a.order()), r.gen_range(0..b.order())).unwrap();
        if i % 3 == 0 {
            let c = &twisted[(i + 1) % twisted.len()].graph;
            g = connected_sum(&g, c, r.gen_range(0..g.order()), r.gen_range(0..c.order())).unwrap();
        }
        i += 1;
        if apex_candidates(&g).is_empty() {
            continue;
        }
        let mut f = GemFile::new(g);
        f.name = Some(format!("sum-{}", out.len()));
        out.push(f);
    }
    out
}

pub fn corpus(spheres: usize, handles: usize) -> Corpus {
    let h = handle_corpus(SEED + 1, handles, 30, true);
    let t = handle_corpus(SEED + 2, handles, 30, false);
    let sums = handle_sums(&h, &t, handles / 2, SEED + 3);
    Corpus {
        spheres: sphere_corpus(SEED, spheres, 60),
        bounded: bounded_corpus(SEED + 4, handles, 40),
        handles: h,
        twisted: t,
        sums,
    }
}

/// The gem with its apex (4 when possible) moved to color 4.
pub fn working(g: &ColoredGraph) -> ColoredGraph {
    let c = apex_candidates(g);
    let apex = if c.contains(&APEX) { APEX } else { *c.iter().next().expect("an apex candidate") };
    ApexFrame::new(g, apex).graph
}

/// 4-colored edges of the `{c,4}`-cycle through the 4-colored edge `e`,
/// found by walking the graph.
pub fn four_edges_of_cycle(g: &ColoredGraph, e: EdgeId, c: usize) -> Vec<EdgeId> {
    let start = g.edge(e).u;
    let mut out = Vec::new();
    let mut v = start;
    loop {
        let f = g.edge_at(v, APEX);
        out.push(f);
        v = g.neighbor(g.neighbor(v, APEX), c);
        if v == start {
            break;
        }
    }
    out
}
