//! Seeded test gems: sphere gems grown by blob insertions and connected
//! sums, handle gems of `S^1 x S^3` and its twisted analogue, and a bounded
//! gem with boundary `S^1 x S^2`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{blob_insert, connected_sum, handle_insert, Color, ColoredGraph};
use crate::io::{parse_gem, GemFile};
use crate::trisection::apex_candidates;
use crate::validation::{classify_colors, Attestations, Verdict};

const S1XS3: &str = include_str!("../data/s1xs3.gem");
const BOUNDED: &str = include_str!("../data/bounded.gem");

/// The order-2 gem of `S^4`.
pub fn sphere() -> ColoredGraph {
    ColoredGraph::build(4, &(0..5).map(|c| (0, 1, c)).collect::<Vec<_>>()).expect("valid gem")
}

/// Order-12 gem of `S^1 x S^3`.
pub fn s1_x_s3() -> GemFile {
    parse_gem(S1XS3.as_bytes()).expect("stored gem parses")
}

/// Order-8 gem whose residue missing color 4 is `S^1 x S^2`, attested as such.
pub fn bounded() -> GemFile {
    parse_gem(BOUNDED.as_bytes()).expect("stored gem parses")
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Blob insertions on random edges until the order reaches `order`.
/// Edges of color `avoid` are skipped, which keeps the `avoid`-free residue connected.
pub fn grow(g: &ColoredGraph, order: usize, avoid: Option<Color>, rng: &mut impl Rng) -> ColoredGraph {
    let mut g = g.clone();
    while g.order() < order {
        let choices: Vec<usize> = (0..g.edge_count()).filter(|&e| Some(g.edge(e).color) != avoid).collect();
        let e = choices[rng.gen_range(0..choices.len())];
        g = blob_insert(&g, e).expect("edge id is valid");
    }
    g
}

fn even_order(rng: &mut impl Rng, lo: usize, hi: usize) -> usize {
    2 * rng.gen_range(lo / 2..=hi / 2)
}

/// `count` sphere gems of order at most `max_order` whose residue missing
/// color 4 is connected: blob-grown gems and connected sums of two of them.
pub fn sphere_corpus(seed: u64, count: usize, max_order: usize) -> Vec<GemFile> {
    assert!(max_order >= 4);
    let mut rng = rng(seed);
    let s4 = sphere();
    (0..count)
        .map(|i| {
            let (kind, g) = if i % 3 == 2 && max_order >= 6 {
                let total = even_order(&mut rng, 6, max_order);
                let a = even_order(&mut rng, 4, total - 2);
                let b = total + 2 - a;
                let g1 = grow(&s4, a, Some(4), &mut rng);
                let g2 = grow(&s4, b, Some(4), &mut rng);
                let v1 = rng.gen_range(0..g1.order());
                let v2 = rng.gen_range(0..g2.order());
                ("sum", connected_sum(&g1, &g2, v1, v2).expect("vertices are valid"))
            } else {
                let order = even_order(&mut rng, 4, max_order);
                ("blob", grow(&s4, order, Some(4), &mut rng))
            };
            GemFile { name: Some(format!("{kind}-{i}")), attestations: Attestations::default(), graph: g }
        })
        .collect()
}

fn closed_gem(g: &ColoredGraph) -> bool {
    match classify_colors(g, &Attestations::default()) {
        Ok((_, reports)) => reports.iter().all(|r| r.verdict == Verdict::Sphere),
        Err(_) => false,
    }
}

/// Handle gems: a handle move on a blob-grown sphere gem between two
/// vertices that no `ĉ`-residue joins. Opposite bipartition classes give
/// `S^1 x S^3`, equal classes the twisted bundle. Every returned gem has all
/// 4-residues certified as spheres and some color with a connected
/// complementary residue.
pub fn handle_corpus(seed: u64, count: usize, max_order: usize, orientable: bool) -> Vec<GemFile> {
    assert!(max_order >= 6);
    let mut rng = rng(seed);
    let s4 = sphere();
    let mut out = Vec::new();
    let mut attempts = 0usize;
    while out.len() < count {
        attempts += 1;
        assert!(attempts < 10_000 * count.max(1), "handle search does not terminate");
        let order = even_order(&mut rng, 8, max_order + 2);
        let g = grow(&s4, order, None, &mut rng);
        let class = match g.bipartition() {
            crate::graph::Bipartition::Bipartite { class } => class.clone(),
            crate::graph::Bipartition::NonBipartite { .. } => continue,
        };
        let x = rng.gen_range(0..g.order());
        let ys: Vec<usize> =
            (0..g.order()).filter(|&y| y != x && (class[y] != class[x]) == orientable).collect();
        let y = ys[rng.gen_range(0..ys.len())];
        let separated = (0..=4).all(|c| {
            let (labels, _) = crate::graph::residue_labels(&g, g.colors().without(c));
            labels[x] != labels[y]
        });
        if !separated {
            continue;
        }
        let Ok(h) = handle_insert(&g, x, y) else { continue };
        if apex_candidates(&h).is_empty() || !closed_gem(&h) {
            continue;
        }
        let tag = if orientable { "s1xs3" } else { "twisted" };
        out.push(GemFile {
            name: Some(format!("{tag}-{}", out.len())),
            attestations: Attestations::default(),
            graph: h,
        });
    }
    out
}

/// The bounded seed grown by blob insertions away from color 4.
pub fn bounded_corpus(seed: u64, count: usize, max_order: usize) -> Vec<GemFile> {
    let base = bounded();
    let mut rng = rng(seed);
    (0..count)
        .map(|i| {
            let order = even_order(&mut rng, base.graph.order(), max_order);
            GemFile {
                name: Some(format!("bounded-{i}")),
                attestations: base.attestations.clone(),
                graph: grow(&base.graph, order, Some(4), &mut rng),
            }
        })
        .collect()
}
