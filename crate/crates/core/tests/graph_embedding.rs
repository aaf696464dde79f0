mod common;

use gemtri::corpus::{grow, handle_corpus, rng, sphere, sphere_corpus};
use gemtri::embedding::{cyclic_permutations, regular_embedding, rho, rho_min, Genus};
use gemtri::graph::{blob_insert, connected_sum, ColorSet, ColoredGraph};
use gemtri::io::{parse_gem, GemFile};
use proptest::prelude::*;

fn grown(seed: u64, order: usize, handle: bool) -> ColoredGraph {
    if handle {
        let h = handle_corpus(seed, 1, 24, seed.is_multiple_of(2)).remove(0).graph;
        grow(&h, order.max(h.order()), None, &mut rng(seed))
    } else {
        grow(&sphere(), order, None, &mut rng(seed))
    }
}

/// Twice the genus from a census count, independent of the library formula.
fn census_twice(g: &ColoredGraph, eps: &[usize]) -> i64 {
    let census = g.census();
    let faces: usize = (0..5).map(|i| census.pair(eps[i], eps[(i + 1) % 5])).sum();
    let chi = g.order() as i64 - g.edge_count() as i64 + faces as i64;
    2 - chi
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn census_genus_matches_traced_faces(seed in 0u64..10_000, order in 2usize..40, handle in any::<bool>(), e in 0usize..12) {
        let g = grown(seed, order * 2, handle);
        let eps = &cyclic_permutations(4)[e];
        let emb = regular_embedding(&g, eps);
        prop_assert_eq!(emb.rho, rho(&g, eps));
        prop_assert_eq!(emb.rho.twice, census_twice(&g, eps.as_slice()));
        prop_assert_eq!(emb.faces.len(), (0..5).map(|i| g.census().pair(eps.at(i), eps.at((i + 1) % 5))).sum::<usize>());
    }

    #[test]
    fn blobs_keep_every_regular_genus(seed in 0u64..10_000, order in 1usize..20, handle in any::<bool>(), pick in any::<prop::sample::Index>()) {
        let g = grown(seed, order * 2, handle);
        let b = blob_insert(&g, pick.index(g.edge_count())).unwrap();
        prop_assert_eq!(b.order(), g.order() + 2);
        for eps in cyclic_permutations(4) {
            prop_assert_eq!(rho(&b, &eps), rho(&g, &eps));
        }
    }

    #[test]
    fn connected_sum_adds_genus(s1 in 0u64..5_000, s2 in 0u64..5_000, h1 in any::<bool>(), h2 in any::<bool>(), v in any::<prop::sample::Index>(), w in any::<prop::sample::Index>()) {
        let a = grown(s1, 16, h1);
        let b = grown(s2, 12, h2);
        let s = connected_sum(&a, &b, v.index(a.order()), w.index(b.order())).unwrap();
        prop_assert_eq!(s.order(), a.order() + b.order() - 2);
        prop_assert_eq!(s.is_bipartite(), a.is_bipartite() && b.is_bipartite());
        for eps in cyclic_permutations(4) {
            prop_assert_eq!(rho(&s, &eps), rho(&a, &eps) + rho(&b, &eps));
        }
    }

    #[test]
    fn text_round_trip(seed in 0u64..10_000, order in 1usize..30, handle in any::<bool>()) {
        let g = grown(seed, order * 2, handle);
        let f = GemFile::new(g.clone());
        prop_assert_eq!(&parse_gem(f.to_text().as_bytes()).unwrap().graph, &g);
        prop_assert_eq!(&parse_gem(f.to_json().as_bytes()).unwrap().graph, &g);
    }
}

#[test]
fn twelve_cyclic_permutations_up_to_reversal() {
    let perms = cyclic_permutations(4);
    assert_eq!(perms.len(), 12);
    for (i, p) in perms.iter().enumerate() {
        let mut s = p.as_slice().to_vec();
        s.sort_unstable();
        assert_eq!(s, vec![0, 1, 2, 3, 4]);
        for q in &perms[i + 1..] {
            assert_ne!(rotations(p.as_slice()), rotations(q.as_slice()));
            assert_ne!(rotations(p.reversed().as_slice()), rotations(q.as_slice()));
        }
    }
}

fn rotations(s: &[usize]) -> Vec<usize> {
    let i = s.iter().position(|&c| c == 0).unwrap();
    s[i..].iter().chain(&s[..i]).copied().collect()
}

#[test]
fn sphere_corpus_is_planar_everywhere() {
    for f in sphere_corpus(5, 30, 40) {
        let (best, perms) = rho_min(&f.graph);
        assert_eq!(best, Genus::ZERO);
        assert_eq!(perms.len(), 12);
    }
}

#[test]
fn residue_counts_of_the_standard_sphere() {
    let g = sphere();
    assert_eq!(g.order(), 2);
    for size in 0..=5 {
        for set in ColorSet::subsets_of_size(4, size) {
            // a residue with no colors is a single vertex
            assert_eq!(g.census().count(set), if size == 0 { 2 } else { 1 }, "{set:?}");
        }
    }
}

#[test]
fn traced_surface_orientability_follows_bipartiteness() {
    for f in handle_corpus(11, 4, 24, false).iter().chain(&handle_corpus(11, 4, 24, true)) {
        for eps in cyclic_permutations(4) {
            let emb = regular_embedding(&f.graph, &eps);
            assert_eq!(emb.orientable, f.graph.is_bipartite());
        }
    }
}
