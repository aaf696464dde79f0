mod common;

use gemtri::corpus::{bounded, handle_corpus, s1_x_s3, sphere};
use gemtri::diagram::{export_diagram, verify_diagram, TrisectionDiagram};
use gemtri::invariants::{chain_complex, first_homology, homology, pi1_presentation, AbelianGroup, Coefficients};
use gemtri::io::{run_pipeline, GemFile, RunOptions, RunRecord};
use gemtri::trisection::Mode;
use proptest::prelude::*;

fn diagram(f: &GemFile, eps: usize) -> TrisectionDiagram {
    let eps = gemtri::embedding::cyclic_permutations(4)[eps].as_slice().to_vec();
    run_pipeline(f, &RunOptions { eps: Some(eps), ..Default::default() }).unwrap().diagram
}

/// Balanced braces and quotes, one statement per edge line.
fn looks_like_dot(s: &str) -> bool {
    let mut depth = 0i32;
    let mut in_quote = false;
    for c in s.chars() {
        match c {
            '"' => in_quote = !in_quote,
            '{' if !in_quote => depth += 1,
            '}' if !in_quote => depth -= 1,
            _ => {}
        }
        if depth < 0 {
            return false;
        }
    }
    let head = s.trim_start();
    depth == 0 && !in_quote && (head.starts_with("graph") || head.starts_with("digraph")) && s.trim_end().ends_with('}')
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn serde_and_exports(seed in 0u64..3_000, eps in 0usize..12, orientable in any::<bool>()) {
        let f = handle_corpus(seed, 1, 24, orientable).remove(0);
        let d = diagram(&f, eps);
        let back: TrisectionDiagram = serde_json::from_str(&serde_json::to_string(&d).unwrap()).unwrap();
        prop_assert_eq!(&back, &d);
        prop_assert_eq!(verify_diagram(&back), d.verification.clone().unwrap());
        let dot = String::from_utf8(export_diagram(&d, "dot").unwrap()).unwrap();
        prop_assert!(looks_like_dot(&dot), "{}", dot);
        let svg = String::from_utf8(export_diagram(&d, "svg").unwrap()).unwrap();
        prop_assert!(svg.contains("<svg") && svg.trim_end().ends_with("</svg>"));
        let json = export_diagram(&d, "json").unwrap();
        prop_assert_eq!(&json, &export_diagram(&back, "json").unwrap());
        let v: serde_json::Value = serde_json::from_slice(&json).unwrap();
        prop_assert_eq!(v["genus"].as_u64(), Some(d.genus as u64));
    }

    #[test]
    fn swapping_systems_keeps_the_diagram_valid(seed in 0u64..3_000, eps in 0usize..12) {
        let f = handle_corpus(seed, 1, 24, true).remove(0);
        let d = diagram(&f, eps);
        let mut m = d.clone();
        std::mem::swap(&mut m.alpha, &mut m.beta);
        let v = verify_diagram(&m);
        prop_assert!(v.homology.passed && v.counts.passed);
    }
}

#[test]
fn unknown_export_format() {
    let d = diagram(&GemFile::new(sphere()), 0);
    assert!(export_diagram(&d, "png").is_err());
}

#[test]
fn modes() {
    let closed = run_pipeline(&s1_x_s3(), &RunOptions::default()).unwrap();
    assert_eq!(closed.mode, Mode::TrisectionClosed);
    let b = run_pipeline(&bounded(), &RunOptions::default()).unwrap();
    assert_eq!(b.mode, Mode::TrisectionOfClosure);
    let gts = run_pipeline(&bounded(), &RunOptions { mode: gemtri::io::ModeChoice::Gts, ..Default::default() }).unwrap();
    assert_eq!(gts.mode, Mode::GTrisection);
    let e = run_pipeline(&bounded(), &RunOptions { mode: gemtri::io::ModeChoice::Closed, ..Default::default() }).unwrap_err();
    assert_eq!(e.exit_code(), 2);
}

#[test]
fn record_json_round_trip() {
    let r = run_pipeline(&s1_x_s3(), &RunOptions { sweep: true, ..Default::default() }).unwrap();
    let back: RunRecord = serde_json::from_slice(&r.to_json()).unwrap();
    assert_eq!(back.record_hash, r.record_hash);
    assert_eq!(back.certificate, r.certificate);
    assert_eq!(back.diagram, r.diagram);
}

#[test]
fn known_homology() {
    let z = AbelianGroup::free(1);
    assert!(first_homology(&sphere()).is_trivial());
    assert_eq!(first_homology(&s1_x_s3().graph), z);
    let h = homology(&s1_x_s3().graph, Coefficients::Z);
    assert_eq!(h.iter().map(|g| g.rank).collect::<Vec<_>>(), vec![1, 1, 0, 1, 1]);
    let h2 = homology(&sphere(), Coefficients::Z2);
    assert_eq!(h2.iter().map(|g| g.rank).collect::<Vec<_>>(), vec![1, 0, 0, 0, 1]);
    for f in handle_corpus(2, 4, 24, false) {
        assert_eq!(first_homology(&f.graph), z);
        assert_eq!(pi1_presentation(&f.graph).abelianization(), z);
        let cc = chain_complex(&f.graph);
        assert!(cc.is_complex());
        assert_eq!(cc.euler_characteristic(), 0);
    }
    assert_eq!(chain_complex(&sphere()).euler_characteristic(), 2);
}

#[test]
fn reduced_presentations_keep_abelianization() {
    for f in handle_corpus(6, 4, 30, true) {
        let p = pi1_presentation(&f.graph);
        let r = p.reduce();
        assert!(r.total_length() <= p.total_length());
        assert_eq!(r.abelianization(), p.abelianization());
    }
}
