//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Criteria listed in `EXPECTED_FAIL` are evaluated as stated and reported as
//! FAIL; they only break the run if they unexpectedly pass. Any other failure
//! exits non-zero.

mod common;

use std::time::{Duration, Instant};

use gemtri::corpus::{grow, rng, s1_x_s3, sphere};
use gemtri::diagram::{verify_diagram, Curve, TrisectionDiagram};
use gemtri::embedding::{cyclic_permutations, regular_embedding, rho, rho_hat, CyclicPermutation};
use gemtri::graph::ColoredGraph;
use gemtri::invariants::{first_homology, pi1_presentation, AbelianGroup, Coefficients};
use gemtri::io::{run_pipeline, GemFile, RunOptions, RunRecord};
use gemtri::trisection::{
    build_q, collapse_schedule, minimize_k, stabilization_set, verify_ordering, CollapseOrdering, CollapseStep,
    MinimizeOptions, APEX,
};
use rand::Rng;
use rayon::prelude::*;

use common::{corpus, four_edges_of_cycle, working, Corpus};

const EXPECTED_FAIL: &[usize] = &[3];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn all_eps() -> Vec<CyclicPermutation> {
    cyclic_permutations(4)
}

fn golden_sphere() -> Outcome {
    let t = Instant::now();
    let gem = GemFile::new(sphere());
    let r = match run_pipeline(&gem, &RunOptions::default()) {
        Ok(r) => r,
        Err(e) => return outcome(false, format!("pipeline failed: {e}")),
    };
    let elapsed = t.elapsed();
    let rho0 = rho(&gem.graph, &CyclicPermutation::identity(4)).twice == 0;
    let d = &r.diagram;
    let v = d.verification.as_ref().unwrap();
    let all_checks = v.passed() && v.gamma_pairs.passed && v.euler.as_ref().is_some_and(|e| e.passed);
    let l = &r.ledger;
    let ledger_zero = l.rk_lower + l.rk_upper + l.heegaard_lower == 0
        && [l.rho_eps_gamma, l.rho_eps_gamma_hat4, l.heegaard_upper, l.g_gt_upper].iter().all(|g| g.twice == 0);
    let pass = rho0
        && r.certificate.k == 0
        && r.certificate.genus.twice == 0
        && d.alpha.is_empty()
        && d.beta.is_empty()
        && d.gamma.is_empty()
        && all_checks
        && ledger_zero
        && elapsed < Duration::from_secs(1);
    outcome(
        pass,
        format!("rho=0 {rho0}, k={}, genus={}, empty diagram, checks {all_checks}, ledger zero {ledger_zero}, {elapsed:?}", r.certificate.k, r.certificate.genus),
    )
}

fn formula_vs_tracing(c: &Corpus) -> Outcome {
    let t = Instant::now();
    let check = |gems: &[GemFile]| -> (usize, usize) {
        gems.par_iter()
            .map(|f| {
                let mut bad = 0;
                for eps in all_eps() {
                    if rho(&f.graph, &eps) != regular_embedding(&f.graph, &eps).rho {
                        bad += 1;
                    }
                }
                (12, bad)
            })
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
    };
    let (n, bad) = check(&c.spheres);
    let elapsed = t.elapsed();
    let others: Vec<GemFile> = c.closed_non_spheres().chain(&c.bounded).cloned().collect();
    let (n2, bad2) = check(&others);
    let max_order = c.spheres.iter().map(|f| f.graph.order()).max().unwrap_or(0);
    outcome(
        c.spheres.len() >= 200 && max_order <= 60 && bad == 0 && bad2 == 0 && elapsed < Duration::from_secs(60),
        format!(
            "{} sphere gems (max order {max_order}): {bad}/{n} mismatches in {elapsed:?}; other gems {bad2}/{n2}",
            c.spheres.len()
        ),
    )
}

fn stabilization_equalities(c: &Corpus) -> Outcome {
    let graphs: Vec<ColoredGraph> = c.all().map(|f| working(&f.graph)).collect();
    let rows: Vec<(usize, usize, usize, usize, Option<String>)> = graphs
        .par_iter()
        .map(|g| {
            let (mut runs, mut rho_bad, mut census_bad, mut incomplete) = (0, 0, 0, 0);
            let mut example = None;
            for eps in all_eps() {
                runs += 1;
                let stab = stabilization_set(g, &eps);
                let census = g.census();
                let (e0, e3) = (eps.at(0), eps.at(3));
                let by_census = census.pair(e0, APEX) as i64 - census.triple(e0, e3, APEX) as i64;
                let drho = rho(g, &eps).twice - rho_hat(g, &eps, APEX).unwrap().twice;
                if 2 * stab.len() as i64 != drho {
                    rho_bad += 1;
                }
                if stab.len() as i64 != by_census {
                    census_bad += 1;
                    if example.is_none() {
                        example = Some(format!(
                            "order {} eps {:?}: set {} vs g_(e0,4) - g_(e0,e3,4) = {by_census}",
                            g.order(),
                            eps.as_slice(),
                            stab.len()
                        ));
                    }
                }
                let q = build_q(g, &eps).unwrap();
                if collapse_schedule(&q, &stab).is_err() {
                    incomplete += 1;
                }
            }
            (runs, rho_bad, census_bad, incomplete, example)
        })
        .collect();
    let runs: usize = rows.iter().map(|r| r.0).sum();
    let rho_bad: usize = rows.iter().map(|r| r.1).sum();
    let census_bad: usize = rows.iter().map(|r| r.2).sum();
    let incomplete: usize = rows.iter().map(|r| r.3).sum();
    let example = rows.iter().find_map(|r| r.4.clone()).unwrap_or_default();
    outcome(
        rho_bad == 0 && census_bad == 0 && incomplete == 0,
        format!(
            "{runs} (gem, eps): |set| != rho - rho_hat in {rho_bad}; |set| != g_(e0,4) - g_(e0,e3,4) in {census_bad} ({example}); incomplete {incomplete}"
        ),
    )
}

/// Whether every collapsed position has a color whose `{c,4}`-cycle has all
/// its 4-colored edges at or before it, judged from the gem itself.
fn collapse_property(g: &ColoredGraph, seq: &[usize], k: usize) -> bool {
    let mut position = vec![usize::MAX; g.edge_count()];
    for (p, &e) in seq.iter().enumerate() {
        position[e] = p;
    }
    (k..seq.len()).all(|p| (0..4).any(|c| four_edges_of_cycle(g, seq[p], c).iter().all(|&f| position[f] <= p)))
}

fn ordering_soundness(c: &Corpus) -> Outcome {
    let graphs: Vec<ColoredGraph> = c.all().map(|f| working(&f.graph)).collect();
    let rows: Vec<[usize; 5]> = graphs
        .par_iter()
        .enumerate()
        .map(|(gi, g)| {
            let mut r = rng(common::SEED ^ gi as u64);
            let mut row = [0usize; 5];
            for eps in all_eps() {
                let q = build_q(g, &eps).unwrap();
                let cert = minimize_k(g, &eps, MinimizeOptions::default()).unwrap();
                let seq = cert.ordering.sequence();
                let k = cert.ordering.k();
                row[0] += 1;
                if !(verify_ordering(&q, &cert.ordering).valid && collapse_property(g, &seq, k)) {
                    row[1] += 1;
                }
                if seq.len() < 2 {
                    continue;
                }
                let step_of = |e: usize| {
                    cert.ordering.collapsed.iter().find(|s| s.edge == e).cloned().unwrap_or(CollapseStep {
                        edge: e,
                        witness_color: APEX,
                        witness_cycle: 0,
                    })
                };
                for _ in 0..4 {
                    let a = r.gen_range(0..seq.len());
                    let b = r.gen_range(0..seq.len());
                    if a == b {
                        continue;
                    }
                    let mut m = seq.clone();
                    m.swap(a, b);
                    let mutated = CollapseOrdering {
                        stabilized: m[..k].to_vec(),
                        collapsed: m[k..].iter().map(|&e| step_of(e)).collect(),
                    };
                    let breaks = !collapse_property(g, &m, k);
                    let accepted = verify_ordering(&q, &mutated).valid;
                    if breaks {
                        row[2] += 1;
                        if accepted {
                            row[3] += 1;
                        }
                    } else if !accepted {
                        row[4] += 1;
                    }
                }
            }
            row
        })
        .collect();
    let sum = |i: usize| rows.iter().map(|r| r[i]).sum::<usize>();
    let (outputs, rejected_outputs, breaking, missed, false_rejects) = (sum(0), sum(1), sum(2), sum(3), sum(4));
    outcome(
        rejected_outputs == 0 && breaking >= 500 && missed == 0 && false_rejects == 0,
        format!(
            "{outputs} scheduler outputs, {rejected_outputs} rejected; {breaking} breaking transpositions, {missed} accepted; {false_rejects} sound transpositions rejected"
        ),
    )
}

struct Runs {
    records: Vec<(String, bool, RunRecord)>,
    errors: Vec<String>,
}

fn run_all(c: &Corpus) -> Runs {
    let jobs: Vec<(&GemFile, bool, CyclicPermutation)> = c
        .spheres
        .iter()
        .map(|f| (f, true))
        .chain(c.closed_non_spheres().chain(&c.bounded).map(|f| (f, false)))
        .flat_map(|(f, s)| all_eps().into_iter().map(move |e| (f, s, e)))
        .collect();
    let results: Vec<Result<(String, bool, RunRecord), String>> = jobs
        .par_iter()
        .map(|(f, s, eps)| {
            let name = f.name.clone().unwrap_or_default();
            run_pipeline(f, &RunOptions { eps: Some(eps.as_slice().to_vec()), ..Default::default() })
                .map(|r| (name.clone(), *s, r))
                .map_err(|e| format!("{name} {:?}: {e}", eps.as_slice()))
        })
        .collect();
    let mut runs = Runs { records: Vec::new(), errors: Vec::new() };
    for r in results {
        match r {
            Ok(x) => runs.records.push(x),
            Err(e) => runs.errors.push(e),
        }
    }
    runs
}

fn system(d: &mut TrisectionDiagram, s: usize) -> &mut Vec<Curve> {
    match s {
        0 => &mut d.alpha,
        1 => &mut d.beta,
        _ => &mut d.gamma,
    }
}

/// Every diagram obtained by deleting one curve, or by replacing it with a
/// copy of another curve of the same system.
fn mutants(d: &TrisectionDiagram) -> Vec<TrisectionDiagram> {
    let mut out = Vec::new();
    for s in 0..3 {
        let len = [d.alpha.len(), d.beta.len(), d.gamma.len()][s];
        for i in 0..len {
            let mut m = d.clone();
            system(&mut m, s).remove(i);
            out.push(m);
            for j in (0..len).filter(|&j| j != i) {
                let mut m = d.clone();
                let v = system(&mut m, s);
                v[i] = v[j].clone();
                out.push(m);
            }
        }
    }
    out
}

fn diagram_counts(runs: &Runs) -> Outcome {
    let mut bad = Vec::new();
    let mut nontrivial = 0;
    for (name, _, r) in &runs.records {
        let d = &r.diagram;
        let g = d.genus;
        let v = d.verification.as_ref().unwrap();
        let ok = d.alpha.len() == g
            && d.beta.len() == g
            && d.gamma.len() == g
            && v.spans == [g; 3]
            && v.cuts[0] == Some((1, 2))
            && v.cuts[1] == Some((1, 2))
            && v.cuts[2] == Some((1, 2))
            && v.passed();
        if !ok {
            bad.push(name.clone());
        }
        if g > 0 {
            nontrivial += 1;
        }
    }
    let samples: Vec<&TrisectionDiagram> = runs.records.iter().map(|(_, _, r)| &r.diagram).filter(|d| d.genus > 0).collect();
    let (total, survived): (usize, usize) = samples
        .par_iter()
        .map(|d| {
            let ms = mutants(d);
            let survived = ms.iter().filter(|m| verify_diagram(m).passed()).count();
            (ms.len(), survived)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    outcome(
        runs.errors.is_empty() && bad.is_empty() && survived == 0 && total > 0,
        format!(
            "{} diagrams ({nontrivial} of positive genus), {} failing, {} pipeline errors {:?}; {total} single-curve mutants, {survived} undetected",
            runs.records.len(),
            bad.len(),
            runs.errors.len(),
            runs.errors.iter().take(2).collect::<Vec<_>>()
        ),
    )
}

fn homology_consistency(c: &Corpus, runs: &Runs) -> Outcome {
    let mut closed_bipartite = 0;
    let mut nontrivial = 0;
    let mut handle_ranks = std::collections::BTreeSet::new();
    for (_, sphere_corpus, r) in &runs.records {
        let v = r.diagram.verification.as_ref().unwrap();
        if *sphere_corpus && r.diagram.surface.orientable() {
            closed_bipartite += 1;
            if v.coefficients != Coefficients::Z || !v.alpha_beta.is_trivial() {
                nontrivial += 1;
            }
        } else if !*sphere_corpus && r.diagram.boundary_h1.is_trivial() {
            // closed non-sphere gems present #_k(S^1 x S^2)
            handle_ranks.insert((v.alpha_beta.rank == r.certificate.k && v.alpha_beta.torsion.is_empty(), r.certificate.k));
        }
    }
    let gems: Vec<&GemFile> = c.all().collect();
    let mismatched: Vec<String> = gems
        .par_iter()
        .filter(|f| pi1_presentation(&f.graph).abelianization() != first_homology(&f.graph))
        .map(|f| f.name.clone().unwrap_or_default())
        .collect();
    let twisted_h1 = c.twisted.iter().all(|f| first_homology(&f.graph) == AbelianGroup::free(1));
    outcome(
        closed_bipartite > 0 && nontrivial == 0 && mismatched.is_empty(),
        format!(
            "{closed_bipartite} closed bipartite corpus runs, {nontrivial} with nontrivial (alpha,beta) cokernel; abelianized pi_1 vs SNF H_1 on {} gems: {} mismatches; handle gems (cokernel = Z^k, k) {handle_ranks:?}; twisted H_1 = Z {twisted_h1}",
            gems.len(),
            mismatched.len()
        ),
    )
}

fn ledger_inequalities(runs: &Runs) -> Outcome {
    let mut violations = Vec::new();
    for (name, _, r) in &runs.records {
        let l = &r.ledger;
        let g = r.certificate.genus.twice;
        let lower = 2 * (l.heegaard_lower + l.rk_lower) as i64;
        if !(lower <= g && g <= l.rho_eps_gamma.twice) || !l.corollary_holds {
            violations.push(name.clone());
        }
    }
    outcome(
        violations.is_empty() && !runs.records.is_empty(),
        format!("{} runs, {} violations {:?}", runs.records.len(), violations.len(), violations.iter().take(3).collect::<Vec<_>>()),
    )
}

fn scale() -> Outcome {
    let s = s1_x_s3();
    let apex = *gemtri::trisection::apex_candidates(&s.graph).iter().next().unwrap();
    let gems = [
        ("sphere", grow(&sphere(), 100, Some(APEX), &mut rng(8))),
        ("s1xs3", grow(&s.graph, 100, Some(apex), &mut rng(9))),
    ];
    let mut pass = true;
    let mut detail = Vec::new();
    for (name, g) in gems {
        let t = Instant::now();
        let r = run_pipeline(&GemFile::new(g.clone()), &RunOptions { sweep: true, budget: 0, ..Default::default() });
        let elapsed = t.elapsed();
        let ok = r.as_ref().is_ok_and(|r| r.diagram.verification.as_ref().unwrap().passed());
        pass &= ok && g.order() == 100 && elapsed < Duration::from_secs(10);
        detail.push(format!(
            "{name} order {}: {} in {elapsed:?}",
            g.order(),
            match &r {
                Ok(r) => format!("genus {} k {}", r.certificate.genus, r.certificate.k),
                Err(e) => e.to_string(),
            }
        ));
    }
    outcome(pass, detail.join("; "))
}

fn main() {
    let t = Instant::now();
    let c = corpus(200, 24);
    println!("corpus: {} sphere, {} handle, {} twisted, {} sums, {} bounded gems ({:?})", c.spheres.len(), c.handles.len(), c.twisted.len(), c.sums.len(), c.bounded.len(), t.elapsed());
    let mut results: Vec<(usize, &str, Outcome)> = vec![
        (1, "golden S4", golden_sphere()),
        (2, "census formula = face tracing", formula_vs_tracing(&c)),
        (3, "stabilization set equalities", stabilization_equalities(&c)),
        (4, "ordering soundness", ordering_soundness(&c)),
    ];
    let runs = run_all(&c);
    results.push((5, "diagram counts and completeness", diagram_counts(&runs)));
    results.push((6, "homology consistency", homology_consistency(&c, &runs)));
    results.push((7, "ledger inequalities", ledger_inequalities(&runs)));
    results.push((8, "scale", scale()));

    let mut unexpected = 0;
    for (n, name, o) in &results {
        let expected_fail = EXPECTED_FAIL.contains(n);
        let status = match (o.pass, expected_fail) {
            (true, false) => "PASS",
            (false, true) => "FAIL (expected)",
            (false, false) => "FAIL",
            (true, true) => "PASS (unexpected)",
        };
        if o.pass == expected_fail {
            unexpected += 1;
        }
        println!("criterion {n} [{name}]: {status} - {}", o.detail);
    }
    println!("acceptance finished in {:?}", t.elapsed());
    if unexpected > 0 {
        std::process::exit(1);
    }
}
