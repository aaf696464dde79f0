use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::surface::{SurfaceModel, Walk};
use super::{Curve, TrisectionDiagram};
use crate::invariants::{AbelianGroup, BitMatrix, Coefficients};
use crate::trisection::Mode;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        CheckResult { passed, detail: detail.into() }
    }

    fn fail(detail: impl Into<String>) -> Self {
        CheckResult::new(false, detail)
    }
}

/// Outcome of every combinatorial check on a diagram.
///
/// Curves are compared through their homology classes in `Σ'`; crossings
/// between different systems are not resolved geometrically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationRecord {
    /// (a) `|α| = |β| = |γ| = g`
    pub counts: CheckResult,
    /// (b) curves of `α`, and of `β`, are simple and pairwise vertex-disjoint
    pub disjointness: CheckResult,
    /// (c) `H_1(Σ'; Z/2)` has dimension `2g` and each system spans an isotropic rank-`g` subspace
    pub homology: CheckResult,
    /// (d) cutting along each system leaves a connected surface with `χ = 2` after capping
    pub completeness: CheckResult,
    /// (e) `(Σ'; α, β)` presents the apex residue plus `#_k(S^1 x S^2)` in homology
    pub heegaard: CheckResult,
    /// (f) the `(α,γ)` and `(β,γ)` cokernels are free
    pub gamma_pairs: CheckResult,
    /// `χ(M) = 2 + g - k_0 - k_1 - k_2`, closed manifolds only
    pub euler: Option<CheckResult>,
    pub coefficients: Coefficients,
    pub h1_dimension: usize,
    /// Z/2 ranks of `α, β, γ`
    pub spans: [usize; 3],
    /// `(components, χ)` after cutting along each system; `γ` by homology
    pub cuts: [Option<(usize, i64)>; 3],
    pub alpha_beta: AbelianGroup,
    pub alpha_beta_core: AbelianGroup,
    pub alpha_gamma: AbelianGroup,
    pub beta_gamma: AbelianGroup,
    /// ranks of the `(α,β)`, `(β,γ)`, `(γ,α)` cokernels
    pub k_candidates: [usize; 3],
}

impl VerificationRecord {
    /// Checks (a) through (e).
    pub fn passed(&self) -> bool {
        [&self.counts, &self.disjointness, &self.homology, &self.completeness, &self.heegaard]
            .iter()
            .all(|c| c.passed)
    }

    fn broken(coefficients: Coefficients, why: &str) -> Self {
        let f = || CheckResult::fail(why);
        VerificationRecord {
            counts: f(),
            disjointness: f(),
            homology: f(),
            completeness: f(),
            heegaard: f(),
            gamma_pairs: f(),
            euler: None,
            coefficients,
            h1_dimension: 0,
            spans: [0; 3],
            cuts: [None; 3],
            alpha_beta: AbelianGroup::default(),
            alpha_beta_core: AbelianGroup::default(),
            alpha_gamma: AbelianGroup::default(),
            beta_gamma: AbelianGroup::default(),
            k_candidates: [0; 3],
        }
    }
}

struct Paired {
    walks: Vec<Walk>,
    ends: Vec<Vec<i64>>,
}

impl Paired {
    fn new(model: &SurfaceModel, walks: Vec<Walk>) -> Self {
        let ends = walks.iter().map(|w| model.ends(w)).collect();
        Paired { walks, ends }
    }

    fn len(&self) -> usize {
        self.walks.len()
    }
}

fn matrix(model: &SurfaceModel, xs: &Paired, ys: &Paired) -> Vec<Vec<i64>> {
    (0..xs.len())
        .into_par_iter()
        .map(|i| ys.walks.iter().map(|y| model.pair(&xs.walks[i], &xs.ends[i], y)).collect())
        .collect()
}

fn rank2(m: &[Vec<i64>], cols: usize) -> usize {
    BitMatrix::from_int_rows(m, cols).rank()
}

fn cokernel(m: &[Vec<i64>], n: usize, coeff: Coefficients) -> AbelianGroup {
    match coeff {
        Coefficients::Z => AbelianGroup::cokernel(m, n, n),
        Coefficients::Z2 => AbelianGroup::free(n - rank2(m, n)),
    }
}

fn z2_dimension(h: &AbelianGroup) -> usize {
    h.rank + h.torsion.iter().filter(|t| !t.bit(0)).count()
}

fn disjoint(model: &SurfaceModel, system: &[Walk]) -> Result<(), String> {
    let mut seen = HashSet::new();
    let mut meridians = HashSet::new();
    for (i, w) in system.iter().enumerate() {
        match w {
            Walk::Meridian(j) => {
                if !meridians.insert(*j) {
                    return Err(format!("meridian {j} repeated"));
                }
            }
            Walk::Path(_) => {
                if !model.is_simple(w) {
                    return Err(format!("curve {i} is not simple"));
                }
                for v in model.vertices(w) {
                    if !seen.insert(v) {
                        return Err(format!("curve {i} meets an earlier curve at vertex {v}"));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Run checks (a)-(f) and, for closed manifolds, the Euler characteristic check.
pub fn verify_diagram(d: &TrisectionDiagram) -> VerificationRecord {
    let coeff = if d.surface.orientable() { Coefficients::Z } else { Coefficients::Z2 };
    let model = match d.surface.model() {
        Ok(m) => m,
        Err(e) => return VerificationRecord::broken(coeff, &format!("surface: {e}")),
    };
    let g = d.genus;
    let convert = |curves: &[Curve]| curves.iter().map(|c| model.walk(c)).collect::<Result<Vec<_>, _>>();
    let systems = match (convert(&d.alpha), convert(&d.beta), convert(&d.gamma)) {
        (Ok(a), Ok(b), Ok(c)) => [a, b, c],
        (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => {
            return VerificationRecord::broken(coeff, &format!("curve: {e}"))
        }
    };
    let names = ["alpha", "beta", "gamma"];

    let sizes: Vec<usize> = systems.iter().map(Vec::len).collect();
    let surface_genus = d.surface.genus();
    let counts = CheckResult::new(
        sizes.iter().all(|&s| s == g) && surface_genus.as_int() == Some(g as i64),
        format!("sizes {sizes:?}, genus {g}, surface genus {surface_genus}"),
    );
    if !counts.passed {
        return VerificationRecord { counts, ..VerificationRecord::broken(coeff, "curve counts do not match the genus") };
    }

    let disjoint_results: Vec<Result<(), String>> = systems[..2].iter().map(|s| disjoint(&model, s)).collect();
    let disjointness = match disjoint_results.iter().position(|r| r.is_err()) {
        None => CheckResult::new(true, "alpha and beta curves are simple and disjoint"),
        Some(i) => CheckResult::fail(format!("{}: {}", names[i], disjoint_results[i].as_ref().unwrap_err())),
    };

    let basis = Paired::new(&model, model.homology_spanning_set());
    let h1_dimension = rank2(&matrix(&model, &basis, &basis), basis.len());
    let paired: Vec<Paired> = systems.iter().map(|s| Paired::new(&model, s.clone())).collect();
    let mut spans = [0; 3];
    let mut isotropic = [true; 3];
    for (i, p) in paired.iter().enumerate() {
        spans[i] = rank2(&matrix(&model, p, &basis), basis.len());
        let inner = matrix(&model, p, p);
        isotropic[i] = inner.iter().all(|row| row.iter().all(|x| x % 2 == 0));
    }
    let homology = CheckResult::new(
        h1_dimension == 2 * g && spans.iter().all(|&s| s == g) && isotropic.iter().all(|&x| x),
        format!("dim H1 = {h1_dimension}, spans {spans:?}, isotropic {isotropic:?}"),
    );

    let mut cuts = [None; 3];
    let mut cut_ok = [false; 3];
    for i in 0..2 {
        if disjoint_results[i].is_ok() {
            let c = model.cut(&systems[i]);
            cuts[i] = Some(c);
            cut_ok[i] = c == (1, 2);
        }
    }
    // gamma curves are only disjoint up to homotopy: a set of g disjoint
    // two-sided curves leaves the surface connected iff their classes are independent
    let two_sided = systems[2].iter().all(|w| model.two_sided(w));
    if two_sided && isotropic[2] && spans[2] == g {
        cuts[2] = Some((1, model.chi() + 2 * g as i64));
        cut_ok[2] = model.chi() + 2 * g as i64 == 2;
    }
    let completeness = CheckResult::new(
        cut_ok.iter().all(|&x| x),
        format!("cuts {cuts:?} (gamma by homology)"),
    );

    let ab = matrix(&model, &paired[0], &paired[1]);
    let alpha_beta = cokernel(&ab, g, coeff);
    let core_a: Vec<usize> = (0..g).filter(|&i| matches!(systems[0][i], Walk::Path(_))).collect();
    let core_b: Vec<usize> = (0..g).filter(|&i| matches!(systems[1][i], Walk::Path(_))).collect();
    let core: Vec<Vec<i64>> = core_a.iter().map(|&i| core_b.iter().map(|&j| ab[i][j]).collect()).collect();
    let alpha_beta_core = cokernel(&core, core_a.len(), coeff);
    let heegaard = {
        let core_ok = core_a.len() == core_b.len()
            && match coeff {
                Coefficients::Z => alpha_beta_core == d.boundary_h1,
                Coefficients::Z2 => alpha_beta_core.rank == z2_dimension(&d.boundary_h1),
            };
        let full_ok = alpha_beta.rank == alpha_beta_core.rank + d.k() && alpha_beta.torsion == alpha_beta_core.torsion;
        CheckResult::new(
            core_ok && full_ok,
            format!("core {alpha_beta_core}, full {alpha_beta}, apex residue H1 {}", d.boundary_h1),
        )
    };

    let ag = matrix(&model, &paired[0], &paired[2]);
    let bg = matrix(&model, &paired[1], &paired[2]);
    let alpha_gamma = cokernel(&ag, g, coeff);
    let beta_gamma = cokernel(&bg, g, coeff);
    let gamma_pairs = CheckResult::new(
        alpha_gamma.torsion.is_empty() && beta_gamma.torsion.is_empty(),
        format!("alpha-gamma {alpha_gamma}, beta-gamma {beta_gamma}"),
    );
    let k_candidates = [alpha_beta.rank, beta_gamma.rank, alpha_gamma.rank];
    let euler = (d.mode == Mode::TrisectionClosed && d.boundary_h1.is_trivial()).then(|| {
        let predicted = 2 + g as i64 - k_candidates.iter().sum::<usize>() as i64;
        CheckResult::new(
            predicted == d.euler_characteristic,
            format!("2 + g - k0 - k1 - k2 = {predicted}, chi = {}", d.euler_characteristic),
        )
    });

    VerificationRecord {
        counts,
        disjointness,
        homology,
        completeness,
        heegaard,
        gamma_pairs,
        euler,
        coefficients: coeff,
        h1_dimension,
        spans,
        cuts,
        alpha_beta,
        alpha_beta_core,
        alpha_gamma,
        beta_gamma,
        k_candidates,
    }
}
