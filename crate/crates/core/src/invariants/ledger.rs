use serde::{Deserialize, Serialize};

use super::{first_homology, pi1_presentation};
use crate::embedding::{rho_min, Genus};
use crate::error::TrisectionError;
use crate::graph::ColoredGraph;
use crate::trisection::TrisectionCertificate;
use crate::validation::{Boundary, ValidationReport};

/// Lower and upper bounds around the produced trisection genus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundLedger {
    pub rho_eps_gamma: Genus,
    pub rho_eps_gamma_hat4: Genus,
    /// minimal generator count of `H_1(M̂)`
    pub rk_lower: usize,
    /// generator count of the reduced `π_1` presentation
    pub rk_upper: usize,
    /// minimal generator count of `H_1` of the apex residue
    pub heegaard_lower: usize,
    pub heegaard_upper: Genus,
    pub g_gt_upper: Genus,
    /// only when the boundary is empty or `#_m(S^1 x S^2)`
    pub g_t_upper: Option<Genus>,
    /// min over colors `i` with a connected `î`-residue of its regular genus;
    /// a bound for this gem only, not the invariant of the manifold
    pub per_gem_hat_bound: Option<Genus>,
    /// `heegaard_lower + rk_lower <= g_gt_upper <= rho_eps_gamma`
    pub corollary_holds: bool,
    /// `rk_lower <= rk_upper` and `heegaard_lower <= heegaard_upper`
    pub intervals_hold: bool,
}

/// Assemble the ledger for a certified gem (apex color 4) and a certificate
/// computed on it.
pub fn bound_ledger(
    g: &ColoredGraph,
    cert: Option<&TrisectionCertificate>,
    report: &ValidationReport,
) -> Result<BoundLedger, TrisectionError> {
    let cert = cert.ok_or_else(|| TrisectionError::MissingCertificate("bound ledger needs a trisection".into()))?;
    let rk_lower = first_homology(g).min_generators();
    let rk_upper = pi1_presentation(g).generators.max(rk_lower);
    let heegaard_lower = match &report.boundary {
        Boundary::Closed => 0,
        Boundary::Bounded { h1, .. } | Boundary::Undetermined { h1 } => h1.min_generators(),
    };
    let per_gem_hat_bound = (0..=g.n())
        .filter(|&c| g.census().hat(c) == 1)
        .filter_map(|c| {
            let sub = g.restrict(g.colors().without(c)).ok()?;
            Some(rho_min(&sub[0].graph).0)
        })
        .min();
    let lower = Genus::from_int((heegaard_lower + rk_lower) as i64);
    let g_t_upper = report.boundary.sphere_bundle_hypothesis().then_some(cert.genus);
    Ok(BoundLedger {
        rho_eps_gamma: cert.rho_gamma,
        rho_eps_gamma_hat4: cert.rho_gamma_hat,
        rk_lower,
        rk_upper,
        heegaard_lower,
        heegaard_upper: cert.rho_gamma_hat,
        g_gt_upper: cert.genus,
        g_t_upper,
        per_gem_hat_bound,
        corollary_holds: lower <= cert.genus && cert.genus <= cert.rho_gamma,
        intervals_hold: rk_lower <= rk_upper && Genus::from_int(heegaard_lower as i64) <= cert.rho_gamma_hat,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::CyclicPermutation;
    use crate::trisection::{minimize_k, MinimizeOptions};
    use crate::validation::{certify_gs4, Attestations};

    #[test]
    fn sphere_ledger_is_zero() {
        let g = ColoredGraph::build(4, &(0..5).map(|c| (0, 1, c)).collect::<Vec<_>>()).unwrap();
        let report = certify_gs4(&g, &Attestations::default()).unwrap();
        assert!(matches!(bound_ledger(&g, None, &report), Err(TrisectionError::MissingCertificate(_))));
        let cert = minimize_k(&g, &CyclicPermutation::identity(4), MinimizeOptions::default()).unwrap();
        let l = bound_ledger(&g, Some(&cert), &report).unwrap();
        assert_eq!((l.rk_lower, l.rk_upper, l.heegaard_lower), (0, 0, 0));
        assert_eq!(l.g_gt_upper, Genus::ZERO);
        assert_eq!(l.g_t_upper, Some(Genus::ZERO));
        assert_eq!(l.per_gem_hat_bound, Some(Genus::ZERO));
        assert!(l.corollary_holds && l.intervals_hold);
    }
}
