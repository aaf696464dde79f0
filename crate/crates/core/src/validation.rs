//! Deciding, as far as is possible combinatorially, whether a 5-colored graph
//! is a gem of a compact 4-manifold whose only possible singular color is 4.
//!
//! 3-colored residues are checked exactly (a connected 3-colored graph is a
//! 2-sphere iff its regular embedding has χ = 2). 4-colored residues get one
//! of three verdicts: a sphere when some regular embedding has genus 0, a
//! non-sphere when χ ≠ 0 or `H_1 ≠ 0`, and unknown otherwise. Unknown
//! verdicts can only be upgraded by an explicit attestation.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::embedding::{rho_min, CyclicPermutation};
use crate::error::ValidationError;
use crate::graph::{residue_labels, Color, ColorSet, ColoredGraph};
use crate::invariants::{chain_complex, first_homology, AbelianGroup};

/// User-supplied facts that cannot be decided by the tool.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attestations {
    /// The apex residue is `#_m(S^1 x S^2)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simply_connected: Option<bool>,
    /// Color sets whose residues are declared 3-spheres.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub spheres: Vec<ColorSet>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("attestation {key}={value}: {reason}")]
pub struct AttestationSyntax {
    pub key: String,
    pub value: String,
    pub reason: String,
}

impl Attestations {
    pub fn is_empty(&self) -> bool {
        self.boundary.is_none() && self.simply_connected.is_none() && self.spheres.is_empty()
    }

    /// Add one `key=value` entry. Keys: `boundary` (`#m(S1xS2)`),
    /// `simply_connected` (`true`/`false`), `sphere` (digits, e.g. `0123`).
    pub fn insert(&mut self, key: &str, value: &str) -> Result<(), AttestationSyntax> {
        let err = |reason: &str| AttestationSyntax {
            key: key.to_string(),
            value: value.to_string(),
            reason: reason.to_string(),
        };
        match key {
            "boundary" => {
                let m = value
                    .strip_prefix('#')
                    .and_then(|r| r.strip_suffix("(S1xS2)"))
                    .and_then(|m| m.parse::<usize>().ok())
                    .ok_or_else(|| err("expected #m(S1xS2)"))?;
                if m == 0 {
                    return Err(err("spherical boundary components are not allowed"));
                }
                self.boundary = Some(m);
            }
            "simply_connected" => {
                self.simply_connected =
                    Some(value.parse::<bool>().map_err(|_| err("expected true or false"))?);
            }
            "sphere" => {
                let mut set = ColorSet::EMPTY;
                for ch in value.chars().filter(|&c| c != ',') {
                    let c = ch.to_digit(10).ok_or_else(|| err("expected color digits"))?;
                    set = set.with(c as usize);
                }
                if set.len() != 4 {
                    return Err(err("a sphere attestation names four colors"));
                }
                if !self.spheres.contains(&set) {
                    self.spheres.push(set);
                    self.spheres.sort();
                }
            }
            _ => return Err(err("unknown key")),
        }
        Ok(())
    }

    /// `key=value` lines in a stable order.
    pub fn entries(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        if let Some(m) = self.boundary {
            out.push(("boundary".into(), format!("#{m}(S1xS2)")));
        }
        if let Some(b) = self.simply_connected {
            out.push(("simply_connected".into(), b.to_string()));
        }
        for s in &self.spheres {
            out.push(("sphere".into(), s.iter().map(|c| c.to_string()).collect()));
        }
        out
    }
}

/// Result of the exact 2-sphere test on one 3-colored residue.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceCheck {
    pub colors: ColorSet,
    pub index: usize,
    pub min_vertex: usize,
    /// half the number of vertices
    pub q: usize,
    pub chi: i64,
    pub sphere: bool,
}

/// Check every 3-colored residue: with `2q` vertices it is a 2-sphere iff
/// `g_ab + g_ac + g_bc - q = 2`.
pub fn check_surface_residues(g: &ColoredGraph) -> Vec<SurfaceCheck> {
    let mut out = Vec::new();
    for s in ColorSet::subsets_of_size(g.n(), 3) {
        let (lab, count) = residue_labels(g, s);
        let mut size = vec![0usize; count];
        for &l in &lab {
            size[l] += 1;
        }
        let mut faces = vec![0usize; count];
        let cs: Vec<Color> = s.iter().collect();
        for (a, b) in [(cs[0], cs[1]), (cs[0], cs[2]), (cs[1], cs[2])] {
            let (pl, pc) = residue_labels(g, [a, b].into_iter().collect());
            let mut owner = vec![usize::MAX; pc];
            for (v, &l) in pl.iter().enumerate() {
                if owner[l] == usize::MAX {
                    owner[l] = lab[v];
                    faces[lab[v]] += 1;
                }
            }
        }
        let mut first = vec![usize::MAX; count];
        for (v, &l) in lab.iter().enumerate() {
            if first[l] == usize::MAX {
                first[l] = v;
            }
        }
        for i in 0..count {
            let q = size[i] / 2;
            let chi = faces[i] as i64 - q as i64;
            out.push(SurfaceCheck { colors: s, index: i, min_vertex: first[i], q, chi, sphere: chi == 2 });
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Sphere,
    NonSphere,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Sphere => "sphere",
            Verdict::NonSphere => "non-sphere",
            Verdict::Unknown => "unknown",
        })
    }
}

/// How a verdict was reached.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "by", rename_all = "snake_case")]
pub enum Evidence {
    /// a regular embedding of genus 0
    GenusZero { permutation: CyclicPermutation },
    /// the dual complex is not a closed 3-manifold
    EulerCharacteristic { chi: i64 },
    /// nontrivial first homology
    Homology { h1: AbelianGroup },
    Attested,
    Undecided { rho_min: i64, h1: AbelianGroup },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueReport {
    pub colors: ColorSet,
    pub index: usize,
    pub order: usize,
    pub verdict: Verdict,
    pub evidence: Evidence,
}

/// Verdicts for all 4-colored residues (one entry per residue).
fn four_residue_reports(g: &ColoredGraph, att: &Attestations) -> Result<Vec<ResidueReport>, ValidationError> {
    let mut out = Vec::new();
    for c in 0..=g.n() {
        let colors = g.colors().without(c);
        for (index, sub) in g.restrict(colors)?.into_iter().enumerate() {
            let r = &sub.graph;
            let chi = chain_complex(r).euler_characteristic();
            let (best, perms) = rho_min(r);
            let attested = att.spheres.contains(&colors);
            let (verdict, evidence) = if chi != 0 {
                (Verdict::NonSphere, Evidence::EulerCharacteristic { chi })
            } else if best.twice == 0 {
                (Verdict::Sphere, Evidence::GenusZero { permutation: perms[0].clone() })
            } else {
                let h1 = first_homology(r);
                if !h1.is_trivial() {
                    (Verdict::NonSphere, Evidence::Homology { h1 })
                } else if attested {
                    (Verdict::Sphere, Evidence::Attested)
                } else {
                    (Verdict::Unknown, Evidence::Undecided { rho_min: best.twice / 2, h1 })
                }
            };
            if attested && verdict == Verdict::NonSphere {
                return Err(ValidationError::AttestationConflict(format!(
                    "residue {index} of {colors} is attested as a sphere but is provably not one"
                )));
            }
            out.push(ResidueReport { colors, index, order: r.order(), verdict, evidence });
        }
    }
    Ok(out)
}

/// What is known about the apex residue.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Boundary {
    /// the apex residue is a 3-sphere: the manifold is closed
    Closed,
    /// nonspherical boundary; `sphere_bundles` is `m` when `#_m(S^1 x S^2)` is attested
    Bounded { h1: AbelianGroup, sphere_bundles: Option<usize> },
    /// not decided and not attested
    Undetermined { h1: AbelianGroup },
}

impl Boundary {
    pub fn is_closed(&self) -> bool {
        matches!(self, Boundary::Closed)
    }

    /// Closed, or boundary attested as `#_m(S^1 x S^2)`.
    pub fn sphere_bundle_hypothesis(&self) -> bool {
        matches!(self, Boundary::Closed | Boundary::Bounded { sphere_bundles: Some(_), .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorSummary {
    pub color: Color,
    pub residues: usize,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub surface_residues_ok: bool,
    pub residues: Vec<ResidueReport>,
    /// worst verdict over the residues missing each color
    pub colors: Vec<ColorSummary>,
    /// colors with a residue that is provably not a sphere
    pub singular: Vec<Color>,
    pub gs4_member: bool,
    pub apex_residues: usize,
    pub boundary: Boundary,
    pub orientable: bool,
    pub attestations_used: Vec<String>,
}

impl ValidationReport {
    /// Whether any verdict relied on an attestation.
    pub fn uses_attestations(&self) -> bool {
        !self.attestations_used.is_empty()
    }
}

/// Singular colors together with the per-residue verdicts. Requires every
/// 3-colored residue to be a 2-sphere.
pub fn classify_colors(
    g: &ColoredGraph,
    att: &Attestations,
) -> Result<(Vec<Color>, Vec<ResidueReport>), ValidationError> {
    if g.n() != 4 {
        return Err(ValidationError::WrongDimension(g.n()));
    }
    if let Some(bad) = check_surface_residues(g).into_iter().find(|s| !s.sphere) {
        return Err(ValidationError::PrerequisiteFailed(format!(
            "{}-residue at vertex {} has chi = {}",
            bad.colors, bad.min_vertex, bad.chi
        )));
    }
    let reports = four_residue_reports(g, att)?;
    let mut singular: Vec<Color> = reports
        .iter()
        .filter(|r| r.verdict == Verdict::NonSphere)
        .map(|r| r.colors.complement(4).iter().next().unwrap())
        .collect();
    singular.dedup();
    Ok((singular, reports))
}

/// Certify membership in the class of gems with no singular color other
/// than 4 and a unique residue missing color 4.
pub fn certify_gs4(g: &ColoredGraph, att: &Attestations) -> Result<ValidationReport, ValidationError> {
    if g.n() != 4 {
        return Err(ValidationError::WrongDimension(g.n()));
    }
    if let Some(bad) = check_surface_residues(g).into_iter().find(|s| !s.sphere) {
        return Err(ValidationError::NotAGem { colors: bad.colors, vertex: bad.min_vertex, chi: bad.chi });
    }
    let apex_set = g.colors().without(4);
    let apex_residues = g.census().count(apex_set);
    if apex_residues != 1 {
        return Err(ValidationError::MultipleApexResidues(apex_residues));
    }
    let (singular, residues) = classify_colors(g, att)?;

    let mut worst: BTreeMap<Color, Verdict> = BTreeMap::new();
    for r in &residues {
        let c = r.colors.complement(4).iter().next().unwrap();
        let w = worst.entry(c).or_insert(Verdict::Sphere);
        *w = match (*w, r.verdict) {
            (Verdict::NonSphere, _) | (_, Verdict::NonSphere) => Verdict::NonSphere,
            (Verdict::Unknown, _) | (_, Verdict::Unknown) => Verdict::Unknown,
            _ => Verdict::Sphere,
        };
    }
    let colors: Vec<ColorSummary> = (0..=4)
        .map(|c| ColorSummary { color: c, residues: g.census().hat(c), verdict: worst[&c] })
        .collect();
    let gs4_member = colors[..4].iter().all(|s| s.verdict == Verdict::Sphere);

    let apex = residues.iter().find(|r| r.colors == apex_set).unwrap();
    let apex_h1 = || match &apex.evidence {
        Evidence::Homology { h1 } | Evidence::Undecided { h1, .. } => h1.clone(),
        _ => first_homology(&g.restrict(apex_set).unwrap()[0].graph),
    };
    let boundary = match (apex.verdict, att.boundary) {
        (Verdict::Sphere, Some(_)) => {
            return Err(ValidationError::AttestationConflict(
                "the apex residue is a 3-sphere but a boundary was declared".into(),
            ))
        }
        (Verdict::Sphere, None) => Boundary::Closed,
        (_, Some(m)) => {
            let h1 = apex_h1();
            if h1 != AbelianGroup::free(m) {
                return Err(ValidationError::AttestationConflict(format!(
                    "boundary declared as #{m}(S1xS2) but its first homology is {h1}"
                )));
            }
            Boundary::Bounded { h1, sphere_bundles: Some(m) }
        }
        (Verdict::NonSphere, None) => Boundary::Bounded { h1: apex_h1(), sphere_bundles: None },
        (Verdict::Unknown, None) => Boundary::Undetermined { h1: apex_h1() },
    };
    if att.simply_connected == Some(true) {
        let h1 = first_homology(g);
        if !h1.is_trivial() {
            return Err(ValidationError::AttestationConflict(format!(
                "declared simply connected but H_1 of the coned manifold is {h1}"
            )));
        }
    }

    let mut used = Vec::new();
    for r in &residues {
        if r.evidence == Evidence::Attested {
            used.push(format!("sphere={}", r.colors.iter().map(|c| c.to_string()).collect::<String>()));
        }
    }
    used.dedup();
    if let Boundary::Bounded { sphere_bundles: Some(m), .. } = boundary {
        used.push(format!("boundary=#{m}(S1xS2)"));
    }
    if att.simply_connected == Some(true) {
        used.push("simply_connected=true".into());
    }

    Ok(ValidationReport {
        surface_residues_ok: true,
        residues,
        colors,
        singular,
        gs4_member,
        apex_residues,
        boundary,
        orientable: g.is_bipartite(),
        attestations_used: used,
    })
}
