//! Curve systems `α, β, γ` of a gem-induced trisection on the stabilized
//! central surface, their verification and export.

mod export;
mod surface;
mod verify;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use export::{export_diagram, Format};
pub use surface::{StabilizedSurface, SurfaceEdge};
pub use verify::{verify_diagram, CheckResult, VerificationRecord};

use crate::embedding::{rho_hat, CyclicPermutation};
use crate::error::DiagramError;
use crate::graph::{residue_labels, Bipartition, Color, ColorSet, ColoredGraph, Dart, EdgeId};
use crate::invariants::{chain_complex, first_homology, AbelianGroup};
use crate::trisection::{build_q, verify_ordering, ApexFrame, Mode, QComplex, TrisectionCertificate, APEX};
use surface::UnionFind;

/// One step of a curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "StepRepr", try_from = "StepRepr")]
pub enum Step {
    /// a residue edge, `forward` meaning from its `u` end to its `v` end
    Edge { edge: EdgeId, forward: bool },
    /// through the tube of handle `j`, `forward` following the stabilized edge from `u` to `v`
    Handle { j: usize, forward: bool },
    /// the whole curve is the meridian of handle `j`
    StabCircle { j: usize },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "t")]
enum StepRepr {
    #[serde(rename = "e")]
    E { id: EdgeId, d: i8 },
    #[serde(rename = "h")]
    H { j: usize, d: i8 },
    #[serde(rename = "sc")]
    Sc { j: usize },
}

fn direction(forward: bool) -> i8 {
    if forward {
        1
    } else {
        -1
    }
}

impl From<Step> for StepRepr {
    fn from(s: Step) -> Self {
        match s {
            Step::Edge { edge, forward } => StepRepr::E { id: edge, d: direction(forward) },
            Step::Handle { j, forward } => StepRepr::H { j, d: direction(forward) },
            Step::StabCircle { j } => StepRepr::Sc { j },
        }
    }
}

impl TryFrom<StepRepr> for Step {
    type Error = String;

    fn try_from(r: StepRepr) -> Result<Self, String> {
        let forward = |d: i8| match d {
            1 => Ok(true),
            -1 => Ok(false),
            _ => Err(format!("direction must be 1 or -1, got {d}")),
        };
        Ok(match r {
            StepRepr::E { id, d } => Step::Edge { edge: id, forward: forward(d)? },
            StepRepr::H { j, d } => Step::Handle { j, forward: forward(d)? },
            StepRepr::Sc { j } => Step::StabCircle { j },
        })
    }
}

impl Step {
    pub fn inverse(self) -> Step {
        match self {
            Step::Edge { edge, forward } => Step::Edge { edge, forward: !forward },
            Step::Handle { j, forward } => Step::Handle { j, forward: !forward },
            s => s,
        }
    }

    fn of_dart(d: Dart) -> Step {
        Step::Edge { edge: d.edge, forward: !d.reversed }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    Alpha,
    Beta,
    Gamma,
    StabCircle,
}

/// A closed curve on `Σ'` as a cyclic list of steps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Curve {
    pub kind: CurveKind,
    pub steps: Vec<Step>,
}

impl Curve {
    fn from_darts(kind: CurveKind, darts: &[Dart]) -> Self {
        Curve { kind, steps: darts.iter().map(|&d| Step::of_dart(d)).collect() }
    }

    pub fn stab_circle(j: usize) -> Self {
        Curve { kind: CurveKind::StabCircle, steps: vec![Step::StabCircle { j }] }
    }

    /// How often each residue edge is traversed, in either direction.
    pub fn multiplicities(&self) -> BTreeMap<EdgeId, usize> {
        let mut out = BTreeMap::new();
        for s in &self.steps {
            if let Step::Edge { edge, .. } = s {
                *out.entry(*edge).or_insert(0) += 1;
            }
        }
        out
    }
}

/// `K_{ab}`: nodes are the residues of `Γ_ĥ4` missing `a` and those missing
/// `b`; each cycle of the two complementary colors joins the two it lies in.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallGraph {
    pub label: (Color, Color),
    /// colors of the cycles serving as edges
    pub cycle_colors: (Color, Color),
    /// node counts of the two families
    pub nodes: (usize, usize),
    /// per cycle (by minimum vertex): node of each family
    pub edges: Vec<(usize, usize)>,
    /// spanning forest membership, greedy by cycle index
    pub forest: Vec<bool>,
}

impl WallGraph {
    fn new(g: &ColoredGraph, label: (Color, Color), cycle_colors: (Color, Color)) -> Self {
        let base: ColorSet = [label.0, label.1, cycle_colors.0, cycle_colors.1].into_iter().collect();
        let (lab_a, na) = residue_labels(g, base.without(label.0));
        let (lab_b, nb) = residue_labels(g, base.without(label.1));
        let (c, d) = (cycle_colors.0.min(cycle_colors.1), cycle_colors.0.max(cycle_colors.1));
        let edges: Vec<(usize, usize)> = g
            .census()
            .cycles(c, d)
            .iter()
            .map(|cyc| {
                let v = cyc.darts[0].tail(g);
                (lab_a[v], lab_b[v])
            })
            .collect();
        let mut uf = UnionFind::new(na + nb);
        let forest = edges.iter().map(|&(a, b)| uf.union(a, na + b)).collect();
        WallGraph { label, cycle_colors: (c, d), nodes: (na, nb), edges, forest }
    }

    pub fn forest_size(&self) -> usize {
        self.forest.iter().filter(|&&f| f).count()
    }
}

/// `(K_{ε0ε2}, K_{ε1ε3})`.
pub fn wall_graphs(g: &ColoredGraph, eps: &CyclicPermutation) -> (WallGraph, WallGraph) {
    let e = |j| eps.at(j);
    (WallGraph::new(g, (e(0), e(2)), (e(1), e(3))), WallGraph::new(g, (e(1), e(3)), (e(0), e(2))))
}

fn integral_genus(cert: &TrisectionCertificate) -> Result<usize, DiagramError> {
    cert.genus
        .as_int()
        .map(|x| x as usize)
        .ok_or_else(|| DiagramError::InvalidOrdering(format!("genus {} is not an integer", cert.genus)))
}

fn system_from_wall(g: &ColoredGraph, wall: &WallGraph, kind: CurveKind, k: usize) -> Vec<Curve> {
    let cycles = g.census().cycles(wall.cycle_colors.0, wall.cycle_colors.1);
    cycles
        .iter()
        .zip(&wall.forest)
        .filter(|(_, &f)| !f)
        .map(|(c, _)| Curve::from_darts(kind, &c.darts))
        .chain((0..k).map(Curve::stab_circle))
        .collect()
}

/// `α`: the `{ε0,ε2}`-cycles off the forest of `K_{ε1ε3}`, plus one meridian
/// per handle. `β` likewise with `{ε1,ε3}` and `K_{ε0ε2}`.
pub fn alpha_beta_curves(
    g: &ColoredGraph,
    eps: &CyclicPermutation,
    cert: &TrisectionCertificate,
) -> Result<(Vec<Curve>, Vec<Curve>), DiagramError> {
    let genus = integral_genus(cert)?;
    let (k02, k13) = wall_graphs(g, eps);
    let alpha = system_from_wall(g, &k13, CurveKind::Alpha, cert.k);
    let beta = system_from_wall(g, &k02, CurveKind::Beta, cert.k);
    for (system, curves) in [("alpha", &alpha), ("beta", &beta)] {
        if curves.len() != genus {
            return Err(DiagramError::CountMismatch { system, found: curves.len(), genus });
        }
    }
    Ok((alpha, beta))
}

const EXPANSION_LIMIT: usize = 1 << 22;

struct Expander<'a> {
    g: &'a ColoredGraph,
    handle: BTreeMap<EdgeId, usize>,
    witness: BTreeMap<EdgeId, (Color, usize)>,
    memo: BTreeMap<EdgeId, Vec<Step>>,
    active: Vec<EdgeId>,
}

impl Expander<'_> {
    /// Expansion of the apex edge `e` traversed from `u` to `v`.
    fn forward(&mut self, e: EdgeId) -> Result<Vec<Step>, DiagramError> {
        if let Some(&j) = self.handle.get(&e) {
            return Ok(vec![Step::Handle { j, forward: true }]);
        }
        if let Some(w) = self.memo.get(&e) {
            return Ok(w.clone());
        }
        if self.active.contains(&e) {
            return Err(DiagramError::ExpansionDiverged(e));
        }
        let &(color, index) = self.witness.get(&e).ok_or(DiagramError::ExpansionDiverged(e))?;
        let darts = &self
            .g
            .census()
            .cycles(color, APEX)
            .get(index)
            .ok_or_else(|| DiagramError::InvalidOrdering(format!("no {{{color},4}}-cycle {index}")))?
            .darts;
        let pos = darts.iter().position(|d| d.edge == e).ok_or_else(|| {
            DiagramError::InvalidOrdering(format!("witness cycle of edge {e} does not contain it"))
        })?;
        // the rest of the cycle runs from the head of darts[pos] back to its tail
        let rest: Vec<Dart> = darts[pos + 1..].iter().chain(&darts[..pos]).copied().collect();
        let path: Vec<Dart> = if darts[pos].reversed { rest } else { rest.iter().rev().map(|d| d.rev()).collect() };
        self.active.push(e);
        let mut out = Vec::new();
        for d in path {
            out.extend(self.dart(d)?);
            if out.len() > EXPANSION_LIMIT {
                return Err(DiagramError::ExpansionDiverged(e));
            }
        }
        self.active.pop();
        let out = free_reduce(&out);
        self.memo.insert(e, out.clone());
        Ok(out)
    }

    fn dart(&mut self, d: Dart) -> Result<Vec<Step>, DiagramError> {
        if self.g.edge(d.edge).color != APEX {
            return Ok(vec![Step::of_dart(d)]);
        }
        let f = self.forward(d.edge)?;
        Ok(if d.reversed { f.iter().rev().map(|s| s.inverse()).collect() } else { f })
    }
}

fn free_reduce(w: &[Step]) -> Vec<Step> {
    let mut out: Vec<Step> = Vec::with_capacity(w.len());
    for &s in w {
        if out.last() == Some(&s.inverse()) {
            out.pop();
        } else {
            out.push(s);
        }
    }
    out
}

fn cyclic_reduce(w: &[Step]) -> Vec<Step> {
    let out = free_reduce(w);
    let (mut a, mut b) = (0, out.len());
    while b - a >= 2 && out[a] == out[b - 1].inverse() {
        a += 1;
        b -= 1;
    }
    out[a..b].to_vec()
}

/// Indices of the `Q_1` edges whose cycles become `γ` curves.
pub fn gamma_candidates(q: &QComplex, cert: &TrisectionCertificate) -> Result<Vec<usize>, DiagramError> {
    let mut removed = vec![false; q.edges.len()];
    for step in &cert.ordering.collapsed {
        let e = q.q_edge(step.witness_color, step.witness_cycle).ok_or_else(|| {
            DiagramError::InvalidOrdering(format!("no {{{},4}}-cycle {}", step.witness_color, step.witness_cycle))
        })?;
        if removed[e] {
            return Err(DiagramError::InvalidOrdering(format!("cycle {e} witnesses two steps")));
        }
        removed[e] = true;
    }
    let mut uf = UnionFind::new(q.nodes.len());
    Ok((0..q.edges.len())
        .filter(|&e| !removed[e])
        .filter(|&e| !uf.union(q.edges[e].ends.0, q.edges[e].ends.1))
        .collect())
}

/// `γ`: surviving `{i,4}`-cycles with every apex edge expanded along its
/// witness cycle, or through its tube when stabilized.
pub fn gamma_curves(
    g: &ColoredGraph,
    q: &QComplex,
    cert: &TrisectionCertificate,
) -> Result<Vec<Curve>, DiagramError> {
    let genus = integral_genus(cert)?;
    let survivors = gamma_candidates(q, cert)?;
    if survivors.len() != genus {
        return Err(DiagramError::CountMismatch { system: "gamma", found: survivors.len(), genus });
    }
    let mut ex = Expander {
        g,
        handle: cert.ordering.stabilized.iter().enumerate().map(|(j, &e)| (e, j)).collect(),
        witness: cert.ordering.collapsed.iter().map(|s| (s.edge, (s.witness_color, s.witness_cycle))).collect(),
        memo: BTreeMap::new(),
        active: Vec::new(),
    };
    let mut out = Vec::with_capacity(survivors.len());
    for e in survivors {
        let qe = &q.edges[e];
        let mut steps = Vec::new();
        for &d in &g.census().cycles(qe.color, APEX)[qe.cycle].darts {
            steps.extend(ex.dart(d)?);
            if steps.len() > EXPANSION_LIMIT {
                return Err(DiagramError::ExpansionDiverged(qe.four_edges[0]));
            }
        }
        out.push(Curve { kind: CurveKind::Gamma, steps: cyclic_reduce(&steps) });
    }
    Ok(out)
}

/// A gem-induced trisection diagram `(Σ'; α, β, γ)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrisectionDiagram {
    pub surface: StabilizedSurface,
    pub alpha: Vec<Curve>,
    pub beta: Vec<Curve>,
    pub gamma: Vec<Curve>,
    pub genus: usize,
    pub mode: Mode,
    /// `H_1` of the apex residue
    pub boundary_h1: AbelianGroup,
    /// `χ` of the closed pseudomanifold `K(Γ)`
    pub euler_characteristic: i64,
    pub verification: Option<VerificationRecord>,
}

impl TrisectionDiagram {
    pub fn k(&self) -> usize {
        self.surface.k()
    }

    /// Reading of `(Σ'; α, β)` as a Heegaard diagram.
    pub fn alpha_beta_label(&self) -> String {
        let k = self.k();
        match self.mode {
            Mode::TrisectionClosed => format!("#_{k}(S1xS2)"),
            Mode::TrisectionOfClosure => format!("#_{k}(S1xS2), boundary capped off"),
            Mode::GTrisection => format!("#_{k}(S1xS2) # boundary"),
        }
    }

    /// Rename edges and colors from the working frame back to the input gem.
    pub fn to_input(mut self, frame: &ApexFrame) -> Self {
        let edge = |e: EdgeId| frame.to_input[e];
        let s = &mut self.surface;
        s.permutation = s.permutation.iter().map(|&c| frame.color_to_input(c)).collect();
        for e in s.edges.iter_mut().chain(s.handles.iter_mut()) {
            e.id = edge(e.id);
            e.color = frame.color_to_input(e.color);
        }
        s.edges.sort_by_key(|e| e.id);
        for c in self.alpha.iter_mut().chain(&mut self.beta).chain(&mut self.gamma) {
            for st in c.steps.iter_mut() {
                if let Step::Edge { edge: e, .. } = st {
                    *e = edge(*e);
                }
            }
        }
        self
    }
}

/// Build the surface, the three systems and the verification record for a
/// gem with apex color 4 and a certificate computed on it.
pub fn assemble_diagram(
    g: &ColoredGraph,
    eps: &CyclicPermutation,
    cert: &TrisectionCertificate,
    mode: Mode,
) -> Result<TrisectionDiagram, DiagramError> {
    if cert.permutation != eps.as_slice() || cert.apex != APEX {
        return Err(DiagramError::InvalidOrdering("certificate belongs to another permutation".into()));
    }
    let q = build_q(g, eps)?;
    let check = verify_ordering(&q, &cert.ordering);
    if !check.valid {
        return Err(DiagramError::InvalidOrdering(format!("{:?}", check.violation)));
    }
    let genus = integral_genus(cert)?;
    let (alpha, beta) = alpha_beta_curves(g, eps, cert)?;
    let gamma = gamma_curves(g, &q, cert)?;

    let (class, twisted) = match g.bipartition() {
        Bipartition::Bipartite { class } => (class.clone(), false),
        Bipartition::NonBipartite { .. } => (vec![0; g.order()], true),
    };
    let surface_edge = |id: EdgeId| {
        let e = g.edge(id);
        SurfaceEdge { id, u: e.u, v: e.v, color: e.color }
    };
    let surface = StabilizedSurface {
        permutation: eps.as_slice().to_vec(),
        vertex_count: g.order(),
        class,
        twisted,
        edges: (0..g.edge_count()).filter(|&e| g.edge(e).color != APEX).map(surface_edge).collect(),
        handles: cert.ordering.stabilized.iter().map(|&e| surface_edge(e)).collect(),
        rho_hat: rho_hat(g, eps, APEX).expect("apex residue is connected"),
    };
    let residue = g.restrict(g.colors().without(APEX)).expect("colors are in the palette");
    let mut d = TrisectionDiagram {
        surface,
        alpha,
        beta,
        gamma,
        genus,
        mode,
        boundary_h1: first_homology(&residue[0].graph),
        euler_characteristic: chain_complex(g).euler_characteristic(),
        verification: None,
    };
    d.verification = Some(verify_diagram(&d));
    Ok(d)
}
