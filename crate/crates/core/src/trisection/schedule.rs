//! Collapse orderings of the square complex and their direct verification.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::QComplex;
use crate::error::TrisectionError;
use crate::graph::{Color, EdgeId};

/// One collapsed square: edge `e_j` together with the color `i` whose
/// `{i,4}`-cycle `C_j` has all of its 4-colored edges placed by step `j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CollapseStep {
    pub edge: EdgeId,
    pub witness_color: Color,
    /// index of `C_j` among the `{i,4}`-cycles (ordered by minimum vertex)
    pub witness_cycle: usize,
}

/// Stabilized prefix followed by the collapsed suffix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CollapseOrdering {
    pub stabilized: Vec<EdgeId>,
    pub collapsed: Vec<CollapseStep>,
}

impl CollapseOrdering {
    pub fn k(&self) -> usize {
        self.stabilized.len()
    }

    /// The full sequence `e_1, .., e_p`.
    pub fn sequence(&self) -> Vec<EdgeId> {
        self.stabilized.iter().copied().chain(self.collapsed.iter().map(|s| s.edge)).collect()
    }
}

struct Greedy<'a> {
    q: &'a QComplex,
    count: Vec<usize>,
    placed: Vec<bool>,
    ready: BTreeSet<usize>,
}

impl<'a> Greedy<'a> {
    fn new(q: &'a QComplex) -> Self {
        let count: Vec<usize> = q.edges.iter().map(|e| e.four_edges.len()).collect();
        let mut g = Greedy { q, count, placed: vec![false; q.squares.len()], ready: BTreeSet::new() };
        for s in 0..q.edges.len() {
            g.refresh(s);
        }
        g
    }

    // if cycle `s` has one unplaced square left, that square becomes ready
    fn refresh(&mut self, s: usize) {
        if self.count[s] == 1 {
            if let Some(&e) = self.q.edges[s].four_edges.iter().find(|&&e| !self.placed[self.q.square_of(e)]) {
                self.ready.insert(self.q.square_of(e));
            }
        }
    }

    fn place(&mut self, sq: usize) {
        self.placed[sq] = true;
        self.ready.remove(&sq);
        for i in 0..4 {
            let s = self.q.sides[sq][i];
            self.count[s] -= 1;
            self.refresh(s);
        }
    }

    fn run(&mut self) -> Vec<CollapseStep> {
        let mut steps = Vec::new();
        while let Some(sq) = self.ready.pop_first() {
            let i = (0..4).find(|&i| self.count[self.q.sides[sq][i]] == 1).expect("ready square has a witness");
            let side = &self.q.edges[self.q.sides[sq][i]];
            steps.push(CollapseStep { edge: self.q.squares[sq], witness_color: i, witness_cycle: side.cycle });
            self.place(sq);
        }
        steps
    }

    fn residual(&self) -> Vec<EdgeId> {
        (0..self.placed.len()).filter(|&s| !self.placed[s]).map(|s| self.q.squares[s]).collect()
    }
}

/// Squares left unplaced by the greedy collapse after stabilizing `stabilized`,
/// together with the current unplaced count of every `Q_1` edge.
pub(crate) fn greedy_residual(q: &QComplex, stabilized: &[EdgeId]) -> (Vec<EdgeId>, Vec<usize>) {
    let mut g = Greedy::new(q);
    for &e in stabilized {
        let sq = q.square_of(e);
        if !g.placed[sq] {
            g.place(sq);
        }
    }
    g.run();
    (g.residual(), g.count)
}

/// Place the stabilized squares, then repeatedly collapse the lowest-id
/// square that is the last unplaced square of one of its four cycles.
///
/// Placing a square only lowers counts, so a schedulable square stays
/// schedulable: the greedy run completes iff some ordering with this
/// stabilized prefix exists.
pub fn collapse_schedule(q: &QComplex, stabilized: &[EdgeId]) -> Result<CollapseOrdering, TrisectionError> {
    let mut g = Greedy::new(q);
    let mut prefix = Vec::with_capacity(stabilized.len());
    for &e in stabilized {
        if !q.is_square(e) {
            return Err(TrisectionError::NotApexEdge(e));
        }
        if !prefix.contains(&e) {
            prefix.push(e);
            g.place(q.square_of(e));
        }
    }
    let collapsed = g.run();
    let residual = g.residual();
    if !residual.is_empty() {
        return Err(TrisectionError::Incomplete { residual });
    }
    Ok(CollapseOrdering { stabilized: prefix, collapsed })
}

/// First problem found by [`verify_ordering`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NotASquare { edge: EdgeId },
    Repeated { edge: EdgeId },
    Missing { edges: Vec<EdgeId> },
    /// no color `i` has every 4-colored edge of its cycle through `e_j` among `e_1..e_j`
    NoWitness { position: usize, edge: EdgeId },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderingCheck {
    /// the ordering is a permutation of the squares with the collapse property
    pub valid: bool,
    pub violation: Option<Violation>,
    /// positions whose recorded witness is wrong although another color works
    pub witness_mismatches: Vec<usize>,
}

/// Check the collapse property directly: for every collapsed `e_j` some
/// `{i,4}`-cycle through `e_j` has all its 4-colored edges in `{e_1..e_j}`.
pub fn verify_ordering(q: &QComplex, ordering: &CollapseOrdering) -> OrderingCheck {
    let fail = |v: Violation| OrderingCheck { valid: false, violation: Some(v), witness_mismatches: Vec::new() };
    let seq = ordering.sequence();
    let mut position = vec![usize::MAX; q.squares.len()];
    for (pos, &e) in seq.iter().enumerate() {
        if !q.is_square(e) {
            return fail(Violation::NotASquare { edge: e });
        }
        let sq = q.square_of(e);
        if position[sq] != usize::MAX {
            return fail(Violation::Repeated { edge: e });
        }
        position[sq] = pos;
    }
    let missing: Vec<EdgeId> =
        (0..q.squares.len()).filter(|&s| position[s] == usize::MAX).map(|s| q.squares[s]).collect();
    if !missing.is_empty() {
        return fail(Violation::Missing { edges: missing });
    }
    let k = ordering.stabilized.len();
    let mut mismatches = Vec::new();
    for (j, step) in ordering.collapsed.iter().enumerate() {
        let pos = k + j;
        let sq = q.square_of(step.edge);
        let ok = |i: Color| {
            q.edges[q.sides[sq][i]].four_edges.iter().all(|&f| position[q.square_of(f)] <= pos)
        };
        if !(0..4).any(ok) {
            return fail(Violation::NoWitness { position: pos, edge: step.edge });
        }
        let recorded = step.witness_color < 4
            && ok(step.witness_color)
            && q.edges[q.sides[sq][step.witness_color]].cycle == step.witness_cycle;
        if !recorded {
            mismatches.push(pos);
        }
    }
    OrderingCheck { valid: true, violation: None, witness_mismatches: mismatches }
}
