//! Cellular chains of the pseudocomplex `K(Γ)` dual to a gem, its homology,
//! a presentation of its fundamental group, and the genus bound ledger.
//!
//! A `d`-cell is a residue whose color set has `n - d` colors; its simplex
//! vertices carry the complementary labels. Faces are found by adding one
//! color back, so the complex is a Δ-complex and integer coefficients are
//! meaningful whether or not the gem is bipartite.

mod ledger;
mod presentation;
pub mod snf;

use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

pub use ledger::{bound_ledger, BoundLedger};
pub use presentation::{pi1_presentation, raw_presentation, GroupPresentation, Word};
pub use snf::{invariant_factors, BitMatrix};

use crate::graph::{residue_labels, ColorSet, ColoredGraph};

/// One cell of `K(Γ)`: the `index`-th residue (by minimum vertex) of `colors`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub colors: ColorSet,
    pub index: usize,
}

/// Sparse integer column: `(row, coefficient)` pairs.
pub type SparseColumn = Vec<(usize, i64)>;

#[derive(Clone, Debug)]
pub struct ChainComplex {
    pub n: usize,
    /// `cells[d]` lists the `d`-cells.
    pub cells: Vec<Vec<Cell>>,
    /// `boundary[d]` has one column per `d`-cell with rows indexed by `(d-1)`-cells;
    /// `boundary[0]` is empty.
    pub boundary: Vec<Vec<SparseColumn>>,
}

impl ChainComplex {
    pub fn cell_counts(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.cells
            .iter()
            .enumerate()
            .map(|(d, c)| if d % 2 == 0 { c.len() as i64 } else { -(c.len() as i64) })
            .sum()
    }

    /// Dense row-major matrix of `∂_d` (rows = `(d-1)`-cells).
    pub fn dense_boundary(&self, d: usize) -> Vec<Vec<i64>> {
        let rows = if d == 0 { 0 } else { self.cells[d - 1].len() };
        let cols = self.cells[d].len();
        let mut m = vec![vec![0i64; cols]; rows];
        for (j, col) in self.boundary[d].iter().enumerate() {
            for &(i, x) in col {
                m[i][j] += x;
            }
        }
        m
    }

    /// Whether `∂_{d-1} ∘ ∂_d = 0` for every `d`.
    pub fn is_complex(&self) -> bool {
        (2..=self.n).all(|d| {
            self.boundary[d].iter().all(|col| {
                let mut acc = vec![0i64; self.cells[d - 2].len()];
                for &(mid, a) in col {
                    for &(low, b) in &self.boundary[d - 1][mid] {
                        acc[low] += a * b;
                    }
                }
                acc.iter().all(|&x| x == 0)
            })
        })
    }
}

/// Build the chain complex of `K(Γ)`.
pub fn chain_complex(g: &ColoredGraph) -> ChainComplex {
    let n = g.n();
    // labels[bits] = residue label per vertex for that color set
    let mut labels: Vec<Option<Vec<usize>>> = vec![None; 1 << (n + 1)];
    let mut cells = Vec::with_capacity(n + 1);
    for d in 0..=n {
        let mut dim_cells = Vec::new();
        for s in ColorSet::subsets_of_size(n, n - d) {
            let (lab, count) = residue_labels(g, s);
            labels[s.bits() as usize] = Some(lab);
            dim_cells.extend((0..count).map(|index| Cell { colors: s, index }));
        }
        cells.push(dim_cells);
    }
    let mut boundary = vec![Vec::new()];
    for d in 1..=n {
        let offset = offsets(&cells[d - 1]);
        let mut cols = Vec::with_capacity(cells[d].len());
        for cell in &cells[d] {
            let rep = first_vertex(&labels, cell);
            let col = cell
                .colors
                .complement(n)
                .iter()
                .enumerate()
                .map(|(pos, l)| {
                    let face = cell.colors.with(l);
                    let idx = labels[face.bits() as usize].as_ref().unwrap()[rep];
                    let sign = if pos % 2 == 0 { 1 } else { -1 };
                    (offset[&face] + idx, sign)
                })
                .collect();
            cols.push(col);
        }
        boundary.push(cols);
    }
    ChainComplex { n, cells, boundary }
}

fn offsets(cells: &[Cell]) -> std::collections::HashMap<ColorSet, usize> {
    let mut map = std::collections::HashMap::new();
    for (i, c) in cells.iter().enumerate() {
        map.entry(c.colors).or_insert(i);
    }
    map
}

fn first_vertex(labels: &[Option<Vec<usize>>], cell: &Cell) -> usize {
    labels[cell.colors.bits() as usize]
        .as_ref()
        .unwrap()
        .iter()
        .position(|&l| l == cell.index)
        .unwrap()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Coefficients {
    Z,
    Z2,
}

/// A finitely generated abelian group `Z^rank ⊕ Z/t_1 ⊕ ...`.
///
/// Over Z/2 coefficients `rank` is the dimension and `torsion` is empty.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianGroup {
    pub rank: usize,
    pub torsion: Vec<BigUint>,
}

impl AbelianGroup {
    /// Cokernel of an integer matrix with `rows` rows (relations as columns
    /// or rows do not matter for the isomorphism type).
    pub fn cokernel(m: &[Vec<i64>], rows: usize, cols: usize) -> Self {
        let f = invariant_factors(m, cols);
        AbelianGroup { rank: rows - f.len(), torsion: snf::torsion_of(&f) }
    }

    /// Minimal number of generators.
    pub fn min_generators(&self) -> usize {
        self.rank + self.torsion.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroup { rank, torsion: Vec::new() }
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

fn rank_of(m: &[Vec<i64>], cols: usize, coeff: Coefficients) -> (usize, Vec<BigUint>) {
    match coeff {
        Coefficients::Z => {
            let f = invariant_factors(m, cols);
            (f.len(), snf::torsion_of(&f))
        }
        Coefficients::Z2 => (BitMatrix::from_int_rows(m, cols).rank(), Vec::new()),
    }
}

/// Homology of a chain complex in dimensions `0..=n`.
pub fn complex_homology(cc: &ChainComplex, coeff: Coefficients) -> Vec<AbelianGroup> {
    let ranks: Vec<(usize, Vec<BigUint>)> = (0..=cc.n + 1)
        .map(|d| {
            if d == 0 || d > cc.n {
                (0, Vec::new())
            } else {
                rank_of(&cc.dense_boundary(d), cc.cells[d].len(), coeff)
            }
        })
        .collect();
    (0..=cc.n)
        .map(|d| AbelianGroup {
            rank: cc.cells[d].len() - ranks[d].0 - ranks[d + 1].0,
            torsion: ranks[d + 1].1.clone(),
        })
        .collect()
}

/// `H_0 .. H_n` of `K(Γ)`.
pub fn homology(g: &ColoredGraph, coeff: Coefficients) -> Vec<AbelianGroup> {
    complex_homology(&chain_complex(g), coeff)
}

/// `H_1(K(Γ); Z)` using only the two boundary maps it needs.
pub fn first_homology(g: &ColoredGraph) -> AbelianGroup {
    let cc = chain_complex(g);
    let r1 = invariant_factors(&cc.dense_boundary(1), cc.cells[1].len()).len();
    let f2 = invariant_factors(&cc.dense_boundary(2), cc.cells[2].len());
    AbelianGroup { rank: cc.cells[1].len() - r1 - f2.len(), torsion: snf::torsion_of(&f2) }
}
