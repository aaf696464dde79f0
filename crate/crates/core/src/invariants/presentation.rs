use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::{chain_complex, AbelianGroup, ChainComplex};
use crate::graph::ColoredGraph;

/// A word in the generators: letter `g + 1` is generator `g`, `-(g + 1)` its inverse.
pub type Word = Vec<i32>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupPresentation {
    pub generators: usize,
    pub relators: Vec<Word>,
}

fn gen_of(letter: i32) -> usize {
    letter.unsigned_abs() as usize - 1
}

fn letter(gen: usize, inverse: bool) -> i32 {
    let l = gen as i32 + 1;
    if inverse {
        -l
    } else {
        l
    }
}

pub fn free_reduce(w: &[i32]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &x in w {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

pub fn cyclic_reduce(w: &[i32]) -> Word {
    let mut v = VecDeque::from(free_reduce(w));
    while v.len() >= 2 && v.front() == v.back().map(|x| -x).as_ref() {
        v.pop_front();
        v.pop_back();
    }
    v.into()
}

pub fn inverse(w: &[i32]) -> Word {
    w.iter().rev().map(|x| -x).collect()
}

/// Smallest rotation of `w` or of its inverse, as a dedupe key.
fn canonical(w: &[i32]) -> Word {
    let inv = inverse(w);
    let mut best = w.to_vec();
    for src in [w, inv.as_slice()] {
        for s in 0..src.len() {
            let rot: Word = src[s..].iter().chain(&src[..s]).copied().collect();
            if rot < best {
                best = rot;
            }
        }
    }
    best
}

impl GroupPresentation {
    /// Exponent-sum matrix (one row per relator).
    pub fn relation_matrix(&self) -> Vec<Vec<i64>> {
        self.relators
            .iter()
            .map(|r| {
                let mut row = vec![0i64; self.generators];
                for &x in r {
                    row[gen_of(x)] += x.signum() as i64;
                }
                row
            })
            .collect()
    }

    pub fn abelianization(&self) -> AbelianGroup {
        let f = super::invariant_factors(&self.relation_matrix(), self.generators);
        AbelianGroup { rank: self.generators - f.len(), torsion: super::snf::torsion_of(&f) }
    }

    pub fn total_length(&self) -> usize {
        self.relators.iter().map(Vec::len).sum()
    }

    /// Tietze reduction to a fixed point: cyclic reduction, duplicate
    /// removal, and elimination of any generator occurring exactly once in
    /// some relator (shortest relator first). A substitution that would
    /// blow the total length past a cap is skipped, so this terminates.
    pub fn reduce(&self) -> GroupPresentation {
        let cap = 4 * self.total_length() + 1024;
        let mut rels: Vec<Word> = self.relators.clone();
        let mut alive = vec![true; self.generators];
        loop {
            let mut seen = BTreeSet::new();
            rels = rels
                .iter()
                .map(|r| cyclic_reduce(r))
                .filter(|r| !r.is_empty() && seen.insert(canonical(r)))
                .collect();
            rels.sort_by_key(Vec::len);

            let total: usize = rels.iter().map(Vec::len).sum();
            let mut occurrences = vec![0usize; self.generators];
            for r in &rels {
                for &x in r {
                    occurrences[gen_of(x)] += 1;
                }
            }
            let mut chosen = None;
            'search: for (ri, r) in rels.iter().enumerate() {
                let mut gens: Vec<usize> = r.iter().map(|&x| gen_of(x)).collect();
                gens.sort_unstable();
                gens.dedup();
                for &x in &gens {
                    if r.iter().filter(|&&y| gen_of(y) == x).count() != 1 {
                        continue;
                    }
                    let growth = (occurrences[x] - 1) * (r.len() - 1);
                    if total - r.len() + growth > cap {
                        continue;
                    }
                    chosen = Some((ri, x));
                    break 'search;
                }
            }
            let Some((ri, x)) = chosen else { break };
            let r = rels.remove(ri);
            let at = r.iter().position(|&y| gen_of(y) == x).unwrap();
            // rotate so x^e leads: x^e u = 1
            let rest: Word = r[at + 1..].iter().chain(&r[..at]).copied().collect();
            let replacement = if r[at] > 0 { inverse(&rest) } else { rest };
            let replacement_inv = inverse(&replacement);
            for w in rels.iter_mut() {
                if w.iter().any(|&y| gen_of(y) == x) {
                    let mut out = Vec::with_capacity(w.len());
                    for &y in w.iter() {
                        if gen_of(y) != x {
                            out.push(y);
                        } else if y > 0 {
                            out.extend_from_slice(&replacement);
                        } else {
                            out.extend_from_slice(&replacement_inv);
                        }
                    }
                    *w = out;
                }
            }
            alive[x] = false;
        }
        let mut renumber = vec![usize::MAX; self.generators];
        let mut next = 0;
        for (g, &a) in alive.iter().enumerate() {
            if a {
                renumber[g] = next;
                next += 1;
            }
        }
        let relators = rels
            .into_iter()
            .map(|r| r.into_iter().map(|x| letter(renumber[gen_of(x)], x < 0)).collect())
            .collect();
        GroupPresentation { generators: next, relators }
    }
}

/// Presentation of `π_1(K(Γ))` from its 2-skeleton: generators are the
/// edges outside a BFS spanning tree, relators are triangle boundaries.
/// The result is Tietze-reduced.
pub fn pi1_presentation(g: &ColoredGraph) -> GroupPresentation {
    raw_presentation(&chain_complex(g)).reduce()
}

/// The unreduced presentation read off the 2-skeleton.
pub fn raw_presentation(cc: &ChainComplex) -> GroupPresentation {
    let vcount = cc.cells[0].len();
    let ecount = cc.cells[1].len();
    // (tail, head) of every 1-cell
    let ends: Vec<(usize, usize)> = cc.boundary[1]
        .iter()
        .map(|col| {
            let tail = col.iter().find(|&&(_, s)| s < 0).unwrap().0;
            let head = col.iter().find(|&&(_, s)| s > 0).unwrap().0;
            (tail, head)
        })
        .collect();
    let mut adj = vec![Vec::new(); vcount];
    for (e, &(a, b)) in ends.iter().enumerate() {
        adj[a].push((e, b));
        adj[b].push((e, a));
    }
    let mut in_tree = vec![false; ecount];
    let mut reached = vec![false; vcount];
    for root in 0..vcount {
        if reached[root] {
            continue;
        }
        reached[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &(e, w) in &adj[v] {
                if !reached[w] {
                    reached[w] = true;
                    in_tree[e] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    let mut gen = vec![usize::MAX; ecount];
    let mut generators = 0;
    for e in 0..ecount {
        if !in_tree[e] {
            gen[e] = generators;
            generators += 1;
        }
    }
    let relators = cc.boundary[2]
        .iter()
        .map(|col| {
            // col = [bc (+), ac (-), ab (+)]; loop ab · bc · ac⁻¹
            let path = [(col[2].0, false), (col[0].0, false), (col[1].0, true)];
            path.iter()
                .filter(|(e, _)| !in_tree[*e])
                .map(|&(e, inv)| letter(gen[e], inv))
                .collect()
        })
        .collect();
    GroupPresentation { generators, relators }
}
