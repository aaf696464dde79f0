//! Integer Smith normal form (invariant factors only) and rank over Z/2.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Entry arithmetic that may overflow.
trait Entry: Clone + PartialEq + Zero {
    fn abs_cmp_key(&self) -> BigUint;
    fn small_abs(&self) -> Option<u64>;
    /// `a - q * b`
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self>;
    fn floor_div(&self, b: &Self) -> Self;
    fn to_big(&self) -> BigInt;
}

impl Entry for i64 {
    fn abs_cmp_key(&self) -> BigUint {
        BigUint::from(self.unsigned_abs())
    }
    fn small_abs(&self) -> Option<u64> {
        Some(self.unsigned_abs())
    }
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self> {
        q.checked_mul(*b).and_then(|p| self.checked_sub(p))
    }
    fn floor_div(&self, b: &Self) -> Self {
        Integer::div_floor(self, b)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Entry for BigInt {
    fn abs_cmp_key(&self) -> BigUint {
        self.magnitude().clone()
    }
    fn small_abs(&self) -> Option<u64> {
        None
    }
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self> {
        Some(self - q * b)
    }
    fn floor_div(&self, b: &Self) -> Self {
        Integer::div_floor(self, b)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

fn abs_less<T: Entry>(a: &T, b: &T) -> bool {
    match (a.small_abs(), b.small_abs()) {
        (Some(x), Some(y)) => x < y,
        _ => a.abs_cmp_key() < b.abs_cmp_key(),
    }
}

/// Diagonalize by unimodular row/column operations. Returns the nonzero
/// diagonal entries, or `None` on overflow.
fn diagonalize<T: Entry>(mut m: Vec<Vec<T>>, cols: usize) -> Option<Vec<BigInt>> {
    let rows = m.len();
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        // smallest nonzero entry of the remaining block
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in m.iter().enumerate().skip(t) {
            for (j, x) in row.iter().enumerate().skip(t) {
                if !x.is_zero() && best.is_none_or(|(bi, bj)| abs_less(x, &m[bi][bj])) {
                    best = Some((i, j));
                    if x.small_abs() == Some(1) {
                        break;
                    }
                }
            }
            if best.is_some_and(|(bi, bj)| m[bi][bj].small_abs() == Some(1)) {
                break;
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if m[i][t].is_zero() {
                    continue;
                }
                let q = m[i][t].floor_div(&m[t][t]);
                for j in t..cols {
                    let v = m[i][j].sub_mul(&q, &m[t][j])?;
                    m[i][j] = v;
                }
                if !m[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if m[t][j].is_zero() {
                    continue;
                }
                let q = m[t][j].floor_div(&m[t][t]);
                for row in m.iter_mut().skip(t) {
                    let v = row[j].sub_mul(&q, &row[t])?;
                    row[j] = v;
                }
                if !m[t][j].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
            // move the smallest remainder in row/column t to the pivot
            let mut best = (t, t);
            for i in t + 1..rows {
                if !m[i][t].is_zero() && abs_less(&m[i][t], &m[best.0][best.1]) {
                    best = (i, t);
                }
            }
            for j in t + 1..cols {
                if !m[t][j].is_zero() && abs_less(&m[t][j], &m[best.0][best.1]) {
                    best = (t, j);
                }
            }
            if best.0 != t {
                m.swap(t, best.0);
            } else if best.1 != t {
                for row in m.iter_mut() {
                    row.swap(t, best.1);
                }
            }
        }
        diag.push(m[t][t].to_big());
    }
    Some(diag)
}

/// Invariant factors `d_1 | d_2 | ...` (all positive) of an integer matrix
/// given densely by rows. Their count is the rank.
pub fn invariant_factors(m: &[Vec<i64>], cols: usize) -> Vec<BigUint> {
    let diag = match diagonalize(m.to_vec(), cols) {
        Some(d) => d,
        None => {
            let big: Vec<Vec<BigInt>> =
                m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
            diagonalize(big, cols).expect("bigint arithmetic does not overflow")
        }
    };
    let mut d: Vec<BigUint> = diag.into_iter().map(|x| x.abs().to_biguint().unwrap()).collect();
    // gcd/lcm sweep turns any diagonal into divisibility order
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let g = d[i].gcd(&d[j]);
            if g != d[i] {
                let l = &d[i] / &g * &d[j];
                d[i] = g;
                d[j] = l;
            }
        }
    }
    d
}

/// Torsion part: invariant factors greater than one.
pub fn torsion_of(factors: &[BigUint]) -> Vec<BigUint> {
    factors.iter().filter(|d| !d.is_one()).cloned().collect()
}

/// A dense matrix over Z/2 with rows as bitsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    cols: usize,
    words: usize,
    rows: Vec<Vec<u64>>,
}

impl BitMatrix {
    pub fn new(cols: usize) -> Self {
        BitMatrix { cols, words: cols.div_ceil(64).max(1), rows: Vec::new() }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn push_row(&mut self, ones: impl IntoIterator<Item = usize>) {
        let mut row = vec![0u64; self.words];
        for j in ones {
            assert!(j < self.cols);
            row[j / 64] ^= 1 << (j % 64);
        }
        self.rows.push(row);
    }

    pub fn from_int_rows(m: &[Vec<i64>], cols: usize) -> Self {
        let mut b = BitMatrix::new(cols);
        for r in m {
            b.push_row(r.iter().enumerate().filter(|(_, x)| *x % 2 != 0).map(|(j, _)| j));
        }
        b
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i][j / 64] >> (j % 64) & 1 == 1
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        let mut rank = 0;
        for j in 0..self.cols {
            let (w, b) = (j / 64, 1u64 << (j % 64));
            let Some(p) = (rank..rows.len()).find(|&i| rows[i][w] & b != 0) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != rank && row[w] & b != 0 {
                    for (x, y) in row.iter_mut().zip(&pivot) {
                        *x ^= y;
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}
