use std::fmt;

use serde::{Deserialize, Serialize};

use super::Color;

/// A subset of the color palette `{0, .., n}` stored as a bitmask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "Vec<Color>", from = "Vec<Color>")]
pub struct ColorSet(u32);

impl ColorSet {
    pub const EMPTY: ColorSet = ColorSet(0);

    /// All colors `0..=n`.
    pub fn full(n: usize) -> Self {
        ColorSet((1u32 << (n + 1)) - 1)
    }

    pub fn from_bits(bits: u32) -> Self {
        ColorSet(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn contains(self, c: Color) -> bool {
        c < 32 && self.0 & (1 << c) != 0
    }

    pub fn with(self, c: Color) -> Self {
        ColorSet(self.0 | (1 << c))
    }

    pub fn without(self, c: Color) -> Self {
        ColorSet(self.0 & !(1 << c))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: ColorSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: ColorSet) -> Self {
        ColorSet(self.0 | other.0)
    }

    /// Complement inside `{0, .., n}`.
    pub fn complement(self, n: usize) -> Self {
        ColorSet(!self.0 & Self::full(n).0)
    }

    /// Colors in increasing order.
    pub fn iter(self) -> impl Iterator<Item = Color> {
        let bits = self.0;
        (0..32usize).filter(move |c| bits & (1 << c) != 0)
    }

    /// Every subset of `{0, .., n}` with exactly `size` colors, in increasing bit order.
    pub fn subsets_of_size(n: usize, size: usize) -> Vec<ColorSet> {
        (0..(1u32 << (n + 1)))
            .map(ColorSet)
            .filter(|s| s.len() == size)
            .collect()
    }
}

impl FromIterator<Color> for ColorSet {
    fn from_iter<I: IntoIterator<Item = Color>>(iter: I) -> Self {
        iter.into_iter().fold(ColorSet::EMPTY, |s, c| s.with(c))
    }
}

impl From<Vec<Color>> for ColorSet {
    fn from(v: Vec<Color>) -> Self {
        v.into_iter().collect()
    }
}

impl From<ColorSet> for Vec<Color> {
    fn from(s: ColorSet) -> Self {
        s.iter().collect()
    }
}

impl fmt::Debug for ColorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for ColorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
