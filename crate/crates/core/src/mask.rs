//! Fixed-width subsets of a ground set of at most 64 elements.

use std::fmt;
use std::ops::{BitAnd, BitAndAssign, BitOr, BitOrAssign, Not, Sub};

/// Maximum supported ground-set size.
pub const MAX_ELEMENTS: usize = 64;

/// A subset of `{0, .., n-1}` stored as a bit mask. Bit `i` is element `i`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct SubsetMask(pub u64);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    /// The full ground set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_ELEMENTS);
        if n == MAX_ELEMENTS {
            SubsetMask(u64::MAX)
        } else {
            SubsetMask((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        debug_assert!(i < MAX_ELEMENTS);
        SubsetMask(1u64 << i)
    }

    pub fn from_elements<I: IntoIterator<Item = usize>>(elements: I) -> Self {
        elements
            .into_iter()
            .fold(SubsetMask::EMPTY, |acc, i| acc.with(i))
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// `|A| mod 2`.
    #[inline]
    pub fn parity(self) -> u8 {
        (self.0.count_ones() & 1) as u8
    }

    #[inline]
    pub fn contains(self, i: usize) -> bool {
        i < MAX_ELEMENTS && self.0 >> i & 1 == 1
    }

    #[inline]
    pub fn with(self, i: usize) -> Self {
        SubsetMask(self.0 | 1u64 << i)
    }

    #[inline]
    pub fn without(self, i: usize) -> Self {
        SubsetMask(self.0 & !(1u64 << i))
    }

    #[inline]
    pub fn is_subset(self, other: SubsetMask) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn is_superset(self, other: SubsetMask) -> bool {
        other.is_subset(self)
    }

    /// True when every set bit lies below `n`.
    #[inline]
    pub fn fits(self, n: usize) -> bool {
        self.is_subset(SubsetMask::full(n))
    }

    /// Lowest element, if any.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> Elements {
        Elements(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Image of the set under an element map `i -> map[i]`.
    pub fn map(self, map: &[usize]) -> Self {
        self.iter().fold(SubsetMask::EMPTY, |acc, i| acc.with(map[i]))
    }

    /// Ordering key used for canonical output: cardinality first, then value.
    #[inline]
    pub fn canonical_key(self) -> (u32, u64) {
        (self.0.count_ones(), self.0)
    }
}

/// Iterator over the elements of a [`SubsetMask`] in increasing order.
#[derive(Clone)]
pub struct Elements(u64);

impl Iterator for Elements {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Elements {}

impl IntoIterator for SubsetMask {
    type Item = usize;
    type IntoIter = Elements;

    fn into_iter(self) -> Elements {
        self.iter()
    }
}

impl FromIterator<usize> for SubsetMask {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        SubsetMask::from_elements(iter)
    }
}

impl BitAnd for SubsetMask {
    type Output = SubsetMask;
    fn bitand(self, rhs: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 & rhs.0)
    }
}

impl BitAndAssign for SubsetMask {
    fn bitand_assign(&mut self, rhs: SubsetMask) {
        self.0 &= rhs.0;
    }
}

impl BitOr for SubsetMask {
    type Output = SubsetMask;
    fn bitor(self, rhs: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 | rhs.0)
    }
}

impl BitOrAssign for SubsetMask {
    fn bitor_assign(&mut self, rhs: SubsetMask) {
        self.0 |= rhs.0;
    }
}

impl Sub for SubsetMask {
    type Output = SubsetMask;
    fn sub(self, rhs: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 & !rhs.0)
    }
}

/// Complement within all 64 bits; intersect with [`SubsetMask::full`] for a ground set.
impl Not for SubsetMask {
    type Output = SubsetMask;
    fn not(self) -> SubsetMask {
        SubsetMask(!self.0)
    }
}

impl PartialOrd for SubsetMask {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by `(cardinality, mask value)`.
impl Ord for SubsetMask {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.canonical_key().cmp(&other.canonical_key())
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}
