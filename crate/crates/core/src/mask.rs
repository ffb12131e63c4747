//! Fixed-width subset masks.
//!
//! Element `j` (0-based) of the underlying universe is stored in bit `j`, so the
//! subset `S_i` encoded by integer `i` contains element `j` iff bit `j` of `i` is
//! set. Textual renderings put element 0 leftmost.

use std::fmt;

/// Hard upper bound on the universe width a mask can describe.
pub const MASK_BITS: usize = 32;

macro_rules! mask_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Copy, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name(pub u32);

        impl $name {
            pub const EMPTY: Self = Self(0);

            #[inline]
            pub fn bits(self) -> u32 {
                self.0
            }

            /// The set `{0, .., width-1}`.
            #[inline]
            pub fn full(width: usize) -> Self {
                debug_assert!(width <= MASK_BITS);
                if width >= MASK_BITS {
                    Self(u32::MAX)
                } else {
                    Self((1u32 << width) - 1)
                }
            }

            #[inline]
            pub fn singleton(i: usize) -> Self {
                Self(1u32 << i)
            }

            pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
                it.into_iter().fold(Self::EMPTY, |acc, i| acc.with(i))
            }

            #[inline]
            pub fn is_empty(self) -> bool {
                self.0 == 0
            }

            #[inline]
            pub fn len(self) -> usize {
                self.0.count_ones() as usize
            }

            #[inline]
            pub fn contains(self, i: usize) -> bool {
                i < MASK_BITS && self.0 >> i & 1 == 1
            }

            #[inline]
            pub fn with(self, i: usize) -> Self {
                Self(self.0 | 1u32 << i)
            }

            #[inline]
            pub fn without(self, i: usize) -> Self {
                Self(self.0 & !(1u32 << i))
            }

            #[inline]
            pub fn union(self, other: Self) -> Self {
                Self(self.0 | other.0)
            }

            #[inline]
            pub fn intersection(self, other: Self) -> Self {
                Self(self.0 & other.0)
            }

            #[inline]
            pub fn difference(self, other: Self) -> Self {
                Self(self.0 & !other.0)
            }

            #[inline]
            pub fn is_subset(self, other: Self) -> bool {
                self.0 & !other.0 == 0
            }

            #[inline]
            pub fn intersects(self, other: Self) -> bool {
                self.0 & other.0 != 0
            }

            /// True iff every element is below `width`.
            #[inline]
            pub fn fits(self, width: usize) -> bool {
                self.is_subset(Self::full(width))
            }

            /// Elements in ascending order.
            pub fn iter(self) -> MaskIter {
                MaskIter(self.0)
            }

            /// Renders the first `width` elements, element 0 leftmost.
            pub fn to_bit_string(self, width: usize) -> String {
                (0..width)
                    .map(|i| if self.contains(i) { '1' } else { '0' })
                    .collect()
            }

            /// Inverse of [`Self::to_bit_string`]; the width is the string length.
            pub fn parse_bit_string(s: &str) -> Option<Self> {
                if s.len() > MASK_BITS {
                    return None;
                }
                let mut m = Self::EMPTY;
                for (i, ch) in s.chars().enumerate() {
                    match ch {
                        '0' => {}
                        '1' => m = m.with(i),
                        _ => return None,
                    }
                }
                Some(m)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.debug_set().entries(self.iter()).finish()
            }
        }

        impl From<u32> for $name {
            fn from(bits: u32) -> Self {
                Self(bits)
            }
        }
    };
}

mask_type!(
    /// A subset of the vertex set of an arena.
    VertexSet
);

mask_type!(
    /// A subset of the colour set of a coloured Muller condition.
    ColorSet
);

/// Ascending iterator over the members of a mask.
#[derive(Clone)]
pub struct MaskIter(u32);

impl Iterator for MaskIter {
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

impl ExactSizeIterator for MaskIter {}
