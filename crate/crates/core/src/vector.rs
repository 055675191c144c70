use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Widest vector a machine word can carry.
pub const MAX_WIDTH: usize = 63;

/// Arc state vector `X`: bit `i` (1-based) is the state of arc `a_i`.
///
/// Stored as a word with `a_1` in the least significant bit, so the BAT
/// enumeration order is plain binary counting and [`Self::bat_index`] is the
/// number of vectors the BAT emits before this one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ArcStateVector {
    bits: u64,
    width: u8,
}

impl ArcStateVector {
    pub fn zeros(width: usize) -> Result<Self> {
        Self::from_index(width, 0)
    }

    pub fn ones(width: usize) -> Result<Self> {
        Self::from_index(width, low_mask(width.min(MAX_WIDTH)))
    }

    /// The vector whose BAT index is `index`.
    pub fn from_index(width: usize, index: u64) -> Result<Self> {
        if width > MAX_WIDTH {
            return Err(Error::WidthCapExceeded {
                what: "state vector",
                width,
                cap: MAX_WIDTH,
            });
        }
        debug_assert!(index <= low_mask(width));
        Ok(ArcStateVector {
            bits: index,
            width: width as u8,
        })
    }

    /// From coordinates `(X(a_1), ..., X(a_m))`, each 0 or 1.
    pub fn from_states(states: &[u8]) -> Result<Self> {
        let mut bits = 0u64;
        for (i, &s) in states.iter().enumerate().take(MAX_WIDTH) {
            assert!(s <= 1, "arc states are 0 or 1");
            bits |= (s as u64) << i;
        }
        Self::from_index(states.len(), bits)
    }

    pub fn width(&self) -> usize {
        self.width as usize
    }

    pub fn bat_index(&self) -> u64 {
        self.bits
    }

    /// `X(a_i)` for 1-based `i`.
    pub fn get(&self, i: usize) -> bool {
        assert!(i >= 1 && i <= self.width(), "coordinate {i} out of range");
        self.bits >> (i - 1) & 1 == 1
    }

    pub fn set(&mut self, i: usize, state: bool) {
        assert!(i >= 1 && i <= self.width(), "coordinate {i} out of range");
        if state {
            self.bits |= 1 << (i - 1);
        } else {
            self.bits &= !(1 << (i - 1));
        }
    }

    pub fn states(&self) -> Vec<u8> {
        (1..=self.width()).map(|i| self.get(i) as u8).collect()
    }

    /// 1-based ids of functioning arcs.
    pub fn functioning(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=self.width()).filter(|&i| self.get(i))
    }

    /// `self ≤ other` coordinate-wise.
    pub fn le_coordinatewise(&self, other: &Self) -> bool {
        assert_eq!(self.width, other.width);
        self.bits & !other.bits == 0
    }

    /// `self` is emitted after `other` by the BAT.
    pub fn is_after(&self, other: &Self) -> bool {
        assert_eq!(self.width, other.width);
        self.bits > other.bits
    }

    /// BAT successor: the first 0 coordinate becomes 1 and every coordinate
    /// before it becomes 0. `None` once every coordinate is 1.
    pub fn next_vector(&self) -> Option<Self> {
        let first_zero = (!self.bits).trailing_zeros() as usize;
        if first_zero >= self.width() {
            return None;
        }
        let flipped = 1u64 << first_zero;
        Some(ArcStateVector {
            bits: (self.bits | flipped) & !(flipped - 1),
            width: self.width,
        })
    }
}

impl fmt::Display for ArcStateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for i in 1..=self.width() {
            if i > 1 {
                f.write_str(", ")?;
            }
            write!(f, "{}", self.get(i) as u8)?;
        }
        f.write_str(")")
    }
}

pub(crate) fn low_mask(width: usize) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

/// BAT enumeration from `start` (all zeros by default) to the all-ones vector.
pub fn enumerate_vectors(
    width: usize,
    start: Option<ArcStateVector>,
) -> Result<impl Iterator<Item = ArcStateVector>> {
    let first = match start {
        Some(v) => {
            assert_eq!(v.width(), width, "start vector has the wrong width");
            v
        }
        None => ArcStateVector::zeros(width)?,
    };
    Ok(std::iter::successors(Some(first), ArcStateVector::next_vector))
}
