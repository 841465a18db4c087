//! Fixed-width bit strings.
//!
//! A [`BitString`] is a string of up to 16 bits together with its width.
//! Bit 0 is the most significant position, so `10` is the integer 2 and
//! lexicographic order on strings of equal width coincides with numeric
//! order on values.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Widest supported bit string.
pub const MAX_WIDTH: u8 = 16;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    width: u8,
    value: u32,
}

impl BitString {
    /// Builds a bit string from an integer value read MSB-first.
    ///
    /// Panics if `width` exceeds [`MAX_WIDTH`] or `value` does not fit.
    pub fn new(value: u32, width: u8) -> Self {
        assert!(width <= MAX_WIDTH, "width {width} exceeds {MAX_WIDTH}");
        assert!(
            width == 32 || value < (1u32 << width),
            "value {value} does not fit in {width} bits"
        );
        BitString { width, value }
    }

    pub fn zero(width: u8) -> Self {
        BitString::new(0, width)
    }

    pub fn width(self) -> u8 {
        self.width
    }

    pub fn value(self) -> u32 {
        self.value
    }

    /// Value as a table index.
    pub fn index(self) -> usize {
        self.value as usize
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    /// Bit at `pos`, counting from the most significant end.
    pub fn bit(self, pos: u8) -> u8 {
        assert!(pos < self.width);
        ((self.value >> (self.width - 1 - pos)) & 1) as u8
    }

    /// Returns a copy with the bit at `pos` flipped.
    pub fn flip(self, pos: u8) -> Self {
        assert!(pos < self.width);
        BitString::new(self.value ^ (1 << (self.width - 1 - pos)), self.width)
    }

    pub fn xor(self, other: BitString) -> Self {
        debug_assert_eq!(self.width, other.width);
        BitString::new(self.value ^ other.value, self.width)
    }

    /// Sub-string of `len` bits starting at `start` (MSB-first).
    pub fn slice(self, start: u8, len: u8) -> Self {
        assert!(start + len <= self.width);
        let shift = self.width - start - len;
        let mask = if len == 32 { u32::MAX } else { (1u32 << len) - 1 };
        BitString::new((self.value >> shift) & mask, len)
    }

    /// Bits in reverse order (MSB becomes LSB).
    pub fn reversed(self) -> Self {
        let mut v = 0u32;
        for i in 0..self.width {
            v = (v << 1) | u32::from(self.bit(self.width - 1 - i));
        }
        BitString::new(v, self.width)
    }

    /// All bit strings of the given width in ascending order.
    pub fn all(width: u8) -> impl Iterator<Item = BitString> {
        assert!(width <= MAX_WIDTH);
        (0u32..(1u32 << width)).map(move |v| BitString::new(v, width))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for pos in 0..self.width {
            write!(f, "{}", self.bit(pos))?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b{self}")
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::Parse("empty bit string".into()));
        }
        if s.len() > MAX_WIDTH as usize {
            return Err(Error::Parse(format!(
                "bit string `{s}` longer than {MAX_WIDTH} bits"
            )));
        }
        let mut value = 0u32;
        for c in s.chars() {
            value = match c {
                '0' => value << 1,
                '1' => (value << 1) | 1,
                _ => return Err(Error::Parse(format!("invalid bit `{c}` in `{s}`"))),
            };
        }
        Ok(BitString::new(value, s.len() as u8))
    }
}
