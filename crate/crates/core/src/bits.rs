//! Bit strings with big-endian fixed-width fields.
//!
//! Bit `i` of a string lives in word `i / 64` at shift `63 - i % 64`, so the
//! lexicographic order of two equal-length strings matches the numeric order
//! of their leading fields. Bits past `len` are always zero, which keeps the
//! derived `Eq`/`Hash` meaningful.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;

use crate::error::{Error, Result};

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitString {
    words: Vec<u64>,
    len: usize,
}

/// Number of bits needed to write `x` in binary (`0` for `x == 0`).
pub fn bit_width(x: u64) -> u32 {
    64 - x.leading_zeros()
}

/// `⌈log2 x⌉` for `x ≥ 1`, and 0 for `x ≤ 1`.
pub fn ceil_log2(x: u64) -> u32 {
    if x <= 1 {
        0
    } else {
        bit_width(x - 1)
    }
}

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bits: usize) -> Self {
        BitString { words: Vec::with_capacity(bits.div_ceil(64)), len: 0 }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / 64] >> (63 - i % 64)) & 1 == 1
    }

    pub fn push(&mut self, bit: bool) {
        if self.len % 64 == 0 {
            self.words.push(0);
        }
        if bit {
            self.words[self.len / 64] |= 1 << (63 - self.len % 64);
        }
        self.len += 1;
    }

    /// Flips bit `i`. Used by mutation tests.
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len);
        self.words[i / 64] ^= 1 << (63 - i % 64);
    }

    /// Appends `value` as a big-endian field of exactly `width` bits.
    pub fn append_field(&mut self, value: u64, width: u32) -> Result<()> {
        if width > 64 || (width < 64 && value >> width != 0) {
            return Err(Error::FieldOverflow { value, width });
        }
        for k in (0..width).rev() {
            self.push((value >> k) & 1 == 1);
        }
        Ok(())
    }

    /// Reads a big-endian field of `width ≤ 64` bits starting at `offset`.
    pub fn read_field(&self, offset: usize, width: u32) -> Result<u64> {
        if width > 64 || offset + width as usize > self.len {
            return Err(Error::CorruptLabel(format!(
                "field [{offset}, +{width}) outside {} bits",
                self.len
            )));
        }
        let mut v = 0u64;
        for i in offset..offset + width as usize {
            v = (v << 1) | self.get(i) as u64;
        }
        Ok(v)
    }

    /// Appends an arbitrary-precision field of exactly `width` bits.
    pub fn append_big(&mut self, value: &BigUint, width: u64) -> Result<()> {
        if value.bits() > width {
            return Err(Error::InvalidArgument(format!(
                "big value of {} bits does not fit in {width}",
                value.bits()
            )));
        }
        for k in (0..width).rev() {
            self.push(value.bit(k));
        }
        Ok(())
    }

    pub fn read_big(&self, offset: usize, width: u64) -> Result<BigUint> {
        let end = offset as u64 + width;
        if end > self.len as u64 {
            return Err(Error::CorruptLabel(format!(
                "big field [{offset}, +{width}) outside {} bits",
                self.len
            )));
        }
        let mut v = BigUint::default();
        for i in 0..width {
            if self.get(offset + i as usize) {
                v.set_bit(width - 1 - i, true);
            }
        }
        Ok(v)
    }

    pub fn extend_from(&mut self, other: &BitString) {
        for i in 0..other.len {
            self.push(other.get(i));
        }
    }

    /// Copies bits `[start, end)` into a new string.
    pub fn slice(&self, start: usize, end: usize) -> BitString {
        assert!(start <= end && end <= self.len);
        let mut out = BitString::with_capacity(end - start);
        for i in start..end {
            out.push(self.get(i));
        }
        out
    }

    /// Returns `self ∘ "1" ∘ "0"^(target - len - 1)`.
    pub fn pad_unambiguous(&self, target: usize) -> Result<BitString> {
        if self.len >= target {
            return Err(Error::NoRoomForPadding { len: self.len, target });
        }
        let mut out = self.clone();
        out.push(true);
        while out.len < target {
            out.push(false);
        }
        Ok(out)
    }

    /// Inverse of [`BitString::pad_unambiguous`]: drops trailing zeros and the marker bit.
    pub fn strip_padding(&self) -> Result<BitString> {
        let mut i = self.len;
        while i > 0 && !self.get(i - 1) {
            i -= 1;
        }
        if i == 0 {
            return Err(Error::BadPadding);
        }
        Ok(self.slice(0, i - 1))
    }

    /// Hex form with the bits left-aligned in nibbles and zero-filled on the right.
    pub fn to_hex(&self) -> String {
        let nibbles = self.len.div_ceil(4);
        let mut s = String::with_capacity(nibbles);
        for j in 0..nibbles {
            let mut nib = 0u32;
            for b in 0..4 {
                let i = 4 * j + b;
                nib = (nib << 1) | (i < self.len && self.get(i)) as u32;
            }
            s.push(char::from_digit(nib, 16).unwrap());
        }
        s
    }

    pub fn from_hex(len: usize, hex: &str) -> Result<BitString> {
        if hex.len() != len.div_ceil(4) {
            return Err(Error::CorruptLabel(format!(
                "{} hex digits cannot hold exactly {len} bits",
                hex.len()
            )));
        }
        let mut out = BitString::with_capacity(len);
        for (j, c) in hex.chars().enumerate() {
            let nib = c
                .to_digit(16)
                .ok_or_else(|| Error::CorruptLabel(format!("bad hex digit {c:?}")))?;
            for b in 0..4 {
                let bit = (nib >> (3 - b)) & 1 == 1;
                if 4 * j + b < len {
                    out.push(bit);
                } else if bit {
                    return Err(Error::CorruptLabel("nonzero fill bits".into()));
                }
            }
        }
        Ok(out)
    }

    /// `<bitlen>:<hex>` as used in label files.
    pub fn to_record(&self) -> String {
        format!("{}:{}", self.len, self.to_hex())
    }

    pub fn from_record(s: &str) -> Result<BitString> {
        let (len, hex) = s
            .split_once(':')
            .ok_or_else(|| Error::CorruptLabel(format!("missing ':' in {s:?}")))?;
        let len: usize = len
            .parse()
            .map_err(|_| Error::CorruptLabel(format!("bad bit length {len:?}")))?;
        Self::from_hex(len, hex)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString(\"{self}\")")
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut out = BitString::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => out.push(false),
                '1' => out.push(true),
                _ => return Err(Error::InvalidArgument(format!("not a bit: {c:?}"))),
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn append_examples() {
        let mut s = BitString::new();
        s.append_field(5, 3).unwrap();
        assert_eq!(s.to_string(), "101");

        let mut s = bs("1");
        s.append_field(0, 2).unwrap();
        assert_eq!(s.to_string(), "100");

        let mut s = BitString::new();
        s.append_field(6, 3).unwrap();
        assert_eq!(s.read_field(0, 3).unwrap(), 6);
    }

    #[test]
    fn append_rejects_overflow() {
        let mut s = BitString::new();
        assert!(s.append_field(8, 3).is_err());
        assert!(s.append_field(1, 0).is_err());
        s.append_field(0, 0).unwrap();
        assert!(s.is_empty());
    }

    #[test]
    fn padding_examples() {
        assert_eq!(bs("10").pad_unambiguous(5).unwrap().to_string(), "10100");
        assert_eq!(bs("10100").strip_padding().unwrap().to_string(), "10");
        assert_eq!(BitString::new().pad_unambiguous(1).unwrap().to_string(), "1");
        assert!(bs("101").pad_unambiguous(3).is_err());
        assert_eq!(bs("0000").strip_padding(), Err(Error::BadPadding));
    }

    #[test]
    fn hex_records() {
        let s = bs("10111");
        assert_eq!(s.to_record(), "5:b8");
        assert_eq!(BitString::from_record("5:b8").unwrap(), s);
        assert_eq!(BitString::from_record("0:").unwrap(), BitString::new());
        assert!(BitString::from_record("5:b9").is_err());
        assert!(BitString::from_record("5:b").is_err());
    }

    #[test]
    fn log_helpers() {
        assert_eq!(bit_width(0), 0);
        assert_eq!(bit_width(127), 7);
        assert_eq!(bit_width(128), 8);
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(3), 2);
        assert_eq!(ceil_log2(4), 2);
        assert_eq!(ceil_log2(5), 3);
    }

    proptest! {
        #[test]
        fn strip_inverts_pad(bits in prop::collection::vec(any::<bool>(), 0..200), extra in 1usize..70) {
            let mut s = BitString::new();
            for b in &bits { s.push(*b); }
            let padded = s.pad_unambiguous(s.len() + extra).unwrap();
            prop_assert_eq!(padded.len(), s.len() + extra);
            prop_assert_eq!(padded.strip_padding().unwrap(), s);
        }

        #[test]
        fn field_round_trip(prefix in 0usize..70, width in 1u32..=62, raw in any::<u64>()) {
            let value = raw & ((1u64 << width) - 1);
            let mut s = BitString::new();
            for _ in 0..prefix { s.push(true); }
            s.append_field(value, width).unwrap();
            prop_assert_eq!(s.read_field(prefix, width).unwrap(), value);
            prop_assert_eq!(BitString::from_record(&s.to_record()).unwrap(), s);
        }
    }
}
