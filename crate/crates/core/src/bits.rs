//! Bit vectors over GF(2).
//!
//! Bits are stored one per byte with values 0 or 1. Index 0 is the first
//! bit: the first bit fed to a CRC register, the first input coordinate of
//! the polar transform, and the leftmost character of the textual form.

use std::fmt;
use std::ops::Index;

use crate::error::{Error, Result};

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitVec {
    bits: Vec<u8>,
}

impl BitVec {
    /// All-zero vector of the given length.
    pub fn zeros(len: usize) -> Self {
        BitVec {
            bits: vec![0; len],
        }
    }

    /// Builds a vector from a slice of 0/1 values.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        for &b in bits {
            if b > 1 {
                return Err(Error::InvalidBit(b));
            }
        }
        Ok(BitVec {
            bits: bits.to_vec(),
        })
    }

    /// Wraps a vector already known to contain only 0/1 values.
    pub(crate) fn from_raw(bits: Vec<u8>) -> Self {
        debug_assert!(bits.iter().all(|&b| b <= 1));
        BitVec { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Returns bit `i`. Panics if out of range, like slice indexing.
    pub fn get(&self, i: usize) -> u8 {
        self.bits[i]
    }

    /// Sets bit `i`. Panics on an out-of-range index or a non-bit value.
    pub fn set(&mut self, i: usize, bit: u8) {
        assert!(bit <= 1, "bit value must be 0 or 1");
        self.bits[i] = bit;
    }

    pub fn push(&mut self, bit: u8) {
        assert!(bit <= 1, "bit value must be 0 or 1");
        self.bits.push(bit);
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.bits
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        self.bits.iter().copied()
    }

    /// Hamming weight: number of ones.
    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }

    /// Elementwise XOR; the lengths must match.
    pub fn xor(&self, other: &BitVec) -> Result<BitVec> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                got: other.len(),
            });
        }
        Ok(BitVec::from_raw(
            self.bits
                .iter()
                .zip(&other.bits)
                .map(|(a, b)| a ^ b)
                .collect(),
        ))
    }

    /// Number of positions where the two vectors differ.
    pub fn hamming_distance(&self, other: &BitVec) -> Result<usize> {
        Ok(self.xor(other)?.weight())
    }

    /// Concatenation `self || other`.
    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut bits = self.bits.clone();
        bits.extend_from_slice(&other.bits);
        BitVec::from_raw(bits)
    }

    /// Parses a string of `0`/`1` characters, e.g. `"1011"`.
    pub fn parse_binary(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(0),
                '1' => bits.push(1),
                _ => {
                    return Err(Error::Parse(format!(
                        "invalid character `{c}` in binary string"
                    )))
                }
            }
        }
        Ok(BitVec::from_raw(bits))
    }

    /// Parses a hex string into bits, four bits per digit, MSB first.
    pub fn parse_hex(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(4 * s.len());
        for c in s.chars() {
            let v = c
                .to_digit(16)
                .ok_or_else(|| Error::Parse(format!("invalid hex digit `{c}`")))?;
            for j in (0..4).rev() {
                bits.push(((v >> j) & 1) as u8);
            }
        }
        Ok(BitVec::from_raw(bits))
    }

    pub fn to_binary_string(&self) -> String {
        self.bits.iter().map(|&b| if b == 1 { '1' } else { '0' }).collect()
    }
}

impl Index<usize> for BitVec {
    type Output = u8;

    fn index(&self, i: usize) -> &u8 {
        &self.bits[i]
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_binary_string())
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({})", self.to_binary_string())
    }
}
