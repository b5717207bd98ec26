//! Finite binary words.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// A finite word over `{0, 1}`.
///
/// Ordering is shortlex: shorter words come first, words of equal length
/// compare lexicographically with `0 < 1`. The empty word `Λ` is the least
/// element and the root of the binary tree.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitString {
    bits: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid character {ch:?} at position {pos} (expected '0' or '1')")]
pub struct ParseBitsError {
    pub ch: char,
    pub pos: usize,
}

impl BitString {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            bits: vec![false; n],
        }
    }

    pub fn ones(n: usize) -> Self {
        Self {
            bits: vec![true; n],
        }
    }

    /// The word of length `len` spelling `value` in binary, most significant bit first.
    pub fn from_index(value: u64, len: usize) -> Self {
        debug_assert!(len <= 64);
        let bits = (0..len).rev().map(|i| (value >> i) & 1 == 1).collect();
        Self { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn bit(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn child(&self, bit: bool) -> Self {
        let mut bits = Vec::with_capacity(self.bits.len() + 1);
        bits.extend_from_slice(&self.bits);
        bits.push(bit);
        Self { bits }
    }

    pub fn parent(&self) -> Option<Self> {
        if self.bits.is_empty() {
            None
        } else {
            Some(self.prefix(self.bits.len() - 1))
        }
    }

    /// First `n` bits. Panics if `n > len`.
    pub fn prefix(&self, n: usize) -> Self {
        Self {
            bits: self.bits[..n].to_vec(),
        }
    }

    pub fn is_prefix_of(&self, other: &BitString) -> bool {
        other.bits.starts_with(&self.bits)
    }

    /// One word is a prefix of the other.
    pub fn is_consistent_with(&self, other: &BitString) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    pub fn concat(&self, suffix: &BitString) -> Self {
        let mut bits = Vec::with_capacity(self.bits.len() + suffix.bits.len());
        bits.extend_from_slice(&self.bits);
        bits.extend_from_slice(&suffix.bits);
        Self { bits }
    }

    pub fn strip_prefix(&self, prefix: &BitString) -> Option<Self> {
        self.bits
            .strip_prefix(prefix.bits.as_slice())
            .map(|rest| Self {
                bits: rest.to_vec(),
            })
    }

    pub fn is_all_zeros(&self) -> bool {
        self.bits.iter().all(|b| !b)
    }

    pub fn is_all_ones(&self) -> bool {
        self.bits.iter().all(|&b| b)
    }

    /// All words of length `n` in lexicographic order.
    pub fn all_of_length(n: usize) -> impl Iterator<Item = BitString> {
        assert!(n < 64, "cannot enumerate words of length {n}");
        (0..1u64 << n).map(move |v| BitString::from_index(v, n))
    }

    /// All words of length at most `max_len` in shortlex order.
    pub fn all_up_to(max_len: usize) -> impl Iterator<Item = BitString> {
        (0..=max_len).flat_map(BitString::all_of_length)
    }
}

impl Ord for BitString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bits
            .len()
            .cmp(&other.bits.len())
            .then_with(|| self.bits.cmp(&other.bits))
    }
}

impl PartialOrd for BitString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bits.is_empty() {
            f.write_str("Λ")
        } else {
            write!(f, "\"{self}\"")
        }
    }
}

impl FromStr for BitString {
    type Err = ParseBitsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .enumerate()
            .map(|(pos, ch)| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(ParseBitsError { ch, pos }),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(BitString::from_bits)
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Shorthand for tests and examples: `bs("0101")`. Panics on bad input.
pub fn bs(s: &str) -> BitString {
    s.parse().expect("literal bit string")
}
