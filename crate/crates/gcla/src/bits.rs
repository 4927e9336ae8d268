//! Bit-string helpers.
//!
//! Vectors are plain `Vec<u8>` holding 0/1 values; these helpers convert
//! between that and the "0101..." text form used in tests and CLI output.

use crate::error::{Error, Result};

/// Parses "0100..." into a 0/1 byte vector.
pub fn from_str(s: &str) -> Result<Vec<u8>> {
    s.bytes()
        .map(|b| match b {
            b'0' => Ok(0),
            b'1' => Ok(1),
            other => Err(Error::Parse(format!("unexpected byte {other:#x} in bit string"))),
        })
        .collect()
}

/// Renders a 0/1 byte vector as "0100...".
pub fn to_string(bits: &[u8]) -> String {
    bits.iter().map(|&b| if b == 0 { '0' } else { '1' }).collect()
}

/// The `width`-character binary representation of `x`, most significant
/// bit first (so increasing `x` enumerates {0,1}^width in lexicographic
/// string order).
pub fn msb_bits(x: u64, width: usize) -> Vec<u8> {
    (0..width).map(|i| ((x >> (width - 1 - i)) & 1) as u8).collect()
}

/// Number of 1-entries.
pub fn ones(bits: &[u8]) -> u64 {
    bits.iter().filter(|&&b| b == 1).count() as u64
}

/// Exact inner product of two equal-length 0/1 vectors.
pub fn inner_product(a: &[u8], b: &[u8]) -> Result<u64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { left: a.len() as u64, right: b.len() as u64 });
    }
    Ok(a.iter().zip(b).filter(|(x, y)| **x == 1 && **y == 1).count() as u64)
}

/// Coalesces an iterator of (bit, len) runs into maximal runs, dropping
/// zero-length entries.
pub fn coalesce<I>(runs: I) -> Coalesce<I::IntoIter>
where
    I: IntoIterator<Item = (u8, u64)>,
{
    Coalesce { inner: runs.into_iter(), pending: None }
}

pub struct Coalesce<I> {
    inner: I,
    pending: Option<(u8, u64)>,
}

impl<I: Iterator<Item = (u8, u64)>> Iterator for Coalesce<I> {
    type Item = (u8, u64);

    fn next(&mut self) -> Option<(u8, u64)> {
        loop {
            match self.inner.next() {
                Some((_, 0)) => continue,
                Some((bit, len)) => match self.pending {
                    Some((pb, pl)) if pb == bit => self.pending = Some((pb, pl + len)),
                    Some(prev) => {
                        self.pending = Some((bit, len));
                        return Some(prev);
                    }
                    None => self.pending = Some((bit, len)),
                },
                None => return self.pending.take(),
            }
        }
    }
}

/// Runs of a dense bit vector, before coalescing (already maximal).
pub fn dense_runs(bits: &[u8]) -> impl Iterator<Item = (u8, u64)> + '_ {
    DenseRuns { bits, pos: 0 }
}

struct DenseRuns<'a> {
    bits: &'a [u8],
    pos: usize,
}

impl<'a> Iterator for DenseRuns<'a> {
    type Item = (u8, u64);

    fn next(&mut self) -> Option<(u8, u64)> {
        if self.pos >= self.bits.len() {
            return None;
        }
        let bit = self.bits[self.pos];
        let start = self.pos;
        while self.pos < self.bits.len() && self.bits[self.pos] == bit {
            self.pos += 1;
        }
        Some((bit, (self.pos - start) as u64))
    }
}
