//! Run-length-encoded binary sequences and the one-pass inner product.
//!
//! This is the simple scheme the grammar constructions are contrasted with:
//! inner products cost O(n_RLE) merge steps, and the step counter is exposed
//! so that bound is testable.

use std::fmt::Write as _;

use crate::bits;
use crate::error::{Error, Result};
use crate::slp::{Slp, MAX_LEN};

/// Canonical run-length encoding: adjacent runs have distinct bits, every
/// run is non-empty, and the total length fits in 63 bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RleSeq {
    runs: Vec<(u8, u64)>,
    total: u64,
}

impl RleSeq {
    /// Builds a canonical sequence from arbitrary (bit, len) runs:
    /// zero-length runs are dropped and same-bit neighbours merged.
    pub fn from_runs<I: IntoIterator<Item = (u8, u64)>>(runs: I) -> Result<RleSeq> {
        let mut out: Vec<(u8, u64)> = Vec::new();
        let mut total: u64 = 0;
        for (bit, len) in bits::coalesce(runs) {
            if bit > 1 {
                return Err(Error::InvalidSymbol(bit));
            }
            total = total.checked_add(len).filter(|&t| t <= MAX_LEN).ok_or(Error::LengthOverflow)?;
            out.push((bit, len));
        }
        Ok(RleSeq { runs: out, total })
    }

    /// Encodes a dense 0/1 string.
    pub fn encode(bits_in: &[u8]) -> Result<RleSeq> {
        RleSeq::from_runs(bits::dense_runs(bits_in))
    }

    /// Decodes back to a dense string, refusing to allocate past `budget`.
    pub fn decode(&self, budget: u64) -> Result<Vec<u8>> {
        if self.total > budget {
            return Err(Error::BudgetExceeded { needed: self.total, budget });
        }
        let mut out = Vec::with_capacity(self.total as usize);
        for &(bit, len) in &self.runs {
            out.resize(out.len() + len as usize, bit);
        }
        Ok(out)
    }

    /// Number of runs (the symbol n_RLE).
    pub fn n_rle(&self) -> usize {
        self.runs.len()
    }

    pub fn total_len(&self) -> u64 {
        self.total
    }

    pub fn runs(&self) -> &[(u8, u64)] {
        &self.runs
    }

    /// Count of 1-entries, straight off the run representation.
    pub fn ones(&self) -> u64 {
        self.runs.iter().filter(|(b, _)| *b == 1).map(|(_, l)| *l).sum()
    }

    /// Re-encodes as an SLP (a chain of zero/one run grammars).
    pub fn to_slp(&self) -> Result<Slp> {
        if self.runs.is_empty() {
            return Err(Error::Parse("empty sequence has no SLP".into()));
        }
        let mut b = crate::slp::SlpBuilder::new();
        let mut acc: Option<usize> = None;
        for &(bit, len) in &self.runs {
            let t = b.terminal(bit)?;
            let run = b.repeat(t, len)?;
            acc = Some(b.append(acc, run)?);
        }
        Ok(b.finish(acc.unwrap()))
    }

    /// Canonical "rle v1" text form.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "rle v1 {}", self.runs.len()).unwrap();
        for &(bit, len) in &self.runs {
            writeln!(out, "{bit} {len}").unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<RleSeq> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty rle file".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 || fields[0] != "rle" || fields[1] != "v1" {
            return Err(Error::Parse(format!("bad rle header: {header:?}")));
        }
        let n: usize = fields[2].parse().map_err(|_| Error::Parse("bad run count".into()))?;
        let mut runs = Vec::with_capacity(n);
        for (i, line) in lines.by_ref().take(n).enumerate() {
            let toks: Vec<&str> = line.split_whitespace().collect();
            let [bit, len] = toks.as_slice() else {
                return Err(Error::Parse(format!("bad run line {i}: {line:?}")));
            };
            let bit: u8 = bit.parse().map_err(|_| Error::Parse(format!("bad bit on run {i}")))?;
            let len: u64 = len.parse().map_err(|_| Error::Parse(format!("bad length on run {i}")))?;
            if len == 0 {
                return Err(Error::Parse(format!("zero-length run {i}")));
            }
            runs.push((bit, len));
        }
        if runs.len() != n {
            return Err(Error::Parse("fewer runs than header declares".into()));
        }
        if lines.next().is_some() {
            return Err(Error::Parse("trailing content after runs".into()));
        }
        RleSeq::from_runs(runs)
    }
}

/// Converts an SLP to its canonical RLE by coalescing the run stream;
/// memory stays O(parse-tree depth + n_RLE), the expansion is never
/// materialized.
pub fn slp_to_rle(g: &Slp) -> RleSeq {
    RleSeq::from_runs(g.run_stream()).expect("slp lengths already validated")
}

/// One-pass inner product of two equal-length sequences.
pub fn inner_product(a: &RleSeq, b: &RleSeq) -> Result<u64> {
    inner_product_counted(a, b).map(|(v, _)| v)
}

/// Inner product plus the number of two-cursor merge steps taken.
/// Each step exhausts at least one run, so steps <= n_RLE(a) + n_RLE(b).
pub fn inner_product_counted(a: &RleSeq, b: &RleSeq) -> Result<(u64, usize)> {
    if a.total != b.total {
        return Err(Error::DimensionMismatch { left: a.total, right: b.total });
    }
    Ok(merge_inner_product(a.runs.iter().copied(), b.runs.iter().copied()))
}

/// Two-cursor merge over arbitrary run iterators (assumed equal totals);
/// returns (inner product, merge steps).
pub(crate) fn merge_inner_product<A, B>(mut a: A, mut b: B) -> (u64, usize)
where
    A: Iterator<Item = (u8, u64)>,
    B: Iterator<Item = (u8, u64)>,
{
    let mut acc: u64 = 0;
    let mut steps: usize = 0;
    let mut cur_a = a.next();
    let mut cur_b = b.next();
    while let (Some((bit_a, rem_a)), Some((bit_b, rem_b))) = (cur_a, cur_b) {
        steps += 1;
        let step = rem_a.min(rem_b);
        if bit_a == 1 && bit_b == 1 {
            acc += step;
        }
        cur_a = if rem_a == step { a.next() } else { Some((bit_a, rem_a - step)) };
        cur_b = if rem_b == step { b.next() } else { Some((bit_b, rem_b - step)) };
    }
    (acc, steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn encode_basic_runs() {
        let s = bits::from_str("00011111000").unwrap();
        let r = RleSeq::encode(&s).unwrap();
        assert_eq!(r.runs(), &[(0, 3), (1, 5), (0, 3)]);
        assert_eq!(RleSeq::encode(&[1]).unwrap().runs(), &[(1, 1)]);
    }

    #[test]
    fn decode_budget() {
        let r = RleSeq::from_runs(vec![(0, 10), (1, 5)]).unwrap();
        assert_eq!(r.decode(15).unwrap().len(), 15);
        assert_eq!(
            r.decode(10).unwrap_err(),
            Error::BudgetExceeded { needed: 15, budget: 10 }
        );
    }

    #[test]
    fn inner_product_examples() {
        let a = RleSeq::from_runs(vec![(0, 3), (1, 5), (0, 3)]).unwrap();
        let b = RleSeq::from_runs(vec![(1, 11)]).unwrap();
        let (v, steps) = inner_product_counted(&a, &b).unwrap();
        assert_eq!(v, 5);
        assert!(steps <= a.n_rle() + b.n_rle());

        let zeros = RleSeq::from_runs(vec![(0, 11)]).unwrap();
        assert_eq!(inner_product(&a, &zeros).unwrap(), 0);

        let v = RleSeq::encode(&bits::from_str("0100001000").unwrap()).unwrap();
        assert_eq!(inner_product(&v, &v).unwrap(), 2);

        let short = RleSeq::from_runs(vec![(1, 3)]).unwrap();
        assert!(matches!(inner_product(&a, &short), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn slp_to_rle_examples() {
        assert_eq!(slp_to_rle(&Slp::zeros(1000)).runs(), &[(0, 1000)]);
        let alt = Slp::repeat(&Slp::from_bits(&[0, 1]).unwrap(), 4).unwrap();
        let r = slp_to_rle(&alt);
        assert_eq!(r.n_rle(), 8);
        assert_eq!(r.decode(16).unwrap(), alt.expand(16).unwrap());
    }

    #[test]
    fn text_round_trip() {
        let r = RleSeq::from_runs(vec![(0, 3), (1, 5), (0, 3)]).unwrap();
        let text = r.to_text();
        assert_eq!(text, "rle v1 3\n0 3\n1 5\n0 3\n");
        let back = RleSeq::from_text(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_text(), text);
        assert!(RleSeq::from_text("rle v1 1\n0 0\n").is_err());
        assert!(RleSeq::from_text("rle v1 1\n2 4\n").is_err());
    }

    proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(1000))]
        #[test]
        fn round_trip_random(s in proptest::collection::vec(0u8..2, 0..10_000)) {
            let r = RleSeq::encode(&s).unwrap();
            prop_assert_eq!(r.decode(1 << 20).unwrap(), s);
            // canonical: adjacent runs alternate bits
            for w in r.runs().windows(2) {
                prop_assert_ne!(w[0].0, w[1].0);
            }
        }
    }

    proptest! {
        #[test]
        fn inner_product_matches_dense_and_commutes(
            s in proptest::collection::vec(0u8..2, 1..800),
            t in proptest::collection::vec(0u8..2, 1..800),
        ) {
            let n = s.len().min(t.len());
            let (s, t) = (&s[..n], &t[..n]);
            let a = RleSeq::encode(s).unwrap();
            let b = RleSeq::encode(t).unwrap();
            let (v, steps) = inner_product_counted(&a, &b).unwrap();
            prop_assert_eq!(v, bits::inner_product(s, t).unwrap());
            prop_assert!(steps <= a.n_rle() + b.n_rle());
            prop_assert_eq!(inner_product(&b, &a).unwrap(), v);
        }

        #[test]
        fn slp_to_rle_matches_encode(ops in crate::testgen::arb_slp_program()) {
            let g = crate::testgen::slp_from_program(&ops);
            let direct = slp_to_rle(&g);
            let via_expand = RleSeq::encode(&g.expand(1 << 20).unwrap()).unwrap();
            prop_assert_eq!(direct, via_expand);
        }
    }
}
