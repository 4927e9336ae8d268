//! Straight-line programs over the alphabet {0,1}.
//!
//! An SLP is an ordered list of rules; each rule is a terminal bit or the
//! concatenation of two earlier rules. The last-constructed rule of interest
//! is the start symbol, and the SLP denotes exactly one bit string: the
//! expansion of the start rule. Grammar size n is the number of rules.
//!
//! Construction goes through [`SlpBuilder`], which hash-conses rules on
//! (kind, children) so that reusing a non-terminal across many contexts
//! costs nothing — the property the sum-set generators rely on.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Maximum representable expansion length (2^63 - 1, so lengths stay
/// convertible to signed 64-bit for foreign bindings).
pub const MAX_LEN: u64 = i64::MAX as u64;

/// Frozen size constant for [`Slp::char_vector`]: at most
/// `CHAR_VECTOR_SIZE_FACTOR * max(1, |X|) * ceil(log2(U+1)) +
/// CHAR_VECTOR_SIZE_FACTOR` rules (measured worst multiplier 2.4).
pub const CHAR_VECTOR_SIZE_FACTOR: u64 = 3;

/// One grammar rule: a terminal bit or an ordered pair of earlier rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    Terminal(u8),
    Concat(usize, usize),
}

/// An immutable straight-line program with cached per-rule expansion lengths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slp {
    rules: Vec<Rule>,
    lengths: Vec<u64>,
    start: usize,
}

impl Slp {
    /// Single-symbol grammar.
    pub fn terminal(bit: u8) -> Result<Slp> {
        let mut b = SlpBuilder::new();
        let s = b.terminal(bit)?;
        Ok(b.finish(s))
    }

    /// Concatenation of two SLPs; shared sub-grammars are merged by
    /// rule-level deduplication, so the result has at most
    /// size(a) + size(b) + 1 rules.
    pub fn concat(a: &Slp, b: &Slp) -> Result<Slp> {
        let mut builder = SlpBuilder::new();
        let sa = builder.import(a);
        let sb = builder.import(b);
        let s = builder.concat(sa, sb)?;
        Ok(builder.finish(s))
    }

    /// `alpha`-fold repetition via repeated squaring plus binary combination;
    /// adds at most 2*floor(log2 alpha) rules.
    pub fn repeat(g: &Slp, alpha: u64) -> Result<Slp> {
        assert!(alpha >= 1, "repeat requires alpha >= 1");
        if alpha == 1 {
            return Ok(g.clone());
        }
        let mut builder = SlpBuilder::new();
        let s = builder.import(g);
        let r = builder.repeat(s, alpha)?;
        Ok(builder.finish(r))
    }

    /// The string 0^k, with O(log k) rules. `k` must be positive; callers
    /// that may produce an empty block skip it instead.
    pub fn zeros(k: u64) -> Slp {
        assert!(k >= 1, "zeros requires k >= 1");
        let mut b = SlpBuilder::new();
        let t = b.terminal(0).unwrap();
        let s = b.repeat(t, k).expect("k <= MAX_LEN");
        b.finish(s)
    }

    /// The string 1^k; same contract as [`Slp::zeros`].
    pub fn ones(k: u64) -> Slp {
        assert!(k >= 1, "ones requires k >= 1");
        let mut b = SlpBuilder::new();
        let t = b.terminal(1).unwrap();
        let s = b.repeat(t, k).expect("k <= MAX_LEN");
        b.finish(s)
    }

    /// Characteristic vector of `set` within the 1-indexed universe {1..u}:
    /// bit i is 1 iff i is in `set`. Size O(|set| log u).
    pub fn char_vector(set: &[u64], universe: u64) -> Result<Slp> {
        assert!(universe >= 1, "char_vector requires a non-empty universe");
        let mut xs: Vec<u64> = set.to_vec();
        xs.sort_unstable();
        xs.dedup();
        for &x in &xs {
            if x < 1 || x > universe {
                return Err(Error::ElementOutOfUniverse {
                    element: x as i64,
                    universe: universe as i64,
                });
            }
        }
        if xs.is_empty() {
            return Ok(Slp::zeros(universe));
        }
        let mut b = SlpBuilder::new();
        let s = b.char_vector(&xs, universe)?;
        Ok(b.finish(s))
    }

    /// Builds an SLP for a short explicit bit string (one rule per symbol
    /// plus the chain; intended for tests and seeds, not for long inputs).
    pub fn from_bits(bits: &[u8]) -> Result<Slp> {
        if bits.is_empty() {
            return Err(Error::Parse("empty bit string has no SLP".into()));
        }
        let mut b = SlpBuilder::new();
        let mut acc: Option<usize> = None;
        for &bit in bits {
            let t = b.terminal(bit)?;
            acc = Some(match acc {
                None => t,
                Some(a) => b.concat(a, t)?,
            });
        }
        Ok(b.finish(acc.unwrap()))
    }

    /// Appends unshared zero rules until the grammar has exactly
    /// `target_rules` rules. The expansion gains a (possibly empty) zero
    /// tail; inner products against equally padded vectors are unchanged.
    pub fn pad_with_zeros(&self, target_rules: usize) -> Slp {
        assert!(
            target_rules >= self.rules.len(),
            "pad_with_zeros cannot shrink a grammar"
        );
        let mut rules = self.rules.clone();
        let mut lengths = self.lengths.clone();
        let mut start = self.start;
        let mut remaining = target_rules - rules.len();
        if remaining == 0 {
            return self.clone();
        }
        let zero = match rules.iter().position(|r| *r == Rule::Terminal(0)) {
            Some(idx) => idx,
            None => {
                rules.push(Rule::Terminal(0));
                lengths.push(1);
                remaining -= 1;
                rules.len() - 1
            }
        };
        for _ in 0..remaining {
            let len = lengths[start]
                .checked_add(1)
                .filter(|&l| l <= MAX_LEN)
                .expect("padding stays below MAX_LEN");
            rules.push(Rule::Concat(start, zero));
            lengths.push(len);
            start = rules.len() - 1;
        }
        Slp { rules, lengths, start }
    }

    pub fn size(&self) -> usize {
        self.rules.len()
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// Expansion length of the start rule (the vector dimension N).
    pub fn expansion_length(&self) -> u64 {
        self.lengths[self.start]
    }

    pub fn rule_length(&self, idx: usize) -> u64 {
        self.lengths[idx]
    }

    /// Parse-tree depth of the start rule (terminals have depth 1).
    pub fn depth(&self) -> usize {
        let mut depth = vec![0usize; self.rules.len()];
        for (i, rule) in self.rules.iter().enumerate() {
            depth[i] = match *rule {
                Rule::Terminal(_) => 1,
                Rule::Concat(l, r) => 1 + depth[l].max(depth[r]),
            };
        }
        depth[self.start]
    }

    /// Full expansion by iterative traversal. Fails without allocating when
    /// the expansion is longer than `budget`.
    pub fn expand(&self, budget: u64) -> Result<Vec<u8>> {
        let n = self.expansion_length();
        if n > budget {
            return Err(Error::BudgetExceeded { needed: n, budget });
        }
        let mut out = Vec::with_capacity(n as usize);
        let mut stack = vec![self.start];
        while let Some(id) = stack.pop() {
            match self.rules[id] {
                Rule::Terminal(bit) => out.push(bit),
                Rule::Concat(l, r) => {
                    stack.push(r);
                    stack.push(l);
                }
            }
        }
        debug_assert_eq!(out.len() as u64, n);
        Ok(out)
    }

    /// Left-to-right run stream over the expansion; working memory is
    /// bounded by the parse-tree depth, never by N. Adjacent emitted runs
    /// may share a bit; consumers coalesce.
    pub fn run_stream(&self) -> RunStream<'_> {
        RunStream::new(self)
    }

    /// Canonical "slp v1" text form.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "slp v1 {} {}", self.rules.len(), self.start).unwrap();
        for rule in &self.rules {
            match *rule {
                Rule::Terminal(bit) => writeln!(out, "T {bit}").unwrap(),
                Rule::Concat(l, r) => writeln!(out, "C {l} {r}").unwrap(),
            }
        }
        out
    }

    /// Parses the "slp v1" text form, revalidating every invariant.
    pub fn from_text(text: &str) -> Result<Slp> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty slp file".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 || fields[0] != "slp" || fields[1] != "v1" {
            return Err(Error::Parse(format!("bad slp header: {header:?}")));
        }
        let num_rules: usize =
            fields[2].parse().map_err(|_| Error::Parse("bad rule count".into()))?;
        let start: usize =
            fields[3].parse().map_err(|_| Error::Parse("bad start index".into()))?;
        if num_rules == 0 {
            return Err(Error::Parse("slp must have at least one rule".into()));
        }
        if start >= num_rules {
            return Err(Error::Parse(format!("start index {start} out of range")));
        }
        let mut rules = Vec::with_capacity(num_rules);
        let mut lengths: Vec<u64> = Vec::with_capacity(num_rules);
        for (i, line) in lines.by_ref().take(num_rules).enumerate() {
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks.as_slice() {
                ["T", bit] => {
                    let bit: u8 =
                        bit.parse().map_err(|_| Error::Parse(format!("bad bit on rule {i}")))?;
                    if bit > 1 {
                        return Err(Error::InvalidSymbol(bit));
                    }
                    rules.push(Rule::Terminal(bit));
                    lengths.push(1);
                }
                ["C", l, r] => {
                    let l: usize =
                        l.parse().map_err(|_| Error::Parse(format!("bad index on rule {i}")))?;
                    let r: usize =
                        r.parse().map_err(|_| Error::Parse(format!("bad index on rule {i}")))?;
                    if l >= i || r >= i {
                        return Err(Error::Parse(format!(
                            "rule {i} references a rule that is not strictly earlier"
                        )));
                    }
                    let len = lengths[l]
                        .checked_add(lengths[r])
                        .filter(|&s| s <= MAX_LEN)
                        .ok_or(Error::LengthOverflow)?;
                    rules.push(Rule::Concat(l, r));
                    lengths.push(len);
                }
                _ => return Err(Error::Parse(format!("bad rule line {i}: {line:?}"))),
            }
        }
        if rules.len() != num_rules {
            return Err(Error::Parse("fewer rules than header declares".into()));
        }
        if lines.next().is_some() {
            return Err(Error::Parse("trailing content after rules".into()));
        }
        Ok(Slp { rules, lengths, start })
    }
}

/// Incremental SLP construction with hash-consed rules.
pub struct SlpBuilder {
    rules: Vec<Rule>,
    lengths: Vec<u64>,
    memo: HashMap<Rule, usize>,
}

impl Default for SlpBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl SlpBuilder {
    pub fn new() -> SlpBuilder {
        SlpBuilder { rules: Vec::new(), lengths: Vec::new(), memo: HashMap::new() }
    }

    fn intern(&mut self, rule: Rule, len: u64) -> usize {
        if let Some(&idx) = self.memo.get(&rule) {
            return idx;
        }
        self.rules.push(rule);
        self.lengths.push(len);
        let idx = self.rules.len() - 1;
        self.memo.insert(rule, idx);
        idx
    }

    pub fn terminal(&mut self, bit: u8) -> Result<usize> {
        if bit > 1 {
            return Err(Error::InvalidSymbol(bit));
        }
        Ok(self.intern(Rule::Terminal(bit), 1))
    }

    pub fn concat(&mut self, left: usize, right: usize) -> Result<usize> {
        let len = self.lengths[left]
            .checked_add(self.lengths[right])
            .filter(|&s| s <= MAX_LEN)
            .ok_or(Error::LengthOverflow)?;
        Ok(self.intern(Rule::Concat(left, right), len))
    }

    /// Repetition by squaring: powers s^(2^i) then one combiner per set bit
    /// of `alpha`, most significant first.
    pub fn repeat(&mut self, sym: usize, alpha: u64) -> Result<usize> {
        assert!(alpha >= 1, "repeat requires alpha >= 1");
        self.lengths[sym]
            .checked_mul(alpha)
            .filter(|&s| s <= MAX_LEN)
            .ok_or(Error::LengthOverflow)?;
        if alpha == 1 {
            return Ok(sym);
        }
        let top = 63 - alpha.leading_zeros() as usize;
        let mut powers = Vec::with_capacity(top + 1);
        powers.push(sym);
        for i in 1..=top {
            let prev = powers[i - 1];
            powers.push(self.concat(prev, prev)?);
        }
        let mut acc: Option<usize> = None;
        for i in (0..=top).rev() {
            if alpha & (1 << i) != 0 {
                acc = Some(match acc {
                    None => powers[i],
                    Some(a) => self.concat(a, powers[i])?,
                });
            }
        }
        Ok(acc.unwrap())
    }

    pub fn zeros(&mut self, k: u64) -> Result<usize> {
        assert!(k >= 1, "zeros requires k >= 1");
        let t = self.terminal(0)?;
        self.repeat(t, k)
    }

    pub fn ones(&mut self, k: u64) -> Result<usize> {
        assert!(k >= 1, "ones requires k >= 1");
        let t = self.terminal(1)?;
        self.repeat(t, k)
    }

    /// `prefix ++ suffix`, where either side may be absent.
    pub fn append(&mut self, prefix: Option<usize>, suffix: usize) -> Result<usize> {
        match prefix {
            None => Ok(suffix),
            Some(p) => self.concat(p, suffix),
        }
    }

    /// Characteristic vector over {1..universe}; `xs` must be sorted,
    /// deduplicated, non-empty and in range.
    pub fn char_vector(&mut self, xs: &[u64], universe: u64) -> Result<usize> {
        let mut acc: Option<usize> = None;
        let mut prev = 0u64;
        for &x in xs {
            let gap = x - prev - 1;
            if gap > 0 {
                let z = self.zeros(gap)?;
                acc = Some(self.append(acc, z)?);
            }
            let one = self.terminal(1)?;
            acc = Some(self.append(acc, one)?);
            prev = x;
        }
        let tail = universe - prev;
        if tail > 0 {
            let z = self.zeros(tail)?;
            acc = Some(self.append(acc, z)?);
        }
        Ok(acc.unwrap())
    }

    /// Merges all rules of `other` into this builder (deduplicating against
    /// existing rules) and returns the remapped start index.
    pub fn import(&mut self, other: &Slp) -> usize {
        let mut remap = Vec::with_capacity(other.rules.len());
        for (i, rule) in other.rules.iter().enumerate() {
            let idx = match *rule {
                Rule::Terminal(bit) => self.intern(Rule::Terminal(bit), 1),
                Rule::Concat(l, r) => {
                    let rule = Rule::Concat(remap[l], remap[r]);
                    self.intern(rule, other.lengths[i])
                }
            };
            remap.push(idx);
        }
        remap[other.start]
    }

    pub fn len_of(&self, sym: usize) -> u64 {
        self.lengths[sym]
    }

    pub fn size(&self) -> usize {
        self.rules.len()
    }

    pub fn finish(self, start: usize) -> Slp {
        assert!(start < self.rules.len());
        Slp { rules: self.rules, lengths: self.lengths, start }
    }
}

/// Lazy left-to-right run producer over an SLP expansion.
///
/// Uniform subtrees (all-zero or all-one expansions) are emitted as a single
/// run without descending, so fully repetitive regions cost O(depth) steps
/// instead of O(N).
pub struct RunStream<'a> {
    slp: &'a Slp,
    uniform: Vec<Option<u8>>,
    stack: Vec<usize>,
    peak: usize,
}

impl<'a> RunStream<'a> {
    fn new(slp: &'a Slp) -> RunStream<'a> {
        let mut uniform = vec![None; slp.rules.len()];
        for (i, rule) in slp.rules.iter().enumerate() {
            uniform[i] = match *rule {
                Rule::Terminal(bit) => Some(bit),
                Rule::Concat(l, r) => match (uniform[l], uniform[r]) {
                    (Some(a), Some(b)) if a == b => Some(a),
                    _ => None,
                },
            };
        }
        RunStream { slp, uniform, stack: vec![slp.start], peak: 1 }
    }

    /// Largest stack size observed so far (instrumentation for the
    /// O(depth) memory contract).
    pub fn peak_stack(&self) -> usize {
        self.peak
    }
}

impl<'a> Iterator for RunStream<'a> {
    type Item = (u8, u64);

    fn next(&mut self) -> Option<(u8, u64)> {
        while let Some(id) = self.stack.pop() {
            if let Some(bit) = self.uniform[id] {
                return Some((bit, self.slp.lengths[id]));
            }
            match self.slp.rules[id] {
                Rule::Concat(l, r) => {
                    self.stack.push(r);
                    self.stack.push(l);
                    self.peak = self.peak.max(self.stack.len());
                }
                Rule::Terminal(_) => unreachable!("terminals are uniform"),
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits;

    fn expand_str(g: &Slp) -> String {
        bits::to_string(&g.expand(1 << 20).unwrap())
    }

    /// The classic five-rule grammar for 01010101: S1->0, S2->1,
    /// S3->S1 S2, S4->S3 S3, S5->S4 S4.
    fn doubling_grammar() -> Slp {
        Slp::from_text("slp v1 5 4\nT 0\nT 1\nC 0 1\nC 2 2\nC 3 3\n").unwrap()
    }

    #[test]
    fn terminal_basics() {
        assert_eq!(expand_str(&Slp::terminal(0).unwrap()), "0");
        assert_eq!(expand_str(&Slp::terminal(1).unwrap()), "1");
        assert_eq!(Slp::terminal(0).unwrap().size(), 1);
        assert_eq!(Slp::terminal(2).unwrap_err(), Error::InvalidSymbol(2));
    }

    #[test]
    fn concat_basics() {
        let a = Slp::terminal(0).unwrap();
        let b = Slp::terminal(1).unwrap();
        let ab = Slp::concat(&a, &b).unwrap();
        assert_eq!(expand_str(&ab), "01");
        // S3 of the doubling grammar concatenated with itself is S4: "0101".
        let s3 = ab;
        let s4 = Slp::concat(&s3, &s3).unwrap();
        assert_eq!(expand_str(&s4), "0101");
        assert_eq!(s4.size(), 4); // dedup keeps one copy of S3's rules
    }

    #[test]
    fn concat_overflow_guard() {
        let big = Slp::zeros(MAX_LEN);
        assert_eq!(big.expansion_length(), MAX_LEN);
        assert_eq!(Slp::concat(&big, &big).unwrap_err(), Error::LengthOverflow);
        let one = Slp::terminal(0).unwrap();
        assert_eq!(Slp::concat(&big, &one).unwrap_err(), Error::LengthOverflow);
    }

    #[test]
    fn repeat_builds_the_doubling_grammar() {
        let s01 = Slp::from_bits(&[0, 1]).unwrap();
        let r = Slp::repeat(&s01, 4).unwrap();
        assert_eq!(expand_str(&r), "01010101");
        assert_eq!(r.size(), 5); // squaring twice, nothing else
        assert_eq!(r, doubling_grammar());
    }

    #[test]
    fn repeat_identity_and_small() {
        let g = Slp::from_bits(&[1, 0, 1]).unwrap();
        let r = Slp::repeat(&g, 1).unwrap();
        assert_eq!(r, g);
        let r13 = Slp::repeat(&Slp::terminal(0).unwrap(), 13).unwrap();
        assert_eq!(expand_str(&r13), "0".repeat(13));
        assert!(r13.size() <= 1 + 2 * 3 + 2);
    }

    #[test]
    fn repeat_size_bound() {
        // size(repeat(g, a)) - size(g) <= 2*floor(log2 a) + 2
        let g = Slp::from_bits(&[0, 1, 1]).unwrap();
        for alpha in 1..=400u64 {
            let r = Slp::repeat(&g, alpha).unwrap();
            let floor_log = 63 - alpha.leading_zeros() as u64;
            assert!(
                (r.size() - g.size()) as u64 <= 2 * floor_log + 2,
                "alpha={alpha} size={} base={}",
                r.size(),
                g.size()
            );
            assert_eq!(r.expansion_length(), 3 * alpha);
        }
    }

    #[test]
    fn zeros_ones_sizes() {
        assert_eq!(expand_str(&Slp::zeros(1)), "0");
        assert_eq!(expand_str(&Slp::ones(3)), "111");
        let z10 = Slp::zeros(10);
        assert_eq!(expand_str(&z10), "0000000000");
        for k in 1..=2000u64 {
            let z = Slp::zeros(k);
            let floor_log = 63 - k.leading_zeros() as u64;
            assert!(z.size() as u64 <= 2 * floor_log + 2, "k={k} size={}", z.size());
            assert_eq!(z.expansion_length(), k);
        }
    }

    #[test]
    fn char_vector_examples() {
        let v = Slp::char_vector(&[2, 7], 10).unwrap();
        assert_eq!(expand_str(&v), "0100001000");
        assert_eq!(expand_str(&Slp::char_vector(&[], 5).unwrap()), "00000");
        assert_eq!(expand_str(&Slp::char_vector(&[1, 2, 3], 3).unwrap()), "111");
        assert!(matches!(
            Slp::char_vector(&[11], 10).unwrap_err(),
            Error::ElementOutOfUniverse { element: 11, universe: 10 }
        ));
    }

    #[test]
    fn expand_budget_guard() {
        let g = doubling_grammar();
        assert_eq!(bits::to_string(&g.expand(8).unwrap()), "01010101");
        let huge = Slp::zeros(1 << 40);
        assert_eq!(
            huge.expand(1_000_000).unwrap_err(),
            Error::BudgetExceeded { needed: 1 << 40, budget: 1_000_000 }
        );
    }

    #[test]
    fn run_stream_examples() {
        let z = Slp::zeros(100);
        let runs: Vec<_> = bits::coalesce(z.run_stream()).collect();
        assert_eq!(runs, vec![(0, 100)]);

        let v = Slp::char_vector(&[2, 7], 10).unwrap();
        let runs: Vec<_> = bits::coalesce(v.run_stream()).collect();
        assert_eq!(runs, vec![(0, 1), (1, 1), (0, 4), (1, 1), (0, 3)]);
    }

    #[test]
    fn run_stream_skips_uniform_subtrees() {
        // A giant all-zero block must come out as one run in a few steps.
        let g = Slp::concat(&Slp::ones(3), &Slp::zeros(1 << 50)).unwrap();
        let mut stream = g.run_stream();
        let runs: Vec<_> = stream.by_ref().take(4).collect();
        assert_eq!(bits::coalesce(runs).collect::<Vec<_>>(), vec![(1, 3), (0, 1 << 50)]);
        assert!(stream.peak_stack() <= g.depth() + 1);
    }

    #[test]
    fn pad_with_zeros_examples() {
        let g = Slp::char_vector(&[1, 3], 4).unwrap();
        let same = g.pad_with_zeros(g.size());
        assert_eq!(same, g);

        let padded = g.pad_with_zeros(2 * g.size());
        assert_eq!(padded.size(), 2 * g.size());
        let orig = expand_str(&g);
        let expanded = expand_str(&padded);
        assert!(expanded.starts_with(&orig));
        assert!(expanded[orig.len()..].bytes().all(|b| b == b'0'));

        // A grammar without a zero terminal still pads to the exact count.
        let ones = Slp::ones(1);
        let padded = ones.pad_with_zeros(3);
        assert_eq!(padded.size(), 3);
        assert_eq!(expand_str(&padded), "10");
    }

    #[test]
    fn pad_preserves_inner_products() {
        // Oracle: inner product on expanded strings, 200 random-ish cases.
        let mut seed = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            seed
        };
        for _ in 0..200 {
            let u = 1 + next() % 12;
            let xa: Vec<u64> = (1..=u).filter(|_| next() % 2 == 0).collect();
            let xb: Vec<u64> = (1..=u).filter(|_| next() % 3 == 0).collect();
            let a = Slp::char_vector(&xa, u).unwrap();
            let b = Slp::char_vector(&xb, u).unwrap();
            let pa = a.pad_with_zeros(a.size() + (next() % 6) as usize);
            let pb = b.pad_with_zeros(b.size() + (next() % 6) as usize);
            let ea = a.expand(1 << 20).unwrap();
            let eb = b.expand(1 << 20).unwrap();
            let mut pea = pa.expand(1 << 20).unwrap();
            let mut peb = pb.expand(1 << 20).unwrap();
            let dim = pea.len().max(peb.len());
            pea.resize(dim, 0);
            peb.resize(dim, 0);
            let ip = bits::inner_product(&ea, &eb).unwrap();
            let pip = bits::inner_product(&pea, &peb).unwrap();
            assert_eq!(ip, pip);
        }
    }

    #[test]
    fn text_round_trip() {
        let g = doubling_grammar();
        let text = g.to_text();
        assert_eq!(text, "slp v1 5 4\nT 0\nT 1\nC 0 1\nC 2 2\nC 3 3\n");
        let back = Slp::from_text(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn text_rejects_malformed() {
        assert!(Slp::from_text("").is_err());
        assert!(Slp::from_text("slp v2 1 0\nT 0\n").is_err());
        assert!(Slp::from_text("slp v1 1 1\nT 0\n").is_err());
        assert!(Slp::from_text("slp v1 2 1\nT 0\nC 0 2\n").is_err()); // forward ref
        assert!(Slp::from_text("slp v1 1 0\nT 2\n").is_err());
        assert!(Slp::from_text("slp v1 2 1\nT 0\nT 1\nT 0\n").is_err()); // trailing
    }

    #[test]
    fn values_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<Slp>();
        assert_send_sync::<crate::rle::RleSeq>();
    }

    #[test]
    fn char_vector_size_bound() {
        // frozen: size <= F * max(1,|X|) * ceil(log2(U+1)) + F
        for u in 1..=128u64 {
            for pattern in [0u64, 1, u / 2, u] {
                let xs: Vec<u64> =
                    (1..=u).filter(|i| pattern == 0 || i % pattern.max(1) == 0).collect();
                let g = Slp::char_vector(&xs, u).unwrap();
                let log = crate::ceil_log2(u + 1);
                let bound =
                    CHAR_VECTOR_SIZE_FACTOR * (xs.len().max(1) as u64) * log + CHAR_VECTOR_SIZE_FACTOR;
                assert!(
                    g.size() as u64 <= bound,
                    "|X|={} U={u} size={} bound={bound}",
                    xs.len(),
                    g.size()
                );
            }
        }
    }

    #[test]
    fn repeat_equals_string_repetition() {
        // alpha copies of the expansion, for short g and alpha up to 64
        let mut seed = 0x5deece66du64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            seed
        };
        for _ in 0..200 {
            let len = 1 + next() % 64;
            let pattern: Vec<u8> = (0..len).map(|_| (next() % 2) as u8).collect();
            let g = Slp::from_bits(&pattern).unwrap();
            let alpha = 1 + next() % 64;
            let r = Slp::repeat(&g, alpha).unwrap();
            let want: Vec<u8> =
                std::iter::repeat_n(pattern.clone(), alpha as usize).flatten().collect();
            assert_eq!(r.expand(1 << 20).unwrap(), want);
        }
    }

    #[test]
    fn lengths_match_expansion() {
        for g in [
            Slp::terminal(1).unwrap(),
            doubling_grammar(),
            Slp::char_vector(&[1, 4, 9], 9).unwrap(),
            Slp::repeat(&Slp::from_bits(&[1, 0]).unwrap(), 31).unwrap(),
        ] {
            assert_eq!(g.expand(1 << 20).unwrap().len() as u64, g.expansion_length());
            let total: u64 = g.run_stream().map(|(_, l)| l).sum();
            assert_eq!(total, g.expansion_length());
        }
    }
}
