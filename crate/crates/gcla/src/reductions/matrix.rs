//! 3SUM to matrix-vector multiplication, and the incompressible
//! matrix-product construction.

use super::{nested_sumset_symbol, BundleKind, ReductionBundle};
use crate::bits;
use crate::ceil_log2;
use crate::error::{Error, Result};
use crate::linalg::{
    dense_mat_mul, CompressedMatrix, CompressedVector, DenseBitMatrix, MatrixLayout,
};
use crate::oracle::{brute_3sum, distinct_substring_count, grammar_size_lower_bound, TargetMode};
use crate::rle::RleSeq;
use crate::slp::{SlpBuilder, MAX_LEN};
use crate::sum::{Form, SumInstance};

/// The row/column balance point for the matrix-vector reduction:
/// s = max(1, ceil(m^(2/7))), computed exactly as the least s with
/// s^7 >= m^2.
pub fn balance_s(m: u64) -> u64 {
    let m2 = (m as u128).pow(2);
    let big_enough = |s: u64| (s as u128).checked_pow(7).is_none_or(|v| v >= m2);
    let mut lo: u64 = 1;
    let mut hi: u64 = m.max(1);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if big_enough(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

/// A batch of target-t 3SUM instances to one row-wise compressed matrix and
/// one vector: entry l of M*v is >= 1 iff instance l has a+b+c = t.
///
/// Row l concatenates, over (i,j) in lexicographic order, the length-3U
/// block `0^(a_i+b_j) v_{C_l} 0^(2U-a_i-b_j)` (the characteristic vector of
/// a_i+b_j+C_l inside {1..3U}); v repeats `0^(t-1) 1 0^(3U-t)` s^2 times.
/// Both are zero-padded to N = 3 s^2 U max(1, ceil(log2 s))^3.
pub fn reduce_3sum_to_mv(
    instances: &[SumInstance],
    s: usize,
    oracle_budget: u64,
) -> Result<ReductionBundle> {
    if instances.is_empty() {
        return Err(Error::InvalidInstance("need at least one instance".into()));
    }
    if s < 1 {
        return Err(Error::InvalidInstance("group size s must be >= 1".into()));
    }
    let universe = instances[0].universe();
    let target = match instances[0].target() {
        Some(t) => t,
        None => return Err(Error::MixedTargets),
    };
    for inst in instances {
        if inst.k() != 3 || inst.form() != Form::Positive {
            return Err(Error::InvalidInstance("need positive k=3 instances".into()));
        }
        if inst.target() != Some(target) {
            return Err(Error::MixedTargets);
        }
        if inst.universe() != universe {
            return Err(Error::InvalidInstance("instances must share the universe bound".into()));
        }
        if inst.m() > s {
            return Err(Error::InvalidInstance(format!(
                "instance with m={} exceeds group size s={s}",
                inst.m()
            )));
        }
    }
    let u = universe as u64;
    let s64 = s as u64;
    let pad = 1.max(ceil_log2(s64));
    let dim = [3, s64, s64, u, pad, pad, pad]
        .iter()
        .try_fold(1u64, |acc, &p| {
            acc.checked_mul(p).filter(|&v| v <= MAX_LEN).ok_or(Error::LengthOverflow)
        })?;

    let mut rows = Vec::with_capacity(instances.len());
    for inst in instances {
        let mut b = SlpBuilder::new();
        let mut sym =
            nested_sumset_symbol(&mut b, &[inst.set(0), inst.set(1)], inst.set(2), u, 2 * u)?;
        let used = inst.set(0).len() as u64 * inst.set(1).len() as u64 * 3 * u;
        if dim > used {
            let z = b.zeros(dim - used)?;
            sym = b.concat(sym, z)?;
        }
        rows.push(b.finish(sym));
    }

    let mut b = SlpBuilder::new();
    let block = b.char_vector(&[target as u64], 3 * u)?;
    let mut sym = b.repeat(block, s64 * s64)?;
    let used = 3 * u * s64 * s64;
    if dim > used {
        let z = b.zeros(dim - used)?;
        sym = b.concat(sym, z)?;
    }
    let vector = b.finish(sym);

    let expected = instances
        .iter()
        .map(|inst| {
            brute_3sum(inst, TargetMode::Target(target), oracle_budget).map(|c| c.answer)
        })
        .collect::<Result<Vec<_>>>()?;

    let bundle = ReductionBundle {
        kind: BundleKind::Mv,
        vectors: vec![CompressedVector::Slp(vector)],
        matrix: Some(CompressedMatrix::RowWise { rows, cols: dim }),
        dimension: dim,
        block_len: 3 * u,
        block_count: s64 * s64,
        sources: instances.to_vec(),
        expected,
        target: Some(target),
        group_size: Some(s),
    };
    bundle.validate()?;
    Ok(bundle)
}

/// The incompressible matrix-product instance at parameter `ell`:
/// N = 2^ell (2 ell + 1), A and B are N x N 0/1 matrices whose product
/// contains every binary string of length 2*ell, so the product cannot be
/// grammar-compressed below 2^(2 ell) / (2 ell) — while A and B themselves
/// compress to O(log N) runs per row/column and O(log^2 N) strong grammars.
#[derive(Debug, Clone)]
pub struct MmBundle {
    pub ell: u32,
    pub n: u64,
    /// Row-wise RLE of A.
    pub a_rows: Vec<RleSeq>,
    /// Column-wise RLE of B.
    pub b_cols: Vec<RleSeq>,
    /// Strong grammar of A's column concatenation (column-major flattening).
    pub a_strong: CompressedMatrix,
    /// Strong grammar of B's row concatenation (row-major flattening).
    pub b_strong: CompressedMatrix,
}

impl MmBundle {
    pub fn strong_a_slp(&self) -> &crate::slp::Slp {
        match &self.a_strong {
            CompressedMatrix::Strong { slp, .. } => slp,
            CompressedMatrix::RowWise { .. } => unreachable!("a_strong is strong by construction"),
        }
    }

    pub fn strong_b_slp(&self) -> &crate::slp::Slp {
        match &self.b_strong {
            CompressedMatrix::Strong { slp, .. } => slp,
            CompressedMatrix::RowWise { .. } => unreachable!("b_strong is strong by construction"),
        }
    }
}

fn check_ell(ell: u32) -> Result<(usize, usize, usize)> {
    if !(1..=12).contains(&ell) {
        return Err(Error::InvalidInstance(format!("ell={ell} outside the desk-scale range 1..=12")));
    }
    let l = ell as usize;
    let pow = 1usize << l;
    let n = pow * (2 * l + 1);
    Ok((l, pow, n))
}

/// Builds the bundle. The inner blocks are
///   A' (2^l x 2l): row x = (x | 1^l),
///   B' (2l x 2l*2^l): for each y the 2l-column group diag(1^l) ⊕ diag(y),
/// assembled as A = [A' 0 0; 0 B'^T 0] and B = [B' 0; 0 A'^T; 0 0] with
/// rows/columns indexed lexicographically.
pub fn reduce_mm(ell: u32) -> Result<MmBundle> {
    let (l, pow, n) = check_ell(ell)?;
    let n64 = n as u64;

    // Row-wise RLE of A, built analytically from the block structure.
    let mut a_rows = Vec::with_capacity(n);
    for x in 0..pow {
        let mut prefix = bits::msb_bits(x as u64, l);
        prefix.extend(std::iter::repeat_n(1, l));
        a_rows.push(rle_with_tail(&prefix, n64)?);
    }
    for q in 0..2 * l * pow {
        // row 2^l + q of A holds column q of B' at offset 2l
        let (y, k) = (q / (2 * l), q % (2 * l));
        let mut prefix = vec![0u8; 2 * l + 2 * l];
        prefix[2 * l + k] = bprime_entry(k, k, y, l);
        a_rows.push(rle_with_tail(&prefix, n64)?);
    }
    debug_assert_eq!(a_rows.len(), n);

    // Column-wise RLE of B.
    let mut b_cols = Vec::with_capacity(n);
    for q in 0..2 * l * pow {
        let (y, k) = (q / (2 * l), q % (2 * l));
        let mut prefix = vec![0u8; 2 * l];
        prefix[k] = bprime_entry(k, k, y, l);
        b_cols.push(rle_with_tail(&prefix, n64)?);
    }
    for x in 0..pow {
        // column 2l*2^l + x of B holds row x of A' at offset 2l
        let mut prefix = vec![0u8; 2 * l];
        prefix.extend(bits::msb_bits(x as u64, l));
        prefix.extend(std::iter::repeat_n(1, l));
        b_cols.push(rle_with_tail(&prefix, n64)?);
    }
    debug_assert_eq!(b_cols.len(), n);

    let a_strong = CompressedMatrix::Strong {
        slp: strong_a(l, pow, n64)?,
        rows: n64,
        cols: n64,
        layout: MatrixLayout::ColMajor,
    };
    let b_strong = CompressedMatrix::Strong {
        slp: strong_b(l, pow, n64)?,
        rows: n64,
        cols: n64,
        layout: MatrixLayout::RowMajor,
    };
    a_strong.validate()?;
    b_strong.validate()?;

    Ok(MmBundle { ell, n: n64, a_rows, b_cols, a_strong, b_strong })
}

/// Entry of B' at (row, column (y,k)): nonzero only on the diagonal of the
/// group; the top half is diag(1^l), the bottom half diag(y).
fn bprime_entry(row: usize, k: usize, y: usize, l: usize) -> u8 {
    debug_assert_eq!(row, k);
    if k < l {
        1
    } else {
        ((y >> (l - 1 - (k - l))) & 1) as u8
    }
}

fn rle_with_tail(prefix: &[u8], total: u64) -> Result<RleSeq> {
    let tail = total - prefix.len() as u64;
    RleSeq::from_runs(bits::dense_runs(prefix).chain(std::iter::once((0u8, tail))))
}

/// `(s0^(2^p) s1^(2^p))^reps` — the value sequence of one bit of a binary
/// counter, the workhorse of the strong compressions.
fn counter_pattern(
    b: &mut SlpBuilder,
    s0: usize,
    s1: usize,
    p: usize,
    reps: u64,
) -> Result<usize> {
    let r0 = b.repeat(s0, 1 << p)?;
    let r1 = b.repeat(s1, 1 << p)?;
    let pair = b.concat(r0, r1)?;
    b.repeat(pair, reps)
}

/// A column `j` unit vector of height `h`: 0^j 1 0^(h-1-j).
fn unit_vector(b: &mut SlpBuilder, j: usize, h: usize) -> Result<usize> {
    let one = b.terminal(1)?;
    let mut sym = one;
    if j > 0 {
        let z = b.zeros(j as u64)?;
        sym = b.concat(z, sym)?;
    }
    if h - 1 - j > 0 {
        let z = b.zeros((h - 1 - j) as u64)?;
        sym = b.concat(sym, z)?;
    }
    Ok(sym)
}

/// Strong grammar of A's column concatenation. Columns fall into the five
/// cases of the block layout; the first 4l columns cost O(l) rules each and
/// the remaining all-zero columns are one run.
fn strong_a(l: usize, pow: usize, n: u64) -> Result<crate::slp::Slp> {
    let mut b = SlpBuilder::new();
    let t0 = b.terminal(0)?;
    let t1 = b.terminal(1)?;
    let below = 2 * l as u64 * pow as u64; // rows below the A' block
    let mut acc: Option<usize> = None;
    for c in 0..4 * l {
        let col = if c < l {
            // bit c of the row counter, then zeros
            let top = counter_pattern(&mut b, t0, t1, l - 1 - c, 1 << c)?;
            let z = b.zeros(below)?;
            b.concat(top, z)?
        } else if c < 2 * l {
            let top = b.ones(pow as u64)?;
            let z = b.zeros(below)?;
            b.concat(top, z)?
        } else if c < 3 * l {
            // B'^T column j < l: one 1 per group, fixed position j
            let j = c - 2 * l;
            let unit = unit_vector(&mut b, j, 2 * l)?;
            let body = b.repeat(unit, pow as u64)?;
            let z = b.zeros(pow as u64)?;
            b.concat(z, body)?
        } else {
            // B'^T column j in l..2l: counter over y at position j
            let j = c - 2 * l;
            let s1 = unit_vector(&mut b, j, 2 * l)?;
            let s0 = b.zeros(2 * l as u64)?;
            let jp = j - l;
            let body = counter_pattern(&mut b, s0, s1, l - 1 - jp, 1 << jp)?;
            let z = b.zeros(pow as u64)?;
            b.concat(z, body)?
        };
        acc = Some(b.append(acc, col)?);
    }
    let rest = (n - 4 * l as u64) * n;
    let z = b.zeros(rest)?;
    let start = b.concat(acc.unwrap(), z)?;
    Ok(b.finish(start))
}

/// Strong grammar of B's row concatenation; symmetric cases.
fn strong_b(l: usize, pow: usize, n: u64) -> Result<crate::slp::Slp> {
    let mut b = SlpBuilder::new();
    let t0 = b.terminal(0)?;
    let t1 = b.terminal(1)?;
    let left = 2 * l as u64 * pow as u64; // columns left of the A'^T block
    let mut acc: Option<usize> = None;
    for r in 0..4 * l {
        let row = if r < l {
            // B' row r: one 1 per group at position r, then the zero tail
            let unit = unit_vector(&mut b, r, 2 * l)?;
            let body = b.repeat(unit, pow as u64)?;
            let z = b.zeros(pow as u64)?;
            b.concat(body, z)?
        } else if r < 2 * l {
            let s1 = unit_vector(&mut b, r, 2 * l)?;
            let s0 = b.zeros(2 * l as u64)?;
            let jp = r - l;
            let body = counter_pattern(&mut b, s0, s1, l - 1 - jp, 1 << jp)?;
            let z = b.zeros(pow as u64)?;
            b.concat(body, z)?
        } else if r < 3 * l {
            // A'^T row j < l: zeros, then bit j of the column counter
            let j = r - 2 * l;
            let body = counter_pattern(&mut b, t0, t1, l - 1 - j, 1 << j)?;
            let z = b.zeros(left)?;
            b.concat(z, body)?
        } else {
            let body = b.ones(pow as u64)?;
            let z = b.zeros(left)?;
            b.concat(z, body)?
        };
        acc = Some(b.append(acc, row)?);
    }
    let rest = (n - 4 * l as u64) * n;
    let z = b.zeros(rest)?;
    let start = b.concat(acc.unwrap(), z)?;
    Ok(b.finish(start))
}

/// Dense A and B assembled directly from the block definitions — the
/// comparison side for the certificates.
pub fn mm_dense_pair(ell: u32, budget: u64) -> Result<(DenseBitMatrix, DenseBitMatrix)> {
    let (l, pow, n) = check_ell(ell)?;
    let total = (n as u64).checked_mul(n as u64).ok_or(Error::LengthOverflow)?;
    if total > budget {
        return Err(Error::BudgetExceeded { needed: total, budget });
    }

    // A' (2^l x 2l) and B' (2l x 2l*2^l)
    let mut aprime = DenseBitMatrix::zeros(pow, 2 * l);
    for x in 0..pow {
        for (i, bit) in bits::msb_bits(x as u64, l).into_iter().enumerate() {
            aprime.set(x, i, bit);
        }
        for i in l..2 * l {
            aprime.set(x, i, 1);
        }
    }
    let mut bprime = DenseBitMatrix::zeros(2 * l, 2 * l * pow);
    for y in 0..pow {
        for k in 0..2 * l {
            bprime.set(k, y * 2 * l + k, bprime_entry(k, k, y, l));
        }
    }

    let mut a = DenseBitMatrix::zeros(n, n);
    for i in 0..pow {
        for j in 0..2 * l {
            a.set(i, j, aprime.get(i, j));
        }
    }
    let bt = bprime.transpose();
    for i in 0..2 * l * pow {
        for j in 0..2 * l {
            a.set(pow + i, 2 * l + j, bt.get(i, j));
        }
    }

    let mut b = DenseBitMatrix::zeros(n, n);
    for i in 0..2 * l {
        for j in 0..2 * l * pow {
            b.set(i, j, bprime.get(i, j));
        }
    }
    let at = aprime.transpose();
    for i in 0..2 * l {
        for j in 0..pow {
            b.set(2 * l + i, 2 * l * pow + j, at.get(i, j));
        }
    }
    Ok((a, b))
}

/// Everything the construction promises, checked at desk scale.
#[derive(Debug, Clone)]
pub struct MmCertificates {
    pub distinct_substrings: u64,
    pub expected_substrings: u64,
    pub contains_all: bool,
    pub c_grammar_lower_bound: u64,
    pub product_is_binary: bool,
    pub strong_a_matches: bool,
    pub strong_b_matches: bool,
    pub rle_rows_match: bool,
    pub rle_cols_match: bool,
    pub max_row_runs: usize,
    pub max_col_runs: usize,
    pub strong_a_size: usize,
    pub strong_b_size: usize,
}

impl MmCertificates {
    pub fn all_ok(&self) -> bool {
        self.contains_all
            && self.product_is_binary
            && self.strong_a_matches
            && self.strong_b_matches
            && self.rle_rows_match
            && self.rle_cols_match
    }
}

/// Certifies a bundle against the dense assembly: the strong grammars
/// expand byte-exactly to the flattenings, the RLE rows/columns decode to
/// the dense rows/columns, and the product contains all 2^(2 ell) binary
/// strings of length 2 ell.
pub fn certify_mm(bundle: &MmBundle, budget: u64) -> Result<MmCertificates> {
    let (a, b) = mm_dense_pair(bundle.ell, budget)?;
    let n = bundle.n as usize;
    let two_l = 2 * bundle.ell as usize;

    let product = dense_mat_mul(&a, &b, budget)?;
    let product_is_binary = product.iter().flatten().all(|&v| v <= 1);
    let c_flat: Vec<u8> = product.iter().flatten().map(|&v| v.min(1) as u8).collect();

    let distinct = distinct_substring_count(&c_flat, two_l);
    let expected = 1u64 << two_l;
    let bound = grammar_size_lower_bound(&c_flat, two_l);

    let strong_a_matches =
        bundle.strong_a_slp().expand(budget)? == a.flatten(MatrixLayout::ColMajor);
    let strong_b_matches =
        bundle.strong_b_slp().expand(budget)? == b.flatten(MatrixLayout::RowMajor);

    let mut rle_rows_match = bundle.a_rows.len() == n;
    for (i, row) in bundle.a_rows.iter().enumerate() {
        rle_rows_match &= row.decode(budget)? == a.row(i);
    }
    let bt = b.transpose();
    let mut rle_cols_match = bundle.b_cols.len() == n;
    for (j, col) in bundle.b_cols.iter().enumerate() {
        rle_cols_match &= col.decode(budget)? == bt.row(j);
    }

    Ok(MmCertificates {
        distinct_substrings: distinct,
        expected_substrings: expected,
        contains_all: distinct == expected,
        c_grammar_lower_bound: bound,
        product_is_binary,
        strong_a_matches,
        strong_b_matches,
        rle_rows_match,
        rle_cols_match,
        max_row_runs: bundle.a_rows.iter().map(RleSeq::n_rle).max().unwrap_or(0),
        max_col_runs: bundle.b_cols.iter().map(RleSeq::n_rle).max().unwrap_or(0),
        strong_a_size: bundle.strong_a_slp().size(),
        strong_b_size: bundle.strong_b_slp().size(),
    })
}
