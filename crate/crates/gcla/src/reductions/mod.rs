//! Hardness-instance generators.
//!
//! Each generator turns sum-problem instances into compressed vectors or
//! matrices whose inner products reveal the instance answers, and fills in
//! the expected answers from the brute-force oracles so the bundle is
//! certified at construction time.

mod inner_product;
mod matrix;
mod self_reduction;

pub use inner_product::{reduce_3sum_to_ip, reduce_ksum_to_ip};
pub use matrix::{
    balance_s, certify_mm, mm_dense_pair, reduce_3sum_to_mv, reduce_mm, MmBundle, MmCertificates,
};
pub use self_reduction::{
    reduce_modulo_prime, self_reduce, solve_3sum_by_self_reduction, universe_prime_pool,
    universe_reduce, SelfReductionConfig, UniverseReducedInstance,
};

use crate::error::{Error, Result};
use crate::linalg::{CompressedMatrix, CompressedVector};
use crate::oracle::Answer;
use crate::slp::SlpBuilder;
use crate::sum::SumInstance;

/// Frozen size-bound constants, measured from this construction and pinned
/// (measured worst multipliers in parentheses; regressions fail the
/// acceptance suite): each generated 3SUM→inner-product vector has at most
/// `IP3_SIZE_FACTOR * m * ceil(log2(U+1))` rules (measured 3.6).
pub const IP3_SIZE_FACTOR: u64 = 4;
/// kSUM→inner-product vectors: at most
/// `KSUM_SIZE_FACTOR * k * m * ceil(log2(U+1))` rules (measured 1.17).
pub const KSUM_SIZE_FACTOR: u64 = 2;
/// Matrix-vector rows and vector: at most
/// `MV_ROW_SIZE_FACTOR * s * ceil(log2(U+1))` rules (measured 5.17).
pub const MV_ROW_SIZE_FACTOR: u64 = 6;
/// Every row-RLE of A and column-RLE of B in the matrix-product
/// construction has at most `MM_RLE_RUNS_FACTOR * ceil(log2 N)` runs
/// (measured 1.0).
pub const MM_RLE_RUNS_FACTOR: u64 = 2;
/// The strong grammars of the matrix-product construction have at most
/// `MM_STRONG_SIZE_FACTOR * ceil(log2 N)^2` rules (measured 2.23).
pub const MM_STRONG_SIZE_FACTOR: u64 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BundleKind {
    Ip3,
    Ipk,
    Mv,
}

impl BundleKind {
    pub fn name(self) -> &'static str {
        match self {
            BundleKind::Ip3 => "ip3",
            BundleKind::Ipk => "ipk",
            BundleKind::Mv => "mv",
        }
    }
}

/// Generated compressed objects plus provenance: the source instances, the
/// block geometry, and the oracle-certified expected answers.
#[derive(Debug, Clone)]
pub struct ReductionBundle {
    pub kind: BundleKind,
    pub vectors: Vec<CompressedVector>,
    pub matrix: Option<CompressedMatrix>,
    pub dimension: u64,
    pub block_len: u64,
    pub block_count: u64,
    pub sources: Vec<SumInstance>,
    pub expected: Vec<Answer>,
    pub target: Option<i64>,
    pub group_size: Option<usize>,
}

impl ReductionBundle {
    /// Every compressed object must expand to exactly `dimension`.
    pub fn validate(&self) -> Result<()> {
        for (i, v) in self.vectors.iter().enumerate() {
            if v.dim() != self.dimension {
                return Err(Error::InvalidInstance(format!(
                    "vector {i} has dimension {}, expected {}",
                    v.dim(),
                    self.dimension
                )));
            }
        }
        if let Some(m) = &self.matrix {
            m.validate()?;
            if m.col_count() != self.dimension {
                return Err(Error::InvalidInstance(format!(
                    "matrix has {} columns, expected {}",
                    m.col_count(),
                    self.dimension
                )));
            }
        }
        Ok(())
    }
}

/// Builds the concatenation, over all tuples (a_1..a_L) of `levels` in
/// lexicographic order, of the blocks `0^sigma  v_base  0^(d - sigma)` with
/// sigma the tuple sum; every block has length d + universe.
///
/// The construction is inductive from the innermost level out. Each level
/// reuses the previous level's start symbol for all of its copies and only
/// re-encodes the zero runs between copies, which keeps the grammar size at
/// O(L * m * log(d + universe)). The runs between copies at each step are
/// d + (a_{j+1} - a_j) - (sigma_last - sigma_first) of the inner levels,
/// which is positive because sigma_last - sigma_first <= (L-1)(U-1) < d.
pub(crate) fn nested_sumset_symbol(
    b: &mut SlpBuilder,
    levels: &[&[i64]],
    base: &[i64],
    universe: u64,
    d: u64,
) -> Result<usize> {
    assert!(!levels.is_empty(), "need at least one shift level");
    let base_xs: Vec<u64> = base.iter().map(|&x| x as u64).collect();
    let mut symbol = b.char_vector(&base_xs, universe)?;
    let mut sigma_first: i64 = 0;
    let mut sigma_last: i64 = 0;
    for level in levels.iter().rev() {
        assert!(!level.is_empty());
        let mut acc = symbol;
        for w in level.windows(2) {
            let gap = d as i64 + (w[1] - w[0]) + sigma_first - sigma_last;
            assert!(gap > 0, "inter-copy zero run must be positive");
            let z = b.zeros(gap as u64)?;
            acc = b.concat(acc, z)?;
            acc = b.concat(acc, symbol)?;
        }
        sigma_first += level[0];
        sigma_last += level[level.len() - 1];
        symbol = acc;
    }
    let mut result = b.zeros(sigma_first as u64)?;
    result = b.concat(result, symbol)?;
    let tail = d as i64 - sigma_last;
    assert!(tail >= 0, "zero-tail budget must cover the largest shift");
    if tail > 0 {
        let z = b.zeros(tail as u64)?;
        result = b.concat(result, z)?;
    }
    Ok(result)
}
