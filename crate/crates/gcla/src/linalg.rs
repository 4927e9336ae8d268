//! Exact inner product, squared l2 distance and matrix-vector product over
//! compressed representations.
//!
//! No strategy here beats decompress-then-solve asymptotically — the point
//! of the constructions in [`crate::reductions`] is that none can in
//! general. The contract is exactness plus memory frugality: `RunMerge`
//! works in O(parse-tree depth) auxiliary space.

use crate::bits;
use crate::error::{Error, Result};
use crate::rle::{self, RleSeq};
use crate::slp::Slp;

/// An N-dimensional 0/1 vector in one of three representations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CompressedVector {
    Slp(Slp),
    Rle(RleSeq),
    Dense(Vec<u8>),
}

impl CompressedVector {
    pub fn dim(&self) -> u64 {
        match self {
            CompressedVector::Slp(g) => g.expansion_length(),
            CompressedVector::Rle(r) => r.total_len(),
            CompressedVector::Dense(d) => d.len() as u64,
        }
    }

    /// Representation size: grammar rules, runs, or dense length.
    pub fn size(&self) -> usize {
        match self {
            CompressedVector::Slp(g) => g.size(),
            CompressedVector::Rle(r) => r.n_rle(),
            CompressedVector::Dense(d) => d.len(),
        }
    }

    pub fn ones(&self) -> u64 {
        match self {
            CompressedVector::Slp(g) => {
                g.run_stream().filter(|(b, _)| *b == 1).map(|(_, l)| l).sum()
            }
            CompressedVector::Rle(r) => r.ones(),
            CompressedVector::Dense(d) => bits::ones(d),
        }
    }

    pub fn expand(&self, budget: u64) -> Result<Vec<u8>> {
        match self {
            CompressedVector::Slp(g) => g.expand(budget),
            CompressedVector::Rle(r) => r.decode(budget),
            CompressedVector::Dense(d) => {
                if d.len() as u64 > budget {
                    return Err(Error::BudgetExceeded { needed: d.len() as u64, budget });
                }
                Ok(d.clone())
            }
        }
    }

    pub fn to_rle(&self) -> Result<RleSeq> {
        match self {
            CompressedVector::Slp(g) => Ok(rle::slp_to_rle(g)),
            CompressedVector::Rle(r) => Ok(r.clone()),
            CompressedVector::Dense(d) => RleSeq::encode(d),
        }
    }

    fn runs(&self) -> RunsIter<'_> {
        match self {
            CompressedVector::Slp(g) => RunsIter::Slp(g.run_stream()),
            CompressedVector::Rle(r) => RunsIter::Rle(r.runs().iter()),
            CompressedVector::Dense(d) => RunsIter::Dense(Box::new(bits::dense_runs(d))),
        }
    }
}

enum RunsIter<'a> {
    Slp(crate::slp::RunStream<'a>),
    Rle(std::slice::Iter<'a, (u8, u64)>),
    Dense(Box<dyn Iterator<Item = (u8, u64)> + 'a>),
}

impl<'a> Iterator for RunsIter<'a> {
    type Item = (u8, u64);

    fn next(&mut self) -> Option<(u8, u64)> {
        match self {
            RunsIter::Slp(s) => s.next(),
            RunsIter::Rle(it) => it.next().copied(),
            RunsIter::Dense(it) => it.next(),
        }
    }
}

/// How to evaluate a compressed inner product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Materialize both vectors (O(N) memory), then multiply elementwise.
    Decompress { budget: u64 },
    /// Merge the two coalesced run streams; O(depth) auxiliary memory.
    RunMerge,
    /// Convert both sides to canonical RLE, then one-pass merge.
    Rle,
}

impl Strategy {
    pub fn parse(name: &str, budget: u64) -> Result<Strategy> {
        match name {
            "decompress" => Ok(Strategy::Decompress { budget }),
            "run-merge" => Ok(Strategy::RunMerge),
            "rle" => Ok(Strategy::Rle),
            other => Err(Error::Parse(format!("unknown strategy {other:?}"))),
        }
    }
}

/// Exact inner product; all strategies return the same integer.
pub fn inner_product(a: &CompressedVector, b: &CompressedVector, strategy: Strategy) -> Result<u64> {
    inner_product_counted(a, b, strategy).map(|(v, _)| v)
}

/// Inner product plus the merge-step count (0 for the decompress strategy).
pub fn inner_product_counted(
    a: &CompressedVector,
    b: &CompressedVector,
    strategy: Strategy,
) -> Result<(u64, usize)> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { left: a.dim(), right: b.dim() });
    }
    match strategy {
        Strategy::Decompress { budget } => {
            let da = a.expand(budget)?;
            let db = b.expand(budget)?;
            Ok((bits::inner_product(&da, &db)?, 0))
        }
        Strategy::RunMerge => {
            Ok(rle::merge_inner_product(bits::coalesce(a.runs()), bits::coalesce(b.runs())))
        }
        Strategy::Rle => rle::inner_product_counted(&a.to_rle()?, &b.to_rle()?),
    }
}

/// Run-merge inner product of two SLPs with instrumentation: value, merge
/// steps, and each stream's peak stack depth (the O(depth) memory witness).
pub struct MergeStats {
    pub value: u64,
    pub merge_steps: usize,
    pub peak_stack_a: usize,
    pub peak_stack_b: usize,
}

pub fn slp_inner_product_instrumented(a: &Slp, b: &Slp) -> Result<MergeStats> {
    if a.expansion_length() != b.expansion_length() {
        return Err(Error::DimensionMismatch {
            left: a.expansion_length(),
            right: b.expansion_length(),
        });
    }
    let mut sa = a.run_stream();
    let mut sb = b.run_stream();
    let (value, merge_steps) =
        rle::merge_inner_product(bits::coalesce(&mut sa), bits::coalesce(&mut sb));
    Ok(MergeStats {
        value,
        merge_steps,
        peak_stack_a: sa.peak_stack(),
        peak_stack_b: sb.peak_stack(),
    })
}

/// Squared l2 distance of binary vectors:
/// ones(a) + ones(b) - 2 * inner_product(a, b).
pub fn squared_l2_distance(a: &CompressedVector, b: &CompressedVector) -> Result<u64> {
    let ip = inner_product(a, b, Strategy::RunMerge)?;
    Ok(a.ones() + b.ones() - 2 * ip)
}

/// Row-major or column-major flattening order for strong compression.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixLayout {
    RowMajor,
    ColMajor,
}

/// A compressed 0/1 matrix: one grammar per row ("convenient"), or a single
/// grammar over the whole flattening ("strong").
#[derive(Debug, Clone)]
pub enum CompressedMatrix {
    RowWise { rows: Vec<Slp>, cols: u64 },
    Strong { slp: Slp, rows: u64, cols: u64, layout: MatrixLayout },
}

impl CompressedMatrix {
    pub fn row_count(&self) -> u64 {
        match self {
            CompressedMatrix::RowWise { rows, .. } => rows.len() as u64,
            CompressedMatrix::Strong { rows, .. } => *rows,
        }
    }

    pub fn col_count(&self) -> u64 {
        match self {
            CompressedMatrix::RowWise { cols, .. } | CompressedMatrix::Strong { cols, .. } => *cols,
        }
    }

    /// Checks the stored dimensions against the grammar lengths.
    pub fn validate(&self) -> Result<()> {
        match self {
            CompressedMatrix::RowWise { rows, cols } => {
                for (i, row) in rows.iter().enumerate() {
                    if row.expansion_length() != *cols {
                        return Err(Error::InvalidInstance(format!(
                            "row {i} has length {}, expected {cols}",
                            row.expansion_length()
                        )));
                    }
                }
                Ok(())
            }
            CompressedMatrix::Strong { slp, rows, cols, .. } => {
                let expected = rows.checked_mul(*cols).ok_or(Error::LengthOverflow)?;
                if slp.expansion_length() != expected {
                    return Err(Error::InvalidInstance(format!(
                        "strong grammar expands to {}, expected {rows}x{cols}",
                        slp.expansion_length()
                    )));
                }
                Ok(())
            }
        }
    }

    /// Materializes the whole matrix. Strong matrices only support this and
    /// row extraction by offset slicing of the expansion.
    pub fn to_dense(&self, budget: u64) -> Result<DenseBitMatrix> {
        match self {
            CompressedMatrix::RowWise { rows, cols } => {
                let total = (rows.len() as u64).checked_mul(*cols).ok_or(Error::LengthOverflow)?;
                if total > budget {
                    return Err(Error::BudgetExceeded { needed: total, budget });
                }
                let mut data = Vec::with_capacity(total as usize);
                for row in rows {
                    data.extend(row.expand(*cols)?);
                }
                Ok(DenseBitMatrix { rows: rows.len(), cols: *cols as usize, data })
            }
            CompressedMatrix::Strong { slp, rows, cols, layout } => {
                let total = rows.checked_mul(*cols).ok_or(Error::LengthOverflow)?;
                if total > budget {
                    return Err(Error::BudgetExceeded { needed: total, budget });
                }
                let flat = slp.expand(budget)?;
                let (r, c) = (*rows as usize, *cols as usize);
                let mut m = DenseBitMatrix::zeros(r, c);
                for i in 0..r {
                    for j in 0..c {
                        let idx = match layout {
                            MatrixLayout::RowMajor => i * c + j,
                            MatrixLayout::ColMajor => j * r + i,
                        };
                        m.set(i, j, flat[idx]);
                    }
                }
                Ok(m)
            }
        }
    }
}

/// Matrix-vector product for row-wise matrices: entry l is the inner
/// product of row l with v. Rows are independent; output order is fixed.
pub fn mat_vec(m: &CompressedMatrix, v: &CompressedVector, strategy: Strategy) -> Result<Vec<u64>> {
    let CompressedMatrix::RowWise { rows, cols } = m else {
        return Err(Error::InvalidForm("mat_vec requires a row-wise matrix".into()));
    };
    if *cols != v.dim() {
        return Err(Error::DimensionMismatch { left: *cols, right: v.dim() });
    }
    rows.iter()
        .map(|row| inner_product(&CompressedVector::Slp(row.clone()), v, strategy))
        .collect()
}

/// Dense 0/1 matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseBitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl DenseBitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> DenseBitMatrix {
        DenseBitMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<u8>>) -> Result<DenseBitMatrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in &rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch { left: c as u64, right: row.len() as u64 });
            }
            data.extend_from_slice(row);
        }
        Ok(DenseBitMatrix { rows: r, cols: c, data })
    }

    pub fn identity(n: usize) -> DenseBitMatrix {
        let mut m = DenseBitMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn row_count(&self) -> usize {
        self.rows
    }

    pub fn col_count(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u8) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> DenseBitMatrix {
        let mut t = DenseBitMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn flatten(&self, layout: MatrixLayout) -> Vec<u8> {
        match layout {
            MatrixLayout::RowMajor => self.data.clone(),
            MatrixLayout::ColMajor => self.transpose().data,
        }
    }
}

/// Exact integer product of two dense 0/1 matrices; the desk-scale oracle
/// for the matrix-multiplication construction.
pub fn dense_mat_mul(a: &DenseBitMatrix, b: &DenseBitMatrix, budget: u64) -> Result<Vec<Vec<u64>>> {
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch { left: a.cols as u64, right: b.rows as u64 });
    }
    let out_size = (a.rows as u64).checked_mul(b.cols as u64).ok_or(Error::LengthOverflow)?;
    if out_size > budget {
        return Err(Error::BudgetExceeded { needed: out_size, budget });
    }
    let mut out = vec![vec![0u64; b.cols]; a.rows];
    for (i, out_row) in out.iter_mut().enumerate() {
        for l in 0..a.cols {
            if a.get(i, l) == 1 {
                let row = &b.data[l * b.cols..(l + 1) * b.cols];
                for (j, &v) in row.iter().enumerate() {
                    out_row[j] += v as u64;
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::{any, prop_assert_eq, prop_assume, proptest};

    fn slp_vec(g: Slp) -> CompressedVector {
        CompressedVector::Slp(g)
    }

    #[test]
    fn inner_product_zero_vector() {
        let v = slp_vec(Slp::char_vector(&[2, 7], 10).unwrap());
        let z = slp_vec(Slp::zeros(10));
        for strat in [Strategy::Decompress { budget: 1 << 20 }, Strategy::RunMerge, Strategy::Rle] {
            assert_eq!(inner_product(&v, &z, strat).unwrap(), 0);
        }
    }

    #[test]
    fn dimension_mismatch() {
        let a = slp_vec(Slp::zeros(4));
        let b = slp_vec(Slp::zeros(5));
        assert!(matches!(
            inner_product(&a, &b, Strategy::RunMerge),
            Err(Error::DimensionMismatch { left: 4, right: 5 })
        ));
    }

    #[test]
    fn l2_examples() {
        let v = slp_vec(Slp::char_vector(&[2, 7], 10).unwrap());
        assert_eq!(squared_l2_distance(&v, &v).unwrap(), 0);
        let z = slp_vec(Slp::zeros(10));
        assert_eq!(squared_l2_distance(&v, &z).unwrap(), 2);
    }

    #[test]
    fn mat_vec_zero_rows() {
        let m = CompressedMatrix::RowWise { rows: vec![Slp::zeros(4), Slp::zeros(4)], cols: 4 };
        let v = slp_vec(Slp::char_vector(&[1, 4], 4).unwrap());
        assert_eq!(mat_vec(&m, &v, Strategy::RunMerge).unwrap(), vec![0, 0]);
    }

    #[test]
    fn mat_vec_matches_dense_oracle() {
        let mut seed = 0xc0ffee_u64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            seed
        };
        for _ in 0..100 {
            let cols = 1 + next() % 16;
            let rows: Vec<Slp> = (0..1 + next() % 4)
                .map(|_| {
                    let xs: Vec<u64> = (1..=cols).filter(|_| next() % 2 == 0).collect();
                    Slp::char_vector(&xs, cols).unwrap()
                })
                .collect();
            let vxs: Vec<u64> = (1..=cols).filter(|_| next() % 3 == 0).collect();
            let v = Slp::char_vector(&vxs, cols).unwrap();
            let m = CompressedMatrix::RowWise { rows: rows.clone(), cols };
            let got = mat_vec(&m, &slp_vec(v.clone()), Strategy::RunMerge).unwrap();
            let vd = v.expand(1 << 20).unwrap();
            let want: Vec<u64> = rows
                .iter()
                .map(|r| bits::inner_product(&r.expand(1 << 20).unwrap(), &vd).unwrap())
                .collect();
            assert_eq!(got, want);
        }
    }

    #[test]
    fn dense_mat_mul_identity_and_zero() {
        let b = DenseBitMatrix::from_rows(vec![vec![1, 0, 1], vec![0, 1, 1]]).unwrap();
        let id = DenseBitMatrix::identity(2);
        let prod = dense_mat_mul(&id, &b, 1 << 20).unwrap();
        for (i, row) in prod.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                assert_eq!(v, b.get(i, j) as u64);
            }
        }
        let z = DenseBitMatrix::zeros(3, 2);
        let prod = dense_mat_mul(&b, &z, 1 << 20).unwrap();
        assert!(prod.iter().flatten().all(|&x| x == 0));
    }

    #[test]
    fn strong_round_trip() {
        // 2x3 matrix, column-major flattening 011010 for rows 010, 110.
        let flat = Slp::from_bits(&[0, 1, 1, 1, 0, 0]).unwrap();
        let m = CompressedMatrix::Strong { slp: flat, rows: 2, cols: 3, layout: MatrixLayout::ColMajor };
        m.validate().unwrap();
        let d = m.to_dense(1 << 20).unwrap();
        assert_eq!(d.row(0), &[0, 1, 0]);
        assert_eq!(d.row(1), &[1, 1, 0]);
        assert_eq!(d.flatten(MatrixLayout::ColMajor), vec![0, 1, 1, 1, 0, 0]);
    }

    #[test]
    fn run_merge_memory_is_depth_bounded() {
        let a = Slp::repeat(&Slp::char_vector(&[3, 5], 9).unwrap(), 11).unwrap();
        let b = Slp::char_vector(&[7, 80], 99).unwrap();
        let stats = slp_inner_product_instrumented(&a, &b).unwrap();
        assert!(stats.peak_stack_a <= a.depth() + 1);
        assert!(stats.peak_stack_b <= b.depth() + 1);
        assert_eq!(
            stats.value,
            inner_product(
                &slp_vec(a),
                &slp_vec(b),
                Strategy::Decompress { budget: 1 << 20 }
            )
            .unwrap()
        );
    }

    proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(500))]
        #[test]
        fn strategies_agree(ops in crate::testgen::arb_slp_program(), flips in proptest::collection::vec(any::<u8>(), 1..20)) {
            let g = crate::testgen::slp_from_program(&ops);
            let n = g.expansion_length();
            prop_assume!(n <= 1 << 16);
            // second vector: expansion with pseudo-random flips
            let mut other = g.expand(1 << 20).unwrap();
            for (i, f) in flips.iter().enumerate() {
                let idx = (*f as usize * 131 + i * 977) % other.len();
                other[idx] ^= 1;
            }
            let a = CompressedVector::Slp(g);
            let b_dense = CompressedVector::Dense(other.clone());
            let b_rle = CompressedVector::Rle(RleSeq::encode(&other).unwrap());
            let strategies =
                [Strategy::Decompress { budget: 1 << 20 }, Strategy::RunMerge, Strategy::Rle];
            let want = inner_product(&a, &b_dense, strategies[0]).unwrap();
            for b in [&b_dense, &b_rle] {
                for s in strategies {
                    prop_assert_eq!(inner_product(&a, b, s).unwrap(), want);
                }
            }
            // l2 identity against the definition
            let ed = a.expand(1 << 20).unwrap();
            let direct: u64 = ed
                .iter()
                .zip(&other)
                .map(|(&x, &y)| ((x as i64 - y as i64) * (x as i64 - y as i64)) as u64)
                .sum();
            prop_assert_eq!(squared_l2_distance(&a, &b_dense).unwrap(), direct);
        }
    }
}
