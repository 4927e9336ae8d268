//! Benchmark harness: synthetic families, seeded and reproducible, CSV out.
//!
//! Wall times are medians of the configured repetition count; the structural
//! columns (N, grammar size, run count, merge steps) are deterministic.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{inner_product_counted, CompressedVector, Strategy};
use crate::reductions::{balance_s, reduce_3sum_to_ip, reduce_3sum_to_mv};
use crate::rle;
use crate::slp::Slp;
use crate::sum::SumInstance;

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub family: String,
    pub n: u64,
    pub n_slp: usize,
    pub n_rle: usize,
    pub strategy: String,
    pub wall_time_ms: f64,
    pub merge_steps: usize,
}

pub const CSV_HEADER: &str = "family,N,n_slp,n_rle,strategy,wall_time_ms,merge_steps";

pub fn rows_to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{:.3},{}\n",
            r.family, r.n, r.n_slp, r.n_rle, r.strategy, r.wall_time_ms, r.merge_steps
        ));
    }
    out
}

fn median_ms(samples: &mut [f64]) -> f64 {
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    samples[samples.len() / 2]
}

fn time_pair(
    a: &CompressedVector,
    b: &CompressedVector,
    strategy: Strategy,
    reps: usize,
) -> Result<(f64, usize)> {
    let mut times = Vec::with_capacity(reps);
    let mut steps = 0;
    for _ in 0..reps.max(1) {
        let start = Instant::now();
        let (_, s) = inner_product_counted(a, b, strategy)?;
        times.push(start.elapsed().as_secs_f64() * 1000.0);
        steps = s;
    }
    Ok((median_ms(&mut times), steps))
}

/// One benchmark family over a size grid. Sizes mean the vector dimension N
/// for `alternating`, and the instance size m for the reduction families.
pub fn run_family(
    family: &str,
    sizes: &[u64],
    strategy: Strategy,
    strategy_name: &str,
    reps: usize,
    seed: u64,
    oracle_budget: u64,
) -> Result<Vec<BenchRow>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for &size in sizes {
        let (a, b, n) = match family {
            "alternating" => {
                let half = (size / 2).max(1);
                let g = Slp::repeat(&Slp::from_bits(&[0, 1])?, half)?;
                let n = g.expansion_length();
                (CompressedVector::Slp(g.clone()), CompressedVector::Slp(g), n)
            }
            "ip3" => {
                let m = size.max(1) as usize;
                let u = (4 * size).max(3) as i64;
                let inst = SumInstance::random(&mut rng, 3, m, u);
                let bundle = reduce_3sum_to_ip(&inst, oracle_budget)?;
                let n = bundle.dimension;
                let mut v = bundle.vectors.into_iter();
                (v.next().unwrap(), v.next().unwrap(), n)
            }
            "mv" => {
                let m = size.max(1) as usize;
                let s = balance_s(m as u64) as usize;
                let u = (3 * s as i64).max(3);
                let t = 3;
                let inst = SumInstance::random(&mut rng, 3, s.min(m), u);
                let inst = SumInstance::new(inst.sets().to_vec(), u, Some(t))?;
                let bundle = reduce_3sum_to_mv(&[inst], s, oracle_budget)?;
                let crate::linalg::CompressedMatrix::RowWise { rows: mrows, .. } =
                    bundle.matrix.unwrap()
                else {
                    unreachable!()
                };
                let n = bundle.dimension;
                let mut v = bundle.vectors.into_iter();
                (CompressedVector::Slp(mrows.into_iter().next().unwrap()), v.next().unwrap(), n)
            }
            other => return Err(Error::Parse(format!("unknown bench family {other:?}"))),
        };
        let n_slp = match &a {
            CompressedVector::Slp(g) => g.size(),
            _ => 0,
        };
        let n_rle = match &a {
            CompressedVector::Slp(g) => rle::slp_to_rle(g).n_rle(),
            CompressedVector::Rle(r) => r.n_rle(),
            CompressedVector::Dense(d) => rle::RleSeq::encode(d)?.n_rle(),
        };
        let (wall_time_ms, merge_steps) = time_pair(&a, &b, strategy, reps)?;
        rows.push(BenchRow {
            family: family.to_string(),
            n,
            n_slp,
            n_rle,
            strategy: strategy_name.to_string(),
            wall_time_ms,
            merge_steps,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alternating_family_shows_log_growth_and_step_bounds() {
        let sizes: Vec<u64> = (6..=14).map(|k| 1u64 << k).collect();
        let rows = run_family("alternating", &sizes, Strategy::Rle, "rle", 3, 0, 1 << 20).unwrap();
        for (row, &size) in rows.iter().zip(&sizes) {
            assert_eq!(row.n, size);
            // (01)^N needs only O(log N) rules but N runs
            assert!(row.n_slp as u64 <= 2 * crate::ceil_log2(size) + 4, "{row:?}");
            assert_eq!(row.n_rle as u64, size);
            assert!(row.merge_steps <= 2 * row.n_rle, "{row:?}");
        }
        // grammar size grows ~linearly in log N
        for pair in rows.windows(2) {
            assert!(pair[1].n_slp >= pair[0].n_slp);
            assert!(pair[1].n_slp - pair[0].n_slp <= 4);
        }
    }

    #[test]
    fn csv_shape() {
        let rows = run_family("ip3", &[2, 4], Strategy::RunMerge, "run-merge", 1, 7, 1 << 20)
            .unwrap();
        let csv = rows_to_csv(&rows);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER);
        assert_eq!(lines.count(), 2);
    }

    #[test]
    fn decompress_time_not_superlinear() {
        // generous guard: 64x dimension must not cost 200x time (quadratic
        // behaviour would show up as ~4096x)
        let small = 1u64 << 12;
        let large = 1u64 << 18;
        let rows = run_family(
            "alternating",
            &[small, large],
            Strategy::Decompress { budget: 1 << 22 },
            "decompress",
            5,
            0,
            1 << 20,
        )
        .unwrap();
        let t_small = rows[0].wall_time_ms.max(0.001);
        let t_large = rows[1].wall_time_ms;
        assert!(
            t_large / t_small < 200.0,
            "decompress scaling suspicious: {t_small}ms -> {t_large}ms"
        );
    }
}
