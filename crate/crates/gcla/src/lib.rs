//! Grammar-compressed linear algebra.
//!
//! Straight-line programs and run-length encodings over {0,1}, exact inner
//! products / matrix-vector products computed directly on the compressed
//! forms, and generators for the full family of sum-problem hardness
//! instances (3SUM and kSUM to inner product, 3SUM self-reduction and
//! universe reduction, 3SUM to matrix-vector, and the incompressible
//! matrix-product construction), each certified against brute-force oracles
//! at desk scale.

pub mod bench;
pub mod bits;
pub mod bundle;
pub mod cli;
pub mod error;
pub mod linalg;
pub mod oracle;
pub mod reductions;
pub mod rle;
pub mod slp;
pub mod sum;

pub use error::{Error, Result};

/// ceil(log2(x)) for x >= 1; 0 for x = 1.
pub fn ceil_log2(x: u64) -> u64 {
    assert!(x >= 1);
    if x == 1 {
        0
    } else {
        64 - (x - 1).leading_zeros() as u64
    }
}

#[cfg(test)]
mod lib_tests {
    #[test]
    fn ceil_log2_values() {
        use super::ceil_log2;
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(3), 2);
        assert_eq!(ceil_log2(8), 3);
        assert_eq!(ceil_log2(9), 4);
        assert_eq!(ceil_log2(1024), 10);
    }
}

/// Test-only pseudo-random SLP programs: a tiny stack machine whose
/// instructions build grammars from the public constructors.
#[cfg(test)]
pub(crate) mod testgen {
    use crate::slp::Slp;
    use proptest::prelude::*;

    pub type Program = Vec<(u8, u8, u8)>;

    pub fn arb_slp_program() -> impl Strategy<Value = Program> {
        proptest::collection::vec((0u8..5, any::<u8>(), any::<u8>()), 1..12)
    }

    pub fn slp_from_program(prog: &Program) -> Slp {
        let cap: u64 = 1 << 16;
        let mut pool: Vec<Slp> = vec![Slp::terminal(0).unwrap(), Slp::terminal(1).unwrap()];
        for &(op, x, y) in prog {
            let n = pool.len();
            let built = match op {
                0 => Some(Slp::zeros(1 + x as u64 % 64)),
                1 => Some(Slp::ones(1 + x as u64 % 64)),
                2 => {
                    let a = &pool[x as usize % n];
                    let b = &pool[y as usize % n];
                    (a.expansion_length() + b.expansion_length() <= cap)
                        .then(|| Slp::concat(a, b).unwrap())
                }
                3 => {
                    let a = &pool[x as usize % n];
                    let alpha = 1 + y as u64 % 8;
                    (a.expansion_length() * alpha <= cap)
                        .then(|| Slp::repeat(a, alpha).unwrap())
                }
                _ => {
                    let u = 1 + y as u64 % 24;
                    let xs: Vec<u64> = (1..=u).filter(|i| (x >> (i % 8)) & 1 == 1).collect();
                    Some(Slp::char_vector(&xs, u).unwrap())
                }
            };
            if let Some(g) = built {
                pool.push(g);
            }
        }
        pool.pop().unwrap()
    }
}
