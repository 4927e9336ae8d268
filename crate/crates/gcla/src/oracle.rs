//! Brute-force ground truth.
//!
//! These solvers are deliberately naive and share no arithmetic helpers with
//! the generators they certify: a disagreement between the two is always a
//! bug in the construction, never a shared mistake.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::sum::SumInstance;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Answer {
    Yes,
    No,
}

impl Answer {
    pub fn is_yes(self) -> bool {
        self == Answer::Yes
    }

    pub fn from_bool(b: bool) -> Answer {
        if b {
            Answer::Yes
        } else {
            Answer::No
        }
    }
}

impl std::fmt::Display for Answer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Answer::Yes => "YES",
            Answer::No => "NO",
        })
    }
}

/// Which equation the 3SUM solver checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetMode {
    /// a + b = c.
    Convolution,
    /// a + b + c = t for the given target.
    Target(i64),
}

/// A certified answer: YES always carries a witness tuple that re-verifies
/// arithmetically via [`Certificate::verify`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub answer: Answer,
    pub witness: Option<Vec<i64>>,
}

impl Certificate {
    pub fn is_yes(&self) -> bool {
        self.answer.is_yes()
    }

    /// Re-checks the witness equation against the instance it certifies.
    pub fn verify(&self, inst: &SumInstance, mode: Option<TargetMode>) -> bool {
        match (&self.answer, &self.witness) {
            (Answer::No, None) => true,
            (Answer::No, Some(_)) => false,
            (Answer::Yes, None) => false,
            (Answer::Yes, Some(w)) => {
                if w.len() != inst.k() {
                    return false;
                }
                for (i, x) in w.iter().enumerate() {
                    if !inst.set(i).contains(x) {
                        return false;
                    }
                }
                match mode {
                    Some(TargetMode::Convolution) => {
                        w[..w.len() - 1].iter().sum::<i64>() == w[w.len() - 1]
                    }
                    Some(TargetMode::Target(t)) => w.iter().sum::<i64>() == t,
                    // kSUM: a_1 + ... + a_{k-1} = a_k
                    None => w[..w.len() - 1].iter().sum::<i64>() == w[w.len() - 1],
                }
            }
        }
    }
}

/// Exhaustive triple scan for 3SUM in either target mode.
pub fn brute_3sum(inst: &SumInstance, mode: TargetMode, budget: u64) -> Result<Certificate> {
    if inst.k() != 3 {
        return Err(Error::InvalidInstance(format!("brute_3sum needs k=3, got {}", inst.k())));
    }
    let work = inst.set(0).len() as u64 * inst.set(1).len() as u64 * inst.set(2).len() as u64;
    if work > budget {
        return Err(Error::BudgetExceeded { needed: work, budget });
    }
    for &a in inst.set(0) {
        for &b in inst.set(1) {
            for &c in inst.set(2) {
                let hit = match mode {
                    TargetMode::Convolution => a + b == c,
                    TargetMode::Target(t) => a + b + c == t,
                };
                if hit {
                    return Ok(Certificate { answer: Answer::Yes, witness: Some(vec![a, b, c]) });
                }
            }
        }
    }
    Ok(Certificate { answer: Answer::No, witness: None })
}

/// kSUM by scanning (k-1)-tuples and hash-checking the last set for
/// a_1 + ... + a_{k-1}.
pub fn brute_ksum(inst: &SumInstance, budget: u64) -> Result<Certificate> {
    let k = inst.k();
    let mut work: u64 = 1;
    for i in 0..k - 1 {
        work = work.saturating_mul(inst.set(i).len() as u64);
    }
    if work > budget {
        return Err(Error::BudgetExceeded { needed: work, budget });
    }
    let last: HashSet<i64> = inst.set(k - 1).iter().copied().collect();
    let mut idx = vec![0usize; k - 1];
    loop {
        let sum: i64 = (0..k - 1).map(|i| inst.set(i)[idx[i]]).sum();
        if last.contains(&sum) {
            let mut w: Vec<i64> = (0..k - 1).map(|i| inst.set(i)[idx[i]]).collect();
            w.push(sum);
            return Ok(Certificate { answer: Answer::Yes, witness: Some(w) });
        }
        // odometer increment
        let mut pos = k - 1;
        loop {
            if pos == 0 {
                return Ok(Certificate { answer: Answer::No, witness: None });
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < inst.set(pos).len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Exact number of distinct length-`ell` substrings of a 0/1 string.
pub fn distinct_substring_count(s: &[u8], ell: usize) -> u64 {
    assert!(ell >= 1 && ell <= s.len(), "need 1 <= ell <= |s|");
    if ell <= 63 {
        let mask: u64 = (1 << ell) - 1;
        let mut window: u64 = 0;
        let mut seen: HashSet<u64> = HashSet::new();
        for (i, &b) in s.iter().enumerate() {
            window = ((window << 1) | b as u64) & mask;
            if i + 1 >= ell {
                seen.insert(window);
            }
        }
        seen.len() as u64
    } else {
        let mut seen: HashSet<&[u8]> = HashSet::new();
        for w in s.windows(ell) {
            seen.insert(w);
        }
        seen.len() as u64
    }
}

/// Lower bound on the size of any grammar generating `s`: a size-n grammar
/// yields at most n*ell distinct length-ell substrings, so
/// ceil(distinct / ell) is a valid bound.
pub fn grammar_size_lower_bound(s: &[u8], ell: usize) -> u64 {
    let count = distinct_substring_count(s, ell);
    count.div_ceil(ell as u64)
}
