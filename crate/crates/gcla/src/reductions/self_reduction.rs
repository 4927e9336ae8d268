//! 3SUM self-reduction (sorted splitting with the domination filter) and
//! the random-prime universe reduction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::oracle::{brute_3sum, Answer, TargetMode};
use crate::sum::{Form, SumInstance};

/// Parameters for the full self-reduction pipeline.
#[derive(Debug, Clone, Copy)]
pub struct SelfReductionConfig {
    /// Subproblem group size, 1 <= s <= m.
    pub s: usize,
    /// Prime-trial exponent; the pipeline runs ceil(gamma * log2 m) rounds.
    /// Must exceed 2 so the union-bounded error probability vanishes.
    pub gamma: f64,
    pub seed: u64,
}

impl SelfReductionConfig {
    pub fn new(s: usize, gamma: f64, seed: u64) -> Result<SelfReductionConfig> {
        if s < 1 {
            return Err(Error::InvalidInstance("group size s must be >= 1".into()));
        }
        if gamma.is_nan() || gamma <= 2.0 {
            return Err(Error::InvalidInstance(format!("gamma must exceed 2, got {gamma}")));
        }
        Ok(SelfReductionConfig { s, gamma, seed })
    }

    pub fn trials_for(&self, m: usize) -> usize {
        let rounds = (self.gamma * (m.max(2) as f64).log2()).ceil() as usize;
        rounds.max(1)
    }
}

/// Splits a 3SUM instance (a+b=c?) into the non-trivial subproblems of the
/// sorted s-splitting, in signed zero-sum form (A'=A, B'=B, C'=-C; the
/// question becomes a+b+c=0).
///
/// A triple of parts is trivial when its minimum sum is positive or its
/// maximum sum is negative; at most O((m/s)^2) triples survive, and the
/// union of subproblem answers equals the original answer.
pub fn self_reduce(inst: &SumInstance, s: usize) -> Result<Vec<SumInstance>> {
    if inst.k() != 3 || inst.form() != Form::Positive || inst.target().is_some() {
        return Err(Error::InvalidInstance(
            "self_reduce needs a positive k=3 instance without target".into(),
        ));
    }
    if s < 1 || s > inst.m() {
        return Err(Error::InvalidInstance(format!("need 1 <= s <= m, got s={s}")));
    }
    let a: Vec<i64> = inst.set(0).to_vec();
    let b: Vec<i64> = inst.set(1).to_vec();
    let mut c_neg: Vec<i64> = inst.set(2).iter().map(|&x| -x).collect();
    c_neg.sort_unstable();

    let parts = |v: &[i64]| -> Vec<Vec<i64>> { v.chunks(s).map(<[i64]>::to_vec).collect() };
    let (pa, pb, pc) = (parts(&a), parts(&b), parts(&c_neg));

    let mut subs = Vec::new();
    for ai in &pa {
        for bj in &pb {
            for cl in &pc {
                let min_sum = ai[0] + bj[0] + cl[0];
                let max_sum =
                    ai[ai.len() - 1] + bj[bj.len() - 1] + cl[cl.len() - 1];
                if min_sum <= 0 && max_sum >= 0 {
                    subs.push(SumInstance::new_signed(
                        vec![ai.clone(), bj.clone(), cl.clone()],
                        inst.universe(),
                    )?);
                }
            }
        }
    }
    Ok(subs)
}

/// One reduced instance per prime trial: elements mapped x -> (x mod p) + 1
/// and the three candidate targets 3 + lambda*p for lambda in {0,1,2}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniverseReducedInstance {
    pub prime: i64,
    pub instance: SumInstance,
    pub targets: [i64; 3],
}

impl UniverseReducedInstance {
    /// Brute-force decision: YES iff some lambda-target has a witness.
    pub fn brute_answer(&self, budget: u64) -> Result<Answer> {
        for &t in &self.targets {
            if brute_3sum(&self.instance, TargetMode::Target(t), budget)?.is_yes() {
                return Ok(Answer::Yes);
            }
        }
        Ok(Answer::No)
    }
}

/// The sieve-backed prime pool {2..U'} with U' = alpha * s^3 log s log U,
/// alpha doubled from 1 until the pool holds at least 2 s^3 log2(3U) primes.
pub fn universe_prime_pool(s: u64, universe: u64) -> Result<Vec<i64>> {
    let s = s.max(1);
    let u = universe.max(1);
    let threshold = (2.0 * (s as f64).powi(3) * (3.0 * u as f64).log2()).ceil().max(8.0) as usize;
    let base = s
        .checked_pow(3)
        .and_then(|c| c.checked_mul(crate::ceil_log2(s).max(1)))
        .and_then(|c| c.checked_mul(crate::ceil_log2(u).max(1)))
        .ok_or(Error::LengthOverflow)?;
    let mut alpha: u64 = 1;
    loop {
        let bound = base.checked_mul(alpha).ok_or(Error::LengthOverflow)?;
        if bound > (1 << 28) {
            return Err(Error::InvalidInstance(format!(
                "prime pool bound {bound} too large to sieve"
            )));
        }
        let primes = sieve(bound.max(3));
        if primes.len() >= threshold {
            return Ok(primes);
        }
        alpha *= 2;
    }
}

fn sieve(bound: u64) -> Vec<i64> {
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for p in 2..=n {
        if !composite[p] {
            primes.push(p as i64);
            let mut q = p * p;
            while q <= n {
                composite[q] = true;
                q += p;
            }
        }
    }
    primes
}

/// Maps a signed zero-sum instance modulo one prime: x -> (x mod p) + 1,
/// universe p, targets 3 + lambda*p. YES instances stay YES for every prime
/// and some lambda; NO instances produce a false positive with probability
/// at most 1/2 per prime drawn from [`universe_prime_pool`].
pub fn reduce_modulo_prime(sub: &SumInstance, prime: i64) -> Result<UniverseReducedInstance> {
    if sub.form() != Form::Signed {
        return Err(Error::InvalidForm("universe reduction expects a signed instance".into()));
    }
    if prime < 2 {
        return Err(Error::InvalidInstance(format!("{prime} is not a prime")));
    }
    let sets: Vec<Vec<i64>> = sub
        .sets()
        .iter()
        .map(|set| set.iter().map(|&x| x.rem_euclid(prime) + 1).collect())
        .collect();
    let instance = SumInstance::new(sets, prime, None)?;
    Ok(UniverseReducedInstance { prime, instance, targets: [3, 3 + prime, 3 + 2 * prime] })
}

/// `trials` independent random-prime reductions of one signed instance.
pub fn universe_reduce(
    sub: &SumInstance,
    trials: usize,
    seed: u64,
) -> Result<Vec<UniverseReducedInstance>> {
    let pool = universe_prime_pool(sub.m() as u64, sub.universe() as u64)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials)
        .map(|_| {
            let p = pool[rng.gen_range(0..pool.len())];
            reduce_modulo_prime(sub, p)
        })
        .collect()
}

/// The full randomized 3SUM decision procedure: split into subproblems,
/// then declare YES iff some subproblem survives every random-prime round.
/// Completeness is unconditional; the false positive probability is
/// polynomially small for gamma > 2.
pub fn solve_3sum_by_self_reduction(
    inst: &SumInstance,
    config: &SelfReductionConfig,
    oracle_budget: u64,
) -> Result<Answer> {
    let subs = self_reduce(inst, config.s)?;
    if subs.is_empty() {
        return Ok(Answer::No);
    }
    let pool = universe_prime_pool(config.s as u64, inst.universe() as u64)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut alive = vec![true; subs.len()];
    for _ in 0..config.trials_for(inst.m()) {
        let p = pool[rng.gen_range(0..pool.len())];
        for (i, sub) in subs.iter().enumerate() {
            if alive[i] && !reduce_modulo_prime(sub, p)?.brute_answer(oracle_budget)?.is_yes() {
                alive[i] = false;
            }
        }
    }
    Ok(Answer::from_bool(alive.into_iter().any(|a| a)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn inst3(a: &[i64], b: &[i64], c: &[i64], u: i64) -> SumInstance {
        SumInstance::new(vec![a.to_vec(), b.to_vec(), c.to_vec()], u, None).unwrap()
    }

    fn signed_answer(sub: &SumInstance) -> bool {
        brute_3sum(sub, TargetMode::Target(0), 1 << 30).unwrap().is_yes()
    }

    #[test]
    fn s_equals_m_is_whole_instance() {
        let inst = inst3(&[1, 2, 3], &[2, 4, 6], &[3, 5, 9], 9);
        let subs = self_reduce(&inst, 3).unwrap();
        assert_eq!(subs.len(), 1);
        assert_eq!(subs[0].set(0), inst.set(0));
        assert_eq!(subs[0].set(1), inst.set(1));
        let neg: Vec<i64> = inst.set(2).iter().rev().map(|&x| -x).collect();
        assert_eq!(subs[0].set(2), &neg[..]);
    }

    #[test]
    fn union_answer_preserved() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let m = rng.gen_range(1..=12);
            let u = rng.gen_range(m as i64..=40);
            let inst = SumInstance::random(&mut rng, 3, m, u);
            let direct =
                brute_3sum(&inst, TargetMode::Convolution, 1 << 30).unwrap().is_yes();
            for s in 1..=inst.m() {
                let subs = self_reduce(&inst, s).unwrap();
                let union = subs.iter().any(signed_answer);
                assert_eq!(union, direct, "inst={inst:?} s={s}");
                let per_side = inst.m().div_ceil(s);
                assert!(subs.len() <= 9 * per_side * per_side);
            }
        }
    }

    #[test]
    fn subproblem_elements_come_from_the_source() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..100 {
            let m = rng.gen_range(1..=10);
            let u = rng.gen_range(m as i64..=30);
            let inst = SumInstance::random(&mut rng, 3, m, u);
            let neg_c: Vec<i64> = inst.set(2).iter().map(|&x| -x).collect();
            for s in 1..=inst.m() {
                for sub in self_reduce(&inst, s).unwrap() {
                    assert!(sub.set(0).iter().all(|x| inst.set(0).contains(x)));
                    assert!(sub.set(1).iter().all(|x| inst.set(1).contains(x)));
                    assert!(sub.set(2).iter().all(|x| neg_c.contains(x)));
                }
            }
        }
    }

    #[test]
    fn spec_false_positive_example() {
        // NO instance {1},{1},{-5}: p=3 gives a false positive, p=2 does not.
        let sub = SumInstance::new_signed(vec![vec![1], vec![1], vec![-5]], 5).unwrap();
        assert!(!signed_answer(&sub));
        let p3 = reduce_modulo_prime(&sub, 3).unwrap();
        assert_eq!(p3.instance.set(2), &[2]); // -5 mod 3 = 1, shifted to 2
        assert_eq!(p3.brute_answer(1 << 20).unwrap(), Answer::Yes);
        let p2 = reduce_modulo_prime(&sub, 2).unwrap();
        assert_eq!(p2.brute_answer(1 << 20).unwrap(), Answer::No);
    }

    #[test]
    fn completeness_on_every_prime() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut tried = 0;
        while tried < 40 {
            let m = rng.gen_range(1..=6);
            let u = rng.gen_range(m as i64..=25);
            let inst = SumInstance::random(&mut rng, 3, m, u);
            if !brute_3sum(&inst, TargetMode::Convolution, 1 << 30).unwrap().is_yes() {
                continue;
            }
            tried += 1;
            let sub = self_reduce(&inst, inst.m()).unwrap().into_iter().next().unwrap();
            assert!(signed_answer(&sub));
            for red in universe_reduce(&sub, 50, tried).unwrap() {
                assert_eq!(red.brute_answer(1 << 20).unwrap(), Answer::Yes, "p={}", red.prime);
            }
        }
    }

    #[test]
    fn pipeline_decides_yes_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for seed in 0..30u64 {
            let m = rng.gen_range(2..=10);
            let u = rng.gen_range(m as i64..=30);
            let inst = SumInstance::random(&mut rng, 3, m, u);
            let direct = brute_3sum(&inst, TargetMode::Convolution, 1 << 30).unwrap().is_yes();
            let cfg = SelfReductionConfig::new(2.min(m), 3.0, seed).unwrap();
            let decided = solve_3sum_by_self_reduction(&inst, &cfg, 1 << 20).unwrap();
            if direct {
                // completeness is unconditional
                assert_eq!(decided, Answer::Yes);
            }
        }
    }

    #[test]
    fn config_validation() {
        assert!(SelfReductionConfig::new(0, 3.0, 0).is_err());
        assert!(SelfReductionConfig::new(1, 2.0, 0).is_err());
        assert!(SelfReductionConfig::new(1, 2.5, 0).is_ok());
    }
}
