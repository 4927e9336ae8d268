//! 3SUM/kSUM instances: k sets of integers with a universe bound and an
//! optional common target.
//!
//! Instances come in two forms. The positive form has elements in {1..U}
//! (the generators' input); the signed form has elements in {-U..U} and is
//! what the self-reduction emits (it negates C to search for a+b+c = 0).

use std::fmt::Write as _;

use rand::Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Form {
    Positive,
    Signed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumInstance {
    sets: Vec<Vec<i64>>,
    universe: i64,
    target: Option<i64>,
    form: Form,
}

impl SumInstance {
    /// Positive-form instance: every element in {1..universe}; when a target
    /// is given it must satisfy 1 <= t <= k*universe. Sets are sorted and
    /// deduplicated on ingestion.
    pub fn new(sets: Vec<Vec<i64>>, universe: i64, target: Option<i64>) -> Result<SumInstance> {
        Self::build(sets, universe, target, Form::Positive)
    }

    /// Signed-form instance: elements in {-universe..universe}, no target.
    pub fn new_signed(sets: Vec<Vec<i64>>, universe: i64) -> Result<SumInstance> {
        Self::build(sets, universe, None, Form::Signed)
    }

    fn build(
        mut sets: Vec<Vec<i64>>,
        universe: i64,
        target: Option<i64>,
        form: Form,
    ) -> Result<SumInstance> {
        if sets.len() < 3 {
            return Err(Error::InvalidInstance(format!("need k >= 3 sets, got {}", sets.len())));
        }
        if universe < 1 {
            return Err(Error::InvalidInstance(format!("universe bound {universe} must be >= 1")));
        }
        let (lo, hi) = match form {
            Form::Positive => (1, universe),
            Form::Signed => (-universe, universe),
        };
        for set in &mut sets {
            if set.is_empty() {
                return Err(Error::InvalidInstance("empty set".into()));
            }
            set.sort_unstable();
            set.dedup();
            for &x in set.iter() {
                if x < lo || x > hi {
                    return Err(Error::ElementOutOfUniverse { element: x, universe });
                }
            }
        }
        if let Some(t) = target {
            if form == Form::Signed {
                return Err(Error::InvalidForm("signed instances carry no target".into()));
            }
            let k = sets.len() as i64;
            if t < 1 || t > k * universe {
                return Err(Error::InvalidInstance(format!(
                    "target {t} outside 1..={}",
                    k * universe
                )));
            }
        }
        Ok(SumInstance { sets, universe, target, form })
    }

    pub fn k(&self) -> usize {
        self.sets.len()
    }

    /// Largest set cardinality (equal to every set's cardinality for
    /// duplicate-free equal-size inputs).
    pub fn m(&self) -> usize {
        self.sets.iter().map(Vec::len).max().unwrap()
    }

    pub fn universe(&self) -> i64 {
        self.universe
    }

    pub fn target(&self) -> Option<i64> {
        self.target
    }

    pub fn form(&self) -> Form {
        self.form
    }

    pub fn sets(&self) -> &[Vec<i64>] {
        &self.sets
    }

    pub fn set(&self, i: usize) -> &[i64] {
        &self.sets[i]
    }

    /// Re-tags a positive instance as signed (always valid: {1..U} is a
    /// subset of {-U..U}); drops any target.
    pub fn to_signed(&self) -> SumInstance {
        SumInstance {
            sets: self.sets.clone(),
            universe: self.universe,
            target: None,
            form: Form::Signed,
        }
    }

    /// Random positive instance with k sets of m distinct elements.
    pub fn random<R: Rng>(rng: &mut R, k: usize, m: usize, universe: i64) -> SumInstance {
        assert!(m as i64 <= universe, "need m <= universe for distinct elements");
        let sets = (0..k)
            .map(|_| {
                let mut set = Vec::with_capacity(m);
                while set.len() < m {
                    let x = rng.gen_range(1..=universe);
                    if !set.contains(&x) {
                        set.push(x);
                    }
                }
                set
            })
            .collect();
        SumInstance::new(sets, universe, None).unwrap()
    }

    /// Random positive k=3 instance with a common target in {3..3U}.
    pub fn random_with_target<R: Rng>(rng: &mut R, m: usize, universe: i64) -> SumInstance {
        let base = Self::random(rng, 3, m, universe);
        let t = rng.gen_range(3..=3 * universe);
        SumInstance::new(base.sets, universe, Some(t)).unwrap()
    }

    /// Canonical "sum v1" text form: header `sum v1 k m U [t]`, then one
    /// line of elements per set.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match self.target {
            Some(t) => {
                writeln!(out, "sum v1 {} {} {} {}", self.k(), self.m(), self.universe, t).unwrap()
            }
            None => writeln!(out, "sum v1 {} {} {}", self.k(), self.m(), self.universe).unwrap(),
        }
        for set in &self.sets {
            let line: Vec<String> = set.iter().map(|x| x.to_string()).collect();
            writeln!(out, "{}", line.join(" ")).unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<SumInstance> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty sum file".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() < 5 || fields.len() > 6 || fields[0] != "sum" || fields[1] != "v1" {
            return Err(Error::Parse(format!("bad sum header: {header:?}")));
        }
        let k: usize = fields[2].parse().map_err(|_| Error::Parse("bad k".into()))?;
        let m: usize = fields[3].parse().map_err(|_| Error::Parse("bad m".into()))?;
        let universe: i64 = fields[4].parse().map_err(|_| Error::Parse("bad universe".into()))?;
        let target: Option<i64> = match fields.get(5) {
            Some(t) => Some(t.parse().map_err(|_| Error::Parse("bad target".into()))?),
            None => None,
        };
        let mut sets = Vec::with_capacity(k);
        for (i, line) in lines.by_ref().take(k).enumerate() {
            let set: std::result::Result<Vec<i64>, _> =
                line.split_whitespace().map(str::parse).collect();
            let set = set.map_err(|_| Error::Parse(format!("bad element in set {i}")))?;
            if set.is_empty() || set.len() > m {
                return Err(Error::Parse(format!("set {i} has {} elements, m={m}", set.len())));
            }
            sets.push(set);
        }
        if sets.len() != k {
            return Err(Error::Parse("fewer sets than header declares".into()));
        }
        if lines.next().is_some() {
            return Err(Error::Parse("trailing content after sets".into()));
        }
        let form =
            if sets.iter().flatten().any(|&x| x < 1) { Form::Signed } else { Form::Positive };
        let inst = match form {
            Form::Positive => SumInstance::new(sets, universe, target)?,
            Form::Signed => SumInstance::new_signed(sets, universe)?,
        };
        if inst.m() != m {
            return Err(Error::Parse(format!("header m={m} but largest set has {}", inst.m())));
        }
        Ok(inst)
    }
}
