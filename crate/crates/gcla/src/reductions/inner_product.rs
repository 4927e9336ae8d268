//! 3SUM and kSUM to compressed vector inner product.

use super::{nested_sumset_symbol, BundleKind, ReductionBundle};
use crate::ceil_log2;
use crate::error::{Error, Result};
use crate::linalg::CompressedVector;
use crate::oracle::{brute_3sum, brute_ksum, TargetMode};
use crate::slp::{SlpBuilder, MAX_LEN};
use crate::sum::{Form, SumInstance};

fn checked_dim(parts: &[u64]) -> Result<u64> {
    let mut acc: u64 = 1;
    for &p in parts {
        acc = acc.checked_mul(p).filter(|&v| v <= MAX_LEN).ok_or(Error::LengthOverflow)?;
    }
    Ok(acc)
}

/// 3SUM (a+b=c?) to two SLP-compressed vectors of dimension
/// N = 2mU * max(1, ceil(log2 m))^2 whose inner product is >= 1 iff the
/// instance is a YES instance.
///
/// The first vector concatenates, for each a in A in sorted order, the
/// block `0^a v_B 0^(U-a)`; the second repeats `v_C 0^U` once per block;
/// both get a zero tail up to N.
pub fn reduce_3sum_to_ip(inst: &SumInstance, oracle_budget: u64) -> Result<ReductionBundle> {
    if inst.k() != 3 || inst.form() != Form::Positive || inst.target().is_some() {
        return Err(Error::InvalidInstance(
            "reduce_3sum_to_ip needs a positive k=3 instance without target".into(),
        ));
    }
    let u = inst.universe() as u64;
    let m = inst.m() as u64;
    let pad = 1.max(ceil_log2(m));
    let dim = checked_dim(&[2, m, u, pad, pad])?;
    let blocks = inst.set(0).len() as u64;
    let used = 2 * blocks * u;

    let mut b1 = SlpBuilder::new();
    let mut sym = nested_sumset_symbol(&mut b1, &[inst.set(0)], inst.set(1), u, u)?;
    if dim > used {
        let z = b1.zeros(dim - used)?;
        sym = b1.concat(sym, z)?;
    }
    let v_ab = b1.finish(sym);

    let mut b2 = SlpBuilder::new();
    let c_xs: Vec<u64> = inst.set(2).iter().map(|&x| x as u64).collect();
    let vc = b2.char_vector(&c_xs, u)?;
    let z = b2.zeros(u)?;
    let block = b2.concat(vc, z)?;
    let mut sym = b2.repeat(block, blocks)?;
    if dim > used {
        let z = b2.zeros(dim - used)?;
        sym = b2.concat(sym, z)?;
    }
    let v_c = b2.finish(sym);

    let cert = brute_3sum(inst, TargetMode::Convolution, oracle_budget)?;
    let bundle = ReductionBundle {
        kind: BundleKind::Ip3,
        vectors: vec![CompressedVector::Slp(v_ab), CompressedVector::Slp(v_c)],
        matrix: None,
        dimension: dim,
        block_len: 2 * u,
        block_count: blocks,
        sources: vec![inst.clone()],
        expected: vec![cert.answer],
        target: None,
        group_size: None,
    };
    bundle.validate()?;
    Ok(bundle)
}

/// kSUM (a_1+...+a_{k-1} = a_k?) to two SLP vectors of dimension
/// m^(k-2) * (k-1) * U, no padding. The first vector nests the shift sets
/// A_1..A_{k-2} around v_{A_{k-1}}; the second repeats `v_{A_k} 0^((k-2)U)`
/// once per block.
pub fn reduce_ksum_to_ip(inst: &SumInstance, oracle_budget: u64) -> Result<ReductionBundle> {
    if inst.form() != Form::Positive || inst.target().is_some() {
        return Err(Error::InvalidInstance(
            "reduce_ksum_to_ip needs a positive instance without target".into(),
        ));
    }
    let k = inst.k();
    let u = inst.universe() as u64;
    let d = (k as u64 - 2) * u;
    let mut block_parts: Vec<u64> = vec![(k as u64 - 1) * u];
    for i in 0..k - 2 {
        block_parts.push(inst.set(i).len() as u64);
    }
    let dim = checked_dim(&block_parts)?;
    let blocks = dim / ((k as u64 - 1) * u);

    let mut b1 = SlpBuilder::new();
    let levels: Vec<&[i64]> = (0..k - 2).map(|i| inst.set(i)).collect();
    let sym = nested_sumset_symbol(&mut b1, &levels, inst.set(k - 2), u, d)?;
    let v_left = b1.finish(sym);

    let mut b2 = SlpBuilder::new();
    let last_xs: Vec<u64> = inst.set(k - 1).iter().map(|&x| x as u64).collect();
    let vk = b2.char_vector(&last_xs, u)?;
    let z = b2.zeros(d)?;
    let block = b2.concat(vk, z)?;
    let sym = b2.repeat(block, blocks)?;
    let v_right = b2.finish(sym);

    let cert = brute_ksum(inst, oracle_budget)?;
    let bundle = ReductionBundle {
        kind: BundleKind::Ipk,
        vectors: vec![CompressedVector::Slp(v_left), CompressedVector::Slp(v_right)],
        matrix: None,
        dimension: dim,
        block_len: (k as u64 - 1) * u,
        block_count: blocks,
        sources: vec![inst.clone()],
        expected: vec![cert.answer],
        target: None,
        group_size: None,
    };
    bundle.validate()?;
    Ok(bundle)
}
