//! C ABI for the gcla library.
//!
//! Objects cross the boundary as opaque handles (`GclaSlp`, `GclaRle`);
//! every fallible call returns a `GclaStatus` and writes results through
//! out-pointers. Strings returned by `*_to_text` are heap-allocated and
//! must be released with `gcla_string_free`; handles with the matching
//! `*_free`.

use std::ffi::{c_char, CStr, CString};
use std::ptr;

use gcla::error::Error;
use gcla::linalg::{self, CompressedVector, Strategy};
use gcla::oracle::{brute_3sum, TargetMode};
use gcla::reductions::reduce_3sum_to_ip;
use gcla::rle::{self, RleSeq};
use gcla::slp::Slp;
use gcla::sum::SumInstance;

/// Status codes for every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GclaStatus {
    Ok = 0,
    InvalidSymbol = 1,
    LengthOverflow = 2,
    BudgetExceeded = 3,
    ElementOutOfUniverse = 4,
    DimensionMismatch = 5,
    InvalidInstance = 6,
    MixedTargets = 7,
    InvalidForm = 8,
    ParseError = 9,
    IoError = 10,
    NullPointer = 11,
    InvalidUtf8 = 12,
    BufferTooSmall = 13,
}

fn status_of(e: &Error) -> GclaStatus {
    match e {
        Error::InvalidSymbol(_) => GclaStatus::InvalidSymbol,
        Error::LengthOverflow => GclaStatus::LengthOverflow,
        Error::BudgetExceeded { .. } => GclaStatus::BudgetExceeded,
        Error::ElementOutOfUniverse { .. } => GclaStatus::ElementOutOfUniverse,
        Error::DimensionMismatch { .. } => GclaStatus::DimensionMismatch,
        Error::InvalidInstance(_) => GclaStatus::InvalidInstance,
        Error::MixedTargets => GclaStatus::MixedTargets,
        Error::InvalidForm(_) => GclaStatus::InvalidForm,
        Error::Parse(_) => GclaStatus::ParseError,
        Error::Io(_) => GclaStatus::IoError,
    }
}

/// Opaque straight-line program handle.
pub struct GclaSlp(Slp);

/// Opaque run-length sequence handle.
pub struct GclaRle(RleSeq);

fn give_slp(out: *mut *mut GclaSlp, slp: Slp) -> GclaStatus {
    if out.is_null() {
        return GclaStatus::NullPointer;
    }
    unsafe { *out = Box::into_raw(Box::new(GclaSlp(slp))) };
    GclaStatus::Ok
}

fn give_rle(out: *mut *mut GclaRle, r: RleSeq) -> GclaStatus {
    if out.is_null() {
        return GclaStatus::NullPointer;
    }
    unsafe { *out = Box::into_raw(Box::new(GclaRle(r))) };
    GclaStatus::Ok
}

macro_rules! deref {
    ($ptr:expr) => {
        match unsafe { $ptr.as_ref() } {
            Some(h) => &h.0,
            None => return GclaStatus::NullPointer,
        }
    };
}

/// Frees an SLP handle. Passing NULL is a no-op.
///
/// # Safety
/// `g` must be a pointer previously returned by a `gcla_slp_*` constructor
/// and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gcla_slp_free(g: *mut GclaSlp) {
    if !g.is_null() {
        drop(unsafe { Box::from_raw(g) });
    }
}

/// Frees an RLE handle. Passing NULL is a no-op.
///
/// # Safety
/// `r` must be a pointer previously returned by a `gcla_rle_*` constructor
/// and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gcla_rle_free(r: *mut GclaRle) {
    if !r.is_null() {
        drop(unsafe { Box::from_raw(r) });
    }
}

/// Frees a string returned by one of the `*_to_text` functions.
///
/// # Safety
/// `s` must originate from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn gcla_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Single-terminal grammar for `bit` (0 or 1).
///
/// # Safety
/// `out` must be a valid pointer to a `GclaSlp*`.
#[no_mangle]
pub unsafe extern "C" fn gcla_slp_terminal(bit: u8, out: *mut *mut GclaSlp) -> GclaStatus {
    match Slp::terminal(bit) {
        Ok(g) => give_slp(out, g),
        Err(e) => status_of(&e),
    }
}

/// Concatenation of two grammars.
///
/// # Safety
/// `a` and `b` must be valid handles; `out` a valid out-pointer.
#[no_mangle]
pub unsafe extern "C" fn gcla_slp_concat(
    a: *const GclaSlp,
    b: *const GclaSlp,
    out: *mut *mut GclaSlp,
) -> GclaStatus {
    let a = deref!(a);
    let b = deref!(b);
    match Slp::concat(a, b) {
        Ok(g) => give_slp(out, g),
        Err(e) => status_of(&e),
    }
}

/// `alpha`-fold repetition (alpha >= 1).
///
/// # Safety
/// `g` must be a valid handle; `out` a valid out-pointer.
#[no_mangle]
pub unsafe extern "C" fn gcla_slp_repeat(
    g: *const GclaSlp,
    alpha: u64,
    out: *mut *mut GclaSlp,
) -> GclaStatus {
    let g = deref!(g);
    if alpha == 0 {
        return GclaStatus::InvalidInstance;
    }
    match Slp::repeat(g, alpha) {
        Ok(r) => give_slp(out, r),
        Err(e) => status_of(&e),
    }
}

/// The string 0^k (k >= 1).
///
/// # Safety
/// `out` must be a valid out-pointer.
#[no_mangle]
pub unsafe extern "C" fn gcla_slp_zeros(k: u64, out: *mut *mut GclaSlp) -> GclaStatus {
    if k == 0 {
        return GclaStatus::InvalidInstance;
    }
    give_slp(out, Slp::zeros(k))
}

/// The string 1^k (k >= 1).
///
/// # Safety
/// `out` must be a valid out-pointer.
#[no_mangle]
pub unsafe extern "C" fn gcla_slp_ones(k: u64, out: *mut *mut GclaSlp) -> GclaStatus {
    if k == 0 {
        return GclaStatus::InvalidInstance;
    }
    give_slp(out, Slp::ones(k))
}

/// Characteristic vector of the set `xs[0..len]` within {1..universe}.
///
/// # Safety
/// `xs` must point to `len` readable u64 values (or be NULL when len is 0);
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gcla_slp_char_vector(
    xs: *const u64,
    len: usize,
    universe: u64,
    out: *mut *mut GclaSlp,
) -> GclaStatus {
    if universe == 0 || (xs.is_null() && len > 0) {
        return GclaStatus::InvalidInstance;
    }
    let set: &[u64] = if len == 0 { &[] } else { unsafe { std::slice::from_raw_parts(xs, len) } };
    match Slp::char_vector(set, universe) {
        Ok(g) => give_slp(out, g),
        Err(e) => status_of(&e),
    }
}

/// Number of grammar rules; 0 for NULL.
///
/// # Safety
/// `g` must be a valid handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn gcla_slp_size(g: *const GclaSlp) -> u64 {
    unsafe { g.as_ref() }.map_or(0, |h| h.0.size() as u64)
}

/// Expansion length N; 0 for NULL.
///
/// # Safety
/// `g` must be a valid handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn gcla_slp_expansion_length(g: *const GclaSlp) -> u64 {
    unsafe { g.as_ref() }.map_or(0, |h| h.0.expansion_length())
}

/// Expands the grammar into `buf` as 0/1 bytes. Fails with BufferTooSmall
/// when the expansion does not fit in `buf_len`; `written` receives the
/// number of bytes produced.
///
/// # Safety
/// `buf` must point to `buf_len` writable bytes; `written` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gcla_slp_expand(
    g: *const GclaSlp,
    buf: *mut u8,
    buf_len: usize,
    written: *mut usize,
) -> GclaStatus {
    let g = deref!(g);
    if buf.is_null() || written.is_null() {
        return GclaStatus::NullPointer;
    }
    if g.expansion_length() > buf_len as u64 {
        return GclaStatus::BufferTooSmall;
    }
    match g.expand(buf_len as u64) {
        Ok(bits) => {
            unsafe {
                ptr::copy_nonoverlapping(bits.as_ptr(), buf, bits.len());
                *written = bits.len();
            }
            GclaStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Serializes to the "slp v1" text form.
///
/// # Safety
/// `out` must be valid; free the result with `gcla_string_free`.
#[no_mangle]
pub unsafe extern "C" fn gcla_slp_to_text(
    g: *const GclaSlp,
    out: *mut *mut c_char,
) -> GclaStatus {
    let g = deref!(g);
    if out.is_null() {
        return GclaStatus::NullPointer;
    }
    match CString::new(g.to_text()) {
        Ok(s) => {
            unsafe { *out = s.into_raw() };
            GclaStatus::Ok
        }
        Err(_) => GclaStatus::InvalidUtf8,
    }
}

/// Parses the "slp v1" text form.
///
/// # Safety
/// `text` must be a valid NUL-terminated string; `out` a valid out-pointer.
#[no_mangle]
pub unsafe extern "C" fn gcla_slp_from_text(
    text: *const c_char,
    out: *mut *mut GclaSlp,
) -> GclaStatus {
    if text.is_null() {
        return GclaStatus::NullPointer;
    }
    let Ok(text) = unsafe { CStr::from_ptr(text) }.to_str() else {
        return GclaStatus::InvalidUtf8;
    };
    match Slp::from_text(text) {
        Ok(g) => give_slp(out, g),
        Err(e) => status_of(&e),
    }
}

/// Converts an SLP to its canonical run-length encoding.
///
/// # Safety
/// `g` must be a valid handle; `out` a valid out-pointer.
#[no_mangle]
pub unsafe extern "C" fn gcla_rle_from_slp(
    g: *const GclaSlp,
    out: *mut *mut GclaRle,
) -> GclaStatus {
    let g = deref!(g);
    give_rle(out, rle::slp_to_rle(g))
}

/// Number of runs; 0 for NULL.
///
/// # Safety
/// `r` must be a valid handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn gcla_rle_n_runs(r: *const GclaRle) -> u64 {
    unsafe { r.as_ref() }.map_or(0, |h| h.0.n_rle() as u64)
}

/// Total decoded length; 0 for NULL.
///
/// # Safety
/// `r` must be a valid handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn gcla_rle_total_len(r: *const GclaRle) -> u64 {
    unsafe { r.as_ref() }.map_or(0, |h| h.0.total_len())
}

/// Serializes to the "rle v1" text form.
///
/// # Safety
/// `out` must be valid; free the result with `gcla_string_free`.
#[no_mangle]
pub unsafe extern "C" fn gcla_rle_to_text(
    r: *const GclaRle,
    out: *mut *mut c_char,
) -> GclaStatus {
    let r = deref!(r);
    if out.is_null() {
        return GclaStatus::NullPointer;
    }
    match CString::new(r.to_text()) {
        Ok(s) => {
            unsafe { *out = s.into_raw() };
            GclaStatus::Ok
        }
        Err(_) => GclaStatus::InvalidUtf8,
    }
}

/// Parses the "rle v1" text form.
///
/// # Safety
/// `text` must be a valid NUL-terminated string; `out` a valid out-pointer.
#[no_mangle]
pub unsafe extern "C" fn gcla_rle_from_text(
    text: *const c_char,
    out: *mut *mut GclaRle,
) -> GclaStatus {
    if text.is_null() {
        return GclaStatus::NullPointer;
    }
    let Ok(text) = unsafe { CStr::from_ptr(text) }.to_str() else {
        return GclaStatus::InvalidUtf8;
    };
    match RleSeq::from_text(text) {
        Ok(r) => give_rle(out, r),
        Err(e) => status_of(&e),
    }
}

/// Inner-product evaluation strategy.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GclaStrategy {
    Decompress = 0,
    RunMerge = 1,
    Rle = 2,
}

fn strategy_of(s: GclaStrategy, budget: u64) -> Strategy {
    match s {
        GclaStrategy::Decompress => Strategy::Decompress { budget },
        GclaStrategy::RunMerge => Strategy::RunMerge,
        GclaStrategy::Rle => Strategy::Rle,
    }
}

/// Exact inner product of two grammar-compressed vectors. `budget` only
/// constrains the Decompress strategy.
///
/// # Safety
/// `a` and `b` must be valid handles; `out` a valid out-pointer.
#[no_mangle]
pub unsafe extern "C" fn gcla_inner_product(
    a: *const GclaSlp,
    b: *const GclaSlp,
    strategy: GclaStrategy,
    budget: u64,
    out: *mut u64,
) -> GclaStatus {
    let a = deref!(a);
    let b = deref!(b);
    if out.is_null() {
        return GclaStatus::NullPointer;
    }
    let va = CompressedVector::Slp(a.clone());
    let vb = CompressedVector::Slp(b.clone());
    match linalg::inner_product(&va, &vb, strategy_of(strategy, budget)) {
        Ok(v) => {
            unsafe { *out = v };
            GclaStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// One-pass RLE inner product; also reports the merge-step count.
///
/// # Safety
/// `a` and `b` must be valid handles; `out` and `steps` valid out-pointers.
#[no_mangle]
pub unsafe extern "C" fn gcla_rle_inner_product(
    a: *const GclaRle,
    b: *const GclaRle,
    out: *mut u64,
    steps: *mut u64,
) -> GclaStatus {
    let a = deref!(a);
    let b = deref!(b);
    if out.is_null() || steps.is_null() {
        return GclaStatus::NullPointer;
    }
    match rle::inner_product_counted(a, b) {
        Ok((v, s)) => {
            unsafe {
                *out = v;
                *steps = s as u64;
            }
            GclaStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Runs the 3SUM-to-inner-product reduction on sets `a`, `b`, `c` within
/// {1..universe}: emits the two compressed vectors, the dimension, and the
/// brute-force answer (1 = YES) so callers can certify the construction.
///
/// # Safety
/// The three set pointers must each point to the declared number of
/// readable i64 values; all out-pointers must be valid.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn gcla_reduce_3sum_to_ip(
    a: *const i64,
    a_len: usize,
    b: *const i64,
    b_len: usize,
    c: *const i64,
    c_len: usize,
    universe: i64,
    out_left: *mut *mut GclaSlp,
    out_right: *mut *mut GclaSlp,
    out_dim: *mut u64,
    out_expected_yes: *mut i32,
) -> GclaStatus {
    if a.is_null() || b.is_null() || c.is_null() {
        return GclaStatus::NullPointer;
    }
    if out_left.is_null() || out_right.is_null() || out_dim.is_null() || out_expected_yes.is_null()
    {
        return GclaStatus::NullPointer;
    }
    let sets = unsafe {
        vec![
            std::slice::from_raw_parts(a, a_len).to_vec(),
            std::slice::from_raw_parts(b, b_len).to_vec(),
            std::slice::from_raw_parts(c, c_len).to_vec(),
        ]
    };
    let inst = match SumInstance::new(sets, universe, None) {
        Ok(i) => i,
        Err(e) => return status_of(&e),
    };
    let bundle = match reduce_3sum_to_ip(&inst, u64::MAX) {
        Ok(b) => b,
        Err(e) => return status_of(&e),
    };
    let mut vectors = bundle.vectors.into_iter();
    let (Some(CompressedVector::Slp(left)), Some(CompressedVector::Slp(right))) =
        (vectors.next(), vectors.next())
    else {
        return GclaStatus::InvalidInstance;
    };
    unsafe {
        *out_dim = bundle.dimension;
        *out_expected_yes = i32::from(bundle.expected[0].is_yes());
    }
    let st = give_slp(out_left, left);
    if st != GclaStatus::Ok {
        return st;
    }
    give_slp(out_right, right)
}

/// Brute-force 3SUM oracle. `mode` 0 checks a+b=c, 1 checks a+b+c=target.
/// Writes 1 for YES, 0 for NO.
///
/// # Safety
/// Set pointers must be readable for their lengths; `out_yes` valid.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn gcla_brute_3sum(
    a: *const i64,
    a_len: usize,
    b: *const i64,
    b_len: usize,
    c: *const i64,
    c_len: usize,
    universe: i64,
    mode: i32,
    target: i64,
    out_yes: *mut i32,
) -> GclaStatus {
    if a.is_null() || b.is_null() || c.is_null() || out_yes.is_null() {
        return GclaStatus::NullPointer;
    }
    let sets = unsafe {
        vec![
            std::slice::from_raw_parts(a, a_len).to_vec(),
            std::slice::from_raw_parts(b, b_len).to_vec(),
            std::slice::from_raw_parts(c, c_len).to_vec(),
        ]
    };
    let inst = match SumInstance::new(sets, universe, None) {
        Ok(i) => i,
        Err(e) => return status_of(&e),
    };
    let mode = match mode {
        0 => TargetMode::Convolution,
        1 => TargetMode::Target(target),
        _ => return GclaStatus::InvalidInstance,
    };
    match brute_3sum(&inst, mode, u64::MAX) {
        Ok(cert) => {
            unsafe { *out_yes = i32::from(cert.is_yes()) };
            GclaStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}
