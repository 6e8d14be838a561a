//! C ABI over the `apwenian` library.
//!
//! Conventions:
//! - every fallible function returns an [`ApwStatus`] and writes results through out-pointers;
//! - on failure a message is stored per thread and read with [`apw_last_error`];
//! - objects are opaque handles released with their matching `*_free` function;
//! - strings returned by the library are released with [`apw_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use apwenian::classify::{classify, count_apwenian, ClassificationReport};
use apwenian::criteria::{check_01, check_pm, CriterionReport};
use apwenian::hankel::{hankel_gf2, pm_profile, ProfilePath};
use apwenian::sequences::{
    fixed_point, named_sequence, Alphabet, BitSeq, NamedSequence, Sequence, SignSeq, Substitution,
};
use apwenian::Error;

/// Result codes shared by all functions.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ApwStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    TooShort = 5,
    /// Input is outside the domain of the operation (even modulus, leading zero, ...).
    Domain = 6,
    /// A J-fraction or Padé step hit a vanishing or even determinant.
    Degenerate = 7,
    OutOfRange = 8,
    Internal = 9,
    Panic = 10,
}

/// A 0-1 sequence.
pub struct ApwBitSeq(BitSeq);

/// A ±1 sequence.
pub struct ApwSignSeq(SignSeq);

/// Result of classifying an odd modulus.
pub struct ApwClassification(ClassificationReport);

/// Outcome of a Hankel-free criterion check.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ApwCriterion {
    pub passed: bool,
    /// Largest n examined.
    pub checked_up_to: usize,
    /// First failing n; meaningful only when `passed` is false.
    pub violation: usize,
}

impl From<&CriterionReport> for ApwCriterion {
    fn from(r: &CriterionReport) -> Self {
        ApwCriterion {
            passed: r.passed(),
            checked_up_to: r.checked_up_to(),
            violation: r.violation().unwrap_or(0),
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(ApwStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Parse { .. } => ApwStatus::Parse,
            Error::TooShort { .. } | Error::InsufficientDirectives { .. } => ApwStatus::TooShort,
            Error::InvalidArgument(_)
            | Error::InvalidSubstitution(_)
            | Error::InvalidDirectives(_)
            | Error::NotProlongable
            | Error::SearchSpaceTooLarge(_) => ApwStatus::InvalidArgument,
            Error::LeadingZero
            | Error::EvenModulus(_)
            | Error::ModulusTooSmall(_)
            | Error::UnsupportedShape(_)
            | Error::WieferichCondition { .. } => ApwStatus::Domain,
            Error::NotApwenianPrefix { .. }
            | Error::ZeroHankel { .. }
            | Error::ZeroFactor { .. } => ApwStatus::Degenerate,
            Error::DepthExceeded { .. } => ApwStatus::OutOfRange,
            Error::NotDivisible { .. } | Error::Invariant(_) => ApwStatus::Internal,
        };
        Failure(status, e.to_string())
    }
}

fn fail<T>(status: ApwStatus, msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure(status, msg.into()))
}

fn set_last_error(msg: Option<String>) {
    let c = msg.map(|m| CString::new(m.replace('\0', " ")).expect("interior nul removed"));
    LAST_ERROR.with(|slot| *slot.borrow_mut() = c);
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> ApwStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error(None);
            ApwStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(Some(msg));
            status
        }
        Err(_) => {
            set_last_error(Some("panic inside apwenian".into()));
            ApwStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().map_or_else(
        || fail(ApwStatus::NullPointer, format!("{what} is null")),
        Ok,
    )
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().map_or_else(
        || fail(ApwStatus::NullPointer, format!("{what} is null")),
        Ok,
    )
}

unsafe fn text<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return fail(ApwStatus::NullPointer, format!("{what} is null"));
    }
    CStr::from_ptr(s)
        .to_str()
        .or_else(|_| fail(ApwStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

fn into_c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .or_else(|_| fail(ApwStatus::Internal, "string contains nul"))
}

/// Message for the most recent failure on this thread, or NULL after a success.
/// The pointer stays valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn apw_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string produced by this library. NULL is ignored.
///
/// # Safety
/// `s` must be NULL or a pointer returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn apw_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a string of `0`/`1` characters.
///
/// # Safety
/// `s` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn apw_bitseq_parse(
    s: *const c_char,
    out_seq: *mut *mut ApwBitSeq,
) -> ApwStatus {
    guard(|| {
        let slot = out(out_seq, "out")?;
        let seq: BitSeq = text(s, "input")?.parse()?;
        *slot = Box::into_raw(Box::new(ApwBitSeq(seq)));
        Ok(())
    })
}

/// # Safety
/// `seq` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn apw_bitseq_free(seq: *mut ApwBitSeq) {
    if !seq.is_null() {
        drop(Box::from_raw(seq));
    }
}

/// Length of the sequence; 0 for NULL.
///
/// # Safety
/// `seq` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn apw_bitseq_len(seq: *const ApwBitSeq) -> usize {
    seq.as_ref().map_or(0, |s| s.0.len())
}

/// # Safety
/// `seq` must be a live handle and `value` writable.
#[no_mangle]
pub unsafe extern "C" fn apw_bitseq_get(
    seq: *const ApwBitSeq,
    index: usize,
    value: *mut u8,
) -> ApwStatus {
    guard(|| {
        let s = &borrow(seq, "sequence")?.0;
        let v = out(value, "value")?;
        if index >= s.len() {
            return fail(
                ApwStatus::OutOfRange,
                format!("index {index} >= length {}", s.len()),
            );
        }
        *v = s.get(index);
        Ok(())
    })
}

/// Parses a string of `+`/`-` characters.
///
/// # Safety
/// `s` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn apw_signseq_parse(
    s: *const c_char,
    out_seq: *mut *mut ApwSignSeq,
) -> ApwStatus {
    guard(|| {
        let slot = out(out_seq, "out")?;
        let seq: SignSeq = text(s, "input")?.parse()?;
        *slot = Box::into_raw(Box::new(ApwSignSeq(seq)));
        Ok(())
    })
}

/// # Safety
/// `seq` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn apw_signseq_free(seq: *mut ApwSignSeq) {
    if !seq.is_null() {
        drop(Box::from_raw(seq));
    }
}

/// # Safety
/// `seq` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn apw_signseq_len(seq: *const ApwSignSeq) -> usize {
    seq.as_ref().map_or(0, |s| s.0.len())
}

/// Writes +1 or -1 to `value`.
///
/// # Safety
/// `seq` must be a live handle and `value` writable.
#[no_mangle]
pub unsafe extern "C" fn apw_signseq_get(
    seq: *const ApwSignSeq,
    index: usize,
    value: *mut i8,
) -> ApwStatus {
    guard(|| {
        let s = &borrow(seq, "sequence")?.0;
        let v = out(value, "value")?;
        if index >= s.len() {
            return fail(
                ApwStatus::OutOfRange,
                format!("index {index} >= length {}", s.len()),
            );
        }
        *v = s.get(index);
        Ok(())
    })
}

fn named(name: &str, len: usize) -> Result<Sequence, Failure> {
    let n: NamedSequence = name.parse()?;
    Ok(named_sequence(n, len))
}

/// Prefix of a named 0-1 sequence (`thue-morse-01`, `period-doubling`).
///
/// # Safety
/// `name` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn apw_named_bitseq(
    name: *const c_char,
    len: usize,
    out_seq: *mut *mut ApwBitSeq,
) -> ApwStatus {
    guard(|| {
        let slot = out(out_seq, "out")?;
        let name = text(name, "name")?;
        match named(name, len)?.into_bits() {
            Some(b) => *slot = Box::into_raw(Box::new(ApwBitSeq(b))),
            None => {
                return fail(
                    ApwStatus::InvalidArgument,
                    format!("{name} is a ±1 sequence"),
                )
            }
        }
        Ok(())
    })
}

/// Prefix of a named ±1 sequence (`thue-morse-pm`, `doubled-thue-morse`, `coded-morphism`).
///
/// # Safety
/// `name` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn apw_named_signseq(
    name: *const c_char,
    len: usize,
    out_seq: *mut *mut ApwSignSeq,
) -> ApwStatus {
    guard(|| {
        let slot = out(out_seq, "out")?;
        let name = text(name, "name")?;
        match named(name, len)?.into_signs() {
            Some(s) => *slot = Box::into_raw(Box::new(ApwSignSeq(s))),
            None => {
                return fail(
                    ApwStatus::InvalidArgument,
                    format!("{name} is a 0-1 sequence"),
                )
            }
        }
        Ok(())
    })
}

unsafe fn fixed(
    image1: *const c_char,
    image0: *const c_char,
    alphabet: Alphabet,
    len: usize,
) -> Result<Sequence, Failure> {
    let sub = Substitution::parse(alphabet, text(image1, "image1")?, text(image0, "image0")?)?;
    Ok(fixed_point(&sub, len)?)
}

/// Fixed point of `1 -> image1, 0 -> image0` starting from 1, e.g. `"10"`, `"11"`.
///
/// # Safety
/// Both images must be nul-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn apw_fixed_point_01(
    image1: *const c_char,
    image0: *const c_char,
    len: usize,
    out_seq: *mut *mut ApwBitSeq,
) -> ApwStatus {
    guard(|| {
        let slot = out(out_seq, "out")?;
        let bits = fixed(image1, image0, Alphabet::ZeroOne, len)?
            .into_bits()
            .ok_or_else(|| Failure(ApwStatus::Internal, "alphabet mismatch".into()))?;
        *slot = Box::into_raw(Box::new(ApwBitSeq(bits)));
        Ok(())
    })
}

/// Fixed point of `+1 -> image1, -1 -> image0` starting from +1, e.g. `"+-"`, `"-+"`.
///
/// # Safety
/// Both images must be nul-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn apw_fixed_point_pm(
    image1: *const c_char,
    image0: *const c_char,
    len: usize,
    out_seq: *mut *mut ApwSignSeq,
) -> ApwStatus {
    guard(|| {
        let slot = out(out_seq, "out")?;
        let signs = fixed(image1, image0, Alphabet::PlusMinus, len)?
            .into_signs()
            .ok_or_else(|| Failure(ApwStatus::Internal, "alphabet mismatch".into()))?;
        *slot = Box::into_raw(Box::new(ApwSignSeq(signs)));
        Ok(())
    })
}

/// Runs the 0-1 criterion on the whole prefix.
///
/// # Safety
/// `seq` must be a live handle and `result` writable.
#[no_mangle]
pub unsafe extern "C" fn apw_check_01(
    seq: *const ApwBitSeq,
    result: *mut ApwCriterion,
) -> ApwStatus {
    guard(|| {
        let r = check_01(&borrow(seq, "sequence")?.0)?;
        *out(result, "result")? = ApwCriterion::from(&r);
        Ok(())
    })
}

/// Runs the ±1 criterion on the whole prefix.
///
/// # Safety
/// `seq` must be a live handle and `result` writable.
#[no_mangle]
pub unsafe extern "C" fn apw_check_pm(
    seq: *const ApwSignSeq,
    result: *mut ApwCriterion,
) -> ApwStatus {
    guard(|| {
        let r = check_pm(&borrow(seq, "sequence")?.0)?;
        *out(result, "result")? = ApwCriterion::from(&r);
        Ok(())
    })
}

/// H_n mod 2 of a 0-1 sequence.
///
/// # Safety
/// `seq` must be a live handle and `value` writable.
#[no_mangle]
pub unsafe extern "C" fn apw_hankel_gf2(
    seq: *const ApwBitSeq,
    n: usize,
    value: *mut u8,
) -> ApwStatus {
    guard(|| {
        let h = hankel_gf2(&borrow(seq, "sequence")?.0, n)?;
        *out(value, "value")? = h;
        Ok(())
    })
}

/// Writes (H_n / 2^{n-1}) mod 2 for n = 1..=nmax into `bits[0..nmax]`.
/// With `exact` set the determinants are computed over the integers.
///
/// # Safety
/// `seq` must be a live handle and `bits` must have room for `nmax` bytes.
#[no_mangle]
pub unsafe extern "C" fn apw_pm_profile(
    seq: *const ApwSignSeq,
    nmax: usize,
    exact: bool,
    bits: *mut u8,
) -> ApwStatus {
    guard(|| {
        let s = &borrow(seq, "sequence")?.0;
        if bits.is_null() {
            return fail(ApwStatus::NullPointer, "bits is null");
        }
        let path = if exact {
            ProfilePath::Exact
        } else {
            ProfilePath::Fast
        };
        let prof = pm_profile(s, nmax, path)?;
        std::slice::from_raw_parts_mut(bits, nmax).copy_from_slice(prof.bits());
        Ok(())
    })
}

/// Number of type II substitutions of length `p` with an apwenian fixed point,
/// as a decimal string to be released with [`apw_string_free`].
///
/// # Safety
/// `value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn apw_count_apwenian(p: u64, value: *mut *mut c_char) -> ApwStatus {
    guard(|| {
        let slot = out(value, "value")?;
        *slot = into_c_string(count_apwenian(p)?.to_string())?;
        Ok(())
    })
}

/// Classifies odd `p >= 3`; with `enumerate` the admissible vectors are listed too.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn apw_classify(
    p: u64,
    enumerate: bool,
    out_report: *mut *mut ApwClassification,
) -> ApwStatus {
    guard(|| {
        let slot = out(out_report, "out")?;
        *slot = Box::into_raw(Box::new(ApwClassification(classify(p, enumerate)?)));
        Ok(())
    })
}

/// # Safety
/// `report` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn apw_classification_free(report: *mut ApwClassification) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Scalar fields of a classification. Any out-pointer may be NULL to skip it.
///
/// # Safety
/// `report` must be a live handle; non-NULL out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn apw_classification_summary(
    report: *const ApwClassification,
    mu: *mut u64,
    k: *mut u64,
    has_odd_cycle: *mut bool,
) -> ApwStatus {
    guard(|| {
        let r = &borrow(report, "report")?.0;
        if let Some(m) = mu.as_mut() {
            *m = r.mu;
        }
        if let Some(c) = k.as_mut() {
            *c = r.k;
        }
        if let Some(h) = has_odd_cycle.as_mut() {
            *h = r.has_odd_cycle;
        }
        Ok(())
    })
}

/// N_p of a classification as a decimal string.
///
/// # Safety
/// `report` must be a live handle and `value` writable.
#[no_mangle]
pub unsafe extern "C" fn apw_classification_count(
    report: *const ApwClassification,
    value: *mut *mut c_char,
) -> ApwStatus {
    guard(|| {
        let r = &borrow(report, "report")?.0;
        *out(value, "value")? = into_c_string(r.n_p.to_string())?;
        Ok(())
    })
}

/// Number of cycles of the permutation; 0 for NULL.
///
/// # Safety
/// `report` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn apw_classification_cycle_count(report: *const ApwClassification) -> usize {
    report.as_ref().map_or(0, |r| r.0.cycles.len())
}

/// Copies cycle `index` into `buf`. `len` receives the cycle length; when it exceeds
/// `cap` nothing is copied and `OutOfRange` is returned, so callers can size a buffer
/// by passing `cap = 0` first.
///
/// # Safety
/// `report` must be a live handle, `len` writable, and `buf` valid for `cap` elements.
#[no_mangle]
pub unsafe extern "C" fn apw_classification_cycle(
    report: *const ApwClassification,
    index: usize,
    buf: *mut u64,
    cap: usize,
    len: *mut usize,
) -> ApwStatus {
    guard(|| {
        let r = &borrow(report, "report")?.0;
        let cycle = r.cycles.get(index).map_or_else(
            || fail(ApwStatus::OutOfRange, format!("no cycle {index}")),
            Ok,
        )?;
        copy_out(cycle, buf, cap, len)
    })
}

/// Number of enumerated vectors; 0 when the report was built without enumeration.
///
/// # Safety
/// `report` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn apw_classification_vector_count(
    report: *const ApwClassification,
) -> usize {
    report
        .as_ref()
        .and_then(|r| r.0.vectors.as_ref())
        .map_or(0, Vec::len)
}

/// Copies vector `index` (entries +1/-1) into `buf`, with the same sizing rules as
/// [`apw_classification_cycle`].
///
/// # Safety
/// `report` must be a live handle, `len` writable, and `buf` valid for `cap` elements.
#[no_mangle]
pub unsafe extern "C" fn apw_classification_vector(
    report: *const ApwClassification,
    index: usize,
    buf: *mut i8,
    cap: usize,
    len: *mut usize,
) -> ApwStatus {
    guard(|| {
        let r = &borrow(report, "report")?.0;
        let v = r
            .vectors
            .as_ref()
            .and_then(|vs| vs.get(index))
            .map_or_else(
                || fail(ApwStatus::OutOfRange, format!("no vector {index}")),
                Ok,
            )?;
        copy_out(v, buf, cap, len)
    })
}

unsafe fn copy_out<T: Copy>(
    src: &[T],
    buf: *mut T,
    cap: usize,
    len: *mut usize,
) -> Result<(), Failure> {
    *out(len, "len")? = src.len();
    if src.len() > cap {
        return fail(
            ApwStatus::OutOfRange,
            format!("buffer holds {cap}, need {}", src.len()),
        );
    }
    if !src.is_empty() {
        if buf.is_null() {
            return fail(ApwStatus::NullPointer, "buf is null");
        }
        std::slice::from_raw_parts_mut(buf, src.len()).copy_from_slice(src);
    }
    Ok(())
}
