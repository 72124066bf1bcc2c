//! C ABI over `normgrowth`.
//!
//! Matrices cross the boundary as opaque `NgMatrix` handles. Every fallible
//! call returns an `NgStatus`; on failure a message is available from
//! `ng_last_error` on the same thread until the next call. Strings handed
//! out by the library are NUL-terminated UTF-8 and must be released with
//! `ng_string_free`.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use normgrowth::classifier::{self, GrowthClass};
use normgrowth::equivalence;
use normgrowth::matrix::{self, BitMatrix};
use normgrowth::symbolic;
use normgrowth::verify::{Claim, Harness};
use normgrowth::Error;

/// Opaque matrix handle.
pub struct NgMatrix {
    inner: BitMatrix,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NgStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    Parse = 2,
    /// The matrix violates a condition the operation requires (P1, P2,
    /// bounded growth, size limits).
    Precondition = 3,
    OutOfRange = 4,
    /// A verification run found counterexamples; the report is still
    /// written.
    Counterexample = 5,
    InvalidUtf8 = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NgGrowthClass {
    Exponential = 0,
    Polynomial = 1,
    Bounded = 2,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn status_of(e: &Error) -> NgStatus {
    match e {
        Error::Parse(_) => NgStatus::Parse,
        e if e.is_precondition() => NgStatus::Precondition,
        _ => NgStatus::OutOfRange,
    }
}

/// Runs `f`, turning library errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<NgStatus, (NgStatus, String)>) -> NgStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            NgStatus::Panic
        }
    }
}

trait Lift<T> {
    fn lift(self) -> Result<T, (NgStatus, String)>;
}

impl<T> Lift<T> for normgrowth::Result<T> {
    fn lift(self) -> Result<T, (NgStatus, String)> {
        self.map_err(|e| (status_of(&e), e.to_string()))
    }
}

unsafe fn matrix_ref<'a>(m: *const NgMatrix) -> Result<&'a BitMatrix, (NgStatus, String)> {
    m.as_ref().map(|h| &h.inner).ok_or((NgStatus::NullArgument, "null matrix handle".into()))
}

fn non_null<T>(p: *mut T, what: &str) -> Result<(), (NgStatus, String)> {
    if p.is_null() {
        Err((NgStatus::NullArgument, format!("null {what} pointer")))
    } else {
        Ok(())
    }
}

unsafe fn input_str<'a>(s: *const c_char) -> Result<&'a str, (NgStatus, String)> {
    if s.is_null() {
        return Err((NgStatus::NullArgument, "null string".into()));
    }
    CStr::from_ptr(s).to_str().map_err(|_| (NgStatus::InvalidUtf8, "string is not UTF-8".into()))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), (NgStatus, String)> {
    non_null(out, "output")?;
    let c = CString::new(s).map_err(|_| (NgStatus::Panic, "interior NUL in output".into()))?;
    *out = c.into_raw();
    Ok(())
}

fn json(v: &impl serde::Serialize) -> String {
    serde_json::to_string(v).expect("values serialize")
}

fn boxed(m: BitMatrix) -> *mut NgMatrix {
    Box::into_raw(Box::new(NgMatrix { inner: m }))
}

/// Message for the last failed call on this thread, or null. Owned by the
/// library; do not free.
#[no_mangle]
pub extern "C" fn ng_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ng_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `"110;010;001"` (rows separated by `;` or newlines).
#[no_mangle]
pub unsafe extern "C" fn ng_matrix_parse(text: *const c_char, out: *mut *mut NgMatrix) -> NgStatus {
    guard(|| {
        non_null(out, "output")?;
        let m = BitMatrix::parse(input_str(text)?).lift()?;
        *out = boxed(m);
        Ok(NgStatus::Ok)
    })
}

/// Builds a matrix from `size` row masks; bit `j` of `rows[i]` is entry
/// `(i + 1, j + 1)`.
#[no_mangle]
pub unsafe extern "C" fn ng_matrix_from_rows(
    size: usize,
    rows: *const u64,
    out: *mut *mut NgMatrix,
) -> NgStatus {
    guard(|| {
        non_null(out, "output")?;
        if rows.is_null() {
            return Err((NgStatus::NullArgument, "null rows pointer".into()));
        }
        let rows = std::slice::from_raw_parts(rows, size).to_vec();
        *out = boxed(BitMatrix::new(size, rows).lift()?);
        Ok(NgStatus::Ok)
    })
}

#[no_mangle]
pub unsafe extern "C" fn ng_matrix_free(m: *mut NgMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Side length, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn ng_matrix_size(m: *const NgMatrix) -> usize {
    m.as_ref().map_or(0, |h| h.inner.size())
}

#[no_mangle]
pub unsafe extern "C" fn ng_matrix_to_text(m: *const NgMatrix, out: *mut *mut c_char) -> NgStatus {
    guard(|| {
        write_string(out, matrix_ref(m)?.to_text())?;
        Ok(NgStatus::Ok)
    })
}

#[no_mangle]
pub unsafe extern "C" fn ng_satisfies_p1(m: *const NgMatrix, out: *mut bool) -> NgStatus {
    guard(|| {
        non_null(out, "output")?;
        *out = matrix::satisfies_p1(matrix_ref(m)?);
        Ok(NgStatus::Ok)
    })
}

#[no_mangle]
pub unsafe extern "C" fn ng_satisfies_p2(m: *const NgMatrix, out: *mut bool) -> NgStatus {
    guard(|| {
        non_null(out, "output")?;
        *out = normgrowth::digraph::satisfies_p2(matrix_ref(m)?);
        Ok(NgStatus::Ok)
    })
}

#[no_mangle]
pub unsafe extern "C" fn ng_classify(m: *const NgMatrix, out: *mut NgGrowthClass) -> NgStatus {
    guard(|| {
        non_null(out, "output")?;
        *out = match classifier::classify(matrix_ref(m)?).lift()? {
            GrowthClass::Exponential { .. } => NgGrowthClass::Exponential,
            GrowthClass::Polynomial { .. } => NgGrowthClass::Polynomial,
            GrowthClass::Bounded { .. } => NgGrowthClass::Bounded,
        };
        Ok(NgStatus::Ok)
    })
}

/// Full classification report as JSON (integers as decimal strings).
#[no_mangle]
pub unsafe extern "C" fn ng_classify_json(m: *const NgMatrix, out: *mut *mut c_char) -> NgStatus {
    guard(|| {
        let a = classifier::analyze(matrix_ref(m)?).lift()?;
        write_string(out, json(&a))?;
        Ok(NgStatus::Ok)
    })
}

/// `["‖M^1‖", ..., "‖M^n‖"]` as a JSON array of decimal strings.
#[no_mangle]
pub unsafe extern "C" fn ng_norms_json(m: *const NgMatrix, n: usize, out: *mut *mut c_char) -> NgStatus {
    guard(|| {
        let norms = normgrowth::big_strings(&matrix::norm_sequence(matrix_ref(m)?, n));
        write_string(out, json(&norms))?;
        Ok(NgStatus::Ok)
    })
}

/// Supremum of the norm sequence as a decimal string; bounded class only.
#[no_mangle]
pub unsafe extern "C" fn ng_sup_norm(m: *const NgMatrix, out: *mut *mut c_char) -> NgStatus {
    guard(|| {
        let s = classifier::sup_norm(matrix_ref(m)?).lift()?;
        write_string(out, s.to_string())?;
        Ok(NgStatus::Ok)
    })
}

/// Number of admissible infinite words; bounded class only.
#[no_mangle]
pub unsafe extern "C" fn ng_count_infinite(m: *const NgMatrix, out: *mut u64) -> NgStatus {
    guard(|| {
        non_null(out, "output")?;
        *out = symbolic::count_infinite(matrix_ref(m)?).lift()?;
        Ok(NgStatus::Ok)
    })
}

/// Canonical representative. When `witness` is non-null it receives the
/// `size` images (1-based) of the permutation mapping `m` onto it.
#[no_mangle]
pub unsafe extern "C" fn ng_canonical_form(
    m: *const NgMatrix,
    out: *mut *mut NgMatrix,
    witness: *mut usize,
) -> NgStatus {
    guard(|| {
        non_null(out, "output")?;
        let c = equivalence::canonical_form(matrix_ref(m)?).lift()?;
        if !witness.is_null() {
            for (k, img) in c.witness.images().into_iter().enumerate() {
                *witness.add(k) = img;
            }
        }
        *out = boxed(c.matrix);
        Ok(NgStatus::Ok)
    })
}

#[no_mangle]
pub unsafe extern "C" fn ng_are_equivalent(
    a: *const NgMatrix,
    b: *const NgMatrix,
    out: *mut bool,
) -> NgStatus {
    guard(|| {
        non_null(out, "output")?;
        *out = equivalence::are_equivalent(matrix_ref(a)?, matrix_ref(b)?).lift()?;
        Ok(NgStatus::Ok)
    })
}

#[no_mangle]
pub unsafe extern "C" fn ng_is_sup_extremal(m: *const NgMatrix, out: *mut bool) -> NgStatus {
    guard(|| {
        non_null(out, "output")?;
        *out = classifier::is_sup_extremal(matrix_ref(m)?).lift()?;
        Ok(NgStatus::Ok)
    })
}

#[no_mangle]
pub unsafe extern "C" fn ng_is_binomial_extremal(m: *const NgMatrix, out: *mut bool) -> NgStatus {
    guard(|| {
        non_null(out, "output")?;
        *out = classifier::is_binomial_extremal(matrix_ref(m)?).lift()?;
        Ok(NgStatus::Ok)
    })
}

/// Spectral radius; `error_bound` may be null.
#[no_mangle]
pub unsafe extern "C" fn ng_spectral_radius(
    m: *const NgMatrix,
    value: *mut f64,
    error_bound: *mut f64,
) -> NgStatus {
    guard(|| {
        non_null(value, "value")?;
        let r = classifier::spectral_radius(matrix_ref(m)?);
        *value = r.value;
        if !error_bound.is_null() {
            *error_bound = r.error_bound;
        }
        Ok(NgStatus::Ok)
    })
}

/// Dimension of the infinite word space; `error_bound` may be null.
#[no_mangle]
pub unsafe extern "C" fn ng_dimension(
    m: *const NgMatrix,
    value: *mut f64,
    error_bound: *mut f64,
) -> NgStatus {
    guard(|| {
        non_null(value, "value")?;
        let d = classifier::dimension(matrix_ref(m)?);
        *value = d.value;
        if !error_bound.is_null() {
            *error_bound = d.error_bound;
        }
        Ok(NgStatus::Ok)
    })
}

/// Runs one verification claim and writes its JSON report. `b` and
/// `horizon` of 0 select the claim defaults. Returns
/// `NG_STATUS_COUNTEREXAMPLE` when the report is not clean.
#[no_mangle]
pub unsafe extern "C" fn ng_verify_json(
    claim: *const c_char,
    b: usize,
    horizon: usize,
    out: *mut *mut c_char,
) -> NgStatus {
    guard(|| {
        non_null(out, "output")?;
        let claim: Claim = input_str(claim)?.parse().lift()?;
        let pick = |v: usize| (v != 0).then_some(v);
        let report = Harness::default().run(claim, pick(b), pick(horizon)).lift()?;
        let clean = report.is_clean();
        write_string(out, json(&report))?;
        Ok(if clean { NgStatus::Ok } else { NgStatus::Counterexample })
    })
}
