//! C ABI for powerweight.
//!
//! Every fallible function returns a [`PwStatus`] and writes its result
//! through an out-pointer. On failure, [`pw_last_error`] returns a message
//! for the calling thread. Indexes and result sets are opaque handles that
//! must be released with their matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use powerweight::{
    analysis, bm, engine, BmParams, DocStats, Error, Index, LengthRatio, PowerParams, QueryResult,
    SchemeId,
};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PwStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Domain = 3,
    Parse = 4,
    Format = 5,
    DuplicateId = 6,
    EmptyCorpus = 7,
    Io = 8,
    IndexFormat = 9,
    OutOfRange = 10,
    Panic = 11,
}

/// Opaque inverted index.
pub struct PwIndex(Index);

/// Opaque ranked result list.
pub struct PwResults(QueryResult);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> PwStatus {
    match e {
        Error::Domain(_) => PwStatus::Domain,
        Error::Format { .. } => PwStatus::Format,
        Error::DuplicateId(_) => PwStatus::DuplicateId,
        Error::EmptyCorpus => PwStatus::EmptyCorpus,
        Error::Parse { .. } => PwStatus::Parse,
        Error::IndexFormat(_) | Error::Json(_) => PwStatus::IndexFormat,
        Error::Io(_) => PwStatus::Io,
    }
}

impl From<Error> for PwStatus {
    fn from(e: Error) -> Self {
        let status = status_of(&e);
        set_error(e.to_string());
        status
    }
}

fn fail(status: PwStatus, msg: &str) -> PwStatus {
    set_error(msg.to_string());
    status
}

fn guard(f: impl FnOnce() -> Result<(), PwStatus>) -> PwStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PwStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => fail(PwStatus::Panic, "internal panic"),
    }
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), PwStatus> {
    if out.is_null() {
        return Err(fail(PwStatus::NullPointer, "null output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, PwStatus> {
    if s.is_null() {
        return Err(fail(PwStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(PwStatus::InvalidUtf8, "string is not valid UTF-8"))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, PwStatus> {
    p.as_ref().ok_or_else(|| fail(PwStatus::NullPointer, "null handle"))
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pw_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pw_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `out` must be a valid pointer to a `double`.
#[no_mangle]
pub unsafe extern "C" fn pw_tukey_transform(y: f64, lambda1: f64, lambda2: f64, out: *mut f64) -> PwStatus {
    guard(|| write_out(out, powerweight::tukey_transform(y, PowerParams::new(lambda1, lambda2))?))
}

/// # Safety
/// `out` must be a valid pointer to a `double`.
#[no_mangle]
pub unsafe extern "C" fn pw_boxcox_transform(y: f64, lambda1: f64, lambda2: f64, out: *mut f64) -> PwStatus {
    guard(|| write_out(out, powerweight::boxcox_transform(y, PowerParams::new(lambda1, lambda2))?))
}

/// Local weight of a term with frequency `f` under the scheme named by
/// `scheme` (e.g. `"logn"`, `"boxcox:-1:1"`, `"bm25ir:1.2:0.75"`).
///
/// # Safety
/// `scheme` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pw_local_weight(
    scheme: *const c_char,
    f: u64,
    doc_length: u64,
    ave_doc_length: f64,
    ave_term_freq: f64,
    out: *mut f64,
) -> PwStatus {
    guard(|| {
        let scheme: SchemeId = read_str(scheme)?.parse()?;
        let stats = DocStats::new(doc_length, ave_doc_length, ave_term_freq)?;
        write_out(out, powerweight::local_weight(&scheme, f, &stats)?)
    })
}

/// # Safety
/// `out` must be a valid pointer to a `double`.
#[no_mangle]
pub unsafe extern "C" fn pw_attenuation_k(k1: f64, b: f64, ratio: f64, out: *mut f64) -> PwStatus {
    guard(|| {
        let params = BmParams::new(k1, b, true)?;
        write_out(out, bm::attenuation_k(&params, LengthRatio::new(ratio)?)?)
    })
}

/// BM25 local weight; `b = 1` gives BM11, `b = 0` gives BM15.
///
/// # Safety
/// `out` must be a valid pointer to a `double`.
#[no_mangle]
pub unsafe extern "C" fn pw_bm_local(f: u64, k1: f64, b: f64, ratio: f64, apply_scale: bool, out: *mut f64) -> PwStatus {
    guard(|| {
        let params = BmParams::new(k1, b, apply_scale)?;
        write_out(out, bm::bm_local(f, &params, LengthRatio::new(ratio)?)?)
    })
}

/// # Safety
/// `out` must be a valid pointer to a `double`.
#[no_mangle]
pub unsafe extern "C" fn pw_bm25ir_local(
    f: u64,
    k1: f64,
    b: f64,
    ratio: f64,
    apply_scale: bool,
    out: *mut f64,
) -> PwStatus {
    guard(|| {
        let params = BmParams::new(k1, b, apply_scale)?;
        write_out(out, bm::bm25ir_local(f, &params, LengthRatio::new(ratio)?)?)
    })
}

/// # Safety
/// `out` must be a valid pointer to a `double`.
#[no_mangle]
pub unsafe extern "C" fn pw_critical_k(tolerance: f64, out: *mut f64) -> PwStatus {
    guard(|| write_out(out, analysis::critical_k(tolerance)?))
}

/// Occurrence index carrying the largest increment of `1 - 1/(f + k)`.
///
/// # Safety
/// `out` must be a valid pointer to a `uint64_t`.
#[no_mangle]
pub unsafe extern "C" fn pw_increment_argmax(k: f64, n_max: u64, out: *mut u64) -> PwStatus {
    guard(|| write_out(out, analysis::increment_report(k, n_max)?.argmax_n))
}

/// # Safety
/// `a` and `b` must each point to `len` readable `uint64_t` values.
#[no_mangle]
pub unsafe extern "C" fn pw_kendall_tau(a: *const u64, b: *const u64, len: usize, out: *mut f64) -> PwStatus {
    guard(|| {
        if a.is_null() || b.is_null() {
            return Err(fail(PwStatus::NullPointer, "null ranking"));
        }
        let (a, b) = (std::slice::from_raw_parts(a, len), std::slice::from_raw_parts(b, len));
        write_out(out, engine::kendall_tau(a, b)?)
    })
}

fn boxed_index(index: Index, out: *mut *mut PwIndex) -> Result<(), PwStatus> {
    unsafe { write_out(out, Box::into_raw(Box::new(PwIndex(index)))) }
}

/// Build an index from JSON lines (`{"id": <int>, "text": <string>}`).
///
/// # Safety
/// `jsonl` must be a NUL-terminated string; `out` a valid pointer that
/// receives a handle to free with [`pw_index_free`].
#[no_mangle]
pub unsafe extern "C" fn pw_index_from_jsonl(jsonl: *const c_char, out: *mut *mut PwIndex) -> PwStatus {
    guard(|| {
        let text = read_str(jsonl)?;
        boxed_index(engine::ingest_corpus(text.as_bytes())?, out)
    })
}

/// # Safety
/// `path` must be a NUL-terminated string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pw_index_load(path: *const c_char, out: *mut *mut PwIndex) -> PwStatus {
    guard(|| boxed_index(Index::load(Path::new(read_str(path)?))?, out))
}

/// # Safety
/// `index` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn pw_index_save(index: *const PwIndex, path: *const c_char) -> PwStatus {
    guard(|| Ok(handle(index)?.0.save(Path::new(read_str(path)?))?))
}

/// Number of indexed documents, or 0 for a NULL handle.
///
/// # Safety
/// `index` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pw_index_num_docs(index: *const PwIndex) -> usize {
    index.as_ref().map_or(0, |i| i.0.num_docs())
}

/// # Safety
/// `index` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pw_index_avedl(index: *const PwIndex) -> f64 {
    index.as_ref().map_or(f64::NAN, |i| i.0.avedl())
}

/// # Safety
/// `index` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pw_index_free(index: *mut PwIndex) {
    if !index.is_null() {
        drop(Box::from_raw(index));
    }
}

/// Rank documents for `query` under `scheme`, keeping at most `top_k`.
///
/// # Safety
/// `index` must be a live handle, `query` and `scheme` NUL-terminated
/// strings, and `out` a valid pointer that receives a handle to free with
/// [`pw_results_free`].
#[no_mangle]
pub unsafe extern "C" fn pw_rank(
    index: *const PwIndex,
    query: *const c_char,
    scheme: *const c_char,
    top_k: usize,
    out: *mut *mut PwResults,
) -> PwStatus {
    guard(|| {
        let index = handle(index)?;
        let scheme: SchemeId = read_str(scheme)?.parse()?;
        let result = engine::rank_query(read_str(query)?, &index.0, &scheme, top_k)?;
        write_out(out, Box::into_raw(Box::new(PwResults(result))))
    })
}

/// # Safety
/// `results` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pw_results_len(results: *const PwResults) -> usize {
    results.as_ref().map_or(0, |r| r.0.hits.len())
}

/// Read the hit at zero-based `position`.
///
/// # Safety
/// `results` must be a live handle; `doc_id` and `score` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn pw_results_get(
    results: *const PwResults,
    position: usize,
    doc_id: *mut u64,
    score: *mut f64,
) -> PwStatus {
    guard(|| {
        let hit = *handle(results)?
            .0
            .hits
            .get(position)
            .ok_or_else(|| fail(PwStatus::OutOfRange, "position past end of results"))?;
        write_out(doc_id, hit.doc_id)?;
        write_out(score, hit.score)
    })
}

/// # Safety
/// `results` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pw_results_free(results: *mut PwResults) {
    if !results.is_null() {
        drop(Box::from_raw(results));
    }
}
