//! C ABI over `chanvar`.
//!
//! States and channels live behind opaque handles created by the
//! `chanvar_*_new_*` / `chanvar_*_load` functions and released with the
//! matching `_free`. Every fallible call returns a [`ChanvarStatus`]; on
//! failure the message is available from [`chanvar_last_error_message`]
//! until the next failing call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use chanvar::infotheory::{BoundReport, InfoSummary};
use chanvar::linalg::{c64, ComplexMatrix};
use chanvar::{schema, uncertainty, AlphaBeta, DensityMatrix, Error, KrausChannel};

/// Status codes. Input errors use the same numbers as the CLI exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChanvarStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    Numerical = 3,
    Io = 4,
    Panic = 5,
}

/// Opaque density matrix.
pub struct ChanvarState(DensityMatrix);

/// Opaque trace-preserving channel.
pub struct ChanvarChannel(KrausChannel);

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct ChanvarTriple {
    pub total: f64,
    pub quantum: f64,
    pub classical: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct ChanvarBound {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub satisfied: bool,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct ChanvarBounds {
    pub total: f64,
    pub entanglement_fidelity: f64,
    pub entropy_exchange: f64,
    pub coherent_information: f64,
    pub fidelity_tradeoff: ChanvarBound,
    pub entropy_exchange_bound: ChanvarBound,
    pub coherent_information_bound: ChanvarBound,
    pub quantum_fano: ChanvarBound,
}

impl From<BoundReport> for ChanvarBound {
    fn from(r: BoundReport) -> Self {
        ChanvarBound {
            lhs: r.lhs,
            rhs: r.rhs,
            slack: r.slack,
            satisfied: r.satisfied,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> ChanvarStatus {
    match e.exit_code() {
        2 => ChanvarStatus::InvalidInput,
        4 => ChanvarStatus::Io,
        _ => ChanvarStatus::Numerical,
    }
}

enum Failure {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

/// Runs `f`, converting errors and panics into a status plus message.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> ChanvarStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ChanvarStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("{what} is null"));
            ChanvarStatus::NullPointer
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            ChanvarStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::Lib(Error::Schema(format!("{what} is not valid UTF-8"))))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

fn parse_json(text: &str) -> Result<serde_json::Value, Failure> {
    serde_json::from_str(text).map_err(|e| Failure::Lib(Error::Schema(e.to_string())))
}

/// Row-major `dim x dim` matrix from split real and imaginary parts; `im`
/// may be null for a real matrix.
unsafe fn matrix_arg(dim: usize, re: *const f64, im: *const f64) -> Result<ComplexMatrix, Failure> {
    if re.is_null() {
        return Err(Failure::Null("re"));
    }
    let n = dim * dim;
    let re = std::slice::from_raw_parts(re, n);
    let im = (!im.is_null()).then(|| std::slice::from_raw_parts(im, n));
    let entries: Vec<_> = (0..n).map(|k| c64(re[k], im.map_or(0.0, |v| v[k]))).collect();
    Ok(ComplexMatrix::from_row_major(dim, &entries)?)
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null("out"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

/// Message of the last failing call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn chanvar_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Loads a state from a JSON file path or a `preset:NAME[:k=v,...]` string.
///
/// # Safety
/// `source` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn chanvar_state_load(source: *const c_char, out: *mut *mut ChanvarState) -> ChanvarStatus {
    guard(|| put(out, ChanvarState(schema::load_state(str_arg(source, "source")?)?)))
}

/// Parses a state from a JSON document.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn chanvar_state_from_json(json: *const c_char, out: *mut *mut ChanvarState) -> ChanvarStatus {
    guard(|| {
        let v = parse_json(str_arg(json, "json")?)?;
        put(out, ChanvarState(schema::state_from_json(&v)?))
    })
}

/// Builds a state from a row-major `dim x dim` matrix.
///
/// # Safety
/// `re` (and `im` unless null) must point to `dim * dim` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn chanvar_state_from_matrix(
    dim: usize,
    re: *const f64,
    im: *const f64,
    out: *mut *mut ChanvarState,
) -> ChanvarStatus {
    guard(|| {
        let m = matrix_arg(dim, re, im)?;
        put(out, ChanvarState(DensityMatrix::new(m)?))
    })
}

/// Dimension of the state, 0 for a null handle.
///
/// # Safety
/// `state` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn chanvar_state_dim(state: *const ChanvarState) -> usize {
    state.as_ref().map_or(0, |s| s.0.dim())
}

/// # Safety
/// `state` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn chanvar_state_free(state: *mut ChanvarState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Loads a channel from a JSON file path or a `preset:NAME[:k=v,...]` string.
///
/// # Safety
/// `source` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn chanvar_channel_load(source: *const c_char, out: *mut *mut ChanvarChannel) -> ChanvarStatus {
    guard(|| put(out, ChanvarChannel(schema::load_channel(str_arg(source, "source")?)?)))
}

/// Parses a channel from a JSON document.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn chanvar_channel_from_json(
    json: *const c_char,
    out: *mut *mut ChanvarChannel,
) -> ChanvarStatus {
    guard(|| {
        let v = parse_json(str_arg(json, "json")?)?;
        put(out, ChanvarChannel(schema::channel_from_json(&v)?))
    })
}

/// Builds a channel from `count` row-major `dim x dim` Kraus operators
/// stored back to back.
///
/// # Safety
/// `re` (and `im` unless null) must point to `count * dim * dim` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn chanvar_channel_from_kraus(
    dim: usize,
    count: usize,
    re: *const f64,
    im: *const f64,
    out: *mut *mut ChanvarChannel,
) -> ChanvarStatus {
    guard(|| {
        let n = dim * dim;
        let ops = (0..count)
            .map(|k| matrix_arg(dim, re.wrapping_add(k * n), if im.is_null() { im } else { im.wrapping_add(k * n) }))
            .collect::<Result<Vec<_>, _>>()?;
        put(out, ChanvarChannel(KrausChannel::new(ops)?))
    })
}

/// Input dimension of the channel, 0 for a null handle.
///
/// # Safety
/// `channel` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn chanvar_channel_dim(channel: *const ChanvarChannel) -> usize {
    channel.as_ref().map_or(0, |c| c.0.dim())
}

/// # Safety
/// `channel` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn chanvar_channel_free(channel: *mut ChanvarChannel) {
    if !channel.is_null() {
        drop(Box::from_raw(channel));
    }
}

/// Total, quantum and classical uncertainty of `channel` in `state`.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn chanvar_uncertainty(
    state: *const ChanvarState,
    channel: *const ChanvarChannel,
    alpha: f64,
    beta: f64,
    out: *mut ChanvarTriple,
) -> ChanvarStatus {
    guard(|| {
        let (rho, phi) = (ref_arg(state, "state")?, ref_arg(channel, "channel")?);
        let out = out.as_mut().ok_or(Failure::Null("out"))?;
        let t = uncertainty::uncertainty_triple(&rho.0, &phi.0, AlphaBeta::new(alpha, beta)?)?;
        *out = ChanvarTriple {
            total: t.total_v,
            quantum: t.quantum_q,
            classical: t.classical_c,
        };
        Ok(())
    })
}

/// Information quantities and the four bounds relating them to the uncertainty.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn chanvar_bounds(
    state: *const ChanvarState,
    channel: *const ChanvarChannel,
    alpha: f64,
    beta: f64,
    out: *mut ChanvarBounds,
) -> ChanvarStatus {
    guard(|| {
        let (rho, phi) = (ref_arg(state, "state")?, ref_arg(channel, "channel")?);
        let out = out.as_mut().ok_or(Failure::Null("out"))?;
        let s = InfoSummary::compute(&rho.0, &phi.0, AlphaBeta::new(alpha, beta)?)?;
        *out = ChanvarBounds {
            total: s.total_v,
            entanglement_fidelity: s.fe,
            entropy_exchange: s.entropy_exchange,
            coherent_information: s.coherent_information,
            fidelity_tradeoff: s.fidelity_tradeoff().into(),
            entropy_exchange_bound: s.entropy_exchange_bound().into(),
            coherent_information_bound: s.coherent_information_bound().into(),
            quantum_fano: s.quantum_fano().into(),
        };
        Ok(())
    })
}
