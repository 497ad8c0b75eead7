//! C ABI for `bloch-rspt`.
//!
//! Every fallible function returns a status code and writes results through
//! out-pointers. On failure the message is kept per thread and can be read
//! with [`bloch_last_error_message`]. Strings handed out by the library are
//! released with [`bloch_string_free`]; handles with their matching `_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bloch_rspt::diagram::{count_sequences, crossing_numbers, is_convex, DEFAULT_ENUMERATION_CAP};
use bloch_rspt::series::{bloch_series, diagrammatic_series, textbook_series, DiagrammaticOptions};
use bloch_rspt::{
    BlochSequence, CoefficientEngine, CorrectionSeries, Error, HamiltonianSpec, Method,
};

pub const BLOCH_OK: i32 = 0;
pub const BLOCH_ERR_NULL_POINTER: i32 = 1;
pub const BLOCH_ERR_INVALID_UTF8: i32 = 2;
pub const BLOCH_ERR_INVALID_ARGUMENT: i32 = 3;
pub const BLOCH_ERR_INVALID_SEQUENCE: i32 = 4;
pub const BLOCH_ERR_CAP_EXCEEDED: i32 = 5;
pub const BLOCH_ERR_NOT_HERMITIAN: i32 = 6;
pub const BLOCH_ERR_DEGENERATE_TARGET: i32 = 7;
pub const BLOCH_ERR_PARSE: i32 = 8;
pub const BLOCH_ERR_INCONSISTENT: i32 = 9;
pub const BLOCH_ERR_BUFFER_TOO_SMALL: i32 = 10;
pub const BLOCH_ERR_OUT_OF_RANGE: i32 = 11;
pub const BLOCH_ERR_PANIC: i32 = 12;

pub const BLOCH_METHOD_CLOSED: u32 = 0;
pub const BLOCH_METHOD_RECURRENCE: u32 = 1;

pub const BLOCH_ROUTE_DIAGRAMMATIC: u32 = 0;
pub const BLOCH_ROUTE_TEXTBOOK: u32 = 1;
pub const BLOCH_ROUTE_BLOCH: u32 = 2;

/// Memoising coefficient engine. Safe to share between threads.
pub struct BlochEngine(CoefficientEngine);

/// Validated Hamiltonian `H0 + eps V` with a chosen target level.
pub struct BlochHamiltonian(HamiltonianSpec);

/// Energy and eigenvector corrections up to some order.
pub struct BlochSeries(CorrectionSeries);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs were replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(err: &Error) -> i32 {
    match err {
        Error::CapExceeded { .. } => BLOCH_ERR_CAP_EXCEEDED,
        Error::InvalidSequence(_) | Error::InvalidCrossingNumbers(_) => BLOCH_ERR_INVALID_SEQUENCE,
        Error::InvalidOrder(_) | Error::EqualStrings | Error::DimensionMismatch(_) => {
            BLOCH_ERR_INVALID_ARGUMENT
        }
        Error::NotHermitian { .. } => BLOCH_ERR_NOT_HERMITIAN,
        Error::DegenerateTarget { .. } => BLOCH_ERR_DEGENERATE_TARGET,
        Error::Parse(_) | Error::Json(_) | Error::Io(_) => BLOCH_ERR_PARSE,
        Error::Inconsistent { .. } => BLOCH_ERR_INCONSISTENT,
    }
}

/// Failure carried back to the C caller.
struct Fail(i32, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(BLOCH_ERR_NULL_POINTER, format!("{what} is null"))
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            clear_error();
            BLOCH_OK
        }
        Ok(Err(Fail(code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("internal panic".into());
            BLOCH_ERR_PANIC
        }
    }
}

unsafe fn sequence(parts: *const u32, len: usize) -> Result<BlochSequence, Fail> {
    if parts.is_null() && len > 0 {
        return Err(null("parts"));
    }
    let slice = if len == 0 {
        &[][..]
    } else {
        std::slice::from_raw_parts(parts, len)
    };
    Ok(BlochSequence::new(slice.to_vec())?)
}

fn method(m: u32) -> Result<Method, Fail> {
    match m {
        BLOCH_METHOD_CLOSED => Ok(Method::Closed),
        BLOCH_METHOD_RECURRENCE => Ok(Method::Recurrence),
        _ => Err(Fail(
            BLOCH_ERR_INVALID_ARGUMENT,
            format!("unknown method {m}"),
        )),
    }
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s)
        .expect("library strings contain no NUL")
        .into_raw()
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn bloch_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the most recent failure on this thread, or NULL.
///
/// The pointer stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn bloch_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn bloch_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[no_mangle]
pub extern "C" fn bloch_engine_new() -> *mut BlochEngine {
    Box::into_raw(Box::new(BlochEngine(CoefficientEngine::new())))
}

/// # Safety
/// `engine` must come from [`bloch_engine_new`] or be NULL.
#[no_mangle]
pub unsafe extern "C" fn bloch_engine_free(engine: *mut BlochEngine) {
    if !engine.is_null() {
        drop(Box::from_raw(engine));
    }
}

/// Exact `c` and `e` of a sequence as "p/q" strings.
///
/// # Safety
/// `parts` must point to `len` values; the out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn bloch_coeff(
    engine: *const BlochEngine,
    parts: *const u32,
    len: usize,
    method_id: u32,
    out_c: *mut *mut c_char,
    out_e: *mut *mut c_char,
) -> i32 {
    guard(|| {
        let engine = engine.as_ref().ok_or_else(|| null("engine"))?;
        let s = sequence(parts, len)?;
        let m = method(method_id)?;
        if out_c.is_null() || out_e.is_null() {
            return Err(null("output"));
        }
        out_c.write(c_string(engine.0.c(&s, m).to_string()));
        out_e.write(c_string(engine.0.e(&s, m).to_string()));
        Ok(())
    })
}

/// `c` and `e` of a sequence rounded to double precision.
///
/// # Safety
/// As for [`bloch_coeff`].
#[no_mangle]
pub unsafe extern "C" fn bloch_coeff_f64(
    engine: *const BlochEngine,
    parts: *const u32,
    len: usize,
    method_id: u32,
    out_c: *mut f64,
    out_e: *mut f64,
) -> i32 {
    guard(|| {
        let engine = engine.as_ref().ok_or_else(|| null("engine"))?;
        let s = sequence(parts, len)?;
        let m = method(method_id)?;
        write(out_c, engine.0.c(&s, m).to_f64(), "out_c")?;
        write(out_e, engine.0.e(&s, m).to_f64(), "out_e")
    })
}

/// Flat crossing numbers `(N1, n1, ..., Nm, nm)`.
///
/// `out_len` always receives the required length. If `capacity` is smaller,
/// nothing is written to `out` and [`BLOCH_ERR_BUFFER_TOO_SMALL`] is returned.
///
/// # Safety
/// `out` must have room for `capacity` values; `out_len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bloch_crossing_numbers(
    parts: *const u32,
    len: usize,
    out: *mut u32,
    capacity: usize,
    out_len: *mut usize,
) -> i32 {
    guard(|| {
        let s = sequence(parts, len)?;
        let flat = crossing_numbers(&s).flat();
        write(out_len, flat.len(), "out_len")?;
        if capacity < flat.len() {
            return Err(Fail(
                BLOCH_ERR_BUFFER_TOO_SMALL,
                format!("need {} values, capacity is {capacity}", flat.len()),
            ));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        ptr::copy_nonoverlapping(flat.as_ptr(), out, flat.len());
        Ok(())
    })
}

/// # Safety
/// `parts` must point to `len` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bloch_is_convex(parts: *const u32, len: usize, out: *mut bool) -> i32 {
    guard(|| {
        let s = sequence(parts, len)?;
        write(out, is_convex(&s), "out")
    })
}

/// Number of Bloch sequences of order `n`, as a decimal string.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bloch_count_sequences(n: usize, out: *mut *mut c_char) -> i32 {
    guard(|| write(out, c_string(count_sequences(n).to_string()), "out"))
}

/// Parses and validates a Hamiltonian JSON document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bloch_hamiltonian_from_json(
    json: *const c_char,
    out: *mut *mut BlochHamiltonian,
) -> i32 {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| Fail(BLOCH_ERR_INVALID_UTF8, e.to_string()))?;
        let spec = HamiltonianSpec::from_json(text)?;
        write(out, Box::into_raw(Box::new(BlochHamiltonian(spec))), "out")
    })
}

/// # Safety
/// `h` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn bloch_hamiltonian_dim(h: *const BlochHamiltonian) -> usize {
    h.as_ref().map_or(0, |h| h.0.dim())
}

/// # Safety
/// `h` must come from [`bloch_hamiltonian_from_json`] or be NULL.
#[no_mangle]
pub unsafe extern "C" fn bloch_hamiltonian_free(h: *mut BlochHamiltonian) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Computes corrections through `order` along one route.
///
/// `engine` is only consulted by the diagrammatic route and may be NULL
/// otherwise. The enumeration cap is the library default.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bloch_series_new(
    h: *const BlochHamiltonian,
    engine: *const BlochEngine,
    route: u32,
    order: usize,
    grouping: bool,
    out: *mut *mut BlochSeries,
) -> i32 {
    guard(|| {
        let h = h.as_ref().ok_or_else(|| null("hamiltonian"))?;
        let series = match route {
            BLOCH_ROUTE_DIAGRAMMATIC => {
                let engine = engine.as_ref().ok_or_else(|| null("engine"))?;
                let opts = DiagrammaticOptions {
                    grouping,
                    method: Method::Closed,
                    cap: DEFAULT_ENUMERATION_CAP,
                };
                diagrammatic_series(&h.0, order, opts, &engine.0)?
            }
            BLOCH_ROUTE_TEXTBOOK => textbook_series(&h.0, order)?,
            BLOCH_ROUTE_BLOCH => bloch_series(&h.0, order, DEFAULT_ENUMERATION_CAP)?,
            _ => {
                return Err(Fail(
                    BLOCH_ERR_INVALID_ARGUMENT,
                    format!("unknown route {route}"),
                ))
            }
        };
        write(out, Box::into_raw(Box::new(BlochSeries(series))), "out")
    })
}

/// # Safety
/// `s` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn bloch_series_order(s: *const BlochSeries) -> usize {
    s.as_ref().map_or(0, |s| s.0.order)
}

/// Energy correction `lambda_n`, `0 <= n <= order`.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bloch_series_energy(
    s: *const BlochSeries,
    n: usize,
    out: *mut f64,
) -> i32 {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| null("series"))?;
        let value = *s.0.energies.get(n).ok_or_else(|| {
            Fail(
                BLOCH_ERR_OUT_OF_RANGE,
                format!("order {n} exceeds {}", s.0.order),
            )
        })?;
        write(out, value, "out")
    })
}

/// Vector correction `|lambda_n>` split into real and imaginary parts.
///
/// # Safety
/// `re` and `im` must each have room for `len` values, and `len` must equal
/// the Hamiltonian dimension.
#[no_mangle]
pub unsafe extern "C" fn bloch_series_vector(
    s: *const BlochSeries,
    n: usize,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> i32 {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| null("series"))?;
        let v = s.0.vectors.get(n).ok_or_else(|| {
            Fail(
                BLOCH_ERR_OUT_OF_RANGE,
                format!("order {n} exceeds {}", s.0.order),
            )
        })?;
        if len != v.len() {
            return Err(Fail(
                BLOCH_ERR_BUFFER_TOO_SMALL,
                format!("vector has {} components, buffer has {len}", v.len()),
            ));
        }
        if re.is_null() || im.is_null() {
            return Err(null("output"));
        }
        for (i, z) in v.iter().enumerate() {
            re.add(i).write(z.re);
            im.add(i).write(z.im);
        }
        Ok(())
    })
}

/// # Safety
/// `s` must come from [`bloch_series_new`] or be NULL.
#[no_mangle]
pub unsafe extern "C" fn bloch_series_free(s: *mut BlochSeries) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}
