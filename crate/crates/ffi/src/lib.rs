//! C ABI over `isac-region`.
//!
//! Networks and traced regions are opaque handles owned by the library and
//! released with the matching `*_free` function. Every fallible call returns
//! an [`IsacStatus`] and writes results through out-pointers; on failure the
//! message is available from [`isac_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use isac_region::region::{
    approx_free_sensing, free_communication, has_avoiding_path, max_sensing, max_throughput,
    max_throughput_at_sensing, trace_region, trace_region_default, RegionBoundary, RegionError,
    SegmentKind,
};
use isac_region::{load_network, NetworkError, ValidatedNetwork};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsacStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    ValidationError = 4,
    OutOfRange = 5,
    SolverError = 6,
    InternalError = 7,
    IndexOutOfBounds = 8,
    InvalidArgument = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsacSegmentKind {
    FreeCommunication = 0,
    Tradeoff = 1,
    FreeSensing = 2,
}

/// One edge of a traced boundary. `k` is 0 when no integer gradient was
/// matched.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsacSegment {
    pub start: usize,
    pub end: usize,
    pub kind: IsacSegmentKind,
    /// `ds/df`; `-inf` on a free-sensing edge.
    pub ds_df: f64,
    pub k: u32,
}

/// Opaque validated network.
pub struct IsacNetwork {
    inner: ValidatedNetwork,
}

/// Opaque traced region boundary.
pub struct IsacRegion {
    inner: RegionBoundary,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

struct Failure(IsacStatus, String);

impl From<RegionError> for Failure {
    fn from(err: RegionError) -> Self {
        let status = match err {
            RegionError::TargetOutOfRange { .. } => IsacStatus::OutOfRange,
            RegionError::InvalidParameter(_) => IsacStatus::InvalidArgument,
            RegionError::Solver(_) => IsacStatus::SolverError,
            _ => IsacStatus::InternalError,
        };
        Failure(status, err.to_string())
    }
}

impl From<NetworkError> for Failure {
    fn from(err: NetworkError) -> Self {
        let status = match err {
            NetworkError::Parse { .. } => IsacStatus::ParseError,
            _ => IsacStatus::ValidationError,
        };
        Failure(status, err.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(IsacStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, records any failure or panic and converts it to a status.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> IsacStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error("");
            IsacStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_last_error(&message);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            IsacStatus::InternalError
        }
    }
}

unsafe fn network<'a>(ptr: *const IsacNetwork) -> Result<&'a ValidatedNetwork, Failure> {
    ptr.as_ref()
        .map(|n| &n.inner)
        .ok_or_else(|| null("network"))
}

unsafe fn region<'a>(ptr: *const IsacRegion) -> Result<&'a RegionBoundary, Failure> {
    ptr.as_ref().map(|r| &r.inner).ok_or_else(|| null("region"))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

/// Message of the last failed call on this thread, empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn isac_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Static, NUL-terminated name of a status code.
#[no_mangle]
pub extern "C" fn isac_status_name(status: IsacStatus) -> *const c_char {
    let name: &'static CStr = match status {
        IsacStatus::Ok => c"ok",
        IsacStatus::NullPointer => c"null pointer",
        IsacStatus::InvalidUtf8 => c"invalid UTF-8",
        IsacStatus::ParseError => c"parse error",
        IsacStatus::ValidationError => c"validation error",
        IsacStatus::OutOfRange => c"out of range",
        IsacStatus::SolverError => c"solver error",
        IsacStatus::InternalError => c"internal error",
        IsacStatus::IndexOutOfBounds => c"index out of bounds",
        IsacStatus::InvalidArgument => c"invalid argument",
    };
    name.as_ptr()
}

/// Parses and validates a network from NUL-terminated JSON text.
///
/// # Safety
/// `json` must be a valid C string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn isac_network_from_json(
    json: *const c_char,
    out: *mut *mut IsacNetwork,
) -> IsacStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| Failure(IsacStatus::InvalidUtf8, e.to_string()))?;
        let inner = load_network(text)?;
        out.write(Box::into_raw(Box::new(IsacNetwork { inner })));
        Ok(())
    })
}

/// Releases a network. Null is ignored.
///
/// # Safety
/// `net` must come from [`isac_network_from_json`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn isac_network_free(net: *mut IsacNetwork) {
    if !net.is_null() {
        drop(Box::from_raw(net));
    }
}

/// `s*`, the largest sensing fidelity.
///
/// # Safety
/// `net` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn isac_max_sensing(net: *const IsacNetwork, out: *mut f64) -> IsacStatus {
    guard(|| write(out, max_sensing(network(net)?)))
}

/// `f*`, the largest throughput.
///
/// # Safety
/// `net` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn isac_max_throughput(net: *const IsacNetwork, out: *mut f64) -> IsacStatus {
    guard(|| write(out, max_throughput(network(net)?)?))
}

/// Largest throughput at sensing fidelity `target`, which must lie in
/// `[0, s*]`.
///
/// # Safety
/// `net` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn isac_max_throughput_at_sensing(
    net: *const IsacNetwork,
    target: f64,
    out: *mut f64,
) -> IsacStatus {
    guard(|| write(out, max_throughput_at_sensing(network(net)?, target)?.value))
}

/// `f~`, the largest throughput at maximum sensing.
///
/// # Safety
/// `net` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn isac_free_communication(
    net: *const IsacNetwork,
    out: *mut f64,
) -> IsacStatus {
    guard(|| write(out, free_communication(network(net)?)?))
}

/// Whether a positive-capacity source-to-sink path avoids the sensing
/// links.
///
/// # Safety
/// `net` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn isac_has_avoiding_path(
    net: *const IsacNetwork,
    out: *mut bool,
) -> IsacStatus {
    guard(|| write(out, has_avoiding_path(network(net)?)))
}

/// Approximates `s~` by bisection to within `delta`; `lp_calls` may be null.
///
/// # Safety
/// `net` must be a live handle, `out` writable and `lp_calls` null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn isac_approx_free_sensing(
    net: *const IsacNetwork,
    delta: f64,
    out: *mut f64,
    lp_calls: *mut u32,
) -> IsacStatus {
    guard(|| {
        let net = network(net)?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let r = approx_free_sensing(net, delta)?;
        out.write(r.value);
        if !lp_calls.is_null() {
            lp_calls.write(r.lp_calls);
        }
        Ok(())
    })
}

/// Traces the region boundary. Non-positive `slope_tol` and `min_interval`
/// select the defaults.
///
/// # Safety
/// `net` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn isac_trace_region(
    net: *const IsacNetwork,
    slope_tol: f64,
    min_interval: f64,
    out: *mut *mut IsacRegion,
) -> IsacStatus {
    guard(|| {
        let net = network(net)?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        if slope_tol.is_nan() || min_interval.is_nan() {
            return Err(Failure(
                IsacStatus::InvalidArgument,
                "tracing parameters must not be NaN".into(),
            ));
        }
        let inner = if slope_tol <= 0.0 && min_interval <= 0.0 {
            trace_region_default(net)?
        } else {
            let tol = if slope_tol > 0.0 {
                slope_tol
            } else {
                isac_region::region::DEFAULT_SLOPE_TOL
            };
            let interval = if min_interval > 0.0 {
                min_interval
            } else {
                (max_sensing(net) * isac_region::region::DEFAULT_MIN_INTERVAL_FRACTION)
                    .max(f64::MIN_POSITIVE)
            };
            trace_region(net, tol, interval)?
        };
        out.write(Box::into_raw(Box::new(IsacRegion { inner })));
        Ok(())
    })
}

/// Releases a region. Null is ignored.
///
/// # Safety
/// `region` must come from [`isac_trace_region`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn isac_region_free(region: *mut IsacRegion) {
    if !region.is_null() {
        drop(Box::from_raw(region));
    }
}

/// Number of breakpoints, ordered by increasing throughput.
///
/// # Safety
/// `r` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn isac_region_breakpoint_count(
    r: *const IsacRegion,
    out: *mut usize,
) -> IsacStatus {
    guard(|| write(out, region(r)?.breakpoints.len()))
}

/// Breakpoint `index` as `(sensing, throughput)`.
///
/// # Safety
/// `r` must be a live handle and both outputs writable.
#[no_mangle]
pub unsafe extern "C" fn isac_region_breakpoint(
    r: *const IsacRegion,
    index: usize,
    sensing: *mut f64,
    throughput: *mut f64,
) -> IsacStatus {
    guard(|| {
        let b = region(r)?;
        if sensing.is_null() || throughput.is_null() {
            return Err(null("output pointer"));
        }
        let p = b.breakpoints.get(index).ok_or_else(|| {
            Failure(
                IsacStatus::IndexOutOfBounds,
                format!("breakpoint {index} of {}", b.breakpoints.len()),
            )
        })?;
        sensing.write(p.sensing);
        throughput.write(p.throughput);
        Ok(())
    })
}

/// Number of boundary segments.
///
/// # Safety
/// `r` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn isac_region_segment_count(
    r: *const IsacRegion,
    out: *mut usize,
) -> IsacStatus {
    guard(|| write(out, region(r)?.segments.len()))
}

/// Segment `index`.
///
/// # Safety
/// `r` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn isac_region_segment(
    r: *const IsacRegion,
    index: usize,
    out: *mut IsacSegment,
) -> IsacStatus {
    guard(|| {
        let b = region(r)?;
        let s = b.segments.get(index).ok_or_else(|| {
            Failure(
                IsacStatus::IndexOutOfBounds,
                format!("segment {index} of {}", b.segments.len()),
            )
        })?;
        let kind = match s.kind {
            SegmentKind::FreeCommunication => IsacSegmentKind::FreeCommunication,
            SegmentKind::Tradeoff => IsacSegmentKind::Tradeoff,
            SegmentKind::FreeSensing => IsacSegmentKind::FreeSensing,
        };
        write(
            out,
            IsacSegment {
                start: s.start,
                end: s.end,
                kind,
                ds_df: s.slope,
                k: s.k.unwrap_or(0),
            },
        )
    })
}
