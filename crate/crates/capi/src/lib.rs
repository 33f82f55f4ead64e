//! C ABI over the invariant engine: opaque construction handles,
//! status codes mirroring the command-line exit codes, and UTF-8 JSON
//! strings for everything structured.
//!
//! Ownership rules: every `char*` returned through an out-parameter is
//! owned by the caller and must be released with [`bk_string_free`];
//! every handle from [`bk_construction_parse`] must be released with
//! [`bk_construction_free`]. After any call that returns a non-zero
//! status, [`bk_last_error_message`] describes the failure; the pointer
//! stays valid until the next call on the same thread.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use brieskorn::report::{
    build_construction, invariant_report, load_construction, to_json, Construction,
    ConstructionSpec, Failure,
};

/// Status of a C-ABI call. The failure values 2-5 match the process
/// exit codes of the command-line tool; values from 10 up are specific
/// to the binary interface.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BkStatus {
    /// Success.
    BkOk = 0,
    /// Malformed recipe, parameters out of range, or a corrupted file.
    BkErrSchema = 2,
    /// Geometric degeneracy (tangency, degenerate polygon, ...).
    BkErrGeometry = 3,
    /// A certificate was refused; nothing was asserted.
    BkErrNotCertified = 4,
    /// A cross-check that must hold came out false.
    BkErrDiscrepancy = 5,
    /// A required pointer argument was null.
    BkErrNullArgument = 10,
    /// A string argument was not valid UTF-8.
    BkErrUtf8 = 11,
    /// Internal failure (a bug, not a property of the input).
    BkErrInternal = 12,
}

/// Opaque handle to a realized construction.
pub struct BkConstruction {
    spec: ConstructionSpec,
    construction: Construction,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> =
        RefCell::new(CString::new("").expect("empty string has no interior nul"));
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() =
            CString::new(sanitized).expect("nul bytes were just stripped");
    });
}

fn failure_status(f: &Failure) -> BkStatus {
    set_error(&f.to_string());
    match f {
        Failure::Schema(_) => BkStatus::BkErrSchema,
        Failure::Geometry(_) => BkStatus::BkErrGeometry,
        Failure::NotCertified(_) => BkStatus::BkErrNotCertified,
        Failure::Discrepancy(_) => BkStatus::BkErrDiscrepancy,
    }
}

/// Run a fallible body with panic isolation, so an internal bug can
/// never unwind across the ABI boundary.
fn guarded<F: FnOnce() -> BkStatus>(body: F) -> BkStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic; this is a bug in the engine");
            BkStatus::BkErrInternal
        }
    }
}

unsafe fn read_utf8<'a>(text: *const c_char, what: &str) -> Result<&'a str, BkStatus> {
    if text.is_null() {
        set_error(&format!("{} must not be null", what));
        return Err(BkStatus::BkErrNullArgument);
    }
    CStr::from_ptr(text).to_str().map_err(|_| {
        set_error(&format!("{} is not valid UTF-8", what));
        BkStatus::BkErrUtf8
    })
}

unsafe fn write_string(value: String, out: *mut *mut c_char) -> BkStatus {
    if out.is_null() {
        set_error("output pointer must not be null");
        return BkStatus::BkErrNullArgument;
    }
    match CString::new(value) {
        Ok(s) => {
            *out = s.into_raw();
            set_error("");
            BkStatus::BkOk
        }
        Err(_) => {
            set_error("produced text contained an interior nul byte");
            BkStatus::BkErrInternal
        }
    }
}

unsafe fn borrow_handle<'a>(
    handle: *const BkConstruction,
) -> Result<&'a BkConstruction, BkStatus> {
    if handle.is_null() {
        set_error("construction handle must not be null");
        return Err(BkStatus::BkErrNullArgument);
    }
    Ok(&*handle)
}

/// Parse a recipe or a full construction file (JSON) into a handle.
/// On success `*out` owns the handle.
#[no_mangle]
pub unsafe extern "C" fn bk_construction_parse(
    json: *const c_char,
    out: *mut *mut BkConstruction,
) -> BkStatus {
    guarded(|| {
        if out.is_null() {
            set_error("output pointer must not be null");
            return BkStatus::BkErrNullArgument;
        }
        let text = match read_utf8(json, "construction JSON") {
            Ok(t) => t,
            Err(status) => return status,
        };
        match load_construction(text) {
            Ok((spec, construction)) => {
                *out = Box::into_raw(Box::new(BkConstruction { spec, construction }));
                set_error("");
                BkStatus::BkOk
            }
            Err(f) => failure_status(&f),
        }
    })
}

/// Release a handle. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn bk_construction_free(handle: *mut BkConstruction) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Release a string returned by this library. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn bk_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}

/// Human-readable message of the most recent failure on this thread;
/// the empty string after a success. Do not free.
#[no_mangle]
pub extern "C" fn bk_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// The construction's name, e.g. `T_{1,2,0}`.
#[no_mangle]
pub unsafe extern "C" fn bk_construction_name(
    handle: *const BkConstruction,
    out: *mut *mut c_char,
) -> BkStatus {
    guarded(|| {
        let c = match borrow_handle(handle) {
            Ok(c) => c,
            Err(status) => return status,
        };
        write_string(c.spec.name(), out)
    })
}

/// The full self-verifying construction file as JSON.
#[no_mangle]
pub unsafe extern "C" fn bk_construction_file_json(
    handle: *const BkConstruction,
    out: *mut *mut c_char,
) -> BkStatus {
    guarded(|| {
        let c = match borrow_handle(handle) {
            Ok(c) => c,
            Err(status) => return status,
        };
        match build_construction(&c.spec) {
            Ok((file, _)) => write_string(to_json(&file), out),
            Err(f) => failure_status(&f),
        }
    })
}

/// The complete invariant report as JSON. A refused certificate still
/// produces the report (carrying its structured `not-certified`
/// entries); only a failure to compute anything returns an error.
#[no_mangle]
pub unsafe extern "C" fn bk_invariant_report_json(
    handle: *const BkConstruction,
    out: *mut *mut c_char,
) -> BkStatus {
    guarded(|| {
        let c = match borrow_handle(handle) {
            Ok(c) => c,
            Err(status) => return status,
        };
        match invariant_report(&c.spec, &c.construction, &[]) {
            Ok(report) => write_string(to_json(&report), out),
            Err(f) => failure_status(&f),
        }
    })
}

/// A deterministic SVG drawing of the construction.
#[no_mangle]
pub unsafe extern "C" fn bk_render_svg(
    handle: *const BkConstruction,
    out: *mut *mut c_char,
) -> BkStatus {
    guarded(|| {
        let c = match borrow_handle(handle) {
            Ok(c) => c,
            Err(status) => return status,
        };
        match brieskorn::render::render_svg(&c.spec, &c.construction) {
            Ok(svg) => write_string(svg, out),
            Err(f) => failure_status(&f),
        }
    })
}

/// Maslov numbers of the distinguished classes. Writes up to `cap`
/// values into `buf` and stores the full count in `*len`; when the
/// vector is longer than `cap` the call still succeeds, so call once
/// with `cap = 0` to size the buffer.
#[no_mangle]
pub unsafe extern "C" fn bk_maslov_vector(
    handle: *const BkConstruction,
    buf: *mut i64,
    cap: usize,
    len: *mut usize,
) -> BkStatus {
    guarded(|| {
        let c = match borrow_handle(handle) {
            Ok(c) => c,
            Err(status) => return status,
        };
        if len.is_null() || (buf.is_null() && cap > 0) {
            set_error("length pointer (and buffer, when cap > 0) must not be null");
            return BkStatus::BkErrNullArgument;
        }
        let vector = match &c.construction {
            Construction::Single(fl) => fl
                .maslov_longitude()
                .map(|mu| vec![mu, fl.maslov_meridian()])
                .map_err(Failure::from),
            Construction::Chain(a) => a.maslov_vector().map_err(Failure::from),
            Construction::Product(t3) => {
                t3.fiber_piece.maslov_vector().map_err(Failure::from)
            }
        };
        match vector {
            Ok(v) => {
                *len = v.len();
                for (i, value) in v.iter().take(cap).enumerate() {
                    *buf.add(i) = *value;
                }
                set_error("");
                BkStatus::BkOk
            }
            Err(f) => failure_status(&f),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    fn parse(json: &str) -> *mut BkConstruction {
        let c = CString::new(json).unwrap();
        let mut handle: *mut BkConstruction = ptr::null_mut();
        let status = unsafe { bk_construction_parse(c.as_ptr(), &mut handle) };
        assert_eq!(status, BkStatus::BkOk, "parse failed: {}", last_error());
        handle
    }

    fn last_error() -> String {
        unsafe { CStr::from_ptr(bk_last_error_message()) }.to_str().unwrap().to_string()
    }

    fn take_string(
        f: impl FnOnce(*mut *mut c_char) -> BkStatus,
    ) -> Result<String, (BkStatus, String)> {
        let mut out: *mut c_char = ptr::null_mut();
        let status = f(&mut out);
        if status != BkStatus::BkOk {
            return Err((status, last_error()));
        }
        let text = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_string();
        unsafe { bk_string_free(out) };
        Ok(text)
    }

    #[test]
    fn handle_lifecycle_and_accessors() {
        let handle = parse(r#"{"kind":"torus","k":1,"l":2,"m":0}"#);
        let name =
            take_string(|out| unsafe { bk_construction_name(handle, out) }).unwrap();
        assert_eq!(name, "T_{1,2,0}");

        let mut len = 0usize;
        let mut buf = [0i64; 8];
        let status = unsafe {
            bk_maslov_vector(handle, buf.as_mut_ptr(), buf.len(), &mut len)
        };
        assert_eq!(status, BkStatus::BkOk);
        assert_eq!(&buf[..len], &[2, 0]);

        let report =
            take_string(|out| unsafe { bk_invariant_report_json(handle, out) }).unwrap();
        let value: serde_json::Value = serde_json::from_str(&report).unwrap();
        assert_eq!(value["soft"]["maslov_vector"], serde_json::json!([2, 0]));
        assert_eq!(value["hard"]["hf"][1]["rank"], serde_json::json!(3));

        let svg = take_string(|out| unsafe { bk_render_svg(handle, out) }).unwrap();
        assert!(svg.starts_with("<svg"));

        let file =
            take_string(|out| unsafe { bk_construction_file_json(handle, out) }).unwrap();
        let reparsed = parse(&file);
        unsafe {
            bk_construction_free(reparsed);
            bk_construction_free(handle);
        }
    }

    #[test]
    fn error_paths_set_codes_and_messages() {
        let mut handle: *mut BkConstruction = ptr::null_mut();
        let status = unsafe { bk_construction_parse(ptr::null(), &mut handle) };
        assert_eq!(status, BkStatus::BkErrNullArgument);
        assert!(last_error().contains("null"));

        let bad = CString::new(r#"{"kind":"torus","k":99,"l":2,"m":0}"#).unwrap();
        let status = unsafe { bk_construction_parse(bad.as_ptr(), &mut handle) };
        assert_eq!(status, BkStatus::BkErrSchema);
        assert!(last_error().contains("k"), "message names the parameter: {}", last_error());

        let status = unsafe { bk_construction_name(ptr::null(), &mut ptr::null_mut()) };
        assert_eq!(status, BkStatus::BkErrNullArgument);
    }

    #[test]
    fn generated_header_declares_the_api() {
        let header = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("include")
            .join("brieskorn.h");
        let text = std::fs::read_to_string(&header).expect("build.rs wrote the header");
        for symbol in [
            "BRIESKORN_H",
            "BkStatus",
            "BkConstruction",
            "bk_construction_parse",
            "bk_construction_free",
            "bk_invariant_report_json",
            "bk_render_svg",
            "bk_maslov_vector",
            "bk_string_free",
            "bk_last_error_message",
        ] {
            assert!(text.contains(symbol), "header is missing {}", symbol);
        }
    }
}
