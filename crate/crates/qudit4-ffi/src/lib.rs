//! C ABI for the qudit4 library.
//!
//! Conventions: every fallible function returns a [`Qudit4Status`] and writes
//! its result through an out pointer. States are opaque handles owned by the
//! caller and released with [`qudit4_state_free`]; strings returned by the
//! library are released with [`qudit4_string_free`].

use std::ffi::{c_char, CStr, CString};

use qudit4::measures;
use qudit4::states::{self, DensityMatrix4, Spectrum4};
use qudit4::unitaries;

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Qudit4Status {
    Qudit4Ok = 0,
    /// A pointer argument was null.
    Qudit4NullPointer = 1,
    /// An argument failed validation (range, normalization, parse).
    Qudit4InvalidArgument = 2,
    /// The matrix is not a valid density matrix.
    Qudit4InvalidState = 3,
    /// The numeric backend failed; should not happen on valid input.
    Qudit4InternalError = 4,
}

/// Opaque density-matrix handle.
pub struct Qudit4State {
    inner: DensityMatrix4,
}

/// Flat entanglement report, mirror of the library's analyze output.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct Qudit4Report {
    /// Partial-transpose eigenvalues, descending.
    pub ppt_spectrum: [f64; 4],
    pub negativity: f64,
    pub concurrence: f64,
    pub min_ppt_eig: f64,
    /// 1 when the state is separable.
    pub separable: bool,
    /// 1 when the smallest eigenvalue sits at the verdict tolerance.
    pub boundary: bool,
}

fn state_error_status(e: &states::StateError) -> Qudit4Status {
    use states::StateError::*;
    match e {
        NotHermitian { .. } | TraceNotOne { .. } | NotPositive { .. } | NotFinite => {
            Qudit4Status::Qudit4InvalidState
        }
        Linalg(_) => Qudit4Status::Qudit4InternalError,
        _ => Qudit4Status::Qudit4InvalidArgument,
    }
}

unsafe fn write_state(out: *mut *mut Qudit4State, state: DensityMatrix4) -> Qudit4Status {
    *out = Box::into_raw(Box::new(Qudit4State { inner: state }));
    Qudit4Status::Qudit4Ok
}

/// Builds the diagonal state from four eigenvalues (nonnegative, summing to 1).
///
/// # Safety
/// `eigenvalues` must point to four doubles; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qudit4_state_from_spectrum(
    eigenvalues: *const f64,
    out: *mut *mut Qudit4State,
) -> Qudit4Status {
    if eigenvalues.is_null() || out.is_null() {
        return Qudit4Status::Qudit4NullPointer;
    }
    let values = std::slice::from_raw_parts(eigenvalues, 4);
    match Spectrum4::new([values[0], values[1], values[2], values[3]]) {
        Ok(spectrum) => write_state(out, states::from_spectrum(&spectrum)),
        Err(_) => Qudit4Status::Qudit4InvalidArgument,
    }
}

/// Builds the Werner state for `p` in [-1/3, 1].
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qudit4_state_werner(p: f64, out: *mut *mut Qudit4State) -> Qudit4Status {
    if out.is_null() {
        return Qudit4Status::Qudit4NullPointer;
    }
    match states::werner(p) {
        Ok(state) => write_state(out, state),
        Err(_) => Qudit4Status::Qudit4InvalidArgument,
    }
}

/// Parses a density-matrix JSON document.
///
/// # Safety
/// `text` must be a valid NUL-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qudit4_state_from_json(
    text: *const c_char,
    out: *mut *mut Qudit4State,
) -> Qudit4Status {
    if text.is_null() || out.is_null() {
        return Qudit4Status::Qudit4NullPointer;
    }
    let Ok(text) = CStr::from_ptr(text).to_str() else {
        return Qudit4Status::Qudit4InvalidArgument;
    };
    match states::from_json(text) {
        Ok(state) => write_state(out, state),
        Err(e) => state_error_status(&e),
    }
}

/// Serializes the state as JSON; the caller frees the string.
///
/// # Safety
/// `state` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qudit4_state_to_json(
    state: *const Qudit4State,
    out: *mut *mut c_char,
) -> Qudit4Status {
    if state.is_null() || out.is_null() {
        return Qudit4Status::Qudit4NullPointer;
    }
    let json = states::to_json(&(*state).inner);
    match CString::new(json) {
        Ok(s) => {
            *out = s.into_raw();
            Qudit4Status::Qudit4Ok
        }
        Err(_) => Qudit4Status::Qudit4InternalError,
    }
}

/// Conjugates the state by the one-angle rotation acting on levels 1 and 4.
///
/// # Safety
/// `state` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qudit4_state_rotate_1_4(
    state: *const Qudit4State,
    phi: f64,
    out: *mut *mut Qudit4State,
) -> Qudit4Status {
    if state.is_null() || out.is_null() {
        return Qudit4Status::Qudit4NullPointer;
    }
    let rotated = states::conjugate(&(*state).inner, &unitaries::rotation_1_4(phi));
    write_state(out, rotated)
}

/// Computes the entanglement report for the state.
///
/// # Safety
/// `state` must be a live handle; `out` must point to a report struct.
#[no_mangle]
pub unsafe extern "C" fn qudit4_state_analyze(
    state: *const Qudit4State,
    out: *mut Qudit4Report,
) -> Qudit4Status {
    if state.is_null() || out.is_null() {
        return Qudit4Status::Qudit4NullPointer;
    }
    match measures::analyze(&(*state).inner) {
        Ok(report) => {
            *out = Qudit4Report {
                ppt_spectrum: report.ppt_spectrum,
                negativity: report.negativity,
                concurrence: report.concurrence,
                min_ppt_eig: report.min_ppt_eig,
                separable: report.separable,
                boundary: report.boundary,
            };
            Qudit4Status::Qudit4Ok
        }
        Err(_) => Qudit4Status::Qudit4InternalError,
    }
}

/// Releases a state handle; accepts null.
///
/// # Safety
/// `state` must be null or a handle returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qudit4_state_free(state: *mut Qudit4State) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Releases a string returned by this library; accepts null.
///
/// # Safety
/// `text` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qudit4_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}

/// Human-readable name for a status code; static storage, do not free.
#[no_mangle]
pub extern "C" fn qudit4_status_name(status: Qudit4Status) -> *const c_char {
    let name: &'static [u8] = match status {
        Qudit4Status::Qudit4Ok => b"ok\0",
        Qudit4Status::Qudit4NullPointer => b"null pointer\0",
        Qudit4Status::Qudit4InvalidArgument => b"invalid argument\0",
        Qudit4Status::Qudit4InvalidState => b"invalid state\0",
        Qudit4Status::Qudit4InternalError => b"internal error\0",
    };
    name.as_ptr() as *const c_char
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    unsafe fn make_werner(p: f64) -> *mut Qudit4State {
        let mut handle: *mut Qudit4State = ptr::null_mut();
        assert_eq!(qudit4_state_werner(p, &mut handle), Qudit4Status::Qudit4Ok);
        assert!(!handle.is_null());
        handle
    }

    #[test]
    fn werner_analyze_roundtrip() {
        unsafe {
            let state = make_werner(0.6);
            let mut report = std::mem::zeroed::<Qudit4Report>();
            assert_eq!(
                qudit4_state_analyze(state, &mut report),
                Qudit4Status::Qudit4Ok
            );
            assert!((report.negativity - 0.4).abs() < 1e-10);
            assert!((report.concurrence - 0.4).abs() < 1e-10);
            assert!(!report.separable);
            qudit4_state_free(state);
        }
    }

    #[test]
    fn json_roundtrip() {
        unsafe {
            let state = make_werner(0.5);
            let mut text: *mut c_char = ptr::null_mut();
            assert_eq!(
                qudit4_state_to_json(state, &mut text),
                Qudit4Status::Qudit4Ok
            );
            let mut back: *mut Qudit4State = ptr::null_mut();
            assert_eq!(
                qudit4_state_from_json(text, &mut back),
                Qudit4Status::Qudit4Ok
            );
            assert!((*back).inner.matrix().max_abs_diff((*state).inner.matrix()) < 1e-15);
            qudit4_string_free(text);
            qudit4_state_free(back);
            qudit4_state_free(state);
        }
    }

    #[test]
    fn rotation_keeps_verdict_consistent() {
        unsafe {
            let state = make_werner(0.6);
            let mut rotated: *mut Qudit4State = ptr::null_mut();
            let phi = std::f64::consts::FRAC_PI_4;
            assert_eq!(
                qudit4_state_rotate_1_4(state, phi, &mut rotated),
                Qudit4Status::Qudit4Ok
            );
            let mut report = std::mem::zeroed::<Qudit4Report>();
            assert_eq!(
                qudit4_state_analyze(rotated, &mut report),
                Qudit4Status::Qudit4Ok
            );
            assert!(report.separable);
            qudit4_state_free(rotated);
            qudit4_state_free(state);
        }
    }

    #[test]
    fn error_codes() {
        unsafe {
            let mut handle: *mut Qudit4State = ptr::null_mut();
            assert_eq!(
                qudit4_state_werner(1.5, &mut handle),
                Qudit4Status::Qudit4InvalidArgument
            );
            assert_eq!(
                qudit4_state_werner(0.5, ptr::null_mut()),
                Qudit4Status::Qudit4NullPointer
            );
            let spectrum = [0.5, 0.5, 0.5, 0.5];
            assert_eq!(
                qudit4_state_from_spectrum(spectrum.as_ptr(), &mut handle),
                Qudit4Status::Qudit4InvalidArgument
            );
            let bad = CString::new("{\"labeling\": \"nope\"}").unwrap();
            assert_eq!(
                qudit4_state_from_json(bad.as_ptr(), &mut handle),
                Qudit4Status::Qudit4InvalidArgument
            );
            let name = CStr::from_ptr(qudit4_status_name(Qudit4Status::Qudit4Ok));
            assert_eq!(name.to_str().unwrap(), "ok");
        }
    }

    #[test]
    fn spectrum_constructor() {
        unsafe {
            let spectrum = [0.7, 0.1, 0.1, 0.1];
            let mut handle: *mut Qudit4State = ptr::null_mut();
            assert_eq!(
                qudit4_state_from_spectrum(spectrum.as_ptr(), &mut handle),
                Qudit4Status::Qudit4Ok
            );
            let mut report = std::mem::zeroed::<Qudit4Report>();
            assert_eq!(
                qudit4_state_analyze(handle, &mut report),
                Qudit4Status::Qudit4Ok
            );
            // Diagonal states are separable.
            assert!(report.separable);
            assert!(report.negativity < 1e-12);
            qudit4_state_free(handle);
        }
    }
}
