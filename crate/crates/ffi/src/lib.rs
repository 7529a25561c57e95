//! C interface to the `supercharacter` crate.
//!
//! Tables and enumeration results are opaque handles owned by the caller
//! and released with the matching `_free` function. Every fallible call
//! returns an [`SctStatus`]; on failure [`sct_last_error`] describes the
//! problem. Strings handed out by the library are released with
//! [`sct_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use supercharacter::auts::automorphism_group;
use supercharacter::enumerate::{all_scts_with, Options};
use supercharacter::sct::{coarsest_sct_with_superclass, refine_classes_to_sct};
use supercharacter::{BitSet, CharacterTable, Error, Partition, SuperTheory};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SctStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed JSON, value expression or partition text.
    Parse = 3,
    /// The table failed validation or is structurally unusable.
    InvalidTable = 4,
    OutOfRange = 5,
    TooLarge = 6,
    Panic = 7,
}

/// A parsed character table.
pub struct SctTable {
    table: CharacterTable,
}

/// The supercharacter theories of a table, sorted.
pub struct SctEnumeration {
    theories: Vec<SuperTheory>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: impl Into<String>) {
    let text = CString::new(message.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = text);
}

fn fail(status: SctStatus, message: impl Into<String>) -> SctStatus {
    set_error(message);
    status
}

fn status_of(e: &Error) -> SctStatus {
    match e {
        Error::Syntax { .. } | Error::Json(_) | Error::Value { .. } | Error::Partition(_) | Error::Io { .. } => {
            SctStatus::Parse
        }
        Error::TooLarge { .. } => SctStatus::TooLarge,
        _ => SctStatus::InvalidTable,
    }
}

fn guard(body: impl FnOnce() -> Result<(), (SctStatus, String)>) -> SctStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            SctStatus::Ok
        }
        Ok(Err((status, message))) => fail(status, message),
        Err(_) => fail(SctStatus::Panic, "internal panic"),
    }
}

fn from_error(e: Error) -> (SctStatus, String) {
    (status_of(&e), e.to_string())
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, (SctStatus, String)> {
    if s.is_null() {
        return Err((SctStatus::NullPointer, "null string".into()));
    }
    CStr::from_ptr(s).to_str().map_err(|e| (SctStatus::InvalidUtf8, e.to_string()))
}

unsafe fn table<'a>(t: *const SctTable) -> Result<&'a CharacterTable, (SctStatus, String)> {
    t.as_ref().map(|t| &t.table).ok_or((SctStatus::NullPointer, "null table".into()))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn sct_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Parses a table from its JSON text and validates it.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn sct_table_from_json(json: *const c_char, out: *mut *mut SctTable) -> SctStatus {
    guard(|| {
        if out.is_null() {
            return Err((SctStatus::NullPointer, "null output pointer".into()));
        }
        *out = ptr::null_mut();
        let table = CharacterTable::from_json(text(json)?).map_err(from_error)?;
        let report = table.validate();
        if !report.is_valid() {
            return Err((SctStatus::InvalidTable, report.to_string().trim_end().to_string()));
        }
        *out = Box::into_raw(Box::new(SctTable { table }));
        Ok(())
    })
}

/// # Safety
/// `t` must come from [`sct_table_from_json`] and not be freed already; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn sct_table_free(t: *mut SctTable) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Number of classes (and irreducible characters); 0 for a null handle.
///
/// # Safety
/// `t` must be null or a live table handle.
#[no_mangle]
pub unsafe extern "C" fn sct_table_k(t: *const SctTable) -> usize {
    t.as_ref().map_or(0, |t| t.table.k())
}

/// Order of the table automorphism group.
///
/// # Safety
/// `t` must be a live table handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sct_automorphism_count(t: *const SctTable, out: *mut usize) -> SctStatus {
    guard(|| {
        let table = table(t)?;
        let out = out.as_mut().ok_or((SctStatus::NullPointer, "null output pointer".into()))?;
        *out = automorphism_group(table).len();
        Ok(())
    })
}

/// Enumerates every supercharacter theory. `workers` = 0 uses all cores.
///
/// # Safety
/// `t` must be a live table handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sct_enumerate(
    t: *const SctTable,
    workers: usize,
    use_auts: bool,
    out: *mut *mut SctEnumeration,
) -> SctStatus {
    guard(|| {
        if out.is_null() {
            return Err((SctStatus::NullPointer, "null output pointer".into()));
        }
        *out = ptr::null_mut();
        let table = table(t)?;
        let opts = Options { workers, use_auts, progress: None };
        let result = all_scts_with(table, &opts).map_err(from_error)?;
        *out = Box::into_raw(Box::new(SctEnumeration { theories: result.theories }));
        Ok(())
    })
}

/// # Safety
/// `e` must be null or a live enumeration handle.
#[no_mangle]
pub unsafe extern "C" fn sct_enumeration_count(e: *const SctEnumeration) -> usize {
    e.as_ref().map_or(0, |e| e.theories.len())
}

/// Theory `index` as `{"chars":[[..]],"classes":[[..]]}`; free with [`sct_string_free`].
///
/// # Safety
/// `e` must be a live enumeration handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sct_enumeration_theory_json(
    e: *const SctEnumeration,
    index: usize,
    out: *mut *mut c_char,
) -> SctStatus {
    guard(|| {
        let out = out.as_mut().ok_or((SctStatus::NullPointer, "null output pointer".into()))?;
        *out = ptr::null_mut();
        let e = e.as_ref().ok_or((SctStatus::NullPointer, "null enumeration".into()))?;
        let theory = e.theories.get(index).ok_or_else(|| {
            (SctStatus::OutOfRange, format!("index {index} out of range ({} theories)", e.theories.len()))
        })?;
        *out = into_c_string(theory.to_json());
        Ok(())
    })
}

/// # Safety
/// `e` must come from [`sct_enumerate`] and not be freed already; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn sct_enumeration_free(e: *mut SctEnumeration) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// Tests whether the union of `len` classes is a superclass of some theory.
/// When it is and `theory_json` is not null, the coarsest such theory is
/// written there as JSON; otherwise it is set to null.
///
/// # Safety
/// `classes` must point to `len` readable indices; `found` must be writable;
/// `theory_json` may be null.
#[no_mangle]
pub unsafe extern "C" fn sct_superclass(
    t: *const SctTable,
    classes: *const usize,
    len: usize,
    found: *mut bool,
    theory_json: *mut *mut c_char,
) -> SctStatus {
    guard(|| {
        let table = table(t)?;
        let found = found.as_mut().ok_or((SctStatus::NullPointer, "null output pointer".into()))?;
        if let Some(slot) = theory_json.as_mut() {
            *slot = ptr::null_mut();
        }
        if classes.is_null() || len == 0 {
            return Err((SctStatus::NullPointer, "empty class list".into()));
        }
        let indices = std::slice::from_raw_parts(classes, len);
        if let Some(&j) = indices.iter().find(|&&j| j >= table.k()) {
            return Err((SctStatus::OutOfRange, format!("class {j} out of range (k = {})", table.k())));
        }
        let subset: BitSet = indices.iter().copied().collect();
        let theory = coarsest_sct_with_superclass(table, &subset);
        *found = theory.is_some();
        if let (Some(theory), Some(slot)) = (theory, theory_json.as_mut()) {
            *slot = into_c_string(theory.to_json());
        }
        Ok(())
    })
}

/// Coarsest theory whose class partition refines `partition` (e.g. `"[[0],[1,2],[3]]"`).
///
/// # Safety
/// `partition` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sct_refine_classes(
    t: *const SctTable,
    partition: *const c_char,
    out: *mut *mut c_char,
) -> SctStatus {
    guard(|| {
        let out = out.as_mut().ok_or((SctStatus::NullPointer, "null output pointer".into()))?;
        *out = ptr::null_mut();
        let table = table(t)?;
        let classes = Partition::parse(text(partition)?, table.k()).map_err(from_error)?;
        *out = into_c_string(refine_classes_to_sct(table, &classes).to_json());
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sct_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
