use std::ffi::{c_char, CStr, CString};
use std::ptr;

use supercharacter_ffi::*;

fn fixture(name: &str) -> CString {
    let path = format!("{}/../core/fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"));
    CString::new(std::fs::read_to_string(path).unwrap()).unwrap()
}

fn load(name: &str) -> *mut SctTable {
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { sct_table_from_json(fixture(name).as_ptr(), &mut t) }, SctStatus::Ok);
    assert!(!t.is_null());
    t
}

fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { sct_string_free(s) };
    out
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(sct_last_error()) }.to_str().unwrap().to_owned()
}

#[test]
fn enumerate_a5() {
    let t = load("a5");
    assert_eq!(unsafe { sct_table_k(t) }, 5);
    let mut e = ptr::null_mut();
    assert_eq!(unsafe { sct_enumerate(t, 2, true, &mut e) }, SctStatus::Ok);
    assert_eq!(unsafe { sct_enumeration_count(e) }, 3);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { sct_enumeration_theory_json(e, 1, &mut s) }, SctStatus::Ok);
    assert_eq!(take(s), r#"{"chars":[[0],[1,2],[3],[4]],"classes":[[0],[1],[2],[3,4]]}"#);
    assert_eq!(unsafe { sct_enumeration_theory_json(e, 3, &mut s) }, SctStatus::OutOfRange);
    assert!(s.is_null());
    assert!(last_error().contains("out of range"));
    let mut order = 0;
    assert_eq!(unsafe { sct_automorphism_count(t, &mut order) }, SctStatus::Ok);
    assert_eq!(order, 2);
    unsafe {
        sct_enumeration_free(e);
        sct_table_free(t);
    }
}

#[test]
fn superclass_and_refine() {
    let t = load("a5");
    let mut found = false;
    let mut s = ptr::null_mut();
    let fused = [3usize, 4];
    assert_eq!(unsafe { sct_superclass(t, fused.as_ptr(), 2, &mut found, &mut s) }, SctStatus::Ok);
    assert!(found);
    assert!(take(s).contains(r#""classes":[[0],[1],[2],[3,4]]"#));
    let mixed = [1usize, 2];
    assert_eq!(unsafe { sct_superclass(t, mixed.as_ptr(), 2, &mut found, &mut s) }, SctStatus::Ok);
    assert!(!found && s.is_null());
    let bad = [7usize];
    assert_eq!(unsafe { sct_superclass(t, bad.as_ptr(), 1, &mut found, ptr::null_mut()) }, SctStatus::OutOfRange);

    let p = CString::new("[[0],[1,2,3,4]]").unwrap();
    assert_eq!(unsafe { sct_refine_classes(t, p.as_ptr(), &mut s) }, SctStatus::Ok);
    assert_eq!(take(s), r#"{"chars":[[0],[1,2,3,4]],"classes":[[0],[1,2,3,4]]}"#);
    let p = CString::new("[[0],[1,2]").unwrap();
    assert_eq!(unsafe { sct_refine_classes(t, p.as_ptr(), &mut s) }, SctStatus::Parse);
    assert!(!last_error().is_empty());
    unsafe { sct_table_free(t) };
}

#[test]
fn rejects_bad_input() {
    let mut t = ptr::null_mut();
    let junk = CString::new("{not json").unwrap();
    assert_eq!(unsafe { sct_table_from_json(junk.as_ptr(), &mut t) }, SctStatus::Parse);
    assert!(t.is_null());
    assert_eq!(unsafe { sct_table_from_json(ptr::null(), &mut t) }, SctStatus::NullPointer);

    // swap two class sizes of S3 so that orthogonality fails
    let mut doc: serde_json::Value = serde_json::from_str(fixture("s3").to_str().unwrap()).unwrap();
    doc["class_sizes"] = serde_json::json!([1, 2, 3]);
    let broken = CString::new(doc.to_string()).unwrap();
    assert_eq!(unsafe { sct_table_from_json(broken.as_ptr(), &mut t) }, SctStatus::InvalidTable);
    assert!(last_error().contains("orthogonality"));

    assert_eq!(unsafe { sct_table_k(ptr::null()) }, 0);
    let mut e = ptr::null_mut();
    assert_eq!(unsafe { sct_enumerate(ptr::null(), 1, true, &mut e) }, SctStatus::NullPointer);
    unsafe {
        sct_table_free(ptr::null_mut());
        sct_enumeration_free(ptr::null_mut());
        sct_string_free(ptr::null_mut());
    }
}

#[test]
fn success_clears_last_error() {
    let mut t = ptr::null_mut();
    let junk = CString::new("[]").unwrap();
    assert_ne!(unsafe { sct_table_from_json(junk.as_ptr(), &mut t) }, SctStatus::Ok);
    assert!(!last_error().is_empty());
    let t = load("c3");
    assert!(last_error().is_empty());
    unsafe { sct_table_free(t) };
}
