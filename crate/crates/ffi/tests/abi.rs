use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use quiver_moduli_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn parse(text: &str) -> *mut QmAlgebra {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { qm_algebra_parse(cstr(text).as_ptr(), &mut out) }, QmStatus::Ok);
    out
}

fn last_error() -> String {
    let p = qm_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn forms_through_the_abi() {
    let a3 = parse("vertices 1 2 3; arrows a:1->2 b:2->3; relations a.b;");
    assert_eq!(unsafe { qm_algebra_vertex_count(a3) }, 3);
    let d = [1usize, 1, 1];
    let mut q = 0i64;
    assert_eq!(unsafe { qm_tits_form(a3, d.as_ptr(), 3, &mut q) }, QmStatus::Ok);
    assert_eq!(q, 2);
    let (s1, s3) = ([1usize, 0, 0], [0usize, 0, 1]);
    let mut chi = 0i64;
    assert_eq!(unsafe { qm_euler_form(a3, s1.as_ptr(), s3.as_ptr(), 3, 4, &mut chi) }, QmStatus::Ok);
    assert_eq!(chi, 1);
    assert!(qm_last_error().is_null());
    unsafe { qm_algebra_free(a3) };
}

#[test]
fn errors_carry_codes_and_messages() {
    let mut out = ptr::null_mut();
    let st = unsafe { qm_algebra_parse(cstr("vertices 1 2; arrows a:1->9;").as_ptr(), &mut out) };
    assert_ne!(st, QmStatus::Ok);
    assert!(out.is_null());
    assert!(!last_error().is_empty());

    assert_eq!(unsafe { qm_algebra_parse(ptr::null(), &mut out) }, QmStatus::NullPointer);
    assert_eq!(unsafe { qm_tits_form(ptr::null(), ptr::null(), 0, ptr::null_mut()) }, QmStatus::NullPointer);

    let k2 = parse("vertices 1 2; arrows a:1->2 b:1->2;");
    let d = [1usize, 1, 1];
    let mut q = 0i64;
    assert_eq!(unsafe { qm_tits_form(k2, d.as_ptr(), 3, &mut q) }, QmStatus::DimensionMismatch);
    assert!(last_error().contains("3 entries"));

    let theta = [1i64, -1];
    let mut buf = [0u64; 2];
    let st = unsafe { qm_hilbert_series(k2, d.as_ptr(), theta.as_ptr(), 2, 3, 60, buf.as_mut_ptr(), buf.len()) };
    assert_eq!(st, QmStatus::BufferTooSmall);

    let cyclic = parse("vertices 1; arrows x:1->1; relations x.x;");
    let one = [1usize];
    let th = [0i64];
    let mut b = [0u64; 2];
    let st = unsafe { qm_hilbert_series(cyclic, one.as_ptr(), th.as_ptr(), 1, 1, 60, b.as_mut_ptr(), 2) };
    assert_eq!(st, QmStatus::NotApplicable, "{}", last_error());
    unsafe {
        qm_algebra_free(cyclic);
        qm_algebra_free(k2);
        qm_algebra_free(ptr::null_mut());
    }
}

#[test]
fn representations_and_king_test() {
    let k2 = parse("vertices 1 2; arrows a:1->2 b:1->2;");
    let text = cstr("algebra k2.alg\nmatrix a rows 1 cols 1\n0\nmatrix b rows 1 cols 1\n0\n");
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { qm_representation_parse(k2, text.as_ptr(), &mut m) }, QmStatus::Ok);
    let mut dims = [0usize; 2];
    let mut written = 0usize;
    assert_eq!(unsafe { qm_representation_dims(m, dims.as_mut_ptr(), 2, &mut written) }, QmStatus::Ok);
    assert_eq!((written, dims), (2, [1, 1]));
    assert_eq!(unsafe { qm_representation_dims(m, dims.as_mut_ptr(), 1, &mut written) }, QmStatus::BufferTooSmall);
    let theta = [1i64, -1];
    let mut s = QmStability::Stable;
    assert_eq!(unsafe { qm_king_test(m, theta.as_ptr(), 2, 5000, 30, &mut s) }, QmStatus::Ok);
    assert_eq!(s, QmStability::Unstable);

    let bad = cstr("algebra k2.alg\nmatrix c rows 1 cols 1\n1\n");
    let mut n = ptr::null_mut();
    assert_ne!(unsafe { qm_representation_parse(k2, bad.as_ptr(), &mut n) }, QmStatus::Ok);
    assert!(n.is_null());
    unsafe {
        qm_representation_free(m);
        qm_algebra_free(k2);
    }
}

fn static_lib() -> Option<PathBuf> {
    let exe = std::env::current_exe().ok()?;
    let dir = exe.parent()?.parent()?;
    let lib = dir.join("libquiver_moduli_ffi.a");
    lib.exists().then_some(lib)
}

#[test]
fn c_program_links_against_the_header() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = root.join("include/quiver_moduli.h");
    assert!(header.exists(), "header not generated");
    let lib = static_lib().expect("static library next to the test binary");
    let out = std::env::temp_dir().join(format!("qm_smoke_{}", std::process::id()));
    let status = Command::new("cc")
        .arg(root.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(root.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .expect("cc runs");
    assert!(status.success());
    let run = Command::new(&out).output().expect("smoke binary runs");
    let _ = std::fs::remove_file(&out);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("ok 0.1.0"));
}
