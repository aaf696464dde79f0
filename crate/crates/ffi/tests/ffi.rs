use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use gemtri_ffi::*;

const S4: &str = "gem n=4 name=s4\n0 1 0\n0 1 1\n0 1 2\n0 1 3\n0 1 4\n";

fn parse(text: &str) -> (GemtriStatus, *mut GemtriGem) {
    let mut gem = ptr::null_mut();
    let s = unsafe { gemtri_gem_parse(text.as_ptr(), text.len(), &mut gem) };
    (s, gem)
}

fn last_error() -> String {
    let p = gemtri_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn sphere_round_trip() {
    let (s, gem) = parse(S4);
    assert_eq!(s, GemtriStatus::Ok);
    unsafe {
        assert_eq!(gemtri_gem_order(gem), 2);
        let mut rho = -1;
        assert_eq!(gemtri_gem_rho_twice(gem, [0u8, 1, 2, 3, 4].as_ptr(), &mut rho), GemtriStatus::Ok);
        assert_eq!(rho, 0);
        let mut run = ptr::null_mut();
        assert_eq!(gemtri_run(gem, ptr::null(), &mut run), GemtriStatus::Ok);
        assert_eq!(gemtri_run_genus_twice(run), 0);
        assert_eq!(gemtri_run_k(run), 0);
        assert!(gemtri_run_verified(run));
        let mut json = ptr::null_mut();
        assert_eq!(gemtri_run_json(run, &mut json), GemtriStatus::Ok);
        let text = CStr::from_ptr(json).to_str().unwrap().to_owned();
        assert!(text.contains("\"record_hash\""));
        gemtri_string_free(json);
        let fmt = CString::new("dot").unwrap();
        let mut dot = ptr::null_mut();
        assert_eq!(gemtri_run_export(run, fmt.as_ptr(), &mut dot), GemtriStatus::Ok);
        assert!(CStr::from_ptr(dot).to_str().unwrap().starts_with("graph diagram {"));
        gemtri_string_free(dot);
        gemtri_run_free(run);
        gemtri_gem_free(gem);
    }
}

#[test]
fn error_codes() {
    let (s, gem) = parse("gem n=4\n0 1 0\n0 1 0\n");
    assert_eq!(s, GemtriStatus::Invalid);
    assert!(gem.is_null());
    assert!(last_error().contains("invalid gem"));

    let (s, _) = parse("gem n=4\n0 1 x\n");
    assert_eq!(s, GemtriStatus::Invalid);
    assert!(last_error().starts_with("line 2"));

    let mut out = ptr::null_mut();
    assert_eq!(unsafe { gemtri_gem_parse(ptr::null(), 0, &mut out) }, GemtriStatus::NullPointer);
    assert_eq!(unsafe { gemtri_run(ptr::null(), ptr::null(), ptr::null_mut()) }, GemtriStatus::NullPointer);
    assert_eq!(unsafe { gemtri_run_genus_twice(ptr::null()) }, -1);

    let (_, gem) = parse(S4);
    let opts = GemtriOptions { sweep: false, has_eps: true, eps: [0, 1, 2, 3, 4], apex: 7, budget: 0, mode: GemtriMode::Auto };
    let mut run = ptr::null_mut();
    assert_eq!(unsafe { gemtri_run(gem, &opts, &mut run) }, GemtriStatus::BadArgument);
    let opts = GemtriOptions { apex: -1, eps: [0, 0, 1, 2, 3], ..opts };
    assert_eq!(unsafe { gemtri_run(gem, &opts, &mut run) }, GemtriStatus::Invalid);
    assert!(run.is_null());
    unsafe { gemtri_gem_free(gem) };
}

#[test]
fn not_in_class_and_export_format() {
    // S4 gem with a blob on its 4-edge: two residues miss color 4
    let text = "gem n=4\n0 2 4\n1 3 4\n0 1 0\n0 1 1\n0 1 2\n0 1 3\n2 3 0\n2 3 1\n2 3 2\n2 3 3\n";
    let (s, gem) = parse(text);
    assert_eq!(s, GemtriStatus::Ok);
    let opts = GemtriOptions { sweep: false, has_eps: false, eps: [0; 5], apex: 4, budget: 0, mode: GemtriMode::Auto };
    let mut run = ptr::null_mut();
    assert_eq!(unsafe { gemtri_run(gem, &opts, &mut run) }, GemtriStatus::NotInClass);
    let opts = GemtriOptions { apex: -1, ..opts };
    assert_eq!(unsafe { gemtri_run(gem, &opts, &mut run) }, GemtriStatus::Ok);
    let fmt = CString::new("png").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { gemtri_run_export(run, fmt.as_ptr(), &mut out) }, GemtriStatus::BadArgument);
    assert!(last_error().contains("png"));
    unsafe {
        gemtri_run_free(run);
        gemtri_gem_free(gem);
    }
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(gemtri_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

fn header() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include").join("gemtri.h")
}

#[test]
fn header_declares_every_export() {
    let h = std::fs::read_to_string(header()).unwrap();
    let src = include_str!("../src/lib.rs");
    for line in src.lines() {
        if let Some(rest) = line.split("extern \"C\" fn ").nth(1) {
            let name = rest.split('(').next().unwrap();
            assert!(h.contains(&format!("{name}(")), "{name} missing from header");
        }
    }
}

fn cc() -> Option<String> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok_and(|o| o.status.success()))
        .map(String::from)
}

#[test]
fn c_program_links_against_staticlib() {
    let Some(cc) = cc() else {
        eprintln!("no C compiler found; C smoke test not run");
        return;
    };
    // target/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libgemtri_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built; C smoke test not run", lib.display());
        return;
    }
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let src = dir.join("smoke.c");
    std::fs::write(
        &src,
        r#"#include <stdio.h>
#include <string.h>
#include "gemtri.h"
int main(void) {
    const char *text = "gem n=4\n0 1 0\n0 1 1\n0 1 2\n0 1 3\n0 1 4\n";
    GemtriGem *gem = NULL;
    GemtriRun *run = NULL;
    if (gemtri_gem_parse((const uint8_t *)text, strlen(text), &gem) != GEMTRI_STATUS_OK) return 10;
    GemtriOptions o = { .sweep = true, .has_eps = false, .apex = -1, .budget = 0, .mode = GEMTRI_MODE_AUTO };
    if (gemtri_run(gem, &o, &run) != GEMTRI_STATUS_OK) return 11;
    printf("%lld %lld %d\n", (long long)gemtri_run_genus_twice(run), (long long)gemtri_run_k(run), gemtri_run_verified(run));
    gemtri_run_free(run);
    gemtri_gem_free(gem);
    return 0;
}
"#,
    )
    .unwrap();
    let bin = dir.join("smoke");
    let status = Command::new(&cc)
        .arg(&src)
        .arg("-I")
        .arg(header().parent().unwrap())
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "0 0 1");
}
