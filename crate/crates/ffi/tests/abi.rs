use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use sbfs_ffi::*;

const COUNTERS: &str = include_str!("../../../problems/counters-2.problem");

fn last_error() -> String {
    let p = sbfs_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn take_string(p: *mut std::ffi::c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned();
    unsafe { sbfs_string_free(p) };
    s
}

#[test]
fn parse_solve_free() {
    let text = CString::new(COUNTERS).unwrap();
    let mut prob = ptr::null_mut();
    assert_eq!(unsafe { sbfs_problem_parse(text.as_ptr(), &mut prob) }, SbfsStatus::Ok);
    assert!(sbfs_last_error().is_null());

    let flags = CString::new("--algo sa --rect lin --sampler systematic --expansion-limit 100000").unwrap();
    let mut res = ptr::null_mut();
    assert_eq!(unsafe { sbfs_solve(prob, flags.as_ptr(), &mut res) }, SbfsStatus::Ok);
    unsafe {
        assert_eq!(sbfs_result_outcome(res), SbfsOutcome::Solved);
        let len = sbfs_result_plan_len(res);
        assert!(len > 0);
        assert!(sbfs_result_expansions(res) > 0);
        assert!(sbfs_result_reexp_rate(res) >= 0.0);
        assert!(sbfs_result_time(res) >= 0.0);
        let mut plan = ptr::null_mut();
        assert_eq!(sbfs_result_plan_text(res, &mut plan), SbfsStatus::Ok);
        let plan = take_string(plan);
        assert!(plan.starts_with(&format!("; plan steps={len}\n")));
        sbfs_result_free(res);

        let mut out = ptr::null_mut();
        assert_eq!(sbfs_problem_serialize(prob, &mut out), SbfsStatus::Ok);
        let again = CString::new(take_string(out)).unwrap();
        let mut prob2 = ptr::null_mut();
        assert_eq!(sbfs_problem_parse(again.as_ptr(), &mut prob2), SbfsStatus::Ok);
        sbfs_problem_free(prob2);
        sbfs_problem_free(prob);
    }
}

#[test]
fn generated_instance() {
    let spec = CString::new("drone grid=2 points=1").unwrap();
    let mut prob = ptr::null_mut();
    assert_eq!(unsafe { sbfs_problem_generate(spec.as_ptr(), &mut prob) }, SbfsStatus::Ok);
    assert!(!prob.is_null());
    unsafe { sbfs_problem_free(prob) };
}

#[test]
fn error_codes() {
    let mut prob = ptr::null_mut();
    assert_eq!(unsafe { sbfs_problem_parse(ptr::null(), &mut prob) }, SbfsStatus::NullArg);
    assert!(prob.is_null());
    assert!(last_error().contains("text"));

    let bad = CString::new("(problem x (nums (a 0)) (goal (> b 1)))").unwrap();
    assert_eq!(unsafe { sbfs_problem_parse(bad.as_ptr(), &mut prob) }, SbfsStatus::Parse);
    assert!(!last_error().is_empty());

    let bad_utf8 = [0x28u8, 0xff, 0xfe, 0];
    assert_eq!(unsafe { sbfs_problem_parse(bad_utf8.as_ptr().cast(), &mut prob) }, SbfsStatus::Utf8);

    let spec = CString::new("warp-drive n=2").unwrap();
    assert_eq!(unsafe { sbfs_problem_generate(spec.as_ptr(), &mut prob) }, SbfsStatus::Config);

    let text = CString::new(COUNTERS).unwrap();
    assert_eq!(unsafe { sbfs_problem_parse(text.as_ptr(), &mut prob) }, SbfsStatus::Ok);
    let flags = CString::new("--rect cubic").unwrap();
    let mut res = ptr::null_mut();
    assert_eq!(unsafe { sbfs_solve(prob, flags.as_ptr(), &mut res) }, SbfsStatus::Config);
    assert!(res.is_null());
    assert!(last_error().contains("cubic"));
    assert_eq!(unsafe { sbfs_solve(ptr::null(), ptr::null(), &mut res) }, SbfsStatus::NullArg);
    assert_eq!(unsafe { sbfs_solve(prob, ptr::null(), ptr::null_mut()) }, SbfsStatus::NullArg);
    unsafe {
        sbfs_problem_free(prob);
        sbfs_problem_free(ptr::null_mut());
        sbfs_result_free(ptr::null_mut());
        sbfs_string_free(ptr::null_mut());
    }
}

#[test]
fn unsolved_result() {
    let text = CString::new(
        "(problem stuck (bools) (nums (x 0)) (controls (u 0 1)) (action a (pre (>= (- x 5) 0)) (eff (assign x (+ x u)))) (goal (and (>= (- x 1) 0))))",
    )
    .unwrap();
    let mut prob = ptr::null_mut();
    assert_eq!(unsafe { sbfs_problem_parse(text.as_ptr(), &mut prob) }, SbfsStatus::Ok, "{}", last_error());
    let flags = CString::new("--expansion-limit 20").unwrap();
    let mut res = ptr::null_mut();
    assert_eq!(unsafe { sbfs_solve(prob, flags.as_ptr(), &mut res) }, SbfsStatus::Ok);
    unsafe {
        assert_eq!(sbfs_result_outcome(res), SbfsOutcome::Budget);
        assert_eq!(sbfs_result_plan_len(res), -1);
        let mut plan = ptr::null_mut();
        assert_eq!(sbfs_result_plan_text(res, &mut plan), SbfsStatus::Ok);
        assert_eq!(take_string(plan), "");
        sbfs_result_free(res);
        sbfs_problem_free(prob);
    }
}

fn target_dir() -> PathBuf {
    // target/<profile>/deps/abi-xxxx
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(|d| d.parent()).unwrap().to_path_buf()
}

#[test]
fn c_example_links_and_runs() {
    let lib = target_dir().join("libsbfs_ffi.a");
    if !lib.exists() {
        eprintln!("skipping: {} not built", lib.display());
        return;
    }
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler");
        return;
    }
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let out = tempfile::tempdir().unwrap();
    let bin = out.path().join("solve");
    let status = Command::new("cc")
        .arg(crate_dir.join("examples/solve.c"))
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let run = Command::new(&bin).output().unwrap();
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert!(run.status.success(), "{stdout}\n{}", String::from_utf8_lossy(&run.stderr));
    assert!(stdout.starts_with("outcome=0 plan_len="), "{stdout}");
    assert!(stdout.contains("; plan steps="));

    let bad = Command::new(&bin).args(["nope n=1"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).starts_with("generate: "));
}
