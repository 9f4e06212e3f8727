use std::ffi::CStr;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use dynsep_ffi::*;

fn complete(n: usize) -> *mut DynsepGraph {
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(dynsep_graph_new(n, &mut g), DynsepStatus::Ok);
        for u in 0..n {
            for v in u + 1..n {
                assert_eq!(dynsep_graph_insert_edge(g, u, v), DynsepStatus::Ok);
            }
        }
    }
    g
}

#[test]
fn graph_updates_and_errors() {
    unsafe {
        let g = complete(3);
        let mut count = 0;
        assert_eq!(dynsep_graph_edge_count(g, &mut count), DynsepStatus::Ok);
        assert_eq!(count, 3);
        assert_eq!(dynsep_graph_insert_edge(g, 0, 1), DynsepStatus::DuplicateEdge);
        assert_eq!(dynsep_graph_insert_edge(g, 2, 2), DynsepStatus::SelfLoop);
        assert_eq!(dynsep_graph_insert_edge(g, 0, 9), DynsepStatus::OutOfRange);
        assert_eq!(dynsep_graph_delete_edge(g, 0, 1), DynsepStatus::Ok);
        assert_eq!(dynsep_graph_delete_edge(g, 0, 1), DynsepStatus::MissingEdge);
        let mut present = true;
        assert_eq!(dynsep_graph_has_edge(g, 1, 0, &mut present), DynsepStatus::Ok);
        assert!(!present);
        assert_eq!(dynsep_graph_edge_count(ptr::null(), &mut count), DynsepStatus::NullPointer);
        assert_eq!(dynsep_graph_edge_count(g, ptr::null_mut()), DynsepStatus::NullPointer);
        dynsep_graph_free(g);
        dynsep_graph_free(ptr::null_mut());
    }
}

#[test]
fn decr_triangle_runs_to_none() {
    unsafe {
        let g = complete(4);
        let mut t = ptr::null_mut();
        assert_eq!(dynsep_decr_triangle_new(g, 3, &mut t), DynsepStatus::Ok);
        let (mut found, mut tri) = (false, [0usize; 3]);
        assert_eq!(dynsep_decr_triangle_active(t, &mut found, tri.as_mut_ptr()), DynsepStatus::Ok);
        assert!(found && tri[0] < tri[1] && tri[1] < tri[2]);
        // Deleting the three edges at vertex 0 and one more leaves a path.
        for (u, v) in [(0, 1), (0, 2), (0, 3), (1, 2)] {
            assert_eq!(dynsep_decr_triangle_delete(t, u, v, &mut found, tri.as_mut_ptr()), DynsepStatus::Ok);
        }
        assert!(!found);
        assert_eq!(dynsep_decr_triangle_delete(t, 0, 1, &mut found, tri.as_mut_ptr()), DynsepStatus::MissingEdge);
        let mut stages = 0;
        assert_eq!(dynsep_decr_triangle_stage_count(t, &mut stages), DynsepStatus::Ok);
        assert!(stages >= 1);
        dynsep_decr_triangle_free(t);
        dynsep_graph_free(g);
    }
}

#[test]
fn mis_follows_updates() {
    unsafe {
        let g = complete(3);
        let mut m = ptr::null_mut();
        assert_eq!(dynsep_mis_new(g, &mut m), DynsepStatus::Ok);
        let mut buf = [0usize; 3];
        let mut len = 0;
        assert_eq!(dynsep_mis_members(m, buf.as_mut_ptr(), 3, &mut len), DynsepStatus::Ok);
        assert_eq!(&buf[..len], &[0]);
        assert_eq!(dynsep_mis_delete_edge(m, 0, 2), DynsepStatus::Ok);
        assert_eq!(dynsep_mis_members(m, buf.as_mut_ptr(), 3, &mut len), DynsepStatus::Ok);
        assert_eq!(&buf[..len], &[0, 2]);
        assert_eq!(dynsep_mis_members(m, buf.as_mut_ptr(), 1, &mut len), DynsepStatus::BufferTooSmall);
        assert_eq!(len, 2);
        let mut inside = false;
        assert_eq!(dynsep_mis_contains(m, 1, &mut inside), DynsepStatus::Ok);
        assert!(!inside);
        assert_eq!(dynsep_mis_insert_edge(m, 0, 2), DynsepStatus::Ok);
        assert_eq!(dynsep_mis_members(m, buf.as_mut_ptr(), 3, &mut len), DynsepStatus::Ok);
        assert_eq!(&buf[..len], &[0]);
        let mut recourse = 0;
        assert_eq!(dynsep_mis_recourse(m, &mut recourse), DynsepStatus::Ok);
        assert_eq!(recourse, 2);
        dynsep_mis_free(m);
        dynsep_graph_free(g);
    }
}

#[test]
fn mccc_two_triangles() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(dynsep_graph_new(6, &mut g), DynsepStatus::Ok);
        for (u, v) in [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)] {
            assert_eq!(dynsep_graph_insert_edge(g, u, v), DynsepStatus::Ok);
        }
        let mut c = ptr::null_mut();
        assert_eq!(dynsep_mccc_new(g, 1, &mut c), DynsepStatus::Ok);
        assert_eq!(dynsep_mccc_delete_edge(c, 2, 3), DynsepStatus::Ok);
        let mut buf = [0usize; 6];
        let mut len = 0;
        assert_eq!(dynsep_mccc_output(c, buf.as_mut_ptr(), 6, &mut len), DynsepStatus::Ok);
        assert_eq!(&buf[..len], &[0, 1, 2, 3, 4, 5]);
        assert_eq!(dynsep_mccc_component_clique(c, 4, buf.as_mut_ptr(), 6, &mut len), DynsepStatus::Ok);
        assert_eq!(&buf[..len], &[3, 4, 5]);
        assert_eq!(dynsep_mccc_delete_edge(c, 2, 3), DynsepStatus::MissingEdge);
        dynsep_mccc_free(c);
        dynsep_graph_free(g);
    }
}

#[test]
fn status_messages_are_static_strings() {
    let msg = unsafe { CStr::from_ptr(dynsep_status_message(DynsepStatus::MissingEdge)) };
    assert_eq!(msg.to_str().unwrap(), "edge not present");
}

fn crate_dir() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn header_is_generated_and_complete() {
    let header = std::fs::read_to_string(crate_dir().join("include/dynsep.h")).unwrap();
    for sym in ["DynsepStatus", "DYNSEP_STATUS_NO_VALID_PIVOT", "dynsep_graph_new", "dynsep_mis_members", "dynsep_mccc_output"] {
        assert!(header.contains(sym), "header lacks {sym}");
    }
}

/// Compiles the C smoke program against the header and the static library
/// when a C compiler and the archive are available.
#[test]
fn c_program_links_and_runs() {
    let target = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).parent().unwrap().to_path_buf();
    let profile = if cfg!(debug_assertions) { "debug" } else { "release" };
    let archive = target.join(profile).join("libdynsep_ffi.a");
    if !archive.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no archive at {} or no C compiler", archive.display());
        return;
    }
    let exe = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("dynsep_smoke");
    let status = Command::new("cc")
        .arg(crate_dir().join("tests/c/smoke.c"))
        .arg("-I")
        .arg(crate_dir().join("include"))
        .arg(&archive)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "smoke program failed: {:?}", out);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
