//! Helpers shared by the integration test targets.

#![allow(dead_code)]

use std::env;
use std::fs;
use std::path::{Path, PathBuf};

/// Absolute path of a file addressed relative to the workspace root.
pub fn repo_path(relative: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").join(relative)
}

/// True when the run should rewrite the committed data and golden files.
pub fn update_goldens() -> bool {
    env::var_os("UPDATE_GOLDENS").is_some()
}

/// Writes via a temporary file and rename, so concurrent readers in the
/// same test run never observe a half-written file.
pub fn write_atomic(path: &Path, content: &str) {
    use std::sync::atomic::{AtomicUsize, Ordering};
    static SEQ: AtomicUsize = AtomicUsize::new(0);
    let tmp = path.with_extension(format!("tmp{}", SEQ.fetch_add(1, Ordering::Relaxed)));
    fs::write(&tmp, content).unwrap_or_else(|e| panic!("write {}: {e}", tmp.display()));
    fs::rename(&tmp, path).unwrap_or_else(|e| panic!("rename to {}: {e}", path.display()));
}

/// Compares `actual` against the committed file at `relative`, or rewrites
/// that file when `UPDATE_GOLDENS` is set.
pub fn check_golden(relative: &str, actual: &str) {
    let path = repo_path(relative);
    if update_goldens() {
        write_atomic(&path, actual);
        return;
    }
    let expected = fs::read_to_string(&path).unwrap_or_else(|e| {
        panic!("read {}: {e}; run with UPDATE_GOLDENS=1 to create it", path.display())
    });
    assert_eq!(actual, expected, "{relative} is stale; rerun with UPDATE_GOLDENS=1");
}
