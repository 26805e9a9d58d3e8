use std::path::{Path, PathBuf};
use std::process::Command;

fn target_dir() -> PathBuf {
    // target/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

const PROGRAM: &str = r#"
#include <math.h>
#include <stdio.h>
#include <string.h>
#include "nilmetric.h"

int main(void) {
    NmWord *w = NULL;
    NmElement *x = NULL;
    char *nf = NULL;
    if (nm_word_parse("a[1,2]^1 a[2,3]^1", 0, &w) != NM_STATUS_OK) return 1;
    if (nm_word_evaluate(w, 3, &x) != NM_STATUS_OK) return 2;
    if (nm_normal_form_string(x, 0, &nf) != NM_STATUS_OK) return 3;
    if (strcmp(nf, "a[1,3]^1 a[2,3]^1 a[1,2]^1") != 0) return 4;
    nm_string_free(nf);

    double e = 0;
    NmElement *c = NULL;
    if (nm_element_from_json("{\"dim\":3,\"entries\":[[1,3,9]]}", &c) != NM_STATUS_OK) return 5;
    if (nm_estimate(c, 0, &e) != NM_STATUS_OK || e != 3.0) return 6;

    NmWord *sw = NULL;
    uint64_t len = 0;
    if (nm_short_word(c, 1, &sw) != NM_STATUS_OK) return 7;
    if (nm_word_length(sw, &len) != NM_STATUS_OK || (double)len > 16.0 * 3.0) return 8;

    NmWord *bad = NULL;
    if (nm_word_parse("a[3,1]", 0, &bad) != NM_STATUS_PARSE_ERROR) return 9;
    if (nm_last_error_message() == NULL) return 10;

    printf("ok\n");
    nm_word_free(sw);
    nm_word_free(w);
    nm_element_free(x);
    nm_element_free(c);
    return 0;
}
"#;

#[test]
fn c_program_links_against_the_static_library() {
    let lib = target_dir().join("libnilmetric_ffi.a");
    if !lib.exists() {
        panic!("static library not found at {}", lib.display());
    }
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let exe = dir.path().join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = Command::new(&cc)
        .arg("-std=c11")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap_or_else(|e| panic!("cannot run {cc}: {e}"));
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
