//! The generated header must compile as C and as C++ when a compiler is
//! available.

use std::path::PathBuf;
use std::process::Command;

fn header_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include")
}

fn compiles(compiler: &str, extra: &[&str]) -> Option<bool> {
    let probe = std::env::temp_dir().join(format!("betacoal-header-{}-{compiler}.c", std::process::id()));
    std::fs::write(
        &probe,
        "#include \"betacoal.h\"\nint main(void) { double x; return bc_h(3, 1.0, &x) == BC_STATUS_OK ? 0 : 1; }\n",
    )
    .ok()?;
    let status = Command::new(compiler)
        .args(extra)
        .arg("-fsyntax-only")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(header_dir())
        .arg(&probe)
        .status();
    let _ = std::fs::remove_file(&probe);
    status.ok().map(|s| s.success())
}

#[test]
fn header_declares_the_api() {
    let text = std::fs::read_to_string(header_dir().join("betacoal.h")).unwrap();
    for name in [
        "bc_last_error_message",
        "bc_version",
        "bc_log_gamma",
        "bc_hurwitz_zeta",
        "bc_collision_rate",
        "bc_jump_pmf_new",
        "bc_jump_pmf_free",
        "bc_moment_table_new",
        "bc_expansion_coeffs_new",
        "bc_sample_collisions",
        "BC_STATUS_RESOURCE",
        "typedef struct BcJumpPmf BcJumpPmf",
    ] {
        assert!(text.contains(name), "{name} missing from header");
    }
}

#[test]
fn header_compiles() {
    for (compiler, extra) in [("cc", vec!["-std=c11"]), ("c++", vec!["-x", "c++"])] {
        if let Some(ok) = compiles(compiler, &extra) {
            assert!(ok, "{compiler} rejected the header");
        }
    }
}
