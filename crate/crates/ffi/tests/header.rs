use std::path::Path;
use std::process::Command;

#[test]
fn header_is_current_and_compiles() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/spinlab.h"))
        .expect("header generated by build.rs");
    for name in [
        "spinlab_coroot",
        "spinlab_multivector_gp",
        "spinlab_multivector_free",
        "spinlab_approx_unit",
        "spinlab_width",
        "spinlab_verify_certificate",
        "spinlab_string_free",
        "SPINLAB_STATUS_INVALID_ARGUMENT",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }

    let Ok(cc) = which_cc() else {
        eprintln!("no C compiler found; header syntax not checked");
        return;
    };
    let src = std::env::temp_dir().join(format!("spinlab-header-{}.c", std::process::id()));
    std::fs::write(
        &src,
        "#include \"spinlab.h\"\nint main(void) { SpinlabMultivector *h = 0; return spinlab_coroot(8, 1, \"2\", &h) == SPINLAB_STATUS_OK ? 0 : 1; }\n",
    )
    .unwrap();
    let out = Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(dir.join("include"))
        .arg(&src)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

fn which_cc() -> Result<&'static str, ()> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| {
            Command::new(c)
                .arg("--version")
                .output()
                .is_ok_and(|o| o.status.success())
        })
        .ok_or(())
}
