use std::env;
use std::path::PathBuf;

fn main() {
    let crate_dir = PathBuf::from(env::var("CARGO_MANIFEST_DIR").expect("cargo sets manifest dir"));
    let header = crate_dir.join("include").join("brieskorn.h");
    let mut config = cbindgen::Config::default();
    config.language = cbindgen::Language::C;
    config.include_guard = Some("BRIESKORN_H".to_string());
    config.documentation = true;
    config.cpp_compat = true;
    config.header = Some(
        "/* C interface of the fibered-Lagrangian invariant engine.\n\
         \x20* Generated by cbindgen; do not edit by hand. */"
            .to_string(),
    );
    cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_config(config)
        .generate()
        .expect("cbindgen generates the C header")
        .write_to_file(header);
    println!("cargo:rerun-if-changed=src/lib.rs");
}
