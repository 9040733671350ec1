fn main() {
    // lapack-sys only declares the FFI signatures; link the system OpenBLAS,
    // which bundles LAPACK.
    println!("cargo:rustc-link-lib=openblas");
}
