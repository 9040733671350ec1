//! Thin LAPACK wrappers for the dense work: symmetric eigendecomposition
//! (divide and conquer) and singular value decomposition.
//!
//! Matrices are stored column-major in a flat `Vec<f64>`; for the symmetric
//! eigensolve the layout is immaterial on input.

use crate::error::{Error, Result};

/// Real symmetric eigendecomposition, eigenvalues ascending.
///
/// Returns `(eigenvalues, eigenvectors)` with eigenvector `i` stored in
/// `vectors[i * n .. (i + 1) * n]`.
pub fn eigh(n: usize, mut a: Vec<f64>) -> Result<(Vec<f64>, Vec<f64>)> {
    assert_eq!(a.len(), n * n);
    if n == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    let nn = n as i32;
    let mut w = vec![0.0f64; n];
    let lwork = 1 + 6 * n + 2 * n * n;
    let liwork = 3 + 5 * n;
    let mut work = vec![0.0f64; lwork];
    let mut iwork = vec![0i32; liwork];
    let mut info = 0i32;
    unsafe {
        lapack_sys::dsyevd_(
            &(b'V' as std::ffi::c_char),
            &(b'L' as std::ffi::c_char),
            &nn,
            a.as_mut_ptr(),
            &nn,
            w.as_mut_ptr(),
            work.as_mut_ptr(),
            &(lwork as i32),
            iwork.as_mut_ptr(),
            &(liwork as i32),
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Lapack { routine: "dsyevd", info });
    }
    Ok((w, a))
}

/// Eigenvalues only.
pub fn eigvalsh(n: usize, mut a: Vec<f64>) -> Result<Vec<f64>> {
    assert_eq!(a.len(), n * n);
    let nn = n as i32;
    let mut w = vec![0.0f64; n];
    let lwork = 1 + 2 * n;
    let liwork = 1usize;
    let mut work = vec![0.0f64; lwork.max(2 * n + 1)];
    let mut iwork = vec![0i32; liwork];
    let mut info = 0i32;
    unsafe {
        lapack_sys::dsyevd_(
            &(b'N' as std::ffi::c_char),
            &(b'L' as std::ffi::c_char),
            &nn,
            a.as_mut_ptr(),
            &nn,
            w.as_mut_ptr(),
            work.as_mut_ptr(),
            &(work.len() as i32),
            iwork.as_mut_ptr(),
            &(iwork.len() as i32),
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Lapack { routine: "dsyevd", info });
    }
    Ok(w)
}

/// Full SVD of a square real matrix `a` (column-major), `a = u * diag(s) * vt`.
///
/// Singular values come back in LAPACK's descending order; callers that want
/// them ascending reverse the columns themselves.
pub fn svd(n: usize, mut a: Vec<f64>) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    assert_eq!(a.len(), n * n);
    let nn = n as i32;
    let mut s = vec![0.0f64; n];
    let mut u = vec![0.0f64; n * n];
    let mut vt = vec![0.0f64; n * n];
    let lwork = 4 * n * n + 7 * n;
    let mut work = vec![0.0f64; lwork];
    let mut iwork = vec![0i32; 8 * n];
    let mut info = 0i32;
    unsafe {
        lapack_sys::dgesdd_(
            &(b'A' as std::ffi::c_char),
            &nn,
            &nn,
            a.as_mut_ptr(),
            &nn,
            s.as_mut_ptr(),
            u.as_mut_ptr(),
            &nn,
            vt.as_mut_ptr(),
            &nn,
            work.as_mut_ptr(),
            &(lwork as i32),
            iwork.as_mut_ptr(),
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Lapack { routine: "dgesdd", info });
    }
    Ok((u, s, vt))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigh_2x2() {
        // [[0,1],[1,0]] has eigenvalues -1, +1
        let (w, v) = eigh(2, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        assert!((w[0] + 1.0).abs() < 1e-12);
        assert!((w[1] - 1.0).abs() < 1e-12);
        // residual check
        for i in 0..2 {
            let x = [v[i * 2], v[i * 2 + 1]];
            let hx = [x[1], x[0]];
            assert!((hx[0] - w[i] * x[0]).abs() < 1e-12);
            assert!((hx[1] - w[i] * x[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn svd_diag() {
        let (_u, s, _vt) = svd(3, vec![3.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 2.0]).unwrap();
        assert!((s[0] - 3.0).abs() < 1e-12);
        assert!((s[1] - 2.0).abs() < 1e-12);
        assert!((s[2] - 1.0).abs() < 1e-12);
    }
}
