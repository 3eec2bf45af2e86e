use std::ffi::{CStr, CString};
use std::ptr;

use quatrad_ffi::*;

fn last_error() -> String {
    let p = qr_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn diag(entries: &[[f64; 4]]) -> *mut QrMatrix {
    let n = entries.len();
    let mut data = vec![0.0; 4 * n * n];
    for (k, q) in entries.iter().enumerate() {
        data[4 * (k * n + k)..4 * (k * n + k) + 4].copy_from_slice(q);
    }
    let mut m = ptr::null_mut();
    assert_eq!(
        unsafe { qr_matrix_new(n, n, data.as_ptr(), &mut m) },
        QrStatus::Ok
    );
    m
}

#[test]
fn matrix_lifecycle() {
    let m = diag(&[[3.0, 0.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0]]);
    unsafe {
        assert_eq!(qr_matrix_rows(m), 2);
        assert_eq!(qr_matrix_cols(m), 2);
        let mut q = [0.0; 4];
        assert_eq!(qr_matrix_get(m, 1, 1, q.as_mut_ptr()), QrStatus::Ok);
        assert_eq!(q, [0.0, 0.0, 1.0, 0.0]);
        assert_eq!(qr_matrix_get(m, 2, 0, q.as_mut_ptr()), QrStatus::Shape);

        let mut c = ptr::null_mut();
        assert_eq!(qr_matrix_clone(m, &mut c), QrStatus::Ok);
        let mut buf = [0.0; 16];
        assert_eq!(qr_matrix_copy_data(c, buf.as_mut_ptr(), 16), QrStatus::Ok);
        assert_eq!(buf[0], 3.0);
        assert_eq!(
            qr_matrix_copy_data(c, buf.as_mut_ptr(), 15),
            QrStatus::Shape
        );

        let mut norm = 0.0;
        assert_eq!(qr_operator_norm(m, &mut norm), QrStatus::Ok);
        assert!((norm - 3.0).abs() < 1e-13);
        let mut normal = false;
        assert_eq!(qr_is_normal(m, &mut normal), QrStatus::Ok);
        assert!(normal);

        qr_matrix_free(c);
        qr_matrix_free(m);
        qr_matrix_free(ptr::null_mut());
        assert_eq!(qr_matrix_rows(ptr::null()), 0);
    }
}

#[test]
fn json_round_trip() {
    let mut m = ptr::null_mut();
    unsafe {
        assert_eq!(
            qr_matrix_random(QrKind::Normal, 3, 42, &mut m),
            QrStatus::Ok
        );
        let mut s = ptr::null_mut();
        assert_eq!(qr_matrix_to_json(m, &mut s), QrStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(qr_matrix_from_json(s, &mut back), QrStatus::Ok);
        let (mut a, mut b) = ([0.0; 36], [0.0; 36]);
        qr_matrix_copy_data(m, a.as_mut_ptr(), 36);
        qr_matrix_copy_data(back, b.as_mut_ptr(), 36);
        assert_eq!(a, b);
        qr_string_free(s);
        qr_matrix_free(back);
        qr_matrix_free(m);

        let bad = CString::new(r#"{"n":1,"m":1,"entries":[[1,2,"x",4]]}"#).unwrap();
        let mut out = ptr::null_mut();
        assert_eq!(qr_matrix_from_json(bad.as_ptr(), &mut out), QrStatus::Parse);
        assert!(out.is_null());
        assert!(last_error().contains("entry 0"));
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut out = ptr::null_mut();
        let data = [0.0, f64::NAN, 0.0, 0.0];
        assert_eq!(
            qr_matrix_new(1, 1, data.as_ptr(), &mut out),
            QrStatus::InvalidArgument
        );
        assert!(last_error().contains("not finite"));
        assert_eq!(
            qr_matrix_new(1, 1, ptr::null(), &mut out),
            QrStatus::NullPointer
        );
        let mut norm = 0.0;
        assert_eq!(
            qr_operator_norm(ptr::null(), &mut norm),
            QrStatus::NullPointer
        );

        let zero = diag(&[[0.0; 4]]);
        let mut k = ptr::null_mut();
        let (mut ach, mut nrm) = (0.0, 0.0);
        assert_eq!(
            qr_lindenstrauss(zero, 0.1, &mut k, ptr::null_mut(), &mut ach, &mut nrm),
            QrStatus::ZeroOperator
        );
        let neg = diag(&[[-1.0, 0.0, 0.0, 0.0]]);
        let mut s = ptr::null_mut();
        assert_eq!(qr_sqrt_positive(neg, &mut s), QrStatus::NotPositive);
        let mut g = ptr::null_mut();
        qr_matrix_random(QrKind::General, 3, 1, &mut g);
        let mut spec = ptr::null_mut();
        assert_eq!(qr_spectrum(g, &mut spec), QrStatus::NotNormal);
        assert!(spec.is_null());
        qr_matrix_free(zero);
        qr_matrix_free(neg);
        qr_matrix_free(g);
    }
}

#[test]
fn spectrum_and_membership() {
    let m = diag(&[[0.0, 0.0, 1.0, 0.0], [2.0, 0.0, 0.0, 0.0]]);
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(qr_spectrum(m, &mut s), QrStatus::Ok);
        assert_eq!(qr_spectrum_len(s), 2);
        let mut q = [0.0; 4];
        assert_eq!(qr_spectrum_eigenvalue(s, 0, q.as_mut_ptr()), QrStatus::Ok);
        assert!((q[0] - 2.0).abs() < 1e-13);
        assert_eq!(qr_spectrum_eigenvalue(s, 1, q.as_mut_ptr()), QrStatus::Ok);
        assert!((q[1] - 1.0).abs() < 1e-13 && q[2].abs() < 1e-13);
        let mut phi = [0.0; 8];
        assert_eq!(
            qr_spectrum_eigenvector(s, 0, phi.as_mut_ptr(), 8),
            QrStatus::Ok
        );
        let n2: f64 = phi.iter().map(|v| v * v).sum();
        assert!((n2 - 1.0).abs() < 1e-13);
        assert_eq!(qr_spectrum_class_count(s), 2);
        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(qr_spectrum_class(s, 1, &mut re, &mut im), QrStatus::Ok);
        assert!((im - 1.0).abs() < 1e-13);
        qr_spectrum_free(s);

        let mut ans = false;
        let i = [0.0, 1.0, 0.0, 0.0];
        assert_eq!(qr_in_point_spectrum(m, i.as_ptr(), &mut ans), QrStatus::Ok);
        assert!(ans);
        let three = [3.0, 0.0, 0.0, 0.0];
        assert_eq!(
            qr_in_point_spectrum(m, three.as_ptr(), &mut ans),
            QrStatus::Ok
        );
        assert!(!ans);
        qr_matrix_free(m);
    }
}

#[test]
fn factors_and_perturbation() {
    unsafe {
        let mut a = ptr::null_mut();
        qr_matrix_random(QrKind::General, 4, 3, &mut a);
        let (mut v, mut abs) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(qr_polar(a, &mut v, &mut abs), QrStatus::Ok);
        let mut m = ptr::null_mut();
        assert_eq!(qr_modulus(a, &mut m), QrStatus::Ok);
        let (mut x, mut y) = ([0.0; 64], [0.0; 64]);
        qr_matrix_copy_data(abs, x.as_mut_ptr(), 64);
        qr_matrix_copy_data(m, y.as_mut_ptr(), 64);
        assert!(x.iter().zip(&y).all(|(p, q)| (p - q).abs() < 1e-12));

        let mut k = ptr::null_mut();
        let mut w = [0.0; 16];
        let (mut achieved, mut norm) = (0.0, 0.0);
        assert_eq!(
            qr_lindenstrauss(a, 0.2, &mut k, w.as_mut_ptr(), &mut achieved, &mut norm),
            QrStatus::Ok
        );
        assert!((achieved - norm).abs() < 1e-9 * norm);
        let mut kn = 0.0;
        qr_operator_norm(k, &mut kn);
        assert!(kn <= 0.2 + 1e-12);

        let mut r = 0.0;
        assert_eq!(qr_numerical_radius(a, 8, 300, 1, &mut r), QrStatus::Ok);
        let mut an = 0.0;
        qr_operator_norm(a, &mut an);
        assert!(r > 0.0 && r <= an + 1e-12);
        assert_eq!(
            qr_numerical_radius(a, 0, 300, 1, &mut r),
            QrStatus::InvalidArgument
        );

        for h in [a, v, abs, m, k] {
            qr_matrix_free(h);
        }
    }
}
