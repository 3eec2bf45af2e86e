//! C ABI over `quatrad`.
//!
//! Matrices and spectral decompositions are opaque heap handles owned by
//! the caller and released with the matching `*_free` function. Quaternions
//! cross the boundary as four doubles `w, x, y, z`; matrices as row-major
//! runs of such quadruples. Every function returns a [`QrStatus`]; on
//! failure [`qr_last_error`] describes the problem for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use quatrad::factor::{modulus, polar, sqrt_positive};
use quatrad::normattain::lindenstrauss_general;
use quatrad::numrange::{numerical_radius, OptimizerConfig};
use quatrad::qlinalg::random_matrix;
use quatrad::spectral::{
    in_point_spectrum, point_spectrum_classes, spectral_decomposition, SpectralDecomposition,
};
use quatrad::{EigenClass, Error, MatrixKind, NumericConfig, QMatrix, Quaternion};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Shape = 3,
    NotNormal = 4,
    NotPositive = 5,
    ZeroOperator = 6,
    Parse = 7,
    Numeric = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QrKind {
    General = 0,
    Normal = 1,
    SelfAdjoint = 2,
    Positive = 3,
    Unitary = 4,
}

impl From<QrKind> for MatrixKind {
    fn from(k: QrKind) -> Self {
        match k {
            QrKind::General => MatrixKind::General,
            QrKind::Normal => MatrixKind::Normal,
            QrKind::SelfAdjoint => MatrixKind::SelfAdjoint,
            QrKind::Positive => MatrixKind::Positive,
            QrKind::Unitary => MatrixKind::Unitary,
        }
    }
}

/// Opaque quaternionic matrix.
pub struct QrMatrix {
    inner: QMatrix,
}

/// Opaque spectral decomposition of a normal matrix.
pub struct QrSpectrum {
    inner: SpectralDecomposition,
    classes: Vec<EigenClass>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Fail(QrStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Domain(_) | Error::Precondition(_) | Error::NonUnit { .. } => {
                QrStatus::InvalidArgument
            }
            Error::Shape { .. } | Error::NotSquare { .. } => QrStatus::Shape,
            Error::NotNormal { .. } | Error::NotHermitian { .. } => QrStatus::NotNormal,
            Error::NotPositive => QrStatus::NotPositive,
            Error::ZeroOperator => QrStatus::ZeroOperator,
            Error::Parse { .. } | Error::Malformed(_) => QrStatus::Parse,
            Error::Structure { .. } => QrStatus::Numeric,
        };
        Fail(status, e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(QrStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> QrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QrStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            QrStatus::Panic
        }
    }
}

unsafe fn matrix_ref<'a>(m: *const QrMatrix) -> Result<&'a QMatrix, Fail> {
    // SAFETY: caller passes a live handle or null.
    unsafe { m.as_ref() }
        .map(|m| &m.inner)
        .ok_or_else(|| null("matrix"))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    // SAFETY: non-null and, per the caller contract, valid for writes.
    unsafe { out.write(value) };
    Ok(())
}

fn boxed(m: QMatrix) -> *mut QrMatrix {
    Box::into_raw(Box::new(QrMatrix { inner: m }))
}

fn write_quaternion(out: *mut f64, q: Quaternion) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output buffer"));
    }
    // SAFETY: caller provides room for four doubles.
    unsafe { ptr::copy_nonoverlapping(q.to_array().as_ptr(), out, 4) };
    Ok(())
}

fn read_quaternion(q: *const f64) -> Result<Quaternion, Fail> {
    if q.is_null() {
        return Err(null("quaternion"));
    }
    let mut c = [0.0; 4];
    // SAFETY: caller provides four readable doubles.
    unsafe { ptr::copy_nonoverlapping(q, c.as_mut_ptr(), 4) };
    let q = Quaternion::from(c);
    if !q.is_finite() {
        return Err(Fail(
            QrStatus::InvalidArgument,
            "quaternion is not finite".into(),
        ));
    }
    Ok(q)
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qr_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Copies `4·rows·cols` doubles (row-major quadruples) into a new matrix.
///
/// # Safety
/// `data` must point to `4·rows·cols` readable doubles and `out` must be
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qr_matrix_new(
    rows: usize,
    cols: usize,
    data: *const f64,
    out: *mut *mut QrMatrix,
) -> QrStatus {
    guard(|| {
        let len = rows
            .checked_mul(cols)
            .and_then(|k| k.checked_mul(4))
            .ok_or_else(|| Fail(QrStatus::InvalidArgument, "dimensions overflow".into()))?;
        if data.is_null() && len > 0 {
            return Err(null("data"));
        }
        let raw: &[f64] = if len == 0 {
            &[]
        } else {
            // SAFETY: caller guarantees `len` readable doubles.
            unsafe { std::slice::from_raw_parts(data, len) }
        };
        if let Some(i) = raw.iter().position(|v| !v.is_finite()) {
            return Err(Fail(
                QrStatus::InvalidArgument,
                format!("entry {} is not finite", i / 4),
            ));
        }
        let q = raw
            .chunks(4)
            .map(|c| Quaternion::new(c[0], c[1], c[2], c[3]))
            .collect();
        let m = QMatrix::from_row_major(rows, cols, q)?;
        unsafe { write_out(out, boxed(m)) }
    })
}

/// Random matrix of the requested kind; deterministic in `seed`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qr_matrix_random(
    kind: QrKind,
    n: usize,
    seed: u64,
    out: *mut *mut QrMatrix,
) -> QrStatus {
    guard(|| {
        if n == 0 {
            return Err(Fail(QrStatus::InvalidArgument, "n must be positive".into()));
        }
        unsafe { write_out(out, boxed(random_matrix(kind.into(), n, seed))) }
    })
}

/// Parses the matrix JSON schema `{"n", "m", "entries"}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qr_matrix_from_json(
    json: *const c_char,
    out: *mut *mut QrMatrix,
) -> QrStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        // SAFETY: caller guarantees a NUL-terminated string.
        let text = unsafe { CStr::from_ptr(json) }
            .to_str()
            .map_err(|e| Fail(QrStatus::Parse, e.to_string()))?;
        let m = quatrad::io::matrix_from_json(text)?;
        unsafe { write_out(out, boxed(m)) }
    })
}

/// Serializes to JSON; release the string with [`qr_string_free`].
///
/// # Safety
/// `m` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qr_matrix_to_json(m: *const QrMatrix, out: *mut *mut c_char) -> QrStatus {
    guard(|| {
        let m = unsafe { matrix_ref(m)? };
        let s = CString::new(quatrad::io::matrix_to_json(m)).expect("JSON has no NUL bytes");
        unsafe { write_out(out, s.into_raw()) }
    })
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn qr_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: produced by CString::into_raw in this crate.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// # Safety
/// `m` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qr_matrix_clone(m: *const QrMatrix, out: *mut *mut QrMatrix) -> QrStatus {
    guard(|| {
        let m = unsafe { matrix_ref(m)? };
        unsafe { write_out(out, boxed(m.clone())) }
    })
}

/// # Safety
/// `m` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn qr_matrix_free(m: *mut QrMatrix) {
    if !m.is_null() {
        // SAFETY: produced by Box::into_raw in this crate.
        drop(unsafe { Box::from_raw(m) });
    }
}

/// Number of rows, or 0 for a null handle.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qr_matrix_rows(m: *const QrMatrix) -> usize {
    unsafe { m.as_ref() }.map_or(0, |m| m.inner.rows())
}

/// Number of columns, or 0 for a null handle.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qr_matrix_cols(m: *const QrMatrix) -> usize {
    unsafe { m.as_ref() }.map_or(0, |m| m.inner.cols())
}

/// Writes entry `(r, c)` as four doubles.
///
/// # Safety
/// `m` must be a live handle and `out` must have room for four doubles.
#[no_mangle]
pub unsafe extern "C" fn qr_matrix_get(
    m: *const QrMatrix,
    r: usize,
    c: usize,
    out: *mut f64,
) -> QrStatus {
    guard(|| {
        let m = unsafe { matrix_ref(m)? };
        if r >= m.rows() || c >= m.cols() {
            return Err(Fail(
                QrStatus::Shape,
                format!("index ({r}, {c}) out of range"),
            ));
        }
        write_quaternion(out, m[(r, c)])
    })
}

/// Copies all entries row-major into `buf`, which holds `len` doubles.
///
/// # Safety
/// `m` must be a live handle and `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn qr_matrix_copy_data(
    m: *const QrMatrix,
    buf: *mut f64,
    len: usize,
) -> QrStatus {
    guard(|| {
        let m = unsafe { matrix_ref(m)? };
        let need = 4 * m.data().len();
        if len < need {
            return Err(Fail(
                QrStatus::Shape,
                format!("buffer holds {len} doubles, need {need}"),
            ));
        }
        if buf.is_null() {
            return Err(null("buffer"));
        }
        for (k, q) in m.data().iter().enumerate() {
            // SAFETY: `buf` has at least `need` slots.
            unsafe { ptr::copy_nonoverlapping(q.to_array().as_ptr(), buf.add(4 * k), 4) };
        }
        Ok(())
    })
}

/// # Safety
/// `m` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qr_operator_norm(m: *const QrMatrix, out: *mut f64) -> QrStatus {
    guard(|| {
        let m = unsafe { matrix_ref(m)? };
        unsafe { write_out(out, m.operator_norm()) }
    })
}

/// Numerical radius estimate by projected gradient ascent.
///
/// # Safety
/// `m` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qr_numerical_radius(
    m: *const QrMatrix,
    restarts: usize,
    max_iters: usize,
    seed: u64,
    out: *mut f64,
) -> QrStatus {
    guard(|| {
        let m = unsafe { matrix_ref(m)? };
        let cfg = OptimizerConfig {
            restarts,
            max_iters,
            seed,
            ..OptimizerConfig::default()
        };
        let est = numerical_radius(m, &cfg)?;
        unsafe { write_out(out, est.value) }
    })
}

/// # Safety
/// `m` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qr_is_normal(m: *const QrMatrix, out: *mut bool) -> QrStatus {
    guard(|| {
        let m = unsafe { matrix_ref(m)? };
        unsafe { write_out(out, m.is_normal(&NumericConfig::default())) }
    })
}

/// Whether `q` (four doubles) lies in the spherical point spectrum.
///
/// # Safety
/// `m` must be a live handle, `q` four readable doubles, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qr_in_point_spectrum(
    m: *const QrMatrix,
    q: *const f64,
    out: *mut bool,
) -> QrStatus {
    guard(|| {
        let m = unsafe { matrix_ref(m)? };
        let q = read_quaternion(q)?;
        let ans = in_point_spectrum(m, q, &NumericConfig::default())?;
        unsafe { write_out(out, ans) }
    })
}

/// Spectral decomposition of a normal matrix.
///
/// # Safety
/// `m` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qr_spectrum(m: *const QrMatrix, out: *mut *mut QrSpectrum) -> QrStatus {
    guard(|| {
        let m = unsafe { matrix_ref(m)? };
        let cfg = NumericConfig::default();
        let d = spectral_decomposition(m, &cfg)?;
        let classes = point_spectrum_classes(&d, &cfg);
        unsafe {
            write_out(
                out,
                Box::into_raw(Box::new(QrSpectrum { inner: d, classes })),
            )
        }
    })
}

/// Number of stored eigenpairs (nonzero eigenvalues), or 0 for null.
///
/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qr_spectrum_len(s: *const QrSpectrum) -> usize {
    unsafe { s.as_ref() }.map_or(0, |s| s.inner.len())
}

/// Standardized eigenvalue `k` as four doubles.
///
/// # Safety
/// `s` must be a live handle and `out` must have room for four doubles.
#[no_mangle]
pub unsafe extern "C" fn qr_spectrum_eigenvalue(
    s: *const QrSpectrum,
    k: usize,
    out: *mut f64,
) -> QrStatus {
    guard(|| {
        let s = unsafe { s.as_ref() }.ok_or_else(|| null("spectrum"))?;
        let q = *s
            .inner
            .qs
            .get(k)
            .ok_or_else(|| Fail(QrStatus::Shape, format!("index {k} out of range")))?;
        write_quaternion(out, q)
    })
}

/// Eigenvector `k` as `4·n` doubles into `buf` of length `len`.
///
/// # Safety
/// `s` must be a live handle and `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn qr_spectrum_eigenvector(
    s: *const QrSpectrum,
    k: usize,
    buf: *mut f64,
    len: usize,
) -> QrStatus {
    guard(|| {
        let s = unsafe { s.as_ref() }.ok_or_else(|| null("spectrum"))?;
        let phi = s
            .inner
            .phis
            .get(k)
            .ok_or_else(|| Fail(QrStatus::Shape, format!("index {k} out of range")))?;
        if len < 4 * phi.len() {
            return Err(Fail(
                QrStatus::Shape,
                format!("buffer holds {len} doubles, need {}", 4 * phi.len()),
            ));
        }
        for (i, q) in phi.iter().enumerate() {
            // SAFETY: `buf` has at least 4·n slots; `buf.add` stays in range.
            write_quaternion(unsafe { buf.add(4 * i) }, *q)?;
        }
        Ok(())
    })
}

/// Number of distinct eigenvalue classes.
///
/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qr_spectrum_class_count(s: *const QrSpectrum) -> usize {
    unsafe { s.as_ref() }.map_or(0, |s| s.classes.len())
}

/// Class `k` as `(re, |im|)`.
///
/// # Safety
/// `s` must be a live handle; `re` and `im_mod` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qr_spectrum_class(
    s: *const QrSpectrum,
    k: usize,
    re: *mut f64,
    im_mod: *mut f64,
) -> QrStatus {
    guard(|| {
        let s = unsafe { s.as_ref() }.ok_or_else(|| null("spectrum"))?;
        let c = s
            .classes
            .get(k)
            .ok_or_else(|| Fail(QrStatus::Shape, format!("index {k} out of range")))?;
        unsafe {
            write_out(re, c.re)?;
            write_out(im_mod, c.im_mod)
        }
    })
}

/// # Safety
/// `s` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn qr_spectrum_free(s: *mut QrSpectrum) {
    if !s.is_null() {
        // SAFETY: produced by Box::into_raw in this crate.
        drop(unsafe { Box::from_raw(s) });
    }
}

/// Polar factors `A = V|A|`; both outputs are new handles.
///
/// # Safety
/// `m` must be a live handle; `v` and `abs` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qr_polar(
    m: *const QrMatrix,
    v: *mut *mut QrMatrix,
    abs: *mut *mut QrMatrix,
) -> QrStatus {
    guard(|| {
        let m = unsafe { matrix_ref(m)? };
        if v.is_null() || abs.is_null() {
            return Err(null("output pointer"));
        }
        let pd = polar(m, &NumericConfig::default())?;
        unsafe {
            write_out(v, boxed(pd.v))?;
            write_out(abs, boxed(pd.abs_t))
        }
    })
}

/// Square root of a positive matrix.
///
/// # Safety
/// `m` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qr_sqrt_positive(m: *const QrMatrix, out: *mut *mut QrMatrix) -> QrStatus {
    guard(|| {
        let m = unsafe { matrix_ref(m)? };
        let s = sqrt_positive(m, &NumericConfig::default())?;
        unsafe { write_out(out, boxed(s)) }
    })
}

/// `|A| = (A*A)^{1/2}`.
///
/// # Safety
/// `m` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qr_modulus(m: *const QrMatrix, out: *mut *mut QrMatrix) -> QrStatus {
    guard(|| {
        let m = unsafe { matrix_ref(m)? };
        let s = modulus(m, &NumericConfig::default())?;
        unsafe { write_out(out, boxed(s)) }
    })
}

/// Rank-one `K` with `‖K‖ ≤ eps` such that `A + K` attains its norm at the
/// returned witness. `achieved` receives `‖(A + K)x‖` and `norm` receives
/// `‖A + K‖`; `witness` (may be null) receives `4·n` doubles.
///
/// # Safety
/// `m` must be a live handle; `k`, `achieved` and `norm` writable; `witness`
/// null or valid for `4·n` writes.
#[no_mangle]
pub unsafe extern "C" fn qr_lindenstrauss(
    m: *const QrMatrix,
    eps: f64,
    k: *mut *mut QrMatrix,
    witness: *mut f64,
    achieved: *mut f64,
    norm: *mut f64,
) -> QrStatus {
    guard(|| {
        let m = unsafe { matrix_ref(m)? };
        if k.is_null() || achieved.is_null() || norm.is_null() {
            return Err(null("output pointer"));
        }
        let p = lindenstrauss_general(m, eps, &NumericConfig::default())?;
        if !witness.is_null() {
            for (i, q) in p.witness.x.iter().enumerate() {
                // SAFETY: caller provides 4·n slots.
                write_quaternion(unsafe { witness.add(4 * i) }, *q)?;
            }
        }
        unsafe {
            write_out(achieved, p.witness.achieved)?;
            write_out(norm, p.witness.norm)?;
            write_out(k, boxed(p.k))
        }
    })
}
