//! Complex adjoint embedding `H^n → C^{2n}` over the slice `C_i`, and the
//! dense complex eigen kernels built on it.
//!
//! With `x = x₁ + x₂·j` and `A = A₁ + A₂·j` (all parts in `C_i`), the rule
//! `j·z = conj(z)·j` gives
//!
//! ```text
//! Ax = (A₁x₁ − A₂·conj(x₂)) + (A₁x₂ + A₂·conj(x₁))·j
//! ```
//!
//! so with `ψ(x) = (x₁, conj(x₂))` the image is
//! `χ(A) = [[A₁, −A₂], [conj(A₂), conj(A₁)]]` and `χ(A)ψ(x) = ψ(Ax)`.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::qlinalg::{QMatrix, QVector};
use crate::quat::Quaternion;
use crate::{Error, NumericConfig, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

pub type ComplexVector = Vec<Complex64>;

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ComplexMatrix::zeros(n, n);
        for k in 0..n {
            m[(k, k)] = ONE;
        }
        m
    }

    pub fn from_diag(d: &[Complex64]) -> Self {
        let mut m = ComplexMatrix::zeros(d.len(), d.len());
        for (k, &v) in d.iter().enumerate() {
            m[(k, k)] = v;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut m = ComplexMatrix::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m[(r, c)] = f(r, c);
            }
        }
        m
    }

    pub fn from_columns(rows: usize, cols: &[ComplexVector]) -> Self {
        ComplexMatrix::from_fn(rows, cols.len(), |r, c| cols[c][r])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, c: usize) -> ComplexVector {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn adjoint(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn mul(&self, o: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, o.rows, "shape mismatch");
        let mut out = ComplexMatrix::zeros(self.rows, o.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == ZERO {
                    continue;
                }
                for c in 0..o.cols {
                    out.data[r * o.cols + c] += a * o[(k, c)];
                }
            }
        }
        out
    }

    pub fn apply(&self, x: &[Complex64]) -> ComplexVector {
        assert_eq!(self.cols, x.len(), "shape mismatch");
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self[(r, c)] * x[c]).sum())
            .collect()
    }

    pub fn add(&self, o: &ComplexMatrix) -> ComplexMatrix {
        self.zip(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &ComplexMatrix) -> ComplexMatrix {
        self.zip(o, |a, b| a - b)
    }

    pub fn scale(&self, s: Complex64) -> ComplexMatrix {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| a * s).collect(),
        }
    }

    fn zip(
        &self,
        o: &ComplexMatrix,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&o.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn hermitian_defect(&self) -> f64 {
        self.sub(&self.adjoint()).frobenius_norm()
    }

    pub fn normality_defect(&self) -> f64 {
        let adj = self.adjoint();
        self.mul(&adj).sub(&adj.mul(self)).frobenius_norm()
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting; `None`
    /// when a pivot vanishes.
    pub fn inverse(&self) -> Option<ComplexMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = ComplexMatrix::identity(n);
        for col in 0..n {
            let piv =
                (col..n).max_by(|&x, &y| a[(x, col)].norm().total_cmp(&a[(y, col)].norm()))?;
            if a[(piv, col)].norm() == 0.0 {
                return None;
            }
            for c in 0..n {
                a.data.swap(col * n + c, piv * n + c);
                inv.data.swap(col * n + c, piv * n + c);
            }
            let p = a[(col, col)].inv();
            for c in 0..n {
                a[(col, c)] *= p;
                inv[(col, c)] *= p;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[(r, col)];
                if f == ZERO {
                    continue;
                }
                for c in 0..n {
                    let (ac, ic) = (a[(col, c)], inv[(col, c)]);
                    a[(r, c)] -= f * ac;
                    inv[(r, c)] -= f * ic;
                }
            }
        }
        Some(inv)
    }

    /// Largest singular value.
    pub fn operator_norm(&self) -> f64 {
        singular_values(self).first().copied().unwrap_or(0.0)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.cols + c]
    }
}

pub fn psi(x: &QVector) -> ComplexVector {
    let n = x.len();
    let mut out = vec![ZERO; 2 * n];
    for (k, q) in x.iter().enumerate() {
        let (a, b) = q.split_ci();
        out[k] = a;
        out[n + k] = b.conj();
    }
    out
}

pub fn unpsi(z: &[Complex64]) -> Result<QVector> {
    if !z.len().is_multiple_of(2) {
        return Err(Error::Shape {
            expected: "even length".into(),
            got: format!("length {}", z.len()),
        });
    }
    let n = z.len() / 2;
    Ok(QVector::new(
        (0..n)
            .map(|k| Quaternion::join_ci(z[k], z[n + k].conj()))
            .collect(),
    ))
}

pub fn chi(a: &QMatrix) -> ComplexMatrix {
    let (n, m) = (a.rows(), a.cols());
    let mut out = ComplexMatrix::zeros(2 * n, 2 * m);
    for r in 0..n {
        for c in 0..m {
            let (a1, a2) = a[(r, c)].split_ci();
            out[(r, c)] = a1;
            out[(r, m + c)] = -a2;
            out[(n + r, c)] = a2.conj();
            out[(n + r, m + c)] = a1.conj();
        }
    }
    out
}

/// Defect of the symplectic symmetry `M = [[P, −Q], [conj Q, conj P]]`.
pub fn symplectic_defect(m: &ComplexMatrix) -> f64 {
    if !m.rows.is_multiple_of(2) || !m.cols.is_multiple_of(2) {
        return f64::INFINITY;
    }
    let (n, k) = (m.rows / 2, m.cols / 2);
    let mut d = 0.0;
    for r in 0..n {
        for c in 0..k {
            d += (m[(n + r, k + c)] - m[(r, c)].conj()).norm_sqr();
            d += (m[(n + r, c)] + m[(r, k + c)].conj()).norm_sqr();
        }
    }
    d.sqrt()
}

pub fn unchi(m: &ComplexMatrix, cfg: &NumericConfig) -> Result<QMatrix> {
    let defect = symplectic_defect(m);
    if defect > cfg.tol_rel * m.frobenius_norm().max(1.0) {
        return Err(Error::Structure { defect });
    }
    let (n, k) = (m.rows / 2, m.cols / 2);
    Ok(QMatrix::from_fn(n, k, |r, c| {
        Quaternion::join_ci(m[(r, c)], -m[(r, k + c)])
    }))
}

/// Largest singular value of `χ(A)`, via the top eigenvalue of `χ(A)*χ(A)`.
pub fn operator_norm(a: &QMatrix) -> f64 {
    if a.data().iter().all(|q| *q == Quaternion::ZERO) {
        return 0.0;
    }
    let c = chi(a);
    let gram = c.adjoint().mul(&c);
    let eig = jacobi_hermitian(&gram);
    eig.values.first().copied().unwrap_or(0.0).max(0.0).sqrt()
}

/// Eigenvalues sorted descending with orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<ComplexVector>,
}

/// Eigen-decomposition of a normal matrix, sorted by descending modulus.
#[derive(Debug, Clone)]
pub struct NormalEigen {
    pub values: Vec<Complex64>,
    pub vectors: Vec<ComplexVector>,
}

pub fn eig_hermitian(m: &ComplexMatrix, cfg: &NumericConfig) -> Result<HermitianEigen> {
    if m.rows != m.cols {
        return Err(Error::Shape {
            expected: "square matrix".into(),
            got: format!("{}x{}", m.rows, m.cols),
        });
    }
    let defect = m.hermitian_defect();
    if defect > cfg.tol_rel * m.frobenius_norm().max(1.0) {
        return Err(Error::NotHermitian { defect });
    }
    Ok(jacobi_hermitian(m))
}

/// Cyclic Jacobi on the Hermitian part of `m`.
pub(crate) fn jacobi_hermitian(m: &ComplexMatrix) -> HermitianEigen {
    let n = m.rows;
    let mut a = m.add(&m.adjoint()).scale(Complex64::new(0.5, 0.0));
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();
    if scale > 0.0 {
        for _sweep in 0..100 {
            let off: f64 = (0..n)
                .flat_map(|p| (0..n).filter(move |&q| q != p).map(move |q| (p, q)))
                .map(|(p, q)| a[(p, q)].norm_sqr())
                .sum::<f64>()
                .sqrt();
            if off <= 1e-17 * scale {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    rotate(&mut a, &mut v, p, q);
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[(y, y)].re.total_cmp(&a[(x, x)].re));
    HermitianEigen {
        values: order.iter().map(|&k| a[(k, k)].re).collect(),
        vectors: order.iter().map(|&k| v.column(k)).collect(),
    }
}

/// One Jacobi rotation annihilating `a[p][q]`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let g = a[(p, q)];
    let gabs = g.norm();
    if gabs == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    if gabs < 1e-300 || gabs <= f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        a[(p, q)] = ZERO;
        a[(q, p)] = ZERO;
        return;
    }
    let e = g / gabs;
    let tau = (aqq - app) / (2.0 * gabs);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    // U restricted to (p, q): [[c, s], [−s·conj(e), c·conj(e)]]
    let u_pp = Complex64::new(c, 0.0);
    let u_pq = Complex64::new(s, 0.0);
    let u_qp = -e.conj() * s;
    let u_qq = e.conj() * c;
    let n = a.rows;
    // A ← A·U
    for r in 0..n {
        let (x, y) = (a[(r, p)], a[(r, q)]);
        a[(r, p)] = x * u_pp + y * u_qp;
        a[(r, q)] = x * u_pq + y * u_qq;
    }
    // A ← U*·A
    for c2 in 0..n {
        let (x, y) = (a[(p, c2)], a[(q, c2)]);
        a[(p, c2)] = u_pp.conj() * x + u_qp.conj() * y;
        a[(q, c2)] = u_pq.conj() * x + u_qq.conj() * y;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
    for r in 0..n {
        let (x, y) = (v[(r, p)], v[(r, q)]);
        v[(r, p)] = x * u_pp + y * u_qp;
        v[(r, q)] = x * u_pq + y * u_qq;
    }
}

/// Weights used to separate the commuting Hermitian and skew parts; any
/// value works unless two eigenvalues collide along that direction, in which
/// case the next one is tried on the offending cluster.
const MIX: [f64; 4] = [
    0.618_033_988_749_895,
    -std::f64::consts::SQRT_2,
    std::f64::consts::LOG10_2,
    std::f64::consts::E,
];

/// Unitary diagonalization of a normal matrix.
///
/// The Hermitian part `(M+M*)/2` and the Hermitian form `(M−M*)/2i` of the
/// skew part commute, so they are diagonalized jointly: the Hermitian pencil
/// `H + t·K` is diagonalized, and any cluster on which `M` is not scalar is
/// re-split with a different weight `t`.
pub fn eig_normal(m: &ComplexMatrix, cfg: &NumericConfig) -> Result<NormalEigen> {
    if m.rows != m.cols {
        return Err(Error::Shape {
            expected: "square matrix".into(),
            got: format!("{}x{}", m.rows, m.cols),
        });
    }
    let defect = m.normality_defect();
    if defect > cfg.tol_rel * m.frobenius_norm().powi(2).max(1.0) {
        return Err(Error::NotNormal { defect });
    }
    let n = m.rows;
    let scale = m.frobenius_norm();
    let mut vectors = Vec::with_capacity(n);
    let basis: Vec<ComplexVector> = (0..n)
        .map(|k| {
            let mut e = vec![ZERO; n];
            e[k] = ONE;
            e
        })
        .collect();
    split_normal(m, &basis, 0, scale, &mut vectors);

    let mut pairs: Vec<(Complex64, ComplexVector)> = vectors
        .into_iter()
        .map(|v| {
            let mv = m.apply(&v);
            let lambda: Complex64 = v.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum();
            (lambda, v)
        })
        .collect();
    pairs.sort_by(|a, b| {
        b.0.norm()
            .total_cmp(&a.0.norm())
            .then(b.0.re.total_cmp(&a.0.re))
            .then(b.0.im.total_cmp(&a.0.im))
    });
    let (values, vectors) = pairs.into_iter().unzip();
    Ok(NormalEigen { values, vectors })
}

fn split_normal(
    m: &ComplexMatrix,
    frame: &[ComplexVector],
    depth: usize,
    scale: f64,
    out: &mut Vec<ComplexVector>,
) {
    let k = frame.len();
    let w = ComplexMatrix::from_columns(m.rows, frame);
    let small = w.adjoint().mul(&m.mul(&w));
    let trace: Complex64 = (0..k).map(|i| small[(i, i)]).sum::<Complex64>() / k as f64;
    let dev = small
        .sub(&ComplexMatrix::identity(k).scale(trace))
        .frobenius_norm();
    if k == 1 || dev <= 1e-13 * scale.max(f64::MIN_POSITIVE) || depth >= MIX.len() {
        out.extend_from_slice(frame);
        return;
    }
    let t = MIX[depth];
    let herm = small.add(&small.adjoint()).scale(Complex64::new(0.5, 0.0));
    let skew = small.sub(&small.adjoint()).scale(Complex64::new(0.0, -0.5));
    let pencil = herm.add(&skew.scale(Complex64::new(t, 0.0)));
    let eig = jacobi_hermitian(&pencil);

    // cluster consecutive (descending) pencil eigenvalues
    let gap = 1e-9 * scale;
    let mut start = 0;
    for idx in 1..=k {
        if idx == k || eig.values[idx - 1] - eig.values[idx] > gap {
            let sub: Vec<ComplexVector> =
                eig.vectors[start..idx].iter().map(|y| w.apply(y)).collect();
            if sub.len() == k {
                // no split achieved with this weight
                split_normal(m, &sub, depth + 1, scale, out);
            } else {
                split_normal(m, &sub, 0, scale, out);
            }
            start = idx;
        }
    }
}

/// Singular values (descending) from the Hermitian dilation
/// `[[0, M], [M*, 0]]`, which avoids squaring the condition number.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let (r, c) = (m.rows, m.cols);
    let dil = ComplexMatrix::from_fn(r + c, r + c, |i, j| {
        if i < r && j >= r {
            m[(i, j - r)]
        } else if i >= r && j < r {
            m[(j, i - r)].conj()
        } else {
            ZERO
        }
    });
    let eig = jacobi_hermitian(&dil);
    eig.values
        .into_iter()
        .take(r.min(c))
        .map(|v| v.max(0.0))
        .collect()
}

/// True iff the smallest singular value exceeds `tol_rel` times the largest.
pub fn is_invertible(m: &ComplexMatrix, cfg: &NumericConfig) -> bool {
    if m.rows != m.cols || m.rows == 0 {
        return false;
    }
    let sv = singular_values(m);
    let (max, min) = (sv[0], sv[sv.len() - 1]);
    max > 0.0 && min > cfg.tol_rel * max
}
