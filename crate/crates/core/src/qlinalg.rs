//! Vectors and right-linear operators over the quaternions.
//!
//! Vectors live in the right module `H^n`: scalars act from the right, and
//! matrices act on column vectors with entries multiplying from the left,
//! which is exactly what right linearity `A(xq) = (Ax)q` requires.
//! The scalar product `⟨u, v⟩ = Σ conj(u_k)·v_k` is conjugate-linear in the
//! first slot and right-linear in the second.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::quat::Quaternion;
use crate::symplectic::{self, chi};
use crate::{Error, NumericConfig, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QVector(Vec<Quaternion>);

impl QVector {
    pub fn new(entries: Vec<Quaternion>) -> Self {
        QVector(entries)
    }

    pub fn zeros(n: usize) -> Self {
        QVector(vec![Quaternion::ZERO; n])
    }

    /// Canonical basis vector `e_k` (zero based).
    pub fn basis(n: usize, k: usize) -> Self {
        let mut v = QVector::zeros(n);
        v.0[k] = Quaternion::ONE;
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[Quaternion] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Quaternion> {
        self.0.iter()
    }

    /// `x·q`, the right scalar action.
    pub fn scale_right(&self, q: Quaternion) -> QVector {
        QVector(self.0.iter().map(|&x| x * q).collect())
    }

    pub fn scale_real(&self, r: f64) -> QVector {
        QVector(self.0.iter().map(|&x| x.scale(r)).collect())
    }

    pub fn inner(&self, other: &QVector) -> Result<Quaternion> {
        if self.len() != other.len() {
            return Err(Error::Shape {
                expected: format!("length {}", self.len()),
                got: format!("length {}", other.len()),
            });
        }
        Ok(self.inner_unchecked(other))
    }

    pub(crate) fn inner_unchecked(&self, other: &QVector) -> Quaternion {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&u, &v)| u.conj() * v)
            .sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|q| q.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Unit vector in the same direction, or `None` for the zero vector.
    pub fn normalized(&self) -> Option<QVector> {
        let n = self.norm();
        (n > 0.0).then(|| self.scale_real(1.0 / n))
    }

    /// Real dot product of the underlying `4n` real coordinates.
    pub fn real_dot(&self, other: &QVector) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a.dot(*b)).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|q| q.is_finite())
    }

    /// Standard Gaussian in every real coordinate.
    pub fn random_gaussian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> QVector {
        QVector((0..n).map(|_| random_quaternion(rng)).collect())
    }

    /// Uniform sample from the unit sphere of `H^n`.
    pub fn random_unit<R: Rng + ?Sized>(n: usize, rng: &mut R) -> QVector {
        loop {
            if let Some(v) = QVector::random_gaussian(n, rng).normalized() {
                return v;
            }
        }
    }
}

impl Index<usize> for QVector {
    type Output = Quaternion;
    fn index(&self, i: usize) -> &Quaternion {
        &self.0[i]
    }
}

impl IndexMut<usize> for QVector {
    fn index_mut(&mut self, i: usize) -> &mut Quaternion {
        &mut self.0[i]
    }
}

impl Add for &QVector {
    type Output = QVector;
    fn add(self, o: &QVector) -> QVector {
        assert_eq!(self.len(), o.len(), "vector length mismatch");
        QVector(self.0.iter().zip(&o.0).map(|(&a, &b)| a + b).collect())
    }
}

impl Sub for &QVector {
    type Output = QVector;
    fn sub(self, o: &QVector) -> QVector {
        assert_eq!(self.len(), o.len(), "vector length mismatch");
        QVector(self.0.iter().zip(&o.0).map(|(&a, &b)| a - b).collect())
    }
}

impl Neg for &QVector {
    type Output = QVector;
    fn neg(self) -> QVector {
        QVector(self.0.iter().map(|&a| -a).collect())
    }
}

pub(crate) fn random_quaternion<R: Rng + ?Sized>(rng: &mut R) -> Quaternion {
    Quaternion::new(
        rng.sample(StandardNormal),
        rng.sample(StandardNormal),
        rng.sample(StandardNormal),
        rng.sample(StandardNormal),
    )
}

/// Dense row-major quaternionic matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Quaternion>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Quaternion::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        QMatrix::from_diag(&vec![Quaternion::ONE; n])
    }

    pub fn from_diag(diag: &[Quaternion]) -> Self {
        let n = diag.len();
        let mut m = QMatrix::zeros(n, n);
        for (k, &d) in diag.iter().enumerate() {
            m[(k, k)] = d;
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Quaternion>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape {
                expected: format!("{} entries", rows * cols),
                got: format!("{} entries", data.len()),
            });
        }
        Ok(QMatrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Quaternion) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        QMatrix { rows, cols, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(n: usize, cols: &[QVector]) -> Self {
        let mut m = QMatrix::zeros(n, cols.len());
        for (c, v) in cols.iter().enumerate() {
            assert_eq!(v.len(), n, "column length mismatch");
            for r in 0..n {
                m[(r, c)] = v[r];
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Quaternion] {
        &self.data
    }

    pub fn column(&self, c: usize) -> QVector {
        QVector::new((0..self.rows).map(|r| self[(r, c)]).collect())
    }

    pub fn columns(&self) -> Vec<QVector> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|q| q.is_finite())
    }

    pub(crate) fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn apply(&self, x: &QVector) -> Result<QVector> {
        if x.len() != self.cols {
            return Err(Error::Shape {
                expected: format!("vector of length {}", self.cols),
                got: format!("length {}", x.len()),
            });
        }
        Ok(self.apply_unchecked(x))
    }

    pub(crate) fn apply_unchecked(&self, x: &QVector) -> QVector {
        QVector::new(
            (0..self.rows)
                .map(|r| {
                    self.data[r * self.cols..(r + 1) * self.cols]
                        .iter()
                        .zip(x.iter())
                        .map(|(&a, &b)| a * b)
                        .sum()
                })
                .collect(),
        )
    }

    pub fn mul(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.cols != other.rows {
            return Err(Error::Shape {
                expected: format!("{} rows", self.cols),
                got: format!("{} rows", other.rows),
            });
        }
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == Quaternion::ZERO {
                    continue;
                }
                for c in 0..other.cols {
                    out.data[r * other.cols + c] += a * other[(k, c)];
                }
            }
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> QMatrix {
        QMatrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn scale_real(&self, r: f64) -> QMatrix {
        self.map(|q| q.scale(r))
    }

    pub fn map(&self, f: impl Fn(Quaternion) -> Quaternion) -> QMatrix {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&q| f(q)).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `A² − A·2Re(q) + I·|q|²`.
    pub fn delta_q(&self, q: Quaternion) -> Result<QMatrix> {
        let n = self.require_square()?;
        let sq = self.mul(self)?;
        let shifted = &sq - &self.scale_real(2.0 * q.re());
        Ok(&shifted + &QMatrix::identity(n).scale_real(q.norm_sqr()))
    }

    /// Two-sided inverse, computed on `χ(A)`.
    pub fn inverse(&self, cfg: &NumericConfig) -> Result<QMatrix> {
        self.require_square()?;
        let c = chi(self);
        if !symplectic::is_invertible(&c, cfg) {
            return Err(Error::Domain("matrix is singular".into()));
        }
        let inv = c
            .inverse()
            .ok_or_else(|| Error::Domain("matrix is singular".into()))?;
        symplectic::unchi(
            &inv,
            &NumericConfig {
                tol_rel: cfg.tol_rel.max(1e-8),
                ..*cfg
            },
        )
    }

    /// Largest singular value; see [`symplectic::operator_norm`].
    pub fn operator_norm(&self) -> f64 {
        symplectic::operator_norm(self)
    }

    pub fn is_self_adjoint(&self, cfg: &NumericConfig) -> bool {
        self.is_square() && defect_small((self - &self.adjoint()).frobenius_norm(), self, cfg)
    }

    pub fn is_anti_self_adjoint(&self, cfg: &NumericConfig) -> bool {
        self.is_square() && defect_small((self + &self.adjoint()).frobenius_norm(), self, cfg)
    }

    pub fn normality_defect(&self) -> f64 {
        let adj = self.adjoint();
        let (Ok(l), Ok(r)) = (self.mul(&adj), adj.mul(self)) else {
            return f64::INFINITY;
        };
        (&l - &r).frobenius_norm()
    }

    pub fn is_normal(&self, cfg: &NumericConfig) -> bool {
        self.is_square() && {
            let scale = self.frobenius_norm().powi(2).max(1.0);
            self.normality_defect() <= cfg.tol_rel * scale
        }
    }

    pub fn is_unitary(&self, cfg: &NumericConfig) -> bool {
        if !self.is_square() {
            return false;
        }
        let adj = self.adjoint();
        let id = QMatrix::identity(self.rows);
        let scale = self.frobenius_norm().powi(2).max(1.0);
        let d1 = (&self.mul(&adj).unwrap() - &id).frobenius_norm();
        let d2 = (&adj.mul(self).unwrap() - &id).frobenius_norm();
        d1.max(d2) <= cfg.tol_rel * scale
    }

    /// Self-adjoint with no eigenvalue of the symplectic image below
    /// `−tol_rel·‖A‖`.
    pub fn is_positive(&self, cfg: &NumericConfig) -> bool {
        if !self.is_self_adjoint(cfg) {
            return false;
        }
        let herm = &(self + &self.adjoint()).scale_real(0.5);
        let Ok(eig) = symplectic::eig_hermitian(&chi(herm), cfg) else {
            return false;
        };
        let norm = eig.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        eig.values
            .iter()
            .all(|&v| v >= -cfg.tol_rel * norm.max(f64::MIN_POSITIVE))
    }

    pub fn random(n: usize, seed: u64) -> QMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        QMatrix::random_with(n, n, &mut rng)
    }

    pub fn random_with<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> QMatrix {
        let data = (0..rows * cols).map(|_| random_quaternion(rng)).collect();
        QMatrix { rows, cols, data }
    }
}

fn defect_small(defect: f64, a: &QMatrix, cfg: &NumericConfig) -> bool {
    defect <= cfg.tol_rel * a.frobenius_norm().powi(2).max(1.0)
}

impl Index<(usize, usize)> for QMatrix {
    type Output = Quaternion;
    fn index(&self, (r, c): (usize, usize)) -> &Quaternion {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Quaternion {
        &mut self.data[r * self.cols + c]
    }
}

impl Add for &QMatrix {
    type Output = QMatrix;
    fn add(self, o: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch");
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&o.data)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &QMatrix {
    type Output = QMatrix;
    fn sub(self, o: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch");
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&o.data)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &QMatrix {
    type Output = QMatrix;
    fn mul(self, o: &QMatrix) -> QMatrix {
        QMatrix::mul(self, o).expect("shape mismatch")
    }
}

/// Orthonormalizes `vs` over `H`, dropping vectors whose residual falls
/// below `cfg.tol_abs`. Projections subtract `v·⟨v, x⟩`; two passes are
/// made per vector.
pub fn gram_schmidt(vs: &[QVector], cfg: &NumericConfig) -> Vec<QVector> {
    let mut out: Vec<QVector> = Vec::with_capacity(vs.len());
    for v in vs {
        let mut x = v.clone();
        let scale = x.norm();
        for _ in 0..2 {
            x = project_out(&x, &out);
        }
        let res = x.norm();
        if res > cfg.tol_abs && res > scale * 1e-12 {
            out.push(x.scale_real(1.0 / res));
        }
    }
    out
}

pub(crate) fn project_out(x: &QVector, basis: &[QVector]) -> QVector {
    let mut x = x.clone();
    for b in basis {
        let c = b.inner_unchecked(&x);
        x = &x - &b.scale_right(c);
    }
    x
}

/// Extends an orthonormal list to an orthonormal basis of `H^n`, adding
/// canonical vectors in order of largest residual.
pub fn complete_basis(vs: &[QVector], n: usize, cfg: &NumericConfig) -> Vec<QVector> {
    let candidates: Vec<QVector> = (0..n).map(|k| QVector::basis(n, k)).collect();
    let mut out = gram_schmidt(vs, cfg);
    extend_pivoted(&mut out, &candidates, n);
    out
}

/// Greedily appends the candidate with the largest residual against `out`
/// until `out` holds `target` vectors or nothing independent is left.
pub(crate) fn extend_pivoted(out: &mut Vec<QVector>, candidates: &[QVector], target: usize) {
    while out.len() < target {
        let best = candidates
            .iter()
            .map(|c| project_out(&project_out(c, out), out))
            .map(|r| (r.norm(), r))
            .fold(None, |best: Option<(f64, QVector)>, cand| match best {
                Some(b) if b.0 >= cand.0 - 1e-12 => Some(b),
                _ => Some(cand),
            });
        match best {
            Some((res, r)) if res > 1e-8 => out.push(r.scale_real(1.0 / res)),
            _ => break,
        }
    }
}

/// Kinds of random operators produced by [`random_matrix`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixKind {
    General,
    Normal,
    SelfAdjoint,
    Positive,
    Unitary,
}

impl std::str::FromStr for MatrixKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "general" => Ok(MatrixKind::General),
            "normal" => Ok(MatrixKind::Normal),
            "selfadjoint" | "self-adjoint" => Ok(MatrixKind::SelfAdjoint),
            "positive" => Ok(MatrixKind::Positive),
            "unitary" => Ok(MatrixKind::Unitary),
            other => Err(Error::Malformed(format!("unknown matrix kind '{other}'"))),
        }
    }
}

impl std::fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MatrixKind::General => "general",
            MatrixKind::Normal => "normal",
            MatrixKind::SelfAdjoint => "selfadjoint",
            MatrixKind::Positive => "positive",
            MatrixKind::Unitary => "unitary",
        })
    }
}

pub fn random_matrix(kind: MatrixKind, n: usize, seed: u64) -> QMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_matrix_with(kind, n, &mut rng)
}

pub fn random_matrix_with<R: Rng + ?Sized>(kind: MatrixKind, n: usize, rng: &mut R) -> QMatrix {
    match kind {
        MatrixKind::General => QMatrix::random_with(n, n, rng),
        MatrixKind::Unitary => random_unitary_with(n, rng),
        MatrixKind::Normal => {
            let d: Vec<Quaternion> = (0..n).map(|_| random_quaternion(rng)).collect();
            conjugate_diag(n, &d, rng)
        }
        MatrixKind::SelfAdjoint => {
            let d: Vec<Quaternion> = (0..n)
                .map(|_| Quaternion::real(rng.sample(StandardNormal)))
                .collect();
            conjugate_diag(n, &d, rng)
        }
        MatrixKind::Positive => {
            let d: Vec<Quaternion> = (0..n)
                .map(|_| Quaternion::real(rng.random_range(0.0..2.0)))
                .collect();
            conjugate_diag(n, &d, rng)
        }
    }
}

fn conjugate_diag<R: Rng + ?Sized>(n: usize, d: &[Quaternion], rng: &mut R) -> QMatrix {
    let u = random_unitary_with(n, rng);
    let mut m = &(&u * &QMatrix::from_diag(d)) * &u.adjoint();
    if d.iter().all(|q| q.im_norm() == 0.0) {
        // exact self-adjointness for real spectra
        m = (&m + &m.adjoint()).scale_real(0.5);
    }
    m
}

fn random_unitary_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> QMatrix {
    let cfg = NumericConfig::default();
    loop {
        let g = QMatrix::random_with(n, n, rng);
        let cols = gram_schmidt(&g.columns(), &cfg);
        if cols.len() == n {
            return QMatrix::from_columns(n, &cols);
        }
    }
}

pub fn random_qmatrix(n: usize, seed: u64) -> QMatrix {
    random_matrix(MatrixKind::General, n, seed)
}

pub fn random_normal(n: usize, seed: u64) -> QMatrix {
    random_matrix(MatrixKind::Normal, n, seed)
}

pub fn random_self_adjoint(n: usize, seed: u64) -> QMatrix {
    random_matrix(MatrixKind::SelfAdjoint, n, seed)
}

pub fn random_positive(n: usize, seed: u64) -> QMatrix {
    random_matrix(MatrixKind::Positive, n, seed)
}

pub fn random_unitary(n: usize, seed: u64) -> QMatrix {
    random_matrix(MatrixKind::Unitary, n, seed)
}
