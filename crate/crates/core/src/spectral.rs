//! Right eigenpairs and the spectral decomposition of normal operators.
//!
//! The decomposition is computed by deflation: the top eigenpair of the
//! current compressed operator is found, its eigenvector is lifted back to
//! `H^n`, and the operator is compressed onto the orthogonal complement.
//! Working indices: `H_1 = H^n` and `H_{k+1} = span{φ_1, …, φ_k}^⊥`.
//!
//! Also here: the anti self-adjoint unitary `J` built from an eigenbasis, the
//! `C_i` frame of `{u : Ju = u·i}`, and restriction to / extension from that
//! subspace.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::qlinalg::{complete_basis, extend_pivoted, QMatrix, QVector};
use crate::quat::{EigenClass, Quaternion};
use crate::symplectic::{self, chi, unpsi, ComplexMatrix};
use crate::{Error, NumericConfig, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pub phis: Vec<QVector>,
    pub qs: Vec<Quaternion>,
    pub n: usize,
}

impl SpectralDecomposition {
    pub fn len(&self) -> usize {
        self.qs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.qs.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&QVector, Quaternion)> {
        self.phis.iter().zip(self.qs.iter().copied())
    }
}

/// `u ↦ Σ φ_k·q_k·⟨φ_k, u⟩` as a matrix.
pub fn reconstruct(d: &SpectralDecomposition) -> QMatrix {
    let mut m = QMatrix::zeros(d.n, d.n);
    for (phi, q) in d.pairs() {
        for r in 0..d.n {
            let left = phi[r] * q;
            for c in 0..d.n {
                m[(r, c)] += left * phi[c].conj();
            }
        }
    }
    m
}

fn require_normal(a: &QMatrix, cfg: &NumericConfig) -> Result<usize> {
    let n = a.require_square()?;
    if !a.is_normal(cfg) {
        return Err(Error::NotNormal {
            defect: a.normality_defect(),
        });
    }
    Ok(n)
}

/// Unit `φ` and standardized `q` with `Aφ = φq` and `|q| = ‖A‖`.
///
/// Among eigenvalues of maximal modulus the one with the larger real part
/// wins; remaining ties go to the first one found.
pub fn top_right_eigenpair(a: &QMatrix, cfg: &NumericConfig) -> Result<(QVector, Quaternion)> {
    require_normal(a, cfg)?;
    let norm = a.operator_norm();
    if norm == 0.0 {
        return Err(Error::ZeroOperator);
    }
    let eig = symplectic::eig_normal(&chi(a), cfg)?;
    let tie = cfg.tol_rel * norm;
    let max_mod = eig.values.iter().map(|l| l.norm()).fold(0.0, f64::max);
    let mut best: Option<usize> = None;
    for (k, lam) in eig.values.iter().enumerate() {
        if lam.norm() < max_mod - tie {
            continue;
        }
        match best {
            Some(b) if eig.values[b].re >= lam.re - tie => {}
            _ => best = Some(k),
        }
    }
    let k = best.ok_or(Error::ZeroOperator)?;
    let x = unpsi(&eig.vectors[k])?;
    let x = x.normalized().ok_or(Error::ZeroOperator)?;
    let q = Quaternion::from_complex(eig.values[k]);
    let s = q.standardizing_conjugator();
    Ok((x.scale_right(s), q.standardize().0))
}

/// Spectral decomposition by deflation, also returning the operator norm of
/// each compressed operator visited (non-increasing).
pub fn spectral_decomposition_traced(
    a: &QMatrix,
    cfg: &NumericConfig,
) -> Result<(SpectralDecomposition, Vec<f64>)> {
    let n = require_normal(a, cfg)?;
    let norm = a.operator_norm();
    let mut d = SpectralDecomposition {
        phis: Vec::new(),
        qs: Vec::new(),
        n,
    };
    let mut trace = Vec::new();
    if norm == 0.0 {
        return Ok((d, trace));
    }
    let mut frame: Vec<QVector> = (0..n).map(|k| QVector::basis(n, k)).collect();
    while !frame.is_empty() {
        let q_mat = QMatrix::from_columns(n, &frame);
        let compressed = &(&q_mat.adjoint() * a) * &q_mat;
        let cnorm = compressed.operator_norm();
        trace.push(cnorm);
        if cnorm <= cfg.tol_rel * norm {
            break;
        }
        let (y, q) = top_right_eigenpair(&compressed, cfg)?;
        d.phis.push(q_mat.apply_unchecked(&y));
        d.qs.push(q);
        let r = frame.len();
        let local = complete_basis(std::slice::from_ref(&y), r, cfg);
        frame = local[1..]
            .iter()
            .map(|z| q_mat.apply_unchecked(z))
            .collect();
    }
    Ok((d, trace))
}

pub fn spectral_decomposition(a: &QMatrix, cfg: &NumericConfig) -> Result<SpectralDecomposition> {
    spectral_decomposition_traced(a, cfg).map(|(d, _)| d)
}

/// Distinct similarity classes of the stored eigenvalues, plus `[0]` when
/// the operator has a kernel.
pub fn point_spectrum_classes(d: &SpectralDecomposition, cfg: &NumericConfig) -> Vec<EigenClass> {
    let mut out: Vec<EigenClass> = Vec::new();
    let candidates =
        d.qs.iter()
            .map(|q| q.class())
            .chain((d.len() < d.n).then_some(EigenClass {
                re: 0.0,
                im_mod: 0.0,
            }));
    for cls in candidates {
        let tol = cfg.tol_abs * cls.re.abs().max(cls.im_mod).max(1.0);
        if !out.iter().any(|c| c.approx_eq(cls, tol)) {
            out.push(cls);
        }
    }
    out
}

/// `q ∈ σ_S(A)`: `Δ_q(A)` fails to be invertible. The smallest singular
/// value is measured against `‖A‖² + 2|Re q|‖A‖ + |q|²`, the size of the
/// terms that make up `Δ_q(A)`, so cancellation inside `Δ_q` counts as
/// singular.
pub fn in_spherical_spectrum(a: &QMatrix, q: Quaternion, cfg: &NumericConfig) -> Result<bool> {
    let delta = a.delta_q(q)?;
    let norm = a.operator_norm();
    let scale = norm * norm + 2.0 * q.re().abs() * norm + q.norm_sqr();
    if scale == 0.0 {
        return Ok(true);
    }
    let sv = symplectic::singular_values(&chi(&delta));
    let min = sv.last().copied().unwrap_or(0.0);
    Ok(min <= cfg.tol_rel * scale)
}

/// `q ∈ σ_pS(A)`: `Δ_q(A)` has a kernel. Coincides with the spherical
/// spectrum at finite dimension.
pub fn in_point_spectrum(a: &QMatrix, q: Quaternion, cfg: &NumericConfig) -> Result<bool> {
    in_spherical_spectrum(a, q, cfg)
}

/// Anti self-adjoint unitary operator.
#[derive(Debug, Clone, PartialEq)]
pub struct JOperator(QMatrix);

impl JOperator {
    pub fn new(j: QMatrix, cfg: &NumericConfig) -> Result<Self> {
        if !j.is_anti_self_adjoint(cfg) || !j.is_unitary(cfg) {
            return Err(Error::Precondition(
                "J must be anti self-adjoint and unitary".into(),
            ));
        }
        Ok(JOperator(j))
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.rows()
    }
}

/// `J = Σ b_k·i·⟨b_k, ·⟩` over the eigenvectors completed to a basis.
pub fn construct_j(d: &SpectralDecomposition, cfg: &NumericConfig) -> JOperator {
    let basis = complete_basis(&d.phis, d.n, cfg);
    let mut j = QMatrix::zeros(d.n, d.n);
    for b in &basis {
        for r in 0..d.n {
            let left = b[r] * Quaternion::I;
            for c in 0..d.n {
                j[(r, c)] += left * b[c].conj();
            }
        }
    }
    JOperator(j)
}

/// Orthonormal frame (as columns) of `{u : Ju = u·i}`, obtained by pushing
/// `e_k` and `e_k·j` through `u ↦ (u − (Ju)·i)/2`.
pub fn plus_subspace_frame(j: &JOperator, cfg: &NumericConfig) -> Result<QMatrix> {
    let n = j.n();
    let project = |u: &QVector| {
        let ju = j.0.apply_unchecked(u).scale_right(Quaternion::I);
        (u - &ju).scale_real(0.5)
    };
    let candidates: Vec<QVector> = (0..n)
        .flat_map(|k| {
            let e = QVector::basis(n, k);
            [project(&e), project(&e.scale_right(Quaternion::J))]
        })
        .collect();
    let mut cols = Vec::with_capacity(n);
    extend_pivoted(&mut cols, &candidates, n);
    if cols.len() != n {
        return Err(Error::Precondition(format!(
            "plus subspace has dimension {} instead of {n}",
            cols.len()
        )));
    }
    for c in &cols {
        let defect = (&j.0.apply_unchecked(c) - &c.scale_right(Quaternion::I)).norm();
        if defect > 1e3 * cfg.tol_abs {
            return Err(Error::Precondition(format!(
                "frame column leaves the plus subspace (defect {defect:.3e})"
            )));
        }
    }
    Ok(QMatrix::from_columns(n, &cols))
}

pub fn commutator_defect(v: &QMatrix, j: &JOperator) -> f64 {
    (&(&j.0 * v) - &(v * &j.0)).frobenius_norm()
}

/// Matrix of `V` on the plus subspace in the frame of
/// [`plus_subspace_frame`]; requires `JV = VJ`.
pub fn restrict(v: &QMatrix, j: &JOperator, cfg: &NumericConfig) -> Result<ComplexMatrix> {
    if v.rows() != j.n() || v.cols() != j.n() {
        return Err(Error::Shape {
            expected: format!("{0}x{0}", j.n()),
            got: format!("{}x{}", v.rows(), v.cols()),
        });
    }
    let defect = commutator_defect(v, j);
    if defect > cfg.tol_rel * v.frobenius_norm() {
        return Err(Error::Precondition(format!(
            "operator does not commute with J (defect {defect:.3e})"
        )));
    }
    let frame = plus_subspace_frame(j, cfg)?;
    let m = &(&frame.adjoint() * v) * &frame;
    let n = j.n();
    Ok(ComplexMatrix::from_fn(n, n, |r, c| {
        let q = m[(r, c)];
        Complex64::new(q.w, q.x)
    }))
}

/// The unique right-linear operator commuting with `J` whose restriction to
/// the plus subspace is `t_plus`.
pub fn extend(t_plus: &ComplexMatrix, j: &JOperator, cfg: &NumericConfig) -> Result<QMatrix> {
    let n = j.n();
    if t_plus.rows() != n || t_plus.cols() != n {
        return Err(Error::Shape {
            expected: format!("{n}x{n}"),
            got: format!("{}x{}", t_plus.rows(), t_plus.cols()),
        });
    }
    let frame = plus_subspace_frame(j, cfg)?;
    let lifted = QMatrix::from_fn(n, n, |r, c| Quaternion::from_complex(t_plus[(r, c)]));
    Ok(&(&frame * &lifted) * &frame.adjoint())
}

/// Relative residuals of the complexification identities for a pair of
/// operators commuting with `J`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExtensionResiduals {
    /// `|‖V₊‖ − ‖V‖| / ‖V‖`
    pub norm: f64,
    /// `extend(restrict(V)) − V`
    pub round_trip: f64,
    /// `(V*)₊ − (V₊)*`
    pub adjoint: f64,
    /// `(VW)₊ − V₊W₊`
    pub product: f64,
    /// `(V + W)₊ − V₊ − W₊`
    pub additivity: f64,
    /// `I₊ − I`
    pub identity: f64,
    /// `(V⁻¹)₊ − (V₊)⁻¹`, when `V` is invertible.
    pub inverse: Option<f64>,
}

impl ExtensionResiduals {
    pub fn max(&self) -> f64 {
        [
            self.norm,
            self.round_trip,
            self.adjoint,
            self.product,
            self.additivity,
            self.identity,
            self.inverse.unwrap_or(0.0),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

pub fn extension_residuals(
    v: &QMatrix,
    w: &QMatrix,
    j: &JOperator,
    cfg: &NumericConfig,
) -> Result<ExtensionResiduals> {
    let n = j.n();
    let (nv, nw) = (
        v.operator_norm().max(f64::MIN_POSITIVE),
        w.operator_norm().max(f64::MIN_POSITIVE),
    );
    let vp = restrict(v, j, cfg)?;
    let wp = restrict(w, j, cfg)?;
    let inverse = match v.inverse(cfg) {
        Ok(vi) => {
            let loose = NumericConfig {
                tol_rel: cfg.tol_rel.max(1e-8),
                ..*cfg
            };
            let vip = restrict(&vi, j, &loose)?;
            let want = vp
                .inverse()
                .ok_or_else(|| Error::Domain("restriction is singular".into()))?;
            Some(vip.sub(&want).operator_norm() / vi.operator_norm())
        }
        Err(_) => None,
    };
    Ok(ExtensionResiduals {
        norm: (vp.operator_norm() - v.operator_norm()).abs() / nv,
        round_trip: (&extend(&vp, j, cfg)? - v).operator_norm() / nv,
        adjoint: restrict(&v.adjoint(), j, cfg)?
            .sub(&vp.adjoint())
            .operator_norm()
            / nv,
        product: restrict(&(v * w), j, cfg)?
            .sub(&vp.mul(&wp))
            .operator_norm()
            / (nv * nw),
        additivity: restrict(&(v + w), j, cfg)?
            .sub(&vp.add(&wp))
            .operator_norm()
            / (nv + nw),
        identity: restrict(&QMatrix::identity(n), j, cfg)?
            .sub(&ComplexMatrix::identity(n))
            .operator_norm(),
        inverse,
    })
}

/// JSON form: `{"qs": [...], "phis": [...], "classes": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub qs: Vec<Quaternion>,
    pub phis: Vec<QVector>,
    pub classes: Vec<EigenClass>,
}

impl SpectrumReport {
    pub fn new(d: &SpectralDecomposition, cfg: &NumericConfig) -> Self {
        SpectrumReport {
            qs: d.qs.clone(),
            phis: d.phis.clone(),
            classes: point_spectrum_classes(d, cfg),
        }
    }
}
