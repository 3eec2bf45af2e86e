//! Positive square roots, the modulus `|A| = (A*A)^{1/2}`, pseudo-inverses
//! of positive operators, and the polar decomposition `A = V|A|`.
//!
//! All rank decisions treat an eigenvalue of a positive operator `P` as zero
//! when it is at most `tol_rel·‖P‖`.

use crate::qlinalg::{QMatrix, QVector};
use crate::quat::Quaternion;
use crate::spectral::{spectral_decomposition, SpectralDecomposition};
use crate::symplectic::{chi, singular_values};
use crate::{Error, NumericConfig, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct PolarDecomposition {
    /// Partial isometry, zero on the null space of `A`.
    pub v: QMatrix,
    pub abs_t: QMatrix,
}

fn positive_spectrum(p: &QMatrix, cfg: &NumericConfig) -> Result<SpectralDecomposition> {
    if !p.is_positive(cfg) {
        return Err(Error::NotPositive);
    }
    let herm = (p + &p.adjoint()).scale_real(0.5);
    spectral_decomposition(&herm, cfg)
}

/// `Σ φ_k f(λ_k) ⟨φ_k, ·⟩` over real eigenvalues clamped at zero.
fn spectral_map(d: &SpectralDecomposition, f: impl Fn(f64) -> f64) -> QMatrix {
    let mut m = QMatrix::zeros(d.n, d.n);
    for (phi, q) in d.pairs() {
        let val = f(q.re().max(0.0));
        if val == 0.0 {
            continue;
        }
        for r in 0..d.n {
            let left = phi[r].scale(val);
            for c in 0..d.n {
                m[(r, c)] += left * phi[c].conj();
            }
        }
    }
    m
}

pub fn sqrt_positive(p: &QMatrix, cfg: &NumericConfig) -> Result<QMatrix> {
    let d = positive_spectrum(p, cfg)?;
    Ok(spectral_map(&d, f64::sqrt))
}

pub fn modulus(a: &QMatrix, cfg: &NumericConfig) -> Result<QMatrix> {
    a.require_square()?;
    let gram = &a.adjoint() * a;
    sqrt_positive(&(&gram + &gram.adjoint()).scale_real(0.5), cfg)
}

/// Pseudo-inverse of a positive operator.
pub fn pinv_positive(p: &QMatrix, cfg: &NumericConfig) -> Result<QMatrix> {
    let d = positive_spectrum(p, cfg)?;
    let norm = d.qs.first().map(|q| q.re()).unwrap_or(0.0);
    let cut = cfg.tol_rel * norm;
    Ok(spectral_map(&d, |v| if v > cut { 1.0 / v } else { 0.0 }))
}

pub fn polar(a: &QMatrix, cfg: &NumericConfig) -> Result<PolarDecomposition> {
    let abs_t = modulus(a, cfg)?;
    let v = a * &pinv_positive(&abs_t, cfg)?;
    Ok(PolarDecomposition { v, abs_t })
}

/// Orthonormal frame of `N(A)^⊥`: eigenvectors of `A*A` with nonzero
/// eigenvalue.
pub fn cokernel_frame(a: &QMatrix, cfg: &NumericConfig) -> Result<Vec<QVector>> {
    let gram = &a.adjoint() * a;
    Ok(positive_spectrum(&gram, cfg)?.phis)
}

/// Quaternionic rank: half the number of singular values of `χ(A)` above
/// `tol_rel` times the largest.
pub fn rank(a: &QMatrix, cfg: &NumericConfig) -> usize {
    let sv = singular_values(&chi(a));
    let Some(&max) = sv.first() else { return 0 };
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > cfg.tol_rel * max).count() / 2
}

/// Orthogonal projector onto the span of an orthonormal list.
pub fn projector(n: usize, frame: &[QVector]) -> QMatrix {
    let d = SpectralDecomposition {
        phis: frame.to_vec(),
        qs: vec![Quaternion::ONE; frame.len()],
        n,
    };
    spectral_map(&d, |v| v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::{random_positive, random_qmatrix, random_unitary};

    fn cfg() -> NumericConfig {
        NumericConfig::default()
    }

    fn rel(a: &QMatrix, b: &QMatrix) -> f64 {
        (a - b).operator_norm() / b.operator_norm().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn sqrt_examples() {
        let c = cfg();
        let id = QMatrix::identity(3);
        assert!((&sqrt_positive(&id, &c).unwrap() - &id).frobenius_norm() < 1e-14);
        let d = QMatrix::from_diag(&[Quaternion::real(4.0), Quaternion::real(9.0)]);
        let want = QMatrix::from_diag(&[Quaternion::real(2.0), Quaternion::real(3.0)]);
        assert!((&sqrt_positive(&d, &c).unwrap() - &want).frobenius_norm() < 1e-13);
        assert_eq!(
            sqrt_positive(&QMatrix::from_diag(&[Quaternion::real(-1.0)]), &c),
            Err(Error::NotPositive)
        );
        assert_eq!(
            sqrt_positive(&QMatrix::from_diag(&[Quaternion::I]), &c),
            Err(Error::NotPositive)
        );
        for seed in 0..10 {
            let a = random_qmatrix(4, seed);
            let p = &a.adjoint() * &a;
            let s = sqrt_positive(&p, &c).unwrap();
            assert!(s.is_positive(&c));
            assert!(rel(&(&s * &s), &p) < 1e-8);
        }
    }

    #[test]
    fn modulus_examples() {
        let c = cfg();
        let u = random_unitary(4, 3);
        assert!((&modulus(&u, &c).unwrap() - &QMatrix::identity(4)).frobenius_norm() < 1e-10);
        assert_eq!(
            modulus(&QMatrix::zeros(2, 2), &c).unwrap(),
            QMatrix::zeros(2, 2)
        );
        let q = Quaternion::new(1.0, -2.0, 2.0, 0.0);
        let m = modulus(&QMatrix::from_diag(&[q]), &c).unwrap();
        assert!(m[(0, 0)].approx_eq(Quaternion::real(3.0), 1e-13));

        let a = random_qmatrix(5, 8);
        let m = modulus(&a, &c).unwrap();
        let na = a.operator_norm();
        assert!((m.operator_norm() - na).abs() < 1e-10 * na);
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(1);
        for _ in 0..20 {
            let x = QVector::random_gaussian(5, &mut rng);
            let (l, r) = (m.apply(&x).unwrap().norm(), a.apply(&x).unwrap().norm());
            assert!((l - r).abs() < 1e-10 * r.max(1.0));
        }
    }

    #[test]
    fn pinv_examples() {
        let c = cfg();
        let id = QMatrix::identity(2);
        assert!((&pinv_positive(&id, &c).unwrap() - &id).frobenius_norm() < 1e-14);
        let d = QMatrix::from_diag(&[Quaternion::real(2.0), Quaternion::ZERO]);
        let want = QMatrix::from_diag(&[Quaternion::real(0.5), Quaternion::ZERO]);
        assert!((&pinv_positive(&d, &c).unwrap() - &want).frobenius_norm() < 1e-14);
        for seed in 0..5 {
            let p = random_positive(4, seed);
            let pi = pinv_positive(&p, &c).unwrap();
            assert!(rel(&(&(&pi * &p) * &pi), &pi) < 1e-9);
        }
    }

    #[test]
    fn polar_examples() {
        let c = cfg();
        let u = random_unitary(3, 5);
        let pd = polar(&u, &c).unwrap();
        assert!(rel(&pd.v, &u) < 1e-10);
        assert!((&pd.abs_t - &QMatrix::identity(3)).frobenius_norm() < 1e-10);

        let pd = polar(&QMatrix::zeros(2, 2), &c).unwrap();
        assert_eq!(pd.v, QMatrix::zeros(2, 2));
        assert_eq!(pd.abs_t, QMatrix::zeros(2, 2));

        let pd = polar(&QMatrix::from_diag(&[Quaternion::J.scale(3.0)]), &c).unwrap();
        assert!(pd.v[(0, 0)].approx_eq(Quaternion::J, 1e-14));
        assert!(pd.abs_t[(0, 0)].approx_eq(Quaternion::real(3.0), 1e-14));
    }

    #[test]
    fn polar_rank_deficient() {
        let c = cfg();
        let u = random_unitary(4, 1);
        let w = random_unitary(4, 2);
        let d = QMatrix::from_diag(&[
            Quaternion::real(3.0),
            Quaternion::real(1.0),
            Quaternion::ZERO,
            Quaternion::ZERO,
        ]);
        let a = &(&u * &d) * &w;
        let pd = polar(&a, &c).unwrap();
        assert!(rel(&(&pd.v * &pd.abs_t), &a) < 1e-10);
        assert_eq!(rank(&a, &c), 2);
        assert_eq!(rank(&pd.v, &c), 2);
        let frame = cokernel_frame(&a, &c).unwrap();
        assert_eq!(frame.len(), 2);
        let vv = &pd.v.adjoint() * &pd.v;
        assert!((&vv - &projector(4, &frame)).frobenius_norm() < 1e-10);
    }

    #[test]
    fn invertible_polar_is_unitary() {
        let c = cfg();
        for seed in 0..5 {
            let a = random_qmatrix(4, seed + 40);
            let pd = polar(&a, &c).unwrap();
            assert!(pd.v.is_unitary(&NumericConfig { tol_rel: 1e-8, ..c }));
            assert_eq!(rank(&a, &c), 4);
        }
    }
}
