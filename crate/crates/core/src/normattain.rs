//! Norm-attainment certificates and rank-one norm-attaining perturbations.
//!
//! At finite dimension every operator attains its norm, so the point of the
//! perturbation routines is the certificate chain they return: the
//! perturbation has rank one and norm at most `eps`, and the perturbed
//! operator attains its norm at an explicit witness vector.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::Serialize;

use crate::factor::{polar, PolarDecomposition};
use crate::numrange::UNIT_TOL;
use crate::qlinalg::{QMatrix, QVector};
use crate::quat::{ImaginaryUnit, Quaternion};
use crate::spectral::{spectral_decomposition, top_right_eigenpair, JOperator};
use crate::{Error, NumericConfig, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttainmentCertificate {
    pub x: QVector,
    /// `‖Ax‖`.
    pub achieved: f64,
    /// `‖A‖`.
    pub norm: f64,
}

impl AttainmentCertificate {
    pub fn certify(a: &QMatrix, x: &QVector) -> Result<Self> {
        Ok(AttainmentCertificate {
            x: x.clone(),
            achieved: a.apply(x)?.norm(),
            norm: a.operator_norm(),
        })
    }

    /// `achieved ≥ (1 − tol)·norm`.
    pub fn holds(&self, tol: f64) -> bool {
        (self.x.norm() - 1.0).abs() <= UNIT_TOL && self.achieved >= (1.0 - tol) * self.norm
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Perturbation {
    pub k: QMatrix,
    pub eps: f64,
    pub witness: AttainmentCertificate,
}

/// Top eigenvector of `A*A`, where `‖Ax‖ = ‖A‖`.
pub fn find_norm_attainer(a: &QMatrix, cfg: &NumericConfig) -> Result<AttainmentCertificate> {
    a.require_square()?;
    if a.operator_norm() == 0.0 {
        return Err(Error::ZeroOperator);
    }
    let gram = &a.adjoint() * a;
    let gram = (&gram + &gram.adjoint()).scale_real(0.5);
    let d = spectral_decomposition(&gram, cfg)?;
    let x = d.phis.first().ok_or(Error::ZeroOperator)?;
    AttainmentCertificate::certify(a, x)
}

/// `y₀ = (x₀ − (J·x₀)·m)/√2`.
///
/// `J·y₀ = y₀·m` always holds. The norm is `‖y₀‖² = 2‖P₊x₀‖²` where `P₊` is
/// the projection onto `{u : Ju = u·m}`, so `y₀` is a unit vector only when
/// `x₀` splits evenly between the two eigenspaces of `u ↦ J·u·m⁻¹`; it is
/// `√2·x₀` for `x₀` already in the plus space and zero in the minus space.
pub fn symmetrize(x0: &QVector, j: &JOperator, m: ImaginaryUnit) -> Result<QVector> {
    let norm = x0.norm();
    if (norm - 1.0).abs() > UNIT_TOL {
        return Err(Error::NonUnit { norm });
    }
    let jx = j.matrix().apply(x0)?.scale_right(m.get());
    Ok((x0 - &jx).scale_real(FRAC_1_SQRT_2))
}

fn rank_one(y: &QVector, scale: f64) -> QMatrix {
    let n = y.len();
    QMatrix::from_fn(n, n, |r, c| y[r].scale(scale) * y[c].conj())
}

fn check_eps(eps: f64) -> Result<()> {
    if eps.is_finite() && eps > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "eps must be positive and finite, got {eps}"
        )))
    }
}

/// `C = y·eps·⟨y, ·⟩` with `y` a top eigenvector of the positive `B`, so
/// `(B + C)y = y·(‖B‖ + eps)`.
pub fn lindenstrauss_positive(b: &QMatrix, eps: f64, cfg: &NumericConfig) -> Result<Perturbation> {
    check_eps(eps)?;
    b.require_square()?;
    if !b.is_positive(cfg) {
        return Err(Error::NotPositive);
    }
    if b.operator_norm() == 0.0 {
        return Err(Error::ZeroOperator);
    }
    let (y, _) = top_right_eigenpair(b, cfg)?;
    let c = rank_one(&y, eps);
    let witness = AttainmentCertificate::certify(&(b + &c), &y)?;
    Ok(Perturbation { k: c, eps, witness })
}

/// Every stage of the general construction: `T = V|T|`, the positive
/// perturbation `C` of `|T|`, and `K = V·C`.
#[derive(Debug, Clone, PartialEq)]
pub struct LindenstraussChain {
    pub polar: PolarDecomposition,
    pub positive: Perturbation,
    pub general: Perturbation,
}

pub fn lindenstrauss_chain(
    t: &QMatrix,
    eps: f64,
    cfg: &NumericConfig,
) -> Result<LindenstraussChain> {
    check_eps(eps)?;
    t.require_square()?;
    if t.operator_norm() == 0.0 {
        return Err(Error::ZeroOperator);
    }
    let pd = polar(t, cfg)?;
    let positive = lindenstrauss_positive(&pd.abs_t, eps, cfg)?;
    let k = &pd.v * &positive.k;
    let witness = AttainmentCertificate::certify(&(t + &k), &positive.witness.x)?;
    Ok(LindenstraussChain {
        polar: pd,
        general: Perturbation { k, eps, witness },
        positive,
    })
}

pub fn lindenstrauss_general(t: &QMatrix, eps: f64, cfg: &NumericConfig) -> Result<Perturbation> {
    lindenstrauss_chain(t, eps, cfg).map(|c| c.general)
}

/// Perturbations for `eps = 1/n`, `n = 1..=n_max`.
pub fn density_witness(
    t: &QMatrix,
    n_max: usize,
    cfg: &NumericConfig,
) -> Result<Vec<Perturbation>> {
    (1..=n_max)
        .map(|n| lindenstrauss_general(t, 1.0 / n as f64, cfg))
        .collect()
}

/// Operator norm residual of the eigen-equation `(B + C)y = y·λ`.
pub fn eigen_residual(m: &QMatrix, y: &QVector, lambda: f64) -> f64 {
    (&m.apply_unchecked(y) - &y.scale_right(Quaternion::real(lambda))).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::{modulus, rank};
    use crate::qlinalg::{random_normal, random_positive, random_qmatrix, random_unitary};
    use crate::spectral::{construct_j, plus_subspace_frame, restrict};
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cfg() -> NumericConfig {
        NumericConfig::default()
    }

    fn e(n: usize, k: usize) -> QVector {
        QVector::basis(n, k)
    }

    #[test]
    fn attainer_examples() {
        let c = cfg();
        let a = QMatrix::from_diag(&[Quaternion::real(3.0), Quaternion::real(1.0)]);
        let cert = find_norm_attainer(&a, &c).unwrap();
        assert!((cert.achieved - 3.0).abs() < 1e-13);
        assert!(cert.x[1].norm() < 1e-13 && (cert.x[0].norm() - 1.0).abs() < 1e-13);

        let u = random_unitary(4, 2);
        let cert = find_norm_attainer(&u, &c).unwrap();
        assert!((cert.achieved - 1.0).abs() < 1e-10);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let any = AttainmentCertificate::certify(&u, &QVector::random_unit(4, &mut rng)).unwrap();
        assert!(any.holds(1e-10));

        for seed in 0..10 {
            let a = random_qmatrix(5, seed);
            let cert = find_norm_attainer(&a, &c).unwrap();
            assert!((cert.achieved / cert.norm - 1.0).abs() <= 1e-9);
            assert!(cert.holds(1e-9));
        }
        assert_eq!(
            find_norm_attainer(&QMatrix::zeros(2, 2), &c),
            Err(Error::ZeroOperator)
        );
    }

    #[test]
    fn modulus_attains_at_same_vector() {
        let c = cfg();
        for seed in 0..5 {
            let a = random_qmatrix(4, seed);
            let abs = modulus(&a, &c).unwrap();
            let cert = find_norm_attainer(&a, &c).unwrap();
            let abs_cert = AttainmentCertificate::certify(&abs, &cert.x).unwrap();
            assert!(abs_cert.holds(1e-9));
            let back = find_norm_attainer(&abs, &c).unwrap();
            assert!(AttainmentCertificate::certify(&a, &back.x)
                .unwrap()
                .holds(1e-9));
        }
    }

    #[test]
    fn symmetrize_edge_cases() {
        let j = JOperator::new(QMatrix::from_diag(&[Quaternion::I; 2]), &cfg()).unwrap();
        let m = ImaginaryUnit::I;
        // x0 in the plus space is doubled in norm
        let y = symmetrize(&e(2, 0), &j, m).unwrap();
        assert!((&y - &e(2, 0).scale_real(2f64.sqrt())).norm() < 1e-15);
        // x0 in the minus space is annihilated
        let y = symmetrize(&e(2, 0).scale_right(Quaternion::J), &j, m).unwrap();
        assert!(y.norm() < 1e-15);
        // an even split gives a unit vector
        let x0 = (&e(2, 0) + &e(2, 0).scale_right(Quaternion::J)).scale_real(FRAC_1_SQRT_2);
        let y = symmetrize(&x0, &j, m).unwrap();
        assert!((y.norm() - 1.0).abs() < 1e-15);
        assert!(matches!(
            symmetrize(&e(2, 0).scale_real(3.0), &j, m),
            Err(Error::NonUnit { .. })
        ));
    }

    #[test]
    fn symmetrize_generic() {
        let c = cfg();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for seed in 0..20 {
            let a = random_normal(3, seed);
            let j = construct_j(&spectral_decomposition(&a, &c).unwrap(), &c);
            let x0 = QVector::random_unit(3, &mut rng);
            let y = symmetrize(&x0, &j, ImaginaryUnit::I).unwrap();
            let jy = j.matrix().apply(&y).unwrap();
            assert!((&jy - &y.scale_right(Quaternion::I)).norm() < 1e-12);
            // ‖y0‖² = 2‖P₊x0‖² = 1 + ⟨x0, Jx0⟩·i (real dot)
            let a_im = x0.inner(&j.matrix().apply(&x0).unwrap()).unwrap();
            let plus =
                (&x0 - &j.matrix().apply(&x0).unwrap().scale_right(Quaternion::I)).scale_real(0.5);
            assert!((y.norm_sqr() - 2.0 * plus.norm_sqr()).abs() < 1e-12);
            assert!((y.norm_sqr() - (1.0 + a_im.dot(Quaternion::I))).abs() < 1e-12);
        }
    }

    #[test]
    fn restriction_attains_at_symmetrized_vector() {
        let c = cfg();
        for seed in 0..10 {
            let t = random_normal(4, seed);
            let j = construct_j(&spectral_decomposition(&t, &c).unwrap(), &c);
            let cert = find_norm_attainer(&t, &c).unwrap();
            let y = symmetrize(&cert.x, &j, ImaginaryUnit::I).unwrap();
            if y.norm() < 1e-6 {
                continue;
            }
            let frame = plus_subspace_frame(&j, &c).unwrap();
            let coords = frame.adjoint().apply(&y).unwrap();
            let z: Vec<Complex64> = coords.iter().map(|q| Complex64::new(q.w, q.x)).collect();
            let t_plus = restrict(&t, &j, &c).unwrap();
            let tz: f64 = t_plus
                .apply(&z)
                .iter()
                .map(|v| v.norm_sqr())
                .sum::<f64>()
                .sqrt();
            let zn: f64 = z.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            assert!((tz - t_plus.operator_norm() * zn).abs() <= 1e-9 * tz.max(1.0));
        }
    }

    #[test]
    fn positive_example() {
        let c = cfg();
        let b = QMatrix::from_diag(&[Quaternion::real(2.0), Quaternion::real(1.0)]);
        let p = lindenstrauss_positive(&b, 0.5, &c).unwrap();
        let want = QMatrix::from_diag(&[Quaternion::real(0.5), Quaternion::ZERO]);
        assert!((&p.k - &want).frobenius_norm() < 1e-14);
        let bc = &b + &p.k;
        assert!(eigen_residual(&bc, &p.witness.x, 2.5) < 1e-14);
        assert!((p.witness.norm - 2.5).abs() < 1e-13);
        assert!(p.witness.holds(1e-12));
    }

    #[test]
    fn positive_random_and_errors() {
        let c = cfg();
        for seed in 0..10 {
            let b = random_positive(4, seed);
            let p = lindenstrauss_positive(&b, 0.3, &c).unwrap();
            assert!((p.k.operator_norm() - 0.3).abs() < 1e-12);
            assert_eq!(rank(&p.k, &c), 1);
        }
        // witness is orthogonal to the kernel
        let u = random_unitary(3, 1);
        let b = &(&u
            * &QMatrix::from_diag(&[Quaternion::real(1.0), Quaternion::ZERO, Quaternion::ZERO]))
            * &u.adjoint();
        let p = lindenstrauss_positive(&b, 0.1, &c).unwrap();
        for k in 1..3 {
            assert!(u.column(k).inner(&p.witness.x).unwrap().norm() < 1e-12);
        }
        assert_eq!(
            lindenstrauss_positive(&QMatrix::zeros(2, 2), 0.1, &c),
            Err(Error::ZeroOperator)
        );
        assert_eq!(
            lindenstrauss_positive(&QMatrix::identity(2).scale_real(-1.0), 0.1, &c),
            Err(Error::NotPositive)
        );
        assert!(matches!(
            lindenstrauss_positive(&QMatrix::identity(2), 0.0, &c),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn general_examples() {
        let c = cfg();
        let u = random_unitary(3, 9);
        let p = lindenstrauss_general(&u, 0.2, &c).unwrap();
        assert!((p.witness.norm - 1.2).abs() < 1e-10);
        assert!(p.witness.holds(1e-10));

        let t = QMatrix::from_diag(&[Quaternion::J.scale(2.0), Quaternion::ZERO]);
        let p = lindenstrauss_general(&t, 0.1, &c).unwrap();
        assert!((p.witness.norm - 2.1).abs() < 1e-12);
        assert!(p.witness.x[1].norm() < 1e-12);
        assert!(
            p.k[(0, 1)].norm() < 1e-12 && p.k[(1, 0)].norm() < 1e-12 && p.k[(1, 1)].norm() < 1e-12
        );

        for seed in 0..100 {
            let t = random_qmatrix(1 + (seed as usize) % 5, seed);
            let eps = 0.01 + 0.01 * seed as f64;
            let p = lindenstrauss_general(&t, eps, &c).unwrap();
            assert!(p.k.operator_norm() <= eps + 1e-12);
            assert!(p.witness.holds(1e-9));
        }
        assert_eq!(
            lindenstrauss_general(&QMatrix::zeros(2, 2), 0.1, &c),
            Err(Error::ZeroOperator)
        );
    }

    #[test]
    fn density() {
        let c = cfg();
        let t = random_qmatrix(3, 4);
        let one = density_witness(&t, 1, &c).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].eps, 1.0);
        let ws = density_witness(&t, 8, &c).unwrap();
        for (i, p) in ws.iter().enumerate() {
            assert!(p.k.operator_norm() <= 1.0 / (i + 1) as f64 + 1e-12);
            assert!(p.witness.holds(1e-9));
            let recheck = find_norm_attainer(&(&t + &p.k), &c).unwrap();
            assert!(recheck.holds(1e-9));
        }
        assert!(ws
            .windows(2)
            .all(|w| w[0].k.operator_norm() >= w[1].k.operator_norm()));
    }
}
