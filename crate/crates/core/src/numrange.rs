//! Numerical range sampling and numerical radius maximization.
//!
//! The radius `w(A) = sup |⟨x, Ax⟩|` over unit `x` is estimated by
//! multi-start projected gradient ascent of `f(x) = |⟨x, Ax⟩|²` on the real
//! unit sphere of `R^{4n}`. Every estimate is attained at its returned
//! vector, so it is always a lower bound of `w(A)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::qlinalg::{QMatrix, QVector};
use crate::quat::{ImaginaryUnit, Quaternion};
use crate::spectral::top_right_eigenpair;
use crate::{Error, NumericConfig, Result};

/// Allowed deviation of `‖x‖` from one for inputs that must be unit vectors.
pub const UNIT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_iters: usize,
    pub step_init: f64,
    /// Threshold on the tangential gradient norm, relative to `‖A‖_F²`.
    pub grad_tol: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            restarts: 16,
            max_iters: 500,
            step_init: 0.5,
            grad_tol: 1e-10,
            seed: crate::DEFAULT_SEED,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts < 1 {
            return Err(Error::Domain("restarts must be at least 1".into()));
        }
        if self.step_init.is_nan() || self.step_init <= 0.0 {
            return Err(Error::Domain("step_init must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusEstimate {
    pub value: f64,
    pub argmax: QVector,
    pub iterations: usize,
    pub converged: bool,
}

fn require_unit(x: &QVector) -> Result<()> {
    let norm = x.norm();
    if (norm - 1.0).abs() > UNIT_TOL {
        return Err(Error::NonUnit { norm });
    }
    Ok(())
}

/// `⟨x, Ax⟩` for unit `x`.
pub fn rayleigh(a: &QMatrix, x: &QVector) -> Result<Quaternion> {
    require_unit(x)?;
    let ax = a.apply(x)?;
    x.inner(&ax)
}

/// Rayleigh values at `count` uniformly random unit vectors.
pub fn sample_numerical_range(a: &QMatrix, count: usize, seed: u64) -> Result<Vec<Quaternion>> {
    let n = a.require_square()?;
    if count == 0 {
        return Err(Error::Domain("count must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count)
        .map(|_| {
            let x = QVector::random_unit(n, &mut rng);
            x.inner_unchecked(&a.apply_unchecked(&x))
        })
        .collect())
}

/// `(Re q, Im q · m)`: coordinates of `q` projected on the slice `C_m`.
pub fn slice_projection(q: Quaternion, m: ImaginaryUnit) -> (f64, f64) {
    (q.re(), q.im().dot(m.get()))
}

/// `f(x) = |⟨x, Ax⟩|²`.
pub fn objective(a: &QMatrix, x: &QVector) -> f64 {
    x.inner_unchecked(&a.apply_unchecked(x)).norm_sqr()
}

/// `df(x; h) = 2·Re(conj(r)·(⟨h, Ax⟩ + ⟨x, Ah⟩))` with `r = ⟨x, Ax⟩`.
pub fn directional_derivative(a: &QMatrix, x: &QVector, h: &QVector) -> f64 {
    let ax = a.apply_unchecked(x);
    let r = x.inner_unchecked(&ax);
    let s = h.inner_unchecked(&ax) + x.inner_unchecked(&a.apply_unchecked(h));
    2.0 * (r.conj() * s).re()
}

/// Euclidean gradient of `f` in the `4n` real coordinates:
/// `2·(Ax·conj(r) + A*x·r)`.
pub fn gradient(a: &QMatrix, x: &QVector) -> QVector {
    let ax = a.apply_unchecked(x);
    let r = x.inner_unchecked(&ax);
    let asx = a.adjoint().apply_unchecked(x);
    (&ax.scale_right(r.conj()) + &asx.scale_right(r)).scale_real(2.0)
}

struct Ascent {
    x: QVector,
    f: f64,
    iterations: usize,
    converged: bool,
}

fn ascend(a: &QMatrix, adj: &QMatrix, start: QVector, cfg: &OptimizerConfig, scale: f64) -> Ascent {
    let mut x = start;
    let mut f = objective(a, &x);
    let mut iterations = 0;
    let mut converged = false;
    while iterations < cfg.max_iters {
        let ax = a.apply_unchecked(&x);
        let r = x.inner_unchecked(&ax);
        let g =
            (&ax.scale_right(r.conj()) + &adj.apply_unchecked(&x).scale_right(r)).scale_real(2.0);
        let tangential = &g - &x.scale_real(x.real_dot(&g));
        if tangential.norm() <= cfg.grad_tol * scale {
            converged = true;
            break;
        }
        iterations += 1;
        let dir = tangential.scale_real(1.0 / scale);
        let mut step = cfg.step_init;
        let mut accepted = false;
        for _ in 0..60 {
            let Some(cand) = (&x + &dir.scale_real(step)).normalized() else {
                break;
            };
            let fc = objective(a, &cand);
            if fc > f {
                x = cand;
                f = fc;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            // no ascent direction left at working precision
            converged = true;
            break;
        }
    }
    Ascent {
        x,
        f,
        iterations,
        converged,
    }
}

/// Multi-start projected gradient ascent. For normal input one start is
/// placed at the top eigenvector, where `|⟨φ, Aφ⟩| = ‖A‖`.
pub fn numerical_radius(a: &QMatrix, cfg: &OptimizerConfig) -> Result<RadiusEstimate> {
    cfg.validate()?;
    let n = a.require_square()?;
    let adj = a.adjoint();
    let scale = a.frobenius_norm().powi(2).max(f64::MIN_POSITIVE);
    let ncfg = NumericConfig::default();

    let mut starts: Vec<QVector> = Vec::with_capacity(cfg.restarts + 1);
    if a.frobenius_norm() > 0.0 && a.is_normal(&ncfg) {
        if let Ok((phi, _)) = top_right_eigenpair(a, &ncfg) {
            starts.push(phi);
        }
    }
    for k in 0..cfg.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(k as u64);
        starts.push(QVector::random_unit(n, &mut rng));
    }

    let best = starts
        .into_iter()
        .map(|s| ascend(a, &adj, s, cfg, scale))
        .fold(None, |best: Option<Ascent>, cand| match best {
            Some(b) if b.f >= cand.f => Some(b),
            _ => Some(cand),
        })
        .expect("at least one start");

    let value = rayleigh(a, &best.x)?.norm();
    Ok(RadiusEstimate {
        value,
        argmax: best.x,
        iterations: best.iterations,
        converged: best.converged,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormaloidReport {
    pub radius: f64,
    pub norm: f64,
    pub gap: f64,
    pub pass: bool,
}

/// Compares the numerical radius estimate of a normal operator with its
/// operator norm; passes when `radius ≥ (1 − check_tol)·norm`.
pub fn check_normaloid(
    a: &QMatrix,
    cfg: &OptimizerConfig,
    check_tol: f64,
    ncfg: &NumericConfig,
) -> Result<NormaloidReport> {
    a.require_square()?;
    if !a.is_normal(ncfg) {
        return Err(Error::NotNormal {
            defect: a.normality_defect(),
        });
    }
    let radius = numerical_radius(a, cfg)?.value;
    let norm = a.operator_norm();
    Ok(NormaloidReport {
        radius,
        norm,
        gap: norm - radius,
        pass: radius >= (1.0 - check_tol) * norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::{random_normal, random_qmatrix, random_quaternion, random_unitary};

    fn nilpotent() -> QMatrix {
        QMatrix::from_fn(2, 2, |r, c| {
            if (r, c) == (0, 1) {
                Quaternion::ONE
            } else {
                Quaternion::ZERO
            }
        })
    }

    #[test]
    fn rayleigh_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = QVector::random_unit(3, &mut rng);
        assert!(rayleigh(&QMatrix::identity(3), &x)
            .unwrap()
            .approx_eq(Quaternion::ONE, 1e-14));
        let a = QMatrix::from_diag(&[Quaternion::J]);
        assert_eq!(rayleigh(&a, &QVector::basis(1, 0)).unwrap(), Quaternion::J);
        assert!(matches!(
            rayleigh(&a, &QVector::basis(1, 0).scale_real(2.0)),
            Err(Error::NonUnit { .. })
        ));
        let b = random_normal(4, 3);
        let (phi, q) = top_right_eigenpair(&b, &NumericConfig::default()).unwrap();
        assert!(rayleigh(&b, &phi).unwrap().approx_eq(q, 1e-10));
    }

    #[test]
    fn sampling() {
        assert!(sample_numerical_range(&QMatrix::zeros(3, 3), 10, 1)
            .unwrap()
            .iter()
            .all(|q| *q == Quaternion::ZERO));
        assert!(sample_numerical_range(&QMatrix::identity(3), 10, 1)
            .unwrap()
            .iter()
            .all(|q| q.approx_eq(Quaternion::ONE, 1e-14)));
        let a = random_qmatrix(4, 2);
        let norm = a.operator_norm();
        let s = sample_numerical_range(&a, 500, 7).unwrap();
        assert!(s.iter().all(|q| q.norm() <= norm + 1e-12));
        assert_eq!(s, sample_numerical_range(&a, 500, 7).unwrap());
        assert!(sample_numerical_range(&a, 0, 7).is_err());
    }

    #[test]
    fn gradient_consistent_with_directional_derivative() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let a = QMatrix::random_with(3, 3, &mut rng);
            let x = QVector::random_unit(3, &mut rng);
            let h = QVector::random_gaussian(3, &mut rng);
            let dd = directional_derivative(&a, &x, &h);
            let g = gradient(&a, &x).real_dot(&h);
            assert!((dd - g).abs() <= 1e-10 * dd.abs().max(1.0));
        }
    }

    #[test]
    fn radius_examples() {
        let cfg = OptimizerConfig::default();
        let est = numerical_radius(&QMatrix::identity(3), &cfg).unwrap();
        assert!((est.value - 1.0).abs() < 1e-12);
        let q = Quaternion::new(0.5, -1.0, 2.0, 0.3);
        let est = numerical_radius(&QMatrix::from_diag(&[q]), &cfg).unwrap();
        assert!((est.value - q.norm()).abs() < 1e-12);
        let est = numerical_radius(&nilpotent(), &cfg).unwrap();
        assert!((est.value - 0.5).abs() < 1e-6, "{}", est.value);
        assert!((nilpotent().operator_norm() - 1.0).abs() < 1e-14);
        let est = numerical_radius(&QMatrix::zeros(2, 2), &cfg).unwrap();
        assert_eq!(est.value, 0.0);
    }

    #[test]
    fn radius_is_deterministic_and_bounded() {
        let cfg = OptimizerConfig {
            seed: 99,
            ..Default::default()
        };
        for seed in 0..5 {
            let a = random_qmatrix(3, seed);
            let e1 = numerical_radius(&a, &cfg).unwrap();
            let e2 = numerical_radius(&a, &cfg).unwrap();
            assert_eq!(e1, e2);
            assert!(e1.value <= a.operator_norm() + 1e-10);
            assert!((e1.argmax.norm() - 1.0).abs() < 1e-12);
            assert!((rayleigh(&a, &e1.argmax).unwrap().norm() - e1.value).abs() == 0.0);
        }
    }

    #[test]
    fn unitary_invariance() {
        let cfg = OptimizerConfig::default();
        for seed in 0..5 {
            let a = random_qmatrix(3, seed + 10);
            let u = random_unitary(3, seed + 20);
            let b = &(&u.adjoint() * &a) * &u;
            let (wa, wb) = (
                numerical_radius(&a, &cfg).unwrap().value,
                numerical_radius(&b, &cfg).unwrap().value,
            );
            assert!((wa - wb).abs() <= 1e-4 * wa, "{wa} vs {wb}");
        }
    }

    #[test]
    fn normaloid() {
        let cfg = OptimizerConfig::default();
        let ncfg = NumericConfig::default();
        let a = QMatrix::from_diag(&[Quaternion::I, Quaternion::J, Quaternion::K]);
        let r = check_normaloid(&a, &cfg, 1e-4, &ncfg).unwrap();
        assert!(r.pass && (r.radius - 1.0).abs() < 1e-10);
        let r = check_normaloid(&QMatrix::zeros(3, 3), &cfg, 1e-4, &ncfg).unwrap();
        assert!(r.pass && r.radius == 0.0 && r.norm == 0.0);
        assert!(matches!(
            check_normaloid(&nilpotent(), &cfg, 1e-4, &ncfg),
            Err(Error::NotNormal { .. })
        ));
    }

    #[test]
    fn config_validation() {
        let bad = OptimizerConfig {
            restarts: 0,
            ..Default::default()
        };
        assert!(numerical_radius(&QMatrix::identity(1), &bad).is_err());
        let bad = OptimizerConfig {
            step_init: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn slice_coordinates() {
        let q = Quaternion::new(1.0, 0.0, 2.0, 0.0);
        assert_eq!(slice_projection(q, ImaginaryUnit::J), (1.0, 2.0));
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let _ = random_quaternion(&mut rng);
    }
}
