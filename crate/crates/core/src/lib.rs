//! Quaternionic linear algebra at finite dimension.
//!
//! Right-linear operators on `H^n` are handled through their complex
//! adjoint (symplectic) image. On top of that the crate provides right
//! eigenpairs and the deflation spectral decomposition of normal operators,
//! numerical range sampling and numerical radius maximization, polar
//! factors, and rank-one norm-attaining perturbations with checkable
//! certificates.

pub mod cli;
pub mod config;
pub mod error;
pub mod factor;
pub mod io;
pub mod normattain;
pub mod numrange;
pub mod qlinalg;
pub mod quat;
pub mod spectral;
pub mod symplectic;

pub use config::{NumericConfig, DEFAULT_SEED};
pub use error::{Error, Result};
pub use qlinalg::{complete_basis, gram_schmidt, MatrixKind, QMatrix, QVector};
pub use quat::{EigenClass, ImaginaryUnit, Quaternion};
pub use symplectic::ComplexMatrix;
