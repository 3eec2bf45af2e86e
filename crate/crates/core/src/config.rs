/// Seed used whenever the caller does not supply one.
pub const DEFAULT_SEED: u64 = 42;

/// Tolerances and seed shared across the crate.
///
/// `tol_abs` is used for absolute comparisons of scalars (quaternion and
/// eigen-class equality, Gram-Schmidt drop threshold); `tol_rel` scales with
/// the size of the operator at hand (rank decisions, defect checks, deflation
/// stopping).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericConfig {
    pub tol_abs: f64,
    pub tol_rel: f64,
    pub seed: u64,
}

impl Default for NumericConfig {
    fn default() -> Self {
        NumericConfig {
            tol_abs: 1e-10,
            tol_rel: 1e-10,
            seed: DEFAULT_SEED,
        }
    }
}

impl NumericConfig {
    pub fn new(tol_abs: f64, tol_rel: f64, seed: u64) -> crate::Result<Self> {
        if !(tol_abs > 0.0 && tol_rel > 0.0) {
            return Err(crate::Error::Domain(
                "tolerances must be strictly positive".into(),
            ));
        }
        Ok(NumericConfig {
            tol_abs,
            tol_rel,
            seed,
        })
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}
