//! Numerical tolerances shared across the crate.

use crate::{Error, Result};

/// Thresholds steering rank decisions and approximate predicates.
///
/// Rank decisions are relative to the largest singular value so that graph
/// computations are invariant under rescaling of user matrices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Singular values below `rank_rel_tol * sigma_max` are treated as zero.
    pub rank_rel_tol: f64,
    /// Slack for positive-semidefiniteness and symmetry predicates.
    pub psd_tol: f64,
    /// Slack for membership tests and value comparisons.
    pub value_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rank_rel_tol: 1e-10,
            psd_tol: 1e-9,
            value_tol: 1e-9,
        }
    }
}

impl Tolerances {
    pub fn new(rank_rel_tol: f64, psd_tol: f64, value_tol: f64) -> Result<Self> {
        if rank_rel_tol <= 0.0 || psd_tol <= 0.0 || value_tol <= 0.0 {
            return Err(Error::InvalidTolerance);
        }
        Ok(Tolerances {
            rank_rel_tol,
            psd_tol,
            value_tol,
        })
    }
}
