//! Envelope inversion: deciding whether a convex quadratic is a Moreau
//! envelope for a given prox parameter, and recovering the objective.
//!
//! A quadratic (1/2)<x, Qx> + <b, x> + c is an envelope e_r g of some
//! g in Gamma_0 exactly when its gradient is r-Lipschitz, i.e. when
//! lambda_max(Q) <= r. On the feasible set the objective is the GLQ
//! g = q_{(Q^{-1} - Id/r)^{-1}}(. + b/r) + <b, .> + c + |b|^2/(2r),
//! where Q^{-1} is the set-valued inverse; the relation form stays total
//! even for unit eigenvalues and rank-deficient Q.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::glq::{GlqFunction, QuadraticFunction};
use crate::linrel::LinearRelation;
use crate::tol::Tolerances;
use crate::{Error, Result};

/// Why an inversion was declared infeasible.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InversionReason {
    Ok,
    GradientLipschitzExceedsR,
}

/// Outcome of an envelope inversion. `g` is present exactly when the input
/// passes the Lipschitz gate `lambda_max(Q) <= r`.
#[derive(Debug, Clone)]
pub struct EnvelopeInverseReport {
    pub feasible: bool,
    pub reason: InversionReason,
    /// Lipschitz constant of the input's gradient, lambda_max of its Hessian.
    pub lipschitz_bound: f64,
    pub g: Option<GlqFunction>,
}

impl EnvelopeInverseReport {
    fn infeasible(lipschitz_bound: f64) -> Self {
        EnvelopeInverseReport {
            feasible: false,
            reason: InversionReason::GradientLipschitzExceedsR,
            lipschitz_bound,
            g: None,
        }
    }

    fn feasible(lipschitz_bound: f64, g: GlqFunction) -> Self {
        EnvelopeInverseReport {
            feasible: true,
            reason: InversionReason::Ok,
            lipschitz_bound,
            g: Some(g),
        }
    }
}

/// Inverts e_r g = f for a convex quadratic f.
///
/// The boundary lambda_max = r is legitimate (indicator-type objectives),
/// so feasibility is tested with a relative slack r (1 + psd_tol).
pub fn invert_envelope(
    f: &QuadraticFunction,
    r: f64,
    tol: &Tolerances,
) -> Result<EnvelopeInverseReport> {
    if r <= 0.0 || !r.is_finite() {
        return Err(Error::InvalidProxParameter(r));
    }
    let lam_max = f.lambda_max().max(0.0);
    if lam_max > r * (1.0 + tol.psd_tol) {
        return Ok(EnvelopeInverseReport::infeasible(lam_max));
    }
    let n = f.dim();
    let q_rel = LinearRelation::from_matrix(f.q(), *tol)?;
    let neg_id_over_r = LinearRelation::from_matrix(&(DMatrix::identity(n, n) * (-1.0 / r)), *tol)?;
    let d = q_rel.inverse().add(&neg_id_over_r)?;
    let g = GlqFunction::new(
        d.inverse(),
        -f.b() / r,
        f.b().clone(),
        f.c() + f.b().norm_squared() / (2.0 * r),
    )?;
    Ok(EnvelopeInverseReport::feasible(lam_max, g))
}

/// One-dimensional three-case inversion of alpha x^2 + beta x + gamma.
///
/// Case (i), alpha < r/2: a quadratic objective; case (ii), alpha = r/2
/// within psd_tol: an indicator; case (iii), alpha > r/2: infeasible.
pub fn invert_envelope_1d(
    alpha: f64,
    beta: f64,
    gamma: f64,
    r: f64,
    tol: &Tolerances,
) -> Result<EnvelopeInverseReport> {
    if alpha < 0.0 {
        return Err(Error::NegativeQuadCoefficient(alpha));
    }
    if r <= 0.0 || !r.is_finite() {
        return Err(Error::InvalidProxParameter(r));
    }
    let lipschitz = 2.0 * alpha;
    if (alpha - r / 2.0).abs() <= tol.psd_tol {
        let b = -beta / r;
        let c = gamma - beta * beta / (2.0 * r);
        let g = GlqFunction::indicator(DVector::from_vec(vec![b]), c, *tol)?;
        return Ok(EnvelopeInverseReport::feasible(lipschitz, g));
    }
    if alpha > r / 2.0 {
        return Ok(EnvelopeInverseReport::infeasible(lipschitz));
    }
    let a = alpha * r / (r - 2.0 * alpha);
    let b = beta * r / (r - 2.0 * alpha);
    let c = gamma + beta * beta / (2.0 * (r - 2.0 * alpha));
    let rel = LinearRelation::from_matrix(&DMatrix::from_element(1, 1, 2.0 * a), *tol)?;
    let g = GlqFunction::new(rel, DVector::zeros(1), DVector::from_vec(vec![b]), c)?;
    Ok(EnvelopeInverseReport::feasible(lipschitz, g))
}

/// Nonexpansiveness report for a symmetric PSD matrix.
#[derive(Debug, Clone)]
pub struct NonexpansiveReport {
    pub nonexpansive: bool,
    /// For symmetric PSD matrices, firm nonexpansiveness coincides with
    /// nonexpansiveness (both mean all eigenvalues lie in [0, 1]).
    pub firmly: bool,
    /// When nonexpansive, the maximally monotone linear relation P with
    /// M = (P + Id)^{-1}.
    pub relation_p: Option<LinearRelation>,
}

pub fn nonexpansive_report(m: &DMatrix<f64>, tol: &Tolerances) -> Result<NonexpansiveReport> {
    let (rows, cols) = m.shape();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    if (m - m.transpose()).amax() > 1e-10 {
        return Err(Error::NotPositiveSemidefinite);
    }
    let eig = SymmetricEigen::new(m.clone());
    if eig.eigenvalues.iter().any(|&l| l < -tol.psd_tol) {
        return Err(Error::NotPositiveSemidefinite);
    }
    let lam_max = eig.eigenvalues.iter().cloned().fold(0.0_f64, f64::max);
    let nonexpansive = lam_max <= 1.0 + tol.psd_tol;
    if !nonexpansive {
        return Ok(NonexpansiveReport {
            nonexpansive: false,
            firmly: false,
            relation_p: None,
        });
    }
    let n = rows;
    let m_rel = LinearRelation::from_matrix(m, *tol)?;
    let neg_id = LinearRelation::from_matrix(&(DMatrix::identity(n, n) * -1.0), *tol)?;
    let p = m_rel.inverse().add(&neg_id)?;
    if !p.is_maximal_monotone(tol) {
        return Err(Error::NotMaximallyMonotone);
    }
    Ok(NonexpansiveReport {
        nonexpansive: true,
        firmly: true,
        relation_p: Some(p),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::glq::ExtReal;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn vecn(v: &[f64]) -> DVector<f64> {
        DVector::from_row_slice(v)
    }

    fn quad(q: DMatrix<f64>, b: DVector<f64>, c: f64) -> QuadraticFunction {
        QuadraticFunction::new(q, b, c, &tol()).unwrap()
    }

    #[test]
    fn three_halves_norm_squared_infeasible_at_one_feasible_at_three() {
        let t = tol();
        let f = quad(DMatrix::identity(2, 2) * 3.0, vecn(&[0.0; 2]), 0.0);
        let rep1 = invert_envelope(&f, 1.0, &t).unwrap();
        assert!(!rep1.feasible);
        assert_eq!(rep1.reason, InversionReason::GradientLipschitzExceedsR);
        assert!((rep1.lipschitz_bound - 3.0).abs() < 1e-10);

        // At r = 3 the Hessian hits the boundary lambda_max = r, the
        // indicator case: e_3 iota_0 = (3/2)|x|^2 recovers f exactly.
        let rep3 = invert_envelope(&f, 3.0, &t).unwrap();
        assert!(rep3.feasible);
        let g = rep3.g.unwrap();
        assert_eq!(g.evaluate(&vecn(&[0.0, 0.0])).unwrap(), ExtReal::Finite(0.0));
        assert_eq!(g.evaluate(&vecn(&[0.5, 0.0])).unwrap(), ExtReal::PlusInf);
        let round = g.envelope(3.0).unwrap();
        assert!(round.approx_eq(&f, 1e-9));
    }

    #[test]
    fn half_x_squared_at_one_gives_indicator() {
        let t = tol();
        let f = quad(DMatrix::from_element(1, 1, 1.0), vecn(&[0.0]), 0.0);
        let rep = invert_envelope(&f, 1.0, &t).unwrap();
        assert!(rep.feasible);
        let g = rep.g.unwrap();
        assert_eq!(g.evaluate(&vecn(&[0.0])).unwrap(), ExtReal::Finite(0.0));
        assert_eq!(g.evaluate(&vecn(&[1.0])).unwrap(), ExtReal::PlusInf);
        assert!(g.envelope(1.0).unwrap().approx_eq(&f, 1e-9));
    }

    #[test]
    fn quarter_x_squared_at_one_gives_half_x_squared() {
        let t = tol();
        let f = quad(DMatrix::from_element(1, 1, 0.5), vecn(&[0.0]), 0.0);
        let rep = invert_envelope(&f, 1.0, &t).unwrap();
        assert!(rep.feasible);
        let g = rep.g.unwrap();
        let v = g.evaluate(&vecn(&[2.0])).unwrap().value().unwrap();
        assert!((v - 2.0).abs() < 1e-9);
        assert!(g.envelope(1.0).unwrap().approx_eq(&f, 1e-9));
    }

    #[test]
    fn roundtrip_with_linear_terms_and_rank_deficiency() {
        let t = tol();
        // Q = diag(1, 0) at r = 2, with a linear term.
        let f = quad(
            DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]),
            vecn(&[0.5, -1.0]),
            0.75,
        );
        let rep = invert_envelope(&f, 2.0, &t).unwrap();
        assert!(rep.feasible);
        let g = rep.g.unwrap();
        assert!(g.envelope(2.0).unwrap().approx_eq(&f, 1e-8));
    }

    #[test]
    fn one_dimensional_cases() {
        let t = tol();
        // Inverts the envelope of 2x^2 + 3x + 2 at r = 1.
        let rep = invert_envelope_1d(0.4, 0.6, 1.1, 1.0, &t).unwrap();
        assert!(rep.feasible);
        let g = rep.g.unwrap();
        let v = |x: f64| g.evaluate(&vecn(&[x])).unwrap().value().unwrap();
        assert!((v(0.0) - 2.0).abs() < 1e-9);
        assert!((v(1.0) - 7.0).abs() < 1e-9);
        assert!((v(-1.0) - 1.0).abs() < 1e-9);

        // Boundary case: indicator at the origin.
        let rep = invert_envelope_1d(0.5, 0.0, 0.0, 1.0, &t).unwrap();
        assert!(rep.feasible);
        let g = rep.g.unwrap();
        assert_eq!(g.evaluate(&vecn(&[0.0])).unwrap(), ExtReal::Finite(0.0));
        assert_eq!(g.evaluate(&vecn(&[0.1])).unwrap(), ExtReal::PlusInf);

        // Beyond the boundary: no objective exists.
        let rep = invert_envelope_1d(1.0, 0.0, 0.0, 1.0, &t).unwrap();
        assert!(!rep.feasible);

        assert!(invert_envelope_1d(-0.1, 0.0, 0.0, 1.0, &t).is_err());
        assert!(invert_envelope_1d(0.1, 0.0, 0.0, 0.0, &t).is_err());
    }

    #[test]
    fn one_dimensional_cases_partition_alpha_axis() {
        let t = tol();
        let r = 1.0;
        for &alpha in &[0.0, 0.1, 0.4999, 0.5, 0.5001, 0.75, 2.0] {
            let rep = invert_envelope_1d(alpha, 0.3, -0.2, r, &t).unwrap();
            let indicator_case = (alpha - r / 2.0).abs() <= t.psd_tol;
            let infeasible_case = alpha > r / 2.0 + t.psd_tol;
            if infeasible_case {
                assert!(!rep.feasible, "alpha = {alpha}");
            } else {
                assert!(rep.feasible, "alpha = {alpha}");
                let g = rep.g.unwrap();
                let env = g.envelope(r).unwrap();
                assert!((env.q()[(0, 0)] - 2.0 * alpha).abs() < 1e-8);
                if indicator_case {
                    assert!(g.evaluate(&vecn(&[100.0])).unwrap() == ExtReal::PlusInf);
                }
            }
        }
    }

    #[test]
    fn nonexpansive_identity_gives_zero_relation() {
        let t = tol();
        let rep = nonexpansive_report(&DMatrix::identity(2, 2), &t).unwrap();
        assert!(rep.nonexpansive && rep.firmly);
        let p = rep.relation_p.unwrap();
        let zero = LinearRelation::from_matrix(&DMatrix::zeros(2, 2), t).unwrap();
        assert!(p.approx_eq(&zero, &t));
    }

    #[test]
    fn nonexpansive_diag_resolvent_roundtrip() {
        let t = tol();
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.5]);
        let rep = nonexpansive_report(&m, &t).unwrap();
        assert!(rep.nonexpansive);
        let p = rep.relation_p.unwrap();
        let back = p.resolvent().unwrap();
        assert!((back - m).norm() < 1e-9);
    }

    #[test]
    fn three_i_is_not_nonexpansive() {
        let t = tol();
        let rep = nonexpansive_report(&(DMatrix::identity(2, 2) * 3.0), &t).unwrap();
        assert!(!rep.nonexpansive && !rep.firmly);
        assert!(rep.relation_p.is_none());
    }

    #[test]
    fn nonexpansive_rejects_bad_inputs() {
        let t = tol();
        let asym = DMatrix::from_row_slice(2, 2, &[1.0, 0.2, 0.0, 1.0]);
        assert!(nonexpansive_report(&asym, &t).is_err());
        let indef = DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, -0.5]);
        assert!(nonexpansive_report(&indef, &t).is_err());
    }
}
