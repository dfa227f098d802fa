//! Generalized linear-quadratic functions and their calculus.
//!
//! A GLQ function is f(x) = q_A(x - a) + <b, x> + c where A is a maximally
//! monotone symmetric linear relation and q_A(z) = (1/2)<z, Az> on dom A,
//! +infinity outside. The class is closed under Fenchel conjugation, sums
//! with matching shifts, infimal convolution and star-differences, and its
//! Moreau envelope is always a finite convex quadratic.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use std::cmp::Ordering;
use std::ops::Add;

use crate::linrel::{AffineSet, LinearRelation};
use crate::tol::Tolerances;
use crate::{Error, Result};

/// A value in R union {+infinity} with inf-addition (so inf - inf = inf).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtReal {
    Finite(f64),
    PlusInf,
}

impl ExtReal {
    pub fn finite(v: f64) -> Self {
        ExtReal::Finite(v)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            ExtReal::Finite(v) => Some(*v),
            ExtReal::PlusInf => None,
        }
    }

    /// As an f64, mapping +infinity to `f64::INFINITY`.
    pub fn to_f64(&self) -> f64 {
        match self {
            ExtReal::Finite(v) => *v,
            ExtReal::PlusInf => f64::INFINITY,
        }
    }

    /// Checked subtraction. `inf - x = inf` for every x (inf-addition);
    /// `finite - inf` leaves R union {+infinity} and yields `None`.
    pub fn checked_sub(self, rhs: ExtReal) -> Option<ExtReal> {
        match (self, rhs) {
            (ExtReal::PlusInf, _) => Some(ExtReal::PlusInf),
            (ExtReal::Finite(_), ExtReal::PlusInf) => None,
            (ExtReal::Finite(a), ExtReal::Finite(b)) => Some(ExtReal::Finite(a - b)),
        }
    }

    /// Scaling by a nonnegative factor.
    pub fn scale(self, lambda: f64) -> ExtReal {
        match self {
            ExtReal::PlusInf => ExtReal::PlusInf,
            ExtReal::Finite(v) => ExtReal::Finite(lambda * v),
        }
    }
}

impl Add for ExtReal {
    type Output = ExtReal;
    fn add(self, rhs: ExtReal) -> ExtReal {
        match (self, rhs) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => ExtReal::Finite(a + b),
            _ => ExtReal::PlusInf,
        }
    }
}

impl Add<f64> for ExtReal {
    type Output = ExtReal;
    fn add(self, rhs: f64) -> ExtReal {
        self + ExtReal::Finite(rhs)
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => a.partial_cmp(b),
            (ExtReal::PlusInf, ExtReal::PlusInf) => Some(Ordering::Equal),
            (ExtReal::PlusInf, ExtReal::Finite(_)) => Some(Ordering::Greater),
            (ExtReal::Finite(_), ExtReal::PlusInf) => Some(Ordering::Less),
        }
    }
}

/// A finite convex quadratic (1/2)<x, Qx> + <b, x> + c with symmetric
/// positive semidefinite Q; the output type of Moreau envelopes.
#[derive(Debug, Clone)]
pub struct QuadraticFunction {
    q: DMatrix<f64>,
    b: DVector<f64>,
    c: f64,
}

impl QuadraticFunction {
    pub fn new(q: DMatrix<f64>, b: DVector<f64>, c: f64, tol: &Tolerances) -> Result<Self> {
        let (rows, cols) = q.shape();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        if b.len() != rows {
            return Err(Error::DimensionMismatch {
                expected: rows,
                got: b.len(),
            });
        }
        let defect = (&q - q.transpose()).amax();
        if defect > 1e-10 {
            return Err(Error::NotPositiveSemidefinite);
        }
        let sym = (&q + q.transpose()) * 0.5;
        let eig = SymmetricEigen::new(sym.clone());
        if eig.eigenvalues.iter().any(|&l| l < -tol.psd_tol) {
            return Err(Error::NotPositiveSemidefinite);
        }
        Ok(QuadraticFunction { q: sym, b, c })
    }

    pub fn dim(&self) -> usize {
        self.b.len()
    }

    pub fn q(&self) -> &DMatrix<f64> {
        &self.q
    }

    pub fn b(&self) -> &DVector<f64> {
        &self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn eval(&self, x: &DVector<f64>) -> f64 {
        0.5 * x.dot(&(&self.q * x)) + self.b.dot(x) + self.c
    }

    pub fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.q * x + &self.b
    }

    /// Largest eigenvalue of the Hessian, the Lipschitz constant of the
    /// gradient.
    pub fn lambda_max(&self) -> f64 {
        SymmetricEigen::new(self.q.clone())
            .eigenvalues
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn approx_eq(&self, other: &QuadraticFunction, tol: f64) -> bool {
        self.dim() == other.dim()
            && (&self.q - &other.q).amax() <= tol
            && (&self.b - &other.b).amax() <= tol
            && (self.c - other.c).abs() <= tol
    }
}

/// f(x) = q_A(x - a) + <b, x> + c over a maximally monotone symmetric
/// linear relation A.
#[derive(Debug, Clone)]
pub struct GlqFunction {
    relation: LinearRelation,
    a: DVector<f64>,
    b: DVector<f64>,
    c: f64,
}

impl GlqFunction {
    /// Validates that the relation is maximally monotone and symmetric, the
    /// conditions under which q_A is a well-defined proper convex function.
    pub fn new(relation: LinearRelation, a: DVector<f64>, b: DVector<f64>, c: f64) -> Result<Self> {
        let n = relation.n();
        if a.len() != n || b.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: if a.len() != n { a.len() } else { b.len() },
            });
        }
        let tol = *relation.tolerances();
        if !relation.is_maximal_monotone(&tol) {
            return Err(Error::NotMaximallyMonotone);
        }
        if !relation.is_symmetric(&tol) {
            return Err(Error::NotSymmetric);
        }
        Ok(GlqFunction { relation, a, b, c })
    }

    /// The pure quadratic q_A.
    pub fn pure(relation: LinearRelation) -> Result<Self> {
        let n = relation.n();
        Self::new(relation, DVector::zeros(n), DVector::zeros(n), 0.0)
    }

    /// The indicator of a point plus a constant, q_{N_{0}}(x - point) + c.
    pub fn indicator(point: DVector<f64>, constant: f64, tol: Tolerances) -> Result<Self> {
        let n = point.len();
        let relation = LinearRelation::normal_cone_origin(n, tol)?;
        Self::new(relation, point, DVector::zeros(n), constant)
    }

    pub fn dim(&self) -> usize {
        self.relation.n()
    }

    pub fn relation(&self) -> &LinearRelation {
        &self.relation
    }

    pub fn shift(&self) -> &DVector<f64> {
        &self.a
    }

    pub fn linear(&self) -> &DVector<f64> {
        &self.b
    }

    pub fn constant(&self) -> f64 {
        self.c
    }

    fn tol(&self) -> Tolerances {
        *self.relation.tolerances()
    }

    /// Membership in the class T (zero shift).
    pub fn is_in_t(&self) -> bool {
        self.a.amax() <= self.tol().value_tol
    }

    /// Membership in the class U (zero shift and zero linear term).
    pub fn is_in_u(&self) -> bool {
        self.is_in_t() && self.b.amax() <= self.tol().value_tol
    }

    /// Evaluation via the minimum-norm selection; the value does not depend
    /// on the selection because A is monotone.
    pub fn evaluate(&self, x: &DVector<f64>) -> Result<ExtReal> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        let z = x - &self.a;
        let set = self.relation.apply(&z)?;
        match set.point() {
            None => Ok(ExtReal::PlusInf),
            Some(y) => Ok(ExtReal::Finite(0.5 * z.dot(y) + self.b.dot(x) + self.c)),
        }
    }

    /// The subdifferential A(x - a) + b, empty outside dom f.
    pub fn subdifferential(&self, x: &DVector<f64>) -> Result<AffineSet> {
        let z = x - &self.a;
        let set = self.relation.apply(&z)?;
        Ok(set.translate(&self.b))
    }

    /// Fenchel conjugate: f*(y) = q_{A^{-1}}(y - b) + <a, y> - <a, b> - c.
    pub fn conjugate(&self) -> Result<GlqFunction> {
        GlqFunction::new(
            self.relation.inverse(),
            self.b.clone(),
            self.a.clone(),
            -self.a.dot(&self.b) - self.c,
        )
    }

    /// Closed-form Moreau envelope, always a finite convex quadratic with
    /// gradient Lipschitz constant at most r.
    ///
    /// The Hessian is r M with M = (Id + r A^{-1})^{-1}, expanded about
    /// a + b/r with the matching linear and constant corrections.
    pub fn envelope(&self, r: f64) -> Result<QuadraticFunction> {
        if r <= 0.0 || !r.is_finite() {
            return Err(Error::InvalidProxParameter(r));
        }
        let m_rel = self.relation.inverse().scale(r)?;
        let m = m_rel.resolvent()?;
        let m = (&m + m.transpose()) * 0.5;
        let q = m * r;
        let center = &self.a + &self.b / r;
        let beta = &self.b - &q * &center;
        let gamma = 0.5 * center.dot(&(&q * &center)) + self.c - self.b.norm_squared() / (2.0 * r);
        QuadraticFunction::new(q, beta, gamma, &self.tol())
    }

    /// Proximal point a + J(x - a - b/r) with J the resolvent of A/r.
    pub fn prox(&self, r: f64, x: &DVector<f64>) -> Result<DVector<f64>> {
        if r <= 0.0 || !r.is_finite() {
            return Err(Error::InvalidProxParameter(r));
        }
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        let j = self.relation.scale(1.0 / r)?.resolvent()?;
        Ok(&self.a + j * (x - &self.a - &self.b / r))
    }

    /// Gradient of the Moreau envelope, r (x - prox).
    pub fn envelope_gradient(&self, r: f64, x: &DVector<f64>) -> Result<DVector<f64>> {
        let p = self.prox(r, x)?;
        Ok((x - p) * r)
    }

    /// Pointwise sum; requires matching shifts because the GLQ class is not
    /// closed under sums with differing shifts.
    pub fn add(&self, other: &GlqFunction) -> Result<GlqFunction> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        if (&self.a - &other.a).amax() > self.tol().value_tol {
            return Err(Error::ShiftMismatch);
        }
        GlqFunction::new(
            self.relation.add(&other.relation)?,
            self.a.clone(),
            &self.b + &other.b,
            self.c + other.c,
        )
    }

    /// Pointwise difference q_{A1} - q_{A2} = q_{A1 - A2}; valid only when
    /// dom A1 is contained in dom A2 and the relation difference is
    /// monotone. Outside those conditions the difference takes the value
    /// 1/2 - infinity somewhere and leaves the class.
    pub fn subtract(&self, other: &GlqFunction) -> Result<GlqFunction> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        let tol = self.tol();
        if (&self.a - &other.a).amax() > tol.value_tol {
            return Err(Error::ShiftMismatch);
        }
        if !other
            .relation
            .domain()
            .contains_subspace(self.relation.domain(), &tol)
        {
            return Err(Error::DomainNotIncluded);
        }
        let diff = self.relation.add(&other.relation.scale(-1.0)?)?;
        if !diff.is_monotone(&tol) {
            return Err(Error::NonMonotoneDifference);
        }
        GlqFunction::new(diff, self.a.clone(), &self.b - &other.b, self.c - other.c)
    }

    /// Infimal convolution through the conjugate route
    /// (f1 box f2 = (f1* + f2*)*), whose relation part is the parallel sum
    /// (A1^{-1} + A2^{-1})^{-1}. Requires zero shifts; the conjugates then
    /// carry shifts b1, b2 and their sum requires b1 = b2 (zero in the
    /// class U).
    pub fn inf_convolve(&self, other: &GlqFunction) -> Result<GlqFunction> {
        let tol = self.tol();
        if self.a.amax() > tol.value_tol || other.a.amax() > tol.value_tol {
            return Err(Error::NonzeroShift);
        }
        self.conjugate()?.add(&other.conjugate()?)?.conjugate()
    }

    /// Star-difference (deconvolution): the GLQ h with q_{A2} box h = q_{A1},
    /// whose subdifferential is (A1^{-1} - A2^{-1})^{-1}. The second operand
    /// must be a positive definite quadratic and the inverse difference must
    /// be monotone.
    pub fn star_difference(&self, other: &QuadraticFunction) -> Result<GlqFunction> {
        let tol = self.tol();
        if self.a.amax() > tol.value_tol {
            return Err(Error::NonzeroShift);
        }
        if self.b.amax() > tol.value_tol || other.b().amax() > tol.value_tol {
            return Err(Error::Invalid(
                "star-difference is defined for pure quadratic parts (b = 0)".into(),
            ));
        }
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        let eig = SymmetricEigen::new(other.q().clone());
        if eig.eigenvalues.iter().any(|&l| l < tol.psd_tol) {
            return Err(Error::NotPositiveDefinite);
        }
        let q2_inv = other
            .q()
            .clone()
            .lu()
            .try_inverse()
            .ok_or(Error::NotPositiveDefinite)?;
        let a2_inv = LinearRelation::from_matrix(&q2_inv, tol)?;
        let diff = self.relation.inverse().add(&a2_inv.scale(-1.0)?)?;
        if !diff.is_monotone(&tol) {
            return Err(Error::NonMonotoneDifference);
        }
        let n = self.dim();
        GlqFunction::new(
            diff.inverse(),
            DVector::zeros(n),
            DVector::zeros(n),
            self.c - other.c(),
        )
    }

    /// Semantic equality: the parameterization (A, a, b, c) is not unique,
    /// so two GLQ functions are equal exactly when their Moreau envelopes at
    /// r = 1 agree as quadratics.
    pub fn approx_semantic_eq(&self, other: &GlqFunction, tol: f64) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        match (self.envelope(1.0), other.envelope(1.0)) {
            (Ok(e1), Ok(e2)) => e1.approx_eq(&e2, tol),
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn vecn(v: &[f64]) -> DVector<f64> {
        DVector::from_row_slice(v)
    }

    fn mat(rows: usize, cols: usize, data: &[f64]) -> DMatrix<f64> {
        DMatrix::from_row_slice(rows, cols, data)
    }

    fn rel(m: &DMatrix<f64>) -> LinearRelation {
        LinearRelation::from_matrix(m, tol()).unwrap()
    }

    fn q_identity(n: usize) -> GlqFunction {
        GlqFunction::pure(rel(&DMatrix::identity(n, n))).unwrap()
    }

    #[test]
    fn ext_real_inf_addition() {
        let inf = ExtReal::PlusInf;
        let one = ExtReal::Finite(1.0);
        assert_eq!(inf + one, ExtReal::PlusInf);
        assert_eq!(inf.checked_sub(inf), Some(ExtReal::PlusInf));
        assert_eq!(one.checked_sub(inf), None);
        assert!(inf > one);
    }

    #[test]
    fn evaluate_indicator_form() {
        let a = vecn(&[1.0, -2.0]);
        let f = GlqFunction::indicator(a.clone(), 3.5, tol()).unwrap();
        assert_eq!(f.evaluate(&a).unwrap(), ExtReal::Finite(3.5));
        assert_eq!(f.evaluate(&vecn(&[2.0, -2.0])).unwrap(), ExtReal::PlusInf);
    }

    #[test]
    fn evaluate_half_norm_squared() {
        let f = q_identity(2);
        let v = f.evaluate(&vecn(&[3.0, 4.0])).unwrap();
        assert!((v.value().unwrap() - 12.5).abs() < 1e-12);
    }

    #[test]
    fn evaluate_mixed_rank_deficient() {
        // f = q_{diag(1,0)} + <(0,1), x> + 2 at (3,4) = 4.5 + 4 + 2.
        let f = GlqFunction::new(
            rel(&mat(2, 2, &[1.0, 0.0, 0.0, 0.0])),
            vecn(&[0.0, 0.0]),
            vecn(&[0.0, 1.0]),
            2.0,
        )
        .unwrap();
        let v = f.evaluate(&vecn(&[3.0, 4.0])).unwrap();
        assert!((v.value().unwrap() - 10.5).abs() < 1e-12);
    }

    #[test]
    fn subdifferential_of_identity_quadratic() {
        let f = q_identity(2);
        let set = f.subdifferential(&vecn(&[1.0, 2.0])).unwrap();
        assert!(set.is_singleton());
        assert!((set.point().unwrap() - vecn(&[1.0, 2.0])).norm() < 1e-12);
    }

    #[test]
    fn subdifferential_of_indicator_is_translated_space() {
        let f = GlqFunction::new(
            LinearRelation::normal_cone_origin(2, tol()).unwrap(),
            vecn(&[1.0, 1.0]),
            vecn(&[0.5, 0.0]),
            0.0,
        )
        .unwrap();
        let set = f.subdifferential(&vecn(&[1.0, 1.0])).unwrap();
        assert!(!set.is_empty());
        assert_eq!(set.directions().dim(), 2);
        assert!(set.contains(&vecn(&[17.0, -3.0]), &tol()));
        assert!(f.subdifferential(&vecn(&[0.0, 0.0])).unwrap().is_empty());
    }

    #[test]
    fn conjugate_of_q_is_q() {
        let f = q_identity(3);
        let g = f.conjugate().unwrap();
        assert!(g.approx_semantic_eq(&f, 1e-9));
    }

    #[test]
    fn conjugate_of_indicator_origin_is_zero() {
        let t = tol();
        let f = GlqFunction::pure(LinearRelation::normal_cone_origin(2, t).unwrap()).unwrap();
        let g = f.conjugate().unwrap();
        let zero_fn = GlqFunction::pure(rel(&DMatrix::zeros(2, 2))).unwrap();
        assert!(g.approx_semantic_eq(&zero_fn, 1e-9));
    }

    #[test]
    fn conjugate_rank_deficient_with_linear_term() {
        // f = q_{diag(1,0)} + <(0,1), x>; f*(2,1) = 2, f*(2,0) = +inf.
        let f = GlqFunction::new(
            rel(&mat(2, 2, &[1.0, 0.0, 0.0, 0.0])),
            vecn(&[0.0, 0.0]),
            vecn(&[0.0, 1.0]),
            0.0,
        )
        .unwrap();
        let g = f.conjugate().unwrap();
        let v1 = g.evaluate(&vecn(&[2.0, 1.0])).unwrap();
        assert!((v1.value().unwrap() - 2.0).abs() < 1e-10);
        assert_eq!(g.evaluate(&vecn(&[2.0, 0.0])).unwrap(), ExtReal::PlusInf);
    }

    #[test]
    fn biconjugate_is_identity() {
        let f = GlqFunction::new(
            rel(&mat(2, 2, &[2.0, 1.0, 1.0, 3.0])),
            vecn(&[0.5, -1.0]),
            vecn(&[1.0, 2.0]),
            -0.75,
        )
        .unwrap();
        let ff = f.conjugate().unwrap().conjugate().unwrap();
        assert!(ff.approx_semantic_eq(&f, 1e-9));
    }

    #[test]
    fn envelope_of_indicator() {
        let t = vecn(&[2.0, -1.0]);
        let f = GlqFunction::indicator(t.clone(), 0.5, tol()).unwrap();
        let env = f.envelope(2.0).unwrap();
        // (r/2)||x - t||^2 + s.
        let x = vecn(&[1.0, 1.0]);
        let expected = 1.0 * (&x - &t).norm_squared() + 0.5;
        assert!((env.eval(&x) - expected).abs() < 1e-10);
        assert!((env.lambda_max() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn envelope_matches_univariate_closed_form() {
        // f(x) = 2x^2 + 3x + 2, r = 1: e_1 f = (2/5)x^2 + (3/5)x + 11/10.
        let f = GlqFunction::new(rel(&mat(1, 1, &[4.0])), vecn(&[0.0]), vecn(&[3.0]), 2.0).unwrap();
        let env = f.envelope(1.0).unwrap();
        assert!((env.q()[(0, 0)] - 0.8).abs() < 1e-12);
        assert!((env.b()[0] - 0.6).abs() < 1e-12);
        assert!((env.c() - 1.1).abs() < 1e-12);
    }

    #[test]
    fn envelope_of_q_at_one_is_quarter_norm() {
        let f = q_identity(2);
        let env = f.envelope(1.0).unwrap();
        assert!((env.q() - DMatrix::identity(2, 2) * 0.5).norm() < 1e-12);
        assert!(env.b().norm() < 1e-12);
        assert!(env.c().abs() < 1e-12);
    }

    #[test]
    fn prox_examples() {
        // Indicator: prox is the point.
        let t = vecn(&[3.0]);
        let f = GlqFunction::indicator(t.clone(), 0.0, tol()).unwrap();
        let p = f.prox(2.0, &vecn(&[-5.0])).unwrap();
        assert!((p - t).norm() < 1e-12);

        // q: prox is x/2 at r = 1.
        let g = q_identity(1);
        let p = g.prox(1.0, &vecn(&[4.0])).unwrap();
        assert!((p[0] - 2.0).abs() < 1e-12);

        // 2x^2+3x+2 at r=1, x=2: p = -1/5.
        let h = GlqFunction::new(rel(&mat(1, 1, &[4.0])), vecn(&[0.0]), vecn(&[3.0]), 2.0).unwrap();
        let p = h.prox(1.0, &vecn(&[2.0])).unwrap();
        assert!((p[0] + 0.2).abs() < 1e-12);
    }

    #[test]
    fn prox_stationarity_residual() {
        let f = GlqFunction::new(
            rel(&mat(2, 2, &[3.0, 1.0, 1.0, 2.0])),
            vecn(&[0.5, 0.25]),
            vecn(&[-1.0, 2.0]),
            0.0,
        )
        .unwrap();
        let r = 1.5;
        let x = vecn(&[2.0, -1.0]);
        let p = f.prox(r, &x).unwrap();
        // 0 in A(p - a) + b + r(p - x): distance of -r(p-x)-b to A(p-a).
        let target = -(&p - &x) * r - f.linear();
        let set = f.relation().apply(&(&p - f.shift())).unwrap();
        assert!(set.distance(&target) <= 1e-8);
    }

    #[test]
    fn envelope_gradient_examples() {
        let f = GlqFunction::indicator(vecn(&[0.0, 0.0]), 0.0, tol()).unwrap();
        let r = 2.5;
        let x = vecn(&[1.0, -2.0]);
        let g = f.envelope_gradient(r, &x).unwrap();
        assert!((g - &x * r).norm() < 1e-12);

        let q = q_identity(1);
        let g = q.envelope_gradient(1.0, &vecn(&[3.0])).unwrap();
        assert!((g[0] - 1.5).abs() < 1e-12);
    }

    #[test]
    fn add_matching_shifts() {
        let f1 = GlqFunction::new(rel(&DMatrix::identity(2, 2)), vecn(&[0.0; 2]), vecn(&[0.0; 2]), 1.0).unwrap();
        let f2 = GlqFunction::new(rel(&DMatrix::identity(2, 2)), vecn(&[0.0; 2]), vecn(&[0.0; 2]), 2.0).unwrap();
        let sum = f1.add(&f2).unwrap();
        let expected =
            GlqFunction::new(rel(&(DMatrix::identity(2, 2) * 2.0)), vecn(&[0.0; 2]), vecn(&[0.0; 2]), 3.0).unwrap();
        assert!(sum.approx_semantic_eq(&expected, 1e-9));
    }

    #[test]
    fn add_shift_mismatch_is_error() {
        let f1 = GlqFunction::new(rel(&DMatrix::identity(1, 1)), vecn(&[1.0]), vecn(&[0.0]), 0.0).unwrap();
        let f2 = GlqFunction::new(rel(&DMatrix::identity(1, 1)), vecn(&[0.0]), vecn(&[0.0]), 0.0).unwrap();
        assert!(matches!(f1.add(&f2), Err(Error::ShiftMismatch)));
    }

    #[test]
    fn subtract_domain_counterexample() {
        // q_{Id} - q_{N_{R x {0}}} on R^2: dom Id not within dom N.
        let t = tol();
        let f1 = q_identity(2);
        let x_axis = crate::subspace::Subspace::span(&[vecn(&[1.0, 0.0])], &t).unwrap();
        let f2 = GlqFunction::pure(LinearRelation::normal_cone_of(&x_axis, t).unwrap()).unwrap();
        assert!(matches!(f1.subtract(&f2), Err(Error::DomainNotIncluded)));
    }

    #[test]
    fn subtract_valid_difference() {
        let f1 = GlqFunction::pure(rel(&(DMatrix::identity(2, 2) * 3.0))).unwrap();
        let f2 = q_identity(2);
        let diff = f1.subtract(&f2).unwrap();
        let expected = GlqFunction::pure(rel(&(DMatrix::identity(2, 2) * 2.0))).unwrap();
        assert!(diff.approx_semantic_eq(&expected, 1e-9));
    }

    #[test]
    fn subtract_nonmonotone_difference_is_error() {
        let f1 = q_identity(2);
        let f2 = GlqFunction::pure(rel(&(DMatrix::identity(2, 2) * 3.0))).unwrap();
        assert!(matches!(f1.subtract(&f2), Err(Error::NonMonotoneDifference)));
    }

    #[test]
    fn inf_convolution_of_q_with_itself() {
        let f = q_identity(2);
        let conv = f.inf_convolve(&f).unwrap();
        let expected = GlqFunction::pure(rel(&(DMatrix::identity(2, 2) * 0.5))).unwrap();
        assert!(conv.approx_semantic_eq(&expected, 1e-9));
    }

    #[test]
    fn inf_convolution_with_indicator_at_origin() {
        let t = tol();
        let f = GlqFunction::new(
            rel(&mat(2, 2, &[2.0, 1.0, 1.0, 2.0])),
            vecn(&[0.0; 2]),
            vecn(&[0.0; 2]),
            0.0,
        )
        .unwrap();
        let iota = GlqFunction::pure(LinearRelation::normal_cone_origin(2, t).unwrap()).unwrap();
        let conv = f.inf_convolve(&iota).unwrap();
        assert!(conv.approx_semantic_eq(&f, 1e-9));
    }

    #[test]
    fn inf_convolution_rejects_nonzero_shift() {
        let f = GlqFunction::new(rel(&DMatrix::identity(1, 1)), vecn(&[1.0]), vecn(&[0.0]), 0.0).unwrap();
        let g = q_identity(1);
        assert!(matches!(f.inf_convolve(&g), Err(Error::NonzeroShift)));
    }

    #[test]
    fn star_difference_examples() {
        let t = tol();
        // A1 = Id, A2 = Id/2: inverse difference -Id, not monotone.
        let f1 = q_identity(2);
        let q_half = QuadraticFunction::new(DMatrix::identity(2, 2) * 0.5, vecn(&[0.0; 2]), 0.0, &t).unwrap();
        assert!(matches!(
            f1.star_difference(&q_half),
            Err(Error::NonMonotoneDifference)
        ));

        // A1 = Id/2, A2 = Id: h = q.
        let f_half = GlqFunction::pure(rel(&(DMatrix::identity(2, 2) * 0.5))).unwrap();
        let q_full = QuadraticFunction::new(DMatrix::identity(2, 2), vecn(&[0.0; 2]), 0.0, &t).unwrap();
        let h = f_half.star_difference(&q_full).unwrap();
        assert!(h.approx_semantic_eq(&q_identity(2), 1e-9));

        // diag(1,2) minus diag(2,4): relation diag(2,4).
        let f_d = GlqFunction::pure(rel(&mat(2, 2, &[1.0, 0.0, 0.0, 2.0]))).unwrap();
        let q_d = QuadraticFunction::new(mat(2, 2, &[2.0, 0.0, 0.0, 4.0]), vecn(&[0.0; 2]), 0.0, &t).unwrap();
        let h = f_d.star_difference(&q_d).unwrap();
        let expected = GlqFunction::pure(rel(&mat(2, 2, &[2.0, 0.0, 0.0, 4.0]))).unwrap();
        assert!(h.approx_semantic_eq(&expected, 1e-9));
    }

    #[test]
    fn quadratic_function_rejects_asymmetric_and_indefinite() {
        let t = tol();
        let asym = mat(2, 2, &[1.0, 0.5, 0.0, 1.0]);
        assert!(QuadraticFunction::new(asym, vecn(&[0.0; 2]), 0.0, &t).is_err());
        let indef = mat(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert!(QuadraticFunction::new(indef, vecn(&[0.0; 2]), 0.0, &t).is_err());
    }
}
