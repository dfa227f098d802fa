//! Applications: the extended seminorm induced by q_A together with its
//! polar and Cauchy-Schwarz inequality, and the least-squares conjugate and
//! domain identities.

use nalgebra::{DMatrix, DVector};

use crate::glq::{ExtReal, GlqFunction};
use crate::linrel::LinearRelation;
use crate::subspace::{pinv, Subspace};
use crate::tol::Tolerances;
use crate::{Error, Result};

/// k = sqrt(2 q_A), an extended seminorm: nonnegative, absolutely
/// homogeneous, subadditive, and +infinity outside dom A. Its polar is the
/// seminorm of the inverse relation.
#[derive(Debug, Clone)]
pub struct ExtendedSeminorm {
    primal: GlqFunction,
    polar: GlqFunction,
}

impl ExtendedSeminorm {
    pub fn new(relation: LinearRelation) -> Result<Self> {
        let polar = GlqFunction::pure(relation.inverse())?;
        let primal = GlqFunction::pure(relation)?;
        Ok(ExtendedSeminorm { primal, polar })
    }

    pub fn relation(&self) -> &LinearRelation {
        self.primal.relation()
    }

    /// k(x) = sqrt(2 q_A(x)); the domain handling is inherited from GLQ
    /// evaluation rather than reimplemented.
    pub fn eval(&self, x: &DVector<f64>) -> Result<ExtReal> {
        Ok(match self.primal.evaluate(x)? {
            ExtReal::PlusInf => ExtReal::PlusInf,
            ExtReal::Finite(v) => ExtReal::Finite((2.0 * v.max(0.0)).sqrt()),
        })
    }

    /// The polar seminorm k°(y) = sqrt(2 q_{A^{-1}}(y)).
    pub fn polar_eval(&self, y: &DVector<f64>) -> Result<ExtReal> {
        Ok(match self.polar.evaluate(y)? {
            ExtReal::PlusInf => ExtReal::PlusInf,
            ExtReal::Finite(v) => ExtReal::Finite((2.0 * v.max(0.0)).sqrt()),
        })
    }

    /// The zero set k^{-1}(0), which equals A^{-1} 0 = {x : 0 in Ax}.
    pub fn zero_set(&self) -> &Subspace {
        self.polar.relation().kernel_dirs()
    }

    /// Checks <x, y> <= sqrt(<x, Ax>) sqrt(<y, A^{-1} y>) for x in dom A and
    /// y in ran A, with a 1e-12 slack. Arguments outside the domains are
    /// rejected.
    pub fn cauchy_schwarz_check(&self, x: &DVector<f64>, y: &DVector<f64>) -> Result<bool> {
        let kx = match self.eval(x)? {
            ExtReal::Finite(v) => v,
            ExtReal::PlusInf => return Err(Error::OutOfDomain("x must lie in dom A")),
        };
        let ky = match self.polar_eval(y)? {
            ExtReal::Finite(v) => v,
            ExtReal::PlusInf => return Err(Error::OutOfDomain("y must lie in ran A")),
        };
        Ok(x.dot(y) <= kx * ky + 1e-12)
    }

    /// Membership in C = {x : q_A(x) <= 1} (dual = false) or in
    /// C* = {y : q_{A^{-1}}(y) <= 1} (dual = true).
    pub fn polar_set_membership(&self, x: &DVector<f64>, dual: bool) -> Result<bool> {
        let v = if dual {
            self.polar.evaluate(x)?
        } else {
            self.primal.evaluate(x)?
        };
        Ok(match v {
            ExtReal::PlusInf => false,
            ExtReal::Finite(v) => v <= 1.0,
        })
    }
}

/// The least-squares objective (1/2)|Mx - b|^2 viewed as a GLQ function.
#[derive(Debug, Clone)]
pub struct LeastSquaresProblem {
    m: DMatrix<f64>,
    b: DVector<f64>,
}

impl LeastSquaresProblem {
    pub fn new(m: DMatrix<f64>, b: DVector<f64>) -> Result<Self> {
        if m.nrows() != b.len() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                got: b.len(),
            });
        }
        Ok(LeastSquaresProblem { m, b })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn rhs(&self) -> &DVector<f64> {
        &self.b
    }

    /// The objective as the GLQ (M^T M, 0, -M^T b, |b|^2 / 2).
    pub fn objective(&self, tol: &Tolerances) -> Result<GlqFunction> {
        let gram = self.m.transpose() * &self.m;
        let relation = LinearRelation::from_matrix(&gram, *tol)?;
        GlqFunction::new(
            relation,
            DVector::zeros(self.m.ncols()),
            -(self.m.transpose() * &self.b),
            0.5 * self.b.norm_squared(),
        )
    }

    /// The Fenchel conjugate of the objective,
    /// q_{(M^T M)^{-1}}(y + M^T b) - |b|^2 / 2, with domain ran M^T.
    pub fn conjugate(&self, tol: &Tolerances) -> Result<GlqFunction> {
        self.objective(tol)?.conjugate()
    }

    /// dom l* = ran M^T.
    pub fn conjugate_domain(&self, tol: &Tolerances) -> Subspace {
        Subspace::span_cols(&self.m.transpose(), tol)
    }

    /// Minimum-norm solution pinv(M) b of the normal equations.
    pub fn min_norm_solution(&self, tol: &Tolerances) -> DVector<f64> {
        pinv(&self.m, tol) * &self.b
    }
}
