//! Subspace linear algebra on orthonormal bases.
//!
//! A [`Subspace`] is stored as a dense matrix whose columns form an
//! orthonormal basis; the zero subspace has zero columns. Rank decisions use
//! a relative singular-value threshold, and intersections are computed
//! through orthogonal complements so that a single well-tested primitive
//! carries all the degenerate cases.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::tol::Tolerances;
use crate::{Error, Result};

/// Thin singular value decomposition through the symmetric eigenproblem of
/// the augmented matrix [[0, A], [A^T, 0]], whose eigenvalues are plus and
/// minus the singular values with eigenvectors (u; v)/sqrt(2) and
/// (u; -v)/sqrt(2).
///
/// This route keeps full absolute accuracy on small singular values (no
/// squaring through A^T A) and relies only on the symmetric tridiagonal
/// eigensolver.
struct ThinSvd {
    /// Descending singular values paired columnwise with `u` and `v`.
    sigma: Vec<f64>,
    u: Vec<DVector<f64>>,
    v: Vec<DVector<f64>>,
}

fn thin_svd(m: &DMatrix<f64>) -> ThinSvd {
    let (rows, cols) = m.shape();
    let dim = rows + cols;
    let mut aug = DMatrix::zeros(dim, dim);
    aug.view_mut((0, rows), (rows, cols)).copy_from(m);
    aug.view_mut((rows, 0), (cols, rows)).copy_from(&m.transpose());
    let eig = SymmetricEigen::new(aug);
    let mut triples: Vec<(f64, DVector<f64>, DVector<f64>)> = Vec::new();
    for (i, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda <= 0.0 {
            continue;
        }
        let col = eig.eigenvectors.column(i);
        let mut u = col.rows(0, rows).into_owned();
        let mut v = col.rows(rows, cols).into_owned();
        let (nu, nv) = (u.norm(), v.norm());
        // Zero blocks only occur for spurious near-zero eigenvalues.
        if nu == 0.0 || nv == 0.0 {
            continue;
        }
        u /= nu;
        v /= nv;
        triples.push((lambda, u, v));
    }
    triples.sort_by(|a, b| b.0.partial_cmp(&a.0).expect("finite singular values"));
    ThinSvd {
        sigma: triples.iter().map(|t| t.0).collect(),
        u: triples.iter().map(|t| t.1.clone()).collect(),
        v: triples.iter().map(|t| t.2.clone()).collect(),
    }
}

/// A linear subspace of R^d held as an orthonormal basis.
#[derive(Debug, Clone)]
pub struct Subspace {
    ambient_dim: usize,
    /// `ambient_dim x k` matrix with orthonormal columns; `k = 0` encodes
    /// the zero subspace.
    basis: DMatrix<f64>,
}

impl Subspace {
    /// The zero subspace of R^d.
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: DMatrix::zeros(ambient_dim, 0),
        }
    }

    /// All of R^d.
    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: DMatrix::identity(ambient_dim, ambient_dim),
        }
    }

    /// Wraps a matrix already known to have orthonormal columns.
    pub(crate) fn from_orthonormal(basis: DMatrix<f64>) -> Self {
        Subspace {
            ambient_dim: basis.nrows(),
            basis,
        }
    }

    /// Orthonormal basis of the span of `vectors`.
    ///
    /// The rank is the number of singular values at least
    /// `rank_rel_tol * sigma_max`; a single nonzero vector is therefore never
    /// rank-deficient, it is only normalized.
    pub fn span(vectors: &[DVector<f64>], tol: &Tolerances) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::BadGrid("span of an empty list has no ambient dimension"));
        }
        let d = vectors[0].len();
        for v in vectors {
            if v.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: v.len(),
                });
            }
        }
        let m = DMatrix::from_columns(vectors);
        Ok(Self::span_cols(&m, tol))
    }

    /// Like [`Subspace::span`] but for an explicit ambient dimension, so the
    /// empty list denotes the zero subspace.
    pub fn span_in(ambient_dim: usize, vectors: &[DVector<f64>], tol: &Tolerances) -> Result<Self> {
        if vectors.is_empty() {
            return Ok(Self::zero(ambient_dim));
        }
        for v in vectors {
            if v.len() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    got: v.len(),
                });
            }
        }
        Self::span(vectors, tol)
    }

    /// Span of the columns of a matrix.
    pub fn span_cols(m: &DMatrix<f64>, tol: &Tolerances) -> Self {
        Self::span_cols_floored(m, tol, 0.0)
    }

    /// Span with the rank threshold anchored at `max(sigma_max, floor)`.
    ///
    /// Blocks sliced out of an orthonormal basis have a known scale of one;
    /// anchoring the threshold there keeps pure rounding noise from being
    /// promoted to a genuine direction.
    pub(crate) fn span_cols_floored(m: &DMatrix<f64>, tol: &Tolerances, floor: f64) -> Self {
        let d = m.nrows();
        if m.ncols() == 0 {
            return Self::zero(d);
        }
        let svd = thin_svd(m);
        let sigma_max = svd.sigma.first().copied().unwrap_or(0.0);
        let anchor = sigma_max.max(floor);
        if anchor == 0.0 {
            return Self::zero(d);
        }
        let rank = svd.sigma.iter().filter(|&&s| s >= tol.rank_rel_tol * anchor).count();
        if rank == 0 {
            return Self::zero(d);
        }
        Subspace {
            ambient_dim: d,
            basis: DMatrix::from_columns(&svd.u[..rank]),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// The orthogonal projector `B B^T` onto the subspace.
    pub fn projector(&self) -> DMatrix<f64> {
        &self.basis * self.basis.transpose()
    }

    /// Orthogonal projection of `x` onto the subspace.
    pub fn project(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        if x.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: x.len(),
            });
        }
        Ok(&self.basis * (self.basis.transpose() * x))
    }

    /// Distance from `x` to the subspace.
    pub fn residual(&self, x: &DVector<f64>) -> f64 {
        let p = &self.basis * (self.basis.transpose() * x);
        (x - p).norm()
    }

    /// Membership up to `value_tol`.
    pub fn contains_vector(&self, x: &DVector<f64>, tol: &Tolerances) -> bool {
        x.len() == self.ambient_dim && self.residual(x) <= tol.value_tol
    }

    /// The orthogonal complement.
    ///
    /// Computed from the spectral decomposition of `I - B B^T`, whose
    /// eigenvalues cluster at 0 and 1; eigenvectors above 1/2 span the
    /// complement. This keeps `dim S + dim S^perp = d` exact.
    pub fn complement(&self) -> Self {
        let d = self.ambient_dim;
        if self.dim() == 0 {
            return Self::full(d);
        }
        if self.dim() == d {
            return Self::zero(d);
        }
        let residual_proj = DMatrix::identity(d, d) - self.projector();
        let eig = SymmetricEigen::new(residual_proj);
        let mut cols: Vec<DVector<f64>> = Vec::new();
        for (i, &lambda) in eig.eigenvalues.iter().enumerate() {
            if lambda > 0.5 {
                cols.push(eig.eigenvectors.column(i).into_owned());
            }
        }
        if cols.is_empty() {
            return Self::zero(d);
        }
        Subspace {
            ambient_dim: d,
            basis: DMatrix::from_columns(&cols),
        }
    }

    /// Sum `S1 + S2` as the span of the concatenated bases.
    pub fn sum(&self, other: &Subspace, tol: &Tolerances) -> Result<Self> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: other.ambient_dim,
            });
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        let mut stacked = DMatrix::zeros(self.ambient_dim, self.dim() + other.dim());
        stacked.columns_mut(0, self.dim()).copy_from(&self.basis);
        stacked
            .columns_mut(self.dim(), other.dim())
            .copy_from(&other.basis);
        Ok(Self::span_cols(&stacked, tol))
    }

    /// Intersection via De Morgan: `(S1^perp + S2^perp)^perp`.
    pub fn intersect(&self, other: &Subspace, tol: &Tolerances) -> Result<Self> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: other.ambient_dim,
            });
        }
        Ok(self.complement().sum(&other.complement(), tol)?.complement())
    }

    /// Whether every basis vector of `other` lies in `self` up to `value_tol`.
    pub fn contains_subspace(&self, other: &Subspace, tol: &Tolerances) -> bool {
        if self.ambient_dim != other.ambient_dim {
            return false;
        }
        (0..other.dim()).all(|j| {
            let col = other.basis.column(j).into_owned();
            self.residual(&col) <= tol.value_tol
        })
    }

    /// Subspace equality as mutual projection residual, since bases are
    /// non-unique.
    pub fn approx_eq(&self, other: &Subspace, tol: &Tolerances) -> bool {
        self.contains_subspace(other, tol) && other.contains_subspace(self, tol)
    }

    /// Largest orthonormality defect `max |B^T B - I|` of the stored basis.
    pub fn orthonormality_defect(&self) -> f64 {
        let k = self.dim();
        if k == 0 {
            return 0.0;
        }
        let gram = self.basis.transpose() * &self.basis;
        let mut defect = 0.0_f64;
        for i in 0..k {
            for j in 0..k {
                let target = if i == j { 1.0 } else { 0.0 };
                defect = defect.max((gram[(i, j)] - target).abs());
            }
        }
        defect
    }
}

/// Moore-Penrose pseudoinverse through the singular value decomposition.
///
/// Singular values below `rank_rel_tol * sigma_max` are dropped; the four
/// Penrose equations then hold to the accuracy of the decomposition.
pub fn pinv(m: &DMatrix<f64>, tol: &Tolerances) -> DMatrix<f64> {
    pinv_floored(m, tol, 0.0)
}

/// Pseudoinverse with the rank threshold anchored at `max(sigma_max, floor)`,
/// for matrices whose natural scale is known (see
/// [`Subspace::span_cols_floored`]).
pub(crate) fn pinv_floored(m: &DMatrix<f64>, tol: &Tolerances, floor: f64) -> DMatrix<f64> {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return DMatrix::zeros(cols, rows);
    }
    let svd = thin_svd(m);
    let sigma_max = svd.sigma.first().copied().unwrap_or(0.0);
    let anchor = sigma_max.max(floor);
    let mut result = DMatrix::zeros(cols, rows);
    if anchor > 0.0 {
        for (i, &s) in svd.sigma.iter().enumerate() {
            if s >= tol.rank_rel_tol * anchor {
                result += &svd.v[i] * svd.u[i].transpose() / s;
            }
        }
    }
    result
}
