//! Set-valued linear relations on R^n represented by their graphs.
//!
//! The graph of a relation is a subspace of R^{2n}; the first n coordinates
//! are the input block, the last n the output block. Domain, range, the
//! kernel directions A0 and a minimum-norm application map are precomputed
//! at construction so that application is a cheap matrix product. All values
//! are immutable and operations are pure.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::subspace::{pinv_floored, Subspace};
use crate::tol::Tolerances;
use crate::{Error, Result};

/// A possibly-empty affine subset of R^n: a particular point plus a
/// direction subspace. Used as the value of set-valued application and of
/// subdifferentials; the stored point is the minimum-norm representative.
#[derive(Debug, Clone)]
pub struct AffineSet {
    n: usize,
    empty: bool,
    point: Option<DVector<f64>>,
    directions: Subspace,
}

impl AffineSet {
    pub fn empty(n: usize) -> Self {
        AffineSet {
            n,
            empty: true,
            point: None,
            directions: Subspace::zero(n),
        }
    }

    /// Builds `point + directions`, canonicalizing the representative to the
    /// minimum-norm element of the set.
    pub fn new(point: DVector<f64>, directions: Subspace) -> Self {
        let n = point.len();
        let p = directions.project(&point).expect("direction dims match point");
        AffineSet {
            n,
            empty: false,
            point: Some(point - p),
            directions,
        }
    }

    pub fn singleton(point: DVector<f64>) -> Self {
        let n = point.len();
        AffineSet {
            n,
            empty: false,
            point: Some(point),
            directions: Subspace::zero(n),
        }
    }

    pub fn dim_ambient(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.empty
    }

    pub fn is_singleton(&self) -> bool {
        !self.empty && self.directions.is_zero()
    }

    /// Minimum-norm element, if the set is nonempty.
    pub fn point(&self) -> Option<&DVector<f64>> {
        self.point.as_ref()
    }

    pub fn directions(&self) -> &Subspace {
        &self.directions
    }

    pub fn contains(&self, x: &DVector<f64>, tol: &Tolerances) -> bool {
        if self.empty || x.len() != self.n {
            return false;
        }
        let d = x - self.point.as_ref().unwrap();
        let proj = self.directions.project(&d).expect("dims match");
        (d - proj).norm() <= tol.value_tol
    }

    /// Distance from `x` to the set (infinite when the set is empty).
    pub fn distance(&self, x: &DVector<f64>) -> f64 {
        match &self.point {
            None => f64::INFINITY,
            Some(p) => {
                let d = x - p;
                let proj = self.directions.project(&d).expect("dims match");
                (d - proj).norm()
            }
        }
    }

    /// Translates the set by `v`.
    pub fn translate(&self, v: &DVector<f64>) -> Self {
        match &self.point {
            None => self.clone(),
            Some(p) => AffineSet::new(p + v, self.directions.clone()),
        }
    }
}

/// A linear relation A: R^n => R^n stored through an orthonormal basis of
/// its graph.
#[derive(Debug, Clone)]
pub struct LinearRelation {
    n: usize,
    graph: Subspace,
    tol: Tolerances,
    domain: Subspace,
    range: Subspace,
    /// A0 = {y : (0, y) in gra A}.
    kernel_dirs: Subspace,
    /// Sends z in dom A to the minimum-norm element of A z.
    min_norm_map: DMatrix<f64>,
}

impl LinearRelation {
    /// Wraps a graph subspace of R^{2n}.
    pub fn from_graph(graph: Subspace, tol: Tolerances) -> Result<Self> {
        let ambient = graph.ambient_dim();
        if !ambient.is_multiple_of(2) || ambient == 0 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: ambient,
            });
        }
        let n = ambient / 2;
        let basis = graph.basis();
        let bx = basis.rows(0, n).into_owned();
        let by = basis.rows(n, n).into_owned();
        // Blocks of an orthonormal basis live at scale one; anchor the rank
        // threshold there so rounding noise is not promoted to a direction.
        let domain = Subspace::span_cols_floored(&bx, &tol, 1.0);
        let range = Subspace::span_cols_floored(&by, &tol, 1.0);

        // A0 as the output block of gra A intersected with {0} x R^n.
        let mut zero_block = DMatrix::zeros(2 * n, n);
        zero_block.view_mut((n, 0), (n, n)).copy_from(&DMatrix::identity(n, n));
        let vertical = Subspace::from_orthonormal(zero_block);
        let meet = graph.intersect(&vertical, &tol)?;
        let kernel_dirs = if meet.is_zero() {
            Subspace::zero(n)
        } else {
            Subspace::span_cols_floored(&meet.basis().rows(n, n).into_owned(), &tol, 1.0)
        };

        let min_norm_map = if graph.dim() == 0 {
            DMatrix::zeros(n, n)
        } else {
            let raw = &by * pinv_floored(&bx, &tol, 1.0);
            &raw - kernel_dirs.projector() * &raw
        };

        Ok(LinearRelation {
            n,
            graph,
            tol,
            domain,
            range,
            kernel_dirs,
            min_norm_map,
        })
    }

    /// The relation induced by a square matrix: gra A = {(x, Mx)}.
    pub fn from_matrix(m: &DMatrix<f64>, tol: Tolerances) -> Result<Self> {
        let (rows, cols) = m.shape();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        let n = rows;
        let mut stacked = DMatrix::zeros(2 * n, n);
        stacked.view_mut((0, 0), (n, n)).copy_from(&DMatrix::identity(n, n));
        stacked.view_mut((n, 0), (n, n)).copy_from(m);
        let graph = Subspace::span_cols(&stacked, &tol);
        Self::from_graph(graph, tol)
    }

    /// The identity relation scaled by `lambda`.
    pub fn scaled_identity(n: usize, lambda: f64, tol: Tolerances) -> Result<Self> {
        Self::from_matrix(&(DMatrix::identity(n, n) * lambda), tol)
    }

    /// The normal cone operator of a subspace L: gra N_L = L x L^perp.
    pub fn normal_cone_of(l: &Subspace, tol: Tolerances) -> Result<Self> {
        let n = l.ambient_dim();
        let perp = l.complement();
        let k = l.dim();
        let m = perp.dim();
        let mut basis = DMatrix::zeros(2 * n, k + m);
        basis.view_mut((0, 0), (n, k)).copy_from(l.basis());
        basis.view_mut((n, k), (n, m)).copy_from(perp.basis());
        Self::from_graph(Subspace::from_orthonormal(basis), tol)
    }

    /// N_{{0}} on R^n, the relation of the indicator of the origin.
    pub fn normal_cone_origin(n: usize, tol: Tolerances) -> Result<Self> {
        Self::normal_cone_of(&Subspace::zero(n), tol)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn graph(&self) -> &Subspace {
        &self.graph
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    pub fn domain(&self) -> &Subspace {
        &self.domain
    }

    pub fn range(&self) -> &Subspace {
        &self.range
    }

    /// A0 = A(0), always a subspace.
    pub fn kernel_dirs(&self) -> &Subspace {
        &self.kernel_dirs
    }

    fn input_block(&self) -> DMatrix<f64> {
        self.graph.basis().rows(0, self.n).into_owned()
    }

    fn output_block(&self) -> DMatrix<f64> {
        self.graph.basis().rows(self.n, self.n).into_owned()
    }

    /// Set-valued application: the affine set A x, empty outside dom A.
    pub fn apply(&self, x: &DVector<f64>) -> Result<AffineSet> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        if self.domain.residual(x) > self.tol.value_tol {
            return Ok(AffineSet::empty(self.n));
        }
        let point = &self.min_norm_map * x;
        Ok(AffineSet {
            n: self.n,
            empty: false,
            point: Some(point),
            directions: self.kernel_dirs.clone(),
        })
    }

    /// Minimum-norm selection matrix composed with the domain projector:
    /// x -> min-norm element of A(P_dom x).
    pub fn min_norm_selection(&self) -> DMatrix<f64> {
        &self.min_norm_map * self.domain.projector()
    }

    /// Graph-swap inverse; an exact involution.
    pub fn inverse(&self) -> Self {
        let n = self.n;
        let basis = self.graph.basis();
        let mut swapped = DMatrix::zeros(2 * n, basis.ncols());
        swapped.view_mut((0, 0), (n, basis.ncols())).copy_from(&basis.rows(n, n));
        swapped.view_mut((n, 0), (n, basis.ncols())).copy_from(&basis.rows(0, n));
        Self::from_graph(Subspace::from_orthonormal(swapped), self.tol)
            .expect("swapping blocks preserves a valid graph")
    }

    /// Adjoint: gra A* is the image of (gra A)^perp under (p, q) -> (-q, p).
    pub fn adjoint(&self) -> Self {
        let n = self.n;
        let comp = self.graph.complement();
        let k = comp.dim();
        let mut mapped = DMatrix::zeros(2 * n, k);
        if k > 0 {
            let cb = comp.basis();
            mapped.view_mut((0, 0), (n, k)).copy_from(&(-cb.rows(n, n)));
            mapped.view_mut((n, 0), (n, k)).copy_from(&cb.rows(0, n));
        }
        Self::from_graph(Subspace::from_orthonormal(mapped), self.tol)
            .expect("block rotation of an orthonormal basis stays orthonormal")
    }

    /// Monotonicity: the inner-product form restricted to the graph is
    /// positive semidefinite and the pairing is single-valued on dom A
    /// (equivalently A0 is orthogonal to dom A).
    pub fn is_monotone(&self, tol: &Tolerances) -> bool {
        let bx = self.input_block();
        let by = self.output_block();
        let w = bx.transpose() * &by;
        let sym = (&w + w.transpose()) * 0.5;
        if sym.ncols() > 0 {
            let eig = SymmetricEigen::new(sym);
            if eig.eigenvalues.iter().any(|&l| l < -tol.psd_tol) {
                return false;
            }
        }
        // Single-valuedness of <x, Ax>: A0 orthogonal to dom A.
        let cross = self.kernel_dirs.basis().transpose() * self.domain.basis();
        cross.iter().all(|&v| v.abs() <= tol.psd_tol)
    }

    /// Symmetry: <x, y'> = <y, x'> over graph pairs.
    pub fn is_symmetric(&self, tol: &Tolerances) -> bool {
        let w = self.input_block().transpose() * self.output_block();
        let defect = (&w - w.transpose()).amax();
        defect <= tol.psd_tol
    }

    /// Maximality of a monotone relation: ran(Id + A) = R^n is enough at
    /// lambda = 1, and for monotone graphs the map (x, y) -> x + y has
    /// singular values at least one, so the rank decision is stable.
    pub fn is_maximal_monotone(&self, tol: &Tolerances) -> bool {
        if !self.is_monotone(tol) {
            return false;
        }
        let sums = self.input_block() + self.output_block();
        Subspace::span_cols_floored(&sums, tol, 1.0).dim() == self.n
    }

    /// Pointwise sum: gra(A1 + A2) = {(x, y1 + y2)}, computed by
    /// intersecting the graphs lifted to R^{3n} and projecting back.
    pub fn add(&self, other: &LinearRelation) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        let n = self.n;
        let tol = self.tol;

        // L1 = {(x, y1, y2) : (x, y1) in gra A1}, L2 = {(x, y1, y2) : (x, y2) in gra A2}.
        let g1 = self.graph.basis();
        let g2 = other.graph.basis();
        let k1 = g1.ncols();
        let k2 = g2.ncols();
        let mut l1 = DMatrix::zeros(3 * n, k1 + n);
        l1.view_mut((0, 0), (2 * n, k1)).copy_from(g1);
        l1.view_mut((2 * n, k1), (n, n)).copy_from(&DMatrix::identity(n, n));
        let mut l2 = DMatrix::zeros(3 * n, k2 + n);
        l2.view_mut((0, 0), (n, k2)).copy_from(&g2.rows(0, n));
        l2.view_mut((2 * n, 0), (n, k2)).copy_from(&g2.rows(n, n));
        l2.view_mut((n, k2), (n, n)).copy_from(&DMatrix::identity(n, n));

        let meet = Subspace::from_orthonormal(l1).intersect(&Subspace::from_orthonormal(l2), &tol)?;

        // Project (x, y1, y2) -> (x, y1 + y2).
        let mb = meet.basis();
        let k = mb.ncols();
        let mut image = DMatrix::zeros(2 * n, k);
        image.view_mut((0, 0), (n, k)).copy_from(&mb.rows(0, n));
        image
            .view_mut((n, 0), (n, k))
            .copy_from(&(mb.rows(n, n) + mb.rows(2 * n, n)));
        Self::from_graph(Subspace::span_cols_floored(&image, &tol, 1.0), tol)
    }

    /// Scales the output block: gra(lambda A) = {(x, lambda y)}.
    pub fn scale(&self, lambda: f64) -> Result<Self> {
        if lambda == 0.0 || !lambda.is_finite() {
            return Err(Error::InvalidProxParameter(lambda));
        }
        let n = self.n;
        let basis = self.graph.basis();
        let mut scaled = basis.clone();
        scaled.view_mut((n, 0), (n, basis.ncols())).copy_from(&(basis.rows(n, n) * lambda));
        // (x, y) -> (x, lambda y) is invertible, so the graph dimension is
        // preserved; sigma_min of the scaled basis is at least min(1, |lambda|).
        Self::from_graph(Subspace::span_cols_floored(&scaled, &self.tol, 1.0), self.tol)
    }

    /// A_+ = (A + A*) / 2.
    pub fn symmetric_part(&self) -> Result<Self> {
        self.add(&self.adjoint())?.scale(0.5)
    }

    /// The resolvent (Id + A)^{-1} as a matrix; requires maximal
    /// monotonicity so that the resolvent is single-valued with full domain.
    pub fn resolvent(&self) -> Result<DMatrix<f64>> {
        if !self.is_maximal_monotone(&self.tol) {
            return Err(Error::NotMaximallyMonotone);
        }
        let bx = self.input_block();
        let by = self.output_block();
        let sums = &bx + &by;
        let inv = sums
            .lu()
            .try_inverse()
            .ok_or(Error::NotMaximallyMonotone)?;
        Ok(bx * inv)
    }

    /// Moore-Penrose inverse P_{ran A} A^{-1} P_{ran A} of a maximally
    /// monotone relation, using the minimum-norm selection of A^{-1}.
    pub fn moore_penrose(&self) -> Result<DMatrix<f64>> {
        if !self.is_maximal_monotone(&self.tol) {
            return Err(Error::NotMaximallyMonotone);
        }
        let n = self.n;
        let inv = self.inverse();
        let p_ran = self.range.projector();
        let mut result = DMatrix::zeros(n, n);
        for i in 0..n {
            let mut e = DVector::zeros(n);
            e[i] = 1.0;
            let u = &p_ran * e;
            let set = inv.apply(&u)?;
            let point = set
                .point()
                .expect("P_ran x lies in ran A = dom A^{-1}")
                .clone();
            result.set_column(i, &(&p_ran * point));
        }
        Ok(result)
    }

    /// Graph equality up to mutual projection residual.
    pub fn approx_eq(&self, other: &LinearRelation, tol: &Tolerances) -> bool {
        self.n == other.n && self.graph.approx_eq(&other.graph, tol)
    }
}
