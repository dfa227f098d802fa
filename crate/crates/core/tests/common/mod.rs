#![allow(dead_code)]

//! Shared generators and independent oracle adapters for the integration
//! suites. Relations are generated from explicit (domain, eigenvalue) data
//! so tests can cross-check library results against the raw construction.

use moreau::nalgebra::{DMatrix, DVector};
use moreau::oracle::{self, GridScan, GridSpec};
use moreau::{ExtReal, GlqFunction, LinearRelation, Subspace, Tolerances};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn tol() -> Tolerances {
    Tolerances::default()
}

pub fn random_vector(rng: &mut StdRng, n: usize, scale: f64) -> DVector<f64> {
    DVector::from_fn(n, |_, _| rng.gen_range(-scale..scale))
}

pub fn random_matrix(rng: &mut StdRng, rows: usize, cols: usize, scale: f64) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.gen_range(-scale..scale))
}

/// Random orthogonal matrix from the QR factorization of a random square
/// matrix (almost surely full rank).
pub fn random_orthogonal(rng: &mut StdRng, n: usize) -> DMatrix<f64> {
    loop {
        let m = random_matrix(rng, n, n, 1.0);
        let qr = m.qr();
        let q = qr.q();
        let r = qr.r();
        if (0..n).all(|i| r[(i, i)].abs() > 1e-6) {
            return q;
        }
    }
}

/// A maximally monotone symmetric linear relation with its defining data:
/// an orthonormal domain basis D and the selection matrix S = sum of
/// eig_i d_i d_i^T, so that A = S on dom A plus the normal cone of dom A.
pub struct MmsSample {
    pub relation: LinearRelation,
    /// n x k orthonormal columns spanning dom A.
    pub dom_basis: DMatrix<f64>,
    /// The minimal selection as an n x n matrix (zero off the domain).
    pub selection: DMatrix<f64>,
}

/// Builds the relation with graph spanned by {(d_i, eig_i d_i)} and
/// {(0, w_j)} for w_j spanning the orthogonal complement of the domain.
pub fn mms_from_data(q: &DMatrix<f64>, eigs: &[f64], t: Tolerances) -> MmsSample {
    let n = q.nrows();
    let k = eigs.len();
    assert!(k <= n);
    let dom_basis = q.columns(0, k).into_owned();
    let mut selection = DMatrix::zeros(n, n);
    for (i, &l) in eigs.iter().enumerate() {
        let d = q.column(i);
        selection += l * d * d.transpose();
    }
    let mut cols = DMatrix::zeros(2 * n, n);
    for i in 0..k {
        for row in 0..n {
            cols[(row, i)] = q[(row, i)];
            cols[(n + row, i)] = eigs[i] * q[(row, i)];
        }
    }
    for j in k..n {
        for row in 0..n {
            cols[(n + row, j)] = q[(row, j)];
        }
    }
    let graph = Subspace::span_cols(&cols, &t);
    let relation = LinearRelation::from_graph(graph, t).expect("constructed graph is valid");
    MmsSample {
        relation,
        dom_basis,
        selection,
    }
}

/// Random relation cycling through structural kinds: full-rank matrix,
/// rank-deficient matrix, normal cone, and a proper-domain operator.
pub fn random_mms(rng: &mut StdRng, n: usize, kind: usize, eig_hi: f64) -> MmsSample {
    let t = tol();
    let q = random_orthogonal(rng, n);
    let eigs: Vec<f64> = match kind % 4 {
        // Positive definite matrix relation.
        0 => (0..n).map(|_| rng.gen_range(0.05..eig_hi)).collect(),
        // PSD matrix with a kernel.
        1 => (0..n)
            .map(|i| if i == 0 { 0.0 } else { rng.gen_range(0.05..eig_hi) })
            .collect(),
        // Normal cone of a random subspace (zero selection).
        2 => {
            let k = rng.gen_range(0..=n);
            vec![0.0; k]
        }
        // Proper domain with mixed eigenvalues.
        _ => {
            let k = rng.gen_range(1..=n);
            (0..k)
                .map(|i| if i == 0 && k > 1 { 0.0 } else { rng.gen_range(0.05..eig_hi) })
                .collect()
        }
    };
    mms_from_data(&q, &eigs, t)
}

/// A GLQ instance together with the raw data its oracle needs.
pub struct GlqSample {
    pub f: GlqFunction,
    pub dom_basis: DMatrix<f64>,
    pub selection: DMatrix<f64>,
}

pub fn glq_from_mms(ms: MmsSample, a: DVector<f64>, b: DVector<f64>, c: f64) -> GlqSample {
    let f = GlqFunction::new(ms.relation, a, b, c).expect("generated relation admits a GLQ");
    GlqSample {
        f,
        dom_basis: ms.dom_basis,
        selection: ms.selection,
    }
}

pub fn random_glq_sample(
    rng: &mut StdRng,
    n: usize,
    kind: usize,
    shift_scale: f64,
    linear_scale: f64,
) -> GlqSample {
    let ms = random_mms(rng, n, kind, 1.0);
    let a = random_vector(rng, n, shift_scale.max(1e-12));
    let b = random_vector(rng, n, linear_scale.max(1e-12));
    let c = rng.gen_range(-1.0..1.0);
    glq_from_mms(ms, a, b, c)
}

/// Independent envelope oracle: grid minimization over the domain manifold.
///
/// With D an orthonormal basis of dom A, the objective restricted to
/// y = a + D t is the plain quadratic
/// F(t) = (1/2) t^T (D^T S D) t plus <D^T b, t> plus <b, a> + c, and
/// e_r f(x) = min_t {F(t) + (r/2)|t - t0|^2} + (r/2) kappa, where
/// t0 = D^T (x - a) and kappa = |x - a|^2 - |t0|^2 is the squared
/// off-plane distance. The minimization runs on the oracle grid and never
/// touches the closed-form path.
pub fn oracle_envelope(s: &GlqSample, r: f64, x: &DVector<f64>, half_width: f64) -> GridScan {
    let d = &s.dom_basis;
    let k = d.ncols();
    let z = x - s.f.shift();
    let c_t = s.f.linear().dot(s.f.shift()) + s.f.constant();
    if k == 0 {
        return GridScan {
            value: c_t + 0.5 * r * z.norm_squared(),
            boundary_hit: false,
        };
    }
    let s_t = d.transpose() * &s.selection * d;
    let b_t = d.transpose() * s.f.linear();
    let t0 = d.transpose() * &z;
    let kappa = (z.norm_squared() - t0.norm_squared()).max(0.0);

    let f_t = move |t: &[f64]| {
        let mut v = c_t;
        for i in 0..t.len() {
            let mut row = 0.0;
            for j in 0..t.len() {
                row += s_t[(i, j)] * t[j];
            }
            v += 0.5 * t[i] * row + b_t[i] * t[i];
        }
        ExtReal::Finite(v)
    };
    let center: Vec<f64> = t0.iter().copied().collect();
    let grid = GridSpec::default_for_dim(center.clone(), half_width).expect("valid grid");
    let mut scan = oracle::brute_envelope(f_t, r, &center, &grid).expect("well-formed scan");
    scan.value += 0.5 * r * kappa;
    scan
}

/// Independent conjugate oracle for pure quadratics q_A: the supremum of
/// <y, x> - q_A(x) restricted to the domain manifold, scanned on a grid.
/// Off ran A the scan diverges and reports a boundary hit.
pub fn oracle_conjugate_pure(s: &GlqSample, y: &DVector<f64>, half_width: f64) -> GridScan {
    let d = &s.dom_basis;
    let k = d.ncols();
    if k == 0 {
        // dom A = {0}: the supremum is 0 at x = 0.
        return GridScan {
            value: 0.0,
            boundary_hit: false,
        };
    }
    let s_t = d.transpose() * &s.selection * d;
    let y_t = d.transpose() * y;
    let f_t = move |t: &[f64]| {
        let mut v = 0.0;
        for i in 0..t.len() {
            let mut row = 0.0;
            for j in 0..t.len() {
                row += s_t[(i, j)] * t[j];
            }
            v += 0.5 * t[i] * row;
        }
        ExtReal::Finite(v)
    };
    let center = vec![0.0; k];
    let yv: Vec<f64> = y_t.iter().copied().collect();
    let grid = GridSpec::default_for_dim(center, half_width).expect("valid grid");
    oracle::brute_conjugate(f_t, &yv, &grid).expect("well-formed scan")
}

/// Random point of ran A = S(dom A) + (dom A)^perp, with a bounded
/// preimage under the selection.
pub fn random_range_point(rng: &mut StdRng, s: &MmsSample, scale: f64) -> DVector<f64> {
    let n = s.selection.nrows();
    let x0 = random_vector(rng, n, scale);
    let w = random_vector(rng, n, scale);
    let p_dom = &s.dom_basis * s.dom_basis.transpose();
    let ortho = &w - &p_dom * &w;
    &s.selection * x0 + ortho
}
