//! Serde-facing descriptions of relations, GLQ functions, quadratics and
//! coefficient sequences, matching the JSON shapes consumed and emitted by
//! the command-line interface.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize, Serializer};

use crate::epiconv::{BuiltinFamily, QuadSeq1D};
use crate::glq::{ExtReal, GlqFunction, QuadraticFunction};
use crate::linrel::LinearRelation;
use crate::subspace::Subspace;
use crate::tol::Tolerances;
use crate::{Error, Result};

/// A linear relation in one of four encodings. Row-major matrices; graph
/// basis and span entries are column vectors.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum RelationSchema {
    #[serde(rename = "matrix")]
    Matrix(Vec<Vec<f64>>),
    #[serde(rename = "graph_basis")]
    GraphBasis(Vec<Vec<f64>>),
    #[serde(rename = "normal_cone_of_span")]
    NormalConeOfSpan(Vec<Vec<f64>>),
    #[serde(rename = "scaled_identity")]
    ScaledIdentity { n: usize, lambda: f64 },
}

fn rows_to_matrix(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    if rows.is_empty() {
        return Err(Error::Invalid("matrix must have at least one row".into()));
    }
    let cols = rows[0].len();
    if cols == 0 || rows.iter().any(|r| r.len() != cols) {
        return Err(Error::Invalid("matrix rows must be nonempty and equal length".into()));
    }
    let flat: Vec<f64> = rows.iter().flatten().copied().collect();
    Ok(DMatrix::from_row_slice(rows.len(), cols, &flat))
}

fn columns_to_vectors(cols: &[Vec<f64>]) -> Result<Vec<DVector<f64>>> {
    if cols.is_empty() {
        return Err(Error::Invalid("expected at least one column vector".into()));
    }
    let len = cols[0].len();
    if len == 0 || cols.iter().any(|c| c.len() != len) {
        return Err(Error::Invalid("columns must be nonempty and equal length".into()));
    }
    Ok(cols.iter().map(|c| DVector::from_row_slice(c)).collect())
}

pub fn matrix_to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

impl RelationSchema {
    pub fn to_relation(&self, tol: Tolerances) -> Result<LinearRelation> {
        match self {
            RelationSchema::Matrix(rows) => {
                LinearRelation::from_matrix(&rows_to_matrix(rows)?, tol)
            }
            RelationSchema::GraphBasis(cols) => {
                let vecs = columns_to_vectors(cols)?;
                if vecs[0].len() % 2 != 0 {
                    return Err(Error::Invalid(
                        "graph basis columns must live in R^{2n}".into(),
                    ));
                }
                let graph = Subspace::span(&vecs, &tol)?;
                LinearRelation::from_graph(graph, tol)
            }
            RelationSchema::NormalConeOfSpan(cols) => {
                let vecs = columns_to_vectors(cols)?;
                let l = Subspace::span(&vecs, &tol)?;
                LinearRelation::normal_cone_of(&l, tol)
            }
            RelationSchema::ScaledIdentity { n, lambda } => {
                if *n == 0 {
                    return Err(Error::Invalid("scaled identity needs n >= 1".into()));
                }
                LinearRelation::scaled_identity(*n, *lambda, tol)
            }
        }
    }

    /// General relations round-trip through their graph basis columns.
    pub fn from_relation(rel: &LinearRelation) -> Self {
        let basis = rel.graph().basis();
        let cols = (0..basis.ncols())
            .map(|j| basis.column(j).iter().copied().collect())
            .collect();
        RelationSchema::GraphBasis(cols)
    }
}

/// {"relation": ..., "a": [...], "b": [...], "c": ...}
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GlqSchema {
    pub relation: RelationSchema,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: f64,
}

impl GlqSchema {
    pub fn to_glq(&self, tol: Tolerances) -> Result<GlqFunction> {
        let relation = self.relation.to_relation(tol)?;
        GlqFunction::new(
            relation,
            DVector::from_row_slice(&self.a),
            DVector::from_row_slice(&self.b),
            self.c,
        )
    }

    pub fn from_glq(f: &GlqFunction) -> Self {
        GlqSchema {
            relation: RelationSchema::from_relation(f.relation()),
            a: f.shift().iter().copied().collect(),
            b: f.linear().iter().copied().collect(),
            c: f.constant(),
        }
    }
}

/// {"Q": [[...]], "b": [...], "c": ...}
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuadraticSchema {
    #[serde(rename = "Q")]
    pub q: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub c: f64,
}

impl QuadraticSchema {
    pub fn to_quadratic(&self, tol: &Tolerances) -> Result<QuadraticFunction> {
        QuadraticFunction::new(
            rows_to_matrix(&self.q)?,
            DVector::from_row_slice(&self.b),
            self.c,
            tol,
        )
    }

    pub fn from_quadratic(f: &QuadraticFunction) -> Self {
        QuadraticSchema {
            q: matrix_to_rows(f.q()),
            b: f.b().iter().copied().collect(),
            c: f.c(),
        }
    }
}

/// One term a x^2 + b x + c of a univariate sequence.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Term1DSchema {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// A univariate quadratic sequence: explicit terms or one of the built-in
/// families sampled at `k_list`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum SequenceSchema1D {
    #[serde(rename = "explicit")]
    Explicit { terms: Vec<Term1DSchema> },
    #[serde(rename = "formula_1d")]
    Formula { name: String, k_list: Vec<u64> },
}

pub fn builtin_family_by_name(name: &str) -> Result<BuiltinFamily> {
    match name {
        "fk" => Ok(BuiltinFamily::Fk),
        "gk" => Ok(BuiltinFamily::Gk),
        "hk" => Ok(BuiltinFamily::Hk),
        other => Err(Error::Invalid(format!(
            "unknown family '{other}', expected one of fk, gk, hk"
        ))),
    }
}

impl SequenceSchema1D {
    /// Builds the sequence plus the probe indices to classify at: the term
    /// indices themselves for explicit lists, `k_list` for families.
    pub fn to_sequence(&self, r: f64) -> Result<(QuadSeq1D, Vec<u64>)> {
        match self {
            SequenceSchema1D::Explicit { terms } => {
                let probes: Vec<u64> = (1..=terms.len() as u64).collect();
                let seq =
                    QuadSeq1D::explicit(terms.iter().map(|t| (t.a, t.b, t.c)).collect(), r)?;
                Ok((seq, probes))
            }
            SequenceSchema1D::Formula { name, k_list } => {
                let family = builtin_family_by_name(name)?;
                Ok((QuadSeq1D::builtin(family, r)?, k_list.clone()))
            }
        }
    }
}

/// {"lstsq": {"M": [[...]], "b": [...]}}
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LstsqSchema {
    pub lstsq: LstsqData,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LstsqData {
    #[serde(rename = "M")]
    pub m: Vec<Vec<f64>>,
    pub b: Vec<f64>,
}

impl LstsqSchema {
    pub fn to_problem(&self) -> Result<crate::apps::LeastSquaresProblem> {
        crate::apps::LeastSquaresProblem::new(
            rows_to_matrix(&self.lstsq.m)?,
            DVector::from_row_slice(&self.lstsq.b),
        )
    }
}

/// Serializes finite values as numbers and +infinity as the string "inf",
/// since JSON has no infinity literal.
#[derive(Debug, Clone, Copy)]
pub struct ExtRealJson(pub ExtReal);

impl Serialize for ExtRealJson {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0 {
            ExtReal::Finite(v) => serializer.serialize_f64(v),
            ExtReal::PlusInf => serializer.serialize_str("inf"),
        }
    }
}
