//! Independent brute-force oracles for the test suite.
//!
//! Everything here works on black-box callables over plain slices; nothing
//! in this module touches the closed-form machinery of the rest of the
//! crate, so a test that pits the two paths against each other really does
//! compare independent computations.

use crate::glq::ExtReal;
use crate::{Error, Result};

/// A regular grid centered at a point, used for brute-force infima and
/// suprema.
#[derive(Debug, Clone)]
pub struct GridSpec {
    pub center: Vec<f64>,
    pub half_width: f64,
    /// Points per axis, odd and at least 3 so the center is a grid node.
    pub points_per_axis: usize,
}

impl GridSpec {
    pub fn new(center: Vec<f64>, half_width: f64, points_per_axis: usize) -> Result<Self> {
        if half_width <= 0.0 {
            return Err(Error::BadGrid("half_width must be positive"));
        }
        if points_per_axis < 3 || points_per_axis.is_multiple_of(2) {
            return Err(Error::BadGrid("points_per_axis must be odd and at least 3"));
        }
        Ok(GridSpec {
            center,
            half_width,
            points_per_axis,
        })
    }

    /// Default grid sizes keeping n-dimensional sweeps affordable:
    /// 2001 points for n = 1, 201 per axis for n = 2, 51 for n = 3.
    pub fn default_for_dim(center: Vec<f64>, half_width: f64) -> Result<Self> {
        let n = center.len();
        let points = match n {
            0 => return Err(Error::BadGrid("empty center")),
            1 => 2001,
            2 => 201,
            _ => 51,
        };
        Self::new(center, half_width, points)
    }

    fn dim(&self) -> usize {
        self.center.len()
    }

    fn step(&self) -> f64 {
        2.0 * self.half_width / (self.points_per_axis - 1) as f64
    }
}

/// Result of a grid scan: the extremal value and whether the extremum sat on
/// the hull of the grid (a sign the grid was too small, or that the true
/// problem is unbounded).
#[derive(Debug, Clone, Copy)]
pub struct GridScan {
    pub value: f64,
    pub boundary_hit: bool,
}

fn scan<F>(f: F, grid: &GridSpec, maximize: bool) -> GridScan
where
    F: Fn(&[f64]) -> f64,
{
    let n = grid.dim();
    let p = grid.points_per_axis;
    let step = grid.step();
    let mut idx = vec![0usize; n];
    let mut y = vec![0.0f64; n];
    let mut best = f64::INFINITY;
    let mut best_on_hull = false;
    loop {
        let mut on_hull = false;
        for j in 0..n {
            y[j] = grid.center[j] - grid.half_width + step * idx[j] as f64;
            if idx[j] == 0 || idx[j] == p - 1 {
                on_hull = true;
            }
        }
        let raw = f(&y);
        let v = if maximize { -raw } else { raw };
        // On exact ties prefer interior points: a flat optimal face that
        // touches the hull is not evidence the grid was too small.
        if v < best || (v == best && best_on_hull && !on_hull) {
            best = v;
            best_on_hull = on_hull;
        }
        // Mixed-radix increment in a fixed order keeps the reduction
        // deterministic.
        let mut carry = true;
        for j in (0..n).rev() {
            if carry {
                idx[j] += 1;
                if idx[j] == p {
                    idx[j] = 0;
                } else {
                    carry = false;
                }
            }
        }
        if carry {
            break;
        }
    }
    GridScan {
        value: if maximize { -best } else { best },
        boundary_hit: best_on_hull,
    }
}

/// min over the grid of f(y) + (r/2) ||y - x||^2; the direct infimum in the
/// definition of the Moreau envelope.
pub fn brute_envelope<F>(f: F, r: f64, x: &[f64], grid: &GridSpec) -> Result<GridScan>
where
    F: Fn(&[f64]) -> ExtReal,
{
    if r <= 0.0 || r.is_nan() {
        return Err(Error::InvalidProxParameter(r));
    }
    if x.len() != grid.dim() {
        return Err(Error::DimensionMismatch {
            expected: grid.dim(),
            got: x.len(),
        });
    }
    Ok(scan(
        |y| match f(y) {
            ExtReal::PlusInf => f64::INFINITY,
            ExtReal::Finite(v) => {
                let mut d2 = 0.0;
                for j in 0..y.len() {
                    let d = y[j] - x[j];
                    d2 += d * d;
                }
                v + 0.5 * r * d2
            }
        },
        grid,
        false,
    ))
}

/// sup over the grid of <y, x> - f(x); the direct supremum in the
/// definition of the Fenchel conjugate. A boundary hit suggests the true
/// supremum is unbounded or outside the grid.
pub fn brute_conjugate<F>(f: F, y: &[f64], grid: &GridSpec) -> Result<GridScan>
where
    F: Fn(&[f64]) -> ExtReal,
{
    if y.len() != grid.dim() {
        return Err(Error::DimensionMismatch {
            expected: grid.dim(),
            got: y.len(),
        });
    }
    Ok(scan(
        |x| match f(x) {
            ExtReal::PlusInf => f64::NEG_INFINITY,
            ExtReal::Finite(v) => {
                let mut dot = 0.0;
                for j in 0..x.len() {
                    dot += y[j] * x[j];
                }
                dot - v
            }
        },
        grid,
        true,
    ))
}

/// Componentwise central differences with step h.
pub fn fd_gradient<F>(f: F, x: &[f64], h: f64) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> f64,
{
    let n = x.len();
    let mut grad = vec![0.0; n];
    let mut probe = x.to_vec();
    for j in 0..n {
        probe[j] = x[j] + h;
        let up = f(&probe);
        probe[j] = x[j] - h;
        let down = f(&probe);
        probe[j] = x[j];
        if !up.is_finite() || !down.is_finite() {
            return Err(Error::NonFiniteSample);
        }
        grad[j] = (up - down) / (2.0 * h);
    }
    Ok(grad)
}

/// Evaluates the cyclic-monotonicity sum
/// sum_i <x_i - T x_i, T x_i - T x_{i+1}> over the closed cycle and reports
/// whether it is nonnegative (up to 1e-10). Resolvents of maximally
/// cyclically monotone operators always pass.
pub fn cyclic_monotonicity_check<T>(t: T, points: &[Vec<f64>]) -> Result<bool>
where
    T: Fn(&[f64]) -> Vec<f64>,
{
    if points.len() < 2 {
        return Err(Error::TooFewPoints);
    }
    let images: Vec<Vec<f64>> = points.iter().map(|p| t(p)).collect();
    let m = points.len();
    let mut total = 0.0;
    for i in 0..m {
        let next = (i + 1) % m;
        let xi = &points[i];
        let ti = &images[i];
        let tn = &images[next];
        for j in 0..xi.len() {
            total += (xi[j] - ti[j]) * (ti[j] - tn[j]);
        }
    }
    Ok(total >= -1e-10)
}
