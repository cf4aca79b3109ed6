//! Almost para-complex structures sampled on `R²ⁿ` and their Nijenhuis tensor.

use nalgebra as na;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::par::{self, Mode};

/// Tolerance on `‖J² − Id‖_max` relative to `max(1, ‖J‖²_max)`.
pub const INVOLUTION_TOL: f64 = 1e-9;

/// Field of real `2n × 2n` matrices with `J² = Id` at every node.
#[derive(Debug, Clone, PartialEq)]
pub struct JField {
    grid: Grid,
    values: Vec<na::DMatrix<f64>>,
}

impl JField {
    pub fn new(grid: Grid, values: Vec<na::DMatrix<f64>>) -> Result<Self> {
        let d = grid.dim();
        if d % 2 == 1 {
            return Err(Error::OddDimension(d));
        }
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch { left: values.len(), right: grid.len() });
        }
        for (k, j) in values.iter().enumerate() {
            if j.nrows() != d || j.ncols() != d {
                return Err(Error::DimensionMismatch { left: j.nrows(), right: d });
            }
            let scale = j.amax().powi(2).max(1.0);
            let err = (j * j - na::DMatrix::identity(d, d)).amax();
            if !(err <= INVOLUTION_TOL * scale) {
                return Err(Error::NotParaComplexStructure(format!(
                    "|J^2 - Id| = {err:e} at node {:?}",
                    grid.multi_index(k)
                )));
            }
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn<F>(grid: Grid, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> na::DMatrix<f64> + Sync + Send,
    {
        let values = par::map_indices(Mode::default(), grid.len(), |k| f(&grid.coords(k)));
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn at(&self, node: usize) -> &na::DMatrix<f64> {
        &self.values[node]
    }
}

/// Multiplication by `τ` on the real split `(x₁..xₙ, y₁..yₙ)`.
pub fn standard_structure(n: usize) -> na::DMatrix<f64> {
    na::DMatrix::from_fn(2 * n, 2 * n, |i, j| if (i + n) % (2 * n) == j { 1.0 } else { 0.0 })
}

/// `dΦ⁻¹ J₀ dΦ` for a local diffeomorphism with Jacobian `dΦ`.
pub fn pullback_structure(jacobian: &na::DMatrix<f64>) -> Result<na::DMatrix<f64>> {
    let n = jacobian.nrows() / 2;
    let inv = jacobian
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::NotParaComplexStructure("singular Jacobian".into()))?;
    Ok(inv * standard_structure(n) * jacobian)
}

/// Jacobian of `(z₁, z₂) ↦ (z₁ + 0.1z₁², z₂ + 0.1z₂²)` on `D²` in the real split
/// `(x₁, x₂, y₁, y₂)`. Para-holomorphic, so the pullback of the standard
/// structure is the standard structure again.
pub fn paraholomorphic_square_jacobian(p: &[f64]) -> na::DMatrix<f64> {
    let mut m = na::DMatrix::<f64>::zeros(4, 4);
    for k in 0..2 {
        let (x, y) = (p[k], p[k + 2]);
        m[(k, k)] = 1.0 + 0.2 * x;
        m[(k, k + 2)] = 0.2 * y;
        m[(k + 2, k)] = 0.2 * y;
        m[(k + 2, k + 2)] = 1.0 + 0.2 * x;
    }
    m
}

/// Jacobian of the diffeomorphism
/// `(a, b, c, d) ↦ (a + 0.2 sin b, b + 0.15c², c + 0.1 sin(a + d), d + 0.2ab)`
/// near the origin; not para-holomorphic, so its pullback structure varies.
#[rustfmt::skip]
pub fn generic_diffeomorphism_jacobian(p: &[f64]) -> na::DMatrix<f64> {
    let (a, b, c, d) = (p[0], p[1], p[2], p[3]);
    na::DMatrix::from_row_slice(
        4,
        4,
        &[
            1.0, 0.2 * b.cos(), 0.0, 0.0,
            0.0, 1.0, 0.3 * c, 0.0,
            0.1 * (a + d).cos(), 0.0, 1.0, 0.1 * (a + d).cos(),
            0.2 * b, 0.2 * a, 0.0, 1.0,
        ],
    )
}

/// Structure on `R⁴` (coordinates `a, b, c, d`) with `+1`-eigendistribution
/// `span{∂c, ∂d}` and `−1`-eigendistribution `span{∂a, ∂b + a∂c}`.
/// The latter is not involutive, and `N(∂a, ∂b) = 4∂c` everywhere.
pub fn twisted_structure(point: &[f64]) -> na::DMatrix<f64> {
    let a = point[0];
    let mut p = na::DMatrix::<f64>::zeros(4, 4);
    p[(2, 0)] = 1.0;
    p[(3, 1)] = 1.0;
    p[(0, 2)] = 1.0;
    p[(1, 3)] = 1.0;
    p[(2, 3)] = a;
    let d = na::DMatrix::from_diagonal(&na::DVector::from_vec(vec![1.0, 1.0, -1.0, -1.0]));
    let p_inv = p.clone().try_inverse().expect("unipotent change of basis");
    p * d * p_inv
}

/// `[A, B]ⁱ = Aᵏ∂ₖBⁱ − Bᵏ∂ₖAⁱ` by central differences of sampled fields.
pub fn lie_bracket(
    grid: &Grid,
    node: usize,
    a: &dyn Fn(usize) -> na::DVector<f64>,
    b: &dyn Fn(usize) -> na::DVector<f64>,
) -> Result<na::DVector<f64>> {
    grid.require_interior(node, 1)?;
    let steps = grid.steps();
    let derivative = |f: &dyn Fn(usize) -> na::DVector<f64>, k: usize| {
        let plus = grid.offset(node, k, 1).expect("interior");
        let minus = grid.offset(node, k, -1).expect("interior");
        (f(plus) - f(minus)) / (2.0 * steps[k])
    };
    let (a0, b0) = (a(node), b(node));
    let mut out = na::DVector::zeros(a0.len());
    for k in 0..grid.dim() {
        out += derivative(b, k) * a0[k] - derivative(a, k) * b0[k];
    }
    Ok(out)
}

/// `N(X, Y) = [X,Y] + [JX,JY] − J[JX,Y] − J[X,JY]` for sampled vector fields.
pub fn nijenhuis_fields(
    field: &JField,
    node: usize,
    x: &dyn Fn(usize) -> na::DVector<f64>,
    y: &dyn Fn(usize) -> na::DVector<f64>,
) -> Result<na::DVector<f64>> {
    let g = field.grid();
    let jx = |k: usize| field.at(k) * x(k);
    let jy = |k: usize| field.at(k) * y(k);
    let j = field.at(node);
    let xy = lie_bracket(g, node, x, y)?;
    let jxjy = lie_bracket(g, node, &jx, &jy)?;
    let jx_y = lie_bracket(g, node, &jx, y)?;
    let x_jy = lie_bracket(g, node, x, &jy)?;
    Ok(xy + jxjy - j * jx_y - j * x_jy)
}

/// Nijenhuis tensor on constant vector fields.
pub fn nijenhuis(field: &JField, node: usize, x: &[f64], y: &[f64]) -> Result<na::DVector<f64>> {
    let d = field.grid().dim();
    if x.len() != d || y.len() != d {
        return Err(Error::DimensionMismatch { left: x.len().max(y.len()), right: d });
    }
    let (xc, yc) = (na::DVector::from_column_slice(x), na::DVector::from_column_slice(y));
    nijenhuis_fields(field, node, &|_| xc.clone(), &|_| yc.clone())
}

/// Largest `‖N(eᵢ, eⱼ)‖` over coordinate basis pairs.
pub fn max_nijenhuis_norm(field: &JField, node: usize) -> Result<f64> {
    let d = field.grid().dim();
    let basis = |i: usize| (0..d).map(|k| if k == i { 1.0 } else { 0.0 }).collect::<Vec<_>>();
    let mut worst: f64 = 0.0;
    for i in 0..d {
        for j in i + 1..d {
            worst = worst.max(nijenhuis(field, node, &basis(i), &basis(j))?.norm());
        }
    }
    Ok(worst)
}
