//! Gradient graphs, null-curve products and para-complex graphs.

use crate::error::{Error, Result};
use crate::geometry::SampledImmersion;
use crate::grid::Grid;
use crate::linalg::{max_relative_omega, DMatrix, DVector, LagrangianAngle};
use crate::paracomplex::{para_cauchy_riemann_residual, ParaComplex};

/// Relative tolerance for the null and Lagrangian checks on null-curve products.
pub const NULL_CURVE_TOL: f64 = 1e-8;
/// Default bound on the para-Cauchy–Riemann residual, relative to `max(1, max |f|)`.
pub const CR_TOL: f64 = 1e-6;

/// Where the gradient of the potential comes from.
#[derive(Clone, Copy)]
pub enum GradientSource<'a> {
    Exact(&'a (dyn Fn(&[f64]) -> Vec<f64> + Sync)),
    /// Central differences with the grid spacing; the discrete Hessian is then
    /// exactly symmetric, so the sampled graph stays Lagrangian.
    Potential(&'a (dyn Fn(&[f64]) -> f64 + Sync)),
}

/// `x ↦ x + τ∇u(x)`.
pub fn build_gradient_graph(grid: Grid, source: GradientSource<'_>) -> Result<SampledImmersion> {
    let steps = grid.steps();
    SampledImmersion::from_fn(grid, |x| {
        let grad = match source {
            GradientSource::Exact(g) => g(x),
            GradientSource::Potential(u) => (0..x.len())
                .map(|i| {
                    let mut p = x.to_vec();
                    p[i] = x[i] + steps[i];
                    let up = u(&p);
                    p[i] = x[i] - steps[i];
                    (up - u(&p)) / (2.0 * steps[i])
                })
                .collect(),
        };
        DVector::from_real(x, &grad)
    })
}

/// Angle of a gradient graph from the Hessian: `(q, θ)` of `det_D(Id + τ Hess)`.
pub fn graph_angle(hess: &nalgebra::DMatrix<f64>) -> Result<LagrangianAngle> {
    let n = hess.nrows();
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| ParaComplex::new(if i == j { 1.0 } else { 0.0 }, hess[(i, j)]))
                .collect()
        })
        .collect();
    LagrangianAngle::of(DMatrix::from_rows(rows)?.det())
}

/// A totally null, non-Lagrangian plane `P = span{a, b}` in `D²`.
#[derive(Debug, Clone, PartialEq)]
pub struct NullPlane {
    pub a: DVector,
    pub b: DVector,
}

impl NullPlane {
    /// `P = {(x, Rx)}` for the rotation `R` by `alpha`; non-Lagrangian iff `sin α ≠ 0`.
    pub fn rotation_graph(alpha: f64) -> Result<Self> {
        if alpha.sin().abs() < 1e-8 {
            return Err(Error::InvalidCase(format!("rotation angle {alpha} gives a Lagrangian plane")));
        }
        let (c, s) = (alpha.cos(), alpha.sin());
        Ok(Self {
            a: DVector::from_real(&[1.0, 0.0], &[c, s]),
            b: DVector::from_real(&[0.0, 1.0], &[-s, c]),
        })
    }

    pub fn point(&self, p: f64, q: f64) -> DVector {
        self.a.scale(p).axpy(q, &self.b)
    }
}

/// Five-point derivative; the curves are closed-form so this is near machine precision.
fn curve_derivative(c: &dyn Fn(f64) -> DVector, s: f64) -> DVector {
    let d = 1e-3 * s.abs().max(1.0);
    let (p1, m1, p2, m2) = (c(s + d), c(s - d), c(s + 2.0 * d), c(s - 2.0 * d));
    (&(&p1 - &m1).scale(8.0) - &(&p2 - &m2)).scale(1.0 / (12.0 * d))
}

/// `f(u, v) = γ₁(u) + γ̃₂(v)` for null curves with non-degenerate, `ω`-free pairing.
pub fn build_null_product(
    grid: Grid,
    gamma1: &(dyn Fn(f64) -> DVector + Sync),
    gamma2: &(dyn Fn(f64) -> DVector + Sync),
) -> Result<SampledImmersion> {
    if grid.dim() != 2 {
        return Err(Error::DimensionMismatch { left: grid.dim(), right: 2 });
    }
    let du: Vec<DVector> = (0..grid.axes()[0].count)
        .map(|i| curve_derivative(gamma1, grid.axes()[0].coord(i)))
        .collect();
    let dv: Vec<DVector> = (0..grid.axes()[1].count)
        .map(|j| curve_derivative(gamma2, grid.axes()[1].coord(j)))
        .collect();
    let max_null = du
        .iter()
        .chain(&dv)
        .map(|t| t.dot(t).abs() / t.grading_norm_sq())
        .fold(0.0, f64::max);
    if !(max_null <= NULL_CURVE_TOL) {
        return Err(Error::NotNullCurve { max_norm: max_null });
    }
    let mut min_pairing = f64::INFINITY;
    let mut max_omega: f64 = 0.0;
    for a in &du {
        for b in &dv {
            let scale = a.grading_norm() * b.grading_norm();
            min_pairing = min_pairing.min(a.dot(b).abs() / scale);
            max_omega = max_omega.max(a.omega(b).abs() / scale);
        }
    }
    if max_omega > NULL_CURVE_TOL {
        return Err(Error::LagrangianViolation { max_omega });
    }
    if min_pairing < 1e-6 {
        return Err(Error::DegeneratePairing { min_pairing });
    }
    SampledImmersion::from_fn(grid, |c| &gamma1(c[0]) + &gamma2(c[1]))
}

/// `z ↦ (z, f(z))` for a para-holomorphic `f`.
pub fn build_paracomplex_graph(
    grid: Grid,
    f: &(dyn Fn(ParaComplex) -> ParaComplex + Sync),
    tol: f64,
) -> Result<SampledImmersion> {
    if grid.dim() != 2 {
        return Err(Error::DimensionMismatch { left: grid.dim(), right: 2 });
    }
    let zs: Vec<ParaComplex> = (0..grid.len())
        .map(|k| {
            let c = grid.coords(k);
            ParaComplex::new(c[0], c[1])
        })
        .collect();
    let fs: Vec<ParaComplex> = zs.iter().map(|&z| f(z)).collect();
    let scale = fs.iter().map(|w| w.euclid_sq().sqrt()).fold(1.0, f64::max);
    let mut residual: f64 = 0.0;
    for k in (0..grid.len()).filter(|&k| grid.is_interior(k, 1)) {
        residual = residual.max(para_cauchy_riemann_residual(&grid, &fs, k)?);
    }
    if !(residual <= tol * scale) {
        return Err(Error::NotParaHolomorphic { residual });
    }
    let values = zs.into_iter().zip(fs).map(|(z, w)| DVector::new(vec![z, w])).collect();
    SampledImmersion::new(grid, values)
}

/// Largest relative `|ω|` on the coordinate tangents of an immersion's interior.
pub fn max_interior_omega(imm: &SampledImmersion) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for k in imm.interior_nodes(crate::geometry::JET_MARGIN) {
        worst = worst.max(max_relative_omega(&imm.jet(k)?.tangent));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Axis;
    use crate::lagrangian::{angle_field, is_lagrangian};
    use nalgebra as na;

    fn grid2(c: f64, half: f64, count: usize) -> Grid {
        Grid::new(vec![Axis::new(c - half, c + half, count); 2]).unwrap()
    }

    #[test]
    fn graph_angle_examples() {
        assert_eq!(graph_angle(&na::DMatrix::zeros(2, 2)).unwrap(), LagrangianAngle { q: 0, theta: 0.0 });
        let a = graph_angle(&na::DMatrix::from_diagonal(&na::DVector::from_vec(vec![2.0, -0.5]))).unwrap();
        assert_eq!(a.q, 1);
        assert!(a.theta.abs() < 1e-15);
        let err = graph_angle(&na::DMatrix::from_diagonal(&na::DVector::from_vec(vec![1.0, -1.0])));
        assert!(matches!(err, Err(Error::DegenerateMetric(_))));
    }

    #[test]
    fn gradient_graph_of_zero_is_flat() {
        let zero = |_: &[f64]| 0.0;
        let imm = build_gradient_graph(grid2(0.0, 1.0, 7), GradientSource::Potential(&zero)).unwrap();
        for k in 0..imm.grid().len() {
            let c = imm.grid().coords(k);
            assert_eq!(imm.value(k), &DVector::from_real(&c, &[0.0, 0.0]));
        }
    }

    #[test]
    fn potential_route_matches_exact_gradient() {
        let u = |x: &[f64]| x[0] * x[0] - x[1] * x[1] / 4.0;
        let g = |x: &[f64]| vec![2.0 * x[0], -x[1] / 2.0];
        let a = build_gradient_graph(grid2(0.0, 1.0, 9), GradientSource::Potential(&u)).unwrap();
        let b = build_gradient_graph(grid2(0.0, 1.0, 9), GradientSource::Exact(&g)).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            assert!((x - y).grading_norm() < 1e-13);
        }
        let f = angle_field(&a, 1e-12).unwrap();
        for (_, ang) in f.regular_nodes() {
            assert_eq!(ang.q, 1);
            assert!(ang.theta.abs() < 1e-12);
        }
        assert!(is_lagrangian(&a, 40, 1e-12).unwrap());
    }

    #[test]
    fn cubic_potential_is_discretely_lagrangian() {
        let u = |x: &[f64]| x[0].powi(2) * x[1] + 0.3 * x[1].powi(3);
        let imm = build_gradient_graph(grid2(0.2, 0.5, 9), GradientSource::Potential(&u)).unwrap();
        assert!(max_interior_omega(&imm).unwrap() < 1e-13);
    }

    #[test]
    fn null_plane_is_totally_null_and_not_lagrangian() {
        let p = NullPlane::rotation_graph(0.7).unwrap();
        for (x, y) in [(&p.a, &p.a), (&p.a, &p.b), (&p.b, &p.b)] {
            assert!(x.dot(y).abs() < 1e-15);
        }
        assert!(p.a.omega(&p.b).abs() > 0.1);
        assert!(NullPlane::rotation_graph(0.0).is_err());
    }

    #[test]
    fn null_product_checks() {
        let p = NullPlane::rotation_graph(0.9).unwrap();
        let g = grid2(0.0, 0.5, 9);
        let (pa, pb) = (p.clone(), p.clone());
        let line1 = move |u: f64| pa.point(u, 0.0);
        let line2 = move |v: f64| pb.point(0.0, v).apply_j();
        let flat = build_null_product(g.clone(), &line1, &line2).unwrap();
        assert!(flat.mean_curvature(40).unwrap().grading_norm() < 1e-12);
        assert!(!flat.induced_metric(40).unwrap().is_definite());

        // JP-curve replaced by a P-curve: pairing is zero and ω ≠ 0.
        let pc = p.clone();
        let in_p = move |v: f64| pc.point(0.0, v);
        assert!(build_null_product(g.clone(), &line1, &in_p).is_err());

        let not_null = |v: f64| DVector::from_real(&[v, 0.0], &[0.0, 0.0]);
        assert!(matches!(build_null_product(g, &line1, &not_null), Err(Error::NotNullCurve { .. })));
    }

    #[test]
    fn paracomplex_graph_checks() {
        let g = grid2(0.3, 0.3, 9);
        let sq = |z: ParaComplex| z * z;
        let imm = build_paracomplex_graph(g.clone(), &sq, CR_TOL).unwrap();
        assert!(imm.mean_curvature(40).unwrap().grading_norm() < 1e-10);
        assert!(!is_lagrangian(&imm, 40, 1e-3).unwrap());
        let konst = |_: ParaComplex| ParaComplex::new(0.5, 0.2);
        let imm = build_paracomplex_graph(g.clone(), &konst, CR_TOL).unwrap();
        assert!(imm.mean_curvature(40).unwrap().grading_norm() < 1e-12);
        let re = |z: ParaComplex| ParaComplex::real(z.x());
        assert!(matches!(
            build_paracomplex_graph(g, &re, CR_TOL),
            Err(Error::NotParaHolomorphic { .. })
        ));
    }
}
