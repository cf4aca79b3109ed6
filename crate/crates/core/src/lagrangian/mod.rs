//! Lagrangian structure of sampled immersions: angle fields, the relation
//! between mean curvature and the angle gradient, the cubic form, and
//! constructors for the minimal families.

mod constructors;
pub mod normal_bundle;

pub use constructors::{
    build_gradient_graph, build_null_product, build_paracomplex_graph, graph_angle, max_interior_omega, GradientSource,
    NullPlane, CR_TOL, NULL_CURVE_TOL,
};
pub use normal_bundle::{NormalBundleBase, NormalBundleSpec};

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::geometry::{SampledImmersion, JET_MARGIN};
use crate::linalg::{DMatrix, DVector, LagrangianAngle};
use crate::par::{self, Mode};
use crate::paracomplex::ParaComplex;

/// Default relative bound on `ω` for finite-difference tangents, which are
/// Lagrangian only up to discretization error.
pub const FD_LAGRANGIAN_TOL: f64 = 1e-3;
/// Largest angle step between neighbouring nodes that still joins them into one region.
pub const MAX_ANGLE_JUMP: f64 = std::f64::consts::FRAC_PI_2;

fn relative_omega(tangent: &[DVector]) -> f64 {
    crate::linalg::max_relative_omega(tangent)
}

pub fn is_lagrangian(imm: &SampledImmersion, node: usize, tol: f64) -> Result<bool> {
    Ok(relative_omega(&imm.jet(node)?.tangent) <= tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeStatus {
    /// Inside the finite-difference margin; not evaluated.
    Margin,
    Degenerate,
    Regular,
}

/// Angle of the coordinate frame at a node, or `None` where the induced metric degenerates.
pub fn node_angle(imm: &SampledImmersion, node: usize) -> Result<Option<LagrangianAngle>> {
    let jet = imm.jet(node)?;
    let metric = crate::geometry::InducedMetric::from_tangent(&jet.tangent);
    if metric.degenerate {
        return Ok(None);
    }
    let vol = DMatrix::from_frame(&jet.tangent)?.det();
    Ok(LagrangianAngle::of(vol).ok())
}

/// Per-node Lagrangian angles with connected regions of regular nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleField {
    pub status: Vec<NodeStatus>,
    pub angles: Vec<Option<LagrangianAngle>>,
    pub region: Vec<Option<usize>>,
    pub region_count: usize,
    /// Neighbouring regular nodes left unjoined because `q` changed or `θ` jumped.
    pub rejected_edges: usize,
}

impl AngleField {
    /// `(min θ, max θ)` per region.
    pub fn region_ranges(&self) -> Vec<(f64, f64)> {
        let mut out = vec![(f64::INFINITY, f64::NEG_INFINITY); self.region_count];
        for (a, r) in self.angles.iter().zip(&self.region) {
            if let (Some(a), Some(r)) = (a, r) {
                out[*r].0 = out[*r].0.min(a.theta);
                out[*r].1 = out[*r].1.max(a.theta);
            }
        }
        out
    }

    /// Largest spread of `θ` within a single region.
    pub fn max_region_variation(&self) -> f64 {
        self.region_ranges().iter().map(|(lo, hi)| hi - lo).fold(0.0, f64::max)
    }

    pub fn degenerate_count(&self) -> usize {
        self.status.iter().filter(|s| **s == NodeStatus::Degenerate).count()
    }

    pub fn regular_nodes(&self) -> impl Iterator<Item = (usize, LagrangianAngle)> + '_ {
        self.angles.iter().enumerate().filter_map(|(k, a)| a.map(|a| (k, a)))
    }
}

/// Angle field of the coordinate tangent frames, with regions found by flood fill.
pub fn angle_field(imm: &SampledImmersion, lagrangian_tol: f64) -> Result<AngleField> {
    let grid = imm.grid();
    let per_node: Vec<Result<(NodeStatus, Option<LagrangianAngle>)>> =
        par::map_indices(Mode::default(), grid.len(), |k| {
            if !grid.is_interior(k, JET_MARGIN) {
                return Ok((NodeStatus::Margin, None));
            }
            let jet = imm.jet(k)?;
            let w = relative_omega(&jet.tangent);
            if w > lagrangian_tol {
                return Err(Error::LagrangianViolation { max_omega: w });
            }
            match node_angle(imm, k)? {
                Some(a) => Ok((NodeStatus::Regular, Some(a))),
                None => Ok((NodeStatus::Degenerate, None)),
            }
        });
    let mut status = Vec::with_capacity(grid.len());
    let mut angles = Vec::with_capacity(grid.len());
    for r in per_node {
        let (s, a) = r?;
        status.push(s);
        angles.push(a);
    }

    let mut region = vec![None; grid.len()];
    let mut region_count = 0;
    let mut rejected_edges = 0;
    for start in 0..grid.len() {
        if angles[start].is_none() || region[start].is_some() {
            continue;
        }
        region[start] = Some(region_count);
        let mut queue = VecDeque::from([start]);
        while let Some(k) = queue.pop_front() {
            let a = angles[k].expect("queued nodes are regular");
            for axis in 0..grid.dim() {
                for d in [-1, 1] {
                    let Some(nb) = grid.offset(k, axis, d) else { continue };
                    let Some(b) = angles[nb] else { continue };
                    if b.q != a.q || (b.theta - a.theta).abs() >= MAX_ANGLE_JUMP {
                        if nb > k {
                            rejected_edges += 1;
                        }
                        continue;
                    }
                    if region[nb].is_none() {
                        region[nb] = Some(region_count);
                        queue.push_back(nb);
                    }
                }
            }
        }
        region_count += 1;
    }
    Ok(AngleField { status, angles, region, region_count, rejected_edges })
}

/// `m·H` and `J∇β` at one node.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleIdentity {
    pub scaled_mean_curvature: DVector,
    pub j_gradient: DVector,
}

impl AngleIdentity {
    /// `‖m·H − J∇β‖` in the grading norm; vanishes for every Lagrangian immersion.
    pub fn residual(&self) -> f64 {
        (&self.scaled_mean_curvature - &self.j_gradient).grading_norm()
    }

    /// `‖m·H + J∇β‖`, the opposite sign convention; generally nonzero.
    pub fn opposite_sign_residual(&self) -> f64 {
        (&self.scaled_mean_curvature + &self.j_gradient).grading_norm()
    }
}

pub fn angle_identity(imm: &SampledImmersion, node: usize) -> Result<AngleIdentity> {
    imm.grid().require_interior(node, JET_MARGIN + 1)?;
    let ext = imm.extrinsic(node)?;
    let m = imm.dim_domain();
    let steps = imm.grid().steps();
    let center = node_angle(imm, node)?
        .ok_or_else(|| Error::DegenerateMetric("null para-holomorphic volume".into()))?;
    let mut dtheta = vec![0.0; m];
    for (i, d) in dtheta.iter_mut().enumerate() {
        let side = |delta: isize| -> Result<f64> {
            let nb = imm.grid().offset(node, i, delta).expect("margin checked");
            let a = node_angle(imm, nb)?
                .ok_or_else(|| Error::DegenerateMetric("neighbour on the null locus".into()))?;
            if a.q != center.q {
                return Err(Error::DegenerateMetric("angle stencil crosses the null locus".into()));
            }
            Ok(a.theta)
        };
        *d = (side(1)? - side(-1)?) / (2.0 * steps[i]);
    }
    let proj = crate::geometry::NormalProjector::new(&ext.tangent)?;
    let g_inv = proj.inverse_metric();
    let mut grad = DVector::zeros(imm.ambient_dim());
    for i in 0..m {
        for j in 0..m {
            grad = grad.axpy(g_inv[(i, j)] * dtheta[i], &ext.tangent[j]);
        }
    }
    Ok(AngleIdentity { scaled_mean_curvature: ext.mean_curvature.scale(m as f64), j_gradient: grad.apply_j() })
}

pub fn angle_identity_residual(imm: &SampledImmersion, node: usize) -> Result<f64> {
    Ok(angle_identity(imm, node)?.residual())
}

/// `T(i, j, k) = ⟨∂ᵢ∂ⱼF, J∂ₖF⟩`.
pub fn triple_tensor(imm: &SampledImmersion, node: usize, i: usize, j: usize, k: usize) -> Result<f64> {
    let jet = imm.jet(node)?;
    Ok(jet.second[i][j].dot(&jet.tangent[k].apply_j()))
}

/// Multiplies every value by `e^{τφ₀}`, which shifts the angle by `n·φ₀`.
pub fn rotate(imm: &SampledImmersion, phi0: f64) -> Result<SampledImmersion> {
    let w = ParaComplex::exp_tau(phi0);
    imm.map_values(|v| v.scale_d(w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{Axis, Grid};

    fn pc(x: f64, y: f64) -> ParaComplex {
        ParaComplex::new(x, y)
    }

    fn flat(n: usize, count: usize) -> SampledImmersion {
        let g = Grid::new(vec![Axis::new(-1.0, 1.0, count); n]).unwrap();
        SampledImmersion::from_fn(g, |c| DVector::new(c.iter().map(|&x| pc(x, 0.0)).collect())).unwrap()
    }

    fn tau_curve(axis: Axis) -> SampledImmersion {
        SampledImmersion::from_fn(Grid::new(vec![axis]).unwrap(), |c| {
            DVector::new(vec![ParaComplex::exp_tau(c[0])])
        })
        .unwrap()
    }

    #[test]
    fn flat_angle_field() {
        let imm = flat(2, 9);
        let f = angle_field(&imm, 1e-12).unwrap();
        assert_eq!(f.region_count, 1);
        for (_, a) in f.regular_nodes() {
            assert_eq!(a, LagrangianAngle { q: 0, theta: 0.0 });
        }
        assert!(is_lagrangian(&imm, 40, 1e-12).unwrap());
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    assert_eq!(triple_tensor(&imm, 40, i, j, k).unwrap(), 0.0);
                }
            }
        }
    }

    #[test]
    fn tau_curve_angle_is_parameter() {
        let imm = tau_curve(Axis::new(-1.0, 1.0, 401));
        let f = angle_field(&imm, 1e-12).unwrap();
        for (k, a) in f.regular_nodes() {
            let s = imm.grid().coords(k)[0];
            assert_eq!(a.q, 1);
            assert!((a.theta - s).abs() < 1e-4, "{} vs {s}", a.theta);
        }
    }

    #[test]
    fn identity_sign_on_tau_curve() {
        let err = |h: f64| {
            let imm = tau_curve(Axis::centered(0.4, h, 4));
            let id = angle_identity(&imm, 4).unwrap();
            assert!(id.opposite_sign_residual() > 1.0);
            id.residual()
        };
        let ratio = err(0.02) / err(0.01);
        assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn rotation_shifts_angle() {
        let imm = flat(2, 9);
        let rot = rotate(&imm, 0.3).unwrap();
        let f = angle_field(&rot, 1e-12).unwrap();
        for (_, a) in f.regular_nodes() {
            assert_eq!(a.q, 0);
            assert!((a.theta - 0.6).abs() < 1e-12);
        }
        assert_eq!(rotate(&imm, 0.0).unwrap(), imm);
    }

    #[test]
    fn regions_split_at_null_locus() {
        // Circle profile: volume ∝ τ cos 2t changes causal type four times.
        let g = Grid::new(vec![Axis::periodic(0.0, std::f64::consts::TAU, 203)]).unwrap();
        let imm = SampledImmersion::from_fn(g, |c| DVector::new(vec![pc(c[0].cos(), c[0].sin())])).unwrap();
        let f = angle_field(&imm, 1e-12).unwrap();
        assert_eq!(f.region_count, 4);
    }

    #[test]
    fn violation_is_reported() {
        let g = Grid::new(vec![Axis::new(-1.0, 1.0, 7), Axis::new(-1.0, 1.0, 7)]).unwrap();
        let imm =
            SampledImmersion::from_fn(g, |c| DVector::new(vec![pc(c[0], c[1]), pc(0.0, 0.0)])).unwrap();
        assert!(!is_lagrangian(&imm, 24, 1e-3).unwrap());
        assert!(matches!(angle_field(&imm, 1e-3), Err(Error::LagrangianViolation { .. })));
    }
}
