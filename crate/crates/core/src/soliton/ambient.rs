//! Checks of `H + λF^⊥ = 0` on sampled equivariant lifts.
//!
//! `λ` here multiplies the mean curvature `H = (1/m) tr II`; a reduced system
//! with parameter `λ′` corresponds to `λ = ±λ′/n`, the sign fixed by the
//! branch (see [`fit_lambda`]).

use serde::{Deserialize, Serialize};

use super::SolitonParams;
use crate::equivariant::{lift, ProfileCurve, ProfileFamily};
use crate::error::{Error, Result};
use crate::geometry::{NormalProjector, JET_MARGIN};
use crate::grid::Axis;
use crate::linalg::DVector;
use crate::par::{map_slice, Mode};
use crate::paracomplex::ParaComplex;

/// Closed-form critical-point profiles `τ^q r₀ e^{τs/r₀}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HyperbolaBranch {
    /// `r₀(cosh, sinh)`: spacelike position vector, timelike tangent.
    Spacelike,
    /// `r₀(sinh, cosh)`: timelike position vector, spacelike tangent.
    Timelike,
}

impl HyperbolaBranch {
    pub fn q(self) -> u8 {
        match self {
            Self::Spacelike => 0,
            Self::Timelike => 1,
        }
    }
}

/// Hyperbola through the critical radius, parametrized by arc length on `axis`.
pub fn hyperbola_solution(params: &SolitonParams, branch: HyperbolaBranch, axis: Axis) -> Result<ProfileCurve> {
    let r0 = params.critical_radius()?;
    let lead = ParaComplex::TAU.powi(branch.q() as i32) * r0;
    ProfileCurve::from_fn(axis, ProfileFamily::Soliton, move |s| lead * ParaComplex::exp_tau(s / r0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmbientResidual {
    /// Interior nodes with a non-degenerate induced metric.
    pub nodes: Vec<usize>,
    /// `‖H + λF^⊥‖` (Euclidean on the real split).
    pub residual: Vec<f64>,
    /// `|⟨H + λF^⊥, J∂_sF⟩| / √|⟨∂_sF, ∂_sF⟩|`.
    pub profile_component: Vec<f64>,
    /// Largest such component over the sphere directions.
    pub sphere_component: Vec<f64>,
    /// Interior nodes skipped because the metric degenerates there.
    pub skipped: usize,
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(0.0, f64::max)
}

impl AmbientResidual {
    pub fn max_residual(&self) -> f64 {
        max_of(&self.residual)
    }

    pub fn max_profile_component(&self) -> f64 {
        max_of(&self.profile_component)
    }

    pub fn max_sphere_component(&self) -> f64 {
        max_of(&self.sphere_component)
    }
}

struct NodeData {
    curvature: DVector,
    normal_position: DVector,
    tangent: Vec<DVector>,
}

fn node_data(curve: &ProfileCurve, n: usize, sphere: Vec<Axis>) -> Result<(Vec<usize>, Vec<NodeData>, usize)> {
    let imm = lift(curve, n, sphere)?;
    let interior = imm.interior_nodes(JET_MARGIN);
    let per_node = map_slice(Mode::Parallel, &interior, |&k| -> Result<Option<NodeData>> {
        let ext = match imm.extrinsic(k) {
            Ok(e) => e,
            Err(Error::DegenerateMetric(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        let proj = NormalProjector::new(&ext.tangent)?;
        Ok(Some(NodeData {
            curvature: ext.mean_curvature,
            normal_position: proj.normal(imm.value(k)),
            tangent: ext.tangent,
        }))
    });
    let mut nodes = Vec::new();
    let mut data = Vec::new();
    let mut skipped = 0;
    for (k, d) in interior.into_iter().zip(per_node) {
        match d? {
            Some(d) => {
                nodes.push(k);
                data.push(d);
            }
            None => skipped += 1,
        }
    }
    if data.is_empty() {
        return Err(Error::InvalidGrid("no interior non-degenerate nodes".into()));
    }
    Ok((nodes, data, skipped))
}

fn euclid_dot(a: &DVector, b: &DVector) -> f64 {
    a.to_real().iter().zip(b.to_real()).map(|(x, y)| x * y).sum()
}

/// Per-node `H + λF^⊥` on the lift of `curve` to `D ⊗ S^{n−1}`.
pub fn ambient_residual(curve: &ProfileCurve, n: usize, lambda: f64, sphere: Vec<Axis>) -> Result<AmbientResidual> {
    let (nodes, data, skipped) = node_data(curve, n, sphere)?;
    let mut out = AmbientResidual {
        nodes,
        residual: Vec::with_capacity(data.len()),
        profile_component: Vec::with_capacity(data.len()),
        sphere_component: Vec::with_capacity(data.len()),
        skipped,
    };
    for d in &data {
        let r = d.curvature.axpy(lambda, &d.normal_position);
        out.residual.push(euclid_dot(&r, &r).sqrt());
        let comp = |t: &DVector| r.dot(&t.apply_j()).abs() / t.dot(t).abs().sqrt();
        out.profile_component.push(comp(&d.tangent[0]));
        out.sphere_component.push(d.tangent[1..].iter().map(comp).fold(0.0, f64::max));
    }
    Ok(out)
}

/// Least-squares `λ` minimising `Σ‖H + λF^⊥‖²` over the lift.
pub fn fit_lambda(curve: &ProfileCurve, n: usize, sphere: Vec<Axis>) -> Result<f64> {
    let (_, data, _) = node_data(curve, n, sphere)?;
    let (num, den) = data.iter().fold((0.0, 0.0), |(a, b), d| {
        (a + euclid_dot(&d.curvature, &d.normal_position), b + euclid_dot(&d.normal_position, &d.normal_position))
    });
    if den == 0.0 {
        return Err(Error::InvalidCase("position is tangent everywhere: lambda undetermined".into()));
    }
    Ok(-num / den)
}
