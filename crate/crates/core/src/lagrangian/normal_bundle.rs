//! Normal bundles `{x + τν : ν ⊥ T_xΣ}` of submanifolds `Σ ⊂ Rⁿ`.
//!
//! Shape operators follow `A_ν X = −(dν X)ᵀ`, so the para-holomorphic volume
//! of the fiber point `x + τtν₁` is `τ^{n−p} ∏ (1 − τtκᵢ)` with `κᵢ` the
//! eigenvalues of `A_{ν₁}`.

use nalgebra as na;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::SampledImmersion;
use crate::grid::{Axis, Grid};
use crate::linalg::{DVector, LagrangianAngle};
use crate::paracomplex::ParaComplex;

/// Submanifolds with closed-form normal frames and shape operators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NormalBundleBase {
    /// `Rᵖ × {0} ⊂ Rⁿ`.
    Flat { p: usize, n: usize },
    /// Circle in `R²` with the inward normal; parameter: polar angle.
    Circle { radius: f64 },
    /// Round `S² ⊂ R³` with the inward normal; parameters: colatitude, longitude.
    Sphere { radius: f64 },
    /// Catenoid `(c cosh(v/c) cos u, c cosh(v/c) sin u, v)`; parameters: `u`, `v`.
    Catenoid { waist: f64 },
}

impl NormalBundleBase {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Flat { p, n } if p == 0 || p > n => {
                Err(Error::InvalidCase(format!("flat base needs 0 < p <= n, got p={p}, n={n}")))
            }
            Self::Circle { radius: r } | Self::Sphere { radius: r } | Self::Catenoid { waist: r } if !(r > 0.0) => {
                Err(Error::NonpositiveRadius(r))
            }
            _ => Ok(()),
        }
    }

    pub fn base_dim(&self) -> usize {
        match *self {
            Self::Flat { p, .. } => p,
            Self::Circle { .. } => 1,
            Self::Sphere { .. } | Self::Catenoid { .. } => 2,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        match *self {
            Self::Flat { n, .. } => n,
            Self::Circle { .. } => 2,
            Self::Sphere { .. } | Self::Catenoid { .. } => 3,
        }
    }

    pub fn point(&self, params: &[f64]) -> Vec<f64> {
        match *self {
            Self::Flat { p, n } => (0..n).map(|i| if i < p { params[i] } else { 0.0 }).collect(),
            Self::Circle { radius } => vec![radius * params[0].cos(), radius * params[0].sin()],
            Self::Sphere { radius } => {
                let (th, ph) = (params[0], params[1]);
                vec![radius * th.sin() * ph.cos(), radius * th.sin() * ph.sin(), radius * th.cos()]
            }
            Self::Catenoid { waist: c } => {
                let (u, v) = (params[0], params[1]);
                let rho = c * (v / c).cosh();
                vec![rho * u.cos(), rho * u.sin(), v]
            }
        }
    }

    /// Orthonormal normal frame.
    pub fn normals(&self, params: &[f64]) -> Vec<Vec<f64>> {
        match *self {
            Self::Flat { p, n } => (p..n).map(|k| (0..n).map(|i| if i == k { 1.0 } else { 0.0 }).collect()).collect(),
            Self::Circle { .. } => vec![vec![-params[0].cos(), -params[0].sin()]],
            Self::Sphere { radius } => vec![self.point(params).iter().map(|x| -x / radius).collect()],
            Self::Catenoid { waist: c } => {
                let (u, v) = (params[0], params[1]);
                let (sech, tanh) = (1.0 / (v / c).cosh(), (v / c).tanh());
                vec![vec![u.cos() * sech, u.sin() * sech, -tanh]]
            }
        }
    }

    /// Shape operator of each normal in an orthonormal tangent frame.
    pub fn shape_operators(&self, params: &[f64]) -> Vec<na::DMatrix<f64>> {
        match *self {
            Self::Flat { p, n } => vec![na::DMatrix::zeros(p, p); n - p],
            Self::Circle { radius } => vec![na::DMatrix::from_element(1, 1, 1.0 / radius)],
            Self::Sphere { radius } => vec![na::DMatrix::identity(2, 2) / radius],
            Self::Catenoid { waist: c } => {
                let k = 1.0 / (c * (params[1] / c).cosh().powi(2));
                vec![na::DMatrix::from_diagonal(&na::DVector::from_vec(vec![-k, k]))]
            }
        }
    }

    /// Eigenvalues of the shape operator of normal `k`, ascending.
    pub fn principal_curvatures(&self, params: &[f64], k: usize) -> Vec<f64> {
        let a = &self.shape_operators(params)[k];
        let mut ev: Vec<f64> = na::SymmetricEigen::new(a.clone()).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

/// `(q, θ)` of `τ^{n−p} ∏ (1 − τtκᵢ)` at the fiber point `x + τtν₁`.
pub fn normal_bundle_angle(base: &NormalBundleBase, params: &[f64], t: f64) -> Result<LagrangianAngle> {
    let codim = (base.ambient_dim() - base.base_dim()) as i32;
    let vol: ParaComplex = base
        .principal_curvatures(params, 0)
        .iter()
        .map(|&k| ParaComplex::new(1.0, -t * k))
        .product::<ParaComplex>()
        * ParaComplex::TAU.powi(codim);
    LagrangianAngle::of(vol)
}

/// Whether every normal's principal curvatures are symmetric about zero.
pub fn is_austere(base: &NormalBundleBase, params: &[f64], tol: f64) -> bool {
    (0..base.ambient_dim() - base.base_dim()).all(|k| {
        let ev = base.principal_curvatures(params, k);
        let scale = ev.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
        ev.iter().zip(ev.iter().rev()).all(|(a, b)| (a + b).abs() <= tol * scale)
    })
}

/// A base with parameter axes for `Σ` and one fiber axis shared by every normal direction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormalBundleSpec {
    pub base: NormalBundleBase,
    pub base_axes: Vec<Axis>,
    pub fiber: Axis,
}

impl NormalBundleSpec {
    /// `(x, t₁, …) ↦ x + τ Σ tₖνₖ` over base axes followed by one fiber axis per normal.
    pub fn immersion(&self) -> Result<SampledImmersion> {
        self.base.validate()?;
        let p = self.base.base_dim();
        if self.base_axes.len() != p {
            return Err(Error::DimensionMismatch { left: self.base_axes.len(), right: p });
        }
        let codim = self.base.ambient_dim() - p;
        let mut axes = self.base_axes.clone();
        axes.extend(std::iter::repeat_n(self.fiber, codim));
        let base = self.base;
        SampledImmersion::from_fn(Grid::new(axes)?, move |c| {
            let (params, t) = c.split_at(p);
            let x = base.point(params);
            let mut y = vec![0.0; x.len()];
            for (tk, nu) in t.iter().zip(base.normals(params)) {
                for (yi, ni) in y.iter_mut().zip(nu) {
                    *yi += tk * ni;
                }
            }
            DVector::from_real(&x, &y)
        })
    }

    /// Spread of `θ` along the fiber axis at fixed base parameters.
    pub fn angle_variation(&self, params: &[f64]) -> Result<f64> {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.fiber.count {
            let th = normal_bundle_angle(&self.base, params, self.fiber.coord(i))?.theta;
            lo = lo.min(th);
            hi = hi.max(th);
        }
        Ok(hi - lo)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lagrangian::angle_field;

    #[test]
    fn flat_base_angle() {
        let base = NormalBundleBase::Flat { p: 1, n: 3 };
        for t in [0.0, 0.5, -2.0] {
            assert_eq!(normal_bundle_angle(&base, &[0.3], t).unwrap(), LagrangianAngle { q: 0, theta: 0.0 });
        }
        let base = NormalBundleBase::Flat { p: 1, n: 2 };
        assert_eq!(normal_bundle_angle(&base, &[0.3], 1.0).unwrap().q, 1);
        assert!(is_austere(&base, &[0.0], 1e-12));
    }

    #[test]
    fn circle_angle_is_artanh() {
        let r = 2.0;
        let base = NormalBundleBase::Circle { radius: r };
        for t in [-1.5, -0.3, 0.0, 0.7, 1.9] {
            let a = normal_bundle_angle(&base, &[0.4], t).unwrap();
            assert_eq!(a.q, 1);
            assert!((a.theta - (-t / r).atanh()).abs() < 1e-13);
        }
        assert!(!is_austere(&base, &[0.0], 1e-8));
        assert!(matches!(normal_bundle_angle(&base, &[0.0], r), Err(Error::DegenerateMetric(_))));
    }

    #[test]
    fn catenoid_is_austere_with_constant_angle() {
        let base = NormalBundleBase::Catenoid { waist: 1.0 };
        for v in [-0.5, 0.0, 0.8] {
            assert!(is_austere(&base, &[0.3, v], 1e-12));
            let th0 = normal_bundle_angle(&base, &[0.3, v], 0.0).unwrap().theta;
            for t in [0.1, 0.2, 0.4] {
                assert!((normal_bundle_angle(&base, &[0.3, v], t).unwrap().theta - th0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn sampled_bundle_matches_closed_form() {
        let cases = [
            NormalBundleSpec {
                base: NormalBundleBase::Circle { radius: 1.5 },
                base_axes: vec![Axis::periodic(0.0, std::f64::consts::TAU, 64)],
                fiber: Axis::new(-0.6, 0.6, 41),
            },
            NormalBundleSpec {
                base: NormalBundleBase::Catenoid { waist: 1.0 },
                base_axes: vec![Axis::new(0.0, 1.0, 21), Axis::new(-0.5, 0.5, 21)],
                fiber: Axis::new(0.0, 0.4, 21),
            },
            NormalBundleSpec {
                base: NormalBundleBase::Sphere { radius: 2.0 },
                base_axes: vec![Axis::new(0.5, 1.5, 21), Axis::new(0.0, 1.0, 21)],
                fiber: Axis::new(-0.5, 0.5, 21),
            },
        ];
        for spec in cases {
            let imm = spec.immersion().unwrap();
            let field = angle_field(&imm, 1e-3).unwrap();
            let p = spec.base.base_dim();
            for (k, a) in field.regular_nodes() {
                let c = imm.grid().coords(k);
                let b = normal_bundle_angle(&spec.base, &c[..p], c[p]).unwrap();
                assert_eq!(a.q, b.q);
                assert!((a.theta - b.theta).abs() < 1e-3, "{:?}: {} vs {}", spec.base, a.theta, b.theta);
            }
        }
    }

    #[test]
    fn invalid_bases() {
        assert!(NormalBundleBase::Circle { radius: -1.0 }.validate().is_err());
        assert!(NormalBundleBase::Flat { p: 3, n: 2 }.validate().is_err());
    }
}
