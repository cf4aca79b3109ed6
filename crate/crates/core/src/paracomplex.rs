//! Split-complex (para-complex) numbers `x + τy` with `τ² = 1`.
//!
//! Values are stored in the null basis `u = x + y`, `v = x − y`. In that basis
//! the algebra splits as `R × R`: products are componentwise, conjugation swaps
//! the components and the squared norm is `u·v`. Polar data come straight from
//! `ln|u|` and `ln|v|`, so arguments stay accurate far out along the hyperbolae
//! where `x` and `y` nearly cancel.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;

/// Relative light-cone tolerance used by [`ParaComplex::polar`]. Null
/// coordinates are stored exactly, so only values within rounding of the cone
/// are rejected; `|θ| = 20` already puts `|z|²/(x² + y²)` near `1e-17`.
pub const DEFAULT_NULL_TOL: f64 = 1e-30;

#[derive(Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "XY", into = "XY")]
pub struct ParaComplex {
    u: f64,
    v: f64,
}

#[derive(Serialize, Deserialize)]
struct XY {
    x: f64,
    y: f64,
}

impl From<XY> for ParaComplex {
    fn from(p: XY) -> Self {
        ParaComplex::new(p.x, p.y)
    }
}

impl From<ParaComplex> for XY {
    fn from(z: ParaComplex) -> Self {
        XY { x: z.x(), y: z.y() }
    }
}

impl ParaComplex {
    pub const ZERO: Self = Self { u: 0.0, v: 0.0 };
    pub const ONE: Self = Self { u: 1.0, v: 1.0 };
    pub const TAU: Self = Self { u: 1.0, v: -1.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Self { u: x + y, v: x - y }
    }

    pub fn real(x: f64) -> Self {
        Self { u: x, v: x }
    }

    /// Builds `z` from its null coordinates `u = x + y`, `v = x − y`.
    pub fn from_null(u: f64, v: f64) -> Self {
        Self { u, v }
    }

    pub fn null_coords(self) -> (f64, f64) {
        (self.u, self.v)
    }

    pub fn x(self) -> f64 {
        0.5 * (self.u + self.v)
    }

    pub fn y(self) -> f64 {
        0.5 * (self.u - self.v)
    }

    pub fn conj(self) -> Self {
        Self { u: self.v, v: self.u }
    }

    /// `z·conj(z) = x² − y²`.
    pub fn squared_norm(self) -> f64 {
        self.u * self.v
    }

    /// `x² + y²`, the Euclidean size used for grading residuals and tolerances.
    pub fn euclid_sq(self) -> f64 {
        0.5 * (self.u * self.u + self.v * self.v)
    }

    pub fn is_finite(self) -> bool {
        self.u.is_finite() && self.v.is_finite()
    }

    /// Multiplicative inverse, or `NullValue` on the light cone.
    pub fn inv(self) -> Result<Self> {
        if self.u == 0.0 || self.v == 0.0 {
            return Err(Error::NullValue { squared_norm: self.squared_norm() });
        }
        Ok(Self { u: 1.0 / self.u, v: 1.0 / self.v })
    }

    pub fn powi(self, n: i32) -> Self {
        Self { u: self.u.powi(n), v: self.v.powi(n) }
    }

    /// `cosh θ + τ sinh θ`.
    pub fn exp_tau(theta: f64) -> Self {
        Self { u: theta.exp(), v: (-theta).exp() }
    }

    /// Polar decomposition with the default relative null tolerance.
    pub fn polar(self) -> Result<PolarForm> {
        self.polar_with_tol(DEFAULT_NULL_TOL)
    }

    /// Polar decomposition `z = p·τ^q·r·e^{τθ}`.
    ///
    /// `rel_tol` is relative to `x² + y²`; values closer to the light cone
    /// than that have no argument and yield `NullValue`.
    pub fn polar_with_tol(self, rel_tol: f64) -> Result<PolarForm> {
        let n = self.squared_norm();
        if !(n.abs() > rel_tol * self.euclid_sq()) || !n.is_finite() {
            return Err(Error::NullValue { squared_norm: n });
        }
        // Normalise into the sector u > 0, v > 0 by factoring out ±1 and τ.
        let (p, q, a, b) = match (self.u > 0.0, self.v > 0.0) {
            (true, true) => (1, 0, self.u, self.v),
            (false, false) => (-1, 0, -self.u, -self.v),
            (true, false) => (1, 1, self.u, -self.v),
            (false, true) => (-1, 1, -self.u, self.v),
        };
        Ok(PolarForm {
            p,
            q,
            r: a.sqrt() * b.sqrt(),
            theta: 0.5 * (a.ln() - b.ln()),
        })
    }
}

/// `z = p·τ^q·r·(cosh θ + τ sinh θ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarForm {
    pub p: i8,
    pub q: u8,
    pub r: f64,
    pub theta: f64,
}

impl PolarForm {
    pub fn reconstruct(&self) -> ParaComplex {
        let mut z = ParaComplex::exp_tau(self.theta) * self.r;
        if self.q == 1 {
            z = ParaComplex::TAU * z;
        }
        if self.p < 0 {
            z = -z;
        }
        z
    }
}

impl fmt::Debug for ParaComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for ParaComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (x, y) = (self.x(), self.y());
        if y.is_sign_negative() {
            write!(f, "{x} - {}τ", -y)
        } else {
            write!(f, "{x} + {y}τ")
        }
    }
}

impl Add for ParaComplex {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { u: self.u + o.u, v: self.v + o.v }
    }
}

impl Sub for ParaComplex {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self { u: self.u - o.u, v: self.v - o.v }
    }
}

impl Neg for ParaComplex {
    type Output = Self;
    fn neg(self) -> Self {
        Self { u: -self.u, v: -self.v }
    }
}

impl Mul for ParaComplex {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self { u: self.u * o.u, v: self.v * o.v }
    }
}

impl Mul<f64> for ParaComplex {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self { u: self.u * s, v: self.v * s }
    }
}

impl Mul<ParaComplex> for f64 {
    type Output = ParaComplex;
    fn mul(self, z: ParaComplex) -> ParaComplex {
        z * self
    }
}

impl Div<f64> for ParaComplex {
    type Output = Self;
    fn div(self, s: f64) -> Self {
        Self { u: self.u / s, v: self.v / s }
    }
}

impl AddAssign for ParaComplex {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl SubAssign for ParaComplex {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl MulAssign for ParaComplex {
    fn mul_assign(&mut self, o: Self) {
        *self = *self * o;
    }
}

impl Sum for ParaComplex {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, Add::add)
    }
}

impl Product for ParaComplex {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ONE, Mul::mul)
    }
}

/// `|∂f/∂z̄|` at an interior node of a 2-D `(x, y)` grid, by central differences.
///
/// `∂/∂z̄ = ½(∂ₓ − τ∂_y)`; the magnitude is the Euclidean size `√(Re² + Im²)`.
pub fn para_cauchy_riemann_residual(grid: &Grid, values: &[ParaComplex], node: usize) -> Result<f64> {
    if grid.dim() != 2 {
        return Err(Error::DimensionMismatch { left: grid.dim(), right: 2 });
    }
    if values.len() != grid.len() {
        return Err(Error::DimensionMismatch { left: values.len(), right: grid.len() });
    }
    grid.require_interior(node, 1)?;
    let h = grid.steps();
    let diff = |axis: usize| {
        let fwd = grid.offset(node, axis, 1).expect("interior");
        let bwd = grid.offset(node, axis, -1).expect("interior");
        (values[fwd] - values[bwd]) / (2.0 * h[axis])
    };
    let dzbar = (diff(0) - ParaComplex::TAU * diff(1)) * 0.5;
    Ok(dzbar.euclid_sq().sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Axis;

    fn close(a: ParaComplex, b: ParaComplex, tol: f64) -> bool {
        (a.x() - b.x()).abs() <= tol && (a.y() - b.y()).abs() <= tol
    }

    #[test]
    fn multiplication_rule() {
        let t = ParaComplex::TAU;
        assert_eq!(t * t, ParaComplex::ONE);
        assert_eq!(ParaComplex::new(1.0, 1.0) * ParaComplex::new(1.0, -1.0), ParaComplex::ZERO);
        let p = ParaComplex::new(3.0, 2.0) * ParaComplex::new(3.0, -2.0);
        assert!(close(p, ParaComplex::real(5.0), 1e-15));
        // (x,y)(x',y') = (xx'+yy', xy'+x'y)
        let a = ParaComplex::new(1.5, -0.25);
        let b = ParaComplex::new(-0.75, 2.0);
        let expect = ParaComplex::new(1.5 * -0.75 + -0.25 * 2.0, 1.5 * 2.0 + -0.75 * -0.25);
        assert!(close(a * b, expect, 1e-15));
    }

    #[test]
    fn squared_norm_examples() {
        assert_eq!(ParaComplex::real(2.0).squared_norm(), 4.0);
        assert_eq!(ParaComplex::new(1.0, 1.0).squared_norm(), 0.0);
        let z = ParaComplex::new(1f64.cosh(), 1f64.sinh());
        assert!((z.squared_norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn polar_examples() {
        let z = ParaComplex::new(5.0 * 0.3f64.cosh(), 5.0 * 0.3f64.sinh());
        let pf = z.polar().unwrap();
        assert_eq!((pf.p, pf.q), (1, 0));
        assert!((pf.r - 5.0).abs() < 1e-13);
        assert!((pf.theta - 0.3).abs() < 1e-13);

        assert!(matches!(ParaComplex::new(1.0, 1.0).polar(), Err(Error::NullValue { .. })));

        // -2τe^{-τ} = -2(sinh(-1) + τ cosh(-1)) = 2 sinh 1 - 2τ cosh 1
        let w = ParaComplex::new(2.0 * 1f64.sinh(), -2.0 * 1f64.cosh());
        let manual = -(ParaComplex::TAU * ParaComplex::exp_tau(-1.0) * 2.0);
        assert!(close(w, manual, 1e-14));
        let pf = w.polar().unwrap();
        assert_eq!((pf.p, pf.q), (-1, 1));
        assert!((pf.r - 2.0).abs() < 1e-13);
        assert!((pf.theta + 1.0).abs() < 1e-13);
        assert!(close(pf.reconstruct(), w, 1e-13));
    }

    #[test]
    fn near_null_is_relative() {
        let big = ParaComplex::new(1e8, 1e8 * (1.0 - 1e-14));
        assert!(big.polar_with_tol(1e-12).is_err());
        let ok = ParaComplex::new(1e8, 0.5e8);
        assert!(ok.polar_with_tol(1e-12).is_ok());
        let steep = ParaComplex::exp_tau(20.0) * 1e-6;
        let pf = steep.polar().unwrap();
        assert!((pf.theta - 20.0).abs() < 1e-12 && (pf.r - 1e-6).abs() < 1e-18);
    }

    #[test]
    fn exp_tau_values() {
        assert_eq!(ParaComplex::exp_tau(0.0), ParaComplex::ONE);
        for th in [0.1, 1.0, 5.0] {
            let p = ParaComplex::exp_tau(th) * ParaComplex::exp_tau(-th);
            assert!(close(p, ParaComplex::ONE, 1e-14));
        }
        let e = ParaComplex::exp_tau(1.0);
        assert!((e.x() - 1.5431).abs() < 5e-5);
        assert!((e.y() - 1.1752).abs() < 5e-5);
    }

    fn sample(f: impl Fn(ParaComplex) -> ParaComplex, h: f64) -> (Grid, Vec<ParaComplex>, usize) {
        let g = Grid::new(vec![Axis::centered(0.3, h, 3), Axis::centered(0.1, h, 3)]).unwrap();
        let vals = (0..g.len())
            .map(|k| {
                let c = g.coords(k);
                f(ParaComplex::new(c[0], c[1]))
            })
            .collect();
        let center = g.index(&[3, 3]);
        (g, vals, center)
    }

    #[test]
    fn cauchy_riemann_residuals() {
        let (g, v, c) = sample(|z| z, 0.1);
        assert!(para_cauchy_riemann_residual(&g, &v, c).unwrap() < 1e-12);

        let (g, v, c) = sample(|z| z.conj(), 0.1);
        assert!((para_cauchy_riemann_residual(&g, &v, c).unwrap() - 1.0).abs() < 1e-12);

        let (g, v, c) = sample(|z| z * z * z + ParaComplex::exp_tau(z.x()) * z.y(), 0.1);
        assert!(para_cauchy_riemann_residual(&g, &v, c).unwrap() > 0.1);

        assert!(matches!(
            para_cauchy_riemann_residual(&g, &v, 0),
            Err(Error::BoundaryPoint { .. })
        ));
    }

    #[test]
    fn cauchy_riemann_vanishes_for_null_separable_maps() {
        // f = exp(z) in the null basis: (e^u, e^v) is para-holomorphic.
        let f = |z: ParaComplex| {
            let (u, v) = z.null_coords();
            ParaComplex::from_null(u.exp(), v.exp())
        };
        let r1 = {
            let (g, v, c) = sample(f, 0.1);
            para_cauchy_riemann_residual(&g, &v, c).unwrap()
        };
        let r2 = {
            let (g, v, c) = sample(f, 0.05);
            para_cauchy_riemann_residual(&g, &v, c).unwrap()
        };
        assert!(r1 < 1e-12 && r2 < 1e-12, "{r1} {r2}");
    }
}
