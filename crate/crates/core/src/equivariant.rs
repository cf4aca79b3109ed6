//! `SO(n)`-equivariant immersions `F(s, σ) = γ(s)·σ`, the minimal level
//! families `Re γⁿ = C`, `Im γⁿ = C`, and light-cone crossing diagnostics.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::SampledImmersion;
use crate::grid::{Axis, Grid};
use crate::linalg::DVector;
use crate::paracomplex::ParaComplex;

/// Bisection tolerance on the curve parameter.
pub const CROSSING_TOL: f64 = 1e-10;
/// `|d/ds ⟨γ,γ⟩|` below this (relative to `|γ|²`) marks a tangential contact.
pub const TANGENTIAL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileFamily {
    Explicit,
    ReLevel,
    ImLevel,
    PolarCosh,
    PolarSinh,
    Soliton,
}

/// Which component of `γⁿ` is held fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelPart {
    Re,
    Im,
}

impl LevelPart {
    pub fn of(self, z: ParaComplex) -> f64 {
        match self {
            Self::Re => z.x(),
            Self::Im => z.y(),
        }
    }

    pub fn other(self) -> Self {
        match self {
            Self::Re => Self::Im,
            Self::Im => Self::Re,
        }
    }
}

/// Sign and quadrant of the polar form `γ = p τ^q r e^{τφ}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolarBranch {
    pub p: i8,
    pub q: u8,
}

impl Default for PolarBranch {
    fn default() -> Self {
        Self { p: 1, q: 0 }
    }
}

type Generator = Arc<dyn Fn(f64) -> ParaComplex + Send + Sync>;

/// A planar profile `γ(s) ∈ D` sampled on a uniform axis.
#[derive(Clone)]
pub struct ProfileCurve {
    axis: Axis,
    values: Vec<ParaComplex>,
    family: ProfileFamily,
    generator: Option<Generator>,
}

impl fmt::Debug for ProfileCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProfileCurve")
            .field("axis", &self.axis)
            .field("family", &self.family)
            .field("samples", &self.values.len())
            .finish()
    }
}

impl ProfileCurve {
    /// Samples a closed-form curve; the closure is kept for crossing refinement.
    pub fn from_fn<F>(axis: Axis, family: ProfileFamily, f: F) -> Result<Self>
    where
        F: Fn(f64) -> ParaComplex + Send + Sync + 'static,
    {
        let values = (0..axis.count).map(|i| f(axis.coord(i))).collect();
        Self::check(Self { axis, values, family, generator: Some(Arc::new(f)) })
    }

    /// Wraps precomputed samples on `axis`.
    pub fn from_samples(axis: Axis, family: ProfileFamily, values: Vec<ParaComplex>) -> Result<Self> {
        if values.len() != axis.count {
            return Err(Error::DimensionMismatch { left: values.len(), right: axis.count });
        }
        Self::check(Self { axis, values, family, generator: None })
    }

    fn check(self) -> Result<Self> {
        Grid::new(vec![self.axis])?;
        if let Some(i) = self.values.iter().position(|z| !z.is_finite() || z.euclid_sq() == 0.0) {
            return Err(Error::InvalidRange(format!(
                "profile must be finite and nonzero, fails at s = {}",
                self.axis.coord(i)
            )));
        }
        Ok(self)
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    pub fn family(&self) -> ProfileFamily {
        self.family
    }

    pub fn values(&self) -> &[ParaComplex] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `(s, γ(s))` pairs.
    pub fn samples(&self) -> impl Iterator<Item = (f64, ParaComplex)> + '_ {
        self.values.iter().enumerate().map(|(i, &z)| (self.axis.coord(i), z))
    }

    /// Evaluates the generating closure, if the curve has one.
    pub fn eval(&self, s: f64) -> Option<ParaComplex> {
        self.generator.as_ref().map(|g| g(s))
    }

    /// Central-difference `γ̇` at sample `i`.
    pub fn derivative(&self, i: usize) -> Result<ParaComplex> {
        let g = Grid::new(vec![self.axis])?;
        let (Some(p), Some(m)) = (g.offset(i, 0, 1), g.offset(i, 0, -1)) else {
            return Err(Error::BoundaryPoint { node: vec![i] });
        };
        Ok((self.values[p] - self.values[m]) * (0.5 / self.axis.step()))
    }

    /// `γ ↦ τγ`.
    pub fn tau_reflect(&self) -> Self {
        let generator = self.generator.clone().map(|g| -> Generator { Arc::new(move |s| ParaComplex::TAU * g(s)) });
        Self {
            axis: self.axis,
            values: self.values.iter().map(|&z| ParaComplex::TAU * z).collect(),
            family: self.family,
            generator,
        }
    }

    /// Largest `|part(γⁿ) − c|` over the samples.
    pub fn level_error(&self, n: u32, part: LevelPart, c: f64) -> f64 {
        self.values
            .iter()
            .map(|z| (part.of(z.powi(n as i32)) - c).abs())
            .fold(0.0, f64::max)
    }
}

/// `γ̇ γ^{n−1}` at sample `i`; proportional to the para-holomorphic volume of the lift.
pub fn equivariant_volume(curve: &ProfileCurve, n: u32, i: usize) -> Result<ParaComplex> {
    Ok(curve.derivative(i)? * curve.values()[i].powi(n as i32 - 1))
}

/// Point of `S^{n−1}` in hyperspherical angles `(a₁, …, a_{n−1})`.
pub fn sphere_point(angles: &[f64]) -> Vec<f64> {
    let n = angles.len() + 1;
    let mut out = Vec::with_capacity(n);
    let mut prefix = 1.0;
    for &a in angles {
        out.push(prefix * a.cos());
        prefix *= a.sin();
    }
    out.push(prefix);
    out
}

/// Default chart axes for `S^{n−1}`: polar angles on half-cell-offset grids
/// (poles excluded), the last angle periodic.
pub fn sphere_axes(n: usize, count: usize) -> Result<Vec<Axis>> {
    if n < 2 {
        return Err(Error::InvalidCase(format!("sphere factor needs n >= 2, got {n}")));
    }
    let pi = std::f64::consts::PI;
    let half = 0.5 * pi / count as f64;
    let mut axes: Vec<Axis> = (0..n - 2).map(|_| Axis::new(half, pi - half, count)).collect();
    axes.push(Axis::periodic(0.0, 2.0 * pi, 2 * count));
    Ok(axes)
}

/// `F(s, σ) = γ(s)·σ` over the profile axis followed by `n − 1` sphere axes.
pub fn lift(curve: &ProfileCurve, n: usize, sphere: Vec<Axis>) -> Result<SampledImmersion> {
    if n < 2 {
        return Err(Error::InvalidCase(format!("equivariant lift needs n >= 2, got {n}")));
    }
    if sphere.len() != n - 1 {
        return Err(Error::DimensionMismatch { left: sphere.len(), right: n - 1 });
    }
    let mut axes = vec![curve.axis()];
    axes.extend(sphere);
    let grid = Grid::new(axes)?;
    let values = curve.values().to_vec();
    let outer = curve.axis().count;
    let values: Vec<DVector> = (0..grid.len())
        .map(|k| {
            let mi = grid.multi_index(k);
            debug_assert!(mi[0] < outer);
            let angles: Vec<f64> = (1..n).map(|a| grid.axes()[a].coord(mi[a])).collect();
            let g = values[mi[0]];
            DVector::new(sphere_point(&angles).into_iter().map(|x| g * x).collect())
        })
        .collect();
    SampledImmersion::new(grid, values)
}

fn check_level_args(n: u32, c: f64) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidCase(format!("level families need n >= 2, got {n}")));
    }
    if c == 0.0 || !c.is_finite() {
        return Err(Error::InvalidCase(format!("level constant must be finite and nonzero, got {c}")));
    }
    Ok(())
}

/// Closed-form polar solution of `part(γⁿ) = c` on the given branch, sampled over `φ`.
///
/// With `γ = p τ^q r e^{τφ}`, `rⁿ = c / (pⁿ h(nφ))` where `h` is `cosh` when
/// `nq` is even for the real part (odd for the τ-part) and `sinh` otherwise.
pub fn level_curve(n: u32, c: f64, part: LevelPart, branch: PolarBranch, phi: Axis) -> Result<ProfileCurve> {
    check_level_args(n, c)?;
    if branch.p.abs() != 1 || branch.q > 1 {
        return Err(Error::InvalidCase(format!("invalid polar branch {branch:?}")));
    }
    let even = (n * branch.q as u32).is_multiple_of(2);
    let use_cosh = matches!((part, even), (LevelPart::Re, true) | (LevelPart::Im, false));
    let sign = (branch.p as f64).powi(n as i32);
    let hyp = move |x: f64| if use_cosh { x.cosh() } else { x.sinh() };
    for i in 0..phi.count {
        let f = phi.coord(i);
        let rn = c / (sign * hyp(n as f64 * f));
        if !(rn > 0.0 && rn.is_finite()) {
            return Err(Error::InvalidRange(format!(
                "no real radius at phi = {f} on this branch (r^n = {rn})"
            )));
        }
    }
    let unit = ParaComplex::TAU.powi(branch.q as i32) * branch.p as f64;
    let family = if use_cosh { ProfileFamily::PolarCosh } else { ProfileFamily::PolarSinh };
    ProfileCurve::from_fn(phi, family, move |f| {
        let r = (c / (sign * hyp(n as f64 * f))).powf(1.0 / n as f64);
        unit * ParaComplex::exp_tau(f) * r
    })
}

/// The `φ → ±∞` limit `(2c)^{1/n}/2 · (1, ±1)` of the `cosh` branch with `p = 1, q = 0`.
pub fn cosh_branch_limit(n: u32, c: f64, positive_end: bool) -> ParaComplex {
    let a = (2.0 * c).powf(1.0 / n as f64) / 2.0;
    ParaComplex::new(a, if positive_end { a } else { -a })
}

/// Level sets through the light cone, parametrized in null coordinates
/// `u = x + y`, `v = x − y` where `Re γⁿ = (uⁿ + vⁿ)/2`, `Im γⁿ = (uⁿ − vⁿ)/2`.
///
/// * `n = 2`, real part: `u² + v² = 2c`, a closed curve with `t` periodic over `[0, 2π)`.
/// * `n = 2`, τ-part: the branch `u² − v² = 2c` with `u > 0`.
/// * `n = 3`: one connected branch, parametrized by `d = u − v` (τ-part uses `v ↦ −v`).
pub fn null_level_curve(n: u32, c: f64, part: LevelPart, t: Axis) -> Result<ProfileCurve> {
    check_level_args(n, c)?;
    let make = |f: Box<dyn Fn(f64) -> (f64, f64) + Send + Sync>, family| {
        ProfileCurve::from_fn(t, family, move |s| {
            let (u, v) = f(s);
            ParaComplex::from_null(u, v)
        })
    };
    let family = match part {
        LevelPart::Re => ProfileFamily::ReLevel,
        LevelPart::Im => ProfileFamily::ImLevel,
    };
    match (n, part) {
        (2, LevelPart::Re) => {
            if c < 0.0 {
                return Err(Error::InvalidRange("u^2 + v^2 = 2c needs c > 0".into()));
            }
            let a = (2.0 * c).sqrt();
            make(Box::new(move |s| (a * s.cos(), a * s.sin())), family)
        }
        (2, LevelPart::Im) => {
            let a = (2.0 * c.abs()).sqrt();
            let flip = c < 0.0;
            make(
                Box::new(move |s| {
                    let (u, v) = (a * s.cosh(), a * s.sinh());
                    if flip { (v, u) } else { (u, v) }
                }),
                family,
            )
        }
        (3, _) => {
            let reflect = part == LevelPart::Im;
            make(
                Box::new(move |d| {
                    // u + v = σ solves σ³ + 3d²σ − 8c = 0 (one real root).
                    // Cancellation-free Cardano root, odd in c, then one Newton polish.
                    let ca = c.abs();
                    let w = (4.0 * ca + (16.0 * ca * ca + d.powi(6)).sqrt()).cbrt();
                    let mut sigma = 8.0 * c / (w * w + d * d + d.powi(4) / (w * w));
                    sigma -= (sigma.powi(3) + 3.0 * d * d * sigma - 8.0 * c) / (3.0 * sigma * sigma + 3.0 * d * d);
                    let (u, v) = ((sigma + d) / 2.0, (sigma - d) / 2.0);
                    if reflect { (u, -v) } else { (u, v) }
                }),
                family,
            )
        }
        _ => Err(Error::InvalidCase(format!("no null-coordinate parametrization for n = {n}"))),
    }
}

/// Sign changes of `⟨γ, γ⟩` along a profile.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Crossings {
    /// Transverse crossings, refined to [`CROSSING_TOL`] in `s` when the curve has a generator.
    pub transverse: Vec<f64>,
    /// Crossings where `d/ds ⟨γ,γ⟩` (nearly) vanishes.
    pub tangential: Vec<f64>,
}

impl Crossings {
    pub fn count(&self) -> usize {
        self.transverse.len() + self.tangential.len()
    }
}

pub fn lightcone_crossings(curve: &ProfileCurve) -> Crossings {
    let axis = curve.axis();
    let n = curve.len();
    let norm = |z: ParaComplex| z.squared_norm();
    let pairs: Vec<(usize, usize)> = if axis.periodic {
        (0..n).map(|i| (i, (i + 1) % n)).collect()
    } else {
        (0..n - 1).map(|i| (i, i + 1)).collect()
    };
    // Skip exact zeros by remembering the last nonzero sign.
    let mut out = Crossings::default();
    let signs: Vec<f64> = curve.values().iter().map(|&z| norm(z).signum() * (norm(z) != 0.0) as i32 as f64).collect();
    let start = signs.iter().position(|&s| s != 0.0);
    let Some(start) = start else { return out };
    let mut last = (start, signs[start]);
    let order: Vec<(usize, usize)> = if axis.periodic {
        pairs.iter().cycle().skip(start).take(n).copied().collect()
    } else {
        pairs[start..].to_vec()
    };
    for (_, j) in order {
        if signs[j] == 0.0 {
            continue;
        }
        if signs[j] != last.1 {
            let (i, _) = last;
            let mut a = axis.coord(i);
            let mut b = axis.coord(j);
            if axis.periodic && j < i {
                b += axis.max - axis.min;
            }
            let s = match curve.generator.as_ref() {
                Some(g) => {
                    let sa = norm(g(a)).signum();
                    while b - a > CROSSING_TOL {
                        let mid = 0.5 * (a + b);
                        if norm(g(mid)).signum() == sa {
                            a = mid;
                        } else {
                            b = mid;
                        }
                    }
                    0.5 * (a + b)
                }
                None => {
                    let (na, nb) = (norm(curve.values()[i]), norm(curve.values()[j]));
                    a + (b - a) * na / (na - nb)
                }
            };
            let slope = match curve.generator.as_ref() {
                Some(g) => {
                    let d = 1e-6;
                    (norm(g(s + d)) - norm(g(s - d))) / (2.0 * d) / g(s).euclid_sq().max(f64::MIN_POSITIVE)
                }
                None => {
                    let (za, zb) = (curve.values()[i], curve.values()[j]);
                    (norm(zb) - norm(za)) / (b - a) / (0.5 * (za.euclid_sq() + zb.euclid_sq()))
                }
            };
            let s = if axis.periodic && s >= axis.max { s - (axis.max - axis.min) } else { s };
            if slope.abs() < TANGENTIAL_TOL {
                out.tangential.push(s);
            } else {
                out.transverse.push(s);
            }
        }
        last = (j, signs[j]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lagrangian::angle_field;
    use crate::linalg::LagrangianAngle;

    const TAU2: f64 = std::f64::consts::TAU;

    #[test]
    fn level_curve_membership() {
        let phi = Axis::new(-3.0, 3.0, 121);
        let circle = level_curve(2, 1.0, LevelPart::Re, PolarBranch::default(), phi).unwrap();
        for (_, z) in circle.samples() {
            assert!((z.x().powi(2) + z.y().powi(2) - 1.0).abs() < 1e-12);
        }
        let pos = Axis::new(0.1, 3.0, 60);
        let hyp = level_curve(2, 1.0, LevelPart::Im, PolarBranch::default(), pos).unwrap();
        for (_, z) in hyp.samples() {
            assert!((2.0 * z.x() * z.y() - 1.0).abs() < 1e-12);
        }
        let cubic = level_curve(3, 1.0, LevelPart::Re, PolarBranch::default(), phi).unwrap();
        for (_, z) in cubic.samples() {
            assert!((z.x().powi(3) + 3.0 * z.x() * z.y().powi(2) - 1.0).abs() < 1e-11);
        }
        assert!(matches!(
            level_curve(2, 1.0, LevelPart::Im, PolarBranch::default(), phi),
            Err(Error::InvalidRange(_))
        ));
        // Negative φ on the sinh branch works with p = −1 for odd n.
        let neg = Axis::new(-3.0, -0.1, 30);
        let c = level_curve(3, 1.0, LevelPart::Im, PolarBranch { p: -1, q: 0 }, neg).unwrap();
        assert!(c.level_error(3, LevelPart::Im, 1.0) < 1e-11);
    }

    #[test]
    fn crossing_counts() {
        let circle = null_level_curve(2, 0.5, LevelPart::Re, Axis::periodic(0.0, TAU2, 400)).unwrap();
        assert!(circle.level_error(2, LevelPart::Re, 0.5) < 1e-12);
        let c = lightcone_crossings(&circle);
        assert_eq!((c.transverse.len(), c.tangential.len()), (4, 0));
        for s in &c.transverse {
            assert!(circle.eval(*s).unwrap().squared_norm().abs() < 1e-9);
        }

        let hyp = null_level_curve(2, 0.5, LevelPart::Im, Axis::new(-3.0, 3.0, 200)).unwrap();
        assert!(hyp.level_error(2, LevelPart::Im, 0.5) < 1e-11);
        assert_eq!(lightcone_crossings(&hyp).count(), 1);

        let cubic = null_level_curve(3, 0.5, LevelPart::Re, Axis::new(-6.0, 6.0, 300)).unwrap();
        assert!(cubic.level_error(3, LevelPart::Re, 0.5) < 1e-10);
        assert_eq!(lightcone_crossings(&cubic).count(), 2);
    }

    #[test]
    fn sampled_crossings_without_generator() {
        let axis = Axis::periodic(0.0, TAU2, 400);
        let vals: Vec<_> = (0..400).map(|i| ParaComplex::new(axis.coord(i).cos(), axis.coord(i).sin())).collect();
        let c = ProfileCurve::from_samples(axis, ProfileFamily::Explicit, vals).unwrap();
        let x = lightcone_crossings(&c);
        assert_eq!(x.count(), 4);
        let quarter = std::f64::consts::FRAC_PI_4;
        for s in x.transverse {
            let k = (s / quarter).round();
            assert!((s - k * quarter).abs() < 1e-3);
        }
    }

    #[test]
    fn volume_examples() {
        let axis = Axis::new(-1.0, 1.0, 2001);
        let curve = ProfileCurve::from_fn(axis, ProfileFamily::Explicit, ParaComplex::exp_tau).unwrap();
        let i = 1300;
        let s = axis.coord(i);
        let v = equivariant_volume(&curve, 2, i).unwrap();
        let expect = ParaComplex::TAU * ParaComplex::exp_tau(2.0 * s);
        assert!((v - expect).euclid_sq().sqrt() < 1e-6);

        let circ = ProfileCurve::from_fn(axis, ProfileFamily::Explicit, |t| ParaComplex::new(t.cos(), t.sin())).unwrap();
        let v = equivariant_volume(&circ, 2, i).unwrap();
        assert!((v - ParaComplex::new(0.0, (2.0 * s).cos())).euclid_sq().sqrt() < 1e-6);

        let real = ProfileCurve::from_fn(axis, ProfileFamily::Explicit, |t| ParaComplex::real(2.0 + t)).unwrap();
        let a = LagrangianAngle::of(equivariant_volume(&real, 3, i).unwrap()).unwrap();
        assert_eq!((a.q, a.theta), (0, 0.0));
    }

    #[test]
    fn lift_angle_matches_volume() {
        let axis = Axis::new(0.2, 1.2, 41);
        let curve = ProfileCurve::from_fn(axis, ProfileFamily::Explicit, |t| ParaComplex::new(t, 1.0 / (2.0 * t))).unwrap();
        for n in [2, 3] {
            let imm = lift(&curve, n, sphere_axes(n, 12).unwrap()).unwrap();
            let field = angle_field(&imm, 1e-3).unwrap();
            assert!(field.regular_nodes().count() > 0);
            for (k, a) in field.regular_nodes() {
                let i = imm.grid().multi_index(k)[0];
                let b = LagrangianAngle::of(equivariant_volume(&curve, n as u32, i).unwrap()).unwrap();
                assert_eq!(a.q, b.q);
                assert!((a.theta - b.theta).abs() < 1e-6, "{} vs {}", a.theta, b.theta);
            }
        }
    }

    #[test]
    fn torus_lift_degenerates_on_null_lines() {
        let axis = Axis::periodic(0.0, TAU2, 80);
        let curve = ProfileCurve::from_fn(axis, ProfileFamily::Explicit, |t| ParaComplex::new(t.cos(), t.sin())).unwrap();
        let imm = lift(&curve, 2, sphere_axes(2, 8).unwrap()).unwrap();
        let field = angle_field(&imm, 1e-3).unwrap();
        // t = π/4 + kπ/2 are nodes (80 divisible by 8): exactly four degenerate circles.
        assert_eq!(field.degenerate_count(), 4 * 16);
        assert_eq!(field.region_count, 4);
    }

    #[test]
    fn tau_symmetry_parity() {
        let phi = Axis::new(-2.0, 2.0, 41);
        let c2 = level_curve(2, 1.0, LevelPart::Re, PolarBranch::default(), phi).unwrap().tau_reflect();
        assert!(c2.level_error(2, LevelPart::Re, 1.0) < 1e-12);
        let c3 = level_curve(3, 1.0, LevelPart::Re, PolarBranch::default(), phi).unwrap().tau_reflect();
        assert!(c3.level_error(3, LevelPart::Im, 1.0) < 1e-11);
        assert!(c3.level_error(3, LevelPart::Re, 1.0) > 0.1);
    }

    #[test]
    fn cosh_branch_endpoints() {
        for n in [2, 3] {
            let ends = Axis::new(-12.0, 12.0, 5);
            let c = level_curve(n, 1.0, LevelPart::Re, PolarBranch::default(), ends).unwrap();
            let first = c.values()[0];
            let last = c.values()[4];
            assert!((first - cosh_branch_limit(n, 1.0, false)).euclid_sq().sqrt() < 1e-4);
            assert!((last - cosh_branch_limit(n, 1.0, true)).euclid_sq().sqrt() < 1e-4);
        }
    }
}
