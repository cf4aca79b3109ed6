//! `φ` as a function of `r` along a reduced trajectory with first integral `E`.
//!
//! With `t = ln r` and `L(t) = 2nt − λ′e^{2t} − 2 ln|E|`:
//! definite, `dφ/dt = sign(E) (1 + e^L)^{−1/2}`;
//! Lorentzian, `dφ/dt = (−expm1 L)^{−1/2}` on the branch `α > 0`.
//! Turning radii (`L = 0`) are handled by `t = t_turn ± w²`.

use quadrature::double_exponential;

use super::{CausalCase, SolitonParams};
use crate::error::{Error, Result};

const PIECE_TOL: f64 = 1e-13;
/// `L` above `−SNAP_TOL` at an endpoint means the endpoint is a turning radius.
const SNAP_TOL: f64 = 1e-9;
/// `L` above this at an endpoint is outside the admissible region.
const OUTSIDE_TOL: f64 = 1e-6;

struct LogForm {
    n: f64,
    lp: f64,
    log_e2: f64,
}

impl LogForm {
    fn new(p: &SolitonParams, e: f64) -> Self {
        Self { n: p.n as f64, lp: p.lambda_prime, log_e2: 2.0 * e.abs().ln() }
    }

    fn at(&self, t: f64) -> f64 {
        2.0 * self.n * t - self.lp * (2.0 * t).exp() - self.log_e2
    }

    fn slope(&self, t: f64) -> f64 {
        2.0 * self.n - 2.0 * self.lp * (2.0 * t).exp()
    }

    /// `L(t₀ + x) − L(t₀)` without cancellation.
    fn increment(&self, t0: f64, x: f64) -> f64 {
        2.0 * self.n * x - self.lp * (2.0 * t0).exp() * (2.0 * x).exp_m1()
    }

    /// Root of `L` by bisection on a bracket with a sign change.
    fn bisect(&self, mut lo: f64, mut hi: f64) -> f64 {
        let f_lo = self.at(lo);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid == lo || mid == hi {
                break;
            }
            if (self.at(mid) > 0.0) == (f_lo > 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// Radii where a Lorentzian trajectory with first integral `e` has `α = 0`, ascending.
pub fn turning_radii(params: &SolitonParams, e: f64) -> Result<Vec<f64>> {
    if params.case != CausalCase::Lorentzian {
        return Ok(Vec::new());
    }
    if !(e > 0.0) || !e.is_finite() {
        return Err(Error::InvalidCase(format!("Lorentzian first integral must be positive, got {e}")));
    }
    let lf = LogForm::new(params, e);
    let expand = |mut t: f64, step: f64| {
        let mut d = step;
        while lf.at(t) >= 0.0 {
            t += d;
            d *= 2.0;
        }
        t
    };
    if params.lambda_prime > 0.0 {
        let t_star = 0.5 * (lf.n / lf.lp).ln();
        let peak = lf.at(t_star);
        if peak < 0.0 {
            return Ok(Vec::new());
        }
        if peak == 0.0 {
            return Ok(vec![t_star.exp()]);
        }
        let lo = expand(t_star - 1.0, -1.0);
        let hi = expand(t_star + 1.0, 1.0);
        Ok(vec![lf.bisect(lo, t_star).exp(), lf.bisect(t_star, hi).exp()])
    } else {
        // L is increasing: a single root.
        let guess = lf.log_e2 / (2.0 * lf.n);
        let lo = expand(guess - 1.0, -1.0);
        let mut hi = guess + 1.0;
        while lf.at(hi) <= 0.0 {
            hi += 1.0;
        }
        Ok(vec![lf.bisect(lo, hi).exp()])
    }
}

fn integrate_piece(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    double_exponential::integrate(f, a, b, PIECE_TOL).integral
}

/// `φ(r_to) − φ(r_from)` along the trajectory with first integral `e`.
///
/// Lorentzian results are for the branch `α > 0`; multiply by `sign(α)`
/// for the other branch. Endpoints within `1e-9` of a turning radius (in
/// `L`) are snapped onto it.
pub fn phi_quadrature(params: &SolitonParams, e: f64, r_from: f64, r_to: f64) -> Result<f64> {
    for r in [r_from, r_to] {
        if !(r > 0.0) {
            return Err(Error::NonpositiveRadius(r));
        }
    }
    if e == 0.0 || !e.is_finite() {
        if params.case == CausalCase::Definite && e == 0.0 {
            // α ≡ 0: radial line, φ constant.
            return Ok(0.0);
        }
        return Err(Error::InvalidCase(format!("first integral must be finite and nonzero, got {e}")));
    }
    if r_from == r_to {
        return Ok(0.0);
    }
    let (orient, ta, tb) = if r_from < r_to {
        (1.0, r_from.ln(), r_to.ln())
    } else {
        (-1.0, r_to.ln(), r_from.ln())
    };
    let lf = LogForm::new(params, e);
    let value = match params.case {
        CausalCase::Definite => {
            let sign = e.signum();
            let g = |t: f64| {
                let l = lf.at(t);
                let log1p_exp = if l > 30.0 { l + (-l).exp().ln_1p() } else { l.exp().ln_1p() };
                (-0.5 * log1p_exp).exp()
            };
            sign * chunks(ta, tb).map(|(a, b)| integrate_piece(g, a, b)).sum::<f64>()
        }
        CausalCase::Lorentzian => lorentzian(&lf, ta, tb)?,
    };
    Ok(orient * value)
}

fn chunks(a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> {
    let k = ((b - a).ceil() as usize).max(1);
    let h = (b - a) / k as f64;
    (0..k).map(move |i| (a + i as f64 * h, if i + 1 == k { b } else { a + (i + 1) as f64 * h }))
}

fn lorentzian(lf: &LogForm, mut ta: f64, mut tb: f64) -> Result<f64> {
    let snap = |t: &mut f64| -> Result<bool> {
        let l = lf.at(*t);
        if l > OUTSIDE_TOL {
            return Err(Error::IntegrandSingular(format!("radius {} lies outside the admissible region", t.exp())));
        }
        if l < -SNAP_TOL {
            return Ok(false);
        }
        for _ in 0..8 {
            let s = lf.slope(*t);
            if s == 0.0 {
                break;
            }
            *t -= lf.at(*t) / s;
        }
        Ok(true)
    };
    let turn_a = snap(&mut ta)?;
    let turn_b = snap(&mut tb)?;
    // L is concave for λ′ > 0: an interior maximum above zero cuts the interval.
    if lf.lp > 0.0 {
        let t_star = 0.5 * (lf.n / lf.lp).ln();
        if t_star > ta && t_star < tb && lf.at(t_star) > 0.0 {
            return Err(Error::IntegrandSingular("interval crosses a forbidden band of radii".into()));
        }
    }
    for (turn, t) in [(turn_a, ta), (turn_b, tb)] {
        if turn && lf.slope(t).abs() < 1e-8 {
            return Err(Error::IntegrandSingular(format!(
                "double turning point at r = {}: phi diverges logarithmically",
                t.exp()
            )));
        }
    }
    if tb <= ta {
        return Ok(0.0);
    }
    let g = |t: f64| 1.0 / (-lf.at(t).exp_m1()).max(f64::MIN_POSITIVE).sqrt();
    let width = tb - ta;
    let edge = if turn_a && turn_b { 0.5 * width.min(2.0) } else { width.min(1.0) };
    let mut total = 0.0;
    let mut lo = ta;
    let mut hi = tb;
    if turn_a {
        total += turning_piece(lf, ta, edge, 1.0);
        lo = ta + edge;
    }
    if turn_b {
        total += turning_piece(lf, tb, edge, -1.0);
        hi = tb - edge;
    }
    if hi > lo {
        total += chunks(lo, hi).map(|(a, b)| integrate_piece(g, a, b)).sum::<f64>();
    }
    Ok(total)
}

/// `∫ g dt` over `[t₀, t₀ + δ]` (`side = 1`) or `[t₀ − δ, t₀]` (`side = −1`) with `L(t₀) = 0`.
fn turning_piece(lf: &LogForm, t0: f64, delta: f64, side: f64) -> f64 {
    let limit = 2.0 / (-side * lf.slope(t0)).abs().sqrt();
    let h = |w: f64| {
        if w == 0.0 {
            return limit;
        }
        let dl = lf.increment(t0, side * w * w);
        let rad = -dl.exp_m1();
        if rad <= 0.0 {
            limit
        } else {
            2.0 * w / rad.sqrt()
        }
    };
    integrate_piece(h, 0.0, delta.sqrt())
}

#[cfg(test)]
mod tests {
    use super::super::{first_integral, integrate, IntegrateOptions, SolitonState};
    use super::*;

    #[test]
    fn definite_flat_closed_form() {
        // λ′ = 0, n = 2, E = 1: dφ/dt = (1 + r⁴)^{−1/2}·r… integrate against a fine trapezoid oracle.
        let p = SolitonParams::new(2, 0.0, CausalCase::Definite).unwrap();
        let got = phi_quadrature(&p, 1.0, 0.5, 2.0).unwrap();
        let m = 200_000;
        let (a, b) = (0.5f64.ln(), 2f64.ln());
        let h = (b - a) / m as f64;
        let f = |t: f64| 1.0 / (1.0 + (4.0 * t).exp()).sqrt();
        let oracle: f64 = (0..=m)
            .map(|i| {
                let w = if i == 0 || i == m { 0.5 } else { 1.0 };
                w * f(a + i as f64 * h)
            })
            .sum::<f64>()
            * h;
        assert!((got - oracle).abs() < 1e-9, "{got} vs {oracle}");
        assert!((phi_quadrature(&p, 1.0, 2.0, 0.5).unwrap() + got).abs() < 1e-14);
        assert!((phi_quadrature(&p, -1.0, 0.5, 2.0).unwrap() + got).abs() < 1e-14);
    }

    #[test]
    fn definite_matches_trajectory() {
        let p = SolitonParams::new(2, 0.0, CausalCase::Definite).unwrap();
        // E = r² sinh α = 1 at r = 1.
        let init = SolitonState::new(1.0, 1f64.asinh(), 0.0);
        assert!((first_integral(&init, &p).unwrap() - 1.0).abs() < 1e-15);
        let t = integrate(init, &p, 3.0, &IntegrateOptions::default()).unwrap();
        for st in t.states.iter().step_by(7) {
            let q = phi_quadrature(&p, 1.0, 1.0, st.r).unwrap();
            assert!((q - st.phi).abs() < 1e-6, "r={} {} vs {}", st.r, q, st.phi);
        }
    }

    #[test]
    fn definite_small_radius_behaviour() {
        // φ − ln r tends to a constant as r → 0.
        let p = SolitonParams::new(2, 1.0, CausalCase::Definite).unwrap();
        let d = |r: f64| phi_quadrature(&p, 0.5, r, 1.0).unwrap() + r.ln();
        assert!((d(1e-4) - d(1e-3)).abs() < 1e-6);
    }

    #[test]
    fn lorentzian_from_turning_point_matches_trajectory() {
        let p = SolitonParams::new(2, 1.0, CausalCase::Lorentzian).unwrap();
        let r0 = p.critical_radius().unwrap();
        let init = SolitonState::new(1.5 * r0, 0.0, 0.0);
        let e = first_integral(&init, &p).unwrap();
        let radii = turning_radii(&p, e).unwrap();
        assert_eq!(radii.len(), 2);
        assert!((radii[1] - 1.5 * r0).abs() < 1e-12);
        let t = integrate(init, &p, 1.5, &IntegrateOptions::default()).unwrap();
        for st in t.states.iter().skip(1).step_by(5) {
            assert!(st.alpha > 0.0);
            let q = phi_quadrature(&p, e, init.r, st.r).unwrap();
            assert!((q - st.phi).abs() < 1e-6, "r={} {} vs {}", st.r, q, st.phi);
        }
    }

    #[test]
    fn lorentzian_between_turning_points_matches_half_orbit() {
        // Inner subcritical orbit: from the outer turning radius down to r_min the
        // branch has α < 0, so φ advances by −(quadrature) while r decreases.
        let p = SolitonParams::new(2, 1.0, CausalCase::Lorentzian).unwrap();
        let init = SolitonState::new(0.8, 0.0, 0.0);
        let e = first_integral(&init, &p).unwrap();
        let t = integrate(init, &p, 0.6, &IntegrateOptions::default()).unwrap();
        let end = t.states.last().unwrap();
        assert!(end.alpha < 0.0 && end.r < init.r);
        let q = phi_quadrature(&p, e, init.r, end.r).unwrap();
        // r decreases, so the quadrature is negative; α < 0 flips the sign.
        assert!((-q - end.phi).abs() < 1e-6, "{} vs {}", -q, end.phi);
    }

    #[test]
    fn rejects_bad_inputs() {
        let p = SolitonParams::new(2, 1.0, CausalCase::Lorentzian).unwrap();
        assert!(matches!(phi_quadrature(&p, 0.1, 0.0, 1.0), Err(Error::NonpositiveRadius(_))));
        // E below radial factor at r = 1: outside.
        let inside = p.radial_factor(1.0);
        assert!(matches!(phi_quadrature(&p, 0.5 * inside, 1.0, 1.1), Err(Error::IntegrandSingular(_))));
        let e0 = super::super::energy_threshold(&p).unwrap();
        let r0 = p.critical_radius().unwrap();
        assert!(matches!(phi_quadrature(&p, e0, r0, 2.0 * r0), Err(Error::IntegrandSingular(_))));
        // E slightly below E₀ forbids the band around r₀.
        let radii = turning_radii(&p, 0.9 * e0).unwrap();
        assert!(phi_quadrature(&p, 0.9 * e0, 0.5 * radii[0], 2.0 * radii[1]).is_err());
    }
}
