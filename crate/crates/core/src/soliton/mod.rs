//! Equivariant self-similar solutions `H + λF^⊥ = 0`: the reduced `(r, α, φ)`
//! systems, their first integrals, integration, classification, the `φ(r)`
//! quadrature, and validation of reconstructed immersions.

mod ambient;
mod integrator;
mod phi;

pub use ambient::{ambient_residual, fit_lambda, hyperbola_solution, AmbientResidual, HyperbolaBranch};
pub use integrator::{integrate, integrate_both, IntegrateOptions, StopReason, Trajectory, DRIFT_GATE};
pub use phi::{phi_quadrature, turning_radii};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::paracomplex::ParaComplex;

/// Causal character of the induced metric on the lifted immersion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CausalCase {
    Definite,
    Lorentzian,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolitonParams {
    pub n: u32,
    pub lambda_prime: f64,
    pub case: CausalCase,
}

impl SolitonParams {
    pub fn new(n: u32, lambda_prime: f64, case: CausalCase) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidCase(format!("dimension n must be >= 2, got {n}")));
        }
        if !lambda_prime.is_finite() {
            return Err(Error::InvalidCase(format!("lambda' must be finite, got {lambda_prime}")));
        }
        Ok(Self { n, lambda_prime, case })
    }

    /// `rⁿ e^{−λ′r²/2}`, the radial factor of the first integral.
    pub fn radial_factor(&self, r: f64) -> f64 {
        (self.n as f64 * r.ln() - 0.5 * self.lambda_prime * r * r).exp()
    }

    /// `√(n/λ′)` for the Lorentzian case with `λ′ > 0`.
    pub fn critical_radius(&self) -> Result<f64> {
        if self.case != CausalCase::Lorentzian || self.lambda_prime <= 0.0 {
            return Err(Error::InvalidCase("critical point needs the Lorentzian case with lambda' > 0".into()));
        }
        Ok((self.n as f64 / self.lambda_prime).sqrt())
    }

    pub fn critical_point(&self) -> Result<SolitonState> {
        Ok(SolitonState { r: self.critical_radius()?, alpha: 0.0, phi: 0.0 })
    }
}

/// Polar radius `r`, `α = θ − φ` and polar angle `φ` of the profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolitonState {
    pub r: f64,
    pub alpha: f64,
    pub phi: f64,
}

impl SolitonState {
    pub fn new(r: f64, alpha: f64, phi: f64) -> Self {
        Self { r, alpha, phi }
    }

    /// Profile point `τ^q r e^{τφ}`.
    pub fn position(&self, q: u8) -> ParaComplex {
        ParaComplex::TAU.powi(q as i32) * ParaComplex::exp_tau(self.phi) * self.r
    }

    /// Unit tangent `τ^{q′} e^{τ(α+φ)}`, with `q′ = q` (definite) or `1 − q` (Lorentzian).
    pub fn velocity(&self, q: u8, case: CausalCase) -> ParaComplex {
        let qp = match case {
            CausalCase::Definite => q,
            CausalCase::Lorentzian => 1 - q,
        };
        ParaComplex::TAU.powi(qp as i32) * ParaComplex::exp_tau(self.alpha + self.phi)
    }
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 {
        Ok(())
    } else {
        Err(Error::NonpositiveRadius(r))
    }
}

/// Unchecked field; stage states of the integrator may leave `r > 0`.
pub(crate) fn field(y: [f64; 3], p: &SolitonParams) -> [f64; 3] {
    let [r, a, _] = y;
    let drift = -(p.n as f64) / r + p.lambda_prime * r;
    let (ch, sh) = (a.cosh(), a.sinh());
    match p.case {
        CausalCase::Definite => [ch, drift * sh, sh / r],
        CausalCase::Lorentzian => [sh, drift * ch, ch / r],
    }
}

/// `(dr/ds, dα/ds, dφ/ds)`.
pub fn vector_field(state: &SolitonState, params: &SolitonParams) -> Result<[f64; 3]> {
    check_radius(state.r)?;
    Ok(field([state.r, state.alpha, state.phi], params))
}

/// `rⁿ e^{−λ′r²/2} sinh α` (definite) or `… cosh α` (Lorentzian).
pub fn first_integral(state: &SolitonState, params: &SolitonParams) -> Result<f64> {
    check_radius(state.r)?;
    let hyp = match params.case {
        CausalCase::Definite => state.alpha.sinh(),
        CausalCase::Lorentzian => state.alpha.cosh(),
    };
    Ok(params.radial_factor(state.r) * hyp)
}

/// Energy of the critical point, `(n/λ′)^{n/2} e^{−n/2}`.
pub fn energy_threshold(params: &SolitonParams) -> Result<f64> {
    first_integral(&params.critical_point()?, params)
}

/// The same threshold with exponent `−n²/2` in place of `−n/2`; differs from
/// [`energy_threshold`] for every `n ≥ 2` and is kept only for comparison.
pub fn energy_threshold_alternative_exponent(params: &SolitonParams) -> Result<f64> {
    let r0 = params.critical_radius()?;
    let n = params.n as f64;
    Ok(r0.powf(n) * (-n * n / 2.0).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    /// Lorentzian, `λ′ > 0`, `E < E₀`, `r < r₀` throughout: both ends reach the light cone.
    SubcriticalInner,
    /// Lorentzian, `λ′ > 0`, `E < E₀`, `r > r₀` throughout: both ends escape to infinity.
    SubcriticalOuter,
    /// Lorentzian, `λ′ > 0`, `E ≥ E₀`: one end at the light cone, one at infinity.
    Supercritical,
    CriticalPoint,
    /// Lorentzian, `λ′ ≤ 0`: bounded radius, both ends at the light cone.
    NonpositiveLambda,
    /// Definite: `r` strictly increasing from the light cone to infinity.
    DefiniteExpanding,
    Unclassified,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::SubcriticalInner => "subcritical_inner",
            Self::SubcriticalOuter => "subcritical_outer",
            Self::Supercritical => "supercritical",
            Self::CriticalPoint => "critical_point",
            Self::NonpositiveLambda => "nonpositive_lambda",
            Self::DefiniteExpanding => "definite_expanding",
            Self::Unclassified => "unclassified",
        }
    }
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Relative distance from the critical point below which a trajectory counts as stationary.
pub const STATIONARY_TOL: f64 = 1e-9;

pub fn classify(traj: &Trajectory) -> Classification {
    let p = &traj.params;
    match p.case {
        CausalCase::Definite => {
            let increasing = traj.states.windows(2).all(|w| w[1].r > w[0].r) || traj.states.len() < 2;
            if increasing {
                Classification::DefiniteExpanding
            } else {
                Classification::Unclassified
            }
        }
        CausalCase::Lorentzian if p.lambda_prime <= 0.0 => Classification::NonpositiveLambda,
        CausalCase::Lorentzian => {
            let r0 = p.critical_radius().expect("lambda' > 0 checked");
            let stationary = traj
                .states
                .iter()
                .all(|s| (s.r - r0).abs() <= STATIONARY_TOL * r0 && s.alpha.abs() <= STATIONARY_TOL);
            if stationary {
                return Classification::CriticalPoint;
            }
            let e0 = energy_threshold(p).expect("lambda' > 0 checked");
            if traj.e0 >= e0 * (1.0 - 1e-12) {
                return Classification::Supercritical;
            }
            let (lo, hi) = traj.radius_range();
            if hi < r0 {
                Classification::SubcriticalInner
            } else if lo > r0 {
                Classification::SubcriticalOuter
            } else {
                Classification::Unclassified
            }
        }
    }
}
