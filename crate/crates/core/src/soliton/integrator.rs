//! Adaptive Dormand–Prince 5(4) integration of the reduced system with
//! first-integral monitoring and radius/angle stop events.

use serde::Serialize;

use super::{field, first_integral, CausalCase, SolitonParams, SolitonState};
use crate::equivariant::{ProfileCurve, ProfileFamily};
use crate::error::{Error, Result};
use crate::grid::Axis;

/// Largest accepted relative drift of the first integral.
pub const DRIFT_GATE: f64 = 1e-8;

/// Tightest relative tolerance tried before a trajectory is flagged.
const RTOL_FLOOR: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrateOptions {
    pub rtol: f64,
    pub atol: f64,
    pub r_min: f64,
    pub r_max: f64,
    pub alpha_max: f64,
    /// Record only at multiples of this arc-length step (plus the final state).
    pub output_step: Option<f64>,
    pub max_steps: usize,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-13,
            r_min: 1e-6,
            r_max: 1e6,
            alpha_max: 20.0,
            output_step: None,
            max_steps: 2_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Reached,
    MinRadius,
    MaxRadius,
    AlphaLimit,
    /// Step size collapsed: the trajectory reaches a singularity at finite arc length.
    Singular,
    MaxSteps,
}

impl StopReason {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Reached => "reached",
            Self::MinRadius => "min_radius",
            Self::MaxRadius => "max_radius",
            Self::AlphaLimit => "alpha_limit",
            Self::Singular => "singular",
            Self::MaxSteps => "max_steps",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub params: SolitonParams,
    pub s: Vec<f64>,
    pub states: Vec<SolitonState>,
    pub energy: Vec<f64>,
    /// First integral at the initial state.
    pub e0: f64,
    /// Largest `|E − E(0)| / max(|E(0)|, rⁿe^{−λ′r²/2}|_{s=0})` along the run.
    pub max_drift: f64,
    /// Denominator of the relative drift.
    pub drift_scale: f64,
    pub stop_forward: StopReason,
    pub stop_backward: Option<StopReason>,
    /// Whether the drift stayed under [`DRIFT_GATE`].
    pub accepted: bool,
    /// Relative tolerance of the run that produced this trajectory.
    pub rtol: f64,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn radius_range(&self) -> (f64, f64) {
        self.states
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| (lo.min(s.r), hi.max(s.r)))
    }

    /// Signed relative drift `(E − E(0)) / drift_scale` per sample.
    pub fn drift(&self) -> Vec<f64> {
        self.energy.iter().map(|e| (e - self.e0) / self.drift_scale).collect()
    }

    /// Profile points `τ^q r e^{τφ}`.
    pub fn positions(&self, q: u8) -> Vec<crate::ParaComplex> {
        self.states.iter().map(|s| s.position(q)).collect()
    }

    /// Profile curve on the uniform output axis; trailing samples off the
    /// uniform spacing (the stop event) are dropped.
    pub fn profile(&self, q: u8) -> Result<ProfileCurve> {
        if q > 1 {
            return Err(Error::InvalidCase(format!("q must be 0 or 1, got {q}")));
        }
        if self.s.len() < 2 {
            return Err(Error::InvalidGrid("trajectory has fewer than two samples".into()));
        }
        let h = self.s[1] - self.s[0];
        let uniform = self
            .s
            .windows(2)
            .take_while(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h.abs())
            .count()
            + 1;
        let axis = Axis::new(self.s[0], self.s[uniform - 1], uniform);
        let values = self.states[..uniform].iter().map(|s| s.position(q)).collect();
        ProfileCurve::from_samples(axis, ProfileFamily::Soliton, values)
    }
}

// Dormand–Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

type Y = [f64; 3];

/// One trial step of size `h`; returns the 5th-order state and the scaled error norm.
fn dp_step(y: Y, h: f64, dir: f64, p: &SolitonParams, opts: &IntegrateOptions, rtol: f64) -> (Y, f64) {
    let f = |y: Y| {
        let v = field(y, p);
        [dir * v[0], dir * v[1], dir * v[2]]
    };
    let mut k = [[0.0; 3]; 7];
    k[0] = f(y);
    for i in 1..7 {
        let mut yi = y;
        for (j, kj) in k.iter().enumerate().take(i) {
            for d in 0..3 {
                yi[d] += h * A[i][j] * kj[d];
            }
        }
        debug_assert!(C[i] >= 0.0);
        k[i] = f(yi);
    }
    let mut y5 = y;
    let mut err = 0.0_f64;
    for d in 0..3 {
        let mut e = 0.0;
        for i in 0..7 {
            y5[d] += h * B5[i] * k[i][d];
            e += h * (B5[i] - B4[i]) * k[i][d];
        }
        // Definite α keeps its sign and may decay super-exponentially: relative control only.
        let atol = if d == 1 && p.case == CausalCase::Definite { f64::MIN_POSITIVE } else { opts.atol };
        let sc = atol + rtol * y[d].abs();
        err = err.max((e / sc).abs());
    }
    if !y5.iter().all(|v| v.is_finite()) || y5[0] <= 0.0 {
        err = f64::INFINITY;
    }
    (y5, err)
}

struct Run {
    s: Vec<f64>,
    y: Vec<Y>,
    stop: StopReason,
}

/// Integrates in `σ ∈ [0, |s_max|]` along `sign(s_max)`; recorded `s` carry the sign.
fn run(init: Y, p: &SolitonParams, s_max: f64, opts: &IntegrateOptions, rtol: f64) -> Run {
    let dir = if s_max < 0.0 { -1.0 } else { 1.0 };
    let total = s_max.abs();
    let mut out = Run { s: vec![0.0], y: vec![init], stop: StopReason::Reached };
    let mut y = init;
    let mut sigma = 0.0;
    let mut h = (0.01 * total).clamp(1e-6, 0.05).min(total.max(f64::MIN_POSITIVE));
    let mut next_out = opts.output_step.map(|d| d.abs());
    let mut steps = 0usize;
    while sigma < total {
        if steps >= opts.max_steps {
            out.stop = StopReason::MaxSteps;
            break;
        }
        steps += 1;
        let mut target = total;
        if let Some(t) = next_out {
            target = target.min(t);
        }
        let clipped = sigma + h >= target;
        let h_try = if clipped { target - sigma } else { h };
        let (y_new, err) = dp_step(y, h_try, dir, p, opts, rtol);
        if err > 1.0 {
            let fac = if err.is_finite() { (0.9 * err.powf(-0.2)).max(0.1) } else { 0.25 };
            h = h_try * fac;
            if h < 1e-14 * (1.0 + sigma) {
                out.stop = StopReason::Singular;
                out.s.push(dir * sigma);
                out.y.push(y);
                break;
            }
            continue;
        }
        sigma = if clipped { target } else { sigma + h_try };
        y = y_new;
        let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h = (if clipped { h.max(h_try) } else { h_try }) * fac;

        let stop = if y[0] <= opts.r_min {
            Some(StopReason::MinRadius)
        } else if y[0] >= opts.r_max {
            Some(StopReason::MaxRadius)
        } else if y[1].abs() >= opts.alpha_max {
            Some(StopReason::AlphaLimit)
        } else if h < 1e-14 * (1.0 + sigma) {
            Some(StopReason::Singular)
        } else {
            None
        };
        let on_output = match (opts.output_step, next_out) {
            (Some(d), Some(t)) if clipped && sigma == t => {
                next_out = Some(t + d.abs());
                true
            }
            (None, _) => true,
            _ => false,
        };
        if on_output || stop.is_some() || sigma >= total {
            out.s.push(dir * sigma);
            out.y.push(y);
        }
        if let Some(reason) = stop {
            out.stop = reason;
            break;
        }
    }
    out
}

fn validate(init: &SolitonState, s_max: f64, opts: &IntegrateOptions) -> Result<()> {
    if !(init.r > 0.0) {
        return Err(Error::NonpositiveRadius(init.r));
    }
    if !init.alpha.is_finite() || !init.phi.is_finite() || !s_max.is_finite() {
        return Err(Error::InvalidCase("initial state and span must be finite".into()));
    }
    if !(opts.rtol > 0.0) || !(opts.atol > 0.0) {
        return Err(Error::InvalidCase("tolerances must be positive".into()));
    }
    if let Some(d) = opts.output_step {
        if !(d.abs() > 0.0) || !d.is_finite() {
            return Err(Error::InvalidCase(format!("output step must be positive, got {d}")));
        }
    }
    Ok(())
}

fn assemble(
    params: &SolitonParams,
    init: &SolitonState,
    back: Option<Run>,
    fwd: Run,
    rtol: f64,
) -> Result<Trajectory> {
    let e0 = first_integral(init, params)?;
    let scale = e0.abs().max(params.radial_factor(init.r));
    let (mut s, mut y): (Vec<f64>, Vec<Y>) = (Vec::new(), Vec::new());
    let stop_backward = back.as_ref().map(|b| b.stop);
    if let Some(b) = back {
        s.extend(b.s.iter().skip(1).rev());
        y.extend(b.y.iter().skip(1).rev());
    }
    s.extend(&fwd.s);
    y.extend(&fwd.y);
    let states: Vec<SolitonState> = y.iter().map(|v| SolitonState::new(v[0], v[1], v[2])).collect();
    let energy = states
        .iter()
        .map(|st| first_integral(st, params))
        .collect::<Result<Vec<_>>>()?;
    let max_drift = energy.iter().map(|e| (e - e0).abs() / scale).fold(0.0, f64::max);
    Ok(Trajectory {
        params: *params,
        s,
        states,
        energy,
        e0,
        max_drift,
        drift_scale: scale,
        stop_forward: fwd.stop,
        stop_backward,
        accepted: max_drift < DRIFT_GATE,
        rtol,
    })
}

fn with_retries(opts: &IntegrateOptions, mut attempt: impl FnMut(f64) -> Result<Trajectory>) -> Result<Trajectory> {
    let mut rtol = opts.rtol;
    loop {
        let traj = attempt(rtol)?;
        if traj.accepted || rtol <= RTOL_FLOOR {
            return Ok(traj);
        }
        rtol = (rtol * 1e-2).max(RTOL_FLOOR);
    }
}

/// Integrates from `initial` to arc length `s_max` (negative runs backward).
/// Tightens `rtol` down to `1e-13` while the drift gate fails; a trajectory
/// that still fails is returned with `accepted == false`.
pub fn integrate(
    initial: SolitonState,
    params: &SolitonParams,
    s_max: f64,
    opts: &IntegrateOptions,
) -> Result<Trajectory> {
    validate(&initial, s_max, opts)?;
    let y0 = [initial.r, initial.alpha, initial.phi];
    with_retries(opts, |rtol| {
        let r = run(y0, params, s_max, opts, rtol);
        let (back, fwd) = if s_max < 0.0 {
            // Present backward runs in increasing `s`.
            (Some(r), Run { s: vec![0.0], y: vec![y0], stop: StopReason::Reached })
        } else {
            (None, r)
        };
        let mut t = assemble(params, &initial, back, fwd, rtol)?;
        if s_max < 0.0 {
            t.stop_forward = t.stop_backward.take().expect("backward run present");
        }
        Ok(t)
    })
}

/// Integrates over `[−s_back, s_forward]` through `initial` at `s = 0`.
pub fn integrate_both(
    initial: SolitonState,
    params: &SolitonParams,
    s_back: f64,
    s_forward: f64,
    opts: &IntegrateOptions,
) -> Result<Trajectory> {
    validate(&initial, s_forward, opts)?;
    if !(s_back >= 0.0) || !(s_forward >= 0.0) {
        return Err(Error::InvalidRange(format!("spans must be nonnegative, got {s_back} and {s_forward}")));
    }
    let y0 = [initial.r, initial.alpha, initial.phi];
    with_retries(opts, |rtol| {
        let b = run(y0, params, -s_back, opts, rtol);
        let f = run(y0, params, s_forward, opts, rtol);
        assemble(params, &initial, Some(b), f, rtol)
    })
}
