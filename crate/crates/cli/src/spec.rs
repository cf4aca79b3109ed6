//! JSON immersion specifications.
//!
//! ```json
//! { "kind": "gradient_graph",
//!   "params": { "potential": "x1^2 - x2^2/4" },
//!   "grid": [ { "min": -0.5, "max": 0.5, "count": 21 },
//!             { "min": -0.5, "max": 0.5, "count": 21 } ] }
//! ```
//!
//! The document and every `params` object reject unknown keys.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use parakahler::equivariant::{level_curve, lift, null_level_curve, sphere_axes, LevelPart, PolarBranch, ProfileCurve, ProfileFamily};
use parakahler::lagrangian::{build_gradient_graph, build_null_product, build_paracomplex_graph, GradientSource, CR_TOL};
use parakahler::soliton::{integrate_both, CausalCase, IntegrateOptions, SolitonParams, SolitonState};
use parakahler::{Axis, DVector, Grid, ParaComplex, SampledImmersion};

use crate::expr::{Env, Expr, Var};
use crate::CliError;

/// Sphere nodes per periodic axis when a lift gives only the profile axis.
pub const DEFAULT_SPHERE_COUNT: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Flat,
    GradientGraph,
    ParacomplexGraph,
    NullProduct,
    EquivariantLevel,
    EquivariantExplicit,
    SolitonLift,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImmersionSpec {
    pub kind: Kind,
    #[serde(default)]
    pub params: serde_json::Value,
    #[serde(default)]
    pub grid: Vec<Axis>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FlatParams {
    n: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GradientParams {
    potential: String,
}

/// `f(x1 + τx2) = re + τ·im`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParacomplexParams {
    re: String,
    im: String,
}

/// Two null curves in `D²` given by their real parts `[x1, x2, y1, y2]`, in `s` and `t`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct NullProductParams {
    first: [String; 4],
    second: [String; 4],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
enum Parametrization {
    #[default]
    Polar,
    Null,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LevelParams {
    n: u32,
    c: f64,
    part: LevelPart,
    #[serde(default)]
    parametrization: Parametrization,
    #[serde(default)]
    branch: PolarBranch,
    #[serde(default)]
    sphere_count: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExplicitParams {
    n: u32,
    x: String,
    y: String,
    #[serde(default)]
    sphere_count: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SolitonLiftParams {
    n: u32,
    lambda_prime: f64,
    case: CausalCase,
    r: f64,
    alpha: f64,
    #[serde(default)]
    phi: f64,
    #[serde(default)]
    q: u8,
    s_back: f64,
    s_forward: f64,
    step: f64,
    #[serde(default)]
    sphere_count: Option<usize>,
}

fn params<T: DeserializeOwned>(kind: Kind, value: &serde_json::Value) -> Result<T, CliError> {
    serde_json::from_value(value.clone()).map_err(|e| CliError::Spec(format!("params for {kind:?}: {e}")))
}

pub fn parse_expr(text: &str, allowed: &[Var]) -> Result<Expr, CliError> {
    let e = Expr::parse(text).map_err(|e| CliError::Spec(format!("'{text}': {e}")))?;
    e.require_variables(allowed).map_err(|m| CliError::Spec(format!("'{text}': {m}")))?;
    Ok(e)
}

fn xs(n: usize) -> Vec<Var> {
    (0..n).map(Var::X).collect()
}

fn expect_axes(grid: &[Axis], n: usize, what: &str) -> Result<(), CliError> {
    if grid.len() != n {
        return Err(CliError::Spec(format!("{what} needs {n} grid axes, got {}", grid.len())));
    }
    Ok(())
}

impl ImmersionSpec {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Spec(format!("immersion spec: {e}")))
    }

    pub fn build(&self) -> Result<SampledImmersion, CliError> {
        let grid = &self.grid;
        match self.kind {
            Kind::Flat => {
                let p: FlatParams = params(self.kind, &self.params)?;
                expect_axes(grid, p.n, "flat")?;
                let zero = vec![0.0; p.n];
                Ok(SampledImmersion::from_fn(Grid::new(grid.clone())?, |x| DVector::from_real(x, &zero))?)
            }
            Kind::GradientGraph => {
                let p: GradientParams = params(self.kind, &self.params)?;
                let n = grid.len();
                let u = parse_expr(&p.potential, &xs(n))?;
                let f = |x: &[f64]| u.eval(&Env { x, ..Default::default() });
                Ok(build_gradient_graph(Grid::new(grid.clone())?, GradientSource::Potential(&f))?)
            }
            Kind::ParacomplexGraph => {
                let p: ParacomplexParams = params(self.kind, &self.params)?;
                expect_axes(grid, 2, "paracomplex_graph")?;
                let (re, im) = (parse_expr(&p.re, &xs(2))?, parse_expr(&p.im, &xs(2))?);
                let f = |z: ParaComplex| {
                    let env = Env { x: &[z.x(), z.y()], ..Default::default() };
                    ParaComplex::new(re.eval(&env), im.eval(&env))
                };
                Ok(build_paracomplex_graph(Grid::new(grid.clone())?, &f, CR_TOL)?)
            }
            Kind::NullProduct => {
                let p: NullProductParams = params(self.kind, &self.params)?;
                expect_axes(grid, 2, "null_product")?;
                let curve = |exprs: &[String; 4], var: Var| -> Result<Vec<Expr>, CliError> {
                    exprs.iter().map(|e| parse_expr(e, &[var])).collect()
                };
                let (a, b) = (curve(&p.first, Var::S)?, curve(&p.second, Var::T)?);
                let point = |c: &[Expr], env: Env<'_>| {
                    let v: Vec<f64> = c.iter().map(|e| e.eval(&env)).collect();
                    DVector::from_real(&v[..2], &v[2..])
                };
                let g1 = |s: f64| point(&a, Env { s: Some(s), ..Default::default() });
                let g2 = |t: f64| point(&b, Env { t: Some(t), ..Default::default() });
                Ok(build_null_product(Grid::new(grid.clone())?, &g1, &g2)?)
            }
            Kind::EquivariantLevel => {
                let p: LevelParams = params(self.kind, &self.params)?;
                let profile_axis = profile_axis(grid)?;
                let curve = match p.parametrization {
                    Parametrization::Polar => level_curve(p.n, p.c, p.part, p.branch, profile_axis)?,
                    Parametrization::Null => null_level_curve(p.n, p.c, p.part, profile_axis)?,
                };
                lift_with(&curve, p.n, grid, p.sphere_count)
            }
            Kind::EquivariantExplicit => {
                let p: ExplicitParams = params(self.kind, &self.params)?;
                let curve = explicit_curve(&p.x, &p.y, profile_axis(grid)?)?;
                lift_with(&curve, p.n, grid, p.sphere_count)
            }
            Kind::SolitonLift => {
                let p: SolitonLiftParams = params(self.kind, &self.params)?;
                let sp = SolitonParams::new(p.n, p.lambda_prime, p.case)?;
                let opts = IntegrateOptions { output_step: Some(p.step), ..Default::default() };
                let traj = integrate_both(SolitonState::new(p.r, p.alpha, p.phi), &sp, p.s_back, p.s_forward, &opts)?;
                let curve = traj.profile(p.q)?;
                // The grid holds only sphere axes here; the profile axis comes from the trajectory.
                let sphere = if grid.is_empty() {
                    sphere_axes(p.n as usize, p.sphere_count.unwrap_or(DEFAULT_SPHERE_COUNT))?
                } else {
                    expect_axes(grid, p.n as usize - 1, "soliton_lift sphere")?;
                    grid.clone()
                };
                Ok(lift(&curve, p.n as usize, sphere)?)
            }
        }
    }
}

fn profile_axis(grid: &[Axis]) -> Result<Axis, CliError> {
    grid.first().copied().ok_or_else(|| CliError::Spec("equivariant kinds need a profile axis".into()))
}

pub fn explicit_curve(x: &str, y: &str, axis: Axis) -> Result<ProfileCurve, CliError> {
    let (x, y) = (parse_expr(x, &[Var::S])?, parse_expr(y, &[Var::S])?);
    Ok(ProfileCurve::from_fn(axis, ProfileFamily::Explicit, move |s| {
        let env = Env { s: Some(s), ..Default::default() };
        ParaComplex::new(x.eval(&env), y.eval(&env))
    })?)
}

/// Lift over the sphere axes in `grid[1..]`, or a default chart when only the profile axis is given.
fn lift_with(curve: &ProfileCurve, n: u32, grid: &[Axis], count: Option<usize>) -> Result<SampledImmersion, CliError> {
    let n = n as usize;
    let sphere = if grid.len() == 1 {
        sphere_axes(n, count.unwrap_or(DEFAULT_SPHERE_COUNT))?
    } else {
        expect_axes(grid, n, "equivariant lift")?;
        grid[1..].to_vec()
    };
    Ok(lift(curve, n, sphere)?)
}
