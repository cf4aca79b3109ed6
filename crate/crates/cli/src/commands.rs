//! Subcommands and their argument types.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use parakahler::equivariant::{level_curve, lightcone_crossings, null_level_curve, LevelPart, PolarBranch, ProfileCurve};
use parakahler::geometry::nijenhuis::{
    generic_diffeomorphism_jacobian, max_nijenhuis_norm, paraholomorphic_square_jacobian, pullback_structure,
    standard_structure, twisted_structure, JField,
};
use parakahler::geometry::JET_MARGIN;
use parakahler::lagrangian::normal_bundle::is_austere;
use parakahler::lagrangian::{angle_field, angle_identity, NodeStatus, NormalBundleSpec, FD_LAGRANGIAN_TOL};
use parakahler::par::{map_slice, Mode};
use parakahler::soliton::{
    classify, energy_threshold, integrate, integrate_both, CausalCase, IntegrateOptions, SolitonParams, SolitonState,
    Trajectory,
};
use parakahler::{verify, Axis, Grid, SampledImmersion};

use crate::csv::{Cell, Table};
use crate::spec::{explicit_curve, ImmersionSpec, Kind};
use crate::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "parakahler", version, about = "Lagrangian geometry in para-complex space")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Angle field, mean curvature and angle-identity residual of a spec'd immersion.
    Angle(AngleArgs),
    /// Gradient or para-complex graph from expressions.
    Graph(GraphArgs),
    /// Profile curve of an equivariant family with its light-cone crossings.
    Equivariant(EquivariantArgs),
    /// One trajectory of the reduced soliton system.
    Soliton(SolitonArgs),
    /// Sweep of soliton trajectories over a grid of initial conditions.
    Phase(PhaseArgs),
    /// Angle field of a normal bundle.
    NormalBundle(NormalBundleArgs),
    /// Nijenhuis tensor norms of a sampled almost para-complex structure.
    Nijenhuis(NijenhuisArgs),
    /// Run named verification suites.
    Verify(VerifyArgs),
}

pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Angle(a) => angle(a),
        Command::Graph(a) => graph(a),
        Command::Equivariant(a) => equivariant(a),
        Command::Soliton(a) => soliton(a),
        Command::Phase(a) => phase(a),
        Command::NormalBundle(a) => normal_bundle(a),
        Command::Nijenhuis(a) => nijenhuis_cmd(a),
        Command::Verify(a) => verify_cmd(a),
    }
}

fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Spec(format!("{}: {e}", path.display())))
}

// ------------------------------------------------------------------ angle

#[derive(Debug, Args)]
pub struct AngleArgs {
    /// Immersion spec (JSON).
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Relative bound on ω for the sampled tangents.
    #[arg(long, default_value_t = FD_LAGRANGIAN_TOL)]
    pub lagrangian_tol: f64,
}

fn angle(a: AngleArgs) -> CliResult<()> {
    let spec = ImmersionSpec::from_json(&read_text(&a.spec)?)?;
    let imm = spec.build()?;
    let mut table = angle_table(&imm, a.lagrangian_tol)?;
    table.meta("kind", format!("{:?}", spec.kind));
    table.emit(a.out.as_deref())
}

/// One row per node: coordinates, the immersion, `θ`, `q`, degeneracy, `H` and the
/// angle-identity residual. Values that are undefined at a node are `NaN` (`q = -1`).
/// Non-Lagrangian immersions get `H` and degeneracy only, with `lagrangian=false` in the footer.
pub fn angle_table(imm: &SampledImmersion, lagrangian_tol: f64) -> CliResult<Table> {
    let grid = imm.grid();
    let (m, dim) = (grid.dim(), imm.ambient_dim());
    let field = match angle_field(imm, lagrangian_tol) {
        Ok(f) => Some(f),
        Err(parakahler::Error::LagrangianViolation { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let nodes: Vec<usize> = (0..grid.len()).collect();
    let status: Vec<NodeStatus> = match &field {
        Some(f) => f.status.clone(),
        None => map_slice(Mode::Parallel, &nodes, |&k| {
            if !grid.is_interior(k, JET_MARGIN) {
                NodeStatus::Margin
            } else if !imm.induced_metric(k).is_ok_and(|g| !g.degenerate) {
                NodeStatus::Degenerate
            } else {
                NodeStatus::Regular
            }
        }),
    };
    let evaluated = status.iter().filter(|s| **s != NodeStatus::Margin).count();
    let degenerate = status.iter().filter(|s| **s == NodeStatus::Degenerate).count();
    if evaluated > 0 && degenerate == evaluated {
        return Err(CliError::Numerical("induced metric is degenerate at every evaluated node".into()));
    }

    let mut header: Vec<String> = (1..=m).map(|i| format!("u{i}")).collect();
    header.extend((1..=dim).map(|i| format!("x{i}")));
    header.extend((1..=dim).map(|i| format!("y{i}")));
    header.extend(["theta", "q", "degenerate"].map(String::from));
    header.extend((1..=dim).map(|i| format!("hx{i}")));
    header.extend((1..=dim).map(|i| format!("hy{i}")));
    header.push("residual".into());
    let mut table = Table::new(&header);

    let per_node = map_slice(Mode::Parallel, &nodes, |&k| {
        if status[k] != NodeStatus::Regular {
            return (None, None);
        }
        let h = imm.mean_curvature(k).ok().map(|h| h.to_real());
        let r = field.as_ref().and_then(|_| angle_identity(imm, k).ok()).map(|a| a.residual());
        (h, r)
    });
    let nan = vec![f64::NAN; 2 * dim];
    for (k, (h, residual)) in per_node.into_iter().enumerate() {
        let mut row: Vec<Cell> = grid.coords(k).into_iter().map(Cell::from).collect();
        row.extend(imm.value(k).to_real().into_iter().map(Cell::from));
        let (theta, q) = match field.as_ref().and_then(|f| f.angles[k]) {
            Some(a) => (Cell::Float(a.theta), Cell::Int(a.q as i64)),
            None => (Cell::Float(f64::NAN), Cell::Int(-1)),
        };
        row.extend([theta, q, Cell::Int((status[k] == NodeStatus::Degenerate) as i64)]);
        row.extend(h.as_deref().unwrap_or(&nan).iter().map(|v| Cell::Float(*v)));
        row.push(Cell::Float(residual.unwrap_or(f64::NAN)));
        table.row(&row);
    }

    table.meta("nodes", grid.len());
    table.meta("lagrangian", field.is_some());
    if let Some(f) = &field {
        table.meta("regions", f.region_count);
        table.meta("max_region_theta_variation", crate::csv::format_float(f.max_region_variation()));
    }
    table.meta("degenerate_nodes", degenerate);
    table.meta("null_lines", null_lines(grid, &status));
    Ok(table)
}

/// Indices along the first axis at which every evaluated node is degenerate.
fn null_lines(grid: &Grid, status: &[NodeStatus]) -> usize {
    let mut any_regular = BTreeSet::new();
    let mut any_degenerate = BTreeSet::new();
    for (k, s) in status.iter().enumerate() {
        let i = grid.multi_index(k)[0];
        match s {
            NodeStatus::Regular => any_regular.insert(i),
            NodeStatus::Degenerate => any_degenerate.insert(i),
            NodeStatus::Margin => false,
        };
    }
    any_degenerate.difference(&any_regular).count()
}

// ------------------------------------------------------------------ graph

#[derive(Debug, Args)]
pub struct GraphArgs {
    /// Potential `u(x1..xn)` of the gradient graph `x + τ∇u`.
    #[arg(long, conflicts_with_all = ["re", "im"])]
    pub potential: Option<String>,
    /// Real part of `f(x1 + τx2)` for the graph `z ↦ (z, f(z))`.
    #[arg(long, requires = "im")]
    pub re: Option<String>,
    /// τ-part of `f(x1 + τx2)`.
    #[arg(long, requires = "re")]
    pub im: Option<String>,
    /// Base spec; the flags above and below override its fields.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub max: Option<f64>,
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = FD_LAGRANGIAN_TOL)]
    pub lagrangian_tol: f64,
}

fn graph(a: GraphArgs) -> CliResult<()> {
    let mut spec = match &a.spec {
        Some(p) => ImmersionSpec::from_json(&read_text(p)?)?,
        None => ImmersionSpec { kind: Kind::GradientGraph, params: serde_json::json!({}), grid: Vec::new() },
    };
    if let Some(u) = &a.potential {
        spec.kind = Kind::GradientGraph;
        spec.params = serde_json::json!({ "potential": u });
    }
    if let (Some(re), Some(im)) = (&a.re, &a.im) {
        spec.kind = Kind::ParacomplexGraph;
        spec.params = serde_json::json!({ "re": re, "im": im });
    }
    if !matches!(spec.kind, Kind::GradientGraph | Kind::ParacomplexGraph) {
        return Err(CliError::Spec(format!("graph needs a graph spec, got {:?}", spec.kind)));
    }
    let dims = match spec.kind {
        Kind::ParacomplexGraph => 2,
        _ => a.n.unwrap_or(if spec.grid.is_empty() { 2 } else { spec.grid.len() }),
    };
    if spec.grid.len() != dims || a.min.is_some() || a.max.is_some() || a.count.is_some() {
        let base = spec.grid.first().copied().unwrap_or(Axis::new(-0.5, 0.5, 21));
        let axis = Axis::new(a.min.unwrap_or(base.min), a.max.unwrap_or(base.max), a.count.unwrap_or(base.count));
        spec.grid = vec![axis; dims];
    }
    let imm = spec.build()?;
    let mut table = angle_table(&imm, a.lagrangian_tol)?;
    table.meta("kind", format!("{:?}", spec.kind));
    table.emit(a.out.as_deref())
}

// ------------------------------------------------------------ equivariant

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PartArg {
    Re,
    Im,
}

impl From<PartArg> for LevelPart {
    fn from(p: PartArg) -> Self {
        match p {
            PartArg::Re => LevelPart::Re,
            PartArg::Im => LevelPart::Im,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ParamArg {
    Polar,
    Null,
}

#[derive(Debug, Args)]
pub struct EquivariantArgs {
    #[arg(long, default_value_t = 2)]
    pub n: u32,
    /// Level value `C` in `Re γⁿ = C` or `Im γⁿ = C`.
    #[arg(long, allow_negative_numbers = true)]
    pub c: Option<f64>,
    #[arg(long, value_enum)]
    pub part: Option<PartArg>,
    #[arg(long, value_enum, default_value = "polar")]
    pub parametrization: ParamArg,
    /// Polar branch sign `p` (±1).
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub p: i8,
    /// Polar branch quadrant `q` (0 or 1).
    #[arg(long, default_value_t = 0)]
    pub q: u8,
    /// Explicit profile `x(s)`; use together with `--y` instead of a level curve.
    #[arg(long, requires = "y", conflicts_with_all = ["c", "part"])]
    pub x: Option<String>,
    #[arg(long, requires = "x")]
    pub y: Option<String>,
    #[arg(long, allow_negative_numbers = true, default_value_t = -1.0)]
    pub min: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
    pub max: f64,
    #[arg(long, default_value_t = 201)]
    pub count: usize,
    #[arg(long)]
    pub periodic: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn equivariant(a: EquivariantArgs) -> CliResult<()> {
    let axis = Axis { min: a.min, max: a.max, count: a.count, periodic: a.periodic };
    let (curve, level): (ProfileCurve, Option<(LevelPart, f64)>) = match (&a.x, &a.y) {
        (Some(x), Some(y)) => (explicit_curve(x, y, axis)?, None),
        _ => {
            let (c, part) = match (a.c, a.part) {
                (Some(c), Some(p)) => (c, LevelPart::from(p)),
                _ => return Err(CliError::Usage("either --x/--y or both --c and --part are required".into())),
            };
            let curve = match a.parametrization {
                ParamArg::Polar => level_curve(a.n, c, part, PolarBranch { p: a.p, q: a.q }, axis)?,
                ParamArg::Null => null_level_curve(a.n, c, part, axis)?,
            };
            (curve, Some((part, c)))
        }
    };
    let mut table = Table::new(&["s", "x", "y", "squared_norm", "level"]);
    for (s, z) in curve.samples() {
        let level_value = level.map_or(f64::NAN, |(part, _)| part.of(z.powi(a.n as i32)));
        table.row(&[s.into(), z.x().into(), z.y().into(), z.squared_norm().into(), level_value.into()]);
    }
    let crossings = lightcone_crossings(&curve);
    table.meta("family", format!("{:?}", curve.family()));
    table.meta("crossings", crossings.count());
    table.meta("transverse_crossings", join_floats(&crossings.transverse));
    table.meta("tangential_crossings", join_floats(&crossings.tangential));
    if let Some((part, c)) = level {
        table.meta("max_level_error", crate::csv::format_float(curve.level_error(a.n, part, c)));
    }
    table.emit(a.out.as_deref())
}

fn join_floats(v: &[f64]) -> String {
    v.iter().map(|x| crate::csv::format_float(*x)).collect::<Vec<_>>().join(" ")
}

// ---------------------------------------------------------------- soliton

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CaseArg {
    Definite,
    Lorentzian,
}

impl From<CaseArg> for CausalCase {
    fn from(c: CaseArg) -> Self {
        match c {
            CaseArg::Definite => CausalCase::Definite,
            CaseArg::Lorentzian => CausalCase::Lorentzian,
        }
    }
}

/// Soliton run as read from `--spec`; flags override each field.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolitonRun {
    pub n: Option<u32>,
    pub lambda_prime: Option<f64>,
    pub case: Option<CausalCase>,
    pub r: Option<f64>,
    pub alpha: Option<f64>,
    pub phi: Option<f64>,
    pub s_max: Option<f64>,
    pub s_back: Option<f64>,
    pub step: Option<f64>,
    pub rtol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SolitonArgs {
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long, allow_negative_numbers = true)]
    pub lambda_prime: Option<f64>,
    #[arg(long, value_enum)]
    pub case: Option<CaseArg>,
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub phi: Option<f64>,
    /// Forward arc length.
    #[arg(long)]
    pub smax: Option<f64>,
    /// Backward arc length (default 0).
    #[arg(long)]
    pub sback: Option<f64>,
    /// Output spacing in arc length (default 0.01).
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long)]
    pub rtol: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

struct SolitonConfig {
    params: SolitonParams,
    initial: SolitonState,
    s_max: f64,
    s_back: f64,
    opts: IntegrateOptions,
}

fn required<T>(v: Option<T>, name: &str) -> CliResult<T> {
    v.ok_or_else(|| CliError::Usage(format!("--{name} is required (flag or spec field)")))
}

fn soliton_config(a: &SolitonArgs) -> CliResult<SolitonConfig> {
    let base: SolitonRun = match &a.spec {
        Some(p) => serde_json::from_str(&read_text(p)?).map_err(|e| CliError::Spec(format!("soliton spec: {e}")))?,
        None => SolitonRun::default(),
    };
    let params = SolitonParams::new(
        required(a.n.or(base.n), "n")?,
        required(a.lambda_prime.or(base.lambda_prime), "lambda-prime")?,
        required(a.case.map(CausalCase::from).or(base.case), "case")?,
    )?;
    let initial = SolitonState::new(
        required(a.r.or(base.r), "r")?,
        required(a.alpha.or(base.alpha), "alpha")?,
        a.phi.or(base.phi).unwrap_or(0.0),
    );
    let defaults = IntegrateOptions::default();
    let opts = IntegrateOptions {
        output_step: Some(a.step.or(base.step).unwrap_or(0.01)),
        rtol: a.rtol.or(base.rtol).unwrap_or(defaults.rtol),
        ..defaults
    };
    Ok(SolitonConfig {
        params,
        initial,
        s_max: required(a.smax.or(base.s_max), "smax")?,
        s_back: a.sback.or(base.s_back).unwrap_or(0.0),
        opts,
    })
}

fn run_trajectory(c: &SolitonConfig) -> CliResult<Trajectory> {
    let t = if c.s_back > 0.0 {
        integrate_both(c.initial, &c.params, c.s_back, c.s_max, &c.opts)?
    } else {
        integrate(c.initial, &c.params, c.s_max, &c.opts)?
    };
    Ok(t)
}

pub fn trajectory_table(t: &Trajectory) -> Table {
    let mut table = Table::new(&["s", "r", "alpha", "phi", "E", "E_drift"]);
    for (((s, st), e), d) in t.s.iter().zip(&t.states).zip(&t.energy).zip(t.drift()) {
        table.row(&[(*s).into(), st.r.into(), st.alpha.into(), st.phi.into(), (*e).into(), d.into()]);
    }
    let p = &t.params;
    let f = crate::csv::format_float;
    table.meta("n", p.n);
    table.meta("lambda_prime", f(p.lambda_prime));
    table.meta("case", format!("{:?}", p.case).to_lowercase());
    table.meta("classification", classify(t));
    table.meta("stop_forward", t.stop_forward.as_str());
    table.meta("stop_backward", t.stop_backward.map_or("none", |s| s.as_str()));
    table.meta("E0", f(t.e0));
    if let Ok(th) = energy_threshold(p) {
        table.meta("energy_threshold", f(th));
    }
    table.meta("max_drift", f(t.max_drift));
    table.meta("drift_accepted", t.accepted);
    table.meta("rtol", f(t.rtol));
    table
}

fn soliton(a: SolitonArgs) -> CliResult<()> {
    let config = soliton_config(&a)?;
    let t = run_trajectory(&config)?;
    trajectory_table(&t).emit(a.out.as_deref())
}

// ------------------------------------------------------------------ phase

#[derive(Debug, Args)]
pub struct PhaseArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long, allow_negative_numbers = true)]
    pub lambda_prime: f64,
    #[arg(long, value_enum)]
    pub case: CaseArg,
    #[arg(long, default_value_t = 0.3)]
    pub r_min: f64,
    #[arg(long, default_value_t = 3.0)]
    pub r_max: f64,
    #[arg(long, default_value_t = 10)]
    pub r_count: usize,
    #[arg(long, allow_negative_numbers = true, default_value_t = -1.5)]
    pub alpha_min: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.5)]
    pub alpha_max: f64,
    #[arg(long, default_value_t = 10)]
    pub alpha_count: usize,
    /// Arc length in each direction from the initial condition.
    #[arg(long, default_value_t = 5.0)]
    pub smax: f64,
    #[arg(long, default_value_t = 0.01)]
    pub step: f64,
    #[arg(long)]
    pub out_dir: PathBuf,
    #[arg(long)]
    pub sequential: bool,
}

fn linspace(min: f64, max: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![min],
        _ => (0..count).map(|i| min + (max - min) * i as f64 / (count - 1) as f64).collect(),
    }
}

fn phase(a: PhaseArgs) -> CliResult<()> {
    let params = SolitonParams::new(a.n, a.lambda_prime, a.case.into())?;
    let opts = IntegrateOptions { output_step: Some(a.step), ..Default::default() };
    let mut starts = Vec::new();
    for r in linspace(a.r_min, a.r_max, a.r_count) {
        for alpha in linspace(a.alpha_min, a.alpha_max, a.alpha_count) {
            starts.push(SolitonState::new(r, alpha, 0.0));
        }
    }
    if starts.is_empty() {
        return Err(CliError::Usage("empty grid of initial conditions".into()));
    }
    std::fs::create_dir_all(&a.out_dir)?;
    let mode = if a.sequential { Mode::Sequential } else { Mode::Parallel };
    let runs = map_slice(mode, &starts, |s| integrate_both(*s, &params, a.smax, a.smax, &opts));
    let mut index = Table::new(&["id", "r", "alpha", "E0", "max_drift", "classification", "stop_backward", "stop_forward"]);
    for (id, (start, run)) in starts.iter().zip(runs).enumerate() {
        let t = run?;
        trajectory_table(&t).emit(Some(&a.out_dir.join(format!("trajectory_{id:04}.csv"))))?;
        let class = classify(&t);
        index.row(&[
            Cell::Int(id as i64),
            start.r.into(),
            start.alpha.into(),
            t.e0.into(),
            t.max_drift.into(),
            Cell::Text(class.as_str()),
            Cell::Text(t.stop_backward.map_or("none", |s| s.as_str())),
            Cell::Text(t.stop_forward.as_str()),
        ]);
    }
    index.meta("files", "trajectory_<id>.csv");
    index.meta("trajectories", starts.len());
    index.emit(Some(&a.out_dir.join("index.csv")))
}

// ---------------------------------------------------------- normal-bundle

#[derive(Debug, Args)]
pub struct NormalBundleArgs {
    /// Normal-bundle spec (JSON: base, base_axes, fiber).
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = FD_LAGRANGIAN_TOL)]
    pub lagrangian_tol: f64,
}

fn normal_bundle(a: NormalBundleArgs) -> CliResult<()> {
    let spec: NormalBundleSpec =
        serde_json::from_str(&read_text(&a.spec)?).map_err(|e| CliError::Spec(format!("normal-bundle spec: {e}")))?;
    let imm = spec.immersion()?;
    let mut table = angle_table(&imm, a.lagrangian_tol)?;
    let centre: Vec<f64> = spec.base_axes.iter().map(|ax| 0.5 * (ax.min + ax.max)).collect();
    table.meta("austere_at_centre", is_austere(&spec.base, &centre, 1e-9));
    table.meta("fiber_theta_variation_at_centre", crate::csv::format_float(spec.angle_variation(&centre)?));
    table.emit(a.out.as_deref())
}

// -------------------------------------------------------------- nijenhuis

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StructureArg {
    /// Multiplication by τ on D².
    Standard,
    /// Pullback of the standard structure by a para-holomorphic map.
    SquarePullback,
    /// Pullback by a generic local diffeomorphism.
    GenericPullback,
    /// A structure with non-involutive −1 eigendistribution.
    Twisted,
}

#[derive(Debug, Args)]
pub struct NijenhuisArgs {
    #[arg(long, value_enum, default_value = "twisted")]
    pub structure: StructureArg,
    #[arg(long, allow_negative_numbers = true, default_value_t = -0.2)]
    pub min: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.2)]
    pub max: f64,
    /// Nodes per axis of the 4-dimensional grid.
    #[arg(long, default_value_t = 5)]
    pub count: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn nijenhuis_cmd(a: NijenhuisArgs) -> CliResult<()> {
    let grid = Grid::new(vec![Axis::new(a.min, a.max, a.count); 4])?;
    let values = (0..grid.len())
        .map(|k| {
            let p = grid.coords(k);
            match a.structure {
                StructureArg::Standard => Ok(standard_structure(2)),
                StructureArg::SquarePullback => pullback_structure(&paraholomorphic_square_jacobian(&p)),
                StructureArg::GenericPullback => pullback_structure(&generic_diffeomorphism_jacobian(&p)),
                StructureArg::Twisted => Ok(twisted_structure(&p)),
            }
        })
        .collect::<parakahler::Result<Vec<_>>>()?;
    let field = JField::new(grid.clone(), values)?;
    let mut table = Table::new(&["a", "b", "c", "d", "max_norm"]);
    let mut worst: f64 = 0.0;
    for k in (0..grid.len()).filter(|&k| grid.is_interior(k, 1)) {
        let v = max_nijenhuis_norm(&field, k)?;
        worst = worst.max(v);
        let mut row: Vec<Cell> = grid.coords(k).into_iter().map(Cell::from).collect();
        row.push(v.into());
        table.row(&row);
    }
    table.meta("structure", format!("{:?}", a.structure));
    table.meta("max_norm", crate::csv::format_float(worst));
    table.emit(a.out.as_deref())
}

// ----------------------------------------------------------------- verify

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Suite name, or `all`.
    #[arg(long, default_value = "all")]
    pub suite: String,
    /// List the available suites and exit.
    #[arg(long)]
    pub list: bool,
    /// Run without the data-parallel core.
    #[arg(long)]
    pub sequential: bool,
    /// Emit the reports as JSON.
    #[arg(long)]
    pub json: bool,
}

fn verify_cmd(a: VerifyArgs) -> CliResult<()> {
    if a.list {
        for s in verify::suites() {
            println!("{:<18} {}", s.name, s.description);
        }
        return Ok(());
    }
    let mode = if a.sequential { Mode::Sequential } else { Mode::Parallel };
    let reports = if a.suite == "all" {
        verify::run_all(mode)
    } else {
        let suite = verify::find(&a.suite)
            .ok_or_else(|| CliError::Usage(format!("unknown suite '{}' (see verify --list)", a.suite)))?;
        vec![suite.run(mode)]
    };
    if a.json {
        println!("{}", serde_json::to_string_pretty(&reports).expect("reports serialize"));
    } else {
        for r in &reports {
            print!("{r}");
        }
    }
    let failed: Vec<&str> = reports.iter().filter(|r| !r.passed()).map(|r| r.name).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Numerical(format!("failing suites: {}", failed.join(", "))))
    }
}
