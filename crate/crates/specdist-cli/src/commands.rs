//! Implementations of the six subcommands. Each returns the fully rendered
//! report text plus an exit code, so `main` only handles argument parsing
//! and output placement.

use std::fs;
use std::path::Path;

use serde_json::json;

use specdist_core::error::{EngineError, PythagorasError};
use specdist_core::io::{geometry_from_json, state_from_json, Geometry};
use specdist_core::sampling;
use specdist_core::solver::{DistanceEngine, SolveOptions};
use specdist_core::tetra::{cube_vertex_map, marginal_projection, square_embedding, tetra_embed};
use specdist_core::transport::kantorovich;
use specdist_core::triple::{
    finite_metric_triple, two_point_state, Algebra, AlgebraKind, FiniteSpectralTriple, State,
};
use specdist_core::TransportError;
use specdist_core::{ProductLab, PythagorasReport};

use crate::output::{csv_line, fmt6, fmt_full, json_doc, json_real, json_reals};
use crate::verify;

/// How a command run ends: rendered text plus the process exit code.
pub struct CommandOutput {
    pub text: String,
    pub exit: u8,
}

impl CommandOutput {
    fn ok(text: String) -> Self {
        CommandOutput { text, exit: 0 }
    }
}

/// Failures split by exit code: `1` for invalid input or violated
/// invariants, `2` when the distance solver gives up.
#[derive(Debug)]
pub enum Failure {
    Invalid(String),
    NoConvergence(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::NoConvergence(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Invalid(m) | Failure::NoConvergence(m) => m,
        }
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::NoConvergence { .. } => Failure::NoConvergence(e.to_string()),
            other => Failure::Invalid(other.to_string()),
        }
    }
}

impl From<PythagorasError> for Failure {
    fn from(e: PythagorasError) -> Self {
        match e {
            PythagorasError::Engine(inner) => inner.into(),
            other => Failure::Invalid(other.to_string()),
        }
    }
}

macro_rules! invalid_from {
    ($($ty:ty),*) => {$(
        impl From<$ty> for Failure {
            fn from(e: $ty) -> Self {
                Failure::Invalid(e.to_string())
            }
        }
    )*};
}

invalid_from!(
    specdist_core::IoError,
    specdist_core::TripleError,
    specdist_core::StateError,
    specdist_core::TransportError,
    specdist_core::BerezinError,
    specdist_core::MatError,
    std::io::Error
);

/// Output format selected with `--format`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Human,
    Csv,
    Json,
}

/// Settings shared by every command.
pub struct Ctx {
    pub opts: SolveOptions,
    pub format: Format,
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::Invalid(format!("cannot read {}: {e}", path.display())))
}

fn load_geometry(path: &Path) -> Result<Geometry, Failure> {
    Ok(geometry_from_json(&read(path)?)?)
}

/// A geometry as a spectral triple (metric spaces get their canonical one).
fn geometry_triple(geometry: Geometry) -> FiniteSpectralTriple {
    match geometry {
        Geometry::Triple(t) => t,
        Geometry::Metric(m) => finite_metric_triple(&m),
    }
}

fn load_state(path: &Path, alg: &Algebra) -> Result<State, Failure> {
    state_from_json(alg, &read(path)?).map_err(|e| {
        Failure::Invalid(format!("invalid state file {}: {e}", path.display()))
    })
}

// ---------------------------------------------------------------------------
// dist
// ---------------------------------------------------------------------------

pub fn cmd_dist(
    geometry: &Path,
    phi: &Path,
    psi: &Path,
    ctx: &Ctx,
) -> Result<CommandOutput, Failure> {
    let (source, value, gap, iterations) = match load_geometry(geometry)? {
        Geometry::Metric(metric) => {
            let alg = Algebra::diagonal(metric.size());
            let p = load_state(phi, &alg)?;
            let q = load_state(psi, &alg)?;
            let label = format!("metric(n={})", metric.size());
            match kantorovich(&metric, p.coeffs(), q.coeffs()) {
                Ok(plan) => {
                    let dual = dual_objective(&plan.dual_a, p.coeffs(), &plan.dual_b, q.coeffs());
                    (label, plan.value, (plan.value - dual).abs(), 0usize)
                }
                Err(TransportError::Infeasible { .. }) => (label, f64::INFINITY, 0.0, 0),
                Err(e) => return Err(e.into()),
            }
        }
        Geometry::Triple(triple) => {
            let engine = DistanceEngine::new(&triple)?;
            let p = load_state(phi, triple.algebra())?;
            let q = load_state(psi, triple.algebra())?;
            let result = engine.distance(&p, &q, &ctx.opts)?;
            (triple.label.clone(), result.value, result.gap, result.iterations)
        }
    };

    let text = match ctx.format {
        Format::Human => format!(
            "geometry = {source}\ndistance = {}\ngap = {}\niterations = {iterations}\n",
            fmt6(value),
            fmt6(gap)
        ),
        Format::Csv => format!(
            "geometry,value,gap,iterations\n{}\n",
            csv_line(&[
                source,
                fmt_full(value),
                fmt_full(gap),
                iterations.to_string()
            ])
        ),
        Format::Json => json_doc(json!({
            "command": "dist",
            "geometry": source,
            "value": json_real(value),
            "gap": json_real(gap),
            "iterations": iterations,
        })),
    };
    Ok(CommandOutput::ok(text))
}

fn dual_objective(a: &[f64], p: &[f64], b: &[f64], q: &[f64]) -> f64 {
    let pa: f64 = a.iter().zip(p).map(|(x, w)| x * w).sum();
    let qb: f64 = b.iter().zip(q).map(|(x, w)| x * w).sum();
    pa + qb
}

// ---------------------------------------------------------------------------
// pythagoras
// ---------------------------------------------------------------------------

/// Which product-state pairs a sweep visits.
pub enum PairSpec<'a> {
    /// Deterministic parameter grid on each factor (segment parameters for
    /// two-point factors, vertex states otherwise), all unordered pairs.
    Grid { steps: usize },
    /// Seeded random factor states, one fresh pair per row.
    Random { count: usize },
    /// Explicit factor state files `phi_left phi_right psi_left psi_right`.
    Explicit { files: &'a [std::path::PathBuf] },
}

pub fn cmd_pythagoras(
    left: &Path,
    right: &Path,
    spec: PairSpec<'_>,
    ctx: &Ctx,
) -> Result<CommandOutput, Failure> {
    let lt = geometry_triple(load_geometry(left)?);
    let rt = geometry_triple(load_geometry(right)?);
    let lab = ProductLab::from_factors(&lt, &rt)?;

    let pairs: Vec<(State, State, String, String)> = match spec {
        PairSpec::Grid { steps } => {
            let ls = grid_states(lab.structure().left(), steps)?;
            let rs = grid_states(lab.structure().right(), steps)?;
            let mut products = Vec::with_capacity(ls.len() * rs.len());
            for (s1, d1) in &ls {
                for (s2, d2) in &rs {
                    products.push((
                        lab.structure().product_state(s1, s2),
                        format!("{d1} (x) {d2}"),
                    ));
                }
            }
            let mut pairs = Vec::new();
            for i in 0..products.len() {
                for j in (i + 1)..products.len() {
                    pairs.push((
                        products[i].0.clone(),
                        products[j].0.clone(),
                        products[i].1.clone(),
                        products[j].1.clone(),
                    ));
                }
            }
            pairs
        }
        PairSpec::Random { count } => {
            let mut rng = sampling::rng(ctx.opts.seed);
            let mut pairs = Vec::with_capacity(count);
            for i in 0..count {
                let phi1 = random_state(lab.structure().left().algebra(), &mut rng)?;
                let phi2 = random_state(lab.structure().right().algebra(), &mut rng)?;
                let psi1 = random_state(lab.structure().left().algebra(), &mut rng)?;
                let psi2 = random_state(lab.structure().right().algebra(), &mut rng)?;
                pairs.push((
                    lab.structure().product_state(&phi1, &phi2),
                    lab.structure().product_state(&psi1, &psi2),
                    format!("phi-{i:02}"),
                    format!("psi-{i:02}"),
                ));
            }
            pairs
        }
        PairSpec::Explicit { files } => {
            if files.len() != 4 {
                return Err(Failure::Invalid(
                    "--states takes exactly four files: phi_left phi_right psi_left psi_right"
                        .into(),
                ));
            }
            let phi1 = load_state(&files[0], lab.structure().left().algebra())?;
            let phi2 = load_state(&files[1], lab.structure().right().algebra())?;
            let psi1 = load_state(&files[2], lab.structure().left().algebra())?;
            let psi2 = load_state(&files[3], lab.structure().right().algebra())?;
            let name = |p: &Path| {
                p.file_name()
                    .map(|n| n.to_string_lossy().into_owned())
                    .unwrap_or_else(|| p.display().to_string())
            };
            vec![(
                lab.structure().product_state(&phi1, &phi2),
                lab.structure().product_state(&psi1, &psi2),
                format!("{} (x) {}", name(&files[0]), name(&files[1])),
                format!("{} (x) {}", name(&files[2]), name(&files[3])),
            )]
        }
    };

    let mut rows: Vec<(String, String, PythagorasReport)> = Vec::with_capacity(pairs.len());
    for (phi, psi, dphi, dpsi) in &pairs {
        rows.push((dphi.clone(), dpsi.clone(), lab.check(phi, psi, &ctx.opts)?));
    }

    let left_label = lab.structure().left().label.clone();
    let right_label = lab.structure().right().label.clone();
    let text = match ctx.format {
        Format::Human => {
            let mut out = format!("left = {left_label}\nright = {right_label}\n");
            out.push_str(&format!(
                "{:<26} {:<26} {:>12} {:>12} {:>12} {:>12} {:>10} {}\n",
                "phi", "psi", "d_left", "d_right", "d_product", "d_spectral", "ratio", "verdict"
            ));
            for (dphi, dpsi, r) in &rows {
                out.push_str(&format!(
                    "{:<26} {:<26} {:>12} {:>12} {:>12} {:>12} {:>10} {}\n",
                    dphi,
                    dpsi,
                    fmt6(r.d_left),
                    fmt6(r.d_right),
                    fmt6(r.d_product),
                    fmt6(r.d_spectral),
                    fmt6(r.ratio),
                    r.verdict
                ));
            }
            out
        }
        Format::Csv => {
            let mut out = String::from(
                "left,right,phi,psi,d_left,d_right,d_product,d_spectral,ratio,verdict\n",
            );
            for (dphi, dpsi, r) in &rows {
                out.push_str(&csv_line(&[
                    left_label.clone(),
                    right_label.clone(),
                    dphi.clone(),
                    dpsi.clone(),
                    fmt_full(r.d_left),
                    fmt_full(r.d_right),
                    fmt_full(r.d_product),
                    fmt_full(r.d_spectral),
                    fmt_full(r.ratio),
                    r.verdict.to_string(),
                ]));
                out.push('\n');
            }
            out
        }
        Format::Json => json_doc(json!({
            "command": "pythagoras",
            "left": left_label,
            "right": right_label,
            "rows": rows.iter().map(|(dphi, dpsi, r)| json!({
                "phi": dphi,
                "psi": dpsi,
                "d_left": json_real(r.d_left),
                "d_right": json_real(r.d_right),
                "d_product": json_real(r.d_product),
                "d_spectral": json_real(r.d_spectral),
                "ratio": json_real(r.ratio),
                "verdict": r.verdict.to_string(),
                "product_states": r.product_states,
            })).collect::<Vec<_>>(),
        })),
    };
    Ok(CommandOutput::ok(text))
}

/// Deterministic state list for a grid sweep over one factor.
fn grid_states(
    triple: &FiniteSpectralTriple,
    steps: usize,
) -> Result<Vec<(State, String)>, Failure> {
    let alg = triple.algebra();
    match alg.kind() {
        AlgebraKind::Diagonal if alg.dim() == 2 => {
            if steps < 2 {
                return Err(Failure::Invalid("a grid sweep needs at least 2 steps".into()));
            }
            Ok((0..steps)
                .map(|i| {
                    let t = -1.0 + 2.0 * i as f64 / (steps - 1) as f64;
                    (
                        two_point_state(alg, t).expect("grid parameters are valid"),
                        format!("t={t:+.3}"),
                    )
                })
                .collect())
        }
        AlgebraKind::Diagonal => Ok((0..alg.dim())
            .map(|i| {
                let mut p = vec![0.0; alg.dim()];
                p[i] = 1.0;
                (
                    State::from_simplex(alg, &p).expect("vertex states are valid"),
                    format!("e{}", i + 1),
                )
            })
            .collect()),
        _ => Err(Failure::Invalid(
            "a grid sweep needs diagonal factor algebras; use --pairs random".into(),
        )),
    }
}

fn random_state(
    alg: &Algebra,
    rng: &mut sampling::ChaCha8Rng,
) -> Result<State, Failure> {
    match alg.kind() {
        AlgebraKind::Diagonal => {
            Ok(State::from_simplex(alg, &sampling::random_simplex(alg.dim(), rng))?)
        }
        _ => Ok(State::from_density(alg, sampling::random_density(alg.dim(), rng))?),
    }
}

// ---------------------------------------------------------------------------
// transport
// ---------------------------------------------------------------------------

pub fn cmd_transport(
    metric_path: &Path,
    p_path: &Path,
    q_path: &Path,
    ctx: &Ctx,
) -> Result<CommandOutput, Failure> {
    let metric = match load_geometry(metric_path)? {
        Geometry::Metric(m) => m,
        Geometry::Triple(_) => {
            return Err(Failure::Invalid(
                "transport needs a metric-space file with a \"g\" matrix".into(),
            ))
        }
    };
    let alg = Algebra::diagonal(metric.size());
    let p = load_state(p_path, &alg)?;
    let q = load_state(q_path, &alg)?;
    let plan = kantorovich(&metric, p.coeffs(), q.coeffs())?;
    let dual = dual_objective(&plan.dual_a, p.coeffs(), &plan.dual_b, q.coeffs());
    let gap = (plan.value - dual).abs();

    let text = match ctx.format {
        Format::Human => {
            let mut out = format!("value = {}\ngap = {}\n", fmt6(plan.value), fmt6(gap));
            out.push_str(&format!(
                "dual_a = [{}]\n",
                plan.dual_a.iter().map(|&x| fmt6(x)).collect::<Vec<_>>().join(", ")
            ));
            out.push_str(&format!(
                "dual_b = [{}]\n",
                plan.dual_b.iter().map(|&x| fmt6(x)).collect::<Vec<_>>().join(", ")
            ));
            out.push_str("plan (row-stochastic):\n");
            for row in &plan.plan {
                out.push_str(&format!(
                    "  {}\n",
                    row.iter().map(|&x| fmt6(x)).collect::<Vec<_>>().join("  ")
                ));
            }
            out
        }
        Format::Csv => {
            let mut out = String::from("kind,i,j,value\n");
            out.push_str(&format!("value,,,{}\n", fmt_full(plan.value)));
            out.push_str(&format!("gap,,,{}\n", fmt_full(gap)));
            for (i, a) in plan.dual_a.iter().enumerate() {
                out.push_str(&format!("dual_a,{i},,{}\n", fmt_full(*a)));
            }
            for (j, b) in plan.dual_b.iter().enumerate() {
                out.push_str(&format!("dual_b,,{j},{}\n", fmt_full(*b)));
            }
            for (i, row) in plan.plan.iter().enumerate() {
                for (j, x) in row.iter().enumerate() {
                    out.push_str(&format!("plan,{i},{j},{}\n", fmt_full(*x)));
                }
            }
            out
        }
        Format::Json => json_doc(json!({
            "command": "transport",
            "value": json_real(plan.value),
            "gap": json_real(gap),
            "dual_a": json_reals(&plan.dual_a),
            "dual_b": json_reals(&plan.dual_b),
            "plan": plan.plan.iter().map(|row| json_reals(row)).collect::<Vec<_>>(),
        })),
    };
    Ok(CommandOutput::ok(text))
}

// ---------------------------------------------------------------------------
// surface
// ---------------------------------------------------------------------------

pub fn cmd_surface(resolution: usize, ctx: &Ctx) -> Result<CommandOutput, Failure> {
    if resolution < 2 {
        return Err(Failure::Invalid(
            "surface resolution must be at least 2 grid points per axis".into(),
        ));
    }
    let mut grid = Vec::with_capacity(resolution * resolution);
    for i in 0..resolution {
        for j in 0..resolution {
            let t = -1.0 + 2.0 * i as f64 / (resolution - 1) as f64;
            let s = -1.0 + 2.0 * j as f64 / (resolution - 1) as f64;
            let image = tetra_embed(&square_embedding(t, s));
            grid.push((t, s, image));
        }
    }
    // the simplex vertices are the images of the parameter-square corners
    let corners = [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)];
    let vertices: Vec<(f64, f64, [f64; 3])> = cube_vertex_map()
        .iter()
        .zip(corners)
        .map(|(v, (t, s))| (t, s, *v))
        .collect();

    let text = match ctx.format {
        Format::Human | Format::Csv => {
            let full = ctx.format == Format::Csv;
            let num = |x: f64| if full { fmt_full(x) } else { fmt6(x) };
            let mut out = String::from("kind,t,s,x,y,z\n");
            for (t, s, im) in &grid {
                out.push_str(&format!(
                    "grid,{},{},{},{},{}\n",
                    num(*t), num(*s), num(im[0]), num(im[1]), num(im[2])
                ));
            }
            for (t, s, im) in &vertices {
                out.push_str(&format!(
                    "vertex,{},{},{},{},{}\n",
                    num(*t), num(*s), num(im[0]), num(im[1]), num(im[2])
                ));
            }
            out
        }
        Format::Json => json_doc(json!({
            "command": "surface",
            "grid": grid.iter().map(|(t, s, im)| json!({
                "t": json_real(*t), "s": json_real(*s),
                "x": json_real(im[0]), "y": json_real(im[1]), "z": json_real(im[2]),
            })).collect::<Vec<_>>(),
            "vertices": vertices.iter().map(|(t, s, im)| json!({
                "t": json_real(*t), "s": json_real(*s),
                "x": json_real(im[0]), "y": json_real(im[1]), "z": json_real(im[2]),
            })).collect::<Vec<_>>(),
        })),
    };
    Ok(CommandOutput::ok(text))
}

// ---------------------------------------------------------------------------
// marginal-projection
// ---------------------------------------------------------------------------

pub fn cmd_marginal_projection(state_path: &Path, ctx: &Ctx) -> Result<CommandOutput, Failure> {
    let alg = Algebra::diagonal(4);
    let state = load_state(state_path, &alg)?;
    let coeffs = state.coeffs();
    let sum: f64 = coeffs.iter().sum();
    if coeffs.iter().any(|&w| w < -1e-12) || (sum - 1.0).abs() > 1e-9 {
        return Err(Failure::Invalid(format!(
            "the state must be a probability vector on four points \
             (weights >= 0 summing to 1; got sum {sum})"
        )));
    }
    let p: [f64; 4] = [coeffs[0], coeffs[1], coeffs[2], coeffs[3]];
    let embedded = tetra_embed(&p);
    let projected = marginal_projection(&p);
    let projected_embedded = tetra_embed(&projected);
    let residual = (embedded[0] - projected_embedded[0])
        .abs()
        .max((embedded[1] - projected_embedded[1]).abs());
    if residual > 1e-10 {
        return Err(Failure::Invalid(format!(
            "marginal projection moved the first two embedded coordinates by {residual:.3e} \
             (they must be preserved within 1e-10)"
        )));
    }

    let text = match ctx.format {
        Format::Human => {
            let v3 = |v: &[f64; 3]| format!("({}, {}, {})", fmt6(v[0]), fmt6(v[1]), fmt6(v[2]));
            let v4 = |v: &[f64; 4]| {
                format!("({}, {}, {}, {})", fmt6(v[0]), fmt6(v[1]), fmt6(v[2]), fmt6(v[3]))
            };
            format!(
                "state = {}\nf(state) = {}\nproduct of marginals = {}\n\
                 f(product of marginals) = {}\nfirst-two-coordinate residual = {}\n",
                v4(&p),
                v3(&embedded),
                v4(&projected),
                v3(&projected_embedded),
                fmt6(residual)
            )
        }
        Format::Csv => {
            let mut out = String::from("quantity,c1,c2,c3,c4\n");
            let row4 = |name: &str, v: &[f64; 4]| {
                format!(
                    "{name},{},{},{},{}\n",
                    fmt_full(v[0]), fmt_full(v[1]), fmt_full(v[2]), fmt_full(v[3])
                )
            };
            let row3 = |name: &str, v: &[f64; 3]| {
                format!("{name},{},{},{},\n", fmt_full(v[0]), fmt_full(v[1]), fmt_full(v[2]))
            };
            out.push_str(&row4("state", &p));
            out.push_str(&row3("embedded", &embedded));
            out.push_str(&row4("projected_state", &projected));
            out.push_str(&row3("projected_embedded", &projected_embedded));
            out.push_str(&format!("residual,{},,,\n", fmt_full(residual)));
            out
        }
        Format::Json => json_doc(json!({
            "command": "marginal_projection",
            "state": json_reals(&p),
            "embedded": json_reals(&embedded),
            "projected_state": json_reals(&projected),
            "projected_embedded": json_reals(&projected_embedded),
            "residual": json_real(residual),
        })),
    };
    Ok(CommandOutput::ok(text))
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

pub fn cmd_verify(suite: &str, resolution: usize, ctx: &Ctx) -> Result<CommandOutput, Failure> {
    let checks = verify::run_suite(suite, resolution, &ctx.opts)?;
    let all_passed = checks.iter().all(|c| c.passed);

    let text = match ctx.format {
        Format::Human => {
            let mut out = String::new();
            for c in &checks {
                out.push_str(&format!(
                    "[{}] {}: measured {}, bound {}\n",
                    if c.passed { "pass" } else { "FAIL" },
                    c.name,
                    fmt6(c.measured),
                    fmt6(c.bound)
                ));
            }
            out.push_str(&format!(
                "{}/{} checks passed\n",
                checks.iter().filter(|c| c.passed).count(),
                checks.len()
            ));
            out
        }
        Format::Csv => {
            let mut out = String::from("suite,check,passed,measured,bound\n");
            for c in &checks {
                out.push_str(&csv_line(&[
                    c.suite.to_string(),
                    c.name.to_string(),
                    c.passed.to_string(),
                    fmt_full(c.measured),
                    fmt_full(c.bound),
                ]));
                out.push('\n');
            }
            out
        }
        Format::Json => json_doc(json!({
            "command": "verify",
            "suite": suite,
            "passed": all_passed,
            "checks": checks.iter().map(|c| json!({
                "suite": c.suite,
                "name": c.name,
                "passed": c.passed,
                "measured": json_real(c.measured),
                "bound": json_real(c.bound),
            })).collect::<Vec<_>>(),
        })),
    };
    Ok(CommandOutput {
        text,
        exit: if all_passed { 0 } else { 1 },
    })
}
