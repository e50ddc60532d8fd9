//! Command-line driver. Every invocation prints one JSON document
//! `{command, inputs, outputs, status}`.
//!
//! Exit codes: 0 when the status is `ok` or `converged`, 1 for any other
//! domain outcome (infeasible module, failed check, obstruction), 2 for
//! usage and configuration errors.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::deform::{unit_k_tangent, ContinuationStatus, DeformError, DeformProblem};
use crate::gamma::{ClassFunction, GammaData, GammaError, GammaSpec};
use crate::hyperplane::{
    hyp_tangent_basis, hyp_value, trace_formulas, HyperplaneError, HyperplaneSpec, MEMBERSHIP_TOL,
};
use crate::linalg::{c64, Matrix, Scalarity, C64};
use crate::rank1::{rank1_residuals, segment_lambdas, segment_rep, Infeasible, RepY};
use crate::symgroup::{c_operator, refl_hom_dim, Partition, PartitionError};
use crate::wreath::{
    build_m, end_dim, presentation_check, symplectic_reflections, wreath_residuals, ParamPoint, ReflectionKind,
    WreathError, WreathRep,
};

pub const SUBCOMMANDS: [&str; 8] = [
    "partition info",
    "gamma info",
    "rank1 build",
    "wreath reflections",
    "wreath presentation-check",
    "rep check",
    "hyperplane eval",
    "deform run",
];

/// Environment variable overriding the default tolerance.
pub const TOL_ENV: &str = "WSRA_TOL";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Gamma(#[from] GammaError),
    #[error(transparent)]
    Infeasible(#[from] Infeasible),
    #[error(transparent)]
    Wreath(#[from] WreathError),
    #[error(transparent)]
    Hyperplane(#[from] HyperplaneError),
    #[error(transparent)]
    Deform(#[from] DeformError),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Io { .. } => "io",
            CliError::Partition(_) => "partition",
            CliError::Gamma(_) => "gamma",
            CliError::Infeasible(_) => "infeasible",
            CliError::Wreath(_) => "wreath",
            CliError::Hyperplane(_) => "hyperplane",
            CliError::Deform(_) => "deform",
        }
    }

    fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Partition(_) | CliError::Gamma(GammaError::BadSpec(_)) => 2,
            _ => 1,
        }
    }
}

/// `[re, im]`.
pub type JsonComplex = [f64; 2];
/// Rows of `[re, im]` entries.
pub type JsonMatrix = Vec<Vec<JsonComplex>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum YConfig {
    /// Cyclic `Gamma` only.
    Segment {
        range: [i64; 2],
    },
    /// `Gamma` acts by the character `irrep`, `x = y = 0`.
    OneDimensional {
        irrep: usize,
    },
    Explicit {
        matrices: ExplicitY,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExplicitY {
    /// Images of the generators of `Gamma`, in the order of `gamma info`.
    pub generators: Vec<JsonMatrix>,
    pub x: JsonMatrix,
    pub y: JsonMatrix,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirectionConfig {
    pub k: JsonComplex,
    #[serde(default)]
    pub c: BTreeMap<String, JsonComplex>,
}

/// Replacement images of `x_1..x_N` and `y_1..y_N` on `M`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixOverrides {
    pub x: Vec<JsonMatrix>,
    pub y: Vec<JsonMatrix>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(rename = "N")]
    pub n: usize,
    pub gamma: String,
    #[serde(rename = "W")]
    pub w: Vec<usize>,
    #[serde(rename = "Y")]
    pub y: YConfig,
    #[serde(default)]
    pub k: JsonComplex,
    /// `c` on the non-identity classes, keyed `class_<index>`.
    #[serde(default)]
    pub c: BTreeMap<String, JsonComplex>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<DirectionConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrices: Option<MatrixOverrides>,
}

impl RunConfig {
    pub fn from_json_str(s: &str) -> Result<Self, CliError> {
        serde_json::from_str(s).map_err(|e| CliError::Config(format!("invalid config: {e}")))
    }

    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }
}

fn class_function(gamma: &GammaData, map: &BTreeMap<String, JsonComplex>) -> Result<ClassFunction, CliError> {
    let value = Value::Object(map.iter().map(|(k, v)| (k.clone(), json!(v))).collect());
    let c = ClassFunction::from_json(&value)?;
    gamma.check_class_function(&c)?;
    Ok(c)
}

fn matrix_from_json(rows: &JsonMatrix) -> Result<Matrix, CliError> {
    let r = rows.len();
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|row| row.len() != cols) {
        return Err(CliError::Config("ragged matrix".into()));
    }
    Ok(Matrix::from_fn(r, cols, |i, j| c64(rows[i][j][0], rows[i][j][1])))
}

fn complex_json(z: C64) -> Value {
    json!([z.re, z.im])
}

fn complex_list(zs: &[C64]) -> Value {
    Value::Array(zs.iter().map(|&z| complex_json(z)).collect())
}

fn matrix_json(m: &Matrix) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| complex_json(m[(i, j)])).collect()))
            .collect(),
    )
}

/// Coordinate labels matching [`ParamPoint::coords`].
fn coordinate_labels(gamma: &GammaData) -> Vec<String> {
    std::iter::once("k".to_string())
        .chain(gamma.nonidentity_classes().into_iter().map(|k| format!("class_{k}")))
        .collect()
}

fn coords_json(gamma: &GammaData, coords: &[C64]) -> Value {
    let labels = coordinate_labels(gamma);
    Value::Object(
        labels
            .into_iter()
            .zip(coords)
            .map(|(l, &z)| (l, complex_json(z)))
            .collect(),
    )
}

/// Everything a config describes, validated.
pub struct Setup {
    pub gamma: Arc<GammaData>,
    pub w: Partition,
    pub y: RepY,
    pub rep: WreathRep,
    pub params: ParamPoint,
}

pub fn setup(config: &RunConfig) -> Result<Setup, CliError> {
    let spec: GammaSpec = config.gamma.parse()?;
    let gamma = Arc::new(spec.build());
    let w = Partition::new(config.w.clone())?;
    let c = class_function(&gamma, &config.c)?;
    let y = build_y(&gamma, spec, &config.y, &c)?;
    let mut rep = build_m(&w, &y, config.n)?;
    if let Some(m) = &config.matrices {
        let vectors =
            m.x.iter()
                .chain(&m.y)
                .map(matrix_from_json)
                .collect::<Result<Vec<_>, _>>()?;
        rep = rep.with_vectors(&vectors)?;
    }
    let params = ParamPoint::new(c64(config.k[0], config.k[1]), c);
    Ok(Setup {
        gamma,
        w,
        y,
        rep,
        params,
    })
}

fn build_y(gamma: &Arc<GammaData>, spec: GammaSpec, y: &YConfig, c: &ClassFunction) -> Result<RepY, CliError> {
    Ok(match y {
        YConfig::Segment { range } => match spec {
            GammaSpec::Cyclic(l) => segment_rep(l, range[0], range[1], c)?,
            other => return Err(Infeasible::NotCyclic(other).into()),
        },
        YConfig::OneDimensional { irrep } => {
            if *irrep >= gamma.num_classes() || gamma.irrep_dim(*irrep) != 1.0 {
                return Err(CliError::Config(format!("irrep {irrep} is not one-dimensional")));
            }
            RepY::one_dimensional(gamma.clone(), *irrep, c.clone())?
        }
        YConfig::Explicit { matrices } => {
            let gens = matrices
                .generators
                .iter()
                .map(matrix_from_json)
                .collect::<Result<Vec<_>, _>>()?;
            RepY::explicit(
                gamma.clone(),
                &gens,
                matrix_from_json(&matrices.x)?,
                matrix_from_json(&matrices.y)?,
                c.clone(),
            )?
        }
    })
}

#[derive(Parser, Debug)]
#[command(
    name = "wsra",
    about = "Representations of wreath-product symplectic reflection algebras"
)]
struct Cli {
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Young diagram data.
    Partition {
        #[command(subcommand)]
        cmd: PartitionCmd,
    },
    /// Finite subgroups of SL(2).
    Gamma {
        #[command(subcommand)]
        cmd: GammaCmd,
    },
    /// Modules over the rank-1 algebra.
    Rank1 {
        #[command(subcommand)]
        cmd: Rank1Cmd,
    },
    /// The wreath product and its reflections.
    Wreath {
        #[command(subcommand)]
        cmd: WreathCmd,
    },
    /// Representations on W ⊗ Y^N.
    Rep {
        #[command(subcommand)]
        cmd: RepCmd,
    },
    Hyperplane {
        #[command(subcommand)]
        cmd: HyperplaneCmd,
    },
    Deform {
        #[command(subcommand)]
        cmd: DeformCmd,
    },
}

#[derive(Subcommand, Debug)]
enum PartitionCmd {
    /// Corners, content, dimension and the scalarity of s_12 + .. + s_1N.
    Info {
        #[arg(value_parser = parse_partition)]
        partition: Partition,
    },
}

fn parse_partition(s: &str) -> Result<Partition, PartitionError> {
    s.parse()
}

#[derive(Subcommand, Debug)]
enum GammaCmd {
    /// Classes and character table, e.g. `cyclic:3` or `binary_dihedral:2`.
    Info { spec: String },
}

#[derive(Subcommand, Debug)]
enum Rank1Cmd {
    /// Build Y from a config file, or from a segment given on the command line.
    Build {
        #[arg(long, conflicts_with_all = ["gamma", "range"])]
        config: Option<PathBuf>,
        #[arg(long)]
        gamma: Option<String>,
        /// `a,b`.
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        range: Option<[i64; 2]>,
        /// JSON object `{"class_1": [re, im], ..}`.
        #[arg(long)]
        c: Option<String>,
    },
}

fn parse_range(s: &str) -> Result<[i64; 2], String> {
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        [a, b] => Ok([
            a.trim().parse().map_err(|e| format!("{e}"))?,
            b.trim().parse().map_err(|e| format!("{e}"))?,
        ]),
        _ => Err(format!("expected a,b, got {s:?}")),
    }
}

#[derive(Subcommand, Debug)]
enum WreathCmd {
    /// Enumerate symplectic reflections of Gamma_N.
    Reflections {
        #[arg(long = "n")]
        n: usize,
        #[arg(long)]
        gamma: String,
    },
    /// Compare the kappa-form definition with the explicit relations.
    PresentationCheck {
        #[arg(long = "n")]
        n: usize,
        #[arg(long)]
        gamma: String,
        /// Number of random parameter points.
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug)]
enum RepCmd {
    /// Residuals of every relation at the config's (k, c).
    Check {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
    },
}

#[derive(Subcommand, Debug)]
enum HyperplaneCmd {
    /// Hyperplane value at the config's (k, c) and a tangent basis.
    Eval {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
    },
}

#[derive(Subcommand, Debug)]
enum DeformCmd {
    /// Continue M from k = 0 along the config direction.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long = "h-max")]
        h_max: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long = "series-order")]
        series_order: Option<usize>,
    },
}

/// Exit code and the JSON report.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub report: String,
}

struct Report {
    command: &'static str,
    inputs: Value,
    outputs: Value,
    status: String,
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let status = if code == 0 { "help" } else { "usage_error" };
            let doc = json!({
                "command": Value::Null,
                "inputs": {"argv": argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect::<Vec<_>>()},
                "outputs": {
                    "message": e.to_string(),
                    "valid_subcommands": SUBCOMMANDS,
                },
                "status": status,
            });
            return Outcome {
                code,
                report: render(&doc),
            };
        }
    };
    let default_tol = match std::env::var(TOL_ENV) {
        Ok(v) => match v.parse::<f64>() {
            Ok(t) if t > 0.0 => Some(t),
            _ => {
                let doc = json!({
                    "command": Value::Null,
                    "inputs": {TOL_ENV: v},
                    "outputs": {"message": format!("{TOL_ENV} must be a positive number")},
                    "status": "usage_error",
                });
                return Outcome {
                    code: 2,
                    report: render(&doc),
                };
            }
        },
        Err(_) => None,
    };
    let command = command_name(&cli.command);
    let (code, doc) = match dispatch(&cli.command, default_tol) {
        Ok(r) => {
            let code = if r.status == "ok" || r.status == "converged" {
                0
            } else {
                1
            };
            (
                code,
                json!({"command": r.command, "inputs": r.inputs, "outputs": r.outputs, "status": r.status}),
            )
        }
        Err(e) => (
            e.exit_code(),
            json!({
                "command": command,
                "inputs": Value::Null,
                "outputs": {"error": {"kind": e.kind(), "message": e.to_string()}},
                "status": "error",
            }),
        ),
    };
    let report = render(&doc);
    if let Some(path) = &cli.output {
        if let Err(source) = std::fs::write(path, format!("{report}\n")) {
            let e = CliError::Io {
                path: path.clone(),
                source,
            };
            let doc = json!({
                "command": command,
                "inputs": Value::Null,
                "outputs": {"error": {"kind": e.kind(), "message": e.to_string()}},
                "status": "error",
            });
            return Outcome {
                code: 1,
                report: render(&doc),
            };
        }
    }
    Outcome { code, report }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Partition { .. } => SUBCOMMANDS[0],
        Command::Gamma { .. } => SUBCOMMANDS[1],
        Command::Rank1 { .. } => SUBCOMMANDS[2],
        Command::Wreath {
            cmd: WreathCmd::Reflections { .. },
        } => SUBCOMMANDS[3],
        Command::Wreath { .. } => SUBCOMMANDS[4],
        Command::Rep { .. } => SUBCOMMANDS[5],
        Command::Hyperplane { .. } => SUBCOMMANDS[6],
        Command::Deform { .. } => SUBCOMMANDS[7],
    }
}

/// Pretty JSON with every float rounded to 15 significant digits.
pub fn render(doc: &Value) -> String {
    serde_json::to_string_pretty(&round_floats(doc)).expect("JSON values always serialise")
}

fn round_floats(v: &Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("checked f64");
            let rounded: f64 = format!("{x:.14e}").parse().expect("formatted float parses");
            // normalise -0
            let rounded = if rounded == 0.0 { 0.0 } else { rounded };
            serde_json::Number::from_f64(rounded).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.iter().map(round_floats).collect()),
        Value::Object(o) => Value::Object(o.iter().map(|(k, v)| (k.clone(), round_floats(v))).collect()),
        other => other.clone(),
    }
}

fn dispatch(cmd: &Command, default_tol: Option<f64>) -> Result<Report, CliError> {
    match cmd {
        Command::Partition {
            cmd: PartitionCmd::Info { partition },
        } => Ok(partition_info(partition)),
        Command::Gamma {
            cmd: GammaCmd::Info { spec },
        } => gamma_info(spec),
        Command::Rank1 {
            cmd:
                Rank1Cmd::Build {
                    config,
                    gamma,
                    range,
                    c,
                },
        } => rank1_build(config.as_ref(), gamma.as_deref(), *range, c.as_deref(), default_tol),
        Command::Wreath {
            cmd: WreathCmd::Reflections { n, gamma },
        } => wreath_reflections(*n, gamma),
        Command::Wreath {
            cmd:
                WreathCmd::PresentationCheck {
                    n,
                    gamma,
                    samples,
                    seed,
                },
        } => wreath_presentation(*n, gamma, *samples, *seed),
        Command::Rep {
            cmd: RepCmd::Check { config, tol },
        } => rep_check(config, tol.or(default_tol).unwrap_or(1e-10)),
        Command::Hyperplane {
            cmd: HyperplaneCmd::Eval { config, tol },
        } => hyperplane_eval(config, tol.or(default_tol).unwrap_or(MEMBERSHIP_TOL)),
        Command::Deform {
            cmd:
                DeformCmd::Run {
                    config,
                    h_max,
                    steps,
                    tol,
                    series_order,
                },
        } => deform_run(
            config,
            *h_max,
            *steps,
            tol.or(default_tol).unwrap_or(crate::deform::STEP_TOL),
            *series_order,
        ),
    }
}

fn partition_info(mu: &Partition) -> Report {
    let contents = mu.contents();
    let (scalarity, value) = match c_operator(mu) {
        Scalarity::Scalar(v) => ("scalar", Value::String(v.to_string())),
        Scalarity::NotScalar { .. } => ("not_scalar", Value::Null),
    };
    Report {
        command: SUBCOMMANDS[0],
        inputs: json!({"partition": mu.to_string()}),
        outputs: json!({
            "n": mu.n(),
            "corners": mu.corners().len(),
            "corner_cells": mu.corners(),
            "content": contents.total,
            "dim": mu.hook_dim(),
            "refl_hom_dim": refl_hom_dim(mu),
            "rectangle": mu.rectangle().map(|(l, m)| json!({"height": l, "width": m})),
            "c_operator": scalarity,
            "c_operator_value": value,
        }),
        status: "ok".into(),
    }
}

fn gamma_info(spec: &str) -> Result<Report, CliError> {
    let parsed: GammaSpec = spec.parse()?;
    let g = parsed.build();
    let classes: Vec<Value> = (0..g.num_classes())
        .map(|k| {
            json!({
                "index": k,
                "size": g.class_sizes[k],
                "representative": matrix_json(g.matrix(g.class_reps[k])),
            })
        })
        .collect();
    Ok(Report {
        command: SUBCOMMANDS[1],
        inputs: json!({"gamma": parsed.to_string()}),
        outputs: json!({
            "order": g.order(),
            "generators": g.generators.iter().map(|&e| matrix_json(g.matrix(e))).collect::<Vec<_>>(),
            "classes": classes,
            "character_table": g.char_table.iter().map(|row| complex_list(row)).collect::<Vec<_>>(),
            "fixed_vector_dim": g.fixed_vector_dim(),
        }),
        status: "ok".into(),
    })
}

fn rank1_build(
    config: Option<&PathBuf>,
    gamma: Option<&str>,
    range: Option<[i64; 2]>,
    c: Option<&str>,
    default_tol: Option<f64>,
) -> Result<Report, CliError> {
    let tol = default_tol.unwrap_or(1e-10);
    let (spec, y_config, c_map) = match config {
        Some(path) => {
            let cfg = RunConfig::load(path)?;
            (cfg.gamma.clone(), cfg.y.clone(), cfg.c.clone())
        }
        None => {
            let gamma = gamma.ok_or_else(|| CliError::Config("either --config or --gamma is required".into()))?;
            let range = range.ok_or_else(|| CliError::Config("--range is required without --config".into()))?;
            let c_map: BTreeMap<String, JsonComplex> = match c {
                Some(text) => serde_json::from_str(text).map_err(|e| CliError::Config(format!("invalid --c: {e}")))?,
                None => BTreeMap::new(),
            };
            (gamma.to_string(), YConfig::Segment { range }, c_map)
        }
    };
    let parsed: GammaSpec = spec.parse()?;
    let g = Arc::new(parsed.build());
    let cf = class_function(&g, &c_map)?;
    let y = build_y(&g, parsed, &y_config, &cf)?;
    let res = rank1_residuals(&y);
    let base_value = c64(y.dim as f64, 0.0)
        + g.nonidentity_classes()
            .into_iter()
            .map(|k| cf.at(k) * y.character[k] * g.class_sizes[k] as f64)
            .sum::<C64>();
    let lambdas = match y_config {
        YConfig::Segment { range } => complex_list(&segment_lambdas(&g, range[0], range[1], &cf)),
        _ => Value::Null,
    };
    let ok = res.max() <= tol;
    Ok(Report {
        command: SUBCOMMANDS[2],
        inputs: json!({"gamma": parsed.to_string(), "Y": y_config, "c": cf.to_json()}),
        outputs: json!({
            "dim": y.dim,
            "lambdas": lambdas,
            "character": complex_list(&y.character),
            "x": matrix_json(&y.x),
            "y": matrix_json(&y.y),
            "residuals": {
                "commutator": res.commutator,
                "equivariance": res.equivariance,
                "group": res.group,
            },
            "commutant_dim": y.commutant_dim(),
            "hyperplane_value_at_k0": complex_json(base_value),
        }),
        status: if ok { "ok" } else { "violated" }.into(),
    })
}

fn wreath_reflections(n: usize, gamma: &str) -> Result<Report, CliError> {
    let parsed: GammaSpec = gamma.parse()?;
    let g = parsed.build();
    let order = crate::wreath::group_order(n, &g);
    if order > crate::wreath::MAX_GROUP_ORDER {
        return Err(WreathError::GroupTooLarge(order).into());
    }
    let census = symplectic_reflections(n, &g);
    let expected_s = n * n.saturating_sub(1) / 2 * g.order();
    let expected_gamma = n * (g.order() - 1);
    let classes: Vec<Value> = census
        .classes
        .iter()
        .map(|c| {
            json!({
                "kind": match c.kind { ReflectionKind::S => "S", ReflectionKind::Gamma => "Gamma" },
                "gamma_class": c.gamma_class,
                "size": c.size,
            })
        })
        .collect();
    let counts_match =
        census.count(ReflectionKind::S) == expected_s && census.count(ReflectionKind::Gamma) == expected_gamma;
    Ok(Report {
        command: SUBCOMMANDS[3],
        inputs: json!({"N": n, "gamma": parsed.to_string()}),
        outputs: json!({
            "group_order": order,
            "count_s": census.count(ReflectionKind::S),
            "count_gamma": census.count(ReflectionKind::Gamma),
            "expected_s": expected_s,
            "expected_gamma": expected_gamma,
            "classes": classes,
        }),
        status: if counts_match { "ok" } else { "mismatch" }.into(),
    })
}

/// Random `(k, c)` with real and imaginary parts in `[-2, 2]`.
pub fn random_params(g: &GammaData, rng: &mut ChaCha8Rng) -> ParamPoint {
    let mut z = || c64(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
    let k = z();
    ParamPoint::new(k, ClassFunction::from_classes(g, |_| z()))
}

fn wreath_presentation(n: usize, gamma: &str, samples: usize, seed: u64) -> Result<Report, CliError> {
    let parsed: GammaSpec = gamma.parse()?;
    let g = parsed.build();
    let order = crate::wreath::group_order(n, &g);
    if order > crate::wreath::MAX_GROUP_ORDER {
        return Err(WreathError::GroupTooLarge(order).into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for i in 0..samples {
        let p = random_params(&g, &mut rng);
        if let Err(mismatches) = presentation_check(n, &g, &p) {
            let first = &mismatches[0];
            failures.push(json!({
                "sample": i,
                "params": coords_json(&g, &p.coords(&g)),
                "mismatches": mismatches.len(),
                "first": {
                    "u": first.u.to_string(),
                    "v": first.v.to_string(),
                    "element": {"perm": first.element.perm.0, "tuple": first.element.tuple},
                    "from_kappa": complex_json(first.from_kappa),
                    "from_relations": complex_json(first.from_relations),
                },
            }));
        }
    }
    let ok = failures.is_empty();
    Ok(Report {
        command: SUBCOMMANDS[4],
        inputs: json!({"N": n, "gamma": parsed.to_string(), "samples": samples, "seed": seed}),
        outputs: json!({"checked": samples, "failures": failures}),
        status: if ok { "ok" } else { "mismatch" }.into(),
    })
}

fn config_inputs(path: &std::path::Path, config: &RunConfig) -> Value {
    json!({"config_path": path.display().to_string(), "config": config})
}

fn rep_check(path: &std::path::Path, tol: f64) -> Result<Report, CliError> {
    let config = RunConfig::load(path)?;
    let s = setup(&config)?;
    let res = wreath_residuals(&s.rep, &s.params);
    let relations: Map<String, Value> = res.relations.iter().map(|(k, r)| (k.to_string(), json!(r))).collect();
    let hyp = HyperplaneSpec::from_rep(&s.w, &s.y)
        .ok()
        .map(|h| complex_json(hyp_value(&h, &s.params)));
    let trace = crate::hyperplane::trace_condition_check(&s.rep, &s.params);
    let end = end_dim(&s.rep).ok();
    let ok = res.max() <= tol;
    Ok(Report {
        command: SUBCOMMANDS[5],
        inputs: config_inputs(path, &config),
        outputs: json!({
            "dim_m": s.rep.dim_m,
            "tolerance": tol,
            "relations": relations,
            "r1_max": res.r1().into_iter().fold(0.0, f64::max),
            "r2_max": res.r2_max(),
            "equivariance": res.equivariance,
            "group": res.group,
            "commutant_dim": res.commutant_dim,
            "end_dim": end,
            "trace_condition": complex_list(&trace),
            "hyperplane_value": hyp,
        }),
        status: if ok { "ok" } else { "violated" }.into(),
    })
}

fn hyperplane_eval(path: &std::path::Path, tol: f64) -> Result<Report, CliError> {
    let config = RunConfig::load(path)?;
    let s = setup(&config)?;
    let spec = HyperplaneSpec::from_rep(&s.w, &s.y)?;
    let value = hyp_value(&spec, &s.params);
    let basis: Vec<Value> = hyp_tangent_basis(&spec)
        .iter()
        .map(|v| coords_json(&s.gamma, v))
        .collect();
    let predicted: Vec<Value> = (0..s.gamma.num_classes())
        .filter(|&k| k != s.gamma.identity_class)
        .map(|k| {
            let p = trace_formulas(&s.w, &s.y, config.n, k);
            json!({"class": k, "tr_gamma_i": complex_json(p.gamma_i), "tr_s_gamma": complex_json(p.s_gamma)})
        })
        .collect();
    Ok(Report {
        command: SUBCOMMANDS[6],
        inputs: config_inputs(path, &config),
        outputs: json!({
            "value": complex_json(value),
            "is_member": value.norm() <= tol,
            "tolerance": tol,
            "gradient": coords_json(&s.gamma, &spec.gradient()),
            "tangent_basis": basis,
            "trace_formulas": predicted,
        }),
        status: "ok".into(),
    })
}

fn direction_coords(s: &Setup, config: &RunConfig) -> Result<Vec<C64>, CliError> {
    match &config.direction {
        Some(d) => {
            // classes left out of a direction do not move
            let mut c = d.c.clone();
            for k in s.gamma.nonidentity_classes() {
                c.entry(format!("class_{k}")).or_insert([0.0, 0.0]);
            }
            let c = class_function(&s.gamma, &c)?;
            Ok(ParamPoint::new(c64(d.k[0], d.k[1]), c).coords(&s.gamma))
        }
        None => Ok(unit_k_tangent(&HyperplaneSpec::from_rep(&s.w, &s.y)?)?),
    }
}

fn deform_run(
    path: &std::path::Path,
    h_max: f64,
    steps: usize,
    tol: f64,
    series_order: Option<usize>,
) -> Result<Report, CliError> {
    let config = RunConfig::load(path)?;
    let s = setup(&config)?;
    let direction = direction_coords(&s, &config)?;
    let problem = DeformProblem::new(s.rep.clone())?;
    let obstruction = problem.first_order_obstruction(&direction)?;
    let result = problem.continue_path(&direction, h_max, steps, tol)?;
    let step_json: Vec<Value> = result
        .steps
        .iter()
        .map(|st| {
            json!({
                "index": st.index,
                "params": coords_json(&s.gamma, &st.params.coords(&s.gamma)),
                "residual": st.residual,
                "newton_iterations": st.newton_iterations,
                "kernel_dim": st.jacobian_kernel_dim,
                "commutant_dim": st.commutant_dim,
            })
        })
        .collect();
    let series = series_order.map(|order| match problem.series_solve(&direction, order) {
        Ok(series) => {
            let end = result.steps.last().expect("base point is always recorded");
            let reached = end.index as f64 * h_max / steps as f64;
            json!({
                "order": order,
                "status": "solved",
                "unresolved": series.unresolved,
                "difference_at_last_step": crate::linalg::max_norm(&(series.evaluate(c64(reached, 0.0)) - &end.coeffs)),
            })
        }
        Err(DeformError::Obstructed {
            order: at,
            magnitude,
            unresolved_norm,
        }) => json!({
            "order": order,
            "status": "obstructed",
            "obstructed_order": at,
            "magnitude": magnitude,
            "unresolved": unresolved_norm,
        }),
        Err(e) => json!({"order": order, "status": "error", "message": e.to_string()}),
    });
    let detail = match &result.status {
        ContinuationStatus::Converged => Value::Null,
        ContinuationStatus::Obstructed {
            step,
            magnitude,
            residual,
        } => json!({"step": step, "magnitude": magnitude, "residual": residual}),
        ContinuationStatus::Diverged { step, residual } => json!({"step": step, "residual": residual}),
    };
    Ok(Report {
        command: SUBCOMMANDS[7],
        inputs: json!({
            "config_path": path.display().to_string(),
            "config": config,
            "h_max": h_max,
            "steps": steps,
            "tol": tol,
            "series_order": series_order,
        }),
        outputs: json!({
            "direction": coords_json(&s.gamma, &direction),
            "equivariant_dim": problem.basis.dim,
            "end_dim": end_dim(&s.rep).ok(),
            "first_order_obstruction": {
                "value": complex_json(obstruction.value),
                "unresolved": obstruction.unresolved_norm,
            },
            "steps": step_json,
            "failure": detail,
            "series": series,
        }),
        status: result.status.label().into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_keeps_fifteen_digits() {
        let v = round_floats(&json!({"a": 0.1 + 0.2, "b": -0.0, "c": [1e-17, 2]}));
        assert_eq!(v, json!({"a": 0.3, "b": 0.0, "c": [1e-17, 2]}));
    }

    #[test]
    fn config_roundtrip() {
        let text = r#"{"N":2,"gamma":"cyclic:3","W":[2],"Y":{"type":"segment","range":[0,1]},
            "k":[0,0],"c":{"class_1":[-2,0],"class_2":[-2,0]}}"#;
        let cfg = RunConfig::from_json_str(text).unwrap();
        let again = RunConfig::from_json_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(cfg, again);
        assert!(setup(&cfg).is_ok());
    }

    #[test]
    fn usage_errors_list_subcommands() {
        let out = run(["wsra", "nonsense"]);
        assert_eq!(out.code, 2);
        let v: Value = serde_json::from_str(&out.report).unwrap();
        assert_eq!(v["outputs"]["valid_subcommands"].as_array().unwrap().len(), 8);
    }
}
