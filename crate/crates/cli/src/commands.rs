//! Subcommand implementations. Every command reads one network file,
//! writes one deterministic artifact (JSON or CSV) to `--output` or
//! stdout, and signals outcomes through the exit code: 0 on success, 1
//! when a validation threshold fails, 2 on parse or I/O problems.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use qsc_core::classical::{self, ClassicalModel};
use qsc_core::cmat::{CMat, C64};
use qsc_core::focksim::{
    holevo_experiment, product_experiment, ConvergenceRow, MatrixElementSpec, StepFunction,
};
use qsc_core::heisenberg::{weyl_ccr_analytic, weyl_ccr_truncated, EuclideanElem, TruncatedFock};
use qsc_core::qsde::{
    self, belavkin_rep, coeff_to_slh, gl_inverse, hat_exp, hat_log, unitarity_residuals,
    CoeffMatrix,
};
use qsc_core::random::{gaussian_vector, haar_unitary};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::model::{NetworkFile, SystemDoc};
use crate::parser::{parse_expression, pretty_print, Expr};

/// Failure carrying the process exit code: 1 for threshold/validation
/// failures, 2 for parse and I/O errors.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub error: anyhow::Error,
}

impl Failure {
    pub fn validation(error: anyhow::Error) -> Self {
        Failure { code: 1, error }
    }

    pub fn parse(error: anyhow::Error) -> Self {
        Failure { code: 2, error }
    }
}

type CmdResult = std::result::Result<(), Failure>;

#[derive(Copy, Clone, PartialEq, Eq, Debug, clap::ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Clone, Debug, clap::Args)]
pub struct CommonArgs {
    /// Network definition file (JSON)
    #[arg(long)]
    pub input: PathBuf,
    /// Output file; stdout when omitted
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Residual tolerance for checks and readbacks
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Output format; defaults to json for model/report commands and csv
    /// for tabular commands
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
}

impl CommonArgs {
    fn load(&self) -> std::result::Result<NetworkFile, Failure> {
        NetworkFile::load(&self.input).map_err(Failure::parse)
    }

    fn format_or(&self, default: OutputFormat) -> OutputFormat {
        self.format.unwrap_or(default)
    }

    fn require_format(&self, supported: OutputFormat) -> CmdResult {
        if self.format_or(supported) != supported {
            return Err(Failure::parse(anyhow!(
                "this command only supports --format {}",
                match supported {
                    OutputFormat::Json => "json",
                    OutputFormat::Csv => "csv",
                }
            )));
        }
        Ok(())
    }
}

fn write_output(path: Option<&Path>, content: &str) -> CmdResult {
    match path {
        Some(p) => std::fs::write(p, content)
            .with_context(|| format!("writing {}", p.display()))
            .map_err(Failure::parse),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn to_pretty_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialization cannot fail");
    s.push('\n');
    s
}

/// 17 significant digits, the shared float convention of the CSV outputs.
fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x:.16e}")
    }
}

fn parse_file_expression(file: &NetworkFile) -> std::result::Result<Expr, Failure> {
    let text = file.expression().map_err(Failure::parse)?;
    let expr = parse_expression(text).map_err(|e| Failure::parse(anyhow!("{e}")))?;
    // resolve every referenced name up front so resolution errors carry offsets
    for (name, offset) in crate::parser::leaf_names(&expr) {
        if !file.systems.contains_key(name) {
            return Err(Failure::parse(anyhow!(
                "unknown system '{name}' referenced at byte {offset}"
            )));
        }
    }
    Ok(expr)
}

// ---------------------------------------------------------------------
// compose
// ---------------------------------------------------------------------

enum Value {
    Classical(ClassicalModel),
    Quantum(CoeffMatrix),
}

fn eval_expr(expr: &Expr, file: &NetworkFile) -> Result<Value> {
    match expr {
        Expr::Name { name, .. } => {
            let doc = file.system(name)?;
            match doc {
                SystemDoc::Classical { .. } => Ok(Value::Classical(doc.to_classical()?)),
                SystemDoc::Slh { .. } | SystemDoc::Coeff { .. } => {
                    Ok(Value::Quantum(doc.to_coeff()?))
                }
                SystemDoc::Lie { .. } => {
                    bail!("system '{name}' is a Lie-algebra element; apply the exp command first")
                }
            }
        }
        Expr::Series(a, b) => match (eval_expr(a, file)?, eval_expr(b, file)?) {
            (Value::Classical(x), Value::Classical(y)) => {
                Ok(Value::Classical(classical::series(&x, &y)?))
            }
            (Value::Quantum(x), Value::Quantum(y)) => Ok(Value::Quantum(qsde::series(&x, &y)?)),
            _ => bail!("mixed classical/quantum expressions are not defined"),
        },
        Expr::Concat(a, b) => match (eval_expr(a, file)?, eval_expr(b, file)?) {
            (Value::Classical(x), Value::Classical(y)) => {
                Ok(Value::Classical(classical::concat(&x, &y)?))
            }
            (Value::Quantum(x), Value::Quantum(y)) => Ok(Value::Quantum(qsde::concat(&x, &y)?)),
            _ => bail!("mixed classical/quantum expressions are not defined"),
        },
    }
}

#[derive(Serialize)]
struct SlhBlock {
    #[serde(rename = "S")]
    s: CMat,
    #[serde(rename = "L")]
    l: CMat,
    #[serde(rename = "H")]
    h: CMat,
}

#[derive(Serialize)]
struct UnitarityBlock {
    isometry: f64,
    coisometry: f64,
}

#[derive(Serialize)]
struct ComposeOutput {
    #[serde(flatten)]
    model: SystemDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    slh: Option<SlhBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    unitarity: Option<UnitarityBlock>,
}

pub fn compose(args: &CommonArgs, require_unitary: bool) -> CmdResult {
    args.require_format(OutputFormat::Json)?;
    let file = args.load()?;
    let expr = parse_file_expression(&file)?;
    let value = eval_expr(&expr, &file).map_err(Failure::validation)?;
    let output = match &value {
        Value::Classical(m) => ComposeOutput {
            model: SystemDoc::from_classical(m),
            slh: None,
            unitarity: None,
        },
        Value::Quantum(g) => {
            let residuals = unitarity_residuals(g);
            let slh = if residuals.within(args.tol) {
                coeff_to_slh(g, args.tol).ok().map(|t| SlhBlock {
                    s: t.s().clone(),
                    l: t.l().clone(),
                    h: t.h().clone(),
                })
            } else {
                None
            };
            ComposeOutput {
                model: SystemDoc::from_coeff(g),
                slh,
                unitarity: Some(UnitarityBlock {
                    isometry: residuals.isometry,
                    coisometry: residuals.coisometry,
                }),
            }
        }
    };
    if require_unitary {
        match &output.unitarity {
            Some(u) if u.isometry < args.tol && u.coisometry < args.tol => {}
            Some(u) => {
                write_output(args.output.as_deref(), &to_pretty_json(&output))?;
                return Err(Failure::validation(anyhow!(
                    "composite is not a unitary generator (isometry {:.3e}, coisometry {:.3e})",
                    u.isometry,
                    u.coisometry
                )));
            }
            None => {
                return Err(Failure::validation(anyhow!(
                    "--require-unitary applies to quantum expressions only"
                )));
            }
        }
    }
    write_output(args.output.as_deref(), &to_pretty_json(&output))
}

// ---------------------------------------------------------------------
// check
// ---------------------------------------------------------------------

#[derive(Serialize)]
struct SystemReport {
    name: String,
    #[serde(rename = "type")]
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    isometry: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    coisometry: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    series_inverse: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

#[derive(Serialize)]
struct NodeReport {
    expression: String,
    belavkin: f64,
}

#[derive(Serialize)]
struct CheckReport {
    tol: f64,
    pass: bool,
    systems: Vec<SystemReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    nodes: Vec<NodeReport>,
}

fn quantum_value_of_node(expr: &Expr, file: &NetworkFile) -> Result<Option<CoeffMatrix>> {
    match eval_expr(expr, file) {
        Ok(Value::Quantum(g)) => Ok(Some(g)),
        Ok(Value::Classical(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

fn collect_node_reports(expr: &Expr, file: &NetworkFile, out: &mut Vec<NodeReport>) -> Result<()> {
    match expr {
        Expr::Name { .. } => Ok(()),
        Expr::Series(a, b) | Expr::Concat(a, b) => {
            collect_node_reports(a, file, out)?;
            collect_node_reports(b, file, out)?;
            let (Some(ga), Some(gb)) = (
                quantum_value_of_node(a, file)?,
                quantum_value_of_node(b, file)?,
            ) else {
                return Ok(());
            };
            // For concatenation the homomorphism is checked on the
            // ampliated pair whose series product defines it.
            let (left, right) = match expr {
                Expr::Series(..) => (ga, gb),
                Expr::Concat(..) => {
                    let total = ga.dims().n_k + gb.dims().n_k;
                    (
                        qsde::ampliate(&gb, ga.dims().n_k, total),
                        qsde::ampliate(&ga, 0, total),
                    )
                }
                Expr::Name { .. } => unreachable!(),
            };
            let lhs = &belavkin_rep(&left) * &belavkin_rep(&right);
            let rhs = belavkin_rep(&qsde::series(&left, &right)?);
            out.push(NodeReport {
                expression: pretty_print(expr),
                belavkin: lhs.fro_dist(&rhs),
            });
            Ok(())
        }
    }
}

pub fn check(args: &CommonArgs) -> CmdResult {
    args.require_format(OutputFormat::Json)?;
    let file = args.load()?;
    let mut systems = Vec::new();
    let mut worst: f64 = 0.0;
    for (name, doc) in &file.systems {
        let report = match doc {
            SystemDoc::Classical { .. } => SystemReport {
                name: name.clone(),
                kind: doc.kind().into(),
                isometry: None,
                coisometry: None,
                series_inverse: None,
                note: Some("classical model; no quantum residuals".into()),
            },
            _ => {
                let (g, note) = match doc {
                    SystemDoc::Lie { .. } => (
                        hat_exp(&doc.to_lie().map_err(Failure::validation)?)
                            .map_err(|e| Failure::validation(e.into()))?,
                        Some("residuals of the exponential of the element".to_string()),
                    ),
                    _ => (doc.to_coeff().map_err(Failure::validation)?, None),
                };
                let residuals = unitarity_residuals(&g);
                let inverse = gl_inverse(&g)
                    .ok()
                    .map(|inv| qsde::series(&g, &inv).map(|p| p.g().fro_norm()))
                    .transpose()
                    .map_err(|e| Failure::validation(e.into()))?;
                worst = worst.max(residuals.isometry).max(residuals.coisometry);
                if let Some(r) = inverse {
                    worst = worst.max(r);
                }
                SystemReport {
                    name: name.clone(),
                    kind: doc.kind().into(),
                    isometry: Some(residuals.isometry),
                    coisometry: Some(residuals.coisometry),
                    series_inverse: inverse,
                    note,
                }
            }
        };
        systems.push(report);
    }
    let mut nodes = Vec::new();
    if file.expression.is_some() {
        let expr = parse_file_expression(&file)?;
        collect_node_reports(&expr, &file, &mut nodes).map_err(Failure::validation)?;
        for n in &nodes {
            worst = worst.max(n.belavkin);
        }
    }
    let report = CheckReport {
        tol: args.tol,
        pass: worst < args.tol,
        systems,
        nodes,
    };
    write_output(args.output.as_deref(), &to_pretty_json(&report))?;
    if !report.pass {
        return Err(Failure::validation(anyhow!(
            "residuals up to {worst:.3e} exceed tolerance {:.1e}",
            args.tol
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------
// exp / log
// ---------------------------------------------------------------------

pub fn exp_command(args: &CommonArgs, system: Option<&str>) -> CmdResult {
    args.require_format(OutputFormat::Json)?;
    let file = args.load()?;
    let (_, doc) = file.sole_system(system).map_err(Failure::parse)?;
    let h = doc.to_lie().map_err(Failure::validation)?;
    let g = hat_exp(&h).map_err(|e| Failure::validation(e.into()))?;
    let residuals = unitarity_residuals(&g);
    let slh = if residuals.within(args.tol) {
        coeff_to_slh(&g, args.tol).ok().map(|t| SlhBlock {
            s: t.s().clone(),
            l: t.l().clone(),
            h: t.h().clone(),
        })
    } else {
        None
    };
    let output = ComposeOutput {
        model: SystemDoc::from_coeff(&g),
        slh,
        unitarity: Some(UnitarityBlock {
            isometry: residuals.isometry,
            coisometry: residuals.coisometry,
        }),
    };
    write_output(args.output.as_deref(), &to_pretty_json(&output))
}

pub fn log_command(args: &CommonArgs, system: Option<&str>) -> CmdResult {
    args.require_format(OutputFormat::Json)?;
    let file = args.load()?;
    let (_, doc) = file.sole_system(system).map_err(Failure::parse)?;
    let g = doc.to_coeff().map_err(Failure::validation)?;
    let h = hat_log(&g).map_err(|e| Failure::validation(e.into()))?;
    write_output(
        args.output.as_deref(),
        &to_pretty_json(&SystemDoc::from_lie(&h)),
    )
}

// ---------------------------------------------------------------------
// trotter / holevo
// ---------------------------------------------------------------------

fn experiment_spec(
    file: &NetworkFile,
) -> Result<(MatrixElementSpec, f64, Vec<usize>, Option<f64>)> {
    let exp = file.experiment()?;
    let spec = MatrixElementSpec::new(
        exp.u.0.clone(),
        exp.v.0.clone(),
        StepFunction::constant(exp.f.0.clone()),
        StepFunction::constant(exp.g.0.clone()),
    )?;
    Ok((spec, exp.t, exp.grid_sizes.clone(), exp.threshold))
}

/// Interval-wise factors of the expression, leftmost factor first, plus
/// the generator of the limit evolution. A top-level concatenation is
/// simulated through its ampliated pair; series chains flatten into their
/// factor list; any deeper structure is evaluated algebraically.
fn trotter_factors(expr: &Expr, file: &NetworkFile) -> Result<(Vec<CoeffMatrix>, CoeffMatrix)> {
    let quantum = |e: &Expr| -> Result<CoeffMatrix> {
        match eval_expr(e, file)? {
            Value::Quantum(g) => Ok(g),
            Value::Classical(_) => bail!("the product-formula experiments need quantum systems"),
        }
    };
    if let Expr::Concat(a, b) = expr {
        let g1 = quantum(a)?;
        let g2 = quantum(b)?;
        let target = qsde::concat(&g1, &g2)?;
        let total = g1.dims().n_k + g2.dims().n_k;
        let factors = vec![
            qsde::ampliate(&g2, g1.dims().n_k, total),
            qsde::ampliate(&g1, 0, total),
        ];
        return Ok((factors, target));
    }
    fn flatten<'e>(e: &'e Expr, leaves: &mut Vec<&'e Expr>) {
        match e {
            Expr::Series(a, b) => {
                flatten(a, leaves);
                flatten(b, leaves);
            }
            other => leaves.push(other),
        }
    }
    let mut leaves = Vec::new();
    flatten(expr, &mut leaves);
    let factors: Vec<CoeffMatrix> = leaves.iter().map(|e| quantum(e)).collect::<Result<_>>()?;
    let mut target = factors[0].clone();
    for f in &factors[1..] {
        target = qsde::series(&target, f)?;
    }
    Ok((factors, target))
}

fn render_rows(rows: &[ConvergenceRow], format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => {
            let mut out = String::from("m,dt,abs_error,rel_error,empirical_order\n");
            for r in rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    r.m,
                    fmt_float(r.dt),
                    fmt_float(r.abs_error),
                    fmt_float(r.rel_error),
                    fmt_float(r.order)
                );
            }
            out
        }
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Row {
                m: usize,
                dt: f64,
                abs_error: f64,
                rel_error: f64,
                empirical_order: Option<f64>,
            }
            let rows: Vec<Row> = rows
                .iter()
                .map(|r| Row {
                    m: r.m,
                    dt: r.dt,
                    abs_error: r.abs_error,
                    rel_error: r.rel_error,
                    empirical_order: if r.order.is_nan() {
                        None
                    } else {
                        Some(r.order)
                    },
                })
                .collect();
            to_pretty_json(&rows)
        }
    }
}

// `!(last <= t)` fails the threshold when the error is NaN.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
fn finish_experiment(
    args: &CommonArgs,
    rows: &[ConvergenceRow],
    threshold: Option<f64>,
) -> CmdResult {
    let content = render_rows(rows, args.format_or(OutputFormat::Csv));
    write_output(args.output.as_deref(), &content)?;
    if let Some(t) = threshold {
        let last = rows.last().expect("experiment produced rows").abs_error;
        if !(last <= t) {
            return Err(Failure::validation(anyhow!(
                "final error {last:.3e} exceeds the threshold {t:.3e}"
            )));
        }
    }
    Ok(())
}

pub fn trotter(args: &CommonArgs, swap: bool, control: bool) -> CmdResult {
    if swap && control {
        return Err(Failure::parse(anyhow!(
            "--swap and --control are mutually exclusive"
        )));
    }
    let file = args.load()?;
    let expr = parse_file_expression(&file)?;
    let (mut factors, mut target) = trotter_factors(&expr, &file).map_err(Failure::validation)?;
    let (spec, t_end, grid, threshold) = experiment_spec(&file).map_err(Failure::validation)?;
    if swap || control {
        let mut reversed = factors.clone();
        reversed.reverse();
        let mut swapped_target = reversed[0].clone();
        for f in &reversed[1..] {
            swapped_target =
                qsde::series(&swapped_target, f).map_err(|e| Failure::validation(e.into()))?;
        }
        if swap {
            factors = reversed;
        }
        target = swapped_target;
    }
    let refs: Vec<&CoeffMatrix> = factors.iter().collect();
    let rows = product_experiment(&refs, &target, &spec, t_end, &grid)
        .map_err(|e| Failure::validation(e.into()))?;
    finish_experiment(args, &rows, threshold)
}

pub fn holevo(args: &CommonArgs, system: Option<&str>) -> CmdResult {
    let file = args.load()?;
    let (_, doc) = file.sole_system(system).map_err(Failure::parse)?;
    let h = doc.to_lie().map_err(Failure::validation)?;
    let (spec, t_end, grid, threshold) = experiment_spec(&file).map_err(Failure::validation)?;
    let rows =
        holevo_experiment(&h, &spec, t_end, &grid).map_err(|e| Failure::validation(e.into()))?;
    finish_experiment(args, &rows, threshold)
}

// ---------------------------------------------------------------------
// classical-response
// ---------------------------------------------------------------------

pub fn classical_response(args: &CommonArgs, system: Option<&str>) -> CmdResult {
    args.require_format(OutputFormat::Csv)?;
    let file = args.load()?;
    let (_, doc) = file.sole_system(system).map_err(Failure::parse)?;
    let model = doc.to_classical().map_err(Failure::validation)?;
    let resp = file
        .response
        .as_ref()
        .ok_or_else(|| Failure::parse(anyhow!("the network file has no response parameters")))?;
    let u: Vec<Vec<C64>> = resp.u.iter().map(|v| v.0.clone()).collect();
    let samples = classical::time_response(&model, &resp.x0.0, &u, &resp.t_grid, resp.substeps)
        .map_err(|e| Failure::validation(e.into()))?;
    let mut out = String::from("t");
    for i in 0..model.ny() {
        let _ = write!(out, ",y{i}_re,y{i}_im");
    }
    out.push('\n');
    for (t, y) in resp.t_grid.iter().zip(&samples) {
        let _ = write!(out, "{}", fmt_float(*t));
        for z in y {
            let _ = write!(out, ",{},{}", fmt_float(z.re), fmt_float(z.im));
        }
        out.push('\n');
    }
    write_output(args.output.as_deref(), &out)
}

// ---------------------------------------------------------------------
// weyl-check
// ---------------------------------------------------------------------

pub fn weyl_check(args: &CommonArgs) -> CmdResult {
    args.require_format(OutputFormat::Csv)?;
    let file = args.load()?;
    let params = file
        .weyl
        .as_ref()
        .ok_or_else(|| Failure::parse(anyhow!("the network file has no weyl parameters")))?;
    if params.n_k < 1 || params.cutoffs.iter().any(|&c| c < 1) {
        return Err(Failure::validation(anyhow!(
            "need n_k >= 1 and cutoffs >= 1"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let capped = |rng: &mut ChaCha8Rng, cap: f64| -> Vec<C64> {
        let v = gaussian_vector(params.n_k, rng);
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let scale = cap * rng.gen_range(0.2..1.0) / norm.max(1e-12);
        v.into_iter().map(|z| z * scale).collect()
    };
    let mut out = String::from("cutoff,norm_cap,analytic_residual,truncated_residual\n");
    for &cutoff in &params.cutoffs {
        let space =
            TruncatedFock::new(params.n_k, cutoff).map_err(|e| Failure::validation(e.into()))?;
        for &cap in &params.norm_caps {
            let (mut worst_analytic, mut worst_truncated) = (0.0f64, 0.0f64);
            for _ in 0..params.trials {
                let g2 =
                    EuclideanElem::new(haar_unitary(params.n_k, &mut rng), capped(&mut rng, cap))
                        .map_err(|e| Failure::validation(e.into()))?;
                let g1 =
                    EuclideanElem::new(haar_unitary(params.n_k, &mut rng), capped(&mut rng, cap))
                        .map_err(|e| Failure::validation(e.into()))?;
                let pairs: Vec<(Vec<C64>, Vec<C64>)> = (0..3)
                    .map(|_| (capped(&mut rng, cap), capped(&mut rng, cap)))
                    .collect();
                worst_analytic = worst_analytic.max(
                    weyl_ccr_analytic(&g2, &g1, &pairs)
                        .map_err(|e| Failure::validation(e.into()))?,
                );
                worst_truncated = worst_truncated.max(
                    weyl_ccr_truncated(&g2, &g1, &pairs, &space)
                        .map_err(|e| Failure::validation(e.into()))?,
                );
            }
            let _ = writeln!(
                out,
                "{cutoff},{},{},{}",
                fmt_float(cap),
                fmt_float(worst_analytic),
                fmt_float(worst_truncated)
            );
        }
    }
    write_output(args.output.as_deref(), &out)
}
