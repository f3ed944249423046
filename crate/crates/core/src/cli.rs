//! Command-line frontend. Every subcommand prints one JSON document.
//!
//! Exit codes: 0 on success, 1 when the mathematics fails on well-formed
//! input (residuals, remainders, broken colorings), 2 on input errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::alexander::{default_column, twisted_alexander};
use crate::coloring::{
    check_region_rule, composite_shadow, connected_sum_coloring, factor_coloring, find_generic_shadow,
    restrict_regions, Conjugator, ShadowSearch,
};
use crate::diagram::{parse_pd, wirtinger, OrientedDiagram, Side};
use crate::error::{Error, Result};
use crate::example::run_checks;
use crate::fixtures::{self, exact_shadow, COMPOSITE};
use crate::json::{
    float, is_exact_document, matrix_from_json, poly_to_json, splice_to_json, to_text, ColoringDocument, JsonScalar,
};
use crate::scalar::{QOmega, XRoot};
use crate::volume::{complex_volume, solution_from_shadow};

#[derive(Parser, Debug)]
#[command(
    name = "knotsum",
    version,
    about = "Complex volumes and twisted Alexander polynomials of colored knot diagrams"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    options: Options,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Parse a PD code into diagram JSON.
    Parse,
    /// Wirtinger presentation of a diagram.
    Wirtinger,
    /// Check the arc relation, region rule and genericity of a coloring.
    Verify,
    /// Extend an arc coloring to a generic shadow coloring.
    Shadow,
    /// Complex volume from a shadow coloring.
    Volume,
    /// Twisted Alexander polynomial of a coloring.
    Alexander,
    /// Connected sum of two colorings.
    Consum,
    /// Split a connected-sum coloring into its summands.
    Factor,
    /// Reproduce the built-in trefoil / figure-eight example.
    CheckExample,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Default)]
enum Mode {
    #[default]
    Floating,
    Exact,
}

#[derive(clap::Args, Debug)]
struct Options {
    /// Input file (PD text or JSON); repeat for `consum`.
    #[arg(long, global = true)]
    input: Vec<PathBuf>,
    /// Built-in fixture: 3_1, 4_1 or 3_1#4_1; read after any --input.
    #[arg(long, global = true)]
    builtin: Vec<String>,
    #[arg(long, value_enum, default_value_t = Mode::Floating, global = true)]
    mode: Mode,
    #[arg(long, default_value_t = 1e-9, global = true)]
    tol_residual: f64,
    #[arg(long, default_value_t = 1e-9, global = true)]
    tol_coeff: f64,
    /// Generator whose column is removed from the Alexander matrix.
    #[arg(long, global = true)]
    remove_column: Option<usize>,
    #[arg(long, global = true)]
    arc1: Option<usize>,
    #[arg(long, global = true)]
    arc2: Option<usize>,
    /// `canonical` or a 2×2 JSON matrix of scalars.
    #[arg(long, global = true)]
    conjugator: Option<String>,
    /// Root of x² + x + 1 used to evaluate exact colorings: -1 or 1.
    #[arg(long, global = true, allow_negative_numbers = true)]
    x_root: Option<i64>,
    /// Write the JSON here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

/// A JSON result and whether it counts as success.
struct Outcome {
    value: Value,
    ok: bool,
}

impl Outcome {
    fn ok(value: Value) -> Self {
        Outcome { value, ok: true }
    }
}

/// Run the CLI on `argv` (including the program name) and return the exit
/// code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = validate(&cli.options).and_then(|_| execute(cli.command, &cli.options)).and_then(|out| {
        emit(&out.value, cli.options.output.as_ref())?;
        Ok(out.ok)
    });
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_mathematical() {
                1
            } else {
                2
            }
        }
    }
}

fn validate(o: &Options) -> Result<()> {
    for (name, t) in [("--tol-residual", o.tol_residual), ("--tol-coeff", o.tol_coeff)] {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::Usage(format!("{name} must be positive")));
        }
    }
    if let Some(r) = o.x_root {
        XRoot::from_sign(r).ok_or_else(|| Error::Usage("--x-root must be 1 or -1".into()))?;
    }
    Ok(())
}

fn emit(v: &Value, output: Option<&PathBuf>) -> Result<()> {
    let text = to_text(v);
    match output {
        Some(path) => fs::write(path, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

enum Source {
    File(PathBuf),
    Builtin(String),
}

fn sources(o: &Options) -> Vec<Source> {
    let files = o.input.iter().cloned().map(Source::File);
    files.chain(o.builtin.iter().cloned().map(Source::Builtin)).collect()
}

fn single_source(o: &Options) -> Result<Source> {
    let mut s = sources(o);
    match s.len() {
        1 => Ok(s.remove(0)),
        n => Err(Error::Usage(format!("expected one --input or --builtin, got {n}"))),
    }
}

/// Coloring document of a fixture; the composite carries its splice record.
fn builtin_document(name: &str) -> Result<Value> {
    let mut doc = ColoringDocument::from_shadow(exact_shadow(name)?);
    if name == COMPOSITE {
        doc.splice = Some(fixtures::splice_record()?);
    }
    Ok(doc.to_json())
}

fn source_text(path: &PathBuf) -> Result<String> {
    Ok(fs::read_to_string(path)?)
}

/// Diagram from a PD file, diagram JSON, coloring JSON or fixture.
fn load_diagram(s: &Source) -> Result<OrientedDiagram> {
    match s {
        Source::Builtin(name) => fixtures::builtin(name),
        Source::File(path) => {
            let text = source_text(path)?;
            if !text.trim_start().starts_with('{') {
                return parse_pd(&text);
            }
            let v: Value = serde_json::from_str(&text)?;
            match v.get("diagram") {
                Some(d) => OrientedDiagram::from_json_value(d.clone()),
                None => OrientedDiagram::from_json_value(v),
            }
        }
    }
}

fn load_value(s: &Source) -> Result<Value> {
    match s {
        Source::Builtin(name) => builtin_document(name),
        Source::File(path) => Ok(serde_json::from_str(&source_text(path)?)?),
    }
}

/// Documents in the field chosen by `--mode`. Exact inputs are evaluated
/// numerically in floating mode; floating inputs cannot run in exact mode.
enum Docs {
    Exact(Vec<ColoringDocument<QOmega>>),
    Floating(Vec<ColoringDocument<Complex64>>),
}

fn load_documents(o: &Options, count: usize) -> Result<Docs> {
    let srcs = sources(o);
    if srcs.len() != count {
        return Err(Error::Usage(format!("expected {count} inputs, got {}", srcs.len())));
    }
    let values = srcs.iter().map(load_value).collect::<Result<Vec<_>>>()?;
    let root = o.x_root.and_then(XRoot::from_sign);
    match o.mode {
        Mode::Exact => {
            if let Some(i) = values.iter().position(|v| !is_exact_document(v)) {
                return Err(Error::Usage(format!("--mode exact needs exact colors, input {i} is floating")));
            }
            Ok(Docs::Exact(values.iter().map(ColoringDocument::from_json).collect::<Result<_>>()?))
        }
        Mode::Floating => {
            let docs = values
                .iter()
                .map(|v| {
                    if is_exact_document(v) {
                        Ok(ColoringDocument::<QOmega>::from_json(v)?.to_complex(root))
                    } else {
                        ColoringDocument::from_json(v)
                    }
                })
                .collect::<Result<_>>()?;
            Ok(Docs::Floating(docs))
        }
    }
}

fn execute(command: Command, o: &Options) -> Result<Outcome> {
    match command {
        Command::Parse => parse(o),
        Command::Wirtinger => presentation(o),
        Command::CheckExample => Ok(check_example()),
        _ => {
            let count = if command == Command::Consum { 2 } else { 1 };
            match load_documents(o, count)? {
                Docs::Exact(docs) => dispatch(command, docs, o, 0.0, 0.0),
                Docs::Floating(docs) => dispatch(command, docs, o, o.tol_residual, o.tol_coeff),
            }
        }
    }
}

fn parse(o: &Options) -> Result<Outcome> {
    Ok(Outcome::ok(load_diagram(&single_source(o)?)?.to_json_value()))
}

fn presentation(o: &Options) -> Result<Outcome> {
    let p = wirtinger(&load_diagram(&single_source(o)?)?);
    let letters: Vec<Value> = p
        .relators
        .iter()
        .map(|r| Value::Array(r.letters().iter().map(|l| json!([l.generator, l.exponent])).collect()))
        .collect();
    let words: Vec<String> = p.relators.iter().map(|r| r.to_string()).collect();
    Ok(Outcome::ok(json!({"generators": p.generators, "relators": letters, "words": words})))
}

fn check_example() -> Outcome {
    let checks = run_checks();
    let ok = checks.iter().all(|c| c.passed);
    let list: Vec<Value> = checks.iter().map(|c| c.to_json()).collect();
    Outcome { value: json!({"checks": list, "passed": ok}), ok }
}

/// Commands that only need the field operations.
trait Field: JsonScalar {
    fn volume(doc: &ColoringDocument<Self>, tol: f64, root: Option<XRoot>) -> Result<Outcome>;
}

impl Field for Complex64 {
    fn volume(doc: &ColoringDocument<Self>, tol: f64, _root: Option<XRoot>) -> Result<Outcome> {
        let shadow = doc.shadow(tol)?;
        let w = solution_from_shadow(&shadow)?;
        volume_outcome(complex_volume(&shadow, tol)?, w.iter().map(|x| x.to_json()).collect(), doc.x_root)
    }
}

impl Field for QOmega {
    fn volume(doc: &ColoringDocument<Self>, _tol: f64, root: Option<XRoot>) -> Result<Outcome> {
        let root = root.or(doc.x_root).unwrap_or(XRoot::Minus);
        let shadow = doc.shadow(0.0)?;
        let w = solution_from_shadow(&shadow)?;
        let report = complex_volume(&shadow.to_complex(root), crate::volume::RESIDUAL_TOLERANCE)?;
        volume_outcome(report, w.iter().map(|x| x.to_json()).collect(), Some(root))
    }
}

fn volume_outcome(r: crate::volume::VolumeReport, solution: Vec<Value>, root: Option<XRoot>) -> Result<Outcome> {
    let mut v = json!({
        "w0": [float(r.w0.re), float(r.w0.im)],
        "vol": float(r.volume.vol),
        "cs": float(r.volume.cs),
        "max_residual": float(r.max_residual),
        "residual_ok": r.residual_ok,
        "solution": solution,
    });
    if let Some(root) = root {
        v["x_root"] = json!(root.sign());
    }
    Ok(Outcome { value: v, ok: r.residual_ok })
}

fn dispatch<S: Field>(
    command: Command,
    mut docs: Vec<ColoringDocument<S>>,
    o: &Options,
    tol: f64,
    coeff_tol: f64,
) -> Result<Outcome> {
    let doc = docs.remove(0);
    match command {
        Command::Verify => verify(&doc, tol),
        Command::Shadow => shadow(doc, tol),
        Command::Volume => S::volume(&doc, tol, o.x_root.and_then(XRoot::from_sign)),
        Command::Alexander => alexander(&doc, o.remove_column, coeff_tol),
        Command::Consum => consum(doc, docs.remove(0), o, tol),
        Command::Factor => factor(&doc, tol),
        Command::Parse | Command::Wirtinger | Command::CheckExample => unreachable!("handled before loading colorings"),
    }
}

fn verify<S: Field>(doc: &ColoringDocument<S>, tol: f64) -> Result<Outcome> {
    let report = doc.arcs.verify(tol);
    let mut ok = report.ok();
    let mut v = json!({
        "arcs_ok": report.ok(),
        "max_defect": float(report.max_defect()),
        "failing_crossings": report.failing(),
    });
    if let Some(regions) = &doc.regions {
        let regions_ok = ok && check_region_rule(&doc.arcs, regions, tol).is_ok();
        v["regions_ok"] = json!(regions_ok);
        ok &= regions_ok;
        if let (true, Some(_)) = (regions_ok, &doc.p) {
            let s = doc.shadow(tol)?;
            v["generic"] = json!(s.is_generic());
            v["p_ok"] = json!(s.p_condition());
            ok &= s.is_generic() && s.p_condition();
        }
    }
    v["passed"] = json!(ok);
    Ok(Outcome { value: v, ok })
}

fn shadow<S: Field>(mut doc: ColoringDocument<S>, tol: f64) -> Result<Outcome> {
    let search = ShadowSearch {
        preferred_seed: doc.regions.as_ref().and_then(|r| r.first().cloned()),
        preferred_p: doc.p.clone(),
        tol,
        ..ShadowSearch::default()
    };
    let s = find_generic_shadow(&doc.arcs, &search)?;
    doc.regions = Some(s.regions);
    doc.p = Some(s.p);
    Ok(Outcome::ok(doc.to_json()))
}

fn alexander<S: Field>(doc: &ColoringDocument<S>, column: Option<usize>, tol: f64) -> Result<Outcome> {
    let pres = wirtinger(doc.arcs.diagram()).without_last_relator()?;
    let splice_arc = doc.splice.as_ref().map(|r| r.connecting_arcs(doc.arcs.diagram()).0);
    let column = column.unwrap_or_else(|| default_column(&pres, splice_arc));
    let a = twisted_alexander(&pres, &doc.arcs, column, tol)?;
    Ok(Outcome::ok(json!({
        "delta": poly_to_json(&a.delta),
        "delta_prime": poly_to_json(&a.delta_prime),
        "removed_column": a.removed_column,
        "division_remainder_norm": float(a.remainder_norm),
    })))
}

fn consum<S: Field>(left: ColoringDocument<S>, right: ColoringDocument<S>, o: &Options, tol: f64) -> Result<Outcome> {
    let (Some(arc1), Some(arc2)) = (o.arc1, o.arc2) else {
        return Err(Error::Usage("consum needs --arc1 and --arc2".into()));
    };
    let conjugator = match o.conjugator.as_deref() {
        None | Some("canonical") => Conjugator::Canonical,
        Some(text) => Conjugator::Matrix(matrix_from_json(&serde_json::from_str(text)?)?),
    };
    let sum = connected_sum_coloring(&left.arcs, arc1, &right.arcs, arc2, &conjugator, tol)?;
    let mut doc = ColoringDocument::from_arcs(sum.coloring.clone());
    if let (Some(regions), Some(p)) = (left.regions.clone(), left.p.clone()) {
        let left_shadow = crate::coloring::ShadowColoring { arcs: left.arcs.clone(), regions, p };
        let s = composite_shadow(&sum.coloring, &sum.record, &left_shadow, tol)?;
        doc.regions = Some(s.regions);
        doc.p = Some(s.p);
    }
    doc.splice = Some(sum.record);
    doc.conjugator = Some(sum.conjugator);
    doc.x_root = left.x_root;
    let mut v = doc.to_json();
    v["conjugator_kind"] = json!(if matches!(conjugator, Conjugator::Canonical) { "canonical" } else { "matrix" });
    Ok(Outcome::ok(v))
}

fn factor<S: Field>(doc: &ColoringDocument<S>, tol: f64) -> Result<Outcome> {
    let record =
        doc.splice.as_ref().ok_or_else(|| Error::Usage("factor needs a coloring with a \"splice\" record".into()))?;
    let (l, r) = factor_coloring(&doc.arcs, record, tol)?;
    let part = |arcs, side| {
        let mut d = ColoringDocument::from_arcs(arcs);
        if let (Some(regions), Some(p)) = (&doc.regions, &doc.p) {
            d.regions = Some(restrict_regions(doc.arcs.diagram(), regions, record, side));
            d.p = Some(p.clone());
        }
        d.x_root = doc.x_root;
        d.to_json()
    };
    Ok(Outcome::ok(json!({
        "left": part(l, Side::Left),
        "right": part(r, Side::Right),
        "splice": splice_to_json(record),
    })))
}
