//! Command-line driver for `uembed`.
//!
//! [`run`] executes one command and returns everything the process would
//! print, so the binary is a thin wrapper and tests can call it directly.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use uembed::ckmap::{self, CksStatus, GridCompact, MeasureField};
use uembed::embed::{self, Certificate, FiniteEmbedding, Verdict};
use uembed::space::{Face, NormedSpace, PolyhedralSpace};
use uembed::usuit::{self, build_u_suitable};
use uembed::{corpus, Error, Scalar, Vector};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_GEOMETRIC: i32 = 2;
pub const EXIT_SMOOTH: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "uembed", version, about = "Decide, build and verify U-embeddings of polyhedral spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Seed for sampled functionals.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Number of random sphere functionals checked by `embed`.
    #[arg(long, global = true, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Atom tolerance for `cks` (polyhedral float data always uses 1e-9).
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Simplexoid, smoothness and connectivity verdicts for a space.
    Check {
        /// Space file or corpus name.
        space: String,
    },
    /// Build u_E and certify it.
    Embed { space: String },
    /// Hahn–Banach extensions of a functional through u_E.
    Extend {
        space: String,
        /// Comma-separated coordinates, e.g. `1,-1/2`.
        functional: String,
        /// JSON file `{"index_points": [[...], ...]}` replacing u_E.
        #[arg(long)]
        embedding: Option<PathBuf>,
    },
    /// Verify a C(K) → C(S) field: a demo name or a field file.
    Cks {
        /// retraction, bezier, composition, gdelta, or a path.
        target: String,
        /// Truncation N of the Bézier demo.
        #[arg(long = "N", alias = "n", default_value_t = 10)]
        n: usize,
        #[arg(long)]
        step: Option<f64>,
        /// Make the composition demo non-injective.
        #[arg(long)]
        collide: bool,
        /// Truncation of the geometric sum in the G_δ demo.
        #[arg(long, default_value_t = 20)]
        n_max: u32,
    },
    /// Built-in example spaces.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Subcommand, Debug)]
pub enum CorpusAction {
    List,
}

/// What one invocation prints and returns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Execution {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Report {
    code: i32,
    json: Value,
    text: String,
}

pub fn run<I, T>(args: I) -> Execution
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Execution { code, stdout: text, stderr: String::new() }
            } else {
                Execution { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let body = match cli.format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&report.json).expect("serializable report");
                    s.push('\n');
                    s
                }
                Format::Text => report.text,
            };
            match &cli.out {
                Some(path) => match std::fs::write(path, &body) {
                    Ok(()) => Execution { code: report.code, stdout: String::new(), stderr: String::new() },
                    Err(e) => Execution {
                        code: EXIT_USAGE,
                        stdout: String::new(),
                        stderr: format!("error: cannot write {}: {e}\n", path.display()),
                    },
                },
                None => Execution { code: report.code, stdout: body, stderr: String::new() },
            }
        }
        Err(e) => Execution {
            code: exit_code(&e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Internal(_) => EXIT_INTERNAL,
        _ => EXIT_USAGE,
    }
}

fn execute(cli: &Cli) -> uembed::Result<Report> {
    match &cli.command {
        Command::Check { space } => check(&load_space(space)?),
        Command::Embed { space } => embed_cmd(&load_space(space)?, cli),
        Command::Extend { space, functional, embedding } => {
            extend(&load_space(space)?, functional, embedding.as_deref())
        }
        Command::Cks { target, n, step, collide, n_max } => {
            cks(target, *n, *step, *collide, *n_max, cli.tolerance)
        }
        Command::Corpus { action: CorpusAction::List } => corpus_list(),
    }
}

/// A path if it exists, otherwise a corpus name.
pub fn load_space(arg: &str) -> uembed::Result<NormedSpace> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read {arg}: {e}")))?;
        return NormedSpace::from_json_str(&text);
    }
    if corpus::source(arg).is_some() {
        return corpus::load(arg);
    }
    Err(Error::Parse(format!("{arg:?} is neither a file nor a corpus entry")))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "YES"
    } else {
        "NO"
    }
}

fn points_text<S: Scalar>(points: &[Vector<S>]) -> String {
    points.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn face_points<S: Scalar>(space: &PolyhedralSpace<S>, face: &Face<S>) -> Vec<Vector<S>> {
    face.extreme_indices
        .iter()
        .map(|&i| space.dual_extremes()[i].clone())
        .collect()
}

/// "square" for a planar quadrilateral with equal sides and equal diagonals.
fn facet_shape<S: Scalar>(points: &[Vector<S>], affine_dim: usize) -> String {
    if affine_dim == 2 && points.len() == 4 {
        let mut d: Vec<S> = Vec::new();
        for i in 0..4 {
            for j in i + 1..4 {
                let v = points[i].sub(&points[j]);
                d.push(v.dot(&v));
            }
        }
        d.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        let two = S::from_int(2);
        let square = d[..4].iter().all(|x| x.approx_eq(&d[0]))
            && d[4].approx_eq(&d[5])
            && d[4].approx_eq(&(d[0].clone() * two));
        if square {
            return "square".into();
        }
        return "quadrilateral".into();
    }
    format!("{}-point {affine_dim}-dimensional", points.len())
}

fn path_name(space: &NormedSpace) -> &'static str {
    match space {
        NormedSpace::Exact(_) => "exact",
        NormedSpace::Float(_) => "float",
        NormedSpace::Euclidean2D(_) => "smooth",
    }
}

fn check(space: &NormedSpace) -> uembed::Result<Report> {
    match space {
        NormedSpace::Exact(s) => check_polyhedral(s, "exact"),
        NormedSpace::Float(s) => check_polyhedral(s, "float"),
        NormedSpace::Euclidean2D(_) => {
            let ob = usuit::prove_no_u_suitable(space)?;
            let mut text = String::new();
            writeln!(text, "space: {} (dim 2, smooth)", space.name()).unwrap();
            writeln!(text, "simplexoid: NO (the dual ball is a disk)").unwrap();
            writeln!(text, "Gâteaux smooth: YES → not U-embeddable").unwrap();
            writeln!(text, "extreme sphere connected: {}", yes_no(ob.extreme_sphere_connected)).unwrap();
            writeln!(text, "almost-Gâteaux order: 0 at every unit vector").unwrap();
            Ok(Report {
                code: EXIT_OK,
                json: json!({
                    "space": space.name(),
                    "dim": 2,
                    "path": "smooth",
                    "simplexoid": false,
                    "gateaux_smooth": true,
                    "extreme_sphere_connected": ob.extreme_sphere_connected,
                    "u_embeddable": false,
                    "obstruction": ob.obstruction,
                }),
                text,
            })
        }
    }
}

fn check_polyhedral<S: Scalar>(space: &PolyhedralSpace<S>, path: &str) -> uembed::Result<Report> {
    let sx = space.simplexoid()?;
    let gateaux = space.gateaux();
    let connected = space.extreme_sphere_connected();
    let orders = space
        .primal_vertices()
        .into_iter()
        .map(|x| space.almost_gateaux_order(&x).map(|o| (x, o)))
        .collect::<uembed::Result<Vec<_>>>()?;

    let mut text = String::new();
    writeln!(text, "space: {} (dim {}, {path})", space.name(), space.dim()).unwrap();
    writeln!(text, "dual extreme points: {}", space.dual_extremes().len()).unwrap();
    match &sx.offending {
        None => writeln!(text, "simplexoid: YES").unwrap(),
        Some(face) => {
            let pts = face_points(space, face);
            writeln!(
                text,
                "simplexoid: NO ({} facet {{{}}} exposed by x = {})",
                facet_shape(&pts, face.affine_dim),
                points_text(&pts),
                face.supporting_x
            )
            .unwrap()
        }
    }
    match &gateaux.witness {
        Some(w) => writeln!(text, "Gâteaux smooth: NO (kink at x = {w})").unwrap(),
        None => writeln!(text, "Gâteaux smooth: {}", yes_no(gateaux.smooth)).unwrap(),
    }
    writeln!(text, "extreme sphere connected: {}", yes_no(connected)).unwrap();
    writeln!(text, "almost-Gâteaux orders at primal ball vertices:").unwrap();
    for (x, o) in &orders {
        writeln!(text, "  {x}: {o}").unwrap();
    }
    writeln!(text, "U-embeddable: {}", yes_no(sx.simplexoid)).unwrap();

    let json = json!({
        "space": space.name(),
        "dim": space.dim(),
        "path": path,
        "dual_extreme_points": space.dual_extremes(),
        "simplexoid": sx.simplexoid,
        "offending_face": sx.offending,
        "gateaux_smooth": gateaux.smooth,
        "gateaux_witness": gateaux.witness,
        "extreme_sphere_connected": connected,
        "almost_gateaux_orders": orders
            .iter()
            .map(|(x, o)| json!({"x": x, "order": o}))
            .collect::<Vec<_>>(),
        "u_embeddable": sx.simplexoid,
    });
    Ok(Report { code: EXIT_OK, json, text })
}

fn smooth_obstruction(space: &NormedSpace) -> uembed::Result<Report> {
    let ob = usuit::prove_no_u_suitable(space)?;
    let mut text = String::new();
    writeln!(text, "space: {}", ob.space).unwrap();
    writeln!(text, "Gâteaux smooth: YES → not U-embeddable").unwrap();
    writeln!(text, "obstruction: {}", ob.obstruction).unwrap();
    writeln!(text, "reason: {}", ob.reason).unwrap();
    Ok(Report { code: EXIT_SMOOTH, json: serde_json::to_value(&ob).expect("serializable"), text })
}

fn embed_cmd(space: &NormedSpace, cli: &Cli) -> uembed::Result<Report> {
    match space {
        NormedSpace::Exact(s) => embed_polyhedral(s, cli),
        NormedSpace::Float(s) => embed_polyhedral(s, cli),
        NormedSpace::Euclidean2D(_) => smooth_obstruction(space),
    }
}

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::CertifiedU | Verdict::EvidenceU => EXIT_OK,
        Verdict::NotU => EXIT_GEOMETRIC,
        Verdict::Inconsistent => EXIT_INTERNAL,
    }
}

fn embed_polyhedral<S: Scalar>(space: &PolyhedralSpace<S>, cli: &Cli) -> uembed::Result<Report> {
    let z = usuit::find_selector(space);
    let e = build_u_suitable(space, Some(z.clone()))?;
    let u = FiniteEmbedding::build_ue(space, &e)?;
    let cert = embed::verify_u_embedding(&u, cli.samples, cli.seed)?;

    let mut text = String::new();
    writeln!(text, "space: {} (dim {}, {})", space.name(), space.dim(), if S::EXACT { "exact" } else { "float" }).unwrap();
    writeln!(text, "selector z = {z}").unwrap();
    writeln!(text, "E = {{{}}} (|E| = {})", points_text(&cert.e), cert.e.len()).unwrap();
    writeln!(text, "proper U-suitable: {}", yes_no(cert.proper_u_suitable)).unwrap();
    match &cert.offending_face {
        None => writeln!(text, "simplexoid: YES").unwrap(),
        Some(face) => {
            let pts = face_points(space, face);
            writeln!(
                text,
                "simplexoid: NO ({} facet {{{}}})",
                facet_shape(&pts, face.affine_dim),
                points_text(&pts)
            )
            .unwrap()
        }
    }
    writeln!(
        text,
        "sampling: {} functionals (seed {}), {} with several extensions",
        cert.sampling.checked,
        cert.seed,
        cert.sampling.failures.len()
    )
    .unwrap();
    if let Some(f) = cert.sampling.failures.first() {
        writeln!(
            text,
            "  e.g. x* = {}: {} and {}",
            f.functional, f.witness1.weights, f.witness2.weights
        )
        .unwrap();
    }
    let verdict_text = match cert.verdict {
        Verdict::CertifiedU => "certified U-embedding",
        Verdict::EvidenceU => "U-embedding (evidence level, floating point)",
        Verdict::NotU => "not a U-embedding",
        Verdict::Inconsistent => "INCONSISTENT: theorem and sampling tracks disagree",
    };
    writeln!(text, "verdict: {verdict_text}").unwrap();

    let json = json!({
        "selector": z,
        "index_points": u.index_points(),
        "certificate": cert_json(&cert),
    });
    Ok(Report { code: verdict_code(cert.verdict), json, text })
}

fn cert_json<S: Scalar>(cert: &Certificate<S>) -> Value {
    serde_json::to_value(cert).expect("serializable certificate")
}

#[derive(Serialize)]
#[serde(bound(serialize = ""))]
struct ExtensionReport<S: Scalar> {
    space: String,
    functional: Vector<S>,
    #[serde(serialize_with = "uembed::scalar::serialize_text")]
    norm: S,
    unique: bool,
    extension: Vector<S>,
    support: Vec<usize>,
    support_points: Vec<Vector<S>>,
    phelps_support: usize,
    positive_part: Vector<S>,
    negative_part: Vector<S>,
    second_extension: Option<Vector<S>>,
}

fn extend(space: &NormedSpace, functional: &str, embedding: Option<&Path>) -> uembed::Result<Report> {
    match space {
        NormedSpace::Exact(s) => extend_polyhedral(s, functional, embedding),
        NormedSpace::Float(s) => extend_polyhedral(s, functional, embedding),
        NormedSpace::Euclidean2D(_) => smooth_obstruction(space),
    }
}

fn load_index_points<S: Scalar>(path: &Path) -> uembed::Result<Vec<Vector<S>>> {
    #[derive(serde::Deserialize)]
    #[serde(bound(deserialize = ""))]
    struct File<S: Scalar> {
        index_points: Vec<Vector<S>>,
    }
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    let file: File<S> = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(file.index_points)
}

fn extend_polyhedral<S: Scalar>(
    space: &PolyhedralSpace<S>,
    functional: &str,
    embedding: Option<&Path>,
) -> uembed::Result<Report> {
    let f = Vector::<S>::parse_list(functional)
        .ok_or_else(|| Error::Parse(format!("cannot parse functional {functional:?}")))?;
    let u = match embedding {
        Some(path) => FiniteEmbedding::from_index_points(space, load_index_points(path)?)?,
        None => FiniteEmbedding::build_ue(space, &build_u_suitable(space, None)?)?,
    };
    let ext = embed::hb_extensions(&u, &f)?;
    let support = ext.point.support();
    let sx = space.simplexoid()?;
    let report = ExtensionReport {
        space: space.name().to_string(),
        functional: f.clone(),
        norm: ext.norm_value.clone(),
        unique: ext.unique,
        extension: ext.point.weights.clone(),
        support_points: support.iter().map(|&k| u.index_points()[k].clone()).collect(),
        phelps_support: support.len(),
        support,
        positive_part: ext.point.positive_part().weights,
        negative_part: ext.point.negative_part().weights,
        second_extension: ext.second_witness.as_ref().map(|w| w.weights.clone()),
    };

    let mut text = String::new();
    writeln!(text, "space: {}", report.space).unwrap();
    writeln!(text, "index points: {}", points_text(u.index_points())).unwrap();
    writeln!(text, "x* = {}, ‖x*‖ = {}", report.functional, report.norm.format()).unwrap();
    writeln!(text, "unique extension: {}", yes_no(report.unique)).unwrap();
    let terms: Vec<String> = report
        .support
        .iter()
        .map(|&k| format!("{}·δ{}", report.extension[k].format(), u.index_points()[k]))
        .collect();
    writeln!(text, "μ = {}", if terms.is_empty() { "0".into() } else { terms.join(" + ") }).unwrap();
    writeln!(text, "support: {} (dim {})", report.phelps_support, space.dim()).unwrap();
    if let Some(w) = &report.second_extension {
        writeln!(text, "another extension: {w}").unwrap();
    }
    let code = if sx.simplexoid || embedding.is_some() { EXIT_OK } else { EXIT_GEOMETRIC };
    if code == EXIT_GEOMETRIC {
        writeln!(text, "note: the dual ball is not a simplexoid, so u_E is not a U-embedding").unwrap();
    }
    Ok(Report { code, json: serde_json::to_value(&report).expect("serializable"), text })
}

fn cks(
    target: &str,
    n: usize,
    step: Option<f64>,
    collide: bool,
    n_max: u32,
    tolerance: Option<f64>,
) -> uembed::Result<Report> {
    let (description, mut field) = match target {
        "retraction" => {
            let step = step.unwrap_or(0.01);
            (format!("retraction (step {step})"), ckmap::retraction_demo(step)?)
        }
        "bezier" => {
            let step = step.unwrap_or(1e-4);
            (format!("bezier (N = {n}, step {step})"), ckmap::bezier_field(n, step)?)
        }
        "gdelta" => {
            let step = step.unwrap_or(1e-3);
            (
                format!("gdelta (targets 0.25, 0.75, n_max = {n_max}, step {step})"),
                ckmap::gdelta_field(step, &[0.25, 0.75], 0.2, n_max)?,
            )
        }
        "composition" => {
            let s = GridCompact::discrete(["1", "2"]);
            let (k, h) = if collide {
                (GridCompact::discrete(["1"]), vec![0, 0])
            } else {
                (GridCompact::discrete(["1", "2"]), vec![0, 1])
            };
            let label = if collide { "composition (h ≡ 1)" } else { "composition (h = id)" };
            (label.to_string(), ckmap::composition_field(s, k, &h)?)
        }
        path if Path::new(path).is_file() => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Parse(format!("cannot read {path}: {e}")))?;
            (format!("field file {path}"), MeasureField::from_json_str(&text)?)
        }
        other => {
            return Err(Error::Parse(format!(
                "unknown demo {other:?}: expected retraction, bezier, composition, gdelta or a field file"
            )))
        }
    };
    if let Some(t) = tolerance {
        field.tolerance = t;
    }
    let verdict = ckmap::verify_cks(&field);
    let zero = ckmap::minimal_ideal_zeroset(&field);
    let midpoint_norm = (target == "bezier").then(|| {
        let (a, b) = (1.0 / (n as f64), 1.0 / ((n - 1) as f64));
        ckmap::bezier_atoms(n, (a + b) / 2.0).iter().map(|(_, w)| w.abs()).sum::<f64>()
    });

    let mut text = String::new();
    writeln!(text, "field: {description}, |S| = {}, |K| = {}", field.domain.len(), field.codomain.len()).unwrap();
    for note in &field.notes {
        writeln!(text, "note: {note}").unwrap();
    }
    let shown: Vec<&str> = verdict.s0_labels.iter().take(12).map(String::as_str).collect();
    let more = if verdict.s0_labels.len() > shown.len() { ", …" } else { "" };
    writeln!(text, "s0: {} points {{{}{more}}}", verdict.s0.len(), shown.join(", ")).unwrap();
    match &verdict.h {
        Some(_) => writeln!(text, "h: bijection K → s0").unwrap(),
        None => writeln!(text, "h: not a bijection").unwrap(),
    }
    for r in &verdict.reasons {
        writeln!(text, "  {r}").unwrap();
    }
    if verdict.h.is_some() {
        let plus = verdict.epsilon.iter().filter(|&&e| e == 1).count();
        writeln!(text, "ε: +1 on {plus} of {} points of K", verdict.epsilon.len()).unwrap();
    }
    writeln!(
        text,
        "max ‖F(s)‖ off s0: {} at s = {}",
        verdict.max_off_norm,
        verdict.argmax_off.as_deref().unwrap_or("-")
    )
    .unwrap();
    writeln!(text, "margin: {}", verdict.margin).unwrap();
    if let Some(m) = midpoint_norm {
        writeln!(text, "segment-midpoint norm: {m} (interior margin {})", 1.0 - m).unwrap();
    }
    if let Some(v) = verdict.max_step_variation {
        writeln!(text, "max variation between grid neighbours: {v}").unwrap();
    }
    writeln!(text, "zero set Z: {} points ({})", zero.indices.len(), zero.note).unwrap();
    let status = match verdict.status {
        CksStatus::Pass => "PASS",
        CksStatus::Fail => "FAIL",
        CksStatus::Inconclusive => "INCONCLUSIVE",
    };
    writeln!(text, "verdict: {status}").unwrap();

    let code = if verdict.pass { EXIT_OK } else { EXIT_GEOMETRIC };
    let json = json!({
        "field": description,
        "S_size": field.domain.len(),
        "K": field.codomain.labels,
        "tolerance": field.tolerance,
        "notes": field.notes,
        "verdict": verdict,
        "segment_midpoint_norm": midpoint_norm,
        "zero_set": zero,
    });
    Ok(Report { code, json, text })
}

fn corpus_list() -> uembed::Result<Report> {
    let mut rows = Vec::new();
    let mut text = String::new();
    for name in corpus::names() {
        let space = corpus::load(name)?;
        writeln!(text, "{name:<12} dim {}  {}", space.dim(), path_name(&space)).unwrap();
        rows.push(json!({"name": name, "dim": space.dim(), "path": path_name(&space)}));
    }
    Ok(Report { code: EXIT_OK, json: Value::Array(rows), text })
}
