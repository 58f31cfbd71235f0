//! The `persep` command line.
//!
//! Exit codes: 0 on success, 1 on a mathematical negative (interior point,
//! no separation, no perspective point) or a failed `--verify` cross-check,
//! 2 on input errors. Result documents go to stdout, diagnostics to stderr.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cones::{perspective_cone, union_convexity, Verdict};
use crate::error::{Error, Result};
use crate::geometry::{Polytope, SetExpr, Tolerance, Vector};
use crate::lemmas::{self, DEFAULT_SEED};
use crate::lp::LinearConstraint;
use crate::oracle::{fm_feasible, oracle_separable_2d, FM_MAX_CONSTRAINTS, FM_MAX_DIM};
use crate::plot::{render_plot_2d, Overlay};
use crate::scene::{format_vector, json_string, parse_scene, ResultDocument, Scene};
use crate::separation::{
    find_perspective_point, separate_through_point, supporting_hyperplane, Hyperplane,
    PerspectiveSearch, SearchConfig, SeparationCertificate,
};

pub const SEED_ENV: &str = "PERSEP_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "persep",
    version,
    about = "Supporting and separating hyperplanes through perspective cones"
)]
pub struct Cli {
    /// Cross-check results against the independent oracles.
    #[arg(long, global = true)]
    pub verify: bool,

    /// Decimal places in result documents.
    #[arg(long, global = true, default_value_t = 6)]
    pub precision: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Supporting hyperplane of the hull of C through p.
    Support { scene: PathBuf },
    /// Hyperplane separating A and B through a point.
    Separate {
        scene: PathBuf,
        /// Use the scene's p instead of searching for a point.
        #[arg(long)]
        at_point: bool,
        /// Grid points per axis for the fallback search.
        #[arg(long, default_value_t = 21)]
        grid: usize,
        /// Bounding-box scale for the fallback search.
        #[arg(long, default_value_t = 2.0)]
        inflation: f64,
    },
    /// Perspective-cone generators and the convexity verdict of each set.
    Cone { scene: PathBuf },
    /// Randomized checks.
    Check {
        #[command(subcommand)]
        what: CheckCommand,
    },
    /// SVG figure of a planar scene with its hyperplane.
    Plot {
        scene: PathBuf,
        /// Output file; stdout when absent.
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Draw the sets only.
        #[arg(long)]
        no_result: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum CheckCommand {
    Lemmas {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Defaults to $PERSEP_SEED, then a fixed seed.
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// What a subcommand produced: stdout text and the exit code.
struct Outcome {
    stdout: String,
    code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, code: 0 }
    }

    fn negative(stdout: String) -> Self {
        Outcome { stdout, code: 1 }
    }
}

/// Parse `args` (including the program name) and run.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                2
            } else {
                let _ = write!(stdout, "{text}");
                0
            };
        }
    };
    let mut notes = Vec::new();
    let result = dispatch(&cli, &mut notes);
    for note in notes {
        let _ = writeln!(stderr, "{note}");
    }
    match result {
        Ok(outcome) => {
            let _ = write!(stdout, "{}", outcome.stdout);
            outcome.code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}

/// Entry point for the binary.
pub fn main_from_env() -> i32 {
    run(
        std::env::args_os(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    )
}

fn load(path: &Path) -> Result<Scene> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Scene(format!("cannot read {}: {e}", path.display())))?;
    parse_scene(&text)
}

fn require_p(scene: &Scene) -> Result<&Vector> {
    scene
        .point_p
        .as_ref()
        .ok_or_else(|| Error::Scene("scene has no point p".to_string()))
}

fn require_b(scene: &Scene) -> Result<&SetExpr> {
    scene
        .set_b
        .as_ref()
        .ok_or_else(|| Error::Scene("scene has no set B".to_string()))
}

fn hull_of(set: &SetExpr, tol: &Tolerance) -> Result<Polytope> {
    Polytope::new(set.all_points().cloned().collect(), tol)
}

fn seed_from_env() -> Option<u64> {
    std::env::var(SEED_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
}

fn dispatch(cli: &Cli, notes: &mut Vec<String>) -> Result<Outcome> {
    let precision = cli.precision;
    match &cli.command {
        Command::Support { scene } => {
            let scene = load(scene)?;
            support(&scene, cli.verify, precision, notes)
        }
        Command::Separate {
            scene,
            at_point,
            grid,
            inflation,
        } => {
            let scene = load(scene)?;
            if *at_point {
                separate_at_point(&scene, cli.verify, precision, notes)
            } else {
                let config = SearchConfig::new(*grid, *inflation)?;
                separate_search(&scene, &config, cli.verify, precision, notes)
            }
        }
        Command::Cone { scene } => {
            let scene = load(scene)?;
            cone(&scene, precision)
        }
        Command::Check {
            what: CheckCommand::Lemmas { trials, seed },
        } => {
            let seed = seed.or_else(seed_from_env).unwrap_or(DEFAULT_SEED);
            check_lemmas(*trials, seed)
        }
        Command::Plot {
            scene,
            out,
            no_result,
        } => {
            let scene = load(scene)?;
            plot(&scene, out.as_deref(), *no_result, notes)
        }
    }
}

fn support_document(h: &Hyperplane, c: &Polytope) -> ResultDocument {
    ResultDocument {
        normal: Some(h.normal().clone()),
        anchor: Some(h.anchor().clone()),
        side_a_max: Some(h.max_offset(c.vertices())),
        ..ResultDocument::with_status("supported")
    }
}

fn certificate_document(cert: &SeparationCertificate) -> ResultDocument {
    ResultDocument {
        normal: Some(cert.hyperplane.normal().clone()),
        anchor: Some(cert.hyperplane.anchor().clone()),
        side_a_max: Some(cert.side_a_max),
        side_b_min: Some(cert.side_b_min),
        margin: Some(cert.margin),
        ..ResultDocument::with_status("separated")
    }
}

/// Negative results become a document and exit code 1; everything else is
/// an input error.
fn negative_or_err(e: Error, status: &str) -> Result<ResultDocument> {
    if e.is_mathematical() {
        Ok(ResultDocument::negative(status, &e))
    } else {
        Err(e)
    }
}

fn finish(
    mut doc: ResultDocument,
    positive: bool,
    verified: Option<bool>,
    precision: usize,
) -> Outcome {
    doc.verified = verified;
    let text = doc.render(precision);
    if positive && verified != Some(false) {
        Outcome::ok(text)
    } else {
        Outcome::negative(text)
    }
}

/// Exact check for a nonzero `N` with `<N, x> <= 0` on every `A` row and
/// `>= 0` on every `B` row: one system per pinned sign `N_i >= 1` or
/// `N_i <= -1`. `None` when the system is outside the exact envelope.
fn fm_homogeneous(dim: usize, le_rows: &[Vector], ge_rows: &[Vector]) -> Result<Option<bool>> {
    if dim > FM_MAX_DIM || le_rows.len() + ge_rows.len() + 1 > FM_MAX_CONSTRAINTS {
        return Ok(None);
    }
    let mut rows: Vec<LinearConstraint> = le_rows
        .iter()
        .map(|r| LinearConstraint::le(r.clone(), 0.0))
        .chain(ge_rows.iter().map(|r| LinearConstraint::ge(r.clone(), 0.0)))
        .collect();
    for axis in 0..dim {
        for pin in [
            LinearConstraint::ge(Vector::unit(dim, axis), 1.0),
            LinearConstraint::le(Vector::unit(dim, axis), -1.0),
        ] {
            rows.push(pin);
            let feasible = fm_feasible(&rows)?;
            rows.pop();
            if feasible {
                return Ok(Some(true));
            }
        }
    }
    Ok(Some(false))
}

fn translated(set: &SetExpr, p: &Vector) -> Vec<Vector> {
    set.all_points().map(|x| x - p).collect()
}

fn support(
    scene: &Scene,
    verify: bool,
    precision: usize,
    notes: &mut Vec<String>,
) -> Result<Outcome> {
    let tol = scene.tolerance()?;
    let p = require_p(scene)?;
    if scene.set_b.is_some() {
        return Err(Error::Scene("support expects a single set C".to_string()));
    }
    let c = hull_of(&scene.set_a, &tol)?;
    let result = supporting_hyperplane(&c, p, &tol);
    let positive = result.is_ok();
    let doc = match &result {
        Ok(h) => support_document(h, &c),
        Err(e) => negative_or_err(e.clone(), "p_in_interior")?,
    };
    let verified = if verify {
        let rows = translated(&scene.set_a, p);
        let exact = fm_homogeneous(scene.dim, &rows, &[])?;
        let certificate_ok = result
            .as_ref()
            .map(|h| h.max_offset(c.vertices()) <= tol.eps_feas)
            .unwrap_or(true);
        match exact {
            Some(feasible) => Some(certificate_ok && feasible == positive),
            None => {
                notes.push(
                    "verify: exact check skipped, scene exceeds the elimination envelope"
                        .to_string(),
                );
                Some(certificate_ok)
            }
        }
    } else {
        None
    };
    Ok(finish(doc, positive, verified, precision))
}

/// Oracle status for separation through `p`: the planar sweep in 2D, exact
/// elimination when small enough, otherwise `None`.
fn oracle_separable(a: &SetExpr, b: &SetExpr, p: &Vector, tol: &Tolerance) -> Result<Option<bool>> {
    if p.dim() == 2 {
        return match oracle_separable_2d(a, b, p, tol) {
            Ok(s) => Ok(Some(s.separable)),
            Err(Error::DegeneratePoint) => Ok(Some(false)),
            Err(e) => Err(e),
        };
    }
    fm_homogeneous(p.dim(), &translated(a, p), &translated(b, p))
}

fn separate_at_point(
    scene: &Scene,
    verify: bool,
    precision: usize,
    notes: &mut Vec<String>,
) -> Result<Outcome> {
    let tol = scene.tolerance()?;
    let p = require_p(scene)?;
    let b = require_b(scene)?;
    let a = &scene.set_a;
    let result = separate_through_point(a, b, p, &tol);
    let positive = result.is_ok();
    let doc = match &result {
        Ok(cert) => certificate_document(cert),
        Err(Error::DegeneratePoint) => {
            ResultDocument::negative("degenerate_point", &Error::DegeneratePoint)
        }
        Err(e) => negative_or_err(e.clone(), "not_separable")?,
    };
    let verified = if verify {
        let certificate_ok = result
            .as_ref()
            .map(|c| c.verify(a, b, &tol))
            .unwrap_or(true);
        let point_in_set = perspective_cone(a, p, &tol)?
            .iter()
            .chain(perspective_cone(b, p, &tol)?.iter())
            .any(|k| k.is_trivial());
        if point_in_set {
            Some(certificate_ok && !positive)
        } else {
            match oracle_separable(a, b, p, &tol)? {
                Some(separable) => Some(certificate_ok && separable == positive),
                None => {
                    notes.push(
                        "verify: oracle check skipped, scene exceeds the elimination envelope"
                            .to_string(),
                    );
                    Some(certificate_ok)
                }
            }
        }
    } else {
        None
    };
    Ok(finish(doc, positive, verified, precision))
}

fn separate_search(
    scene: &Scene,
    config: &SearchConfig,
    verify: bool,
    precision: usize,
    notes: &mut Vec<String>,
) -> Result<Outcome> {
    let tol = scene.tolerance()?;
    let b = require_b(scene)?;
    let a = &scene.set_a;
    match find_perspective_point(a, b, config, &tol)? {
        PerspectiveSearch::Found { point, certificate } => {
            let verified = if verify {
                let certificate_ok = certificate.verify(a, b, &tol);
                match oracle_separable(a, b, &point, &tol)? {
                    Some(separable) => Some(certificate_ok && separable),
                    None => {
                        notes.push(
                            "verify: oracle check skipped, scene exceeds the elimination envelope"
                                .to_string(),
                        );
                        Some(certificate_ok)
                    }
                }
            } else {
                None
            };
            Ok(finish(
                certificate_document(&certificate),
                true,
                verified,
                precision,
            ))
        }
        PerspectiveSearch::NotFound => {
            if verify {
                notes.push(
                    "verify: no oracle decides the absence of a perspective point".to_string(),
                );
            }
            let mut doc = ResultDocument::with_status("not_found");
            doc.reason = Some("no point separates the sets".to_string());
            Ok(finish(doc, false, None, precision))
        }
    }
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Convex => "convex",
        Verdict::NotConvex => "not_convex",
        Verdict::Unknown => "unknown",
    }
}

fn cone(scene: &Scene, precision: usize) -> Result<Outcome> {
    let tol = scene.tolerance()?;
    let p = require_p(scene)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed_from_env().unwrap_or(DEFAULT_SEED));
    let mut sets = vec![(if scene.set_b.is_some() { "A" } else { "C" }, &scene.set_a)];
    if let Some(b) = &scene.set_b {
        sets.push(("B", b));
    }
    let mut entries = Vec::new();
    for (name, set) in sets {
        let cones = perspective_cone(set, p, &tol)?;
        let trivial = cones.iter().any(|k| k.is_trivial());
        let report = union_convexity(&cones, &tol, &mut rng)?;
        let pieces: Vec<String> = cones
            .iter()
            .map(|k| {
                let gens: Vec<String> = k
                    .generators()
                    .iter()
                    .map(|g| format_vector(g, precision))
                    .collect();
                format!("[{}]", gens.join(", "))
            })
            .collect();
        let mut fields = vec![
            format!("\"name\": {}", json_string(name)),
            format!("\"trivial\": {trivial}"),
            format!("\"pieces\": [{}]", pieces.join(", ")),
            format!("\"verdict\": {}", json_string(verdict_name(report.verdict))),
        ];
        if let Some((u, w)) = &report.witness {
            fields.push(format!(
                "\"witness\": [{}, {}]",
                format_vector(u, precision),
                format_vector(w, precision)
            ));
        }
        entries.push(format!("    {{{}}}", fields.join(", ")));
    }
    Ok(Outcome::ok(format!(
        "{{\n  \"status\": \"ok\",\n  \"apex\": {},\n  \"sets\": [\n{}\n  ]\n}}\n",
        format_vector(p, precision),
        entries.join(",\n")
    )))
}

fn check_lemmas(trials: usize, seed: u64) -> Result<Outcome> {
    let tol = Tolerance::default();
    let tallies = lemmas::run_suite(trials, seed, &tol)?;
    let mut text = format!("seed {seed}\n");
    for t in &tallies {
        text.push_str(&format!("{}: {}/{}\n", t.name, t.passed, t.trials));
    }
    Ok(if tallies.iter().all(lemmas::Tally::all_passed) {
        Outcome::ok(text)
    } else {
        Outcome::negative(text)
    })
}

fn plot(
    scene: &Scene,
    out: Option<&Path>,
    no_result: bool,
    notes: &mut Vec<String>,
) -> Result<Outcome> {
    let tol = scene.tolerance()?;
    if scene.dim != 2 {
        return Err(Error::UnsupportedDimension {
            required: 2,
            found: scene.dim,
        });
    }
    let mut negative = None;
    let svg = if no_result {
        render_plot_2d(scene, Overlay::None)?
    } else {
        match (&scene.set_b, &scene.point_p) {
            (None, Some(p)) => {
                let c = hull_of(&scene.set_a, &tol)?;
                match supporting_hyperplane(&c, p, &tol) {
                    Ok(h) => render_plot_2d(scene, Overlay::Support(&h))?,
                    Err(e) if e.is_mathematical() => {
                        negative = Some(e.to_string());
                        render_plot_2d(scene, Overlay::None)?
                    }
                    Err(e) => return Err(e),
                }
            }
            (Some(b), Some(p)) => match separate_through_point(&scene.set_a, b, p, &tol) {
                Ok(cert) => render_plot_2d(scene, Overlay::Separation(&cert))?,
                Err(e) if e.is_mathematical() => {
                    negative = Some(e.to_string());
                    render_plot_2d(scene, Overlay::None)?
                }
                Err(e) => return Err(e),
            },
            (Some(b), None) => {
                match find_perspective_point(&scene.set_a, b, &SearchConfig::default(), &tol)? {
                    PerspectiveSearch::Found { point, certificate } => {
                        let mut shown = scene.clone();
                        shown.point_p = Some(point);
                        render_plot_2d(&shown, Overlay::Separation(&certificate))?
                    }
                    PerspectiveSearch::NotFound => {
                        negative = Some("no point separates the sets".to_string());
                        render_plot_2d(scene, Overlay::None)?
                    }
                }
            }
            (None, None) => render_plot_2d(scene, Overlay::None)?,
        }
    };
    let stdout = match out {
        Some(path) => {
            fs::write(path, &svg)
                .map_err(|e| Error::Scene(format!("cannot write {}: {e}", path.display())))?;
            String::new()
        }
        None => svg,
    };
    Ok(match negative {
        Some(reason) => {
            notes.push(format!("plot: sets drawn without a hyperplane: {reason}"));
            Outcome::negative(stdout)
        }
        None => Outcome::ok(stdout),
    })
}
