//! Command-line dispatcher: subcommand parsing, document loading, and
//! report emission.
//!
//! Every invocation prints exactly one JSON [`RunReport`] on stdout (or, for
//! `--format dot`, raw DOT text) and reserves stderr for diagnostics. Exit
//! codes: 0 when all requested checks pass, 1 when a check fails, 2 on
//! malformed input or unusable flags. Apart from the reported timing, output
//! is a pure function of the input document and the flags; the `--seed` flag
//! is echoed into the report for the benefit of randomized test drivers and
//! is consumed by nothing here.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path as FsPath, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::cycheck::{verify_complex, verify_self_duality, BimoduleComplex};
use crate::dimer::{
    check_matching_hypotheses, consistency_charge, dual_qp, perfect_matchings, validate_dimer,
    DimerGraph,
};
use crate::mckay::{degree_zero_part, koszul_complex, mckay_algebra, stable_algebra, McKayInput};
use crate::normalform::{complete_groebner, GradedCount, DEFAULT_CAP};
use crate::pathalg::{coef_string, PresentedGradedAlgebra, Quiver};
use crate::polyq::Poly;
use crate::qp::{
    check_main_hypotheses, dimer_bimodule_complex, is_cut, jacobian_algebra, qp_from_json,
    qp_to_doc, truncated_algebra, Cut,
};
use crate::repthy::{build_model, FiniteAlgebraModel, GlobalDim};
use crate::{Error, Result};

/// Machine-readable outcome of one invocation.
///
/// `timing_ms` varies between runs; every other field is deterministic given
/// the input document and the flags.
#[derive(Debug, Serialize)]
pub struct RunReport {
    /// The argument vector as received, without the binary name.
    pub command: Vec<String>,
    /// Echo of `--seed`, when given.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// SHA-256 of the input document bytes, or of a canonical parameter
    /// string for subcommands that take no document.
    pub input_sha256: String,
    /// Subcommand-specific payload.
    pub result: Value,
    /// Summary verdict; decides between exit codes 0 and 1.
    pub pass: bool,
    /// Wall-clock time spent after argument parsing.
    pub timing_ms: u64,
}

#[derive(Parser)]
#[command(
    name = "cyqw",
    version,
    about = "Graded quiver algebras: presentations, bases, and structure checks"
)]
struct Cli {
    /// RNG seed, echoed into the report. Randomized test drivers consume it;
    /// every computation behind these subcommands is deterministic.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Complete a Groebner basis for an algebra document and report graded
    /// dimensions.
    Gbasis(GbasisArgs),
    /// Build the McKay quiver algebra of a cyclic group and its quotients.
    Mckay(McKayArgs),
    /// Present the Jacobian algebra of a quiver with potential.
    Jacobian(JacobianArgs),
    /// Inspect a bipartite torus graph and its dual quiver with potential.
    Dimer(DimerArgs),
    /// Verify a bimodule complex degreewise, optionally with self-duality.
    Cycheck(CycheckArgs),
    /// Cartan matrix and Coxeter polynomial of a finite-dimensional algebra.
    Coxeter(CoxeterArgs),
    /// Probe the global dimension of a finite-dimensional algebra.
    Gldim(GldimArgs),
    /// Graded dimensions of a higher preprojective algebra.
    Preproj(PreprojArgs),
    /// Iterate the inverse Serre functor on simples and watch concentration.
    Repinf(RepinfArgs),
}

#[derive(Args)]
struct GbasisArgs {
    /// Algebra JSON document.
    path: PathBuf,
    /// Word-length cap for completion (default: CYQW_CAP or 12).
    #[arg(long)]
    cap: Option<usize>,
    /// Include the normal-word basis in the report (finite algebras only).
    #[arg(long)]
    emit_basis: bool,
    /// Report graded dimensions for grades 0..=M.
    #[arg(long, value_name = "M", default_value_t = 8)]
    hilbert: usize,
    /// Restrict dimensions to words ending at vertex i and starting at
    /// vertex j.
    #[arg(long, value_name = "i,j")]
    corner: Option<String>,
}

#[derive(Args)]
struct McKayArgs {
    /// Order of the cyclic group.
    #[arg(long)]
    n: usize,
    /// Weights a1,..,ad of the defining representation.
    #[arg(long, value_delimiter = ',', required = true, value_name = "a1,..,ad")]
    weights: Vec<usize>,
    /// Which object to emit.
    #[arg(long, value_enum, ignore_case = true, default_value_t = EmitKind::B)]
    emit: EmitKind,
    /// Output format for algebra emissions.
    #[arg(long, value_enum, ignore_case = true, default_value_t = OutFormat::Json)]
    format: OutFormat,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EmitKind {
    /// The full graded algebra on the McKay quiver.
    B,
    /// Its degree-zero part, regraded by tensor length.
    A,
    /// The degree-zero part with the trivial vertex removed.
    Abar,
    /// The full algebra with the trivial vertex removed.
    Bbar,
    /// Summary of the bimodule complex witnessing the duality of B.
    Koszul,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    /// JSON run report on stdout.
    Json,
    /// Raw DOT digraph on stdout.
    Dot,
}

#[derive(Args)]
struct JacobianArgs {
    /// Quiver-with-potential JSON document.
    path: PathBuf,
    /// Grade the presentation by the document's cut.
    #[arg(long)]
    cut: bool,
    /// Truncate to the degree-zero part of the cut grading.
    #[arg(long)]
    truncate: bool,
    /// Run the hypothesis suite for the idempotent spanned by these
    /// vertices (uses the document's cut).
    #[arg(long, value_name = "v1,v2", value_delimiter = ',', num_args = 1..)]
    check_hypotheses: Option<Vec<String>>,
    /// Word-length cap for the hypothesis checks.
    #[arg(long)]
    cap: Option<usize>,
}

#[derive(Args)]
struct DimerArgs {
    /// Dimer graph JSON document.
    path: PathBuf,
    /// Emit the dual quiver with potential as JSON.
    #[arg(long)]
    dual: bool,
    /// Enumerate perfect matchings and verify each is a cut of the dual.
    #[arg(long)]
    matchings: bool,
    /// Solve the uniform-charge feasibility problem.
    #[arg(long)]
    consistency: bool,
    /// Run the matching hypothesis suite; needs --cut and --idem.
    #[arg(long)]
    check_hypotheses: bool,
    /// Edge ids forming a perfect matching, for --check-hypotheses.
    #[arg(long, value_name = "e1,e2,..", value_delimiter = ',')]
    cut: Vec<String>,
    /// Face names spanning the idempotent, for --check-hypotheses.
    #[arg(long, value_name = "v1,v2", value_delimiter = ',')]
    idem: Vec<String>,
    /// Word-length cap for the hypothesis checks.
    #[arg(long)]
    cap: Option<usize>,
    /// Orient dual arrows with the white endpoint on the right instead.
    #[arg(long)]
    flip: bool,
}

#[derive(Args)]
struct CycheckArgs {
    /// Where the bimodule complex comes from.
    #[arg(long, value_enum, ignore_case = true)]
    source: SourceKind,
    /// Dimer graph JSON document (with --source dimer).
    path: Option<PathBuf>,
    /// Cyclic group order (with --source mckay).
    #[arg(long)]
    n: Option<usize>,
    /// Weights of the defining representation (with --source mckay).
    #[arg(long, value_delimiter = ',', value_name = "a1,..,ad")]
    weights: Vec<usize>,
    /// Cut edges selecting the grading (with --source dimer).
    #[arg(long, value_delimiter = ',', value_name = "e1,e2,..")]
    cut: Vec<String>,
    /// Orient dual arrows the other way (with --source dimer).
    #[arg(long)]
    flip: bool,
    /// Verify graded pieces up to this degree.
    #[arg(long, default_value_t = 4)]
    degcap: usize,
    /// Also check self-duality with this shift.
    #[arg(long, value_name = "d")]
    self_duality: Option<usize>,
    /// Word-length cap for the backing Groebner completion.
    #[arg(long)]
    cap: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SourceKind {
    /// Bimodule complex of a McKay quiver algebra.
    Mckay,
    /// Bimodule complex of a truncated dimer Jacobian algebra.
    Dimer,
}

#[derive(Args)]
struct CoxeterArgs {
    /// Algebra JSON document; must be finite-dimensional.
    path: PathBuf,
}

#[derive(Args)]
struct GldimArgs {
    /// Algebra JSON document; must be finite-dimensional.
    path: PathBuf,
    /// Resolution length probed before giving up.
    #[arg(long)]
    cap: Option<usize>,
}

#[derive(Args)]
struct PreprojArgs {
    /// Algebra JSON document; must be finite-dimensional.
    path: PathBuf,
    /// Homological degree of the extension bimodule.
    #[arg(long)]
    n: usize,
    /// Largest tensor grade reported.
    #[arg(long)]
    max: usize,
}

#[derive(Args)]
struct RepinfArgs {
    /// Algebra JSON document; must be finite-dimensional.
    path: PathBuf,
    /// Homological width of the inverse Serre twist.
    #[arg(long)]
    n: usize,
    /// Number of iterates to inspect.
    #[arg(long)]
    iters: usize,
}

/// Parses `argv` (without the binary name), runs the selected subcommand,
/// prints the report, and returns the process exit code.
pub fn run<I>(argv: I) -> i32
where
    I: IntoIterator<Item = String>,
{
    let args: Vec<String> = argv.into_iter().collect();
    let mut full = Vec::with_capacity(args.len() + 1);
    full.push("cyqw".to_string());
    full.extend(args.iter().cloned());
    let cli = match Cli::try_parse_from(&full) {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version requests are successful exits; anything else
            // is an input error.
            let code = if err.use_stderr() { 2 } else { 0 };
            let _ = err.print();
            return code;
        }
    };
    let started = Instant::now();
    match dispatch(&cli.command) {
        Ok(Outcome::Raw(text)) => {
            print!("{text}");
            0
        }
        Ok(Outcome::Report {
            digest,
            result,
            pass,
        }) => {
            let report = RunReport {
                command: args,
                seed: cli.seed,
                input_sha256: digest,
                result,
                pass,
                timing_ms: started.elapsed().as_millis() as u64,
            };
            let rendered = serde_json::to_string_pretty(&report).expect("report serializes");
            println!("{rendered}");
            if pass {
                0
            } else {
                1
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            2
        }
    }
}

enum Outcome {
    Report {
        digest: String,
        result: Value,
        pass: bool,
    },
    Raw(String),
}

fn dispatch(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Gbasis(a) => run_gbasis(a),
        Command::Mckay(a) => run_mckay(a),
        Command::Jacobian(a) => run_jacobian(a),
        Command::Dimer(a) => run_dimer(a),
        Command::Cycheck(a) => run_cycheck(a),
        Command::Coxeter(a) => run_coxeter(a),
        Command::Gldim(a) => run_gldim(a),
        Command::Preproj(a) => run_preproj(a),
        Command::Repinf(a) => run_repinf(a),
    }
}

/// Renders a quiver in DOT syntax: vertices in declared order, then one edge
/// line per arrow with its grading degree in the label.
pub fn emit_dot(quiver: &Quiver) -> String {
    quiver.to_dot()
}

fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut hex = String::with_capacity(64);
    for byte in digest {
        let _ = write!(hex, "{byte:02x}");
    }
    hex
}

fn read_document(path: &FsPath) -> Result<(String, String)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::new(format!("cannot read {}: {e}", path.display())))?;
    let digest = sha256_hex(text.as_bytes());
    Ok((text, digest))
}

/// Cap precedence: explicit flag, then the CYQW_CAP environment variable,
/// then the library default.
fn resolve_cap(flag: Option<usize>) -> Result<usize> {
    if let Some(cap) = flag {
        return Ok(cap);
    }
    match std::env::var("CYQW_CAP") {
        Ok(raw) => raw
            .trim()
            .parse()
            .map_err(|_| Error::new(format!("CYQW_CAP must be a non-negative integer, got {raw:?}"))),
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_CAP),
        Err(err) => Err(Error::new(format!("CYQW_CAP is unreadable: {err}"))),
    }
}

fn algebra_value(alg: &PresentedGradedAlgebra) -> Value {
    serde_json::from_str(&alg.to_json()).expect("emitted algebra JSON parses")
}

fn poly_value(p: &Poly) -> Value {
    Value::Array(
        p.coeffs()
            .iter()
            .map(|c| Value::String(coef_string(c)))
            .collect(),
    )
}

fn graded_count_value(c: GradedCount) -> Value {
    match c {
        GradedCount::Count(n) => json!(n),
        GradedCount::Infinite => json!("infinite"),
        GradedCount::Unknown => json!("unknown"),
    }
}

fn to_value<T: Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("report payload serializes")
}

fn resolve_vertex(q: &Quiver, name: &str) -> Result<usize> {
    q.vertex_id(name).ok_or_else(|| {
        Error::new(format!(
            "unknown vertex {:?}; this quiver has vertices {:?}",
            name,
            q.vertex_names()
        ))
    })
}

fn parse_corner(q: &Quiver, spec: &str) -> Result<(usize, usize)> {
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() != 2 {
        return Err(Error::new(format!(
            "--corner expects two vertex names \"i,j\", got {spec:?}"
        )));
    }
    let i = resolve_vertex(q, parts[0].trim())?;
    let j = resolve_vertex(q, parts[1].trim())?;
    Ok((i, j))
}

fn run_gbasis(a: &GbasisArgs) -> Result<Outcome> {
    let (text, digest) = read_document(&a.path)?;
    let alg = PresentedGradedAlgebra::from_json(&text)?;
    let cap = resolve_cap(a.cap)?;
    let gb = complete_groebner(&alg, cap);
    let corner = a
        .corner
        .as_deref()
        .map(|s| parse_corner(alg.quiver(), s))
        .transpose()?;
    let dims: Vec<Value> = (0..=a.hilbert)
        .map(|grade| graded_count_value(gb.graded_dimension(corner, grade)))
        .collect();
    let mut result = json!({
        "status": if gb.is_complete() { "complete" } else { "truncated" },
        "cap": cap,
        "dims": dims,
    });
    if let Some((i, j)) = corner {
        result["corner"] = json!([
            alg.quiver().vertex_name(i),
            alg.quiver().vertex_name(j),
        ]);
    }
    if a.emit_basis {
        let words = gb.all_normal_words()?;
        result["basis"] = Value::Array(
            words
                .iter()
                .map(|w| Value::String(alg.quiver().path_string(w)))
                .collect(),
        );
    }
    if let Some((num, den)) = gb.hilbert_rational() {
        result["hilbert"] = json!({
            "numerator": poly_value(&num),
            "denominator": poly_value(&den),
        });
    }
    let pass = gb.is_complete();
    Ok(Outcome::Report {
        digest,
        result,
        pass,
    })
}

fn mckay_digest(n: usize, weights: &[usize]) -> String {
    let weights: Vec<String> = weights.iter().map(|w| w.to_string()).collect();
    sha256_hex(format!("mckay --n {} --weights {}", n, weights.join(",")).as_bytes())
}

fn run_mckay(a: &McKayArgs) -> Result<Outcome> {
    let digest = mckay_digest(a.n, &a.weights);
    let input = McKayInput::new(a.n, a.weights.clone())?;
    if a.emit == EmitKind::Koszul {
        if a.format == OutFormat::Dot {
            return Err(Error::new(
                "--emit koszul has no DOT rendering; use --format json",
            ));
        }
        let complex = koszul_complex(&input)?;
        return Ok(Outcome::Report {
            digest,
            result: complex_summary(&complex),
            pass: true,
        });
    }
    let b = mckay_algebra(&input)?;
    let alg = match a.emit {
        EmitKind::B => b,
        EmitKind::A => degree_zero_part(&b)?,
        EmitKind::Abar => stable_algebra(&degree_zero_part(&b)?)?,
        EmitKind::Bbar => stable_algebra(&b)?,
        EmitKind::Koszul => unreachable!("handled above"),
    };
    match a.format {
        OutFormat::Dot => Ok(Outcome::Raw(emit_dot(alg.quiver()))),
        OutFormat::Json => Ok(Outcome::Report {
            digest,
            result: algebra_value(&alg),
            pass: true,
        }),
    }
}

fn complex_summary(complex: &BimoduleComplex) -> Value {
    let q = complex.algebra().quiver();
    let levels: Vec<Value> = (0..complex.len())
        .map(|level| {
            let generators: Vec<Value> = complex
                .gens(level)
                .iter()
                .map(|g| {
                    json!({
                        "left": q.vertex_name(g.left_vertex),
                        "right": q.vertex_name(g.right_vertex),
                        "twist": g.twist,
                    })
                })
                .collect();
            json!({ "level": level, "generators": generators })
        })
        .collect();
    json!({
        "algebra": algebra_value(complex.algebra()),
        "levels": levels,
    })
}

fn require_cut(cut: &Option<Cut>) -> Result<&Cut> {
    cut.as_ref().ok_or_else(|| {
        Error::new("this operation needs a cut; add \"cut\": [arrow names] to the document")
    })
}

fn run_jacobian(a: &JacobianArgs) -> Result<Outcome> {
    let (text, digest) = read_document(&a.path)?;
    let (w, doc_cut) = qp_from_json(&text)?;
    if let Some(vertices) = &a.check_hypotheses {
        let cut = require_cut(&doc_cut)?;
        let graded = jacobian_algebra(&w, Some(cut))?;
        let idem: BTreeSet<String> = vertices.iter().cloned().collect();
        let cap = resolve_cap(a.cap)?;
        let report = check_main_hypotheses(&graded, &idem, cap)?;
        let pass = report.pass;
        return Ok(Outcome::Report {
            digest,
            result: to_value(&report),
            pass,
        });
    }
    let alg = if a.truncate {
        truncated_algebra(&w, require_cut(&doc_cut)?)?
    } else if a.cut {
        jacobian_algebra(&w, Some(require_cut(&doc_cut)?))?
    } else {
        jacobian_algebra(&w, None)?
    };
    Ok(Outcome::Report {
        digest,
        result: algebra_value(&alg),
        pass: true,
    })
}

fn run_dimer(a: &DimerArgs) -> Result<Outcome> {
    let (text, digest) = read_document(&a.path)?;
    let graph = DimerGraph::from_json(&text)?;
    let selected = [a.dual, a.matchings, a.consistency, a.check_hypotheses]
        .iter()
        .filter(|&&flag| flag)
        .count();
    if selected > 1 {
        return Err(Error::new(
            "choose at most one of --dual, --matchings, --consistency, --check-hypotheses",
        ));
    }
    let (result, pass) = if a.dual {
        let w = dual_qp(&graph, a.flip)?;
        (to_value(&qp_to_doc(&w, None)), true)
    } else if a.matchings {
        let w = dual_qp(&graph, a.flip)?;
        let matchings = perfect_matchings(&graph)?;
        let mut all_cuts = true;
        let mut rows = Vec::with_capacity(matchings.len());
        for m in &matchings {
            let check = is_cut(&w, m)?;
            all_cuts &= check.ok;
            rows.push(json!({
                "edges": m.iter().collect::<Vec<_>>(),
                "is_cut": check.ok,
            }));
        }
        (
            json!({
                "count": matchings.len(),
                "matchings": rows,
                "all_cuts": all_cuts,
            }),
            all_cuts,
        )
    } else if a.consistency {
        let report = consistency_charge(&graph)?;
        let witness = report.witness.as_ref().map(|assignment| {
            assignment
                .iter()
                .map(|(edge, charge)| (edge.clone(), Value::String(coef_string(charge))))
                .collect::<serde_json::Map<String, Value>>()
        });
        let pass = report.feasible && report.verified;
        (
            json!({
                "feasible": report.feasible,
                "margin": report.margin.as_ref().map(coef_string),
                "witness": witness,
                "verified": report.verified,
            }),
            pass,
        )
    } else if a.check_hypotheses {
        if a.cut.is_empty() || a.idem.is_empty() {
            return Err(Error::new(
                "--check-hypotheses needs --cut e1,e2,.. and --idem v1,v2",
            ));
        }
        let cut: Cut = a.cut.iter().cloned().collect();
        let idem: BTreeSet<String> = a.idem.iter().cloned().collect();
        let cap = resolve_cap(a.cap)?;
        let report = check_matching_hypotheses(&graph, &cut, &idem, cap)?;
        let pass = report.pass;
        (to_value(&report), pass)
    } else {
        let report = validate_dimer(&graph);
        let pass = report.ok;
        (to_value(&report), pass)
    };
    Ok(Outcome::Report {
        digest,
        result,
        pass,
    })
}

fn run_cycheck(a: &CycheckArgs) -> Result<Outcome> {
    let (complex, digest) = match a.source {
        SourceKind::Mckay => {
            let n = a
                .n
                .ok_or_else(|| Error::new("--source mckay needs --n"))?;
            if a.weights.is_empty() {
                return Err(Error::new("--source mckay needs --weights"));
            }
            let digest = mckay_digest(n, &a.weights);
            let input = McKayInput::new(n, a.weights.clone())?;
            (koszul_complex(&input)?, digest)
        }
        SourceKind::Dimer => {
            let path = a
                .path
                .as_ref()
                .ok_or_else(|| Error::new("--source dimer needs a graph JSON path"))?;
            let (text, digest) = read_document(path)?;
            let graph = DimerGraph::from_json(&text)?;
            if a.cut.is_empty() {
                return Err(Error::new("--source dimer needs --cut e1,e2,.."));
            }
            let cut: Cut = a.cut.iter().cloned().collect();
            let w = dual_qp(&graph, a.flip)?;
            (dimer_bimodule_complex(&w, &cut)?, digest)
        }
    };
    let cap = resolve_cap(a.cap)?;
    let gb = complete_groebner(complex.algebra(), cap);
    let report = verify_complex(&complex, &gb, a.degcap)?;
    let mut pass = report.pass;
    let mut result = json!({ "complex": to_value(&report) });
    if let Some(d) = a.self_duality {
        let duality = verify_self_duality(&complex, d);
        pass = pass && duality.pass;
        result["self_duality"] = to_value(&duality);
    }
    Ok(Outcome::Report {
        digest,
        result,
        pass,
    })
}

fn load_model(path: &FsPath) -> Result<(FiniteAlgebraModel, String)> {
    let (text, digest) = read_document(path)?;
    let alg = PresentedGradedAlgebra::from_json(&text)?;
    let model = build_model(&alg, resolve_cap(None)?)?;
    Ok((model, digest))
}

fn run_coxeter(a: &CoxeterArgs) -> Result<Outcome> {
    let (model, digest) = load_model(&a.path)?;
    let coxeter = model.coxeter_polynomial()?;
    let result = json!({
        "dim": model.dim(),
        "cartan": model.cartan_matrix(),
        "coxeter_ascending": poly_value(&coxeter),
    });
    Ok(Outcome::Report {
        digest,
        result,
        pass: true,
    })
}

fn run_gldim(a: &GldimArgs) -> Result<Outcome> {
    let (model, digest) = load_model(&a.path)?;
    let probe = a.cap.unwrap_or(DEFAULT_CAP);
    let gd = model.global_dimension(probe);
    let pass = matches!(gd, GlobalDim::Finite(_));
    let result = json!({
        "probe_cap": probe,
        "global_dimension": to_value(&gd),
    });
    Ok(Outcome::Report {
        digest,
        result,
        pass,
    })
}

fn run_preproj(a: &PreprojArgs) -> Result<Outcome> {
    let (model, digest) = load_model(&a.path)?;
    let report = model.preprojective_graded_dims(a.n, a.max)?;
    Ok(Outcome::Report {
        digest,
        result: to_value(&report),
        pass: true,
    })
}

fn run_repinf(a: &RepinfArgs) -> Result<Outcome> {
    let (model, digest) = load_model(&a.path)?;
    let report = model.serre_inverse_iterates(a.n, a.iters)?;
    let pass = report.concentrated;
    Ok(Outcome::Report {
        digest,
        result: to_value(&report),
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pathalg::QuiverBuilder;

    fn edge_lines(dot: &str) -> usize {
        dot.lines().filter(|l| l.contains("->")).count()
    }

    fn node_lines(dot: &str) -> usize {
        dot.lines()
            .filter(|l| l.starts_with("  ") && !l.contains("->"))
            .count()
    }

    #[test]
    fn dot_of_empty_quiver_has_no_edges() {
        let q = QuiverBuilder::new().build().unwrap();
        let dot = emit_dot(&q);
        assert!(dot.starts_with("digraph"));
        assert_eq!(edge_lines(&dot), 0);
    }

    #[test]
    fn dot_of_single_arrow_has_one_edge_line() {
        let mut b = QuiverBuilder::new();
        b.vertex("1").vertex("2").arrow("a", "1", "2", 0);
        let dot = emit_dot(&b.build().unwrap());
        assert_eq!(edge_lines(&dot), 1);
        assert!(dot.contains("\"1\" -> \"2\""));
        assert!(dot.contains("a:0"), "degree belongs in the edge label");
    }

    #[test]
    fn dot_of_weighted_mckay_quiver_has_fifteen_edges() {
        let input = McKayInput::new(5, vec![1, 2, 2]).unwrap();
        let b = mckay_algebra(&input).unwrap();
        let dot = emit_dot(b.quiver());
        assert_eq!(node_lines(&dot), 5);
        assert_eq!(edge_lines(&dot), 15);
    }

    #[test]
    fn explicit_cap_flag_wins() {
        assert_eq!(resolve_cap(Some(3)).unwrap(), 3);
    }

    #[test]
    fn corner_parsing_rejects_unknown_vertices() {
        let mut b = QuiverBuilder::new();
        b.vertex("1").vertex("2");
        let q = b.build().unwrap();
        assert_eq!(parse_corner(&q, "2,1").unwrap(), (1, 0));
        let err = parse_corner(&q, "2,9").unwrap_err();
        assert!(err.message().contains("unknown vertex"));
        let err = parse_corner(&q, "2").unwrap_err();
        assert!(err.message().contains("two vertex names"));
    }

    #[test]
    fn graded_counts_render_as_numbers_or_strings() {
        assert_eq!(graded_count_value(GradedCount::Count(7)), json!(7));
        assert_eq!(graded_count_value(GradedCount::Infinite), json!("infinite"));
        assert_eq!(graded_count_value(GradedCount::Unknown), json!("unknown"));
    }
}
