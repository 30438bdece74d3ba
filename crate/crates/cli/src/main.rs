//! Command-line front end: verify, analyze, construct, detect-orbit and
//! export, over the exact file formats.
//!
//! Exit status contract: 0 success/VERIFIED, 1 FAILED or refused,
//! 2 UNDECIDED or NO-CERTIFICATE, 3 parse error (with location),
//! 4 refine-the-grid diagnostics.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use indexsys::analysis::{self, AnalysisOptions};
use indexsys::cocyclic::{HomGraph, OrbitDetection};
use indexsys::construct::{self, ConstructError};
use indexsys::dynamics::orbits;
use indexsys::dynamics::PLMap;
use indexsys::format;
use indexsys::geometry::Label;
use indexsys::index::{self, IndexSystem, Verdict};
use indexsys::scalar::{format_scalar, parse_scalar, Scalar};

const MAX_LEN_LIMIT: usize = 24;
const MAX_GRID: u64 = 10_000;

#[derive(Parser)]
#[command(
    name = "indexsys",
    about = "Exact verification, construction and symbolic-dynamics analysis of index systems for piecewise-linear maps",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArgs {
    /// Directory for report files (reports also go to stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Omit the timestamp header so identical inputs give identical bytes.
    #[arg(long)]
    no_timestamp: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check the precedes conditions and the chain criterion of a system.
    Verify {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        system: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Homology, cocyclic-subshift and entropy analysis of a verified system.
    Analyze {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        system: PathBuf,
        /// Length bound for cycle enumeration and emptiness (at most 24).
        #[arg(long, default_value_t = 12)]
        max_len: usize,
        /// Optional word list to certify a shift factor explicitly.
        #[arg(long)]
        words: Option<PathBuf>,
        /// Write the homology graph in DOT format.
        #[arg(long)]
        dot: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Build a verified system from a product index pair or the strip template.
    Construct {
        #[arg(long)]
        map: PathBuf,
        /// Product pair file (rectangles over the grid).
        #[arg(long)]
        product_pair: Option<PathBuf>,
        /// Strip template parameters `w,c` (grid multiples).
        #[arg(long)]
        template: Option<String>,
        /// Grid step, written `1/k` with k at most 10000.
        #[arg(long)]
        delta: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Certify an orbit following an eventually periodic word.
    DetectOrbit {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        system: PathBuf,
        /// Word file with `preperiod` and `period` label lists.
        #[arg(long)]
        words: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Export the homology graph of a system as DOT.
    Export {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        dot: PathBuf,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::new(3, format!("cannot read {}: {e}", path.display())))
}

fn load_map(path: &Path) -> Result<PLMap, Failure> {
    format::map_from_str(&read_file(path)?)
        .map_err(|e| Failure::new(3, format!("{}: {e}", path.display())))
}

fn load_system(path: &Path) -> Result<IndexSystem, Failure> {
    format::system_from_str(&read_file(path)?)
        .map_err(|e| Failure::new(3, format!("{}: {e}", path.display())))
}

fn emit(output: &OutputArgs, name: &str, body: &str) -> Result<(), Failure> {
    let mut text = String::new();
    if !output.no_timestamp {
        let now = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        text.push_str(&format!("# generated: {now}\n"));
    }
    text.push_str(body);
    print!("{text}");
    if let Some(dir) = &output.out {
        std::fs::create_dir_all(dir)
            .map_err(|e| Failure::new(3, format!("cannot create {}: {e}", dir.display())))?;
        let path = dir.join(name);
        std::fs::write(&path, &text)
            .map_err(|e| Failure::new(3, format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn write_plain(path: &Path, body: &str) -> Result<(), Failure> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| Failure::new(3, format!("cannot create {}: {e}", parent.display())))?;
        }
    }
    std::fs::write(path, body)
        .map_err(|e| Failure::new(3, format!("cannot write {}: {e}", path.display())))
}

fn parse_delta(raw: &str) -> Result<u64, Failure> {
    let value: Scalar =
        parse_scalar(raw).map_err(|e| Failure::new(3, format!("--delta: {e}")))?;
    use num_traits::One;
    if !value.numer().is_one() {
        return Err(Failure::new(
            3,
            format!(
                "--delta must be of the form 1/k, got {}",
                format_scalar(&value)
            ),
        ));
    }
    let k: u64 = value
        .denom()
        .clone()
        .try_into()
        .map_err(|_| Failure::new(3, "--delta denominator out of range".to_string()))?;
    if k == 0 || k > MAX_GRID {
        return Err(Failure::new(
            3,
            format!("--delta denominator must satisfy 1 <= k <= {MAX_GRID}"),
        ));
    }
    Ok(k)
}

fn refine_message(err: &ConstructError, k: u64) -> String {
    format!("{err}\nsuggested next grid step: 1/{}", k.saturating_mul(3))
}

fn cmd_verify(map: &Path, system: &Path, output: &OutputArgs) -> Result<u8, Failure> {
    let f = load_map(map)?;
    let system = load_system(system)?;
    let report = index::verify(&system, &f)
        .map_err(|e| Failure::new(1, format!("verification error: {e}")))?;
    let body = analysis::render_verification(&report);
    emit(output, "verify.report.txt", &body)?;
    if let Some(dir) = &output.out {
        write_plain(
            &dir.join("verify.report.json"),
            &analysis::verification_to_json(&report),
        )?;
    }
    Ok(analysis::verification_verdict_exit(&report) as u8)
}

fn cmd_analyze(
    map: &Path,
    system: &Path,
    max_len: usize,
    words: Option<&Path>,
    dot: Option<&Path>,
    output: &OutputArgs,
) -> Result<u8, Failure> {
    if max_len > MAX_LEN_LIMIT {
        return Err(Failure::new(
            3,
            format!("--max-len must be at most {MAX_LEN_LIMIT}"),
        ));
    }
    let f = load_map(map)?;
    let system = load_system(system)?;
    let verification = index::verify(&system, &f)
        .map_err(|e| Failure::new(1, format!("verification error: {e}")))?;
    if verification.verdict != Verdict::Verified {
        let mut body = String::from("analyze refused: the system does not verify\n");
        body.push_str(&analysis::render_verification(&verification));
        emit(output, "analyze.report.txt", &body)?;
        return Ok(1);
    }
    let options = AnalysisOptions {
        max_len,
        ..Default::default()
    };
    let result = analysis::analyze(&system, &f, &options)
        .map_err(|e| Failure::new(1, format!("analysis error: {e}")))?;
    let mut body = analysis::render_analysis(&result);

    if let Some(words_path) = words {
        let file = format::words_from_str(&read_file(words_path)?)
            .map_err(|e| Failure::new(3, format!("{}: {e}", words_path.display())))?;
        let word_lists: Vec<Vec<Label>> = file.words.iter().map(|w| format::labels(w)).collect();
        if !word_lists.is_empty() {
            let n = word_lists[0].len() as u32;
            match indexsys::cocyclic::shift_factor(&result.graph, n, &word_lists) {
                Ok(cert) => {
                    body.push_str(&format!(
                        "requested word certificate: entropy >= {} (~{:.4})\n",
                        cert.entropy,
                        cert.entropy.approx()
                    ));
                }
                Err(e) => {
                    body.push_str(&format!("requested word certificate failed: {e}\n"));
                }
            }
        }
    }
    emit(output, "analyze.report.txt", &body)?;
    if let Some(dot_path) = dot {
        write_plain(dot_path, &format::dot::homgraph_to_dot(&result.graph))?;
    }
    Ok(0)
}

fn cmd_construct(
    map: &Path,
    product_pair: Option<&Path>,
    template: Option<&str>,
    delta: &str,
    output: &OutputArgs,
) -> Result<u8, Failure> {
    let f = load_map(map)?;
    let k = parse_delta(delta)?;
    let pair = match (product_pair, template) {
        (Some(path), None) => {
            let (base, file_k, n, l) = format::product_pair_rects_from_str(&read_file(path)?)
                .map_err(|e| Failure::new(3, format!("{}: {e}", path.display())))?;
            if file_k != k {
                return Err(Failure::new(
                    3,
                    format!("--delta 1/{k} disagrees with the pair file's 1/{file_k}"),
                ));
            }
            let map_base = match f.space() {
                indexsys::dynamics::MapSpace::Line => indexsys::geometry::SquareBase::Line,
                indexsys::dynamics::MapSpace::Circle => indexsys::geometry::SquareBase::Circle,
            };
            if base != map_base {
                return Err(Failure::new(
                    3,
                    "pair file base does not match the map's space".to_string(),
                ));
            }
            construct::discretize(&n, &l, &f, k)
                .map_err(|e| Failure::new(4, refine_message(&e, k)))?
        }
        (None, Some(params)) => {
            let parts: Vec<&str> = params.split(',').collect();
            if parts.len() != 2 {
                return Err(Failure::new(3, "--template expects `w,c`"));
            }
            let w = parse_scalar(parts[0])
                .map_err(|e| Failure::new(3, format!("--template w: {e}")))?;
            let c = parse_scalar(parts[1])
                .map_err(|e| Failure::new(3, format!("--template c: {e}")))?;
            construct::strip_template(&f, &w, &c, k)
                .map_err(|e| Failure::new(4, refine_message(&e, k)))?
        }
        _ => {
            return Err(Failure::new(
                3,
                "exactly one of --product-pair or --template is required",
            ))
        }
    };
    let (family, report) = construct::construct_system(&pair, &f)
        .map_err(|e| Failure::new(4, refine_message(&e, k)))?;

    let system_text = format::system_to_string(&report.system);
    let mut body = String::new();
    body.push_str(&format!(
        "distinct slices: {} ({} with empty core, excluded)\n",
        family.distinct_count(),
        family.empty_core_count()
    ));
    body.push_str(&format!(
        "system: {} pairs, {} edges ({} slab-derived candidates)\n",
        report.system.len(),
        report.declared_edges.len(),
        report.slab_candidate_edges.len()
    ));
    body.push_str("verdict: VERIFIED\n");
    emit(output, "construct.report.txt", &body)?;
    match &output.out {
        Some(dir) => {
            let path = dir.join("constructed.system.json");
            write_plain(&path, &system_text)?;
            println!("system written to {}", path.display());
        }
        None => {
            println!("{system_text}");
        }
    }
    Ok(0)
}

fn cmd_detect_orbit(
    map: &Path,
    system: &Path,
    words: &Path,
    output: &OutputArgs,
) -> Result<u8, Failure> {
    let f = load_map(map)?;
    let system = load_system(system)?;
    let file = format::words_from_str(&read_file(words)?)
        .map_err(|e| Failure::new(3, format!("{}: {e}", words.display())))?;
    if file.period.is_empty() {
        return Err(Failure::new(3, "word file needs a nonempty `period` list"));
    }
    let word = indexsys::cocyclic::EventuallyPeriodicWord {
        preperiod: format::labels(&file.preperiod),
        period: format::labels(&file.period),
    };
    let graph = HomGraph::from_system(&system, &f)
        .map_err(|e| Failure::new(1, format!("homology error: {e}")))?;
    let detection = indexsys::cocyclic::detect_orbit(&graph, &word)
        .map_err(|e| Failure::new(1, format!("word rejected: {e}")))?;

    let mut body = String::new();
    let code = match detection {
        OrbitDetection::Certificate(cert) => {
            body.push_str("CERTIFICATE: orbit follows the word cores\n");
            for (degree, m) in cert.cycle_products.iter().enumerate() {
                body.push_str(&format!("cycle product H{degree}: {m}\n"));
            }
            // Desk-scale oracle cross-check: exact periodic solve.
            let p = word.period.len() as u32;
            let cores: Vec<_> = word
                .period
                .iter()
                .map(|l| system.core(l).cloned())
                .collect::<Result<_, _>>()
                .map_err(|e| Failure::new(1, format!("unknown label: {e}")))?;
            match orbits::orbits_following(&f, &cores, p) {
                Ok((orbits_found, plateau)) => {
                    body.push_str(&format!(
                        "oracle: {} exact periodic orbit(s) inside the word cores{}\n",
                        orbits_found.len(),
                        if plateau {
                            " (plus unit-slope plateaus)"
                        } else {
                            ""
                        }
                    ));
                    for orbit in &orbits_found {
                        let pts: Vec<String> = orbit.points.iter().map(format_scalar).collect();
                        body.push_str(&format!("oracle orbit: {}\n", pts.join(" -> ")));
                    }
                }
                Err(e) => {
                    body.push_str(&format!("oracle unavailable: {e}\n"));
                }
            }
            0
        }
        OrbitDetection::NoCertificate { reason } => {
            body.push_str(&format!(
                "NO-CERTIFICATE: {reason} (not a disproof of the orbit)\n"
            ));
            2
        }
    };
    emit(output, "detect-orbit.report.txt", &body)?;
    Ok(code)
}

fn cmd_export(map: &Path, system: &Path, dot: &Path) -> Result<u8, Failure> {
    let f = load_map(map)?;
    let system = load_system(system)?;
    let graph = HomGraph::from_system(&system, &f)
        .map_err(|e| Failure::new(1, format!("homology error: {e}")))?;
    write_plain(dot, &format::dot::homgraph_to_dot(&graph))?;
    println!("DOT graph written to {}", dot.display());
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match &cli.command {
        Command::Verify {
            map,
            system,
            output,
        } => cmd_verify(map, system, output),
        Command::Analyze {
            map,
            system,
            max_len,
            words,
            dot,
            output,
        } => cmd_analyze(
            map,
            system,
            *max_len,
            words.as_deref(),
            dot.as_deref(),
            output,
        ),
        Command::Construct {
            map,
            product_pair,
            template,
            delta,
            output,
        } => cmd_construct(
            map,
            product_pair.as_deref(),
            template.as_deref(),
            delta,
            output,
        ),
        Command::DetectOrbit {
            map,
            system,
            words,
            output,
        } => cmd_detect_orbit(map, system, words, output),
        Command::Export { map, system, dot } => cmd_export(map, system, dot),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e)
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) =>
        {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(3);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
