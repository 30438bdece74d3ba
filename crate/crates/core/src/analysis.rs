//! Analysis orchestration: homology graph, cycle admissibility, bounded
//! emptiness, disjoint subgraph, entropy search, and report rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::cocyclic::{
    disjoint_subgraph, distinguishable, empty_up_to, enumerate_cycles, periodic_allowed,
    shift_factor, vertex_shift_entropy, word_allowed, CocyclicError, EntropyBound,
    FactorCertificate, FactorKind, HomGraph,
};
use crate::dynamics::PLMap;
use crate::geometry::Label;
use crate::index::{IndexSystem, VerificationReport, Verdict};
use crate::scalar::format_scalar;

#[derive(Clone, Debug)]
pub struct AnalysisOptions {
    /// Bound for cycle enumeration and word-emptiness (symbols per word).
    pub max_len: usize,
    /// Largest power searched for full-shift word certificates.
    pub factor_power_max: u32,
    /// Cap on enumerated cycles.
    pub cycle_cap: usize,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            max_len: 12,
            factor_power_max: 3,
            cycle_cap: 4096,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Analysis {
    pub graph: HomGraph,
    pub cycles: Vec<(Vec<Label>, bool)>,
    pub empty_at_bound: bool,
    pub emptiness_bound: usize,
    pub surviving_word: Option<Vec<Label>>,
    pub disjoint_vertices: Vec<Label>,
    pub disjoint_edges: Vec<(Label, Label)>,
    pub best_entropy: EntropyBound,
    pub best_certificate: Option<FactorCertificate>,
}

/// Run the full cocyclic analysis over a (verified) system.
pub fn analyze(
    system: &IndexSystem,
    f: &PLMap,
    options: &AnalysisOptions,
) -> Result<Analysis, CocyclicError> {
    let graph = HomGraph::from_system(system, f)?;

    let mut cycles = Vec::new();
    for cycle in enumerate_cycles(&graph, options.max_len, options.cycle_cap) {
        let ok = periodic_allowed(&graph, &cycle)?;
        cycles.push((cycle, ok));
    }

    let (empty_at_bound, surviving_word) = empty_up_to(&graph, options.max_len.max(2))?;
    let (disjoint_vertices, disjoint_edges) = disjoint_subgraph(&graph)?;

    let mut best_entropy = EntropyBound::zero();
    let mut best_certificate: Option<FactorCertificate> = None;

    // Vertex-shift bound over the disjoint subgraph.
    if !disjoint_vertices.is_empty() {
        let singletons: Vec<Vec<Label>> =
            disjoint_vertices.iter().map(|v| vec![v.clone()]).collect();
        if let Ok(cert) = shift_factor(&graph, 1, &singletons) {
            if cert.entropy > best_entropy {
                best_entropy = cert.entropy.clone();
                best_certificate = Some(cert);
            }
        } else {
            // Still usable as a bare bound when every vertex keeps an
            // out-edge (entropy of the vertex shift itself).
            let bound = vertex_shift_entropy(&graph, &disjoint_vertices, 8)?;
            if bound > best_entropy {
                best_entropy = bound;
            }
        }
    }

    // Word-mode search: greedy compatible sets over each power.
    for n in 1..=options.factor_power_max {
        if let Some(cert) = search_word_factor(&graph, n)? {
            if cert.entropy > best_entropy {
                best_entropy = cert.entropy.clone();
                best_certificate = Some(cert);
            }
        }
    }

    Ok(Analysis {
        graph,
        cycles,
        empty_at_bound,
        emptiness_bound: options.max_len.max(2),
        surviving_word,
        disjoint_vertices,
        disjoint_edges,
        best_entropy,
        best_certificate,
    })
}

fn allowable_words(graph: &HomGraph, n: u32, cap: usize) -> Vec<Vec<Label>> {
    let mut words: Vec<Vec<Label>> = graph.labels().map(|l| vec![l.clone()]).collect();
    for _ in 1..n {
        let mut next = Vec::new();
        for w in &words {
            for succ in graph.successors(w.last().unwrap()) {
                let mut nw = w.clone();
                nw.push(succ.clone());
                next.push(nw);
                if next.len() >= cap {
                    break;
                }
            }
            if next.len() >= cap {
                break;
            }
        }
        words = next;
    }
    words
}

/// Greedy search for a large set of pairwise-distinguishable,
/// concatenation-closed words of length `n`; each seed word starts one
/// greedy pass and the best certified set wins.
fn search_word_factor(
    graph: &HomGraph,
    n: u32,
) -> Result<Option<FactorCertificate>, CocyclicError> {
    let words = allowable_words(graph, n, 4096);
    let mut best: Option<FactorCertificate> = None;
    // Seeds are capped; the scan within each greedy pass still ranges over
    // every word.
    for seed in words.iter().take(256) {
        if !word_allowed(graph, seed)? {
            continue;
        }
        let mut set: Vec<Vec<Label>> = vec![seed.clone()];
        for cand in &words {
            if set.iter().any(|w| w == cand) {
                continue;
            }
            let mut ok = word_allowed(graph, cand)?;
            for member in &set {
                if !ok {
                    break;
                }
                ok &= distinguishable(graph, member, cand)?;
                if !ok {
                    break;
                }
                for (u, v) in [(member, cand), (cand, member)] {
                    let mut joined = u.clone();
                    joined.extend(v.iter().cloned());
                    ok &= word_allowed(graph, &joined)?;
                }
            }
            if ok {
                let mut self_joined = cand.clone();
                self_joined.extend(cand.iter().cloned());
                ok &= word_allowed(graph, &self_joined)?;
            }
            if ok {
                set.push(cand.clone());
            }
        }
        if set.len() < 2 {
            continue;
        }
        if let Ok(cert) = shift_factor(graph, n, &set) {
            let better = match &best {
                None => true,
                Some(b) => cert.entropy > b.entropy,
            };
            if better {
                best = Some(cert);
            }
        }
    }
    Ok(best)
}

// ---------------------------------------------------------------------------
// Report rendering.

fn witness_text(witness: &Option<crate::geometry::RegionSet>) -> String {
    match witness {
        None => String::new(),
        Some(set) => {
            let cells: Vec<String> = set
                .cells()
                .iter()
                .map(|(a, b)| format!("[{}, {}]", format_scalar(a), format_scalar(b)))
                .collect();
            format!(" witness {}", cells.join(" ∪ "))
        }
    }
}

pub fn render_verification(report: &VerificationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "verdict: {}", report.verdict);
    for issue in &report.structural_issues {
        let _ = writeln!(out, "structural: {issue}");
    }
    if !report.degenerate_pairs.is_empty() {
        let labels: Vec<String> = report
            .degenerate_pairs
            .iter()
            .map(|l| l.0.clone())
            .collect();
        let _ = writeln!(out, "degenerate (empty-core) pairs: {}", labels.join(", "));
    }
    for edge in &report.edge_reports {
        let (a, b) = &edge.edge;
        let pa = if edge.precedes.condition_a.pass {
            "pass".to_string()
        } else {
            format!("FAIL{}", witness_text(&edge.precedes.condition_a.witness))
        };
        let pb = if edge.precedes.condition_b.pass {
            "pass".to_string()
        } else {
            format!("FAIL{}", witness_text(&edge.precedes.condition_b.witness))
        };
        let chain = match &edge.chain {
            None => "skipped".to_string(),
            Some(c) if c.pass => "pass".to_string(),
            Some(c) => format!("FAIL{}", witness_text(&c.witness)),
        };
        let _ = writeln!(
            out,
            "edge ({a} -> {b}): exit-set condition {pa}; image-of-L condition {pb}; chain criterion {chain}"
        );
    }
    out
}

/// Structured rendering of a verification report, witness sets included.
pub fn verification_to_json(report: &VerificationReport) -> String {
    use serde_json::{json, Value};
    let witness_json = |w: &Option<crate::geometry::RegionSet>| -> Value {
        match w {
            None => Value::Null,
            Some(set) => Value::Array(
                set.cells()
                    .iter()
                    .map(|(a, b)| json!([format_scalar(a), format_scalar(b)]))
                    .collect(),
            ),
        }
    };
    let edges: Vec<Value> = report
        .edge_reports
        .iter()
        .map(|e| {
            json!({
                "edge": [e.edge.0 .0, e.edge.1 .0],
                "exit_set_condition": {
                    "pass": e.precedes.condition_a.pass,
                    "witness": witness_json(&e.precedes.condition_a.witness),
                },
                "image_of_l_condition": {
                    "pass": e.precedes.condition_b.pass,
                    "witness": witness_json(&e.precedes.condition_b.witness),
                },
                "chain_criterion": e.chain.as_ref().map(|c| json!({
                    "pass": c.pass,
                    "witness": witness_json(&c.witness),
                })),
            })
        })
        .collect();
    let value = json!({
        "verdict": report.verdict.to_string(),
        "structural_issues": report.structural_issues,
        "degenerate_pairs": report.degenerate_pairs.iter().map(|l| l.0.clone()).collect::<Vec<_>>(),
        "edges": edges,
    });
    serde_json::to_string_pretty(&value).expect("static schema")
}

pub fn verification_verdict_exit(report: &VerificationReport) -> i32 {
    match report.verdict {
        Verdict::Verified => 0,
        Verdict::Failed => 1,
        Verdict::Undecided => 2,
    }
}

pub fn render_analysis(analysis: &Analysis) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "vertices: {}", analysis.graph.vertex_count());
    for label in analysis.graph.labels() {
        let dims = &analysis.graph.vertex(label).expect("listed").dims;
        let dims: Vec<String> = dims
            .iter()
            .enumerate()
            .map(|(k, d)| format!("H{k}={d}"))
            .collect();
        let _ = writeln!(out, "vertex {label}: {}", dims.join(" "));
    }
    for ((a, b), map) in analysis.graph.edges() {
        let _ = writeln!(out, "edge ({a} -> {b}): H1 matrix {}", map.degree(1));
    }
    let admissible = analysis.cycles.iter().filter(|(_, ok)| *ok).count();
    let _ = writeln!(
        out,
        "cycles up to bound: {} admissible of {} enumerated",
        admissible,
        analysis.cycles.len()
    );
    const CYCLE_PRINT_CAP: usize = 100;
    for (cycle, ok) in analysis.cycles.iter().take(CYCLE_PRINT_CAP) {
        let labels: Vec<String> = cycle.iter().map(|l| l.0.clone()).collect();
        let _ = writeln!(
            out,
            "cycle ({}): {}",
            labels.join(","),
            if *ok { "admissible" } else { "nilpotent" }
        );
    }
    if analysis.cycles.len() > CYCLE_PRINT_CAP {
        let _ = writeln!(
            out,
            "... and {} more cycles",
            analysis.cycles.len() - CYCLE_PRINT_CAP
        );
    }
    if analysis.empty_at_bound {
        let _ = writeln!(
            out,
            "cocyclic subshift empty (bound {})",
            analysis.emptiness_bound
        );
    } else if let Some(word) = &analysis.surviving_word {
        let labels: Vec<String> = word.iter().map(|l| l.0.clone()).collect();
        let _ = writeln!(
            out,
            "cocyclic subshift nonempty at bound {}: surviving word ({})",
            analysis.emptiness_bound,
            labels.join(",")
        );
    }
    let dv: Vec<String> = analysis
        .disjoint_vertices
        .iter()
        .map(|l| l.0.clone())
        .collect();
    let _ = writeln!(
        out,
        "disjoint subgraph: {} vertices ({}) with {} edges",
        analysis.disjoint_vertices.len(),
        dv.join(","),
        analysis.disjoint_edges.len()
    );
    let _ = writeln!(
        out,
        "entropy lower bound: {} (~{:.4})",
        analysis.best_entropy,
        analysis.best_entropy.approx()
    );
    match &analysis.best_certificate {
        None => {
            let _ = writeln!(out, "entropy certificate: none");
        }
        Some(cert) => match &cert.kind {
            FactorKind::FullShiftPower { words } => {
                let ws: Vec<String> = words
                    .iter()
                    .map(|w| {
                        let ls: Vec<String> = w.iter().map(|l| l.0.clone()).collect();
                        format!("({})", ls.join(","))
                    })
                    .collect();
                let _ = writeln!(
                    out,
                    "entropy certificate: full shift on {} words of length {}: {}",
                    words.len(),
                    cert.power,
                    ws.join(" ")
                );
            }
            FactorKind::VertexShift { vertices } => {
                let vs: Vec<String> = vertices.iter().map(|l| l.0.clone()).collect();
                let _ = writeln!(
                    out,
                    "entropy certificate: vertex shift on disjoint cores ({})",
                    vs.join(",")
                );
            }
        },
    }
    out
}

/// Per-label region listing used by reports.
pub fn render_regions(map: &BTreeMap<Label, crate::geometry::RegionSet>) -> String {
    let mut out = String::new();
    for (label, set) in map {
        let cells: Vec<String> = set
            .cells()
            .iter()
            .map(|(a, b)| format!("[{}, {}]", format_scalar(a), format_scalar(b)))
            .collect();
        let _ = writeln!(out, "{label}: {}", cells.join(" ∪ "));
    }
    out
}
