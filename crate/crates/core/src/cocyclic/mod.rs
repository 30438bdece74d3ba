//! The cocyclic subshift generated by an index system: a directed graph
//! whose vertices carry graded vector spaces and whose edges carry the
//! induced homology matrices. A word belongs to the subshift when every
//! finite composition of edge matrices along it is nonzero in some degree.

mod entropy;

pub use entropy::{
    shift_factor, vertex_shift_entropy, EntropyBound, FactorCertificate, FactorError, FactorKind,
};

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use crate::dynamics::PLMap;
use crate::geometry::{GeometryError, Label, RegionSet};
use crate::homology::{pair_homology, GradedSpace, HomologyError, InducedMap, Matrix};
use crate::index::{IndexError, IndexSystem};

#[derive(Debug, Error)]
pub enum CocyclicError {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(Label),
    #[error("({from}, {to}) is not an edge of the graph")]
    NotAnEdge { from: Label, to: Label },
    #[error("word must be nonempty")]
    EmptyWord,
    #[error("cycle must close: ({from}, {to}) is not an edge")]
    CycleDoesNotClose { from: Label, to: Label },
    #[error("words must have equal length")]
    LengthMismatch,
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Vertex data, edge matrices and core sets of the generated subshift.
#[derive(Clone, Debug)]
pub struct HomGraph {
    vertices: BTreeMap<Label, GradedSpace>,
    edges: BTreeMap<(Label, Label), InducedMap>,
    core_sets: BTreeMap<Label, RegionSet>,
}

impl HomGraph {
    /// Compute homology and induced maps over every declared edge of a
    /// system. The caller is expected to have verified the system.
    pub fn from_system(system: &IndexSystem, f: &PLMap) -> Result<HomGraph, CocyclicError> {
        let mut vertices = BTreeMap::new();
        let mut core_sets = BTreeMap::new();
        for pair in system.pairs() {
            let (graded, _) = pair_homology(pair)?;
            vertices.insert(pair.label.clone(), graded);
            core_sets.insert(pair.label.clone(), pair.core());
        }
        let mut edges = BTreeMap::new();
        for (a, b) in system.edges() {
            let map = crate::homology::induced_map(system.pair(a)?, system.pair(b)?, f)?;
            edges.insert((a.clone(), b.clone()), map);
        }
        Ok(HomGraph {
            vertices,
            edges,
            core_sets,
        })
    }

    pub fn labels(&self) -> impl Iterator<Item = &Label> {
        self.vertices.keys()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex(&self, l: &Label) -> Result<&GradedSpace, CocyclicError> {
        self.vertices
            .get(l)
            .ok_or_else(|| CocyclicError::UnknownVertex(l.clone()))
    }

    pub fn core(&self, l: &Label) -> Result<&RegionSet, CocyclicError> {
        self.core_sets
            .get(l)
            .ok_or_else(|| CocyclicError::UnknownVertex(l.clone()))
    }

    pub fn edge(&self, from: &Label, to: &Label) -> Option<&InducedMap> {
        self.edges.get(&(from.clone(), to.clone()))
    }

    pub fn edges(&self) -> impl Iterator<Item = (&(Label, Label), &InducedMap)> {
        self.edges.iter()
    }

    pub fn successors<'a>(&'a self, l: &'a Label) -> impl Iterator<Item = &'a Label> {
        self.edges
            .keys()
            .filter(move |(a, _)| a == l)
            .map(|(_, b)| b)
    }

    /// Degrees carried by the graph (uniform across vertices by shape).
    pub fn degree_count(&self) -> usize {
        self.vertices
            .values()
            .map(|g| g.dims.len())
            .max()
            .unwrap_or(0)
    }

    fn require_edge(&self, from: &Label, to: &Label) -> Result<&InducedMap, CocyclicError> {
        self.edge(from, to).ok_or_else(|| CocyclicError::NotAnEdge {
            from: from.clone(),
            to: to.clone(),
        })
    }
}

/// An eventually periodic symbol sequence: `preperiod · period^∞`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EventuallyPeriodicWord {
    pub preperiod: Vec<Label>,
    pub period: Vec<Label>,
}

/// Exact product of the edge matrices along a finite allowable word, in one
/// degree. A length-1 word yields the identity on the vertex space.
pub fn word_product(
    graph: &HomGraph,
    word: &[Label],
    degree: usize,
) -> Result<Matrix, CocyclicError> {
    Ok(graded_word_product(graph, word)?
        .into_iter()
        .nth(degree)
        .unwrap_or_else(|| Matrix::zero(0, 0)))
}

/// Products in every degree at once.
pub fn graded_word_product(
    graph: &HomGraph,
    word: &[Label],
) -> Result<Vec<Matrix>, CocyclicError> {
    let first = word.first().ok_or(CocyclicError::EmptyWord)?;
    let degrees = graph.degree_count();
    let start = graph.vertex(first)?;
    let mut acc: Vec<Matrix> = (0..degrees).map(|k| Matrix::identity(start.dim(k))).collect();
    for w in word.windows(2) {
        let edge = graph.require_edge(&w[0], &w[1])?;
        for (k, m) in acc.iter_mut().enumerate() {
            *m = edge.degree(k).mul(m);
        }
    }
    Ok(acc)
}

/// A word is allowed when it is an edge path and its full product is
/// nonzero in at least one degree. Subword closure holds: a zero subproduct
/// forces a zero full product degree by degree.
pub fn word_allowed(graph: &HomGraph, word: &[Label]) -> Result<bool, CocyclicError> {
    if word.is_empty() {
        return Err(CocyclicError::EmptyWord);
    }
    for w in word.windows(2) {
        if graph.edge(&w[0], &w[1]).is_none() {
            return Ok(false);
        }
    }
    let products = graded_word_product(graph, word)?;
    Ok(products.iter().any(|m| !m.is_zero()))
}

/// For a word whose product vanishes, the shortest contiguous subword whose
/// product is zero in every degree. Diagnostic companion to
/// [`word_allowed`].
pub fn failing_span(graph: &HomGraph, word: &[Label]) -> Result<Option<(usize, usize)>, CocyclicError> {
    for width in 2..=word.len() {
        for start in 0..=(word.len() - width) {
            let sub = &word[start..start + width];
            if sub.windows(2).any(|w| graph.edge(&w[0], &w[1]).is_none()) {
                continue;
            }
            let products = graded_word_product(graph, sub)?;
            if products.iter().all(|m| m.is_zero()) {
                return Ok(Some((start, start + width)));
            }
        }
    }
    Ok(None)
}

/// A cycle is a periodic word of the subshift iff its product matrix is
/// non-nilpotent in some degree; `M^d = 0` with `d = dim` decides
/// nilpotency exactly.
pub fn periodic_allowed(graph: &HomGraph, cycle: &[Label]) -> Result<bool, CocyclicError> {
    let first = cycle.first().ok_or(CocyclicError::EmptyWord)?;
    let last = cycle.last().unwrap();
    if graph.edge(last, first).is_none() {
        return Err(CocyclicError::CycleDoesNotClose {
            from: last.clone(),
            to: first.clone(),
        });
    }
    // Product around the closed loop, back at the starting vertex.
    let mut loop_word: Vec<Label> = cycle.to_vec();
    loop_word.push(first.clone());
    let products = graded_word_product(graph, &loop_word)?;
    let space = graph.vertex(first)?;
    for (k, m) in products.iter().enumerate() {
        let d = space.dim(k);
        if d == 0 {
            continue;
        }
        if !m.pow(d as u32).is_zero() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Breadth-first emptiness check: true iff no allowable word of `length`
/// symbols has a nonzero product. States are deduplicated by exact matrix
/// equality up to a nonzero rational scalar (applied jointly across
/// degrees, so zero/nonzero futures are preserved).
pub fn empty_up_to(
    graph: &HomGraph,
    length: usize,
) -> Result<(bool, Option<Vec<Label>>), CocyclicError> {
    assert!(length >= 2, "length bound must be at least 2");
    #[derive(Clone)]
    struct State {
        vertex: Label,
        products: Vec<Matrix>,
        word: Vec<Label>,
    }
    fn canonical_key(vertex: &Label, products: &[Matrix]) -> String {
        // Joint scalar canonicalization: scale all degrees by the first
        // nonzero entry found.
        let pivot = products
            .iter()
            .flat_map(|m| m.entries().iter())
            .find(|v| !num_traits::Zero::is_zero(*v))
            .cloned();
        let mut key = format!("{vertex}|");
        for m in products {
            key.push('[');
            for v in m.entries() {
                let scaled = match &pivot {
                    Some(p) => v / p,
                    None => v.clone(),
                };
                key.push_str(&crate::scalar::format_scalar(&scaled));
                key.push(',');
            }
            key.push(']');
        }
        key
    }

    let degrees = graph.degree_count();
    let mut layer: Vec<State> = Vec::new();
    let mut seen: BTreeSet<String> = BTreeSet::new();
    for l in graph.labels() {
        let space = graph.vertex(l)?;
        let products: Vec<Matrix> = (0..degrees).map(|k| Matrix::identity(space.dim(k))).collect();
        if products.iter().all(|m| m.is_zero()) {
            continue;
        }
        let state = State {
            vertex: l.clone(),
            products,
            word: vec![l.clone()],
        };
        if seen.insert(canonical_key(&state.vertex, &state.products)) {
            layer.push(state);
        }
    }
    for _ in 1..length {
        let mut next: Vec<State> = Vec::new();
        let mut next_seen: BTreeSet<String> = BTreeSet::new();
        for state in &layer {
            for succ in graph.successors(&state.vertex) {
                let edge = graph.require_edge(&state.vertex, succ)?;
                let products: Vec<Matrix> = state
                    .products
                    .iter()
                    .enumerate()
                    .map(|(k, m)| edge.degree(k).mul(m))
                    .collect();
                if products.iter().all(|m| m.is_zero()) {
                    continue;
                }
                let mut word = state.word.clone();
                word.push(succ.clone());
                let key = canonical_key(succ, &products);
                if next_seen.insert(key) {
                    next.push(State {
                        vertex: succ.clone(),
                        products,
                        word,
                    });
                }
            }
        }
        layer = next;
        if layer.is_empty() {
            return Ok((true, None));
        }
    }
    let witness = layer.into_iter().next().map(|s| s.word);
    Ok((witness.is_none(), witness))
}

/// Two equal-length words are distinguishable when some slot pins them to
/// disjoint cores.
pub fn distinguishable(
    graph: &HomGraph,
    w1: &[Label],
    w2: &[Label],
) -> Result<bool, CocyclicError> {
    if w1.len() != w2.len() {
        return Err(CocyclicError::LengthMismatch);
    }
    for (a, b) in w1.iter().zip(w2.iter()) {
        if graph.core(a)?.disjoint(graph.core(b)?)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Maximal subset of vertices with pairwise-disjoint core sets, with the
/// induced edges. Exhaustive for up to 16 vertices, greedy beyond; ties go
/// to the lexicographically first subset.
pub fn disjoint_subgraph(
    graph: &HomGraph,
) -> Result<(Vec<Label>, Vec<(Label, Label)>), CocyclicError> {
    let labels: Vec<Label> = graph.labels().cloned().collect();
    let n = labels.len();
    let mut compatible = vec![vec![false; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = graph.core(&labels[i])?.disjoint(graph.core(&labels[j])?)?;
            compatible[i][j] = d;
            compatible[j][i] = d;
        }
    }
    let chosen: Vec<usize> = if n <= 16 {
        let mut best: Vec<usize> = Vec::new();
        for mask in 0u32..(1u32 << n) {
            let members: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            if members.len() <= best.len() {
                continue;
            }
            let ok = members
                .iter()
                .enumerate()
                .all(|(ai, &a)| members[ai + 1..].iter().all(|&b| compatible[a][b]));
            if ok {
                best = members;
            }
        }
        best
    } else {
        let mut best: Vec<usize> = Vec::new();
        for start in 0..n {
            let mut cur = vec![start];
            for cand in 0..n {
                if cand != start && cur.iter().all(|&a| compatible[a][cand]) {
                    cur.push(cand);
                }
            }
            if cur.len() > best.len() {
                cur.sort_unstable();
                best = cur;
            }
        }
        best
    };
    let vertex_set: Vec<Label> = chosen.iter().map(|&i| labels[i].clone()).collect();
    let vertex_lookup: BTreeSet<&Label> = vertex_set.iter().collect();
    let edges = graph
        .edges
        .keys()
        .filter(|(a, b)| vertex_lookup.contains(a) && vertex_lookup.contains(b))
        .cloned()
        .collect();
    Ok((vertex_set, edges))
}

/// Elementary cycles up to a length bound, canonically rooted at their
/// smallest vertex; enumeration stops at `cap` cycles.
pub fn enumerate_cycles(graph: &HomGraph, max_len: usize, cap: usize) -> Vec<Vec<Label>> {
    let labels: Vec<Label> = graph.labels().cloned().collect();
    let mut out: Vec<Vec<Label>> = Vec::new();
    for start in &labels {
        if out.len() >= cap {
            break;
        }
        let mut stack: VecDeque<Vec<Label>> = VecDeque::new();
        stack.push_back(vec![start.clone()]);
        while let Some(path) = stack.pop_back() {
            if out.len() >= cap {
                break;
            }
            let last = path.last().unwrap();
            for succ in graph.successors(last) {
                if succ == start {
                    out.push(path.clone());
                    if out.len() >= cap {
                        break;
                    }
                    continue;
                }
                // Only visit vertices above the root so each cycle is
                // enumerated once, rooted at its minimum.
                if succ > start && !path.contains(succ) && path.len() < max_len {
                    let mut next = path.clone();
                    next.push(succ.clone());
                    stack.push_back(next);
                }
            }
        }
    }
    out
}

/// Existence certificate for an orbit following an eventually periodic
/// word: the cycle must be non-nilpotent and the preperiod-plus-one-cycle
/// prefix must have a nonzero product. A zero product is inconclusive for
/// orbit existence, so it produces NO-CERTIFICATE rather than a disproof.
#[derive(Clone, Debug)]
pub enum OrbitDetection {
    Certificate(OrbitCertificate),
    NoCertificate { reason: String },
}

#[derive(Clone, Debug)]
pub struct OrbitCertificate {
    pub word: EventuallyPeriodicWord,
    /// Product matrices around one period, per degree.
    pub cycle_products: Vec<Matrix>,
    /// Product along preperiod plus one full period, per degree.
    pub prefix_products: Vec<Matrix>,
}

pub fn detect_orbit(
    graph: &HomGraph,
    word: &EventuallyPeriodicWord,
) -> Result<OrbitDetection, CocyclicError> {
    if word.period.is_empty() {
        return Err(CocyclicError::EmptyWord);
    }
    // Allowability of the full symbol sequence is a hard precondition.
    let mut prefix: Vec<Label> = word.preperiod.clone();
    prefix.extend(word.period.iter().cloned());
    prefix.push(word.period[0].clone());
    for w in prefix.windows(2) {
        graph.require_edge(&w[0], &w[1])?;
    }

    if !periodic_allowed(graph, &word.period)? {
        return Ok(OrbitDetection::NoCertificate {
            reason: "cycle product is nilpotent in every degree".to_string(),
        });
    }
    if !word_allowed(graph, &prefix)? {
        return Ok(OrbitDetection::NoCertificate {
            reason: "prefix product vanishes in every degree".to_string(),
        });
    }
    let mut loop_word = word.period.clone();
    loop_word.push(word.period[0].clone());
    Ok(OrbitDetection::Certificate(OrbitCertificate {
        word: word.clone(),
        cycle_products: graded_word_product(graph, &loop_word)?,
        prefix_products: graded_word_product(graph, &prefix)?,
    }))
}
