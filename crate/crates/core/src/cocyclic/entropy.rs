//! Entropy lower bounds from certified subshift factors.
//!
//! Bounds are carried symbolically as `log(count)/period` and compared by
//! exact integer cross-powers, so no logarithm is ever evaluated in the
//! certification path.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::cocyclic::{distinguishable, word_allowed, CocyclicError, HomGraph};
use crate::geometry::Label;

/// The bound `log(count) / period` on topological entropy.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EntropyBound {
    count: BigUint,
    period: u32,
}

impl EntropyBound {
    pub fn new(count: u64, period: u32) -> Self {
        assert!(count >= 1 && period >= 1);
        EntropyBound {
            count: BigUint::from(count),
            period,
        }
    }

    pub fn from_big(count: BigUint, period: u32) -> Self {
        assert!(!count.is_zero() && period >= 1);
        EntropyBound { count, period }
    }

    pub fn zero() -> Self {
        EntropyBound::new(1, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.count.is_one()
    }

    pub fn count(&self) -> &BigUint {
        &self.count
    }

    pub fn period(&self) -> u32 {
        self.period
    }

    /// Approximate value, display only.
    pub fn approx(&self) -> f64 {
        let digits = self.count.to_string();
        let head: f64 = digits[..digits.len().min(15)].parse().unwrap_or(1.0);
        let extra = digits.len().saturating_sub(15) as f64;
        (head.ln() + extra * std::f64::consts::LN_10) / self.period as f64
    }
}

impl PartialOrd for EntropyBound {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for EntropyBound {
    /// `log(c1)/n1 ≤ log(c2)/n2  ⇔  c1^n2 ≤ c2^n1`, exactly.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let lhs = self.count.pow(other.period);
        let rhs = other.count.pow(self.period);
        lhs.cmp(&rhs)
    }
}

impl std::fmt::Display for EntropyBound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.period == 1 {
            write!(f, "log({})", self.count)
        } else {
            write!(f, "log({})/{}", self.count, self.period)
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum FactorError {
    #[error("candidate word list is empty")]
    NoWords,
    #[error("word {0:?} does not have the required length")]
    WrongLength(Vec<String>),
    #[error("words {0:?} and {1:?} are not distinguishable (no slot with disjoint cores)")]
    NotDistinguishable(Vec<String>, Vec<String>),
    #[error("concatenation of {0:?} and {1:?} is not allowed (missing edge or zero product)")]
    BadConcatenation(Vec<String>, Vec<String>),
    #[error("vertex `{0}` has no outgoing edge inside the candidate set")]
    NoOutEdge(Label),
    #[error("no degree is scalar (dimension 1 with nonzero entries) across the candidate vertices")]
    NoScalarDegree,
    #[error(transparent)]
    Cocyclic(#[from] CocyclicError),
}

#[derive(Clone, Debug)]
pub enum FactorKind {
    /// `f^n` on the union of the word cores factors onto the full shift
    /// over the candidate words.
    FullShiftPower { words: Vec<Vec<Label>> },
    /// Pairwise-disjoint cores realize the vertex shift of the precedes
    /// graph restricted to the listed vertices.
    VertexShift { vertices: Vec<Label> },
}

/// A certified semiconjugacy onto a subshift, carrying the entropy bound.
#[derive(Clone, Debug)]
pub struct FactorCertificate {
    pub kind: FactorKind,
    pub power: u32,
    pub entropy: EntropyBound,
    /// Degree in which all participating vertex spaces are 1-dimensional
    /// with nonzero edge entries; guarantees every finite product along the
    /// factor is nonzero, not just the pairwise-checked ones.
    pub scalar_degree: Option<usize>,
}

fn word_strings(w: &[Label]) -> Vec<String> {
    w.iter().map(|l| l.0.clone()).collect()
}

/// Degree in which every listed vertex is 1-dimensional and every edge
/// among them has a nonzero entry.
fn scalar_degree(graph: &HomGraph, vertices: &[Label]) -> Result<Option<usize>, CocyclicError> {
    let lookup: std::collections::BTreeSet<&Label> = vertices.iter().collect();
    'deg: for k in 0..graph.degree_count() {
        for v in vertices {
            if graph.vertex(v)?.dim(k) != 1 {
                continue 'deg;
            }
        }
        for ((a, b), m) in graph.edges() {
            if lookup.contains(a) && lookup.contains(b) {
                if num_traits::Zero::is_zero(m.degree(k).get(0, 0)) {
                    continue 'deg;
                }
            }
        }
        return Ok(Some(k));
    }
    Ok(None)
}

/// Certify a factor of `f^n` onto the full shift over the candidate words:
/// pairwise distinguishable words whose pairwise concatenations are all
/// allowed. For single-vertex words this degenerates gracefully into the
/// vertex-shift certificate over the listed vertices, whose entropy bound
/// comes from exact powers of the adjacency matrix.
pub fn shift_factor(
    graph: &HomGraph,
    n: u32,
    words: &[Vec<Label>],
) -> Result<FactorCertificate, FactorError> {
    if words.is_empty() {
        return Err(FactorError::NoWords);
    }
    for w in words {
        if w.len() != n as usize {
            return Err(FactorError::WrongLength(word_strings(w)));
        }
        if !word_allowed(graph, w)? {
            return Err(FactorError::BadConcatenation(
                word_strings(w),
                word_strings(w),
            ));
        }
    }
    for (i, u) in words.iter().enumerate() {
        for v in words.iter().skip(i + 1) {
            if !distinguishable(graph, u, v)? {
                return Err(FactorError::NotDistinguishable(
                    word_strings(u),
                    word_strings(v),
                ));
            }
        }
    }

    // Full-shift requirement: every ordered concatenation stays admissible.
    let mut concat_ok = true;
    let mut first_failure: Option<(Vec<String>, Vec<String>)> = None;
    'outer: for u in words {
        for v in words {
            let mut joined = u.clone();
            joined.extend(v.iter().cloned());
            if !word_allowed(graph, &joined)? {
                concat_ok = false;
                first_failure = Some((word_strings(u), word_strings(v)));
                break 'outer;
            }
        }
    }

    let support: Vec<Label> = {
        let mut s: Vec<Label> = words.iter().flatten().cloned().collect();
        s.sort();
        s.dedup();
        s
    };

    if concat_ok {
        let entropy = if words.len() == 1 {
            EntropyBound::zero()
        } else {
            EntropyBound::new(words.len() as u64, n)
        };
        return Ok(FactorCertificate {
            kind: FactorKind::FullShiftPower {
                words: words.to_vec(),
            },
            power: n,
            entropy,
            scalar_degree: scalar_degree(graph, &support)?,
        });
    }

    // Vertex-shift fallback for length-1 candidates: the words are single
    // pairwise-disjoint vertices and the itinerary map realizes the edge
    // shift of the induced subgraph.
    if n == 1 {
        let vertices: Vec<Label> = words.iter().map(|w| w[0].clone()).collect();
        for v in &vertices {
            if !graph
                .successors(v)
                .any(|s| vertices.contains(s))
            {
                return Err(FactorError::NoOutEdge(v.clone()));
            }
        }
        let Some(k) = scalar_degree(graph, &vertices)? else {
            return Err(FactorError::NoScalarDegree);
        };
        let entropy = vertex_shift_entropy(graph, &vertices, 8)?;
        return Ok(FactorCertificate {
            kind: FactorKind::VertexShift { vertices },
            power: 1,
            entropy,
            scalar_degree: Some(k),
        });
    }

    let (u, v) = first_failure.expect("failure recorded");
    Err(FactorError::BadConcatenation(u, v))
}

/// Entropy bound for the vertex shift on an induced subgraph: the best
/// `log(min_i (A^m 1)_i) / m` over `m ≤ max_power`, computed with exact
/// integer arithmetic. Path counts certify `h ≥ log(c)/m` because `A^m 1 ≥
/// c·1` forces at least `c^j` admissible paths of length `jm` from any
/// start.
pub fn vertex_shift_entropy(
    graph: &HomGraph,
    vertices: &[Label],
    max_power: u32,
) -> Result<EntropyBound, CocyclicError> {
    let n = vertices.len();
    if n == 0 {
        return Ok(EntropyBound::zero());
    }
    let mut counts: Vec<BigUint> = vec![BigUint::one(); n];
    let mut best = EntropyBound::zero();
    for m in 1..=max_power {
        let mut next = vec![BigUint::zero(); n];
        for (i, v) in vertices.iter().enumerate() {
            for (j, w) in vertices.iter().enumerate() {
                if graph.edge(v, w).is_some() {
                    next[i] += &counts[j];
                }
            }
        }
        counts = next;
        let min = counts.iter().min().cloned().unwrap_or_else(BigUint::zero);
        if min.is_zero() {
            return Ok(best);
        }
        let bound = EntropyBound::from_big(min, m);
        if bound > best {
            best = bound;
        }
    }
    Ok(best)
}
