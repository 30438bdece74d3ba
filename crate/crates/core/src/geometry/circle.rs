//! Arc algebra on the circle `R/Z`.
//!
//! Each arc is stored by a canonical representative start point in `[0, 1)`
//! and a length in `[0, 1)`; wrap-around arcs are first-class. A set is
//! either a finite union of pairwise separated closed arcs or the full
//! circle. Binary operations lift arcs to the fundamental window `[0, 2)`
//! and fold results back.

use crate::geometry::line;
use crate::geometry::GeometryError;
use crate::scalar::{int, mod1, rat, Scalar};

/// One closed arc, stored by canonical start point and length.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Arc {
    /// Canonical start in `[0, 1)`.
    pub(crate) start: Scalar,
    /// Arc length in `[0, 1)`; the closed arc is `[start, start + len]` mod 1.
    pub(crate) len: Scalar,
}

impl Arc {
    fn end(&self) -> Scalar {
        &self.start + &self.len
    }
}

/// A canonical finite union of closed arcs, or the full circle.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CircleSet {
    Full,
    /// Sorted by start, pairwise separated as closed arcs (including across
    /// the wrap between the last and first arc).
    Arcs(Vec<Arc>),
}

impl CircleSet {
    pub fn empty() -> Self {
        CircleSet::Arcs(Vec::new())
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, CircleSet::Arcs(a) if a.is_empty())
    }

    pub fn is_full(&self) -> bool {
        matches!(self, CircleSet::Full)
    }

    pub fn arcs(&self) -> &[Arc] {
        match self {
            CircleSet::Full => panic!("full circle has no arc decomposition"),
            CircleSet::Arcs(a) => a,
        }
    }

    /// Endpoint pairs `[a, a + len]` with `a` canonical; the full circle
    /// reports a single `[0, 1]` pair.
    pub fn endpoint_pairs(&self) -> Vec<(Scalar, Scalar)> {
        match self {
            CircleSet::Full => vec![(int(0), int(1))],
            CircleSet::Arcs(a) => a.iter().map(|p| (p.start.clone(), p.end())).collect(),
        }
    }

    pub fn total_length(&self) -> Scalar {
        match self {
            CircleSet::Full => int(1),
            CircleSet::Arcs(a) => a.iter().fold(int(0), |acc, p| acc + &p.len),
        }
    }
}

/// Normalize raw arcs given as endpoint pairs `(a, b)` with `a ≤ b` on the
/// real line; the arc is `[a, b]` reduced mod 1. A raw arc of length `≥ 1`
/// is the full circle.
pub(crate) fn normalize_arcs(raw: Vec<(Scalar, Scalar)>) -> Result<CircleSet, GeometryError> {
    let one = int(1);
    let mut arcs: Vec<Arc> = Vec::with_capacity(raw.len());
    for (a, b) in raw {
        if a > b {
            return Err(GeometryError::EmptyCell { lo: a, hi: b });
        }
        let len = &b - &a;
        if len >= one {
            return Ok(CircleSet::Full);
        }
        arcs.push(Arc {
            start: mod1(&a),
            len,
        });
    }
    arcs.sort_by(|p, q| p.start.cmp(&q.start).then(p.len.cmp(&q.len)));

    // Merge pass in the lift [0, 2): arcs are [start, start + len] with
    // start in [0, 1), so at most the final merged arc crosses 1.
    let mut merged: Vec<Arc> = Vec::with_capacity(arcs.len());
    for arc in arcs {
        if let Some(last) = merged.last_mut() {
            if arc.start <= last.end() {
                let new_end = arc.end().max(last.end());
                last.len = &new_end - &last.start;
                if last.len >= one {
                    return Ok(CircleSet::Full);
                }
                continue;
            }
        }
        merged.push(arc);
    }

    // Wrap pass: absorb leading arcs reached by the final arc through 1.
    while merged.len() > 1 {
        let last_end = merged.last().unwrap().end();
        if last_end < one {
            break;
        }
        let wrapped_reach = &last_end - &one;
        if merged[0].start <= wrapped_reach {
            let absorbed = merged.remove(0);
            let last = merged.last_mut().unwrap();
            let absorbed_end_lifted = absorbed.end() + &one;
            let new_end = absorbed_end_lifted.max(last.end());
            last.len = &new_end - &last.start;
            if last.len >= one {
                return Ok(CircleSet::Full);
            }
        } else {
            break;
        }
    }
    if merged.len() == 1 && merged[0].len >= one {
        return Ok(CircleSet::Full);
    }
    Ok(CircleSet::Arcs(merged))
}

pub(crate) fn contains_point(set: &CircleSet, x: &Scalar) -> bool {
    match set {
        CircleSet::Full => true,
        CircleSet::Arcs(arcs) => arcs.iter().any(|p| mod1(&(x - &p.start)) <= p.len),
    }
}

pub(crate) fn union(a: &CircleSet, b: &CircleSet) -> CircleSet {
    if a.is_full() || b.is_full() {
        return CircleSet::Full;
    }
    let mut raw = a.endpoint_pairs();
    raw.extend(b.endpoint_pairs());
    normalize_arcs(raw).expect("canonical arcs are valid")
}

pub(crate) fn intersect(a: &CircleSet, b: &CircleSet) -> CircleSet {
    match (a, b) {
        (CircleSet::Full, _) => b.clone(),
        (_, CircleSet::Full) => a.clone(),
        (CircleSet::Arcs(xs), CircleSet::Arcs(ys)) => {
            let one = int(1);
            let mut raw = Vec::new();
            for p in xs {
                let (ps, pe) = (p.start.clone(), p.end());
                for q in ys {
                    // Arcs live in the lift window [0, 2); a wrap overlap can
                    // occur with either operand shifted by one period.
                    for shift in [-&one, int(0), one.clone()] {
                        let qs = &q.start + &shift;
                        let qe = qs.clone() + &q.len;
                        let lo = ps.clone().max(qs);
                        let hi = pe.clone().min(qe);
                        if lo <= hi {
                            raw.push((lo, hi));
                        }
                    }
                }
            }
            normalize_arcs(raw).expect("intersection pieces are valid")
        }
    }
}

pub(crate) fn is_subset(sub: &CircleSet, sup: &CircleSet) -> bool {
    match (sub, sup) {
        (_, CircleSet::Full) => true,
        (CircleSet::Full, CircleSet::Arcs(_)) => false,
        (CircleSet::Arcs(xs), CircleSet::Arcs(ys)) => xs.iter().all(|p| {
            ys.iter().any(|q| {
                let offset = mod1(&(&p.start - &q.start));
                offset <= q.len && offset + &p.len <= q.len
            })
        }),
    }
}

/// Closed complement of the interior. Degenerate arcs have empty interior,
/// so the complement runs straight through them.
pub(crate) fn complement_of_interior(set: &CircleSet) -> CircleSet {
    let one = int(1);
    match set {
        CircleSet::Full => CircleSet::empty(),
        CircleSet::Arcs(arcs) => {
            let solid: Vec<&Arc> = arcs.iter().filter(|p| p.len > int(0)).collect();
            if solid.is_empty() {
                return CircleSet::Full;
            }
            let mut raw = Vec::new();
            for (idx, p) in solid.iter().enumerate() {
                let next = solid[(idx + 1) % solid.len()];
                let gap_start = p.end();
                let mut gap_end = next.start.clone();
                while gap_end < gap_start {
                    gap_end += &one;
                }
                raw.push((gap_start, gap_end));
            }
            normalize_arcs(raw).expect("gap arcs are valid")
        }
    }
}

/// Closure of `N \ L` assuming `L ⊆ N`.
pub(crate) fn closure_of_difference(n: &CircleSet, l: &CircleSet) -> CircleSet {
    if l.is_empty() {
        return n.clone();
    }
    match n {
        CircleSet::Full => {
            if l.is_full() {
                CircleSet::empty()
            } else {
                complement_of_interior(l)
            }
        }
        CircleSet::Arcs(narcs) => {
            if l.is_full() {
                return CircleSet::empty();
            }
            let mut raw = Vec::new();
            for p in narcs {
                // Lift the N-arc and bring each contained L-arc into its window.
                let window: line::Cell = (p.start.clone(), p.end());
                let mut l_cells: Vec<line::Cell> = Vec::new();
                for q in l.arcs() {
                    let offset = mod1(&(&q.start - &p.start));
                    if offset <= p.len && &offset + &q.len <= p.len {
                        let qs = &p.start + &offset;
                        let qe = qs.clone() + &q.len;
                        l_cells.push((qs, qe));
                    }
                }
                let l_cells = line::normalize_cells(l_cells).expect("lifted arcs are valid");
                for piece in line::closure_of_difference(&[window], &l_cells) {
                    raw.push(piece);
                }
            }
            normalize_arcs(raw).expect("difference pieces are valid")
        }
    }
}

/// Convenience constructor used in tests.
#[allow(dead_code)]
pub(crate) fn arcs_from(raw: &[((i64, i64), (i64, i64))]) -> CircleSet {
    normalize_arcs(
        raw.iter()
            .map(|((an, ad), (bn, bd))| (rat(*an, *ad), rat(*bn, *bd)))
            .collect(),
    )
    .unwrap()
}
