//! Cell algebra for finite unions of closed intervals on the line.
//!
//! Canonical form: cells sorted by left endpoint, pairwise separated (the
//! next cell starts strictly after the previous one ends). Cells that
//! overlap or merely share an endpoint are merged during normalization:
//! the union of two abutting closed intervals is one closed interval.
//! Degenerate point cells `[a, a]` are permitted; they matter for the
//! closed-set semantics of intersection and disjointness.

use crate::geometry::GeometryError;
use crate::scalar::Scalar;

pub(crate) type Cell = (Scalar, Scalar);

/// Sort, validate and merge a raw cell list.
pub(crate) fn normalize_cells(raw: Vec<Cell>) -> Result<Vec<Cell>, GeometryError> {
    for (a, b) in &raw {
        if a > b {
            return Err(GeometryError::EmptyCell {
                lo: a.clone(),
                hi: b.clone(),
            });
        }
    }
    let mut raw = raw;
    raw.sort();
    let mut out: Vec<Cell> = Vec::with_capacity(raw.len());
    for (a, b) in raw {
        if let Some(last) = out.last_mut() {
            if a <= last.1 {
                if b > last.1 {
                    last.1 = b;
                }
                continue;
            }
        }
        out.push((a, b));
    }
    Ok(out)
}

pub(crate) fn intersect_cells(xs: &[Cell], ys: &[Cell]) -> Vec<Cell> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0usize, 0usize);
    while i < xs.len() && j < ys.len() {
        let lo = xs[i].0.clone().max(ys[j].0.clone());
        let hi = xs[i].1.clone().min(ys[j].1.clone());
        if lo <= hi {
            out.push((lo, hi));
        }
        if xs[i].1 <= ys[j].1 {
            i += 1;
        } else {
            j += 1;
        }
    }
    // Pieces are produced sorted and non-overlapping but may abut.
    normalize_cells(out).expect("intersection pieces are valid")
}

pub(crate) fn contains_point(cells: &[Cell], x: &Scalar) -> bool {
    cells.iter().any(|(a, b)| a <= x && x <= b)
}

/// `sub` is covered by `sup`. Both canonical; each connected cell of `sub`
/// must then sit inside a single cell of `sup`.
pub(crate) fn is_subset(sub: &[Cell], sup: &[Cell]) -> bool {
    sub.iter()
        .all(|(a, b)| sup.iter().any(|(c, d)| c <= a && b <= d))
}

/// Closure of `N \ L`, assuming `L ⊆ N` and both canonical with no
/// degenerate cells in `L` interior to matter (callers pass regular pairs).
pub(crate) fn closure_of_difference(n: &[Cell], l: &[Cell]) -> Vec<Cell> {
    let mut out = Vec::new();
    for (a, b) in n {
        let mut cursor = a.clone();
        for (la, lb) in l.iter().filter(|(la, lb)| la <= b && lb >= a) {
            if cursor < *la {
                out.push((cursor.clone(), la.clone()));
            }
            if *lb > cursor {
                cursor = lb.clone();
            }
        }
        if cursor < *b {
            out.push((cursor, b.clone()));
        }
    }
    normalize_cells(out).expect("difference pieces are valid")
}

/// Closed complement of the interior of `cells` within the closed window
/// `[lo, hi]`. The window must contain every cell; degenerate cells have
/// empty interior and do not interrupt the complement.
pub(crate) fn complement_of_interior(cells: &[Cell], lo: &Scalar, hi: &Scalar) -> Vec<Cell> {
    let mut out = Vec::new();
    let mut cursor = lo.clone();
    for (a, b) in cells.iter().filter(|(a, b)| a < b) {
        debug_assert!(a >= lo && b <= hi, "window must cover the cells");
        if *a >= cursor {
            out.push((cursor, a.clone()));
        }
        cursor = b.clone();
    }
    if cursor <= *hi {
        out.push((cursor, hi.clone()));
    }
    out
}

pub(crate) fn total_length(cells: &[Cell]) -> Scalar {
    cells
        .iter()
        .map(|(a, b)| b - a)
        .fold(crate::scalar::int(0), |acc, w| acc + w)
}
