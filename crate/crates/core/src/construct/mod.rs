//! Construction of index systems from product index pairs over the
//! quantized square.
//!
//! Pipeline: seed a neighborhood of the diagonal (the strip template, or a
//! user-supplied pair rasterized by `discretize`), verify it as a single
//! index pair for `f×f` with exact per-box geometry, take the finitely
//! many distinct cross-sections, derive candidate edges from the slab
//! dynamics, filter them through the 1-D precedes checks, and hand back a
//! system that passes full verification.
//!
//! Metric margin bookkeeping is replaced by a-posteriori exact checks:
//! discretize first, verify, and refine the grid when a check fails.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::dynamics::{DynamicsError, MapSpace, PLMap, ProductMap};
use crate::geometry::{
    grid, CompactPair, GeometryError, GridBox, GridSet, Label, Rect, RegionSet, SquareBase,
};
use crate::index::{check_precedes, verify, IndexError, IndexSystem, Verdict};
use crate::scalar::{int, is_integer, Scalar};

#[derive(Debug, Error)]
pub enum ConstructError {
    #[error("grid check failed ({reason}); refine the grid step to 1/{suggested_k}")]
    RefineDelta { reason: String, suggested_k: u64 },
    #[error("{value} is not a multiple of the grid step 1/{k}")]
    NotGridMultiple { value: Scalar, k: u64 },
    #[error("the map domain must extend at least one grid cell beyond the pair; box {0:?} escapes it")]
    DomainTooSmall(GridBox),
    #[error("combinatorial invariant part of the strip is empty; nothing to isolate")]
    EmptyInvariantPart,
    #[error("core of the product pair misses the diagonal")]
    NoDiagonalCore,
    #[error("L is not contained in N")]
    LNotContained,
    #[error("slice pair at slab {slab} has no admissible outgoing edge")]
    NoOutgoingEdge { slab: i64 },
    #[error("assembled system failed verification: {detail}")]
    VerificationFailed { detail: String },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Index(#[from] IndexError),
}

/// A compact pair over the gridded square together with its factor map,
/// intended as an index pair for `f×f`.
#[derive(Clone, Debug)]
pub struct ProductIndexPair {
    n: GridSet,
    l: GridSet,
    map: ProductMap,
}

impl ProductIndexPair {
    pub fn new(n: GridSet, l: GridSet, factor: PLMap) -> Result<Self, ConstructError> {
        let map = ProductMap::new(factor);
        if n.base() != map.base() || l.base() != n.base() || l.k() != n.k() {
            return Err(ConstructError::VerificationFailed {
                detail: "pair and map live over different bases".to_string(),
            });
        }
        if !l.is_subset(&n) {
            return Err(ConstructError::LNotContained);
        }
        Ok(ProductIndexPair { n, l, map })
    }

    pub fn n(&self) -> &GridSet {
        &self.n
    }

    pub fn l(&self) -> &GridSet {
        &self.l
    }

    pub fn factor(&self) -> &PLMap {
        &self.map.factor
    }

    pub fn k(&self) -> u64 {
        self.n.k()
    }

    pub fn base(&self) -> SquareBase {
        self.n.base()
    }

    /// Core boxes `N \ L` (exactly `cl(N \ L)` for closed grid unions).
    pub fn core(&self) -> GridSet {
        self.n.difference(&self.l).expect("same grid")
    }
}

fn scaled_integer(value: &Scalar, k: u64) -> Result<i64, ConstructError> {
    let scaled = value * int(k as i64);
    if !is_integer(&scaled) {
        return Err(ConstructError::NotGridMultiple {
            value: value.clone(),
            k,
        });
    }
    Ok(crate::scalar::floor_i64(&scaled))
}

/// Box index range of the map's domain (for the line: the hull, which must
/// be grid-aligned; for the circle: everything).
fn domain_box_range(f: &PLMap, k: u64) -> Result<(i64, i64), ConstructError> {
    match f.space() {
        MapSpace::Circle => Ok((0, k as i64)),
        MapSpace::Line => {
            let domain = f.domain();
            let (lo, hi) = domain.hull().expect("line maps have nonempty domains");
            Ok((scaled_integer(&lo, k)?, scaled_integer(&hi, k)?))
        }
    }
}

fn cyclic_band_distance(i: i64, j: i64, base: SquareBase, k: u64) -> i64 {
    match base {
        SquareBase::Line => (i - j).abs(),
        SquareBase::Circle => {
            let k = k as i64;
            let d = (i - j).rem_euclid(k);
            d.min(k - d)
        }
    }
}

/// Build the diagonal-strip seed and complete it into a verified product
/// index pair:
///
/// 1. `N₀` = boxes within `(w + c)/δ` of the diagonal over the domain range;
/// 2. prune `N₀` to the combinatorial invariant part `S` (boxes on
///    bi-infinite paths of the closed-cover box map);
/// 3. fatten `S` by a one-box margin, set `Ñ = S⁺ ∪ F(S⁺)` with the
///    closed-cover image, `L̃ = Ñ \ S⁺`;
/// 4. verify the single-pair conditions exactly; on failure retry with a
///    wider margin before asking for a finer grid.
pub fn strip_template(
    f: &PLMap,
    w: &Scalar,
    c: &Scalar,
    k: u64,
) -> Result<ProductIndexPair, ConstructError> {
    let base = match f.space() {
        MapSpace::Line => SquareBase::Line,
        MapSpace::Circle => SquareBase::Circle,
    };
    let width = scaled_integer(w, k)? + scaled_integer(c, k)?;
    let (lo, hi) = domain_box_range(f, k)?;
    let mut seed = GridSet::empty(base, k)?;
    for i in lo..hi {
        for j in (i - width)..=(i + width) {
            if base == SquareBase::Line && !(lo..hi).contains(&j) {
                continue;
            }
            if cyclic_band_distance(i, j, base, k) <= width {
                seed.insert((i, j));
            }
        }
    }
    let map = ProductMap::new(f.clone());
    let invariant_part = prune_to_invariant(&map, &seed)?;
    if invariant_part.is_empty() {
        return Err(ConstructError::EmptyInvariantPart);
    }

    let mut last_err: Option<ConstructError> = None;
    for (faces_only, margin) in [(true, 1), (false, 1), (true, 2), (false, 2)] {
        match complete_pair(f, &map, &invariant_part, margin, faces_only, lo, hi) {
            Ok(pair) => return Ok(pair),
            Err(e) => last_err = Some(e),
        }
    }
    match last_err.unwrap() {
        ConstructError::RefineDelta { reason, .. } => Err(ConstructError::RefineDelta {
            reason,
            suggested_k: k * 3,
        }),
        other => Err(other),
    }
}

fn complete_pair(
    f: &PLMap,
    map: &ProductMap,
    invariant_part: &GridSet,
    margin: u32,
    faces_only: bool,
    lo: i64,
    hi: i64,
) -> Result<ProductIndexPair, ConstructError> {
    let base = invariant_part.base();
    let k = invariant_part.k();
    let mut core = if faces_only {
        invariant_part.fatten_faces(margin)
    } else {
        invariant_part.fatten(margin)
    };
    if base == SquareBase::Line {
        // Margins are wanted transverse to the diagonal. Fattening into a
        // column (or row) that carries no invariant box would slice into a
        // pure-escape pair with no admissible successor, so the margin is
        // clipped to the column and row support of the invariant part.
        let cols: std::collections::BTreeSet<i64> =
            invariant_part.boxes().map(|(i, _)| i).collect();
        let rows: std::collections::BTreeSet<i64> =
            invariant_part.boxes().map(|(_, j)| j).collect();
        let clipped = core
            .boxes()
            .filter(|(i, j)| {
                cols.contains(i)
                    && rows.contains(j)
                    && (lo..hi).contains(i)
                    && (lo..hi).contains(j)
            })
            .collect::<Vec<_>>();
        core = GridSet::from_boxes(base, k, clipped)?;
    }
    let images = map.box_image_cover(&core)?;
    let big_n = core.union(&images)?;
    for b in big_n.boxes() {
        if base == SquareBase::Line && !((lo..hi).contains(&b.0) && (lo..hi).contains(&b.1)) {
            return Err(ConstructError::DomainTooSmall(b));
        }
    }
    let l = big_n.difference(&core)?;
    let pair = ProductIndexPair::new(big_n, l, f.clone())?;
    verify_product_pair(&pair)?;
    Ok(pair)
}

/// Boxes of the seed lying on bi-infinite paths of the combinatorial box
/// map with interior-meeting edges. The interior-meeting boxes of each
/// exact image rectangle still cover it as closed sets, so interior orbits
/// survive the pruning; this is a candidate-selection step only, and every
/// guarantee about the resulting pair comes from the exact verification
/// that follows. Touching-cover edges would let corner-contact chains keep
/// the whole seed alive.
fn prune_to_invariant(map: &ProductMap, seed: &GridSet) -> Result<GridSet, ConstructError> {
    let mut succ: BTreeMap<GridBox, Vec<GridBox>> = BTreeMap::new();
    for b in seed.boxes() {
        let image = map.box_image_one(seed, b, false)?;
        succ.insert(
            b,
            image.boxes().filter(|t| seed.contains(*t)).collect(),
        );
    }
    let mut alive: std::collections::BTreeSet<GridBox> = seed.boxes().collect();
    loop {
        let mut has_succ: std::collections::BTreeSet<GridBox> = Default::default();
        let mut has_pred: std::collections::BTreeSet<GridBox> = Default::default();
        for b in alive.iter() {
            for t in &succ[b] {
                if alive.contains(t) {
                    has_succ.insert(*b);
                    has_pred.insert(*t);
                }
            }
        }
        let next: std::collections::BTreeSet<GridBox> = alive
            .iter()
            .filter(|b| has_succ.contains(*b) && has_pred.contains(*b))
            .copied()
            .collect();
        if next.len() == alive.len() {
            break;
        }
        alive = next;
    }
    Ok(GridSet::from_boxes(seed.base(), seed.k(), alive)?)
}

/// Rasterize a pair given by rational rectangles: a box joins `Ñ` (resp.
/// `L̃`) when its interior meets some rectangle of `N` (resp. `L`). Aligned
/// input is a fixed point of this operation. The result is re-verified.
pub fn discretize(
    n_rects: &[Rect],
    l_rects: &[Rect],
    f: &PLMap,
    k: u64,
) -> Result<ProductIndexPair, ConstructError> {
    let base = match f.space() {
        MapSpace::Line => SquareBase::Line,
        MapSpace::Circle => SquareBase::Circle,
    };
    let rasterize = |rects: &[Rect]| -> Result<GridSet, ConstructError> {
        let mut out = GridSet::empty(base, k)?;
        for r in rects {
            for b in grid::boxes_meeting_rect_interior(r, k, base) {
                out.insert(b);
            }
        }
        Ok(out)
    };
    let pair = ProductIndexPair::new(rasterize(n_rects)?, rasterize(l_rects)?, f.clone())?;
    verify_product_pair(&pair)?;
    Ok(pair)
}

/// Exact single-pair index conditions for `f×f` over the grid:
///
/// (a) each exact image rectangle of a core box lies in `Int(Ñ)`;
/// (b) each exact image rectangle of an `L̃` box misses the closed core;
/// (chain) the exact pullback of the core inside each core box lies in
/// `Int(core)`.
///
/// Rectangle-versus-grid tests go through the touching-box enumeration, so
/// every check is an exact rational comparison. Failures ask for a finer
/// grid.
pub fn verify_product_pair(pair: &ProductIndexPair) -> Result<(), ConstructError> {
    let k = pair.k();
    let base = pair.base();
    let core = pair.core();
    let suggested_k = k * 3;

    if !core
        .boxes()
        .any(|(i, j)| cyclic_band_distance(i, j, base, k) <= 1)
    {
        return Err(ConstructError::NoDiagonalCore);
    }

    for b in core.boxes() {
        for rect in pair.map.exact_box_image(&pair.n, b)? {
            for t in grid::boxes_touching_rect(&rect, k, base) {
                if !pair.n.contains(t) {
                    return Err(ConstructError::RefineDelta {
                        reason: format!(
                            "image of core box {b:?} leaves the interior of N near box {t:?}"
                        ),
                        suggested_k,
                    });
                }
            }
        }
    }

    for b in pair.l.boxes() {
        for rect in pair.map.exact_box_image(&pair.l, b)? {
            for t in grid::boxes_touching_rect(&rect, k, base) {
                if core.contains(t) {
                    return Err(ConstructError::RefineDelta {
                        reason: format!(
                            "image of exit box {b:?} meets the closed core at box {t:?}"
                        ),
                        suggested_k,
                    });
                }
            }
        }
    }

    for b in core.boxes() {
        for q in pullback_rects(&pair.map, &core, b)? {
            for t in grid::boxes_touching_rect(&q, k, base) {
                if !core.contains(t) {
                    return Err(ConstructError::RefineDelta {
                        reason: format!(
                            "core box {b:?} meets the pullback of the core outside Int(core) near box {t:?}"
                        ),
                        suggested_k,
                    });
                }
            }
        }
    }
    Ok(())
}

/// Exact rectangles of `b ∩ (f×f)⁻¹(|target|)`.
fn pullback_rects(
    map: &ProductMap,
    target: &GridSet,
    b: GridBox,
) -> Result<Vec<Rect>, ConstructError> {
    let k = target.k();
    let (x0, x1) = target.index_cell(b.0);
    let (y0, y1) = target.index_cell(b.1);
    let x_branches = map.factor.lift_branches(&x0, &x1)?;
    let y_branches = map.factor.lift_branches(&y0, &y1)?;
    let circle = target.base() == SquareBase::Circle;
    let mut out = Vec::new();
    for bx in &x_branches {
        for by in &y_branches {
            // Only target boxes met by the exact image can pull back.
            let image = Rect {
                x: bx.image(),
                y: by.image(),
            };
            for t in grid::boxes_touching_rect(&image, k, target.base()) {
                if !target.contains(t) {
                    continue;
                }
                let t = target.canon(t);
                let (cx0, cx1) = target.index_cell(t.0);
                let (cy0, cy1) = target.index_cell(t.1);
                for xi in pull_affine(bx, &cx0, &cx1, circle) {
                    for yi in pull_affine(by, &cy0, &cy1, circle) {
                        out.push(Rect {
                            x: xi.clone(),
                            y: yi,
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Solutions of `branch(x) ∈ [c0 + t, c1 + t]` within the branch cell, over
/// the integer translates when on the circle.
fn pull_affine(
    branch: &crate::dynamics::LiftBranch,
    c0: &Scalar,
    c1: &Scalar,
    circle: bool,
) -> Vec<(Scalar, Scalar)> {
    let (lo, hi) = branch.image();
    let translates: Vec<Scalar> = if circle {
        let m_lo = crate::scalar::floor_i64(&(&lo - c1)) - 1;
        let m_hi = crate::scalar::floor_i64(&(&hi - c0)) + 1;
        (m_lo..=m_hi).map(int).collect()
    } else {
        vec![int(0)]
    };
    let mut out = Vec::new();
    for t in translates {
        let a = (c0 + &t).max(lo.clone());
        let b = (c1 + &t).min(hi.clone());
        if a > b {
            continue;
        }
        let xa = (&a - &branch.intercept) / &branch.slope;
        let xb = (&b - &branch.intercept) / &branch.slope;
        let (xa, xb) = if xa <= xb { (xa, xb) } else { (xb, xa) };
        out.push((xa, xb));
    }
    out
}

/// One distinct cross-section of the pair.
#[derive(Clone, Debug)]
pub struct DistinctSlice {
    pub n: RegionSet,
    pub l: RegionSet,
    pub core_empty: bool,
    pub multiplicity: usize,
}

/// The slab decomposition: per-column slice identity plus the deduplicated
/// distinct slices. Grid quantization guarantees finiteness.
#[derive(Clone, Debug)]
pub struct SliceFamily {
    pub k: u64,
    /// `(column index, slice id)` for every nonempty column.
    pub slabs: Vec<(i64, usize)>,
    pub distinct: Vec<DistinctSlice>,
}

impl SliceFamily {
    pub fn distinct_count(&self) -> usize {
        self.distinct.len()
    }

    pub fn empty_core_count(&self) -> usize {
        self.distinct.iter().filter(|s| s.core_empty).count()
    }
}

fn column_set(
    grid: &GridSet,
    column: i64,
    base: SquareBase,
) -> Result<RegionSet, GeometryError> {
    let cells: Vec<(Scalar, Scalar)> = grid
        .column(column)
        .into_iter()
        .map(|j| grid.index_cell(j))
        .collect();
    match base {
        SquareBase::Line => RegionSet::normalize(&crate::geometry::Space::Line, cells),
        SquareBase::Circle => RegionSet::normalize(&crate::geometry::Space::Circle, cells),
    }
}

/// Cross-sections per slab, deduplicated by exact set equality.
pub fn slice_system(pair: &ProductIndexPair) -> Result<SliceFamily, ConstructError> {
    let base = pair.base();
    let columns = pair.n.columns();
    let mut distinct: Vec<DistinctSlice> = Vec::new();
    let mut slabs = Vec::new();
    for (&column, _) in columns.iter() {
        let n = column_set(&pair.n, column, base)?;
        let l = column_set(&pair.l, column, base)?;
        let id = distinct.iter().position(|s| s.n == n && s.l == l);
        let id = match id {
            Some(id) => {
                distinct[id].multiplicity += 1;
                id
            }
            None => {
                let core_empty = n == l;
                distinct.push(DistinctSlice {
                    n,
                    l,
                    core_empty,
                    multiplicity: 1,
                });
                distinct.len() - 1
            }
        };
        slabs.push((column, id));
    }
    Ok(SliceFamily {
        k: pair.k(),
        slabs,
        distinct,
    })
}

/// Outcome of assembly: the verified system plus the edge bookkeeping
/// (slab-derived candidates versus the precedes-filtered edges actually
/// declared).
#[derive(Clone, Debug)]
pub struct AssembleReport {
    pub system: IndexSystem,
    pub slab_candidate_edges: Vec<(Label, Label)>,
    pub declared_edges: Vec<(Label, Label)>,
    pub distinct_slices: usize,
    pub empty_core_slices: usize,
}

/// Assemble the sliced pairs into an index system: vertices are the
/// distinct slices with nonempty core, candidate edges come from the slab
/// dynamics (`f` of a slab meets a target slab) and survive only if the
/// exact precedes conditions hold. The result must verify.
pub fn assemble(
    pair: &ProductIndexPair,
    family: &SliceFamily,
    f: &PLMap,
) -> Result<AssembleReport, ConstructError> {
    let base = pair.base();
    let k = pair.k();

    // Label the nonempty-core slices in first-appearance order.
    let mut labels: Vec<Option<Label>> = vec![None; family.distinct.len()];
    let mut pairs: Vec<CompactPair> = Vec::new();
    let mut next = 0usize;
    for (_, id) in &family.slabs {
        if labels[*id].is_none() && !family.distinct[*id].core_empty {
            let label = Label::new(format!("s{next}"));
            next += 1;
            let slice = &family.distinct[*id];
            pairs.push(CompactPair::new(
                label.clone(),
                slice.n.clone(),
                slice.l.clone(),
            )?);
            labels[*id] = Some(label);
        }
    }
    let pair_lookup: BTreeMap<Label, CompactPair> = pairs
        .iter()
        .map(|p| (p.label.clone(), p.clone()))
        .collect();

    // Slab-derived candidate edges.
    let slab_of: BTreeMap<i64, usize> = family.slabs.iter().cloned().collect();
    let mut candidates: std::collections::BTreeSet<(Label, Label)> = Default::default();
    for (column, id) in &family.slabs {
        let Some(from) = labels[*id].clone() else {
            continue;
        };
        let (x0, x1) = pair.n.index_cell(*column);
        let image = f.image(&match base {
            SquareBase::Line => {
                RegionSet::normalize(&crate::geometry::Space::Line, vec![(x0, x1)])?
            }
            SquareBase::Circle => {
                RegionSet::normalize(&crate::geometry::Space::Circle, vec![(x0, x1)])?
            }
        })?;
        for (lo, hi) in image.cells() {
            for target_col in grid::touching_indices(&lo, &hi, k, base) {
                if let Some(target_id) = slab_of.get(&target_col) {
                    if let Some(to) = labels[*target_id].clone() {
                        candidates.insert((from.clone(), to));
                    }
                }
            }
        }
    }

    // Filter by the exact precedes conditions.
    let mut declared: Vec<(Label, Label)> = Vec::new();
    for (a, b) in &candidates {
        let check = check_precedes(&pair_lookup[a], &pair_lookup[b], f)?;
        if check.pass() {
            declared.push((a.clone(), b.clone()));
        }
    }
    for p in &pairs {
        if !declared.iter().any(|(a, _)| a == &p.label) {
            let slab = family
                .slabs
                .iter()
                .find(|(_, id)| labels[*id].as_ref() == Some(&p.label))
                .map(|(c, _)| *c)
                .unwrap_or_default();
            return Err(ConstructError::NoOutgoingEdge { slab });
        }
    }

    let system = IndexSystem::new(pairs, declared.clone())?;
    let report = verify(&system, f)?;
    if report.verdict != Verdict::Verified {
        let detail = report
            .structural_issues
            .first()
            .cloned()
            .unwrap_or_else(|| format!("verdict {}", report.verdict));
        return Err(ConstructError::VerificationFailed { detail });
    }
    Ok(AssembleReport {
        system,
        slab_candidate_edges: candidates.into_iter().collect(),
        declared_edges: declared,
        distinct_slices: family.distinct_count(),
        empty_core_slices: family.empty_core_count(),
    })
}

/// Full pipeline: template (or given pair) to verified system.
pub fn construct_system(
    pair: &ProductIndexPair,
    f: &PLMap,
) -> Result<(SliceFamily, AssembleReport), ConstructError> {
    let family = slice_system(pair)?;
    let report = assemble(pair, &family, f)?;
    Ok((family, report))
}
