//! Graded rational homology of pointed 1-D pairs and the maps induced by a
//! piecewise-linear map, computed by exact degree counting.
//!
//! A core component whose two boundary ends both lie in `L` contributes a
//! circle to the wedge `N/L` (one degree-1 generator); a component touching
//! `L` at neither end contributes a point class (one reduced degree-0
//! generator); a component with exactly one end in `L` collapses. Induced
//! maps on degree 1 count signed full crossings of maximal monotone
//! branches over target components, oriented by increasing coordinate.

mod matrix;

pub use matrix::Matrix;

use thiserror::Error;

use crate::dynamics::{DynamicsError, MapSpace, PLMap};
use crate::geometry::{CompactPair, GeometryError, Label, RegionSet};
use crate::index::{check_precedes, IndexError};
use crate::scalar::{int, is_integer, Scalar};

pub const MAX_DEGREE: usize = 1;

/// Dimensions of the graded homology, indexed by degree (0 and 1 in scope).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradedSpace {
    pub dims: Vec<usize>,
}

impl GradedSpace {
    pub fn dim(&self, degree: usize) -> usize {
        self.dims.get(degree).copied().unwrap_or(0)
    }

    pub fn is_trivial(&self) -> bool {
        self.dims.iter().all(|d| *d == 0)
    }
}

/// How one core component contributes to the pointed-space homology.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ComponentClass {
    /// Both ends in `L`: a circle in the wedge, one degree-1 generator.
    Circle,
    /// Neither end in `L`: an isolated component, one degree-0 generator.
    Point,
    /// Exactly one end in `L`: collapses to the basepoint.
    Collapsed,
    /// The component is the whole circle (only when `L` misses it):
    /// generators in both degrees.
    FullCircle,
}

/// One connected component of the core, with its classification.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoreComponent {
    /// Endpoints in lift coordinates (circle arcs report
    /// `[start, start + len]` with canonical start).
    pub cell: (Scalar, Scalar),
    pub class: ComponentClass,
}

/// Ordered component basis of a pair, by increasing coordinate.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ComponentBasis {
    pub components: Vec<CoreComponent>,
}

impl ComponentBasis {
    /// Components carrying a degree-1 generator, in basis order.
    pub fn degree1(&self) -> Vec<&CoreComponent> {
        self.components
            .iter()
            .filter(|c| matches!(c.class, ComponentClass::Circle | ComponentClass::FullCircle))
            .collect()
    }

    /// Components carrying a reduced degree-0 generator, in basis order.
    pub fn degree0(&self) -> Vec<&CoreComponent> {
        self.components
            .iter()
            .filter(|c| matches!(c.class, ComponentClass::Point | ComponentClass::FullCircle))
            .collect()
    }
}

/// The induced map `f_{a,b*}` as one exact integer matrix per degree
/// (stored over the rationals).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InducedMap {
    pub source: Label,
    pub target: Label,
    /// Indexed by degree; entry `[k]` has shape `dim_k(b) × dim_k(a)`.
    pub matrices: Vec<Matrix>,
}

impl InducedMap {
    pub fn degree(&self, k: usize) -> &Matrix {
        &self.matrices[k]
    }
}

#[derive(Debug, Error)]
pub enum HomologyError {
    #[error("crossing undecided: branch image boundary touches a component boundary at {at}; refine the margins or the grid")]
    Undecided { at: Scalar },
    #[error("degree-0 image of a component straddles target components")]
    AmbiguousPointImage,
    #[error("homology is only computed for 1-D pairs")]
    NotOneDimensional,
    #[error("edge ({from}, {to}) does not satisfy the precedes conditions")]
    PrecedesViolation { from: Label, to: Label },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Index(#[from] IndexError),
}

/// Classify the core components of a 1-D pair and read off the graded
/// dimensions.
pub fn pair_homology(pair: &CompactPair) -> Result<(GradedSpace, ComponentBasis), HomologyError> {
    let core = pair.core();
    let components = classify_components(&core, pair.l())?;
    let basis = ComponentBasis { components };
    let dims = vec![basis.degree0().len(), basis.degree1().len()];
    Ok((GradedSpace { dims }, basis))
}

fn classify_components(
    core: &RegionSet,
    l: &RegionSet,
) -> Result<Vec<CoreComponent>, HomologyError> {
    match core {
        RegionSet::Square(_) => Err(HomologyError::NotOneDimensional),
        RegionSet::Circle(set) if set.is_full() => Ok(vec![CoreComponent {
            cell: (int(0), int(1)),
            class: ComponentClass::FullCircle,
        }]),
        _ => {
            let mut out = Vec::new();
            for (c0, c1) in core.cells() {
                let lo_in = l.contains_point(&c0);
                let hi_in = l.contains_point(&c1);
                let class = match (lo_in, hi_in) {
                    (true, true) => ComponentClass::Circle,
                    (false, false) => ComponentClass::Point,
                    _ => ComponentClass::Collapsed,
                };
                out.push(CoreComponent {
                    cell: (c0, c1),
                    class,
                });
            }
            Ok(out)
        }
    }
}

/// Crossing count of one monotone branch over one target component:
/// `+1` per orientation-preserving full crossing, `-1` per reversing one,
/// `0` for excursions that do not span the component. Exact boundary
/// contact between the branch image and the component is refused.
pub fn degree_count(
    branch_image: &(Scalar, Scalar),
    orientation: i32,
    component: &(Scalar, Scalar),
    circle: bool,
) -> Result<i64, HomologyError> {
    let (v_lo, v_hi) = branch_image;
    let (c0, c1) = component;
    if circle {
        // Count integer translates c + t fully inside (v_lo, v_hi).
        for (a, b) in [(v_lo, c0), (v_lo, c1), (v_hi, c0), (v_hi, c1)] {
            if is_integer(&(a - b)) {
                return Err(HomologyError::Undecided { at: a.clone() });
            }
        }
        // t > v_lo - c0  and  t < v_hi - c1.
        let t_min = crate::scalar::floor_i64(&(v_lo - c0)) + 1;
        let t_max = {
            let d = v_hi - c1;
            let f = crate::scalar::floor_i64(&d);
            // d is never an integer here.
            f
        };
        let count = if t_max >= t_min { t_max - t_min + 1 } else { 0 };
        Ok(count * orientation as i64)
    } else {
        if v_lo == c0 || v_lo == c1 || v_hi == c0 || v_hi == c1 {
            return Err(HomologyError::Undecided { at: v_lo.clone() });
        }
        if v_lo < c0 && v_hi > c1 {
            Ok(orientation as i64)
        } else {
            Ok(0)
        }
    }
}

/// Merge adjacent affine branches with the same slope sign into maximal
/// monotone runs; crossing counts are computed per run.
fn monotone_runs(
    f: &PLMap,
    cell: &(Scalar, Scalar),
) -> Result<Vec<(Scalar, Scalar, i32)>, HomologyError> {
    let mut runs: Vec<(Scalar, Scalar, i32)> = Vec::new();
    for br in f.monotone_branches(cell)? {
        let (lo, hi) = br.image;
        if let Some(last) = runs.last_mut() {
            if last.2 == br.orientation {
                last.0 = last.0.clone().min(lo.clone());
                last.1 = last.1.clone().max(hi.clone());
                continue;
            }
        }
        runs.push((lo, hi, br.orientation));
    }
    Ok(runs)
}

/// The induced map `f_{a,b*}` on graded homology, by exact degree counting.
/// Requires the precedes conditions for the edge.
pub fn induced_map(
    pair_a: &CompactPair,
    pair_b: &CompactPair,
    f: &PLMap,
) -> Result<InducedMap, HomologyError> {
    let check = check_precedes(pair_a, pair_b, f)?;
    if !check.pass() {
        return Err(HomologyError::PrecedesViolation {
            from: pair_a.label.clone(),
            to: pair_b.label.clone(),
        });
    }
    induced_map_unchecked(pair_a, pair_b, f)
}

/// Degree counting without re-checking the precedes conditions. Used for
/// functoriality tests on iterated maps, where the edge conditions are
/// carried by the underlying path.
pub fn induced_map_unchecked(
    pair_a: &CompactPair,
    pair_b: &CompactPair,
    f: &PLMap,
) -> Result<InducedMap, HomologyError> {
    let (_, basis_a) = pair_homology(pair_a)?;
    let (_, basis_b) = pair_homology(pair_b)?;
    let circle = f.space() == MapSpace::Circle;

    let src1 = basis_a.degree1();
    let tgt1 = basis_b.degree1();
    let mut m1 = Matrix::zero(tgt1.len(), src1.len());
    for (i, comp_a) in src1.iter().enumerate() {
        if matches!(comp_a.class, ComponentClass::FullCircle) {
            // Full-circle generator maps by the degree of f.
            for (j, comp_b) in tgt1.iter().enumerate() {
                if matches!(comp_b.class, ComponentClass::FullCircle) {
                    let d = f.circle_degree().unwrap_or(0);
                    m1.set(j, i, int(d));
                }
            }
            continue;
        }
        let runs = monotone_runs(f, &comp_a.cell)?;
        for (j, comp_b) in tgt1.iter().enumerate() {
            if matches!(comp_b.class, ComponentClass::FullCircle) {
                continue;
            }
            let mut total = 0i64;
            for (lo, hi, orientation) in &runs {
                total += degree_count(
                    &(lo.clone(), hi.clone()),
                    *orientation,
                    &comp_b.cell,
                    circle,
                )?;
            }
            m1.set(j, i, int(total));
        }
    }

    let src0 = basis_a.degree0();
    let tgt0 = basis_b.degree0();
    let mut m0 = Matrix::zero(tgt0.len(), src0.len());
    for (i, comp_a) in src0.iter().enumerate() {
        let image = f.image(&RegionSet::normalize(
            &pair_a.space(),
            vec![comp_a.cell.clone()],
        )?)?;
        for (j, comp_b) in tgt0.iter().enumerate() {
            let target = RegionSet::normalize(&pair_b.space(), vec![comp_b.cell.clone()])?;
            if image.is_subset_of(&target)? {
                m0.set(j, i, int(1));
            }
        }
    }

    Ok(InducedMap {
        source: pair_a.label.clone(),
        target: pair_b.label.clone(),
        matrices: vec![m0, m1],
    })
}

#[cfg(test)]
mod tests;
