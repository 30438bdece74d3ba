//! Orbit-segment enclosures over the edge graph.

use std::collections::BTreeMap;

use crate::dynamics::PLMap;
use crate::geometry::{Label, RegionSet};
use crate::index::{IndexError, IndexSystem};

/// Per-label enclosure of the points extending to an orbit segment of
/// length `2m + 1` through the edge graph, centered at the label.
///
/// Computed by `m` rounds of forward refinement (intersect with images of
/// predecessors) and backward refinement (intersect with preimages of
/// successors); the final set is the intersection of the two. The sets are
/// exact: both refinement chains are finite unions of exact affine images,
/// and a backward chain into `a` concatenates with a forward chain out of
/// `a` to a genuine orbit segment.
pub fn inv_m(
    system: &IndexSystem,
    f: &PLMap,
    m: u32,
) -> Result<BTreeMap<Label, RegionSet>, IndexError> {
    let cores: BTreeMap<Label, RegionSet> = system
        .labels()
        .map(|l| Ok((l.clone(), system.core(l)?.clone())))
        .collect::<Result<_, IndexError>>()?;
    let mut forward = cores.clone();
    let mut backward = cores.clone();
    for _ in 0..m {
        let mut next_forward = BTreeMap::new();
        let mut next_backward = BTreeMap::new();
        for label in system.labels() {
            let core = &cores[label];
            let mut reach = RegionSet::empty(&core.space());
            for pred in system.predecessors(label) {
                reach = reach.union(&f.image(&forward[pred])?)?;
            }
            next_forward.insert(label.clone(), core.intersect(&reach)?);

            let mut pull = RegionSet::empty(&core.space());
            for succ in system.successors(label) {
                pull = pull.union(&f.preimage(&backward[succ])?)?;
            }
            next_backward.insert(label.clone(), core.intersect(&pull)?);
        }
        forward = next_forward;
        backward = next_backward;
    }
    let mut out = BTreeMap::new();
    for label in system.labels() {
        out.insert(label.clone(), forward[label].intersect(&backward[label])?);
    }
    Ok(out)
}

/// Enclosure of the points whose first `n+1` iterates visit the cores
/// prescribed by the word: the exact intersection
/// `⋂_{i=0}^{n} f⁻ⁱ(I_{ω_i})`, optionally tightened by `refine_rounds` of
/// cyclic forward/backward refinement (the invariant-part refinement for
/// the periodic continuation of the word, run under single applications
/// of `f`).
pub fn word_core(
    system: &IndexSystem,
    f: &PLMap,
    word: &[Label],
    refine_rounds: u32,
) -> Result<RegionSet, IndexError> {
    assert!(!word.is_empty(), "word must be nonempty");
    system.check_allowable(word)?;
    let n = word.len();

    // Straight backward intersection.
    let mut slots: Vec<RegionSet> = word
        .iter()
        .map(|l| system.core(l).cloned())
        .collect::<Result<_, _>>()?;
    for i in (0..n.saturating_sub(1)).rev() {
        let pulled = f.preimage(&slots[i + 1])?;
        slots[i] = slots[i].intersect(&pulled)?;
    }

    // Optional cyclic refinement (word repeated periodically).
    for _ in 0..refine_rounds {
        let mut next = slots.clone();
        let mut changed = false;
        for i in 0..n {
            let succ = &slots[(i + 1) % n];
            let pred = &slots[(i + n - 1) % n];
            let refined = slots[i]
                .intersect(&f.preimage(succ)?)?
                .intersect(&f.image(pred)?)?;
            if refined != slots[i] {
                changed = true;
            }
            next[i] = refined;
        }
        slots = next;
        if !changed {
            break;
        }
    }
    Ok(slots.swap_remove(0))
}
