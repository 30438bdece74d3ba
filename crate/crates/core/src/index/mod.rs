//! Index systems: collections of compact pairs linked by a precedes
//! relation, verified exactly.
//!
//! An edge `(a, b)` passes when (a) the image of the core of `P_a` lies in
//! the interior of `N_b` (the core-image form of "L_a is a neighborhood of
//! the exit set"), and (b) `f(L_a)` misses the core of `P_b`. The chain
//! condition is checked through the sufficient per-edge criterion
//! `I_a ∩ f⁻¹(I_b) ⊆ Int(I_a)`; a failure of that criterion alone leaves
//! the system UNDECIDED rather than FAILED.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

mod refine;

pub use refine::{inv_m, word_core};

use crate::dynamics::{DynamicsError, PLMap};
use crate::geometry::{CompactPair, GeometryError, Label, RegionSet, Space};

#[derive(Debug, Error)]
pub enum IndexError {
    #[error("index system must contain at least one pair")]
    EmptySystem,
    #[error("duplicate label `{0}`")]
    DuplicateLabel(Label),
    #[error("edge ({from}, {to}) references an unknown label")]
    DanglingEdge { from: Label, to: Label },
    #[error("pairs live in different spaces")]
    MixedSpaces,
    #[error("unknown label `{0}`")]
    UnknownLabel(Label),
    #[error("word is not allowable: ({from}, {to}) is not an edge")]
    NonAllowableWord { from: Label, to: Label },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

/// A finite collection of compact pairs with a declared precedes relation.
#[derive(Clone, Debug)]
pub struct IndexSystem {
    space: Space,
    pairs: BTreeMap<Label, CompactPair>,
    cores: BTreeMap<Label, RegionSet>,
    edges: BTreeSet<(Label, Label)>,
}

impl IndexSystem {
    pub fn new(
        pairs: Vec<CompactPair>,
        edges: Vec<(Label, Label)>,
    ) -> Result<Self, IndexError> {
        let mut map = BTreeMap::new();
        let mut space: Option<Space> = None;
        for pair in pairs {
            match &space {
                None => space = Some(pair.space()),
                Some(s) => {
                    if *s != pair.space() {
                        return Err(IndexError::MixedSpaces);
                    }
                }
            }
            let label = pair.label.clone();
            if map.insert(label.clone(), pair).is_some() {
                return Err(IndexError::DuplicateLabel(label));
            }
        }
        let space = space.ok_or(IndexError::EmptySystem)?;
        let mut edge_set = BTreeSet::new();
        for (from, to) in edges {
            if !map.contains_key(&from) || !map.contains_key(&to) {
                return Err(IndexError::DanglingEdge { from, to });
            }
            edge_set.insert((from, to));
        }
        let cores = map
            .iter()
            .map(|(label, pair)| (label.clone(), pair.core()))
            .collect();
        Ok(IndexSystem {
            space,
            pairs: map,
            cores,
            edges: edge_set,
        })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn labels(&self) -> impl Iterator<Item = &Label> {
        self.pairs.keys()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pair(&self, label: &Label) -> Result<&CompactPair, IndexError> {
        self.pairs
            .get(label)
            .ok_or_else(|| IndexError::UnknownLabel(label.clone()))
    }

    pub fn pairs(&self) -> impl Iterator<Item = &CompactPair> {
        self.pairs.values()
    }

    /// The core `cl(N_a \ L_a)`, precomputed at construction.
    pub fn core(&self, label: &Label) -> Result<&RegionSet, IndexError> {
        self.cores
            .get(label)
            .ok_or_else(|| IndexError::UnknownLabel(label.clone()))
    }

    pub fn edges(&self) -> impl Iterator<Item = &(Label, Label)> {
        self.edges.iter()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, from: &Label, to: &Label) -> bool {
        self.edges.contains(&(from.clone(), to.clone()))
    }

    pub fn successors<'a>(&'a self, label: &'a Label) -> impl Iterator<Item = &'a Label> {
        self.edges
            .iter()
            .filter(move |(a, _)| a == label)
            .map(|(_, b)| b)
    }

    pub fn predecessors<'a>(&'a self, label: &'a Label) -> impl Iterator<Item = &'a Label> {
        self.edges
            .iter()
            .filter(move |(_, b)| b == label)
            .map(|(a, _)| a)
    }

    /// Check that consecutive labels are edges.
    pub fn check_allowable(&self, word: &[Label]) -> Result<(), IndexError> {
        for label in word {
            self.pair(label)?;
        }
        for w in word.windows(2) {
            if !self.has_edge(&w[0], &w[1]) {
                return Err(IndexError::NonAllowableWord {
                    from: w[0].clone(),
                    to: w[1].clone(),
                });
            }
        }
        Ok(())
    }
}

/// Outcome of one exact set condition, with the offending region on failure.
#[derive(Clone, Debug)]
pub struct ConditionCheck {
    pub pass: bool,
    pub witness: Option<RegionSet>,
}

impl ConditionCheck {
    fn pass() -> Self {
        ConditionCheck {
            pass: true,
            witness: None,
        }
    }

    fn fail(witness: RegionSet) -> Self {
        ConditionCheck {
            pass: false,
            witness: Some(witness),
        }
    }
}

/// Both halves of the precedes check for one edge.
#[derive(Clone, Debug)]
pub struct PrecedesCheck {
    pub condition_a: ConditionCheck,
    pub condition_b: ConditionCheck,
}

impl PrecedesCheck {
    pub fn pass(&self) -> bool {
        self.condition_a.pass && self.condition_b.pass
    }
}

#[derive(Clone, Debug)]
pub struct EdgeReport {
    pub edge: (Label, Label),
    pub precedes: PrecedesCheck,
    /// Per-edge chain-isolation criterion; only evaluated when the
    /// precedes conditions hold on every edge.
    pub chain: Option<ConditionCheck>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Verdict {
    Verified,
    Failed,
    /// Every precedes condition holds but the sufficient chain criterion
    /// failed somewhere; the system may still satisfy the chain condition.
    Undecided,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Verified => write!(f, "VERIFIED"),
            Verdict::Failed => write!(f, "FAILED"),
            Verdict::Undecided => write!(f, "UNDECIDED"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub verdict: Verdict,
    pub edge_reports: Vec<EdgeReport>,
    pub structural_issues: Vec<String>,
    /// Pairs with empty core: vacuously consistent, but worth surfacing.
    pub degenerate_pairs: Vec<Label>,
}

/// The exit set `N_a ∩ f⁻¹(X \ Int N_b)`, computed exactly as a closed set.
pub fn exit_set(
    pair_a: &CompactPair,
    n_b: &RegionSet,
    f: &PLMap,
) -> Result<RegionSet, IndexError> {
    let image = f.image(pair_a.n())?;
    if n_b.is_empty() {
        return Ok(pair_a.n().clone());
    }
    let window = image.union(n_b)?;
    let complement = n_b.complement_of_interior_within(&window)?;
    let pre = f.preimage(&complement)?;
    Ok(pair_a.n().intersect(&pre)?)
}

/// Conditions 1(a) and 1(b) for the edge `P_a → P_b`.
pub fn check_precedes(
    pair_a: &CompactPair,
    pair_b: &CompactPair,
    f: &PLMap,
) -> Result<PrecedesCheck, IndexError> {
    let core_a = pair_a.core();
    let core_b = pair_b.core();

    // (a) image of the core stays interior to N_b.
    let image_core = f.image(&core_a)?;
    let condition_a = if image_core.subset_of_interior(pair_b.n())? {
        ConditionCheck::pass()
    } else {
        let window = image_core.union(pair_b.n())?;
        let complement = pair_b.n().complement_of_interior_within(&window)?;
        ConditionCheck::fail(image_core.intersect(&complement)?)
    };

    // (b) the image of L_a misses the core of P_b.
    let image_l = f.image(pair_a.l())?;
    let meet = image_l.intersect(&core_b)?;
    let condition_b = if meet.is_empty() {
        ConditionCheck::pass()
    } else {
        ConditionCheck::fail(meet)
    };

    Ok(PrecedesCheck {
        condition_a,
        condition_b,
    })
}

/// Sufficient chain-isolation criterion for one edge:
/// `I_a ∩ f⁻¹(I_b) ⊆ Int(I_a)`.
pub fn check_chain_edge(
    core_a: &RegionSet,
    core_b: &RegionSet,
    f: &PLMap,
) -> Result<ConditionCheck, IndexError> {
    let pulled = core_a.intersect(&f.preimage(core_b)?)?;
    if pulled.subset_of_interior(core_a)? {
        Ok(ConditionCheck::pass())
    } else {
        let window = pulled.union(core_a)?;
        let complement = core_a.complement_of_interior_within(&window)?;
        Ok(ConditionCheck::fail(pulled.intersect(&complement)?))
    }
}

/// Sufficient criterion over all declared edges.
pub fn check_chain_isolation(
    system: &IndexSystem,
    f: &PLMap,
) -> Result<Vec<((Label, Label), ConditionCheck)>, IndexError> {
    let mut out = Vec::new();
    for (a, b) in system.edges() {
        let check = check_chain_edge(system.core(a)?, system.core(b)?, f)?;
        out.push(((a.clone(), b.clone()), check));
    }
    Ok(out)
}

/// Full verification: structural checks, every declared edge, then the
/// chain criterion.
pub fn verify(system: &IndexSystem, f: &PLMap) -> Result<VerificationReport, IndexError> {
    let mut structural_issues = Vec::new();
    for label in system.labels() {
        if system.successors(label).next().is_none() {
            structural_issues.push(format!(
                "pair `{label}` has no outgoing edge (condition 1 requires at least one)"
            ));
        }
    }
    let degenerate_pairs: Vec<Label> = system
        .labels()
        .filter(|l| system.core(l).map(|c| c.is_empty()).unwrap_or(false))
        .cloned()
        .collect();

    let mut edge_reports = Vec::new();
    let mut precedes_ok = true;
    for (a, b) in system.edges() {
        let precedes = check_precedes(system.pair(a)?, system.pair(b)?, f)?;
        precedes_ok &= precedes.pass();
        edge_reports.push(EdgeReport {
            edge: (a.clone(), b.clone()),
            precedes,
            chain: None,
        });
    }

    let mut chain_ok = true;
    if precedes_ok && structural_issues.is_empty() {
        for report in edge_reports.iter_mut() {
            let (a, b) = &report.edge;
            let check = check_chain_edge(system.core(a)?, system.core(b)?, f)?;
            chain_ok &= check.pass;
            report.chain = Some(check);
        }
    }

    let verdict = if !precedes_ok || !structural_issues.is_empty() {
        Verdict::Failed
    } else if !chain_ok {
        Verdict::Undecided
    } else {
        Verdict::Verified
    };
    Ok(VerificationReport {
        verdict,
        edge_reports,
        structural_issues,
        degenerate_pairs,
    })
}

#[cfg(test)]
mod tests;
