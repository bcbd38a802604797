//! Strong, weak and branching probabilistic bisimilarities, their
//! nondeterministic counterparts, and a brute-force oracle.

mod nondet;
pub mod oracle;
pub(crate) mod refine;
mod translate;
pub(crate) mod weak;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::plts::{Graph, LabelId, Plts, StateId};
use crate::syntax::{Action, Relation};
use refine::{branching_sigs, refine, silent_closure, strong_sigs, Mixing, Sig};

pub use nondet::{bisim_nondet, collapse_unit_states, Lts};
pub use oracle::{coarsest_by_enumeration, MAX_ORACLE_STATES};
pub use translate::{nd_translate, NdTranslation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EquivKind {
    StrongProb,
    StrongMix,
    WeakProb,
    BranchingProb,
    WeakNd,
    BranchingNd,
}

impl EquivKind {
    pub fn parse(s: &str) -> Option<EquivKind> {
        Some(match s {
            "p" => EquivKind::StrongProb,
            "pm" => EquivKind::StrongMix,
            "pw" => EquivKind::WeakProb,
            "pb" => EquivKind::BranchingProb,
            "w" => EquivKind::WeakNd,
            "b" => EquivKind::BranchingNd,
            _ => return None,
        })
    }

    pub fn short_name(self) -> &'static str {
        match self {
            EquivKind::StrongProb => "p",
            EquivKind::StrongMix => "pm",
            EquivKind::WeakProb => "pw",
            EquivKind::BranchingProb => "pb",
            EquivKind::WeakNd => "w",
            EquivKind::BranchingNd => "b",
        }
    }
}

impl From<Relation> for EquivKind {
    fn from(r: Relation) -> Self {
        match r {
            Relation::Pw => EquivKind::WeakProb,
            Relation::Pb => EquivKind::BranchingProb,
        }
    }
}

impl fmt::Display for EquivKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquivError {
    #[error("state {0} has a probabilistic transition that is not a unit-weight step")]
    HasProbabilisticTransitions(StateId),
    #[error("{0} states exceed the enumeration budget of 8")]
    TooLarge(usize),
    #[error("the valid partitions have no coarsest element")]
    NoCoarsest,
}

/// A partition of the states `0..n`, blocks ordered by least member.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    block_of: Vec<usize>,
    blocks: Vec<Vec<StateId>>,
}

impl Partition {
    /// Builds a partition from arbitrary block labels, one per state.
    pub fn from_labels(labels: &[usize]) -> Partition {
        let (block_of, count) = refine::normalize(labels);
        let mut blocks = vec![Vec::new(); count];
        for (s, &b) in block_of.iter().enumerate() {
            blocks[b].push(s);
        }
        Partition { block_of, blocks }
    }

    pub fn discrete(n: usize) -> Partition {
        Partition::from_labels(&(0..n).collect::<Vec<_>>())
    }

    pub fn block_of(&self, s: StateId) -> usize {
        self.block_of[s]
    }

    pub fn labels(&self) -> &[usize] {
        &self.block_of
    }

    pub fn blocks(&self) -> &[Vec<StateId>] {
        &self.blocks
    }

    pub fn block(&self, b: usize) -> BTreeSet<StateId> {
        self.blocks[b].iter().copied().collect()
    }

    pub fn same(&self, a: StateId, b: StateId) -> bool {
        self.block_of[a] == self.block_of[b]
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn num_states(&self) -> usize {
        self.block_of.len()
    }

    /// Whether every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        self.blocks
            .iter()
            .all(|b| b.iter().all(|&s| other.same(s, b[0])))
    }
}

impl fmt::Display for Partition {
    /// One line per block, member ids ascending.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.blocks {
            let ids: Vec<String> = b.iter().map(|s| s.to_string()).collect();
            writeln!(f, "{}", ids.join(" "))?;
        }
        Ok(())
    }
}

fn sort_labels<G: Graph>(g: &G) -> Vec<usize> {
    (0..g.num_states()).map(|s| g.is_prob(s) as usize).collect()
}

/// Coarsest strong probabilistic bisimulation; blocks never mix sorts.
pub fn strong_prob_bisim(p: &Plts) -> Partition {
    let labels = refine(p, &sort_labels(p), Mixing::Never, |b| strong_sigs(p, b));
    Partition::from_labels(&labels)
}

/// Coarsest strong mix-probabilistic bisimulation.
pub fn strong_mix_bisim(p: &Plts) -> Partition {
    let labels = refine(p, &vec![0; p.len()], Mixing::Free, |b| strong_sigs(p, b));
    Partition::from_labels(&labels)
}

/// Whether some scheduler from `s` performs, with probability one, a
/// computation with trace in `tau* a tau*` that halts inside `c`.
pub fn almost_sure_weak_step(p: &Plts, s: StateId, a: &Action, c: &BTreeSet<StateId>) -> bool {
    let Some(l) = p.label_id(a) else {
        // The action never occurs: only the silent case can succeed.
        return false;
    };
    weak::almost_sure_set(p, l, &|t| c.contains(&t))[s]
}

pub(crate) fn weak_prob_sigs<G: Graph>(g: &G, block: &[usize]) -> Vec<Sig> {
    let mut pairs: BTreeSet<(LabelId, usize)> = BTreeSet::new();
    for s in 0..g.num_states() {
        for &(l, t) in g.action_edges(s) {
            pairs.insert((l, block[t]));
        }
    }
    let mut sigs: Vec<Sig> = vec![Vec::new(); g.num_states()];
    for (l, c) in pairs {
        let win = weak::almost_sure_set(g, l, &|t| block[t] == c);
        for (s, ok) in win.into_iter().enumerate() {
            if ok {
                sigs[s].push((l, c));
            }
        }
    }
    sigs
}

/// Coarsest weak probabilistic bisimulation (blocks may mix sorts).
pub fn weak_prob_bisim(p: &Plts) -> Partition {
    let labels = refine(p, &vec![0; p.len()], Mixing::Matching, |b| weak_prob_sigs(p, b));
    Partition::from_labels(&labels)
}

/// Coarsest probabilistic branching bisimulation (blocks may mix sorts).
pub fn branching_prob_bisim(p: &Plts) -> Partition {
    let closure = silent_closure(p, true);
    let labels = refine(p, &vec![0; p.len()], Mixing::Matching, |b| branching_sigs(p, &closure, b));
    Partition::from_labels(&labels)
}

/// Dispatches on the kind; only the nondeterministic kinds can fail.
pub fn bisimulation(p: &Plts, kind: EquivKind) -> Result<Partition, EquivError> {
    Ok(match kind {
        EquivKind::StrongProb => strong_prob_bisim(p),
        EquivKind::StrongMix => strong_mix_bisim(p),
        EquivKind::WeakProb => weak_prob_bisim(p),
        EquivKind::BranchingProb => branching_prob_bisim(p),
        EquivKind::WeakNd | EquivKind::BranchingNd => bisim_nondet(p, kind)?,
    })
}

#[cfg(test)]
mod tests;
