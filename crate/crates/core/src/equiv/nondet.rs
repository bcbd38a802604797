//! Weak and branching bisimilarity on purely nondeterministic systems.

use num::{BigRational, One};

use super::refine::{branching_sigs, refine, silent_closure, weak_sigs, weak_successors, Mixing};
use super::{EquivError, EquivKind, Partition};
use crate::plts::{Graph, LabelId, Plts, StateId};

/// A labelled transition system over the nondeterministic states of a PLTS
/// whose probabilistic states are all unit-weight bookkeeping steps.
#[derive(Clone, Debug)]
pub struct Lts {
    /// PLTS id of every LTS state.
    pub origin: Vec<StateId>,
    /// LTS index of every PLTS state; probabilistic states map to their
    /// unique successor.
    pub index: Vec<usize>,
    edges: Vec<Vec<(LabelId, usize)>>,
}

impl Lts {
    pub fn edges(&self, s: usize) -> &[(LabelId, usize)] {
        &self.edges[s]
    }

    pub fn len(&self) -> usize {
        self.origin.len()
    }

    pub fn is_empty(&self) -> bool {
        self.origin.is_empty()
    }
}

impl Graph for Lts {
    fn num_states(&self) -> usize {
        self.origin.len()
    }

    fn is_prob(&self, _: StateId) -> bool {
        false
    }

    fn action_edges(&self, s: StateId) -> &[(LabelId, StateId)] {
        &self.edges[s]
    }

    fn prob_edges(&self, _: StateId) -> &[(StateId, BigRational)] {
        &[]
    }
}

/// Short-circuits every `<1: N>` state into `N`.
pub fn collapse_unit_states(p: &Plts) -> Result<Lts, EquivError> {
    let mut index = vec![usize::MAX; p.len()];
    let mut origin = Vec::new();
    for s in p.state_ids().filter(|&s| !p.is_prob(s)) {
        index[s] = origin.len();
        origin.push(s);
    }
    for s in p.state_ids().filter(|&s| p.is_prob(s)) {
        match p.probs(s) {
            [(t, w)] if w.is_one() => index[s] = index[*t],
            _ => return Err(EquivError::HasProbabilisticTransitions(s)),
        }
    }
    let edges = origin
        .iter()
        .map(|&s| p.actions(s).iter().map(|&(l, t)| (l, index[t])).collect())
        .collect();
    Ok(Lts { origin, index, edges })
}

/// Coarsest weak or branching bisimulation of the collapsed system, lifted
/// back to all PLTS states.
pub fn bisim_nondet(p: &Plts, kind: EquivKind) -> Result<Partition, EquivError> {
    let lts = collapse_unit_states(p)?;
    let init = vec![0; lts.len()];
    let closure = silent_closure(&lts, false);
    let labels = match kind {
        EquivKind::WeakNd => {
            let succ = weak_successors(&lts, &closure);
            refine(&lts, &init, Mixing::Never, |b| weak_sigs(&succ, b))
        }
        EquivKind::BranchingNd => {
            refine(&lts, &init, Mixing::Never, |b| branching_sigs(&lts, &closure, b))
        }
        other => panic!("bisim_nondet called with probabilistic kind {}", other),
    };
    let lifted: Vec<usize> = lts.index.iter().map(|&i| labels[i]).collect();
    Ok(Partition::from_labels(&lifted))
}
