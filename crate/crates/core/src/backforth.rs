//! Runs and weak probabilistic back-and-forth bisimilarity on bounded
//! unfoldings of acyclic systems.
//!
//! A run is a state together with the path that led to it. Runs form a tree
//! (a [`RunGraph`]); forward edges extend a run by one transition, and every
//! run reached by an action edge remembers that edge as its incoming one.
//! Probabilistic edges are only ever followed forward.

use std::collections::BTreeSet;

use num::BigRational;
use thiserror::Error;

use crate::equiv::refine::{refine, silent_closure, weak_successors, Mixing, Sig};
use crate::equiv::{branching_prob_bisim, Partition};
use crate::plts::{Graph, LabelId, Plts, StateId, TAU};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BackforthError {
    #[error("state {0} lies on a cycle; runs cannot be unfolded exactly")]
    DepthInsufficientForCycles(StateId),
    #[error("state {0} does not exist")]
    UnknownState(StateId),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepLabel {
    Action(LabelId),
    Prob(BigRational),
}

/// One transition `(source, label, target)` of a path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub source: StateId,
    pub label: StepLabel,
    pub target: StateId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Run {
    pub origin: StateId,
    pub path: Vec<Step>,
}

impl Run {
    pub fn empty(s: StateId) -> Run {
        Run { origin: s, path: Vec::new() }
    }

    pub fn first(&self) -> StateId {
        self.origin
    }

    pub fn last(&self) -> StateId {
        self.path.last().map_or(self.origin, |st| st.target)
    }

    pub fn len(&self) -> usize {
        self.path.len()
    }

    pub fn is_empty(&self) -> bool {
        self.path.is_empty()
    }
}

#[derive(Clone, Debug)]
struct Node {
    origin: StateId,
    last: StateId,
    prob: bool,
    parent: Option<(usize, StepLabel)>,
}

/// All runs up to a depth, with forward action and probabilistic edges and
/// the incoming action edge of each run.
#[derive(Clone, Debug)]
pub struct RunGraph {
    nodes: Vec<Node>,
    actions: Vec<Vec<(LabelId, usize)>>,
    probs: Vec<Vec<(usize, BigRational)>>,
    roots: Vec<usize>,
    complete: bool,
}

impl RunGraph {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Node index of the empty run of each requested root, in input order.
    pub fn roots(&self) -> &[usize] {
        &self.roots
    }

    /// Whether no run was cut off by the depth bound.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn last(&self, r: usize) -> StateId {
        self.nodes[r].last
    }

    pub fn origin(&self, r: usize) -> StateId {
        self.nodes[r].origin
    }

    pub fn parent(&self, r: usize) -> Option<usize> {
        self.nodes[r].parent.as_ref().map(|(q, _)| *q)
    }

    /// The action edge `parent --l--> r`, if `r` was reached by one.
    pub fn incoming(&self, r: usize) -> Option<(usize, LabelId)> {
        match &self.nodes[r].parent {
            Some((q, StepLabel::Action(l))) => Some((*q, *l)),
            _ => None,
        }
    }

    pub fn run(&self, r: usize) -> Run {
        let mut path = Vec::new();
        let mut cur = r;
        while let Some((q, label)) = &self.nodes[cur].parent {
            path.push(Step {
                source: self.nodes[*q].last,
                label: label.clone(),
                target: self.nodes[cur].last,
            });
            cur = *q;
        }
        path.reverse();
        Run { origin: self.nodes[r].origin, path }
    }
}

impl Graph for RunGraph {
    fn num_states(&self) -> usize {
        self.nodes.len()
    }

    fn is_prob(&self, s: StateId) -> bool {
        self.nodes[s].prob
    }

    fn action_edges(&self, s: StateId) -> &[(LabelId, StateId)] {
        &self.actions[s]
    }

    fn prob_edges(&self, s: StateId) -> &[(StateId, BigRational)] {
        &self.probs[s]
    }
}

/// Length of the longest path from any of `roots`, or the first state found
/// on a cycle.
pub fn longest_path(p: &Plts, roots: &[StateId]) -> Result<usize, BackforthError> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Open,
        Done(usize),
    }
    let mut mark = vec![Mark::New; p.len()];
    let mut best = 0;
    for &r in roots {
        if r >= p.len() {
            return Err(BackforthError::UnknownState(r));
        }
        // Iterative post-order DFS.
        let mut stack = vec![(r, false)];
        while let Some((u, expanded)) = stack.pop() {
            if expanded {
                let succ = p.actions(u).iter().map(|&(_, t)| t).chain(p.probs(u).iter().map(|(t, _)| *t));
                let h = succ
                    .map(|t| match mark[t] {
                        Mark::Done(h) => h + 1,
                        _ => unreachable!(),
                    })
                    .max()
                    .unwrap_or(0);
                mark[u] = Mark::Done(h);
                continue;
            }
            match mark[u] {
                Mark::Done(_) => continue,
                Mark::Open => return Err(BackforthError::DepthInsufficientForCycles(u)),
                Mark::New => {}
            }
            mark[u] = Mark::Open;
            stack.push((u, true));
            let succ = p.actions(u).iter().map(|&(_, t)| t).chain(p.probs(u).iter().map(|(t, _)| *t));
            for t in succ {
                match mark[t] {
                    Mark::Open => return Err(BackforthError::DepthInsufficientForCycles(t)),
                    Mark::New => stack.push((t, false)),
                    Mark::Done(_) => {}
                }
            }
        }
        if let Mark::Done(h) = mark[r] {
            best = best.max(h);
        }
    }
    Ok(best)
}

/// All runs of length at most `depth` from each root. Cyclic systems are
/// refused, since no finite depth covers them.
pub fn unfold_runs(p: &Plts, roots: &[StateId], depth: usize) -> Result<RunGraph, BackforthError> {
    let needed = longest_path(p, roots)?;
    let mut g = RunGraph {
        nodes: Vec::new(),
        actions: Vec::new(),
        probs: Vec::new(),
        roots: Vec::new(),
        complete: depth >= needed,
    };
    let push = |g: &mut RunGraph, node: Node| {
        g.nodes.push(node);
        g.actions.push(Vec::new());
        g.probs.push(Vec::new());
        g.nodes.len() - 1
    };
    for &r in roots {
        let root = push(&mut g, Node { origin: r, last: r, prob: p.is_prob(r), parent: None });
        g.roots.push(root);
        let mut frontier = vec![root];
        for _ in 0..depth {
            let mut next = Vec::new();
            for q in frontier {
                let s = g.nodes[q].last;
                for &(l, t) in p.actions(s) {
                    let c = push(&mut g, Node { origin: r, last: t, prob: p.is_prob(t), parent: Some((q, StepLabel::Action(l))) });
                    g.actions[q].push((l, c));
                    next.push(c);
                }
                for (t, w) in p.probs(s) {
                    let c = push(&mut g, Node { origin: r, last: *t, prob: p.is_prob(*t), parent: Some((q, StepLabel::Prob(w.clone()))) });
                    g.probs[q].push((c, w.clone()));
                    next.push(c);
                }
            }
            frontier = next;
        }
    }
    Ok(g)
}

/// `(a, ancestor)` for every ancestor run `q` (the run itself included)
/// with `q ⇒â r`: the action labels on the segment read `tau* a tau*`, or
/// only `tau` when `a` is `tau`.
fn backward_moves(g: &RunGraph, r: usize) -> Vec<(LabelId, usize)> {
    let mut out = vec![(TAU, r)];
    let mut visible: Option<LabelId> = None;
    let mut cur = r;
    while let Some((q, label)) = &g.nodes[cur].parent {
        if let StepLabel::Action(l) = label {
            if *l != TAU {
                if visible.is_some() {
                    break;
                }
                visible = Some(*l);
            }
        }
        out.push((visible.unwrap_or(TAU), *q));
        cur = *q;
    }
    out
}

fn pbf_partition(g: &RunGraph, backward: bool) -> Partition {
    let closure = silent_closure(g, true);
    let forward = weak_successors(g, &closure);
    let back: Vec<Vec<(LabelId, usize)>> = if backward {
        (0..g.len()).map(|r| backward_moves(g, r)).collect()
    } else {
        vec![Vec::new(); g.len()]
    };
    let sigs = |block: &[usize]| -> Vec<Sig> {
        (0..g.len())
            .map(|r| {
                let fw = forward[r].iter().map(|&(l, t)| (2 * l, block[t]));
                let bw = back[r].iter().map(|&(l, q)| (2 * l + 1, block[q]));
                fw.chain(bw).collect::<BTreeSet<_>>().into_iter().collect()
            })
            .collect()
    };
    let labels = refine(g, &vec![0; g.len()], Mixing::Matching, sigs);
    Partition::from_labels(&labels)
}

/// Coarsest weak probabilistic back-and-forth bisimulation over the runs of
/// `g`. Incoming action edges are matched by saturated backward moves;
/// incoming probabilistic edges carry no obligation.
pub fn weak_pbf_bisim(g: &RunGraph) -> Partition {
    pbf_partition(g, true)
}

/// The same game with the backward clause dropped.
pub fn weak_pf_bisim(g: &RunGraph) -> Partition {
    pbf_partition(g, false)
}

/// Whether two states are back-and-forth bisimilar, by comparing their empty
/// runs in the full unfolding.
pub fn pbf_related(p: &Plts, s1: StateId, s2: StateId) -> Result<bool, BackforthError> {
    let depth = longest_path(p, &[s1, s2])?;
    let g = unfold_runs(p, &[s1, s2], depth)?;
    Ok(weak_pbf_bisim(&g).same(g.roots()[0], g.roots()[1]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CrossCheck {
    pub pbf: bool,
    pub pb: bool,
    pub agree: bool,
}

/// Compares back-and-forth bisimilarity of `s1`, `s2` (over runs of length at
/// most `depth`) with probabilistic branching bisimilarity.
pub fn crosscheck_branching(p: &Plts, s1: StateId, s2: StateId, depth: usize) -> Result<CrossCheck, BackforthError> {
    let g = unfold_runs(p, &[s1, s2], depth)?;
    let pbf = weak_pbf_bisim(&g).same(g.roots()[0], g.roots()[1]);
    let pb = branching_prob_bisim(p).same(s1, s2);
    Ok(CrossCheck { pbf, pb, agree: pbf == pb })
}

/// Pairs of runs violating the cross property in `part`: `r1 ⇒ x1`,
/// `r2 ⇒ x2` with `r1 ~ x2`, `x1 ~ r2`, nondeterministic endpoints, and
/// `x1`, `x2` in different blocks.
pub fn cross_property_violations(g: &RunGraph, part: &Partition) -> Vec<(usize, usize)> {
    let closure = silent_closure(g, true);
    let mut out = Vec::new();
    for r1 in 0..g.len() {
        for r2 in 0..g.len() {
            for &x1 in &closure[r1] {
                if g.is_prob(x1) || !part.same(x1, r2) {
                    continue;
                }
                for &x2 in &closure[r2] {
                    if !g.is_prob(x2) && part.same(r1, x2) && !part.same(x1, x2) {
                        out.push((x1, x2));
                    }
                }
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}
