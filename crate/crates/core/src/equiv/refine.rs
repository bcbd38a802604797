//! Signature-based partition refinement over alternating graphs.
//!
//! Every round splits each block by a per-state signature. Nondeterministic
//! states are grouped by (block, signature). A probabilistic state either
//! joins the nondeterministic group it reaches with probability one, when
//! the kind allows mixed blocks, or is keyed by (block, signature,
//! distribution over nondeterministic groups).

use std::collections::HashMap;

use num::{BigRational, One};

use crate::plts::{Graph, LabelId, StateId, TAU};

pub(crate) type Sig = Vec<(usize, usize)>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Mixing {
    /// Blocks never mix sorts.
    Never,
    /// A probabilistic state concentrated on a group may join it.
    Free,
    /// As `Free`, but only when the signatures also agree.
    Matching,
}

/// Renumbers block ids so blocks are ordered by their least member.
pub(crate) fn normalize(ids: &[usize]) -> (Vec<usize>, usize) {
    let mut map = HashMap::new();
    let out = ids
        .iter()
        .map(|&b| {
            let next = map.len();
            *map.entry(b).or_insert(next)
        })
        .collect();
    (out, map.len())
}

pub(crate) fn refine<G: Graph>(
    g: &G,
    init: &[usize],
    mixing: Mixing,
    mut sig: impl FnMut(&[usize]) -> Vec<Sig>,
) -> Vec<usize> {
    let n = g.num_states();
    let (mut block, mut count) = normalize(init);
    loop {
        let sigs = sig(&block);
        let mut nkeys: HashMap<(usize, &Sig), usize> = HashMap::new();
        let mut group = vec![usize::MAX; n];
        let mut group_rep: Vec<StateId> = Vec::new();
        for s in 0..n {
            if !g.is_prob(s) {
                let next = nkeys.len();
                let id = *nkeys.entry((block[s], &sigs[s])).or_insert(next);
                if id == group_rep.len() {
                    group_rep.push(s);
                }
                group[s] = id;
            }
        }
        let base = group_rep.len();
        let mut pkeys: HashMap<(usize, &Sig, Vec<(usize, BigRational)>), usize> = HashMap::new();
        let mut next = group.clone();
        for s in 0..n {
            if !g.is_prob(s) {
                continue;
            }
            let mut dist: Vec<(usize, BigRational)> = Vec::new();
            for (t, w) in g.prob_edges(s) {
                let gid = group[*t];
                match dist.iter_mut().find(|(x, _)| *x == gid) {
                    Some((_, acc)) => *acc += w,
                    None => dist.push((gid, w.clone())),
                }
            }
            dist.sort_by_key(|(x, _)| *x);
            let join = match mixing {
                Mixing::Never => None,
                _ if dist.len() == 1 && dist[0].1.is_one() => {
                    let x = dist[0].0;
                    let rep = group_rep[x];
                    let same_block = block[rep] == block[s];
                    let sig_ok = mixing == Mixing::Free || sigs[rep] == sigs[s];
                    (same_block && sig_ok).then_some(x)
                }
                _ => None,
            };
            next[s] = match join {
                Some(x) => x,
                None => {
                    let k = pkeys.len();
                    base + *pkeys.entry((block[s], &sigs[s], dist)).or_insert(k)
                }
            };
        }
        let (next, next_count) = normalize(&next);
        if next_count == count {
            return block;
        }
        block = next;
        count = next_count;
    }
}

/// Signature of direct moves: `{(label, block of target)}`.
pub(crate) fn strong_sigs<G: Graph>(g: &G, block: &[usize]) -> Vec<Sig> {
    (0..g.num_states())
        .map(|s| {
            let mut v: Sig = g.action_edges(s).iter().map(|&(l, t)| (l, block[t])).collect();
            v.sort_unstable();
            v.dedup();
            v
        })
        .collect()
}

/// For every state, the states reachable through silent action edges and
/// (when `through_prob`) probabilistic edges, itself included.
pub(crate) fn silent_closure<G: Graph>(g: &G, through_prob: bool) -> Vec<Vec<StateId>> {
    let n = g.num_states();
    (0..n)
        .map(|s| {
            let mut seen = vec![false; n];
            seen[s] = true;
            let mut stack = vec![s];
            let mut out = Vec::new();
            while let Some(u) = stack.pop() {
                out.push(u);
                let taus = g.action_edges(u).iter().filter(|(l, _)| *l == TAU).map(|&(_, t)| t);
                let probs = g.prob_edges(u).iter().filter(|_| through_prob).map(|(t, _)| *t);
                for t in taus.chain(probs) {
                    if !seen[t] {
                        seen[t] = true;
                        stack.push(t);
                    }
                }
            }
            out.sort_unstable();
            out
        })
        .collect()
}

/// Targets of `s ⇒ --l--> ⇒` for every label (and `s` itself under `TAU`).
pub(crate) fn weak_successors<G: Graph>(g: &G, closure: &[Vec<StateId>]) -> Vec<Vec<(LabelId, StateId)>> {
    (0..g.num_states())
        .map(|s| {
            let mut out: Vec<(LabelId, StateId)> = closure[s].iter().map(|&t| (TAU, t)).collect();
            for &u in &closure[s] {
                for &(l, t) in g.action_edges(u) {
                    for &v in &closure[t] {
                        out.push((l, v));
                    }
                }
            }
            out.sort_unstable();
            out.dedup();
            out
        })
        .collect()
}

pub(crate) fn weak_sigs(succ: &[Vec<(LabelId, StateId)>], block: &[usize]) -> Vec<Sig> {
    succ.iter()
        .map(|v| {
            let mut sig: Sig = v.iter().map(|&(l, t)| (l, block[t])).collect();
            sig.sort_unstable();
            sig.dedup();
            sig
        })
        .collect()
}

/// Branching signature: moves from states reachable silently inside the
/// current block, minus inert silent moves.
pub(crate) fn branching_sigs<G: Graph>(g: &G, closure: &[Vec<StateId>], block: &[usize]) -> Vec<Sig> {
    (0..g.num_states())
        .map(|s| {
            let mut sig: Sig = Vec::new();
            for &u in closure[s].iter().filter(|&&u| block[u] == block[s]) {
                for &(l, t) in g.action_edges(u) {
                    if !(l == TAU && block[t] == block[s]) {
                        sig.push((l, block[t]));
                    }
                }
            }
            sig.sort_unstable();
            sig.dedup();
            sig
        })
        .collect()
}
