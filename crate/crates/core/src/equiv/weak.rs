//! Almost-sure weak steps, decided qualitatively on a phase product.
//!
//! A product state is a PLTS state paired with a phase: before or after the
//! visible action (a single phase for `tau`). At nondeterministic states the
//! scheduler may take a silent move, the visible move (switching phase) or
//! halt; at probabilistic states it may halt or let the distribution resolve.
//! Halting succeeds only in the final phase inside the target set.

use crate::plts::{Graph, LabelId, StateId, TAU};

pub(crate) struct PhaseProduct {
    pub n: usize,
    pub phases: usize,
    /// Per product state, the scheduler's options as successor supports.
    /// The success sink has index `n * phases`.
    pub options: Vec<Vec<Vec<usize>>>,
}

impl PhaseProduct {
    pub fn new<G: Graph>(g: &G, label: LabelId, in_target: &dyn Fn(StateId) -> bool) -> PhaseProduct {
        let n = g.num_states();
        let phases = if label == TAU { 1 } else { 2 };
        let sink = n * phases;
        let mut options = Vec::with_capacity(sink);
        for ph in 0..phases {
            for s in 0..n {
                let mut opts = Vec::new();
                if ph == phases - 1 && in_target(s) {
                    opts.push(vec![sink]);
                }
                if g.is_prob(s) {
                    let succ: Vec<usize> = g.prob_edges(s).iter().map(|(t, _)| ph * n + t).collect();
                    if !succ.is_empty() {
                        opts.push(succ);
                    }
                } else {
                    for &(l, t) in g.action_edges(s) {
                        if l == TAU {
                            opts.push(vec![ph * n + t]);
                        } else if l == label && ph == 0 {
                            opts.push(vec![n + t]);
                        }
                    }
                }
                options.push(opts);
            }
        }
        PhaseProduct { n, phases, options }
    }

    pub fn sink(&self) -> usize {
        self.n * self.phases
    }

    /// States from which some scheduler reaches the sink with probability one.
    pub fn almost_sure_winning(&self) -> Vec<bool> {
        let m = self.sink();
        let mut preds: Vec<Vec<(usize, usize)>> = vec![Vec::new(); m + 1];
        for (u, opts) in self.options.iter().enumerate() {
            for (k, supp) in opts.iter().enumerate() {
                for &v in supp {
                    preds[v].push((u, k));
                }
            }
        }
        let mut w = vec![true; m + 1];
        loop {
            // Options staying inside w.
            let valid: Vec<Vec<bool>> = self
                .options
                .iter()
                .map(|opts| opts.iter().map(|supp| supp.iter().all(|&v| w[v])).collect())
                .collect();
            let mut y = vec![false; m + 1];
            y[m] = true;
            let mut stack = vec![m];
            while let Some(v) = stack.pop() {
                for &(u, k) in &preds[v] {
                    if !y[u] && w[u] && valid[u][k] {
                        y[u] = true;
                        stack.push(u);
                    }
                }
            }
            if y == w {
                return w;
            }
            w = y;
        }
    }
}

/// States `s` from which a scheduler achieves, with probability one, a
/// computation in `tau* a tau*` (`tau*` when `label` is silent) halting in
/// the target set.
pub(crate) fn almost_sure_set<G: Graph>(
    g: &G,
    label: LabelId,
    in_target: &dyn Fn(StateId) -> bool,
) -> Vec<bool> {
    let prod = PhaseProduct::new(g, label, in_target);
    let w = prod.almost_sure_winning();
    w[..prod.n].to_vec()
}
