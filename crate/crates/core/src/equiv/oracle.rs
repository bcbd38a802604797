//! Exhaustive reference implementation for small systems.
//!
//! Every equivalence relation on the state set is enumerated and checked
//! literally against the definition of the requested kind. The scheduler
//! clause of weak probabilistic bisimilarity is decided by enumerating
//! memoryless deterministic strategies and inspecting the induced Markov
//! chain. Nothing here shares code with the refinement engines.

use std::collections::HashMap;

use num::{BigRational, One};

use super::nondet::collapse_unit_states;
use super::{EquivError, EquivKind, Partition};
use crate::plts::{LabelId, Plts, StateId, TAU};

pub const MAX_ORACLE_STATES: usize = 8;

/// All set partitions of `0..n` as restricted growth strings.
pub fn all_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(i: usize, n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max {
            cur.push(b);
            go(i + 1, n, if b == max { max + 1 } else { max }, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, 0, &mut Vec::new(), &mut out);
    out
}

/// Plain adjacency of a system under test.
struct Sys {
    prob: Vec<bool>,
    act: Vec<Vec<(LabelId, StateId)>>,
    dist: Vec<Vec<(StateId, BigRational)>>,
}

impl Sys {
    fn from_plts(p: &Plts) -> Sys {
        Sys {
            prob: p.state_ids().map(|s| p.is_prob(s)).collect(),
            act: p.state_ids().map(|s| p.actions(s).to_vec()).collect(),
            dist: p.state_ids().map(|s| p.probs(s).to_vec()).collect(),
        }
    }

    fn len(&self) -> usize {
        self.prob.len()
    }

    /// States reachable by silent action and probabilistic steps.
    fn silent_reach(&self, s: StateId, through_prob: bool) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(u) = stack.pop() {
            let mut next: Vec<StateId> = self.act[u].iter().filter(|(l, _)| *l == TAU).map(|e| e.1).collect();
            if through_prob {
                next.extend(self.dist[u].iter().map(|e| e.0));
            }
            for t in next {
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        seen
    }

    /// Probability mass `s` assigns to each block (`prob` lifted to blocks).
    fn prob_vector(&self, s: StateId, blk: &[usize]) -> Vec<BigRational> {
        let nblocks = blk.iter().max().map_or(0, |m| m + 1);
        let mut v = vec![BigRational::from_integer(0.into()); nblocks];
        if self.prob[s] {
            for (t, w) in &self.dist[s] {
                v[blk[*t]] += w;
            }
        } else {
            v[blk[s]] = BigRational::one();
        }
        v
    }
}

/// Decides the scheduler clause by strategy enumeration.
struct SchedulerOracle<'a> {
    sys: &'a Sys,
    cache: HashMap<(StateId, LabelId, u32), bool>,
}

#[derive(Clone)]
enum Opt {
    Halt,
    Go(Vec<usize>),
}

impl<'a> SchedulerOracle<'a> {
    /// Does some memoryless scheduler from `s` reach, with probability one,
    /// a halt inside `mask` after a `tau* l tau*` trace?
    fn exists(&mut self, s: StateId, l: LabelId, mask: u32) -> bool {
        if let Some(&b) = self.cache.get(&(s, l, mask)) {
            return b;
        }
        let n = self.sys.len();
        let phases = if l == TAU { 1 } else { 2 };
        let mut options: Vec<Vec<Opt>> = Vec::with_capacity(n * phases);
        for ph in 0..phases {
            for u in 0..n {
                let mut o = Vec::new();
                if ph + 1 == phases && mask & (1 << u) != 0 {
                    o.push(Opt::Halt);
                }
                if self.sys.prob[u] {
                    if !self.sys.dist[u].is_empty() {
                        o.push(Opt::Go(self.sys.dist[u].iter().map(|(t, _)| ph * n + t).collect()));
                    }
                } else {
                    for &(m, t) in &self.sys.act[u] {
                        if m == TAU {
                            o.push(Opt::Go(vec![ph * n + t]));
                        } else if m == l && ph == 0 {
                            o.push(Opt::Go(vec![n + t]));
                        }
                    }
                }
                options.push(o);
            }
        }
        let mut choice = vec![None; options.len()];
        let res = search(&options, s, &mut choice);
        self.cache.insert((s, l, mask), res);
        res
    }
}

/// Depth-first search over choices at reachable product states.
fn search(options: &[Vec<Opt>], start: usize, choice: &mut Vec<Option<usize>>) -> bool {
    let m = options.len();
    // Reachable part under the current partial strategy.
    let mut seen = vec![false; m];
    let mut order = vec![start];
    seen[start] = true;
    let mut i = 0;
    let mut open = None;
    while i < order.len() {
        let u = order[i];
        i += 1;
        if options[u].is_empty() {
            return false; // stuck without success, reached with positive probability
        }
        match choice[u] {
            None => {
                if open.is_none() {
                    open = Some(u);
                }
            }
            Some(k) => {
                if let Opt::Go(supp) = &options[u][k] {
                    for &v in supp {
                        if !seen[v] {
                            seen[v] = true;
                            order.push(v);
                        }
                    }
                }
            }
        }
    }
    if let Some(u) = open {
        for k in 0..options[u].len() {
            choice[u] = Some(k);
            if search(options, start, choice) {
                choice[u] = None;
                return true;
            }
        }
        choice[u] = None;
        return false;
    }
    // Fully determined Markov chain: success with probability one iff
    // every reachable state can still reach a successful halt.
    let mut good = vec![false; m];
    for &u in &order {
        if matches!(options[u][choice[u].unwrap()], Opt::Halt) {
            good[u] = true;
        }
    }
    loop {
        let mut changed = false;
        for &u in &order {
            if good[u] {
                continue;
            }
            if let Opt::Go(supp) = &options[u][choice[u].unwrap()] {
                if supp.iter().any(|&v| good[v]) {
                    good[u] = true;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    order.iter().all(|&u| good[u])
}

fn check_partition(kind: EquivKind, sys: &Sys, blk: &[usize], sched: &mut SchedulerOracle<'_>) -> bool {
    let n = sys.len();
    let mask_of = |b: usize| -> u32 { (0..n).filter(|&u| blk[u] == b).fold(0, |m, u| m | (1 << u)) };
    let reach_prob: Vec<Vec<bool>> = match kind {
        EquivKind::BranchingProb => (0..n).map(|s| sys.silent_reach(s, true)).collect(),
        EquivKind::BranchingNd | EquivKind::WeakNd => (0..n).map(|s| sys.silent_reach(s, false)).collect(),
        _ => Vec::new(),
    };
    for s1 in 0..n {
        for s2 in 0..n {
            if s1 == s2 || blk[s1] != blk[s2] {
                continue;
            }
            match kind {
                EquivKind::StrongProb => {
                    if sys.prob[s1] != sys.prob[s2] {
                        return false;
                    }
                    if !sys.prob[s1] && !strong_match(sys, s1, s2, blk) {
                        return false;
                    }
                    if sys.prob[s1] && sys.prob_vector(s1, blk) != sys.prob_vector(s2, blk) {
                        return false;
                    }
                }
                EquivKind::StrongMix => {
                    if !sys.prob[s1] && !sys.prob[s2] && !strong_match(sys, s1, s2, blk) {
                        return false;
                    }
                    if sys.prob_vector(s1, blk) != sys.prob_vector(s2, blk) {
                        return false;
                    }
                }
                EquivKind::WeakProb => {
                    for &(l, t) in &sys.act[s1] {
                        if !sched.exists(s2, l, mask_of(blk[t])) {
                            return false;
                        }
                    }
                    if sys.prob_vector(s1, blk) != sys.prob_vector(s2, blk) {
                        return false;
                    }
                }
                EquivKind::BranchingProb | EquivKind::BranchingNd => {
                    for &(l, t) in &sys.act[s1] {
                        let inert = l == TAU && blk[t] == blk[s1];
                        let answered = (0..n).any(|u| {
                            reach_prob[s2][u]
                                && blk[u] == blk[s1]
                                && sys.act[u].iter().any(|&(m, v)| m == l && blk[v] == blk[t])
                        });
                        if !inert && !answered {
                            return false;
                        }
                    }
                    if kind == EquivKind::BranchingProb
                        && sys.prob_vector(s1, blk) != sys.prob_vector(s2, blk)
                    {
                        return false;
                    }
                }
                EquivKind::WeakNd => {
                    for &(l, t) in &sys.act[s1] {
                        let answered = if l == TAU {
                            (0..n).any(|v| reach_prob[s2][v] && blk[v] == blk[t])
                        } else {
                            (0..n).any(|u| {
                                reach_prob[s2][u]
                                    && sys.act[u].iter().any(|&(m, v)| {
                                        m == l && (0..n).any(|w| reach_prob[v][w] && blk[w] == blk[t])
                                    })
                            })
                        };
                        if !answered {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

fn strong_match(sys: &Sys, s1: StateId, s2: StateId, blk: &[usize]) -> bool {
    sys.act[s1]
        .iter()
        .all(|&(l, t)| sys.act[s2].iter().any(|&(m, u)| m == l && blk[u] == blk[t]))
}

/// Transitive closure of the union of the given equivalences.
fn join(n: usize, parts: &[Vec<usize>]) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for part in parts {
        let mut first: HashMap<usize, usize> = HashMap::new();
        for (s, &b) in part.iter().enumerate() {
            let f = *first.entry(b).or_insert(s);
            let (a, c) = (find(&mut parent, s), find(&mut parent, f));
            parent[a] = c;
        }
    }
    (0..n).map(|s| find(&mut parent, s)).collect()
}

/// The coarsest partition satisfying the definition of `kind`, found by
/// exhaustive enumeration.
pub fn coarsest_by_enumeration(p: &Plts, kind: EquivKind) -> Result<Partition, EquivError> {
    let (sys, lift): (Sys, Option<Vec<usize>>) = match kind {
        EquivKind::WeakNd | EquivKind::BranchingNd => {
            let lts = collapse_unit_states(p)?;
            let sys = Sys {
                prob: vec![false; lts.len()],
                act: (0..lts.len()).map(|s| lts.edges(s).to_vec()).collect(),
                dist: vec![Vec::new(); lts.len()],
            };
            (sys, Some(lts.index.clone()))
        }
        _ => (Sys::from_plts(p), None),
    };
    let n = sys.len();
    if n > MAX_ORACLE_STATES {
        return Err(EquivError::TooLarge(n));
    }
    let mut sched = SchedulerOracle { sys: &sys, cache: HashMap::new() };
    let valid: Vec<Vec<usize>> = all_partitions(n)
        .into_iter()
        .filter(|blk| check_partition(kind, &sys, blk, &mut sched))
        .collect();
    let top = join(n, &valid);
    if !check_partition(kind, &sys, &top, &mut sched) {
        return Err(EquivError::NoCoarsest);
    }
    let labels = match lift {
        Some(index) => index.iter().map(|&i| top[i]).collect(),
        None => top,
    };
    Ok(Partition::from_labels(&labels))
}

/// The scheduler clause alone, decided by strategy enumeration.
pub fn scheduler_exists(p: &Plts, s: StateId, label: LabelId, target: &[StateId]) -> Result<bool, EquivError> {
    if p.len() > 16 {
        return Err(EquivError::TooLarge(p.len()));
    }
    let sys = Sys::from_plts(p);
    let mask = target.iter().fold(0u32, |m, &t| m | (1 << t));
    Ok(SchedulerOracle { sys: &sys, cache: HashMap::new() }.exists(s, label, mask))
}
