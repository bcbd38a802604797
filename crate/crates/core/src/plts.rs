//! Probabilistic labelled transition systems in the strictly alternating model.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::{self, Write};

use num::{BigRational, One, Signed, Zero};

use crate::syntax::{Action, Sort, Term};

pub type StateId = usize;
/// Index into the label table of a [`Plts`]; `TAU` is always 0.
pub type LabelId = usize;
pub const TAU: LabelId = 0;

/// Read-only view shared by state graphs and run graphs.
pub trait Graph {
    fn num_states(&self) -> usize;
    fn is_prob(&self, s: StateId) -> bool;
    fn action_edges(&self, s: StateId) -> &[(LabelId, StateId)];
    fn prob_edges(&self, s: StateId) -> &[(StateId, BigRational)];
}

#[derive(Clone, Debug)]
pub struct StateInfo {
    pub sort: Sort,
    pub term: Option<Term>,
}

#[derive(Clone, Debug)]
pub struct Plts {
    states: Vec<StateInfo>,
    labels: Vec<Action>,
    label_ids: HashMap<Action, LabelId>,
    actions: Vec<Vec<(LabelId, StateId)>>,
    probs: Vec<Vec<(StateId, BigRational)>>,
    roots: Vec<StateId>,
}

impl Default for Plts {
    fn default() -> Self {
        Plts::new()
    }
}

impl Plts {
    pub fn new() -> Plts {
        Plts {
            states: Vec::new(),
            labels: vec![Action::Tau],
            label_ids: HashMap::from([(Action::Tau, TAU)]),
            actions: Vec::new(),
            probs: Vec::new(),
            roots: Vec::new(),
        }
    }

    pub fn add_state(&mut self, sort: Sort, term: Option<Term>) -> StateId {
        self.states.push(StateInfo { sort, term });
        self.actions.push(Vec::new());
        self.probs.push(Vec::new());
        self.states.len() - 1
    }

    pub fn intern_label(&mut self, a: &Action) -> LabelId {
        if let Some(&id) = self.label_ids.get(a) {
            return id;
        }
        self.labels.push(a.clone());
        self.label_ids.insert(a.clone(), self.labels.len() - 1);
        self.labels.len() - 1
    }

    /// Adds `s --a--> t` unless already present.
    pub fn add_action(&mut self, s: StateId, a: &Action, t: StateId) {
        let l = self.intern_label(a);
        if !self.actions[s].contains(&(l, t)) {
            self.actions[s].push((l, t));
        }
    }

    /// Adds weight `w` to the probabilistic edge `s -> t`.
    pub fn add_prob(&mut self, s: StateId, t: StateId, w: BigRational) {
        match self.probs[s].iter_mut().find(|(u, _)| *u == t) {
            Some((_, acc)) => *acc += w,
            None => self.probs[s].push((t, w)),
        }
    }

    pub fn set_roots(&mut self, roots: Vec<StateId>) {
        self.roots = roots;
    }

    /// The first root.
    pub fn root(&self) -> StateId {
        self.roots.first().copied().unwrap_or(0)
    }

    pub fn roots(&self) -> &[StateId] {
        &self.roots
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn sort(&self, s: StateId) -> Sort {
        self.states[s].sort
    }

    pub fn is_prob(&self, s: StateId) -> bool {
        self.states[s].sort == Sort::Probabilistic
    }

    pub fn term(&self, s: StateId) -> Option<&Term> {
        self.states[s].term.as_ref()
    }

    pub fn label(&self, l: LabelId) -> &Action {
        &self.labels[l]
    }

    pub fn label_id(&self, a: &Action) -> Option<LabelId> {
        self.label_ids.get(a).copied()
    }

    pub fn labels(&self) -> &[Action] {
        &self.labels
    }

    pub fn actions(&self, s: StateId) -> &[(LabelId, StateId)] {
        &self.actions[s]
    }

    pub fn probs(&self, s: StateId) -> &[(StateId, BigRational)] {
        &self.probs[s]
    }

    pub fn num_transitions(&self) -> (usize, usize) {
        (
            self.actions.iter().map(Vec::len).sum(),
            self.probs.iter().map(Vec::len).sum(),
        )
    }

    pub fn state_ids(&self) -> std::ops::Range<StateId> {
        0..self.states.len()
    }
}

impl Graph for Plts {
    fn num_states(&self) -> usize {
        self.len()
    }

    fn is_prob(&self, s: StateId) -> bool {
        self.states[s].sort == Sort::Probabilistic
    }

    fn action_edges(&self, s: StateId) -> &[(LabelId, StateId)] {
        &self.actions[s]
    }

    fn prob_edges(&self, s: StateId) -> &[(StateId, BigRational)] {
        &self.probs[s]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PltsIssueCode {
    SortViolation,
    WeightSumViolation,
    NonPositiveWeight,
    DanglingState,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PltsIssue {
    pub code: PltsIssueCode,
    pub state: StateId,
    pub message: String,
}

/// Checks sort alternation and exact weight sums; empty iff well formed.
pub fn validate_plts(p: &Plts) -> Vec<PltsIssue> {
    let mut out = Vec::new();
    let n = p.len();
    let mut issue = |code, state, message: String| out.push(PltsIssue { code, state, message });
    for s in p.state_ids() {
        for &(l, t) in p.actions(s) {
            if t >= n {
                issue(PltsIssueCode::DanglingState, s, format!("action target {} does not exist", t));
            } else if p.sort(s) != Sort::Nondeterministic || p.sort(t) != Sort::Probabilistic {
                issue(
                    PltsIssueCode::SortViolation,
                    s,
                    format!("action transition {} --{}--> {} does not go from a nondeterministic to a probabilistic state", s, p.label(l), t),
                );
            }
        }
        let mut total = BigRational::zero();
        for (t, w) in p.probs(s) {
            if *t >= n {
                issue(PltsIssueCode::DanglingState, s, format!("probabilistic target {} does not exist", t));
            } else if p.sort(s) != Sort::Probabilistic || p.sort(*t) != Sort::Nondeterministic {
                issue(
                    PltsIssueCode::SortViolation,
                    s,
                    format!("probabilistic transition {} --{}--> {} does not go from a probabilistic to a nondeterministic state", s, w, t),
                );
            }
            if !w.is_positive() {
                issue(PltsIssueCode::NonPositiveWeight, s, format!("weight {} is not positive", w));
            }
            total += w;
        }
        if !p.probs(s).is_empty() && !total.is_one() {
            issue(
                PltsIssueCode::WeightSumViolation,
                s,
                format!("outgoing weights of state {} sum to {}", s, total),
            );
        }
    }
    for &r in p.roots() {
        if r >= n {
            issue(PltsIssueCode::DanglingState, r, format!("root {} does not exist", r));
        }
    }
    out
}

/// Cumulative one-step probability from `s` into `c`; zero for
/// nondeterministic states.
pub fn pi_cumulative(p: &Plts, s: StateId, c: &BTreeSet<StateId>) -> BigRational {
    p.probs(s)
        .iter()
        .filter(|(t, _)| c.contains(t))
        .fold(BigRational::zero(), |acc, (_, w)| acc + w)
}

/// Like [`pi_cumulative`], but a nondeterministic state reaches itself with
/// probability one.
pub fn prob_lifted(p: &Plts, s: StateId, c: &BTreeSet<StateId>) -> BigRational {
    match p.sort(s) {
        Sort::Probabilistic => pi_cumulative(p, s, c),
        Sort::Nondeterministic if c.contains(&s) => BigRational::one(),
        Sort::Nondeterministic => BigRational::zero(),
    }
}

/// States reachable from `s` through any transitions, including `s`.
pub fn reach(p: &Plts, s: StateId) -> BTreeSet<StateId> {
    let mut seen = BTreeSet::from([s]);
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        let succ = p.actions(u).iter().map(|&(_, t)| t).chain(p.probs(u).iter().map(|(t, _)| *t));
        for t in succ {
            if seen.insert(t) {
                queue.push_back(t);
            }
        }
    }
    seen
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz rendering: circles for nondeterministic states, diamonds for
/// probabilistic ones, roots drawn with a double border.
pub fn to_dot(p: &Plts, name: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph \"{}\" {{", dot_escape(name));
    let _ = writeln!(out, "  rankdir=TB;");
    for s in p.state_ids() {
        let shape = match p.sort(s) {
            Sort::Nondeterministic => "circle",
            Sort::Probabilistic => "diamond",
        };
        let tooltip = p.term(s).map(|t| t.to_string()).unwrap_or_default();
        let peripheries = if p.roots().contains(&s) { 2 } else { 1 };
        let _ = writeln!(
            out,
            "  s{} [shape={}, label=\"{}\", tooltip=\"{}\", peripheries={}];",
            s,
            shape,
            s,
            dot_escape(&tooltip),
            peripheries
        );
    }
    for s in p.state_ids() {
        for &(l, t) in p.actions(s) {
            let _ = writeln!(out, "  s{} -> s{} [label=\"{}\"];", s, t, dot_escape(&p.label(l).to_string()));
        }
        for (t, w) in p.probs(s) {
            let _ = writeln!(out, "  s{} -> s{} [label=\"{}\", style=dashed];", s, t, w);
        }
    }
    out.push_str("}\n");
    out
}

impl fmt::Display for Plts {
    /// One line per state: id, sort marker, term, then outgoing edges.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.state_ids() {
            let marker = if self.is_prob(s) { 'p' } else { 'n' };
            write!(f, "{}{}", marker, s)?;
            if let Some(t) = self.term(s) {
                write!(f, " {}", t)?;
            }
            for &(l, t) in self.actions(s) {
                write!(f, " --{}--> {}", self.label(l), t)?;
            }
            for (t, w) in self.probs(s) {
                write!(f, " --{}--> {}", w, t)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
