//! Structural operational semantics and reachable state-space construction.

use std::collections::{HashMap, VecDeque};

use indexmap::{IndexMap, IndexSet};
use num::BigRational;
use thiserror::Error;

use crate::plts::{Plts, StateId};
use crate::syntax::{Action, Sort, SortError, Spec, Term, TermKind};

pub const DEFAULT_MAX_STATES: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("undefined constant {0}")]
    UndefinedConstant(String),
    #[error("state space exceeds the budget of {0} states")]
    StateBudgetExceeded(usize),
    #[error("term {0} is not of the expected sort")]
    WrongSort(String),
}

impl From<SortError> for SemanticsError {
    fn from(e: SortError) -> Self {
        match e {
            SortError::UndefinedConstant(k) => SemanticsError::UndefinedConstant(k.to_string()),
            SortError::MixedSortParallel => SemanticsError::WrongSort("parallel".into()),
        }
    }
}

fn body<'a>(spec: &'a Spec, k: &str) -> Result<&'a Term, SemanticsError> {
    spec.body(k).ok_or_else(|| SemanticsError::UndefinedConstant(k.to_string()))
}

/// Action transitions of a nondeterministic term, in derivation order.
pub fn step_action(n: &Term, spec: &Spec) -> Result<Vec<(Action, Term)>, SemanticsError> {
    let mut out = IndexSet::new();
    step_action_into(n, spec, &mut out)?;
    Ok(out.into_iter().collect())
}

fn step_action_into(
    n: &Term,
    spec: &Spec,
    out: &mut IndexSet<(Action, Term)>,
) -> Result<(), SemanticsError> {
    match n.kind() {
        TermKind::Nil => {}
        TermKind::Prefix(a, p) => {
            out.insert((a.clone(), p.clone()));
        }
        TermKind::Choice(l, r) => {
            step_action_into(l, spec, out)?;
            step_action_into(r, spec, out)?;
        }
        TermKind::Parallel(sync, l, r) => {
            let left = step_action(l, spec)?;
            let right = step_action(r, spec)?;
            let synced = |a: &Action| a.name().is_some_and(|n| sync.contains(n));
            for (a, lp) in &left {
                if !synced(a) {
                    out.insert((a.clone(), Term::parallel(sync.clone(), lp.clone(), Term::unit(r.clone()))));
                }
            }
            for (a, rp) in &right {
                if !synced(a) {
                    out.insert((a.clone(), Term::parallel(sync.clone(), Term::unit(l.clone()), rp.clone())));
                }
            }
            for (a, lp) in left.iter().filter(|(a, _)| synced(a)) {
                for (b, rp) in &right {
                    if a == b {
                        out.insert((a.clone(), Term::parallel(sync.clone(), lp.clone(), rp.clone())));
                    }
                }
            }
        }
        TermKind::Restrict(set, b) => {
            for (a, p) in step_action(b, spec)? {
                if !a.name().is_some_and(|n| set.contains(n)) {
                    out.insert((a, Term::restrict(set.clone(), p)));
                }
            }
        }
        TermKind::Hide(set, b) => {
            for (a, p) in step_action(b, spec)? {
                let a = if a.name().is_some_and(|n| set.contains(n)) { Action::Tau } else { a };
                out.insert((a, Term::hide(set.clone(), p)));
            }
        }
        TermKind::Const(k) => step_action_into(body(spec, k)?, spec, out)?,
        TermKind::ProbChoice(_) => return Err(SemanticsError::WrongSort(n.to_string())),
    }
    Ok(())
}

/// Probabilistic transitions of a probabilistic term, aggregated by target.
pub fn step_prob(p: &Term, spec: &Spec) -> Result<IndexMap<Term, BigRational>, SemanticsError> {
    let mut out: IndexMap<Term, BigRational> = IndexMap::new();
    let mut add = |t: Term, w: BigRational| {
        *out.entry(t).or_insert_with(|| BigRational::from_integer(0.into())) += w;
    };
    match p.kind() {
        TermKind::ProbChoice(bs) => {
            for (w, n) in bs {
                add(n.clone(), w.value().clone());
            }
        }
        TermKind::Parallel(sync, l, r) => {
            let left = step_prob(l, spec)?;
            let right = step_prob(r, spec)?;
            for (lt, lw) in &left {
                for (rt, rw) in &right {
                    add(Term::parallel(sync.clone(), lt.clone(), rt.clone()), lw * rw);
                }
            }
        }
        TermKind::Restrict(set, b) => {
            for (t, w) in step_prob(b, spec)? {
                add(Term::restrict(set.clone(), t), w);
            }
        }
        TermKind::Hide(set, b) => {
            for (t, w) in step_prob(b, spec)? {
                add(Term::hide(set.clone(), t), w);
            }
        }
        TermKind::Const(k) => return step_prob(body(spec, k)?, spec),
        TermKind::Nil | TermKind::Prefix(..) | TermKind::Choice(..) => {
            return Err(SemanticsError::WrongSort(p.to_string()))
        }
    }
    Ok(out)
}

pub fn build_plts(spec: &Spec, root: &Term, max_states: usize) -> Result<Plts, SemanticsError> {
    Ok(build_plts_many(spec, std::slice::from_ref(root), max_states)?.0)
}

/// Breadth-first construction from several roots into one PLTS; structurally
/// equal terms share a state. Returns the state of each root, in order.
pub fn build_plts_many(
    spec: &Spec,
    roots: &[Term],
    max_states: usize,
) -> Result<(Plts, Vec<StateId>), SemanticsError> {
    let mut plts = Plts::new();
    let mut index: HashMap<Term, StateId> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut intern = |t: Term, plts: &mut Plts, queue: &mut VecDeque<StateId>| -> Result<StateId, SemanticsError> {
        if let Some(&s) = index.get(&t) {
            return Ok(s);
        }
        if plts.len() >= max_states {
            return Err(SemanticsError::StateBudgetExceeded(max_states));
        }
        let sort = t.shallow_sort(spec)?;
        let s = plts.add_state(sort, Some(t.clone()));
        index.insert(t, s);
        queue.push_back(s);
        Ok(s)
    };
    let mut root_ids = Vec::with_capacity(roots.len());
    for r in roots {
        root_ids.push(intern(strip_spans(r), &mut plts, &mut queue)?);
    }
    while let Some(s) = queue.pop_front() {
        let term = plts.term(s).cloned().expect("built states carry terms");
        match plts.sort(s) {
            Sort::Nondeterministic => {
                for (a, t) in step_action(&term, spec)? {
                    let id = intern(t, &mut plts, &mut queue)?;
                    plts.add_action(s, &a, id);
                }
            }
            Sort::Probabilistic => {
                for (t, w) in step_prob(&term, spec)? {
                    let id = intern(t, &mut plts, &mut queue)?;
                    plts.add_prob(s, id, w);
                }
            }
        }
    }
    plts.set_roots(root_ids.clone());
    Ok((plts, root_ids))
}

/// Copy of a term without source locations, so states print and compare
/// independently of where they were written.
pub fn strip_spans(t: &Term) -> Term {
    match t.kind() {
        TermKind::Nil => Term::nil(),
        TermKind::Const(k) => Term::new(TermKind::Const(k.clone())),
        TermKind::Prefix(a, b) => Term::prefix(a.clone(), strip_spans(b)),
        TermKind::Choice(l, r) => Term::choice(strip_spans(l), strip_spans(r)),
        TermKind::ProbChoice(bs) => {
            Term::prob(bs.iter().map(|(w, b)| (w.clone(), strip_spans(b))).collect())
        }
        TermKind::Parallel(s, l, r) => Term::parallel(s.clone(), strip_spans(l), strip_spans(r)),
        TermKind::Restrict(s, b) => Term::restrict(s.clone(), strip_spans(b)),
        TermKind::Hide(s, b) => Term::hide(s.clone(), strip_spans(b)),
    }
}
