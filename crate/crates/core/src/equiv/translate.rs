//! Nondeterministic projection: probabilistic choices become silent choices.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use crate::syntax::{Action, Definition, Name, Spec, Term, TermKind};

#[derive(Clone, Debug)]
pub struct NdTranslation {
    pub term: Term,
    /// The input spec extended with a translated companion for every constant.
    pub spec: Spec,
    pub renamed: HashMap<Name, Name>,
}

/// Replaces every `<p1: N1, ..., pk: Nk>` by `tau.N1 + ... + tau.Nk`.
/// The unit choice a prefix carries in `a.N` is kept as is.
pub fn nd_translate(term: &Term, spec: &Spec) -> NdTranslation {
    let mut taken: HashSet<Name> = spec.definitions().map(|d| d.name.clone()).collect();
    let mut renamed = HashMap::new();
    for d in spec.definitions() {
        let mut candidate = format!("{}_nd", d.name);
        while taken.contains(candidate.as_str()) {
            candidate.push_str("_nd");
        }
        let fresh: Name = Arc::from(candidate.as_str());
        taken.insert(fresh.clone());
        renamed.insert(d.name.clone(), fresh);
    }
    let extra = spec
        .definitions()
        .map(|d| Definition {
            name: renamed[&d.name].clone(),
            body: translate(&d.body, &renamed),
            span: None,
        })
        .collect();
    NdTranslation {
        term: translate(term, &renamed),
        spec: spec.with_definitions(extra),
        renamed,
    }
}

fn translate(t: &Term, names: &HashMap<Name, Name>) -> Term {
    match t.kind() {
        TermKind::Nil => Term::nil(),
        TermKind::Prefix(a, body) => {
            let inner = match body.kind() {
                TermKind::ProbChoice(bs) if bs.len() == 1 && bs[0].0.is_one() => translate(&bs[0].1, names),
                _ => translate(body, names),
            };
            Term::prefix_n(a.clone(), inner)
        }
        TermKind::Choice(l, r) => Term::choice(translate(l, names), translate(r, names)),
        TermKind::ProbChoice(bs) => {
            Term::sum(bs.iter().map(|(_, n)| Term::prefix_n(Action::Tau, translate(n, names))))
        }
        TermKind::Parallel(s, l, r) => Term::parallel(s.clone(), translate(l, names), translate(r, names)),
        TermKind::Restrict(s, b) => Term::restrict(s.clone(), translate(b, names)),
        TermKind::Hide(s, b) => Term::hide(s.clone(), translate(b, names)),
        TermKind::Const(k) => match names.get(k) {
            Some(fresh) => Term::new(TermKind::Const(fresh.clone())),
            None => t.clone(),
        },
    }
}
