//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

use num::{BigInt, BigRational};
use probsec_core::plts::Plts;
use probsec_core::syntax::{action_set, Action, ActionSet, Probability, Sort, Spec, Term};
use rand::seq::SliceRandom;
use rand::Rng;

pub const SPEC_SRC: &str = "high h; low a, b;";

pub fn spec() -> Spec {
    probsec_core::parse_spec(SPEC_SRC).unwrap()
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Random positive integer weights normalised to sum to one.
fn weights<R: Rng>(rng: &mut R, k: usize) -> Vec<BigRational> {
    let raw: Vec<i64> = (0..k).map(|_| rng.gen_range(1..=4)).collect();
    let total: i64 = raw.iter().sum();
    raw.into_iter().map(|w| ratio(w, total)).collect()
}

/// A random well-formed PLTS with at most `max_states` states rooted at 0.
/// With `acyclic`, every edge goes from a lower to a higher state id.
pub fn random_plts<R: Rng>(rng: &mut R, max_states: usize, acyclic: bool) -> Plts {
    let n = rng.gen_range(1..=max_states);
    let mut sorts: Vec<Sort> = (0..n)
        .map(|_| if rng.gen_bool(0.45) { Sort::Probabilistic } else { Sort::Nondeterministic })
        .collect();
    // Every probabilistic state needs a nondeterministic target.
    for i in (0..n).rev() {
        let has_target = if acyclic {
            (i + 1..n).any(|j| sorts[j] == Sort::Nondeterministic)
        } else {
            sorts.iter().any(|s| *s == Sort::Nondeterministic)
        };
        if sorts[i] == Sort::Probabilistic && !has_target {
            sorts[i] = Sort::Nondeterministic;
        }
    }
    let mut p = Plts::new();
    for s in &sorts {
        p.add_state(*s, None);
    }
    let labels = [Action::Tau, Action::Tau, Action::obs("a"), Action::obs("b")];
    for i in 0..n {
        let lo = if acyclic { i + 1 } else { 0 };
        let targets = |want: Sort| -> Vec<usize> { (lo..n).filter(|&j| sorts[j] == want).collect() };
        match sorts[i] {
            Sort::Nondeterministic => {
                let cands = targets(Sort::Probabilistic);
                if cands.is_empty() {
                    continue;
                }
                for _ in 0..rng.gen_range(0..=3) {
                    let a = labels.choose(rng).unwrap();
                    p.add_action(i, a, *cands.choose(rng).unwrap());
                }
            }
            Sort::Probabilistic => {
                let mut cands = targets(Sort::Nondeterministic);
                cands.shuffle(rng);
                cands.truncate(rng.gen_range(1..=3));
                for (t, w) in cands.iter().zip(weights(rng, cands.len())) {
                    p.add_prob(i, *t, w);
                }
            }
        }
    }
    p.set_roots(vec![0]);
    p
}

const ACTIONS: [&str; 4] = ["tau", "a", "b", "h"];

pub fn random_action<R: Rng>(rng: &mut R) -> Action {
    match *ACTIONS.choose(rng).unwrap() {
        "tau" => Action::Tau,
        name => Action::obs(name),
    }
}

fn some_set<R: Rng>(rng: &mut R) -> ActionSet {
    let names: Vec<&str> = ["a", "b", "h"].into_iter().filter(|_| rng.gen_bool(0.4)).collect();
    action_set(names)
}

fn low_set<R: Rng>(rng: &mut R) -> ActionSet {
    let names: Vec<&str> = ["a", "b"].into_iter().filter(|_| rng.gen_bool(0.5)).collect();
    action_set(names)
}

const SPLITS: [(i64, i64); 4] = [(1, 2), (1, 3), (2, 3), (1, 4)];

/// A random probabilistic term with prefix depth at most `depth`.
pub fn random_prob<R: Rng>(rng: &mut R, depth: usize) -> Term {
    if rng.gen_bool(0.55) {
        return Term::unit(random_nondet(rng, depth));
    }
    let (n, d) = *SPLITS.choose(rng).unwrap();
    Term::prob(vec![
        (Probability::ratio(n, d).unwrap(), random_nondet(rng, depth)),
        (Probability::ratio(d - n, d).unwrap(), random_nondet(rng, depth)),
    ])
}

/// A random nondeterministic term with prefix depth at most `depth`.
pub fn random_nondet<R: Rng>(rng: &mut R, depth: usize) -> Term {
    if depth == 0 {
        return Term::nil();
    }
    match rng.gen_range(0..12) {
        0 => Term::nil(),
        1..=5 => Term::prefix(random_action(rng), random_prob(rng, depth - 1)),
        6..=8 => Term::choice(random_nondet(rng, depth), random_nondet(rng, depth - 1)),
        9 => Term::parallel(some_set(rng), random_nondet(rng, depth - 1), random_nondet(rng, depth - 1)),
        10 => Term::restrict(some_set(rng), random_nondet(rng, depth)),
        _ => Term::hide(low_set(rng), random_nondet(rng, depth)),
    }
}

/// A random term of either sort.
pub fn random_term<R: Rng>(rng: &mut R, depth: usize) -> Term {
    if rng.gen_bool(0.75) {
        random_nondet(rng, depth)
    } else {
        random_prob(rng, depth)
    }
}

/// Rewrites `t` at a random position with a law sound for probabilistic
/// branching bisimilarity (hence also for the weak relation).
pub fn rewrite<R: Rng>(rng: &mut R, t: &Term) -> Term {
    rewrite_at(rng, t, false)
}

/// `in_choice`: `t` is a summand, where silent steps are not inert.
fn rewrite_at<R: Rng>(rng: &mut R, t: &Term, in_choice: bool) -> Term {
    use probsec_core::syntax::TermKind;
    let here = rng.gen_bool(0.4);
    match t.kind() {
        TermKind::Choice(l, r) if !here => {
            if rng.gen_bool(0.5) {
                Term::choice(rewrite_at(rng, l, true), r.clone())
            } else {
                Term::choice(l.clone(), rewrite_at(rng, r, true))
            }
        }
        TermKind::Prefix(a, b) if !here => Term::prefix(a.clone(), rewrite(rng, b)),
        TermKind::ProbChoice(bs) if !here => {
            let i = rng.gen_range(0..bs.len());
            let mut bs = bs.clone();
            bs[i].1 = rewrite(rng, &bs[i].1);
            Term::prob(bs)
        }
        TermKind::Restrict(s, b) if !here => Term::restrict(s.clone(), rewrite_at(rng, b, in_choice)),
        TermKind::Hide(s, b) if !here => Term::hide(s.clone(), rewrite_at(rng, b, in_choice)),
        TermKind::ProbChoice(bs) => {
            // Split one branch into two halves with the same continuation.
            let i = rng.gen_range(0..bs.len());
            let mut out = bs.clone();
            let (w, n) = out.remove(i);
            let half = w.value() / BigRational::from_integer(2.into());
            let p = Probability::new(half).unwrap();
            out.insert(i, (p.clone(), n.clone()));
            out.insert(i, (p, n));
            Term::prob(out)
        }
        TermKind::Choice(l, r) if rng.gen_bool(0.5) => Term::choice(r.clone(), l.clone()),
        _ => match rng.gen_range(0..if in_choice { 2 } else { 4 }) {
            0 => Term::choice(t.clone(), Term::nil()),
            1 => Term::choice(t.clone(), t.clone()),
            // Inert silent step: tau.<1: t> + t behaves as t.
            2 => Term::choice(Term::prefix_n(Action::Tau, t.clone()), t.clone()),
            _ => Term::prefix_n(Action::Tau, t.clone()),
        },
    }
}

/// A pair of nondeterministic terms related by probabilistic branching
/// bisimilarity by construction.
pub fn equivalent_pair<R: Rng>(rng: &mut R, depth: usize) -> (Term, Term) {
    let base = random_nondet(rng, depth);
    let mut other = base.clone();
    for _ in 0..rng.gen_range(1..=3) {
        other = rewrite(rng, &other);
    }
    (base, other)
}
