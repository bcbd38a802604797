//! Noninterference properties over a weak probabilistic relation.
//!
//! Every check builds one PLTS holding all the processes it compares,
//! computes the relation once, and compares root blocks.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use crate::equiv::{bisimulation, EquivKind, Partition};
use crate::plts::Plts;
use crate::semantics::{build_plts, build_plts_many, SemanticsError, DEFAULT_MAX_STATES};
use crate::syntax::{alphabet, Action, ActionSet, Name, Probability, Property, Relation, Sort, Spec, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOptions {
    pub max_states: usize,
    /// Prefix depth of enumerated BNDC attackers.
    pub bndc_depth: usize,
    /// Largest number of summands in an enumerated attacker choice.
    pub bndc_width: usize,
    /// Attackers tried before BNDC gives up with `Unknown`.
    pub max_attackers: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            max_states: DEFAULT_MAX_STATES,
            bndc_depth: 3,
            bndc_width: 2,
            max_attackers: 256,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// A reachable process whose restricted and hidden views differ.
    Process(Term),
    /// A high step `before --action--> after` that changes the low view.
    HighStep { before: Term, action: Name, after: Term },
    /// An attacker and synchronisation set that change the low view.
    Attacker { attacker: Term, sync: ActionSet },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Process(t) => write!(f, "{}", t),
            Witness::HighStep { before, action, after } => write!(f, "{} --{}--> {}", before, action, after),
            Witness::Attacker { attacker, sync } => {
                let names: Vec<&str> = sync.iter().map(|n| &**n).collect();
                write!(f, "F = {}, L = {{{}}}", attacker, names.join(", "))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Holds,
    Fails(Witness),
    Unknown(String),
}

impl Status {
    pub fn holds(&self) -> bool {
        matches!(self, Status::Holds)
    }

    pub fn fails(&self) -> bool {
        matches!(self, Status::Fails(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Status::Unknown(_))
    }

    pub fn keyword(&self) -> &'static str {
        match self {
            Status::Holds => "HOLDS",
            Status::Fails(_) => "FAILS",
            Status::Unknown(_) => "UNKNOWN",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub property: Property,
    pub relation: Relation,
    pub status: Status,
}

impl Verdict {
    /// `PROP[rel] NAME = STATUS (detail)`.
    pub fn line(&self, subject: &str) -> String {
        let head = format!("{}[{}] {} = {}", self.property, self.relation, subject, self.status.keyword());
        match &self.status {
            Status::Holds => head,
            Status::Fails(w) => format!("{} ({})", head, w),
            Status::Unknown(why) => format!("{} ({})", head, why),
        }
    }
}

fn high_set(spec: &Spec) -> ActionSet {
    spec.high().clone()
}

fn restricted(e: &Term, spec: &Spec) -> Term {
    Term::restrict(high_set(spec), e.clone())
}

fn hidden(e: &Term, spec: &Spec) -> Term {
    Term::hide(high_set(spec), e.clone())
}

/// Builds one PLTS for all `roots` and computes `rel` on it.
fn compare_all(spec: &Spec, roots: &[Term], rel: Relation, max: usize) -> Result<(Plts, Vec<usize>, Partition), SemanticsError> {
    let (p, ids) = build_plts_many(spec, roots, max)?;
    let part = bisimulation(&p, EquivKind::from(rel)).expect("weak probabilistic kinds always succeed");
    Ok((p, ids, part))
}

/// Whether `a` and `b` are related by `rel`.
pub fn equivalent(spec: &Spec, a: &Term, b: &Term, rel: Relation, max_states: usize) -> Result<bool, SemanticsError> {
    let (_, ids, part) = compare_all(spec, &[a.clone(), b.clone()], rel, max_states)?;
    Ok(part.same(ids[0], ids[1]))
}

pub fn check_bsnni(spec: &Spec, e: &Term, rel: Relation, opts: &CheckOptions) -> Result<Verdict, SemanticsError> {
    let ok = equivalent(spec, &restricted(e, spec), &hidden(e, spec), rel, opts.max_states)?;
    let status = if ok { Status::Holds } else { Status::Fails(Witness::Process(e.clone())) };
    Ok(Verdict { property: Property::Bsnni, relation: rel, status })
}

/// Terms of every process reachable from `e`, in breadth-first order.
pub fn reachable_terms(spec: &Spec, e: &Term, max_states: usize) -> Result<Vec<Term>, SemanticsError> {
    let p = build_plts(spec, e, max_states)?;
    Ok(p.state_ids().map(|s| p.term(s).cloned().expect("built states carry terms")).collect())
}

pub fn check_sbsnni(spec: &Spec, e: &Term, rel: Relation, opts: &CheckOptions) -> Result<Verdict, SemanticsError> {
    let reach = reachable_terms(spec, e, opts.max_states)?;
    let roots: Vec<Term> = reach.iter().flat_map(|t| [restricted(t, spec), hidden(t, spec)]).collect();
    let (_, ids, part) = compare_all(spec, &roots, rel, opts.max_states)?;
    let failing: Vec<&Term> = reach
        .iter()
        .enumerate()
        .filter(|(i, _)| !part.same(ids[2 * i], ids[2 * i + 1]))
        .map(|(_, t)| t)
        .collect();
    // A failing `<1: N>` fails because `N` does; name `N` when possible.
    let nondet = failing.iter().find(|t| t.shallow_sort(spec) == Ok(Sort::Nondeterministic));
    let status = match nondet.or(failing.first()) {
        Some(t) => Status::Fails(Witness::Process((*t).clone())),
        None => Status::Holds,
    };
    Ok(Verdict { property: Property::Sbsnni, relation: rel, status })
}

/// Persistent BNDC coincides with SBSNNI, so this reruns that check.
pub fn check_pbndc(spec: &Spec, e: &Term, rel: Relation, opts: &CheckOptions) -> Result<Verdict, SemanticsError> {
    let v = check_sbsnni(spec, e, rel, opts)?;
    Ok(Verdict { property: Property::Pbndc, ..v })
}

pub fn check_sbndc(spec: &Spec, e: &Term, rel: Relation, opts: &CheckOptions) -> Result<Verdict, SemanticsError> {
    let p = build_plts(spec, e, opts.max_states)?;
    let mut steps = Vec::new();
    for s in p.state_ids() {
        for &(l, t) in p.actions(s) {
            if let Action::Obs(h) = p.label(l) {
                if spec.is_high(p.label(l)) {
                    steps.push((p.term(s).unwrap().clone(), h.clone(), p.term(t).unwrap().clone()));
                }
            }
        }
    }
    let roots: Vec<Term> = steps
        .iter()
        .flat_map(|(before, _, after)| [restricted(before, spec), restricted(after, spec)])
        .collect();
    let (_, ids, part) = compare_all(spec, &roots, rel, opts.max_states)?;
    let status = match steps.iter().enumerate().find(|(i, _)| !part.same(ids[2 * i], ids[2 * i + 1])) {
        Some((_, (before, action, after))) => Status::Fails(Witness::HighStep {
            before: before.clone(),
            action: action.clone(),
            after: after.clone(),
        }),
        None => Status::Holds,
    };
    Ok(Verdict { property: Property::Sbndc, relation: rel, status })
}

type Stream = Box<dyn Iterator<Item = Term>>;

/// Lazily yields every combination of at most `width` distinct items of
/// `items`, ordered by the position of their last member.
fn combos_by_last(items: Stream, width: usize) -> Box<dyn Iterator<Item = Vec<Term>>> {
    let mut seen: Vec<Term> = Vec::new();
    Box::new(items.flat_map(move |x| {
        let j = seen.len();
        seen.push(x);
        let mut out: Vec<Vec<Term>> = Vec::new();
        // Index sets of size < width drawn from 0..j, smallest first.
        let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
        for _ in 0..width {
            for idx in &layer {
                let mut c: Vec<Term> = idx.iter().map(|&i| seen[i].clone()).collect();
                c.push(seen[j].clone());
                out.push(c);
            }
            layer = layer
                .iter()
                .flat_map(|idx| {
                    let start = idx.last().map_or(0, |&i| i + 1);
                    (start..j).map(move |i| {
                        let mut v = idx.clone();
                        v.push(i);
                        v
                    })
                })
                .collect();
            if layer.is_empty() {
                break;
            }
        }
        out
    }))
}

fn nondet_level(highs: Vec<Name>, depth: usize, width: usize) -> Stream {
    let nil = std::iter::once(Term::nil());
    if depth == 0 {
        return Box::new(nil);
    }
    let hs = highs.clone();
    let prefixes: Stream = Box::new(
        prob_level(highs, depth - 1, width)
            .flat_map(move |p| hs.clone().into_iter().map(move |h| Term::prefix(Action::Obs(h), p.clone()))),
    );
    Box::new(nil.chain(combos_by_last(prefixes, width).map(Term::sum)))
}

fn prob_level(highs: Vec<Name>, depth: usize, width: usize) -> Stream {
    let half = || Probability::ratio(1, 2).unwrap();
    Box::new(
        combos_by_last(nondet_level(highs, depth, width), 2).map(move |c| match c.as_slice() {
            [n] => Term::unit(n.clone()),
            [a, b] => Term::prob(vec![(half(), a.clone()), (half(), b.clone())]),
            _ => unreachable!(),
        }),
    )
}

/// High-only attackers of the given sort: `0`, prefixes `h.P`, choices of
/// up to `width` distinct prefixes, and unit or fair binary probabilistic
/// choices, up to prefix depth `depth`. Shallower attackers come first and
/// none is repeated.
pub fn enumerate_attackers(highs: &BTreeSet<Name>, depth: usize, width: usize, sort: Sort) -> impl Iterator<Item = Term> {
    let highs: Vec<Name> = highs.iter().cloned().collect();
    let width = width.max(1);
    let mut seen: HashSet<Term> = HashSet::new();
    (0..=depth)
        .flat_map(move |d| match sort {
            Sort::Nondeterministic => nondet_level(highs.clone(), d, width),
            Sort::Probabilistic => prob_level(highs.clone(), d, width),
        })
        .filter(move |t| seen.insert(t.clone()))
}

/// Subsets of `items`, largest first, then in lexicographic order.
fn subsets_largest_first(items: &[Name]) -> Vec<ActionSet> {
    let n = items.len();
    let mut all: Vec<Vec<usize>> = (0u32..(1 << n))
        .map(|m| (0..n).filter(|i| m & (1 << i) != 0).collect())
        .collect();
    all.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    all.into_iter().map(|idx| idx.into_iter().map(|i| items[i].clone()).collect()).collect()
}

/// `((E |[L]| F) / L) \ A_H`.
pub fn attacked_view(spec: &Spec, e: &Term, attacker: &Term, sync: &ActionSet) -> Term {
    let composed = Term::parallel(sync.clone(), e.clone(), attacker.clone());
    restricted(&Term::hide(sync.clone(), composed), spec)
}

/// Three-valued BNDC: holds when SBSNNI does, fails when BSNNI does or an
/// enumerated attacker breaks the low view, unknown otherwise.
pub fn check_bndc(spec: &Spec, e: &Term, rel: Relation, opts: &CheckOptions) -> Result<Verdict, SemanticsError> {
    let verdict = |status| Verdict { property: Property::Bndc, relation: rel, status };
    if check_sbsnni(spec, e, rel, opts)?.status.holds() {
        return Ok(verdict(Status::Holds));
    }
    if let Status::Fails(w) = check_bsnni(spec, e, rel, opts)?.status {
        return Ok(verdict(Status::Fails(w)));
    }
    let sort = crate::syntax::sort_of(e, spec).map_err(SemanticsError::from)?;
    let highs: BTreeSet<Name> = alphabet(e, spec)
        .map_err(SemanticsError::from)?
        .into_iter()
        .filter(|a| spec.is_high(a))
        .filter_map(|a| a.name().cloned())
        .collect();
    let syncs = subsets_largest_first(&highs.iter().cloned().collect::<Vec<_>>());
    let low_view = restricted(e, spec);
    let mut tried = 0;
    for attacker in enumerate_attackers(&highs, opts.bndc_depth, opts.bndc_width, sort) {
        if tried == opts.max_attackers {
            return Ok(verdict(Status::Unknown(format!(
                "no attack among the first {} attackers of depth <= {} and width <= {}",
                tried, opts.bndc_depth, opts.bndc_width
            ))));
        }
        tried += 1;
        for sync in &syncs {
            let view = attacked_view(spec, e, &attacker, sync);
            if !equivalent(spec, &low_view, &view, rel, opts.max_states)? {
                return Ok(verdict(Status::Fails(Witness::Attacker { attacker, sync: sync.clone() })));
            }
        }
    }
    Ok(verdict(Status::Unknown(format!(
        "no attack among all {} attackers of depth <= {} and width <= {}",
        tried, opts.bndc_depth, opts.bndc_width
    ))))
}

pub fn check(spec: &Spec, e: &Term, property: Property, rel: Relation, opts: &CheckOptions) -> Result<Verdict, SemanticsError> {
    match property {
        Property::Bsnni => check_bsnni(spec, e, rel, opts),
        Property::Bndc => check_bndc(spec, e, rel, opts),
        Property::Sbsnni => check_sbsnni(spec, e, rel, opts),
        Property::Pbndc => check_pbndc(spec, e, rel, opts),
        Property::Sbndc => check_sbndc(spec, e, rel, opts),
    }
}

/// Re-runs the defining comparison on a failure witness; true when the
/// witness is a genuine violation.
pub fn confirm_witness(spec: &Spec, e: &Term, v: &Verdict, opts: &CheckOptions) -> Result<bool, SemanticsError> {
    let rel = v.relation;
    let max = opts.max_states;
    match &v.status {
        Status::Fails(Witness::Process(t)) => {
            let reach = reachable_terms(spec, e, max)?;
            Ok(reach.contains(&crate::semantics::strip_spans(t))
                && !equivalent(spec, &restricted(t, spec), &hidden(t, spec), rel, max)?)
        }
        Status::Fails(Witness::HighStep { before, after, .. }) => {
            Ok(!equivalent(spec, &restricted(before, spec), &restricted(after, spec), rel, max)?)
        }
        Status::Fails(Witness::Attacker { attacker, sync }) => {
            Ok(!equivalent(spec, &restricted(e, spec), &attacked_view(spec, e, attacker, sync), rel, max)?)
        }
        _ => Ok(false),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecurityReport {
    /// For each relation (`pw`, then `pb`), the five properties in the
    /// order of [`Property::ALL`].
    pub verdicts: Vec<Verdict>,
    /// Violated implications between verdicts; non-empty means a bug.
    pub inconsistencies: Vec<String>,
}

impl SecurityReport {
    pub fn get(&self, property: Property, rel: Relation) -> &Verdict {
        self.verdicts
            .iter()
            .find(|v| v.property == property && v.relation == rel)
            .expect("report covers every cell")
    }
}

/// The implications every verdict table must satisfy.
pub fn taxonomy_violations(verdicts: &[Verdict]) -> Vec<String> {
    let get = |p, r| verdicts.iter().find(|v| v.property == p && v.relation == r).map(|v| &v.status);
    let mut out = Vec::new();
    for rel in [Relation::Pw, Relation::Pb] {
        let (Some(bsnni), Some(bndc), Some(sbsnni), Some(pbndc), Some(sbndc)) = (
            get(Property::Bsnni, rel),
            get(Property::Bndc, rel),
            get(Property::Sbsnni, rel),
            get(Property::Pbndc, rel),
            get(Property::Sbndc, rel),
        ) else {
            continue;
        };
        if sbndc.holds() && !sbsnni.holds() {
            out.push(format!("SBNDC[{rel}] holds but SBSNNI[{rel}] does not"));
        }
        if sbsnni.holds() != pbndc.holds() {
            out.push(format!("SBSNNI[{rel}] and PBNDC[{rel}] disagree"));
        }
        if sbsnni.holds() && bndc.fails() {
            out.push(format!("SBSNNI[{rel}] holds but BNDC[{rel}] fails"));
        }
        if bsnni.fails() && !bndc.fails() {
            out.push(format!("BSNNI[{rel}] fails but BNDC[{rel}] does not"));
        }
    }
    for p in Property::ALL {
        if let (Some(pw), Some(pb)) = (get(p, Relation::Pw), get(p, Relation::Pb)) {
            if pb.holds() && pw.fails() {
                out.push(format!("{p}[pb] holds but {p}[pw] fails"));
            }
            if pb.holds() && p != Property::Bndc && !pw.holds() {
                out.push(format!("{p}[pb] holds but {p}[pw] does not"));
            }
        }
    }
    out
}

/// All five properties under both relations, cross-validated.
pub fn security_report(spec: &Spec, e: &Term, opts: &CheckOptions) -> Result<SecurityReport, SemanticsError> {
    let mut verdicts = Vec::new();
    for rel in [Relation::Pw, Relation::Pb] {
        for p in Property::ALL {
            verdicts.push(check(spec, e, p, rel, opts)?);
        }
    }
    let inconsistencies = taxonomy_violations(&verdicts);
    Ok(SecurityReport { verdicts, inconsistencies })
}
