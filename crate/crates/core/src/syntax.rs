//! Process terms, action labels, specifications and their well-formedness rules.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::hash::{DefaultHasher, Hash, Hasher};
use std::sync::Arc;

use indexmap::IndexMap;
use num::{BigRational, One, Signed, Zero};
use thiserror::Error;

pub type Name = Arc<str>;
pub type ActionSet = BTreeSet<Name>;

/// An action label: the silent action or an observable name.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Action {
    Tau,
    Obs(Name),
}

impl Action {
    pub fn obs(name: &str) -> Action {
        Action::Obs(Arc::from(name))
    }

    pub fn is_tau(&self) -> bool {
        matches!(self, Action::Tau)
    }

    pub fn name(&self) -> Option<&Name> {
        match self {
            Action::Tau => None,
            Action::Obs(n) => Some(n),
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Tau => f.write_str("tau"),
            Action::Obs(n) => f.write_str(n),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("probability {0} is outside (0, 1]")]
pub struct ProbabilityError(pub BigRational);

/// An exact rational in `(0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Probability(BigRational);

impl Probability {
    pub fn new(value: BigRational) -> Result<Probability, ProbabilityError> {
        if value.is_positive() && value <= BigRational::one() {
            Ok(Probability(value))
        } else {
            Err(ProbabilityError(value))
        }
    }

    pub fn ratio(num: i64, den: i64) -> Result<Probability, ProbabilityError> {
        if den == 0 {
            return Err(ProbabilityError(BigRational::zero()));
        }
        Probability::new(BigRational::new(num.into(), den.into()))
    }

    pub fn one() -> Probability {
        Probability(BigRational::one())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn into_inner(self) -> BigRational {
        self.0
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Nondeterministic,
    Probabilistic,
}

/// Location of a node or diagnostic in the source text (1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct SourceSpan {
    pub line: u32,
    pub column: u32,
    pub length: u32,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

/// A process term. Cheap to clone; equality and hashing are structural and
/// ignore source spans.
#[derive(Clone)]
pub struct Term(Arc<Node>);

struct Node {
    kind: TermKind,
    span: Option<SourceSpan>,
    hash: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TermKind {
    Nil,
    Prefix(Action, Term),
    Choice(Term, Term),
    ProbChoice(Vec<(Probability, Term)>),
    Parallel(ActionSet, Term, Term),
    Restrict(ActionSet, Term),
    Hide(ActionSet, Term),
    Const(Name),
}

impl Term {
    pub fn new(kind: TermKind) -> Term {
        let mut h = DefaultHasher::new();
        kind.hash(&mut h);
        Term(Arc::new(Node {
            hash: h.finish(),
            kind,
            span: None,
        }))
    }

    pub fn nil() -> Term {
        Term::new(TermKind::Nil)
    }

    pub fn prefix(a: Action, body: Term) -> Term {
        Term::new(TermKind::Prefix(a, body))
    }

    /// `a.N`, i.e. `a.<1: N>`.
    pub fn prefix_n(a: Action, body: Term) -> Term {
        Term::prefix(a, Term::unit(body))
    }

    pub fn choice(l: Term, r: Term) -> Term {
        Term::new(TermKind::Choice(l, r))
    }

    /// Left-nested choice of the given summands; `0` when empty.
    pub fn sum(items: impl IntoIterator<Item = Term>) -> Term {
        let mut it = items.into_iter();
        match it.next() {
            None => Term::nil(),
            Some(first) => it.fold(first, Term::choice),
        }
    }

    pub fn prob(branches: Vec<(Probability, Term)>) -> Term {
        Term::new(TermKind::ProbChoice(branches))
    }

    /// `<1: N>`.
    pub fn unit(body: Term) -> Term {
        Term::prob(vec![(Probability::one(), body)])
    }

    pub fn parallel(sync: ActionSet, l: Term, r: Term) -> Term {
        Term::new(TermKind::Parallel(sync, l, r))
    }

    pub fn restrict(set: ActionSet, body: Term) -> Term {
        Term::new(TermKind::Restrict(set, body))
    }

    pub fn hide(set: ActionSet, body: Term) -> Term {
        Term::new(TermKind::Hide(set, body))
    }

    pub fn constant(name: &str) -> Term {
        Term::new(TermKind::Const(Arc::from(name)))
    }

    pub fn with_span(self, span: SourceSpan) -> Term {
        let node = &self.0;
        Term(Arc::new(Node {
            kind: node.kind.clone(),
            span: Some(span),
            hash: node.hash,
        }))
    }

    pub fn kind(&self) -> &TermKind {
        &self.0.kind
    }

    pub fn span(&self) -> Option<SourceSpan> {
        self.0.span
    }

    /// Sort of the term from its outermost constructor, following constants
    /// through `spec`.
    pub fn shallow_sort(&self, spec: &Spec) -> Result<Sort, SortError> {
        match self.kind() {
            TermKind::Nil | TermKind::Prefix(..) | TermKind::Choice(..) => {
                Ok(Sort::Nondeterministic)
            }
            TermKind::ProbChoice(_) => Ok(Sort::Probabilistic),
            TermKind::Parallel(_, l, _) => l.shallow_sort(spec),
            TermKind::Restrict(_, b) | TermKind::Hide(_, b) => b.shallow_sort(spec),
            TermKind::Const(k) => spec
                .const_sort(k)
                .ok_or_else(|| SortError::UndefinedConstant(k.clone())),
        }
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Term) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.hash == other.0.hash && self.0.kind == other.0.kind)
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{}`", self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Property {
    Bsnni,
    Bndc,
    Sbsnni,
    Pbndc,
    Sbndc,
}

impl Property {
    pub const ALL: [Property; 5] = [
        Property::Bsnni,
        Property::Bndc,
        Property::Sbsnni,
        Property::Pbndc,
        Property::Sbndc,
    ];

    pub fn parse(s: &str) -> Option<Property> {
        Some(match s {
            "BSNNI" => Property::Bsnni,
            "BNDC" => Property::Bndc,
            "SBSNNI" => Property::Sbsnni,
            "PBNDC" | "P_BNDC" => Property::Pbndc,
            "SBNDC" => Property::Sbndc,
            _ => return None,
        })
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::Bsnni => "BSNNI",
            Property::Bndc => "BNDC",
            Property::Sbsnni => "SBSNNI",
            Property::Pbndc => "PBNDC",
            Property::Sbndc => "SBNDC",
        })
    }
}

/// The two weak relations noninterference is parametric in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    Pw,
    Pb,
}

impl Relation {
    pub fn parse(s: &str) -> Option<Relation> {
        match s {
            "pw" => Some(Relation::Pw),
            "pb" => Some(Relation::Pb),
            _ => None,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Pw => "pw",
            Relation::Pb => "pb",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Directive {
    Check {
        property: Property,
        relation: Relation,
        subject: Name,
        span: Option<SourceSpan>,
    },
    Equiv {
        relation: Relation,
        left: Name,
        right: Name,
        span: Option<SourceSpan>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Definition {
    pub name: Name,
    pub body: Term,
    pub span: Option<SourceSpan>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Level {
    High,
    Low,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Declaration {
    pub name: Name,
    pub level: Level,
    pub span: Option<SourceSpan>,
}

/// A specification: declarations, constant definitions and directives.
#[derive(Clone, Debug, Default)]
pub struct Spec {
    declarations: Vec<Declaration>,
    high: ActionSet,
    low: ActionSet,
    definitions: IndexMap<Name, Definition>,
    directives: Vec<Directive>,
    issues: Vec<Diagnostic>,
    sorts: HashMap<Name, Sort>,
}

impl Spec {
    pub fn new(
        declarations: Vec<Declaration>,
        definitions: Vec<Definition>,
        directives: Vec<Directive>,
    ) -> Spec {
        let mut issues = Vec::new();
        let mut defs = IndexMap::new();
        for d in definitions {
            if defs.contains_key(&d.name) {
                issues.push(Diagnostic::new(
                    DiagCode::DuplicateDefinition,
                    d.span,
                    format!("constant {} is defined more than once", d.name),
                ));
            } else {
                defs.insert(d.name.clone(), d);
            }
        }
        let mut high = ActionSet::new();
        let mut low = ActionSet::new();
        let mut seen = HashSet::new();
        for d in &declarations {
            if &*d.name == "tau" {
                issues.push(Diagnostic::new(
                    DiagCode::TauDeclared,
                    d.span,
                    "tau cannot be declared high or low",
                ));
                continue;
            }
            if !seen.insert((d.name.clone(), d.level)) {
                issues.push(Diagnostic::new(
                    DiagCode::DuplicateDeclaration,
                    d.span,
                    format!("action {} is declared more than once", d.name),
                ));
            }
            match d.level {
                Level::High => high.insert(d.name.clone()),
                Level::Low => low.insert(d.name.clone()),
            };
        }
        let mut spec = Spec {
            declarations,
            high,
            low,
            definitions: defs,
            directives,
            issues,
            sorts: HashMap::new(),
        };
        spec.sorts = infer_const_sorts(&spec.definitions);
        spec
    }

    /// A spec with only declarations and definitions, no directives.
    pub fn from_defs(high: &[&str], low: &[&str], defs: Vec<(&str, Term)>) -> Spec {
        let mut decls = Vec::new();
        for h in high {
            decls.push(Declaration { name: Arc::from(*h), level: Level::High, span: None });
        }
        for l in low {
            decls.push(Declaration { name: Arc::from(*l), level: Level::Low, span: None });
        }
        let defs = defs
            .into_iter()
            .map(|(n, body)| Definition { name: Arc::from(n), body, span: None })
            .collect();
        Spec::new(decls, defs, Vec::new())
    }

    /// Same declarations and directives with extra definitions appended.
    pub fn with_definitions(&self, extra: Vec<Definition>) -> Spec {
        let mut defs: Vec<Definition> = self.definitions.values().cloned().collect();
        defs.extend(extra);
        let mut spec = Spec::new(self.declarations.clone(), defs, self.directives.clone());
        spec.issues.extend(self.issues.iter().cloned());
        spec
    }

    pub fn declarations(&self) -> &[Declaration] {
        &self.declarations
    }

    pub fn high(&self) -> &ActionSet {
        &self.high
    }

    pub fn low(&self) -> &ActionSet {
        &self.low
    }

    pub fn definitions(&self) -> impl Iterator<Item = &Definition> {
        self.definitions.values()
    }

    pub fn definition(&self, name: &str) -> Option<&Definition> {
        self.definitions.get(name)
    }

    pub fn body(&self, name: &str) -> Option<&Term> {
        self.definitions.get(name).map(|d| &d.body)
    }

    pub fn directives(&self) -> &[Directive] {
        &self.directives
    }

    pub fn const_sort(&self, name: &str) -> Option<Sort> {
        self.sorts.get(name).copied()
    }

    pub fn is_high(&self, a: &Action) -> bool {
        a.name().is_some_and(|n| self.high.contains(n))
    }
}

/// Sorts of constants. A constant whose sort depends only on itself (an
/// unguarded cycle) defaults to nondeterministic; validation reports it.
fn infer_const_sorts(defs: &IndexMap<Name, Definition>) -> HashMap<Name, Sort> {
    fn go(
        t: &Term,
        defs: &IndexMap<Name, Definition>,
        memo: &mut HashMap<Name, Sort>,
        active: &mut HashSet<Name>,
    ) -> Option<Sort> {
        match t.kind() {
            TermKind::Nil | TermKind::Prefix(..) | TermKind::Choice(..) => {
                Some(Sort::Nondeterministic)
            }
            TermKind::ProbChoice(_) => Some(Sort::Probabilistic),
            TermKind::Parallel(_, l, r) => go(l, defs, memo, active).or_else(|| go(r, defs, memo, active)),
            TermKind::Restrict(_, b) | TermKind::Hide(_, b) => go(b, defs, memo, active),
            TermKind::Const(k) => {
                if let Some(s) = memo.get(k) {
                    return Some(*s);
                }
                let def = defs.get(k)?;
                if !active.insert(k.clone()) {
                    return None;
                }
                let s = go(&def.body, defs, memo, active);
                active.remove(k);
                if let Some(s) = s {
                    memo.insert(k.clone(), s);
                }
                s
            }
        }
    }
    let mut memo = HashMap::new();
    for name in defs.keys() {
        let mut active = HashSet::new();
        let s = go(&Term::new(TermKind::Const(name.clone())), defs, &mut memo, &mut active)
            .unwrap_or(Sort::Nondeterministic);
        memo.insert(name.clone(), s);
    }
    memo
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SortError {
    #[error("undefined constant {0}")]
    UndefinedConstant(Name),
    #[error("parallel operands have different sorts")]
    MixedSortParallel,
}

/// Sort of a term, checking parallel operands agree throughout.
pub fn sort_of(term: &Term, spec: &Spec) -> Result<Sort, SortError> {
    match term.kind() {
        TermKind::Nil | TermKind::Prefix(..) | TermKind::Choice(..) => Ok(Sort::Nondeterministic),
        TermKind::ProbChoice(_) => Ok(Sort::Probabilistic),
        TermKind::Parallel(_, l, r) => {
            let (sl, sr) = (sort_of(l, spec)?, sort_of(r, spec)?);
            if sl != sr {
                return Err(SortError::MixedSortParallel);
            }
            Ok(sl)
        }
        TermKind::Restrict(_, b) | TermKind::Hide(_, b) => sort_of(b, spec),
        TermKind::Const(k) => spec
            .const_sort(k)
            .ok_or_else(|| SortError::UndefinedConstant(k.clone())),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DiagCode {
    WeightSumNotOne,
    UnguardedRecursion,
    UndefinedConstant,
    MixedSortParallel,
    HighLowOverlap,
    TauDeclared,
    SortMismatch,
    UndeclaredAction,
    DuplicateDefinition,
    DuplicateDeclaration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub code: DiagCode,
    pub span: Option<SourceSpan>,
    pub message: String,
}

impl Diagnostic {
    pub fn new(code: DiagCode, span: Option<SourceSpan>, message: impl Into<String>) -> Diagnostic {
        Diagnostic { code, span, message: message.into() }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.span {
            Some(s) => write!(f, "{}: {:?}: {}", s, self.code, self.message),
            None => write!(f, "{:?}: {}", self.code, self.message),
        }
    }
}

/// All well-formedness violations of a spec; empty iff valid.
pub fn validate_spec(spec: &Spec) -> Vec<Diagnostic> {
    let mut out = spec.issues.clone();
    for name in spec.high.intersection(&spec.low) {
        let span = spec
            .declarations
            .iter()
            .find(|d| &d.name == name)
            .and_then(|d| d.span);
        out.push(Diagnostic::new(
            DiagCode::HighLowOverlap,
            span,
            format!("action {} is declared both high and low", name),
        ));
    }
    for def in spec.definitions() {
        check_term(&def.body, def.span, spec, &mut out);
    }
    check_guardedness(spec, &mut out);
    for d in spec.directives() {
        let (names, span): (Vec<&Name>, _) = match d {
            Directive::Check { subject, span, .. } => (vec![subject], *span),
            Directive::Equiv { left, right, span, .. } => (vec![left, right], *span),
        };
        for n in names {
            if spec.definition(n).is_none() {
                out.push(Diagnostic::new(
                    DiagCode::UndefinedConstant,
                    span,
                    format!("directive refers to undefined constant {}", n),
                ));
            }
        }
    }
    out
}

/// Well-formedness of a single term against the declarations of `spec`.
pub fn validate_term(term: &Term, spec: &Spec) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    check_term(term, None, spec, &mut out);
    out
}

fn check_term(t: &Term, outer: Option<SourceSpan>, spec: &Spec, out: &mut Vec<Diagnostic>) {
    let span = t.span().or(outer);
    let check_set = |set: &ActionSet, out: &mut Vec<Diagnostic>| {
        for a in set {
            if !spec.high.contains(a) && !spec.low.contains(a) {
                out.push(Diagnostic::new(
                    DiagCode::UndeclaredAction,
                    span,
                    format!("action {} is not declared", a),
                ));
            }
        }
    };
    let expect_n = |sub: &Term, what: &str, out: &mut Vec<Diagnostic>| {
        if sub.shallow_sort(spec) == Ok(Sort::Probabilistic) {
            out.push(Diagnostic::new(
                DiagCode::SortMismatch,
                sub.span().or(span),
                format!("{} must be a nondeterministic process", what),
            ));
        }
    };
    match t.kind() {
        TermKind::Nil => {}
        TermKind::Prefix(a, body) => {
            if let Action::Obs(n) = a {
                if !spec.high.contains(n) && !spec.low.contains(n) {
                    out.push(Diagnostic::new(
                        DiagCode::UndeclaredAction,
                        span,
                        format!("action {} is not declared", n),
                    ));
                }
            }
            if body.shallow_sort(spec) == Ok(Sort::Nondeterministic) {
                out.push(Diagnostic::new(
                    DiagCode::SortMismatch,
                    body.span().or(span),
                    "prefix body must be a probabilistic process",
                ));
            }
            check_term(body, span, spec, out);
        }
        TermKind::Choice(l, r) => {
            expect_n(l, "choice operand", out);
            expect_n(r, "choice operand", out);
            check_term(l, span, spec, out);
            check_term(r, span, spec, out);
        }
        TermKind::ProbChoice(branches) => {
            let total = branches
                .iter()
                .fold(BigRational::zero(), |acc, (w, _)| acc + w.value());
            if !total.is_one() {
                out.push(Diagnostic::new(
                    DiagCode::WeightSumNotOne,
                    span,
                    format!("probabilistic choice weights sum to {}, not 1", total),
                ));
            }
            for (_, b) in branches {
                expect_n(b, "probabilistic branch", out);
                check_term(b, span, spec, out);
            }
        }
        TermKind::Parallel(set, l, r) => {
            check_set(set, out);
            if let (Ok(sl), Ok(sr)) = (l.shallow_sort(spec), r.shallow_sort(spec)) {
                if sl != sr {
                    out.push(Diagnostic::new(
                        DiagCode::MixedSortParallel,
                        span,
                        "parallel operands have different sorts",
                    ));
                }
            }
            check_term(l, span, spec, out);
            check_term(r, span, spec, out);
        }
        TermKind::Restrict(set, b) | TermKind::Hide(set, b) => {
            check_set(set, out);
            check_term(b, span, spec, out);
        }
        TermKind::Const(k) => {
            if spec.definition(k).is_none() {
                out.push(Diagnostic::new(
                    DiagCode::UndefinedConstant,
                    span,
                    format!("undefined constant {}", k),
                ));
            }
        }
    }
}

/// Constants reachable from `t` without passing an action prefix.
fn unguarded_refs(t: &Term, acc: &mut BTreeSet<Name>) {
    match t.kind() {
        TermKind::Nil | TermKind::Prefix(..) => {}
        TermKind::Choice(l, r) | TermKind::Parallel(_, l, r) => {
            unguarded_refs(l, acc);
            unguarded_refs(r, acc);
        }
        TermKind::ProbChoice(bs) => {
            for (_, b) in bs {
                unguarded_refs(b, acc);
            }
        }
        TermKind::Restrict(_, b) | TermKind::Hide(_, b) => unguarded_refs(b, acc),
        TermKind::Const(k) => {
            acc.insert(k.clone());
        }
    }
}

fn check_guardedness(spec: &Spec, out: &mut Vec<Diagnostic>) {
    let edges: HashMap<Name, BTreeSet<Name>> = spec
        .definitions()
        .map(|d| {
            let mut acc = BTreeSet::new();
            unguarded_refs(&d.body, &mut acc);
            (d.name.clone(), acc)
        })
        .collect();
    for def in spec.definitions() {
        // Does def.name reach itself along unguarded edges?
        let mut seen = HashSet::new();
        let mut stack: Vec<Name> = edges[&def.name].iter().cloned().collect();
        let mut cyclic = false;
        while let Some(n) = stack.pop() {
            if n == def.name {
                cyclic = true;
                break;
            }
            if seen.insert(n.clone()) {
                if let Some(next) = edges.get(&n) {
                    stack.extend(next.iter().cloned());
                }
            }
        }
        if cyclic {
            out.push(Diagnostic::new(
                DiagCode::UnguardedRecursion,
                def.span,
                format!("constant {} occurs in its own definition outside any action prefix", def.name),
            ));
        }
    }
}

/// Action labels occurring in prefixes of `term` and of every definition it
/// references, transitively.
pub fn alphabet(term: &Term, spec: &Spec) -> Result<BTreeSet<Action>, SortError> {
    fn go(
        t: &Term,
        spec: &Spec,
        seen: &mut HashSet<Name>,
        acc: &mut BTreeSet<Action>,
    ) -> Result<(), SortError> {
        match t.kind() {
            TermKind::Nil => Ok(()),
            TermKind::Prefix(a, b) => {
                acc.insert(a.clone());
                go(b, spec, seen, acc)
            }
            TermKind::Choice(l, r) | TermKind::Parallel(_, l, r) => {
                go(l, spec, seen, acc)?;
                go(r, spec, seen, acc)
            }
            TermKind::ProbChoice(bs) => bs.iter().try_for_each(|(_, b)| go(b, spec, seen, acc)),
            TermKind::Restrict(_, b) | TermKind::Hide(_, b) => go(b, spec, seen, acc),
            TermKind::Const(k) => {
                let body = spec
                    .body(k)
                    .ok_or_else(|| SortError::UndefinedConstant(k.clone()))?;
                if seen.insert(k.clone()) {
                    go(body, spec, seen, acc)?;
                }
                Ok(())
            }
        }
    }
    let mut acc = BTreeSet::new();
    go(term, spec, &mut HashSet::new(), &mut acc)?;
    Ok(acc)
}

pub fn action_set<'a>(names: impl IntoIterator<Item = &'a str>) -> ActionSet {
    names.into_iter().map(Arc::from).collect()
}
