//! Probabilistic process calculus with noninterference checking.
//!
//! Terms are parsed from `.pproc` text, given a strictly alternating
//! probabilistic transition system semantics, and compared with strong,
//! weak and branching probabilistic bisimilarities.

pub mod backforth;
pub mod equiv;
pub mod parser;
pub mod plts;
pub mod security;
pub mod semantics;
pub mod syntax;

pub use parser::{parse_spec, parse_term, parse_term_in, render_term, ParseError};
pub use plts::{Plts, StateId};
pub use semantics::{build_plts, build_plts_many, SemanticsError, DEFAULT_MAX_STATES};
pub use syntax::{
    Action, Diagnostic, DiagCode, Probability, Property, Relation, Sort, SourceSpan, Spec, Term,
    TermKind,
};
