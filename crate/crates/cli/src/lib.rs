//! Driver behind the `probsec` binary: runs the directives of a `.pproc`
//! file and renders the results as text or JSON.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use probsec_core::equiv::{bisimulation, EquivKind};
use probsec_core::plts::to_dot;
use probsec_core::security::{check, CheckOptions, Status};
use probsec_core::syntax::{validate_spec, Directive, Property, Relation, Spec, Term};
use probsec_core::{build_plts, build_plts_many, parse_spec, parse_term_in};
use serde::{Deserialize, Serialize};

pub const EXIT_HOLDS: u8 = 0;
pub const EXIT_FAILS: u8 = 1;
pub const EXIT_UNKNOWN: u8 = 2;
pub const EXIT_ERROR: u8 = 3;

/// One query to run against a specification.
#[derive(Clone, Debug)]
pub enum Job {
    Check { property: Property, relation: Relation, subject: String },
    Equiv { kind: EquivKind, left: String, right: String },
}

impl Job {
    fn from_directive(d: &Directive) -> Job {
        match d {
            Directive::Check { property, relation, subject, .. } => Job::Check {
                property: *property,
                relation: *relation,
                subject: subject.to_string(),
            },
            Directive::Equiv { relation, left, right, .. } => Job::Equiv {
                kind: EquivKind::from(*relation),
                left: left.to_string(),
                right: right.to_string(),
            },
        }
    }

    fn subjects(&self) -> Vec<&str> {
        match self {
            Job::Check { subject, .. } => vec![subject],
            Job::Equiv { left, right, .. } => vec![left, right],
        }
    }
}

/// Result of one directive. Field names are part of the JSON contract.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub property: Option<String>,
    pub relation: String,
    pub subject: String,
    /// `HOLDS`, `FAILS` or `UNKNOWN` for checks; `TRUE` or `FALSE` for equivalences.
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reason: Option<String>,
    pub millis: u64,
}

impl Entry {
    /// The text report line, e.g. `BSNNI[pb] E1 = HOLDS`.
    pub fn line(&self) -> String {
        let head = match &self.property {
            Some(p) => format!("{}[{}] {} = {}", p, self.relation, self.subject, self.status),
            None => format!("EQUIV[{}] {} = {}", self.relation, self.subject, self.status),
        };
        match self.witness.as_ref().or(self.reason.as_ref()) {
            Some(extra) => format!("{} ({})", head, extra),
            None => head,
        }
    }

    fn code(&self) -> u8 {
        match self.status.as_str() {
            "HOLDS" | "TRUE" => EXIT_HOLDS,
            "UNKNOWN" => EXIT_UNKNOWN,
            _ => EXIT_FAILS,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub directives: Vec<Entry>,
    /// Reachable state count of every constant a directive mentions.
    pub states: BTreeMap<String, usize>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub errors: Vec<String>,
}

impl Report {
    fn error(msg: String) -> Report {
        Report { errors: vec![msg], ..Report::default() }
    }

    pub fn exit_code(&self) -> u8 {
        if !self.errors.is_empty() {
            return EXIT_ERROR;
        }
        let codes: Vec<u8> = self.directives.iter().map(Entry::code).collect();
        if codes.contains(&EXIT_FAILS) {
            EXIT_FAILS
        } else if codes.contains(&EXIT_UNKNOWN) {
            EXIT_UNKNOWN
        } else {
            EXIT_HOLDS
        }
    }

    /// One line per directive, then one per error. No timings, so reruns
    /// are byte-identical.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.directives {
            let _ = writeln!(out, "{}", e.line());
        }
        for e in &self.errors {
            let _ = writeln!(out, "error: {}", e);
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises") + "\n"
    }
}

/// Runs every directive of the file at `path`.
pub fn run_file(path: &Path, opts: &CheckOptions) -> Report {
    match std::fs::read_to_string(path) {
        Ok(src) => run_source(&src, opts),
        Err(e) => Report::error(format!("{}: {}", path.display(), e)),
    }
}

/// Runs every directive of a specification given as text.
pub fn run_source(src: &str, opts: &CheckOptions) -> Report {
    match load(src) {
        Ok(spec) => {
            let jobs: Vec<Job> = spec.directives().iter().map(Job::from_directive).collect();
            run_jobs(&spec, &jobs, opts)
        }
        Err(e) => Report::error(format!("{:#}", e)),
    }
}

/// Parses and validates a specification.
pub fn load(src: &str) -> Result<Spec> {
    let spec = parse_spec(src).map_err(|e| anyhow!("{}", e))?;
    let diags = validate_spec(&spec);
    if !diags.is_empty() {
        let msgs: Vec<String> = diags
            .iter()
            .map(|d| match d.span {
                Some(s) => format!("{}: {:?}: {}", s, d.code, d.message),
                None => format!("{:?}: {}", d.code, d.message),
            })
            .collect();
        bail!("{}", msgs.join("\n"));
    }
    Ok(spec)
}

fn subject_term(spec: &Spec, text: &str) -> Result<Term> {
    parse_term_in(text, spec).map_err(|e| anyhow!("in `{}`: {}", text, e))
}

/// Runs `jobs` in order. The first error stops the run and is reported
/// after the results gathered so far.
pub fn run_jobs(spec: &Spec, jobs: &[Job], opts: &CheckOptions) -> Report {
    let mut report = Report::default();
    for job in jobs {
        match run_job(spec, job, opts, &mut report.states) {
            Ok(entry) => report.directives.push(entry),
            Err(e) => {
                report.errors.push(format!("{:#}", e));
                break;
            }
        }
    }
    report
}

fn run_job(spec: &Spec, job: &Job, opts: &CheckOptions, states: &mut BTreeMap<String, usize>) -> Result<Entry> {
    for s in job.subjects() {
        if !states.contains_key(s) {
            let p = build_plts(spec, &subject_term(spec, s)?, opts.max_states).with_context(|| s.to_string())?;
            states.insert(s.to_string(), p.len());
        }
    }
    let start = Instant::now();
    let mut entry = match job {
        Job::Check { property, relation, subject } => {
            let v = check(spec, &subject_term(spec, subject)?, *property, *relation, opts).with_context(|| subject.clone())?;
            let (witness, reason) = match &v.status {
                Status::Holds => (None, None),
                Status::Fails(w) => (Some(w.to_string()), None),
                Status::Unknown(why) => (None, Some(why.clone())),
            };
            Entry {
                kind: "check".into(),
                property: Some(property.to_string()),
                relation: relation.to_string(),
                subject: subject.clone(),
                status: v.status.keyword().into(),
                witness,
                reason,
                millis: 0,
            }
        }
        Job::Equiv { kind, left, right } => {
            let roots = [subject_term(spec, left)?, subject_term(spec, right)?];
            let (p, ids) = build_plts_many(spec, &roots, opts.max_states)?;
            let part = bisimulation(&p, *kind).map_err(|e| anyhow!("{}", e))?;
            Entry {
                kind: "equiv".into(),
                property: None,
                relation: kind.short_name().into(),
                subject: format!("{} {}", left, right),
                status: if part.same(ids[0], ids[1]) { "TRUE" } else { "FALSE" }.into(),
                witness: None,
                reason: None,
                millis: 0,
            }
        }
    };
    entry.millis = start.elapsed().as_millis() as u64;
    Ok(entry)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Raw,
    Restricted,
    Hidden,
}

/// DOT text for the PLTS of `name` (a constant or any term), optionally with the high actions
/// restricted or hidden.
pub fn export_dot(spec: &Spec, name: &str, variant: Variant, max_states: usize) -> Result<String> {
    let t = subject_term(spec, name)?;
    let (t, label) = match variant {
        Variant::Raw => (t, name.to_string()),
        Variant::Restricted => (Term::restrict(spec.high().clone(), t), format!("{} restricted", name)),
        Variant::Hidden => (Term::hide(spec.high().clone(), t), format!("{} hidden", name)),
    };
    let p = build_plts(spec, &t, max_states)?;
    Ok(to_dot(&p, &label))
}
