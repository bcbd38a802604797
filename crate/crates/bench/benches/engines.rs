use criterion::{criterion_group, criterion_main, Criterion};
use probsec_core::equiv::{bisimulation, EquivKind};
use probsec_core::security::{check, CheckOptions};
use probsec_core::syntax::{Property, Relation, Term};
use probsec_core::{build_plts_many, parse_spec, parse_term_in, DEFAULT_MAX_STATES};

const FIG3: &str = include_str!("../../../models/fig3.pproc");
const LOTTERY: &str = include_str!("../../../models/lottery.pproc");
const BNDC: &str = include_str!("../../../models/bndc.pproc");

/// A ring of `n` components that pass a token with probability 1/2 per round.
fn ring(n: usize) -> (probsec_core::Spec, Term) {
    let mut src = String::from("low go, stay;\n");
    for i in 0..n {
        src.push_str(&format!("R{i} := go.<1/2: R{i}, 1/2: stay.R{i}>;\n"));
    }
    let spec = parse_spec(&src).unwrap();
    let mut t = parse_term_in("R0", &spec).unwrap();
    for i in 1..n {
        t = parse_term_in(&format!("({t}) |[go]| R{i}"), &spec).unwrap();
    }
    (spec, t)
}

fn engines(c: &mut Criterion) {
    let (spec, t) = ring(6);
    let (p, _) = build_plts_many(&spec, &[t.clone()], DEFAULT_MAX_STATES).unwrap();
    let mut g = c.benchmark_group("refinement");
    for k in [EquivKind::StrongProb, EquivKind::StrongMix, EquivKind::WeakProb, EquivKind::BranchingProb] {
        g.bench_function(k.short_name(), |b| b.iter(|| bisimulation(&p, k).unwrap()));
    }
    g.finish();
    c.bench_function("build ring of 6", |b| b.iter(|| build_plts_many(&spec, &[t.clone()], DEFAULT_MAX_STATES).unwrap()));
}

fn security(c: &mut Criterion) {
    let opts = CheckOptions::default();
    let mut g = c.benchmark_group("security");
    for (name, src, subject, prop) in [
        ("SBSNNI composite", FIG3, "C", Property::Sbsnni),
        ("BSNNI lottery", LOTTERY, "Lottery'", Property::Bsnni),
        ("BNDC attacker search", BNDC, "E2", Property::Bndc),
    ] {
        let spec = parse_spec(src).unwrap();
        let e = parse_term_in(subject, &spec).unwrap();
        g.bench_function(name, |b| b.iter(|| check(&spec, &e, prop, Relation::Pb, &opts).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, engines, security);
criterion_main!(benches);
