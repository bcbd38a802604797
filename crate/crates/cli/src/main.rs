use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use probsec_cli::{export_dot, load, run_file, run_jobs, Job, Report, Variant, EXIT_ERROR, EXIT_FAILS, EXIT_HOLDS};
use probsec_core::equiv::{bisimulation, coarsest_by_enumeration, EquivKind};
use probsec_core::security::CheckOptions;
use probsec_core::syntax::{Property, Relation};
use probsec_core::{build_plts_many, parse_term_in, DEFAULT_MAX_STATES};

#[derive(Parser)]
#[command(name = "probsec", version, about = "Noninterference checks for probabilistic processes")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Opts {
    /// State budget for every PLTS built.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_STATES)]
    max_states: usize,
    /// Prefix depth of enumerated BNDC attackers.
    #[arg(long, global = true, default_value_t = 3)]
    bndc_depth: usize,
    /// Summands per choice in enumerated BNDC attackers.
    #[arg(long, global = true, default_value_t = 2)]
    bndc_width: usize,
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run every directive in a file.
    Check { file: PathBuf },
    /// Compare two processes.
    Equiv {
        file: PathBuf,
        /// One of p, pm, pw, pb.
        #[arg(long, value_parser = parse_kind)]
        rel: EquivKind,
        left: String,
        right: String,
    },
    /// Check one security property.
    Secure {
        file: PathBuf,
        /// BSNNI, BNDC, SBSNNI, PBNDC or SBNDC.
        #[arg(long, value_parser = parse_prop)]
        prop: Property,
        /// pw or pb.
        #[arg(long, value_parser = parse_rel)]
        rel: Relation,
        name: String,
    },
    /// Print the PLTS of a process as DOT.
    Graph {
        file: PathBuf,
        name: String,
        #[arg(long, conflicts_with = "hide_high")]
        restrict_high: bool,
        #[arg(long)]
        hide_high: bool,
    },
    /// Cross-check the refinement engine against exhaustive enumeration.
    Oracle {
        file: PathBuf,
        #[arg(long, value_parser = parse_kind)]
        rel: EquivKind,
        /// Processes to put in one system.
        #[arg(required = true)]
        names: Vec<String>,
    },
}

fn parse_kind(s: &str) -> Result<EquivKind, String> {
    match EquivKind::parse(s) {
        Some(k @ (EquivKind::StrongProb | EquivKind::StrongMix | EquivKind::WeakProb | EquivKind::BranchingProb)) => Ok(k),
        _ => Err(format!("unknown relation `{}` (expected p, pm, pw or pb)", s)),
    }
}

fn parse_prop(s: &str) -> Result<Property, String> {
    Property::parse(&s.to_ascii_uppercase()).ok_or_else(|| format!("unknown property `{}`", s))
}

fn parse_rel(s: &str) -> Result<Relation, String> {
    Relation::parse(s).ok_or_else(|| format!("unknown relation `{}` (expected pw or pb)", s))
}

fn emit(report: &Report, json: bool) -> u8 {
    if json {
        print!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    report.exit_code()
}

fn read_spec(file: &PathBuf) -> anyhow::Result<probsec_core::Spec> {
    let src = std::fs::read_to_string(file).map_err(|e| anyhow::anyhow!("{}: {}", file.display(), e))?;
    load(&src)
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    let opts = CheckOptions {
        max_states: cli.opts.max_states,
        bndc_depth: cli.opts.bndc_depth,
        bndc_width: cli.opts.bndc_width,
        ..CheckOptions::default()
    };
    let json = cli.opts.json;
    Ok(match cli.cmd {
        Cmd::Check { file } => emit(&run_file(&file, &opts), json),
        Cmd::Equiv { file, rel, left, right } => {
            let spec = read_spec(&file)?;
            emit(&run_jobs(&spec, &[Job::Equiv { kind: rel, left, right }], &opts), json)
        }
        Cmd::Secure { file, prop, rel, name } => {
            let spec = read_spec(&file)?;
            emit(&run_jobs(&spec, &[Job::Check { property: prop, relation: rel, subject: name }], &opts), json)
        }
        Cmd::Graph { file, name, restrict_high, hide_high } => {
            let spec = read_spec(&file)?;
            let variant = match (restrict_high, hide_high) {
                (true, _) => Variant::Restricted,
                (_, true) => Variant::Hidden,
                _ => Variant::Raw,
            };
            print!("{}", export_dot(&spec, &name, variant, opts.max_states)?);
            EXIT_HOLDS
        }
        Cmd::Oracle { file, rel, names } => {
            let spec = read_spec(&file)?;
            let roots = names
                .iter()
                .map(|n| parse_term_in(n, &spec).map_err(|e| anyhow::anyhow!("in `{}`: {}", n, e)))
                .collect::<anyhow::Result<Vec<_>>>()?;
            let (p, _) = build_plts_many(&spec, &roots, opts.max_states)?;
            let engine = bisimulation(&p, rel).map_err(|e| anyhow::anyhow!("{}", e))?;
            let oracle = coarsest_by_enumeration(&p, rel).map_err(|e| anyhow::anyhow!("{}", e))?;
            if engine == oracle {
                println!("{}: engine and enumeration agree on {} states, {} blocks", rel, p.len(), engine.num_blocks());
                EXIT_HOLDS
            } else {
                println!("{}: engine and enumeration disagree\nengine:\n{}enumeration:\n{}", rel, engine, oracle);
                EXIT_FAILS
            }
        }
    })
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::from(EXIT_ERROR)
        }
    }
}
