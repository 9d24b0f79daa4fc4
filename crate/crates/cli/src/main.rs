mod render;
mod report;

use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use plumb_core::oracle::{self, MAX_ENUMERATION};
use plumb_core::rational::parse_rat;
use plumb_core::{parse_graph, Cycle, Definiteness, Error, PlumbingGraph, RatCycle, SeriesKind, Singularity};
use serde_json::{json, Map, Value};

#[derive(Parser)]
#[command(name = "plumb", version, about = "Invariants of the generic analytic structure on a plumbing graph")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Cap on search nodes and enumerated lattice points
    #[arg(long, global = true, value_name = "N")]
    max_points: Option<u64>,
    /// Cross-check the invariants by brute-force enumeration
    #[arg(long, global = true)]
    oracle: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Input {
    /// Graph file, or `-` for stdin
    graph: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Validate the graph and report whether its form is negative definite
    Check(Input),
    /// Classification, distinguished cycles, genera and discriminant group
    Invariants {
        #[command(flatten)]
        input: Input,
        /// Chern class for an h^1 entry, e.g. `-1/2,0,1`
        #[arg(long, allow_hyphen_values = true)]
        chern: Option<String>,
        /// Cycle for the h^1 entry; the global value is reported without it
        #[arg(long, requires = "chern")]
        cycle: Option<String>,
        /// Window for Hilbert and Poincaré truncations
        #[arg(long)]
        bound: Option<String>,
    },
    /// h^1 of the natural line bundle with the given Chern class
    H1 {
        #[command(flatten)]
        input: Input,
        #[arg(long, allow_hyphen_values = true)]
        chern: String,
        #[arg(long)]
        cycle: Option<String>,
    },
    /// Hilbert series coefficients on the window `0 <= l_0 <= bound`
    Hilbert {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        bound: String,
    },
    /// Poincaré series coefficients on the window `0 <= l_0 <= bound`
    Poincare {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        bound: String,
    },
    /// Membership of a Chern class in the analytic semigroup
    Semigroup {
        #[command(flatten)]
        input: Input,
        #[arg(long, allow_hyphen_values = true)]
        chern: String,
    },
    /// Z_K, Z_min, Z_coh and Z_max
    Cycles(Input),
    /// Recompute the invariants by brute force and compare
    Oracle(Input),
}

#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Io(String),
    #[error("brute-force cross-check failed")]
    Mismatch,
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Core(Error::Infeasible(_)) => 2,
            Failure::Core(Error::ResourceLimit(_)) => 3,
            Failure::Core(_) | Failure::Io(_) => 1,
            Failure::Mismatch => 4,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("PLUMB_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !matches!(e, Failure::Mismatch) {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let (name, input) = match &cli.command {
        Command::Check(i) => ("check", i),
        Command::Invariants { input, .. } => ("invariants", input),
        Command::H1 { input, .. } => ("h1", input),
        Command::Hilbert { input, .. } => ("hilbert", input),
        Command::Poincare { input, .. } => ("poincare", input),
        Command::Semigroup { input, .. } => ("semigroup", input),
        Command::Cycles(i) => ("cycles", i),
        Command::Oracle(i) => ("oracle", i),
    };
    let graph = load(&input.graph)?;
    let mut doc = report::document(name);
    doc.insert("graph".into(), report::graph(&graph));
    if let Command::Check(_) = cli.command {
        let verdict = graph.intersection_form().check_negative_definite();
        let witness = match &verdict {
            Definiteness::NegativeDefinite => Value::Null,
            Definiteness::Witness(x) => report::rat_cycle(x),
        };
        doc.insert("negative_definite".into(), json!(witness.is_null()));
        doc.insert("witness".into(), witness);
        emit(cli.format, &doc);
        return match verdict {
            Definiteness::NegativeDefinite => Ok(()),
            Definiteness::Witness(x) => Err(Error::NotNegativeDefinite { witness: x.to_string() }.into()),
        };
    }
    let mut s = Singularity::new(graph)?;
    if let Some(n) = cli.max_points {
        s = s.with_max_nodes(n);
    }
    let cap = cli.max_points.map_or(MAX_ENUMERATION, u128::from);
    match &cli.command {
        Command::Check(_) => unreachable!("handled above"),
        Command::Invariants { chern, cycle, bound, .. } => {
            invariants(&s, &mut doc)?;
            if let Some(c) = chern {
                doc.insert("h1".into(), h1_entry(&s, c, cycle.as_deref())?);
            }
            if let Some(b) = bound {
                let b = parse_cycle(b)?;
                for kind in [SeriesKind::Hilbert, SeriesKind::Poincare] {
                    doc.insert(kind.to_string(), series(&s, kind, &b, cap)?);
                }
            }
        }
        Command::H1 { chern, cycle, .. } => {
            doc.insert("h1".into(), h1_entry(&s, chern, cycle.as_deref())?);
        }
        Command::Hilbert { bound, .. } => {
            doc.insert("hilbert".into(), series(&s, SeriesKind::Hilbert, &parse_cycle(bound)?, cap)?);
        }
        Command::Poincare { bound, .. } => {
            doc.insert("poincare".into(), series(&s, SeriesKind::Poincare, &parse_cycle(bound)?, cap)?);
        }
        Command::Semigroup { chern, .. } => {
            let l = parse_rat_cycle(chern)?;
            let member = s.in_analytic_semigroup(&l)?;
            doc.insert("chern".into(), report::rat_cycle(&l));
            doc.insert("member".into(), json!(member));
        }
        Command::Cycles(_) => cycles(&s, &mut doc)?,
        Command::Oracle(_) => {}
    }
    let mut passed = true;
    if cli.oracle || matches!(cli.command, Command::Oracle(_)) {
        let checks = oracle::audit(&s, cap)?;
        passed = checks.iter().all(|c| c.passed);
        doc.insert("oracle".into(), report::audit(&checks));
    }
    emit(cli.format, &doc);
    if passed {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}

fn load(path: &PathBuf) -> Result<PlumbingGraph, Failure> {
    let text = if path.as_os_str() == "-" {
        let mut buf = String::new();
        io::stdin().read_to_string(&mut buf).map_err(|e| Failure::Io(format!("stdin: {e}")))?;
        buf
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?
    };
    Ok(parse_graph(&text)?)
}

fn emit(format: Format, doc: &Map<String, Value>) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(doc).expect("serializable")),
        Format::Text => print!("{}", render::text(doc)),
    }
}

fn split_vector(s: &str) -> Vec<&str> {
    s.trim()
        .trim_start_matches('[')
        .trim_end_matches(']')
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .collect()
}

fn parse_rat_cycle(s: &str) -> Result<RatCycle, Error> {
    split_vector(s).into_iter().map(parse_rat).collect::<Result<Vec<_>, _>>().map(RatCycle)
}

fn parse_cycle(s: &str) -> Result<Cycle, Error> {
    split_vector(s)
        .into_iter()
        .map(|t| t.parse::<i64>().map_err(|_| Error::InvalidArgument(format!("not an integer: `{t}`"))))
        .collect::<Result<Vec<_>, _>>()
        .map(Cycle)
}

fn invariants(s: &Singularity, doc: &mut Map<String, Value>) -> Result<(), Error> {
    let lat = s.lattice();
    doc.insert("classification".into(), report::classification(&s.classify()?));
    doc.insert("z_k".into(), report::rat_cycle(lat.anticanonical_cycle()));
    doc.insert("z_min".into(), report::cycle(&lat.fundamental_cycle()));
    doc.insert("z_coh".into(), report::opt_cycle(s.cohomological_cycle()?.as_ref()));
    doc.insert("z_max".into(), report::opt_cycle(s.maximal_ideal_cycle()?.as_ref()));
    doc.insert("p_g".into(), json!(s.geometric_genus_generic()?));
    doc.insert("p_g_universal_abelian_cover".into(), json!(s.pg_universal_abelian_cover()?));
    doc.insert("discriminant_group".into(), report::discriminant_group(lat));
    Ok(())
}

fn h1_entry(s: &Singularity, chern: &str, cycle: Option<&str>) -> Result<Value, Error> {
    let l = s.lattice().dual_element(parse_rat_cycle(chern)?)?;
    match cycle {
        Some(z) => {
            let z = parse_cycle(z)?;
            let r = s.h1_natural_on_z(&z, &l)?;
            Ok(report::h1_on_cycle(&l, &z, &r, s.h1_generic_bundle(&z, &l)?))
        }
        None => Ok(report::h1_global(&l, s.h1_natural_global(&l)?)),
    }
}

fn series(s: &Singularity, kind: SeriesKind, bound: &Cycle, cap: u128) -> Result<Value, Error> {
    let points = bound
        .0
        .iter()
        .try_fold(s.lattice().discriminant_group().order() as u128, |acc, &b| {
            acc.checked_mul(u128::try_from(b + 1).ok()?)
        });
    if points.is_none_or(|p| p > cap) {
        return Err(Error::ResourceLimit(format!("series window has more than {cap} coefficients")));
    }
    let t = s.series_truncation(kind, bound)?;
    Ok(report::truncation(s.lattice(), &t))
}

fn cycles(s: &Singularity, doc: &mut Map<String, Value>) -> Result<(), Error> {
    let lat = s.lattice();
    let (Some(coh), Some(max)) = (s.cohomological_cycle()?, s.maximal_ideal_cycle()?) else {
        return Err(Error::Infeasible("the graph is rational, so Z_coh and Z_max are undefined".into()));
    };
    let c = s.classify()?;
    let zk = lat.anticanonical_cycle();
    let sum = &coh + &max;
    doc.insert("z_k".into(), report::rat_cycle(zk));
    doc.insert("z_min".into(), report::cycle(&lat.fundamental_cycle()));
    doc.insert("z_coh".into(), report::cycle(&coh));
    doc.insert("z_max".into(), report::cycle(&max));
    doc.insert("numerically_gorenstein".into(), json!(c.numerically_gorenstein));
    doc.insert("elliptic".into(), json!(c.elliptic));
    doc.insert("z_coh_plus_z_max".into(), report::cycle(&sum));
    doc.insert("z_coh_plus_z_max_equals_z_k".into(), json!(&sum.to_rat() == zk));
    Ok(())
}
