//! `frog`: simulations, exact recursions and transience certificates for the
//! frog model on trees.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use frog_certify::{
    build_phi27_with, phi6_matrix, power_rowsum_certificate, theta_star, CertifyError, PileRule,
};
use frog_core::rational::{format_ratio, parse_ratio, ratio_to_f64};
use frog_core::{EngineConfig, FenceWake, FrogError, GraphKind, InitialCondition, RngStreamSpec, StopRule, WalkerKind};
use frog_experiments::{
    delta_float, delta_lower_bound, extrapolated_limit, fence_experiment_with, rde_pmf_exact, rde_sample,
    root_visit_census, ExperimentError, FenceOptions,
};
use frog_recurrence::{iterate_a, poisson_seq, ArithmeticMode, RecurrenceError};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use output::{Emitter, Format};

pub const SCHEMA_VERSION: u32 = 1;
const MAX_DELTA_N: u64 = 10_000_000;
const MAX_SAMPLE_DEPTH: u32 = 40;

#[derive(Parser, Debug)]
#[command(name = "frog", version, about = "Frog model simulations and transience certificates")]
struct Cli {
    /// Worker threads for replicate- and row-parallel work
    #[arg(long, global = true)]
    parallel: Option<usize>,
    /// Write the payload to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Directory for payload files named after the subcommand
    #[arg(long, global = true, env = "FROG_OUTPUT_DIR")]
    out_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
enum Command {
    /// Stunned-frog counts A_{d,k} with fences at depths 1..=kmax
    Fence(FenceArgs),
    /// Row-sum certificate for a power of a typed matrix
    Certify(CertifyArgs),
    /// Single-type criterion on the d-ary tree
    Mu(MuArgs),
    /// Iterate of the generating-function operator from g ≡ 1
    Recurrence(RecurrenceArgs),
    /// Law of the root-visit count of the self-similar model
    Rde(RdeArgs),
    /// Histogram of root visits within a horizon
    Census(CensusArgs),
    /// Escape-probability lower bound δ_n
    Delta(DeltaArgs),
}

#[derive(Args, Debug, Serialize)]
struct FenceArgs {
    #[arg(long)]
    d: u32,
    #[arg(long)]
    kmax: u32,
    #[arg(long)]
    reps: usize,
    #[arg(long, env = "FROG_SEED", default_value_t = 0)]
    seed: u64,
    /// What a frog woken on the fence does
    #[arg(long, value_enum, default_value_t = WakeArg::Stun)]
    fence_wake: WakeArg,
    /// Steps one frog may take in an epoch before the replicate is dropped
    #[arg(long, default_value_t = 1_000_000)]
    step_cap: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
enum WakeArg {
    Stun,
    Move,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
enum Model {
    Phi6,
    Phi27,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
enum PileArg {
    Shared,
    Split,
}

#[derive(Args, Debug, Serialize)]
struct CertifyArgs {
    #[arg(long, value_enum)]
    model: Model,
    #[arg(long)]
    power: u64,
    /// Evaluation point y = e^{-θ}, as p/q
    #[arg(long, default_value = "1/3")]
    y: String,
    /// Largest numerator or denominator allowed during powering, in bits
    #[arg(long, default_value_t = frog_certify::DEFAULT_BIT_LIMIT)]
    bit_limit: u64,
    /// How piles of more than three frogs share emptied counts (phi27)
    #[arg(long, value_enum, default_value_t = PileArg::Shared)]
    pile_rule: PileArg,
    /// Also write the matrix in canonical text form to this file
    #[arg(long)]
    dump_matrix: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct MuArgs {
    #[arg(long)]
    d: u32,
}

#[derive(Args, Debug, Serialize)]
struct RecurrenceArgs {
    #[arg(long)]
    n: u32,
    /// Point in [0, 1], as p/q
    #[arg(long)]
    x: String,
    #[arg(long)]
    exact: bool,
}

#[derive(Args, Debug, Serialize)]
struct RdeArgs {
    #[arg(long)]
    depth: u32,
    #[arg(long, conflicts_with = "sample")]
    exact: bool,
    /// Draw this many samples instead of computing the exact law
    #[arg(long)]
    sample: Option<u64>,
    #[arg(long, env = "FROG_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug, Serialize)]
struct CensusArgs {
    /// tree:D, homtree:D, alt56:R (root with R children) or zglue
    #[arg(long)]
    graph: String,
    #[arg(long)]
    horizon: u64,
    #[arg(long)]
    reps: u64,
    #[arg(long, env = "FROG_SEED", default_value_t = 0)]
    seed: u64,
    /// Frogs stop on reaching this depth
    #[arg(long)]
    depth_cap: Option<u32>,
    #[arg(long, value_enum, default_value_t = WalkerArg::Simple)]
    walker: WalkerArg,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
enum WalkerArg {
    Simple,
    NonBacktracking,
    SelfSimilar,
}

#[derive(Args, Debug, Serialize)]
struct DeltaArgs {
    #[arg(long)]
    n: u64,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Resource(String),
    /// The certificate was computed and did not pass.
    CertificateFailed,
}

impl From<FrogError> for Failure {
    fn from(e: FrogError) -> Self {
        match e {
            FrogError::AddressOverflow(_) => Failure::Resource(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<ExperimentError> for Failure {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Engine(inner) => inner.into(),
            ExperimentError::Input(_) => Failure::Usage(e.to_string()),
            ExperimentError::Bound { .. } | ExperimentError::Csv(_) => Failure::Resource(e.to_string()),
        }
    }
}

impl From<RecurrenceError> for Failure {
    fn from(e: RecurrenceError) -> Self {
        match e {
            RecurrenceError::Bound { .. } => Failure::Resource(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<CertifyError> for Failure {
    fn from(e: CertifyError) -> Self {
        match e {
            CertifyError::Resource { .. } | CertifyError::Numeric(_) => Failure::Resource(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Resource(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    let result = match cli.parallel {
        Some(0) => Err(Failure::Usage("--parallel must be at least 1".into())),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| run(&cli)),
            Err(e) => Err(Failure::Resource(e.to_string())),
        },
        None => run(&cli),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::CertificateFailed) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Resource(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    let em = Emitter::new(cli, &cli.command)?;
    match &cli.command {
        Command::Fence(a) => fence(&em, a),
        Command::Certify(a) => certify(&em, a),
        Command::Mu(a) => mu(&em, a),
        Command::Recurrence(a) => recurrence(&em, a),
        Command::Rde(a) => rde(&em, a),
        Command::Census(a) => census(&em, a),
        Command::Delta(a) => delta(&em, a),
    }
}

fn ratio_arg(flag: &str, s: &str) -> Result<num_rational::BigRational, Failure> {
    parse_ratio(s).map_err(|_| Failure::Usage(format!("--{flag}: expected p/q, got {s:?}")))
}

fn fence(em: &Emitter, a: &FenceArgs) -> Outcome {
    let opts = FenceOptions {
        fence_wake: match a.fence_wake {
            WakeArg::Stun => FenceWake::Stun,
            WakeArg::Move => FenceWake::Move,
        },
        step_cap: a.step_cap,
    };
    let stats = fence_experiment_with(a.d, a.kmax, a.reps, a.seed, &opts)?;
    match em.format(Format::Csv) {
        Format::Csv => {
            let mut buf = Vec::new();
            stats.write_csv(&mut buf)?;
            em.write(&buf)
        }
        Format::Json => em.json(&stats),
    }
}

fn certify(em: &Emitter, a: &CertifyArgs) -> Outcome {
    em.json_only()?;
    let y = ratio_arg("y", &a.y)?;
    let rule = match a.pile_rule {
        PileArg::Shared => PileRule::Shared,
        PileArg::Split => PileRule::Split,
    };
    let matrix = match a.model {
        Model::Phi6 => phi6_matrix(),
        Model::Phi27 => build_phi27_with(rule),
    };
    if let Some(path) = &a.dump_matrix {
        std::fs::write(path, matrix.canonical_text())?;
    }
    let m = matrix.eval(&y)?;
    let cert = power_rowsum_certificate(&matrix.id, &y, &m, a.power, a.bit_limit)?;
    em.json(&cert)?;
    if cert.pass {
        Ok(())
    } else {
        Err(Failure::CertificateFailed)
    }
}

fn mu(em: &Emitter, a: &MuArgs) -> Outcome {
    em.json_only()?;
    if a.d < 2 {
        return Err(Failure::Usage(format!("--d {}: need d >= 2", a.d)));
    }
    em.json(&theta_star(a.d))
}

fn recurrence(em: &Emitter, a: &RecurrenceArgs) -> Outcome {
    em.json_only()?;
    let x = ratio_arg("x", &a.x)?;
    let mode = if a.exact { ArithmeticMode::Exact } else { ArithmeticMode::Float };
    let v = iterate_a(a.n, &x, mode)?;
    let seq = poisson_seq(a.n as usize);
    let bound = seq.bound(a.n as usize, ratio_to_f64(&x));
    em.json(&json!({
        "n": a.n,
        "x": format_ratio(&x),
        "mode": mode,
        "value": v,
        "value_float": v.to_f64(),
        "a_n": seq.a(a.n as usize),
        "poisson_bound": bound,
        "slack": bound - v.to_f64(),
    }))
}

fn rde(em: &Emitter, a: &RdeArgs) -> Outcome {
    match a.sample {
        None => {
            let pmf = rde_pmf_exact(a.depth)?;
            match em.format(Format::Json) {
                Format::Json => em.json(&pmf),
                Format::Csv => {
                    let mut s = String::from("v,probability\n");
                    for (v, p) in pmf.masses().iter().enumerate() {
                        s.push_str(&format!("{v},{}\n", format_ratio(p)));
                    }
                    em.write(s.as_bytes())
                }
            }
        }
        Some(reps) => {
            if reps == 0 {
                return Err(Failure::Usage("--sample must be positive".into()));
            }
            if a.depth > MAX_SAMPLE_DEPTH {
                return Err(Failure::Resource(format!(
                    "--depth {} exceeds the sampling limit {MAX_SAMPLE_DEPTH}",
                    a.depth
                )));
            }
            let draws: Vec<u64> = (0..reps)
                .into_par_iter()
                .map(|i| rde_sample(a.depth, &mut RngStreamSpec::new(a.seed, i).rng()))
                .collect();
            let max = draws.iter().copied().max().unwrap_or(0) as usize;
            let mut counts = vec![0u64; max + 1];
            for d in draws {
                counts[d as usize] += 1;
            }
            match em.format(Format::Json) {
                Format::Json => em.json(&json!({ "k": a.depth, "reps": reps, "seed": a.seed, "counts": counts })),
                Format::Csv => {
                    let mut s = String::from("v,count\n");
                    for (v, c) in counts.iter().enumerate() {
                        s.push_str(&format!("{v},{c}\n"));
                    }
                    em.write(s.as_bytes())
                }
            }
        }
    }
}

fn parse_graph(s: &str) -> Result<GraphKind, Failure> {
    let bad = || Failure::Usage(format!("--graph: unknown graph {s:?} (tree:D, homtree:D, alt56:R, zglue)"));
    let (name, arg) = match s.split_once(':') {
        Some((n, a)) => (n, Some(a.parse::<u32>().map_err(|_| bad())?)),
        None => (s, None),
    };
    let g = match (name, arg) {
        ("tree", Some(d)) => GraphKind::DAryTree(d),
        ("homtree", Some(d)) => GraphKind::HomogeneousTree(d),
        ("alt56", Some(r)) => GraphKind::AlternatingTree56 { root_children: r },
        ("zglue", None) => GraphKind::ZGlueTree6,
        _ => return Err(bad()),
    };
    g.validate()?;
    Ok(g)
}

fn census(em: &Emitter, a: &CensusArgs) -> Outcome {
    let graph = parse_graph(&a.graph)?;
    let walker = match a.walker {
        WalkerArg::Simple => WalkerKind::Simple,
        WalkerArg::NonBacktracking => WalkerKind::NonBacktracking,
        WalkerArg::SelfSimilar => WalkerKind::SelfSimilar,
    };
    let mut config = match walker {
        WalkerKind::SelfSimilar => EngineConfig::self_similar(graph),
        w => EngineConfig::new(graph, InitialCondition::OnePerSite, w),
    };
    if let Some(c) = a.depth_cap {
        config = config.with_rule(StopRule::DepthCap(c));
    }
    let c = root_visit_census(&config, a.horizon, a.reps, a.seed)?;
    match em.format(Format::Json) {
        Format::Json => em.json(&c),
        Format::Csv => {
            let mut s = String::from("root_visits,replicates\n");
            for (v, n) in &c.histogram {
                s.push_str(&format!("{v},{n}\n"));
            }
            em.write(s.as_bytes())
        }
    }
}

fn delta(em: &Emitter, a: &DeltaArgs) -> Outcome {
    em.json_only()?;
    if a.n > MAX_DELTA_N {
        return Err(Failure::Resource(format!("--n {} exceeds {MAX_DELTA_N}", a.n)));
    }
    let b = delta_lower_bound(a.n)?;
    em.json(&json!({
        "n": a.n,
        "delta": format_ratio(&b.delta),
        "closed_form": format_ratio(&b.closed_form),
        "limit": format_ratio(&b.limit),
        "delta_float": delta_float(a.n),
        "extrapolated_limit": extrapolated_limit(a.n),
    }))
}
