use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chainforge::chains::{
    assemble_chain, chain_from_positive_family, check_assembly, plan, probe_maximality, Carrier, ChainError, ChainTarget,
};
use chainforge::compactsets::CompactDescriptor;
use chainforge::forcing::{generic_run, is_condition, RunConfig, DEFAULT_DENOM_CEILING};
use chainforge::gmunu::{dense_jumps_check, is_copy, jump_between, positive_family_check, supp, Family, GraphShape, SymbolicSet};
use chainforge::henson::{saturation_report, scheduled_coverage};
use chainforge::qline::{Endpoint, Window};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

mod verify;

#[derive(Parser)]
#[command(name = "chainforge", version, about = "Henson-graph forcing runs and maximal chains of copies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the forcing construction and write run.jsonl, union.dot and saturation.json.
    Henson(HensonArgs),
    /// Assemble a chain realising a target order and probe it for maximality.
    Chain(ChainArgs),
    /// Classify a compact-set descriptor.
    Classify {
        descriptor: String,
    },
    /// Symbolic-set operations on G_{μν}.
    Gmunu {
        #[command(subcommand)]
        op: GmunuOp,
    },
    /// Run the invariant battery.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct HensonArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(3..))]
    n: u64,
    #[arg(long)]
    steps: usize,
    /// Open interval `lo..hi` with rational ends.
    #[arg(long, allow_hyphen_values = true, default_value = "-10..10")]
    window: String,
    /// Largest denominator streamed into the `D_q` schedule.
    #[arg(long, default_value_t = 64)]
    denom_bound: u64,
    #[arg(long, env = "CHAINFORGE_DENOM_CEILING", default_value_t = DEFAULT_DENOM_CEILING)]
    denom_ceiling: u64,
    /// Largest `|H|` in the `D^H_{K,m}` schedule.
    #[arg(long, default_value_t = 3)]
    size_bound: usize,
    /// Largest `|H|` in the saturation report.
    #[arg(long, default_value_t = 2)]
    report_size_bound: usize,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct ChainArgs {
    #[arg(long)]
    target: String,
    #[arg(long, default_value_t = 3)]
    depth: usize,
    #[arg(long, default_value_t = 1000)]
    probes: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Cut the chain from a positive family instead of assembling it.
    #[arg(long)]
    family: Option<String>,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum GmunuOp {
    /// Whether a symbolic set is a copy of G_{μν}.
    Copy {
        #[arg(long)]
        set: String,
        /// `mu,nu`, e.g. `omega,3`.
        #[arg(long)]
        shape: String,
    },
    /// Components met by a symbolic set.
    Supp {
        #[arg(long)]
        set: String,
    },
    /// A jump pair between two copies of G_{ωω}, `from ⊊ to`.
    Jump {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Randomised positive-family axiom check.
    Family {
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Dense-jump check over a seeded chain of copies of G_{ωω}.
    Jumps {
        #[arg(long, default_value_t = 20)]
        len: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    probes: usize,
    #[arg(long, default_value_t = 200)]
    samples: usize,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

fn config(e: impl std::fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}

/// `Ok(true)` when every invariant held.
type Outcome = Result<bool, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Henson(a) => cmd_henson(a),
        Command::Chain(a) => cmd_chain(a),
        Command::Classify { descriptor } => cmd_classify(&descriptor),
        Command::Gmunu { op } => cmd_gmunu(op),
        Command::Verify(a) => verify::run(&a.into()),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn parse_window(s: &str, denom_bound: u64) -> Result<Window, CliError> {
    let (lo, hi) = s.split_once("..").ok_or_else(|| config(format!("window {s:?} is not lo..hi")))?;
    let lo: Endpoint = lo.parse().map_err(config)?;
    let hi: Endpoint = hi.parse().map_err(config)?;
    if lo.finite().is_none() || hi.finite().is_none() {
        return Err(config(format!("window {s:?} must be bounded")));
    }
    Window::new(lo, hi, denom_bound).map_err(config)
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|source| CliError::Io { path, source })
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialise");
    s.push('\n');
    s
}

fn print_json<T: Serialize>(value: &T) {
    print!("{}", json(value));
}

fn cmd_henson(a: HensonArgs) -> Outcome {
    let n = a.n as usize;
    if a.steps == 0 {
        return Err(config("--steps must be positive"));
    }
    if a.denom_bound == 0 || a.denom_ceiling == 0 || a.size_bound == 0 {
        return Err(config("bounds must be positive"));
    }
    let window = parse_window(&a.window, a.denom_bound)?;
    fs::create_dir_all(&a.out).map_err(|source| CliError::Io { path: a.out.clone(), source })?;
    let run_config = RunConfig { denom_ceiling: a.denom_ceiling, size_bound: a.size_bound };
    let run = generic_run(n, a.steps, window, run_config).map_err(config)?;
    let union = run.union_graph();
    let check = is_condition(&union, n);
    let mut report = saturation_report(&union, n, a.report_size_bound).map_err(config)?;
    let coverage = scheduled_coverage(&run);
    let ok = check.valid && coverage.all_verified();
    report.scheduled_coverage = Some(coverage);
    write(&a.out, "run.jsonl", &run.log_jsonl())?;
    write(&a.out, "union.dot", &union.to_dot("union"))?;
    write(&a.out, "saturation.json", &json(&report))?;
    if !check.valid {
        eprintln!("union graph is not a condition: {}", serde_json::to_string(&check.violations).unwrap_or_default());
    }
    println!(
        "n={n} steps={} vertices={} edges={} condition={} scheduled_saturation={}",
        a.steps,
        union.vertex_count(),
        union.edge_count(),
        check.valid,
        report.scheduled_coverage.as_ref().is_some_and(|c| c.all_verified())
    );
    Ok(ok)
}

#[derive(Serialize)]
struct ChainOutput<'a, P: Serialize, R: Serialize> {
    target: String,
    depth: usize,
    plan: &'a P,
    elements: &'a [chainforge::chains::ChainElement],
    report: &'a R,
}

fn cmd_chain(a: ChainArgs) -> Outcome {
    let target: ChainTarget = a.target.parse().map_err(config)?;
    if a.depth == 0 {
        return Err(config("--depth must be positive"));
    }
    fs::create_dir_all(&a.out).map_err(|source| CliError::Io { path: a.out.clone(), source })?;
    if let Some(family) = &a.family {
        let family: Family = family.parse().map_err(config)?;
        let order = target.order_type().map_err(config)?;
        let fc = chain_from_positive_family(&order, family, a.depth).map_err(config)?;
        let mut asc: Vec<Carrier> = fc.elements.iter().map(|e| e.carrier.clone()).collect();
        asc.reverse();
        let probe = probe_maximality(&asc, a.probes, a.seed).map_err(config)?;
        write(&a.out, "schema.json", &json(&fc.schema))?;
        write(&a.out, "chain.json", &json(&fc))?;
        write(&a.out, "probe.json", &json(&probe))?;
        print_json(&fc.schema);
        return Ok(fc.members && fc.single_point_steps && fc.prefix_matches && probe.clean);
    }
    if let ChainTarget::Descriptor(_) = &target {
        if !target.min_nonisolated().map_err(config)? {
            return Err(config(ChainError::MinIsolated));
        }
    }
    let p = plan(&target, a.depth).map_err(config)?;
    let chain = assemble_chain(&p).map_err(config)?;
    let report = check_assembly(&p, &chain);
    let carriers: Vec<Carrier> = chain.iter().map(|e| e.carrier.clone()).collect();
    let probe = probe_maximality(&carriers, a.probes, a.seed).map_err(config)?;
    let out = ChainOutput { target: target.to_string(), depth: a.depth, plan: &p, elements: &chain, report: &report };
    write(&a.out, "chain.json", &json(&out))?;
    write(&a.out, "probe.json", &json(&probe))?;
    println!(
        "target={} depth={} length={} assembly_ok={} probes={} violations={}",
        target,
        a.depth,
        chain.len(),
        report.ok(),
        probe.probes,
        probe.violations.len()
    );
    Ok(report.ok() && probe.clean)
}

fn cmd_classify(descriptor: &str) -> Outcome {
    let d: CompactDescriptor = descriptor.parse().map_err(config)?;
    let report = d.classify().map_err(config)?;
    print_json(&report);
    Ok(true)
}

fn parse_set(s: &str) -> Result<SymbolicSet, CliError> {
    s.parse().map_err(config)
}

#[derive(Serialize)]
struct CopyOutput {
    set: SymbolicSet,
    shape: String,
    is_copy: bool,
}

#[derive(Serialize)]
struct JumpOutput {
    case: chainforge::gmunu::JumpCase,
    component: u64,
    element: u64,
    c_minus: SymbolicSet,
    c_plus: SymbolicSet,
}

fn cmd_gmunu(op: GmunuOp) -> Outcome {
    match op {
        GmunuOp::Copy { set, shape } => {
            let s = parse_set(&set)?;
            let shape: GraphShape = shape.parse().map_err(config)?;
            let c = is_copy(&s, shape).map_err(config)?;
            print_json(&CopyOutput { set: s, shape: shape.to_string(), is_copy: c });
            Ok(true)
        }
        GmunuOp::Supp { set } => {
            let s = parse_set(&set)?;
            print_json(&supp(&s).to_string());
            Ok(true)
        }
        GmunuOp::Jump { from, to } => {
            let (a, b) = (parse_set(&from)?, parse_set(&to)?);
            let report = dense_jumps_check(&[a.clone(), b.clone()]).map_err(config)?;
            let (case, (component, element), c_minus, c_plus) = jump_between(&a, &b).map_err(config)?;
            print_json(&JumpOutput { case, component, element, c_minus, c_plus });
            Ok(report.all_verified)
        }
        GmunuOp::Family { family, samples, seed } => {
            let family: Family = family.parse().map_err(config)?;
            if samples == 0 {
                return Err(config("--samples must be positive"));
            }
            let report = positive_family_check(family, samples, seed).map_err(config)?;
            print_json(&report);
            Ok(report.all_passed())
        }
        GmunuOp::Jumps { len, seed } => {
            if len < 2 {
                return Err(config("--len must be at least 2"));
            }
            let chain = chainforge::gmunu::random_copy_chain(len, seed);
            let report = dense_jumps_check(&chain).map_err(config)?;
            print_json(&report);
            Ok(report.all_verified)
        }
    }
}
