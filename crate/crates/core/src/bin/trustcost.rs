use std::io::{IsTerminal, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use semver::Version;
use trustcost::bench::{run_bench, BenchPlan, CSV_HEADER};
use trustcost::catalog::CostConfig;
use trustcost::logic::Budget;
use trustcost::model::{
    resolve_graph, synthetic_tree, typosquat_bundle, Bundle, Cache, CratesIo, DependencyGraph,
    Fetcher, Manifest, ModelError, RecordSource,
};
use trustcost::solver::Algorithm;
use trustcost::verdict::{evaluate, render_logs, render_report, ReportFormat, SeverityLabel};

const EXIT_FAIL_ON: u8 = 1;
const EXIT_NOT_FOUND: u8 = 2;
const EXIT_NETWORK: u8 = 3;
const EXIT_RESOURCE_LIMIT: u8 = 4;
const EXIT_ERROR: u8 = 5;
const EXIT_USAGE: u8 = 64;

/// Minimum-trust scoring for crates and their dependencies.
///
/// Exit status: 0 ok, 1 --fail-on triggered, 2 crate not found, 3 network
/// unavailable, 4 both queries hit the resource limit, 5 other errors,
/// 64 bad usage.
#[derive(Parser)]
#[command(name = "trustcost", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Show what is known about a crate and its dependencies.
    Logs(Target),
    /// Compute trust and distrust costs and the severity label.
    Trust(TrustArgs),
    /// Time the solvers on synthetic dependency trees, as CSV.
    Bench(BenchArgs),
    /// Write a typosquat bundle from a base bundle, or a synthetic tree.
    GenFixtures(GenArgs),
}

#[derive(Args)]
struct Target {
    /// Crate name, or `name@version`.
    #[arg(value_name = "CRATE")]
    krate: String,
    /// Defaults to the newest cached version offline, the registry's newest online.
    version: Option<Version>,
    /// Cache directory (default: $TRUSTCOST_CACHE or the user cache dir).
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Never touch the network.
    #[arg(long)]
    offline: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct TrustArgs {
    #[command(flatten)]
    target: Target,
    /// JSON file overriding costs, trusted authors and templates.
    #[arg(long)]
    assumptions: Option<PathBuf>,
    #[arg(long, default_value_t = Algorithm::Horn)]
    algorithm: Algorithm,
    /// Per-query limit in seconds.
    #[arg(long, default_value_t = 600)]
    timeout: u64,
    /// Exit 1 when the label is at least this severe, or incomplete.
    #[arg(long, value_name = "LABEL")]
    fail_on: Option<SeverityLabel>,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated tree sizes.
    #[arg(long, value_delimiter = ',', default_values_t = [1, 2, 4, 6, 8, 10, 12, 15, 20, 50, 100, 150])]
    sizes: Vec<usize>,
    #[arg(long = "algorithm", default_values_t = [Algorithm::Naive, Algorithm::Horn])]
    algorithms: Vec<Algorithm>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Per-run limit in seconds.
    #[arg(long, default_value_t = 600)]
    timeout: u64,
    #[arg(long)]
    assumptions: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    /// Base bundle whose roots get typosquat variants.
    #[arg(
        long,
        conflicts_with = "synthetic",
        required_unless_present = "synthetic"
    )]
    base: Option<PathBuf>,
    /// Write a synthetic tree with this many dependencies instead.
    #[arg(long)]
    synthetic: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Text => ReportFormat::Text,
            Format::Json => ReportFormat::Json,
        }
    }
}

fn load_config(path: Option<&PathBuf>) -> anyhow::Result<CostConfig> {
    match path {
        Some(p) => CostConfig::load_checked(p).with_context(|| format!("loading {}", p.display())),
        None => Ok(CostConfig::default()),
    }
}

fn resolve(t: &Target) -> anyhow::Result<DependencyGraph> {
    let (name, version) = match t.krate.split_once('@') {
        Some((n, v)) => (
            n,
            Some(
                v.parse::<Version>()
                    .with_context(|| format!("version in `{}`", t.krate))?,
            ),
        ),
        None => (t.krate.as_str(), t.version.clone()),
    };
    let cache = Cache::new(t.cache.clone().unwrap_or_else(Cache::default_dir));
    let source = if t.offline {
        RecordSource::offline(cache)
    } else {
        let registry: Box<dyn Fetcher> = Box::new(CratesIo::live());
        RecordSource::online(Some(cache), vec![registry])
    };
    let root = source.fetch_record(name, version.as_ref())?;
    Ok(resolve_graph(root, |k| source.fetch_key(k))?)
}

fn emit(text: &str) -> anyhow::Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Logs(t) => {
            let graph = resolve(&t)?;
            emit(&render_logs(&graph, t.format.into()))?;
            Ok(0)
        }
        Command::Trust(args) => {
            let cfg = load_config(args.assumptions.as_ref())?;
            let graph = resolve(&args.target)?;
            let budget = Budget::default().with_timeout(Duration::from_secs(args.timeout));
            let verdict = evaluate(&graph, &cfg, args.algorithm, budget)?;
            let format: ReportFormat = args.target.format.into();
            let color = format == ReportFormat::Text
                && std::io::stdout().is_terminal()
                && std::env::var_os("NO_COLOR").is_none();
            emit(&render_report(&verdict, format, color))?;
            if verdict.is_empty() {
                eprintln!("error: both queries hit the resource limit");
                return Ok(EXIT_RESOURCE_LIMIT);
            }
            let gated = match (args.fail_on, verdict.label) {
                (Some(threshold), Some(label)) => label >= threshold,
                (Some(_), None) => true,
                (None, _) => false,
            };
            Ok(if gated { EXIT_FAIL_ON } else { 0 })
        }
        Command::Bench(args) => {
            let cfg = load_config(args.assumptions.as_ref())?;
            let plan = BenchPlan {
                sizes: args.sizes,
                algorithms: args.algorithms,
                seed: args.seed,
                timeout: Duration::from_secs(args.timeout),
            };
            emit(&format!("{CSV_HEADER}\n"))?;
            run_bench(&plan, &cfg, |run| {
                // one row at a time so long sweeps show progress
                let _ = emit(&format!("{}\n", run.csv_row()));
            })?;
            Ok(0)
        }
        Command::GenFixtures(args) => {
            let bundle = match (args.base, args.synthetic) {
                (Some(base), _) => {
                    let base = Bundle::open(&base)
                        .with_context(|| format!("opening {}", base.display()))?;
                    typosquat_bundle(&base, &args.out)?
                }
                (None, Some(n)) => {
                    let records = synthetic_tree(n, args.seed);
                    let manifest = Manifest {
                        roots: vec![records[0].key()],
                        pairs: Vec::new(),
                    };
                    Bundle::write(&args.out, &records, manifest)?
                }
                (None, None) => bail!("either --base or --synthetic is required"),
            };
            for root in &bundle.manifest.roots {
                println!("{root}");
            }
            Ok(0)
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<ModelError>() {
        Some(ModelError::NotFound(_)) => EXIT_NOT_FOUND,
        Some(ModelError::NetworkUnavailable(_)) => EXIT_NETWORK,
        _ => EXIT_ERROR,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
