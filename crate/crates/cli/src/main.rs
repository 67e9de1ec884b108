use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hyperdisc::capacity::{graph_vc_dim_with, VcConfig};
use hyperdisc::constructions::{
    collision_graph, disjoint_pair_by_game, disjoint_pair_by_sampling, hard_pair, subset_graph,
    subset_hypergraph, GameConfig, SamplingConfig, SubsetUniverse,
};
use hyperdisc::discrimination::{
    calibrated_sample_size, closeness_test, erm_discriminate, lifted_test, DEFAULT_CALIBRATION,
};
use hyperdisc::experiments::{
    expressivity_experiment, sensitivity_experiment, uc_experiment, ExpressivityConfig, PairMethod,
};
use hyperdisc::io::{
    parse_class, parse_distribution, parse_sample, DistributionFile, HypergraphFile,
};
use hyperdisc::metrics::ipm_exact;
use hyperdisc::vandermonde::{random_grid_trials, spectrum};
use hyperdisc::{DistinguishingClass, Distribution, Exact, Sample, Scalar, VertexUniverse};

mod output;

use output::{emit, emit_rows};

#[derive(Parser)]
#[command(
    name = "hyperdisc",
    version,
    about = "Hypergraph discriminators for finite distributions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// IPM of a class between two distributions.
    Ipm(IpmArgs),
    /// Graph VC dimension of a class.
    Gvc(GvcArgs),
    /// ERM discriminator on two samples.
    Discriminate(DiscriminateArgs),
    /// ERM-based closeness tester.
    TestCloseness(ClosenessArgs),
    /// Build a separating instance.
    Construct(ConstructArgs),
    /// Spectrum, determinant and grid-dominance checks.
    VandermondeCheck(VandermondeArgs),
    /// Uniform convergence of empirical edge frequencies.
    UcExperiment(UcArgs),
    /// Bounded differences of the sup deviation.
    Sensitivity(SensitivityArgs),
    /// The separation pipeline on a subset universe.
    Expressivity(ExpressivityArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Float,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Sampling,
    Game,
}

impl From<Method> for PairMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Sampling => PairMethod::Sampling,
            Method::Game => PairMethod::Game,
        }
    }
}

#[derive(Args)]
struct OutArgs {
    /// Output file; `.csv` selects CSV, anything else JSON. Defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct IpmArgs {
    #[arg(long)]
    class: PathBuf,
    #[arg(long)]
    p1: PathBuf,
    #[arg(long)]
    p2: PathBuf,
    #[arg(long, value_enum, default_value = "exact")]
    mode: Mode,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct GvcArgs {
    #[arg(long)]
    class: PathBuf,
    #[arg(long, default_value_t = hyperdisc::capacity::DEFAULT_UNIVERSE_CAP)]
    max_universe: usize,
    #[command(flatten)]
    out: OutArgs,
}

/// Either two sample files, or two distribution files plus `--m`.
#[derive(Args)]
struct SampleSource {
    #[arg(long, requires = "s2", conflicts_with_all = ["p1", "p2"])]
    s1: Option<PathBuf>,
    #[arg(long, requires = "s1")]
    s2: Option<PathBuf>,
    #[arg(long, requires = "p2")]
    p1: Option<PathBuf>,
    #[arg(long, requires = "p1")]
    p2: Option<PathBuf>,
    /// Draws per distribution.
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct DiscriminateArgs {
    #[arg(long)]
    class: PathBuf,
    #[command(flatten)]
    source: SampleSource,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct ClosenessArgs {
    #[arg(long)]
    class: PathBuf,
    #[command(flatten)]
    source: SampleSource,
    /// Holdout samples, required with `--s1/--s2`.
    #[arg(long, requires = "h2")]
    h1: Option<PathBuf>,
    #[arg(long, requires = "h1")]
    h2: Option<PathBuf>,
    #[arg(long)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    /// Run the mixture-lifted tester with this pinned vertex.
    #[arg(long, requires = "p1")]
    lift: Option<usize>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct ConstructArgs {
    #[command(subcommand)]
    kind: ConstructKind,
}

#[derive(Subcommand)]
enum ConstructKind {
    /// All-equal k-tuples over `n` vertices.
    Collision {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Bipartite index/subset graph.
    SubsetGraph {
        #[arg(long)]
        ell: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// k-ary subset hypergraph.
    SubsetHypergraph {
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Disjoint-support pair against an adversary class.
    DisjointPair(PairArgs),
    /// Hard mixture pair on the subset universe.
    HardPair {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
}

#[derive(Args)]
struct PairArgs {
    /// Number of ground (index) vertices.
    #[arg(long)]
    ell: usize,
    #[arg(long)]
    epsilon: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "game")]
    method: Method,
    /// Arity-1 adversary class over `ell` vertices; singleton indicators by default.
    #[arg(long)]
    class: Option<PathBuf>,
    /// Draw size for the sampling method.
    #[arg(long)]
    sample_size: Option<usize>,
    #[arg(long)]
    max_retries: Option<usize>,
    /// MW rounds for the game method.
    #[arg(long)]
    rounds: Option<usize>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct VandermondeArgs {
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct UcArgs {
    #[arg(long)]
    class: PathBuf,
    #[arg(long)]
    dist: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "50,100,200,400,800")]
    m_grid: Vec<usize>,
    #[arg(long, default_value_t = 200)]
    replicates: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct SensitivityArgs {
    #[arg(long)]
    class: PathBuf,
    #[arg(long)]
    dist: PathBuf,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct ExpressivityArgs {
    #[arg(long, default_value_t = 12)]
    ell: usize,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 0.2)]
    epsilon: f64,
    #[arg(long, value_enum, default_value = "game")]
    method: Method,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    class: Option<PathBuf>,
    #[arg(long)]
    sample_size: Option<usize>,
    #[command(flatten)]
    out: OutArgs,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_class(path: &Path) -> Result<DistinguishingClass> {
    parse_class(&read(path)?).with_context(|| format!("loading class {}", path.display()))
}

fn load_dist<T: Scalar>(path: &Path, c: &DistinguishingClass) -> Result<Distribution<T>> {
    parse_distribution(&read(path)?, Some(c.universe()))
        .with_context(|| format!("loading distribution {}", path.display()))
}

fn load_sample(path: &Path, c: &DistinguishingClass) -> Result<Sample> {
    parse_sample(&read(path)?, Some(c.universe()))
        .with_context(|| format!("loading sample {}", path.display()))
}

/// Exit status: 0 when every checked inequality holds, 1 otherwise.
fn status(holds: bool) -> ExitCode {
    if holds {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Ipm(a) => ipm(a),
        Command::Gvc(a) => gvc(a),
        Command::Discriminate(a) => discriminate(a),
        Command::TestCloseness(a) => test_closeness(a),
        Command::Construct(a) => construct(a.kind),
        Command::VandermondeCheck(a) => vandermonde_check(a),
        Command::UcExperiment(a) => uc(a),
        Command::Sensitivity(a) => sensitivity(a),
        Command::Expressivity(a) => expressivity(a),
    }
}

fn ipm(a: IpmArgs) -> Result<ExitCode> {
    let c = load_class(&a.class)?;
    let report = match a.mode {
        Mode::Exact => {
            let p1: Distribution<Exact> = load_dist(&a.p1, &c)?;
            let p2: Distribution<Exact> = load_dist(&a.p2, &c)?;
            ipm_exact(&c, &p1, &p2)?.report()
        }
        Mode::Float => {
            let p1: Distribution = load_dist(&a.p1, &c)?;
            let p2: Distribution = load_dist(&a.p2, &c)?;
            ipm_exact(&c, &p1, &p2)?.report()
        }
    };
    emit(&report, a.out.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn gvc(a: GvcArgs) -> Result<ExitCode> {
    let c = load_class(&a.class)?;
    let config = VcConfig {
        max_universe: a.max_universe,
    };
    emit(&graph_vc_dim_with(&c, config)?, a.out.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

type ExactPair = (Distribution<Exact>, Distribution<Exact>);

/// Loads or draws `(s1, s2)`; with distributions, also returns them for
/// auditing. Draw size defaults to the calibrated one.
fn samples(
    c: &DistinguishingClass,
    src: &SampleSource,
    default_m: impl FnOnce() -> Result<usize>,
) -> Result<(Sample, Sample, Option<ExactPair>)> {
    match (&src.s1, &src.s2, &src.p1, &src.p2) {
        (Some(s1), Some(s2), _, _) => Ok((load_sample(s1, c)?, load_sample(s2, c)?, None)),
        (_, _, Some(p1), Some(p2)) => {
            let p1: Distribution<Exact> = load_dist(p1, c)?;
            let p2: Distribution<Exact> = load_dist(p2, c)?;
            let m = match src.m {
                Some(m) => m,
                None => default_m()?,
            };
            let s1 = p1.sample(m, hyperdisc::seed::derive_seed(src.seed, &[1]))?;
            let s2 = p2.sample(m, hyperdisc::seed::derive_seed(src.seed, &[2]))?;
            Ok((s1, s2, Some((p1, p2))))
        }
        _ => bail!("pass either --s1/--s2 or --p1/--p2"),
    }
}

#[derive(Serialize)]
struct OutcomeJson {
    index: usize,
    graph: HypergraphFile,
    empirical_gap: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    true_gap: Option<f64>,
    m1: usize,
    m2: usize,
}

fn discriminate(a: DiscriminateArgs) -> Result<ExitCode> {
    let c = load_class(&a.class)?;
    let (s1, s2, dists) = samples(&c, &a.source, || bail!("--m is required with --p1/--p2"))?;
    let mut outcome = erm_discriminate(&c, &s1, &s2)?;
    if let Some((p1, p2)) = &dists {
        outcome = outcome.audit(p1, p2)?;
    }
    let json = OutcomeJson {
        index: outcome.index,
        graph: HypergraphFile::from_hypergraph(&outcome.graph),
        empirical_gap: outcome.empirical_gap,
        true_gap: outcome.true_gap,
        m1: s1.len(),
        m2: s2.len(),
    };
    emit(&json, a.out.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn test_closeness(a: ClosenessArgs) -> Result<ExitCode> {
    let c = load_class(&a.class)?;
    let calibrated = || -> Result<usize> {
        let rho = graph_vc_dim_with(&c, VcConfig::default())?.dimension;
        Ok(calibrated_sample_size(
            rho,
            c.arity(),
            a.epsilon,
            a.delta,
            DEFAULT_CALIBRATION,
        ))
    };
    if let Some(v) = a.lift {
        let (Some(p1), Some(p2)) = (&a.source.p1, &a.source.p2) else {
            bail!("--lift needs --p1/--p2");
        };
        let p1: Distribution<Exact> = load_dist(p1, &c)?;
        let p2: Distribution<Exact> = load_dist(p2, &c)?;
        let m = match a.source.m {
            Some(m) => m,
            None => calibrated()?,
        };
        let verdict = lifted_test(&c, v, &p1, &p2, a.epsilon, a.delta, m, a.source.seed)?;
        emit(&verdict, a.out.out.as_deref())?;
        return Ok(ExitCode::SUCCESS);
    }
    let (s1, s2, dists) = samples(&c, &a.source, calibrated)?;
    let (h1, h2) = match (&a.h1, &a.h2, &dists) {
        (Some(h1), Some(h2), _) => (load_sample(h1, &c)?, load_sample(h2, &c)?),
        (None, None, Some((p1, p2))) => (
            p1.sample(s1.len(), hyperdisc::seed::derive_seed(a.source.seed, &[3]))?,
            p2.sample(s2.len(), hyperdisc::seed::derive_seed(a.source.seed, &[4]))?,
        ),
        _ => bail!("sample inputs need --h1/--h2 holdouts"),
    };
    let verdict = closeness_test(&c, &s1, &s2, &h1, &h2, a.epsilon)?;
    emit(&verdict, a.out.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn adversary(pair: &PairArgs) -> Result<DistinguishingClass> {
    Ok(match &pair.class {
        Some(path) => load_class(path)?,
        None => DistinguishingClass::singletons(VertexUniverse::new(pair.ell)?)?,
    })
}

fn sampling_config(pair: &PairArgs) -> SamplingConfig {
    let defaults = SamplingConfig::default();
    SamplingConfig {
        max_retries: pair.max_retries.unwrap_or(defaults.max_retries),
        sample_size: pair.sample_size,
    }
}

fn game_config(pair: &PairArgs) -> GameConfig {
    GameConfig {
        rounds: pair.rounds,
        ..GameConfig::default()
    }
}

#[derive(Serialize)]
struct PairJson<D: Serialize> {
    q1: DistributionFile,
    q2: DistributionFile,
    achieved_ipm: String,
    epsilon: f64,
    attempts: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    diagnostics: Option<D>,
}

#[derive(Serialize)]
struct HardPairJson {
    ell: usize,
    k: usize,
    mask: u64,
    subset_vertex: usize,
    p1: DistributionFile,
    p2: DistributionFile,
}

fn construct(kind: ConstructKind) -> Result<ExitCode> {
    match kind {
        ConstructKind::Collision { n, k, out } => {
            let g = collision_graph(VertexUniverse::new(n)?, k)?;
            emit(&HypergraphFile::from_hypergraph(&g), out.out.as_deref())?;
        }
        ConstructKind::SubsetGraph { ell, out } => {
            let g = subset_graph(&SubsetUniverse::new(ell)?)?;
            emit(&HypergraphFile::from_hypergraph(&g), out.out.as_deref())?;
        }
        ConstructKind::SubsetHypergraph { ell, k, out } => {
            let g = subset_hypergraph(&SubsetUniverse::new(ell)?, k)?;
            emit(&HypergraphFile::from_hypergraph(&g), out.out.as_deref())?;
        }
        ConstructKind::DisjointPair(pair) => {
            let c = adversary(&pair)?;
            let (p, diagnostics) = match pair.method {
                Method::Sampling => (
                    disjoint_pair_by_sampling(&c, pair.epsilon, pair.seed, sampling_config(&pair))?,
                    None,
                ),
                Method::Game => {
                    let (p, d) =
                        disjoint_pair_by_game(&c, pair.epsilon, pair.seed, game_config(&pair))?;
                    (p, Some(d))
                }
            };
            let json = PairJson {
                q1: DistributionFile::from_distribution(&p.q1),
                q2: DistributionFile::from_distribution(&p.q2),
                achieved_ipm: p.achieved_ipm.render(),
                epsilon: p.epsilon,
                attempts: p.attempts,
                diagnostics,
            };
            emit(&json, pair.out.out.as_deref())?;
        }
        ConstructKind::HardPair { pair, k } => {
            let c = adversary(&pair)?;
            let p = match pair.method {
                Method::Sampling => {
                    disjoint_pair_by_sampling(&c, pair.epsilon, pair.seed, sampling_config(&pair))?
                }
                Method::Game => {
                    disjoint_pair_by_game(&c, pair.epsilon, pair.seed, game_config(&pair))?.0
                }
            };
            let su = SubsetUniverse::new(pair.ell)?;
            let hp = hard_pair(&su, &p.q1, &p.q2, k)?;
            let json = HardPairJson {
                ell: pair.ell,
                k,
                mask: hp.mask,
                subset_vertex: hp.subset_vertex,
                p1: DistributionFile::from_distribution(&hp.p1),
                p2: DistributionFile::from_distribution(&hp.p2),
            };
            emit(&json, pair.out.out.as_deref())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct VandermondeJson {
    spectrum: hyperdisc::vandermonde::SpectrumReport,
    grid: hyperdisc::vandermonde::GridTrialSummary,
    holds: bool,
}

/// Relative tolerance for the determinant identities.
const DET_TOLERANCE: f64 = 1e-9;

fn vandermonde_check(a: VandermondeArgs) -> Result<ExitCode> {
    let spectrum = spectrum(a.k)?;
    let grid = random_grid_trials(a.k, a.trials, a.seed)?;
    let holds = spectrum.all_hold(DET_TOLERANCE) && grid.failures == 0;
    emit(
        &VandermondeJson {
            spectrum,
            grid,
            holds,
        },
        a.out.out.as_deref(),
    )?;
    Ok(status(holds))
}

fn uc(a: UcArgs) -> Result<ExitCode> {
    let c = load_class(&a.class)?;
    let p: Distribution<Exact> = load_dist(&a.dist, &c)?;
    let rows = uc_experiment(&c, &p, &a.m_grid, a.replicates, a.seed)?;
    let holds = rows.iter().all(|r| r.holds);
    emit_rows(&rows, a.out.out.as_deref())?;
    Ok(status(holds))
}

fn sensitivity(a: SensitivityArgs) -> Result<ExitCode> {
    let c = load_class(&a.class)?;
    let p: Distribution<Exact> = load_dist(&a.dist, &c)?;
    let report = sensitivity_experiment(&c, &p, a.m, a.trials, a.seed)?;
    let holds = report.violations == 0;
    emit(&report, a.out.out.as_deref())?;
    Ok(status(holds))
}

fn expressivity(a: ExpressivityArgs) -> Result<ExitCode> {
    let mut config = ExpressivityConfig::new(a.ell, a.k, a.epsilon, a.method.into(), a.seed);
    if let Some(path) = &a.class {
        config.adversary = Some(load_class(path)?);
    }
    config.sampling.sample_size = a.sample_size;
    let report = expressivity_experiment(&config)?;
    let holds = report.holds();
    emit(&report, a.out.out.as_deref())?;
    Ok(status(holds))
}
