//! `moodnet`: command-line front end for the sentiment-paradox toolkit.
//!
//! Every subcommand reads tab-separated inputs, runs one analysis from the
//! core library, and writes CSV/JSON/TSV outputs atomically into `--out`,
//! together with a `manifest.json` recording the invocation, input digests,
//! seeds, and produced files. All randomized stages are seeded, and data
//! outputs are byte-identical for a fixed seed at any `--threads` setting.

use std::collections::BTreeMap;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use sha2::Digest;

use moodnet_core::analytics::{
    binned_trend, community_sweep, group_degree_means, pearson, SweepAxis,
};
use moodnet_core::community::CommunityIndex;
use moodnet_core::graph::ConnectionType;
use moodnet_core::ingest::{
    filter_min_posts, load_dataset, write_dataset, DatasetBundle, DatasetPaths, MoodLexicon,
};
use moodnet_core::nullmodel::{assess, NullConfig, SurpriseResult};
use moodnet_core::paradox::{degree_values, AggKind, ParadoxContexts, ParadoxStats};
use moodnet_core::predict::{ablate_feature_groups, extract_features, FeatureGroup};
use moodnet_core::report;
use moodnet_core::sentiment::{activity_vector, compute_activity, compute_swb, swb_vector};
use moodnet_core::synth::{
    generate_graph, theorem1_check, AssignMode, EdgeOrientation, GenModel, GenSpec, SwbAssignment,
};
use moodnet_core::SocialGraph;

#[derive(Parser)]
#[command(
    name = "moodnet",
    version,
    about = "Sentiment-paradox analyses over social networks",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Directory that receives all output files.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,

    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

/// Input dataset files; each is optional, analyses just see the data that
/// was provided.
#[derive(Args, Clone, Default)]
struct DataArgs {
    /// Friendship pairs, one `user<TAB>user` per line.
    #[arg(long)]
    friends: Option<PathBuf>,

    /// Follow pairs, one `follower<TAB>followee` per line.
    #[arg(long)]
    follows: Option<PathBuf>,

    /// Posts, one `user<TAB>date<TAB>mood` per line.
    #[arg(long)]
    posts: Option<PathBuf>,

    /// Community memberships, one `user<TAB>community` per line.
    #[arg(long)]
    communities: Option<PathBuf>,

    /// Drop users with fewer posts than this before any analysis.
    #[arg(long)]
    min_posts: Option<usize>,
}

#[derive(Args, Clone, Copy)]
struct NullArgs {
    /// Permutation replicates for the null model; 0 disables it.
    #[arg(long, default_value_t = 1000)]
    null_reps: usize,

    /// Seed for every randomized stage of the run.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConnectionArg {
    Friends,
    Followees,
    Followers,
}

impl From<ConnectionArg> for ConnectionType {
    fn from(c: ConnectionArg) -> ConnectionType {
        match c {
            ConnectionArg::Friends => ConnectionType::Friends,
            ConnectionArg::Followees => ConnectionType::Followees,
            ConnectionArg::Followers => ConnectionType::Followers,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AggArg {
    Mean,
    Median,
}

impl From<AggArg> for AggKind {
    fn from(a: AggArg) -> AggKind {
        match a {
            AggArg::Mean => AggKind::Mean,
            AggArg::Median => AggKind::Median,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ParadoxArg {
    General,
    Triad,
    CommonNeighbor,
    Community,
    CommonInterest,
}

#[derive(Clone, Copy, ValueEnum)]
enum AxisArg {
    Size,
    Density,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a dataset and re-emit it in normalized form.
    Ingest {
        #[command(flatten)]
        data: DataArgs,
    },

    /// Per-user sentiment scores from mood-tagged posts.
    Swb {
        #[command(flatten)]
        data: DataArgs,
    },

    /// Per-user posting-rate records.
    Activity {
        #[command(flatten)]
        data: DataArgs,

        /// Rate window in days.
        #[arg(long, default_value_t = 30.0)]
        window_days: f64,
    },

    /// One sentiment-paradox analysis with a permutation null model.
    Paradox {
        #[arg(value_enum)]
        kind: ParadoxArg,

        #[command(flatten)]
        data: DataArgs,

        #[arg(long, value_enum, default_value_t = ConnectionArg::Friends)]
        connection: ConnectionArg,

        #[arg(long, value_enum, default_value_t = AggArg::Mean)]
        agg: AggArg,

        #[command(flatten)]
        null: NullArgs,
    },

    /// Community-level paradox proportions bucketed by size or density.
    Sweep {
        #[command(flatten)]
        data: DataArgs,

        #[arg(long, value_enum, default_value_t = ConnectionArg::Friends)]
        connection: ConnectionArg,

        #[arg(long, value_enum, default_value_t = AggArg::Mean)]
        agg: AggArg,

        #[arg(long, value_enum, default_value_t = AxisArg::Size)]
        axis: AxisArg,

        /// Lower bound of the swept range.
        #[arg(long, default_value_t = 0.0)]
        lo: f64,

        /// Upper bound of the swept range.
        #[arg(long, default_value_t = 100.0)]
        hi: f64,

        /// Number of equal-width buckets.
        #[arg(long, default_value_t = 10)]
        buckets: usize,

        #[command(flatten)]
        null: NullArgs,
    },

    /// Pearson correlation between sentiment scores and connection counts.
    Correlate {
        #[command(flatten)]
        data: DataArgs,

        #[arg(long, value_enum, default_value_t = ConnectionArg::Friends)]
        connection: ConnectionArg,
    },

    /// Connection counts binned by sentiment score, with a linear fit.
    Trend {
        #[command(flatten)]
        data: DataArgs,

        #[arg(long, value_enum, default_value_t = ConnectionArg::Friends)]
        connection: ConnectionArg,

        #[arg(long, default_value_t = 0.05)]
        bin_width: f64,
    },

    /// The degree ("friendship") paradox, plus mean degrees by sentiment
    /// polarity group.
    Friendship {
        #[command(flatten)]
        data: DataArgs,

        #[arg(long, value_enum, default_value_t = ConnectionArg::Friends)]
        connection: ConnectionArg,

        #[arg(long, value_enum, default_value_t = AggArg::Mean)]
        agg: AggArg,

        #[command(flatten)]
        null: NullArgs,
    },

    /// The posting-activity paradox.
    ActivityParadox {
        #[command(flatten)]
        data: DataArgs,

        #[arg(long, value_enum, default_value_t = ConnectionArg::Friends)]
        connection: ConnectionArg,

        #[arg(long, value_enum, default_value_t = AggArg::Mean)]
        agg: AggArg,

        /// Rate window in days.
        #[arg(long, default_value_t = 30.0)]
        window_days: f64,

        #[command(flatten)]
        null: NullArgs,
    },

    /// Generate a synthetic network in the ingest TSV formats.
    Synth {
        #[command(subcommand)]
        model: SynthCommand,
    },

    /// Simulate the no-paradox expectation for structure-independent
    /// scores on a heavy-tail configuration model.
    Theorem1 {
        /// Node count of the generated graph.
        #[arg(long, default_value_t = 10_000)]
        n: usize,

        /// Power-law degree exponent.
        #[arg(long, default_value_t = 2.5)]
        gamma: f64,

        #[arg(long, default_value_t = 2)]
        min_degree: usize,

        #[arg(long, default_value_t = 100)]
        max_degree: usize,

        /// Score mean.
        #[arg(long, default_value_t = 0.0)]
        mu: f64,

        /// Score variance.
        #[arg(long, default_value_t = 0.08)]
        sigma2: f64,

        /// Couple scores to degree at this correlation instead of
        /// assigning them independently.
        #[arg(long)]
        rho: Option<f64>,

        /// Independent score assignments to average over.
        #[arg(long, default_value_t = 20)]
        runs: usize,

        #[arg(long, value_enum, default_value_t = ConnectionArg::Friends)]
        connection: ConnectionArg,

        #[arg(long, default_value_t = 0)]
        seed: u64,
    },

    /// Extract the 39-column paradox feature matrix for labeled users.
    Features {
        #[command(flatten)]
        data: DataArgs,
    },

    /// Cross-validated sentiment prediction over paradox feature groups.
    Predict {
        #[command(flatten)]
        data: DataArgs,

        #[arg(long, default_value_t = 10)]
        folds: usize,

        #[arg(long, default_value_t = 0)]
        seed: u64,

        /// Base feature groups to evaluate (comma-separated); composites
        /// are always appended.
        #[arg(long, value_delimiter = ',')]
        groups: Option<Vec<String>>,
    },
}

#[derive(Subcommand)]
enum SynthCommand {
    /// Uniform random graph: every pair is an edge with probability `p`.
    Er {
        #[arg(long)]
        n: usize,

        #[arg(long)]
        p: f64,

        #[command(flatten)]
        orientation: OrientationArgs,

        #[arg(long, default_value_t = 0)]
        seed: u64,
    },

    /// Configuration model over a truncated power-law degree sequence.
    PowerLaw {
        #[arg(long)]
        n: usize,

        #[arg(long)]
        gamma: f64,

        #[arg(long, default_value_t = 2)]
        min_degree: usize,

        #[arg(long, default_value_t = 100)]
        max_degree: usize,

        #[command(flatten)]
        orientation: OrientationArgs,

        #[arg(long, default_value_t = 0)]
        seed: u64,
    },

    /// Disjoint communities that are dense inside and sparse between.
    Planted {
        /// Community count.
        #[arg(long)]
        k: usize,

        /// Members per community.
        #[arg(long)]
        size: usize,

        #[arg(long)]
        p_intra: f64,

        #[arg(long, default_value_t = 0.0)]
        p_inter: f64,

        #[command(flatten)]
        orientation: OrientationArgs,

        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args, Clone, Copy)]
struct OrientationArgs {
    /// Emit follow edges instead of friendships.
    #[arg(long)]
    directed: bool,

    /// Probability a directed edge is reciprocated (needs --directed).
    #[arg(long, default_value_t = 0.0, requires = "directed")]
    reciprocal_p: f64,
}

impl From<OrientationArgs> for EdgeOrientation {
    fn from(o: OrientationArgs) -> EdgeOrientation {
        if o.directed {
            EdgeOrientation::Directed {
                reciprocal_p: o.reciprocal_p,
            }
        } else {
            EdgeOrientation::Undirected
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        // a second in-process initialization would fail; that is fine
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    if let Err(err) = run(cli) {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}

/// Everything a run hands back for the manifest: files written (name →
/// content already on disk) plus the seeds it used.
#[derive(Default)]
struct RunRecord {
    outputs: Vec<String>,
    seeds: Vec<u64>,
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let started = Instant::now();
    let argv: Vec<String> = std::env::args().collect();
    let out_dir = cli.out.clone();
    let inputs = command_inputs(&cli.command);
    let mut digests = BTreeMap::new();
    for path in &inputs {
        digests.insert(path.display().to_string(), sha256_file(path)?);
    }

    let record = dispatch(cli, &out_dir)?;

    let manifest = Manifest {
        command: argv,
        version: env!("CARGO_PKG_VERSION").to_string(),
        inputs: digests,
        seeds: record.seeds,
        outputs: record.outputs,
        duration_seconds: started.elapsed().as_secs_f64(),
    };
    let body = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    write_atomic(&out_dir, "manifest.json", &body)?;
    Ok(())
}

#[derive(serde::Serialize)]
struct Manifest {
    command: Vec<String>,
    version: String,
    /// SHA-256 of every input file.
    inputs: BTreeMap<String, String>,
    seeds: Vec<u64>,
    outputs: Vec<String>,
    duration_seconds: f64,
}

/// The input files a command reads, for digest recording.
fn command_inputs(command: &Command) -> Vec<PathBuf> {
    let data = match command {
        Command::Ingest { data }
        | Command::Swb { data }
        | Command::Activity { data, .. }
        | Command::Paradox { data, .. }
        | Command::Sweep { data, .. }
        | Command::Correlate { data, .. }
        | Command::Trend { data, .. }
        | Command::Friendship { data, .. }
        | Command::ActivityParadox { data, .. }
        | Command::Features { data }
        | Command::Predict { data, .. } => data,
        Command::Synth { .. } | Command::Theorem1 { .. } => return Vec::new(),
    };
    [&data.friends, &data.follows, &data.posts, &data.communities]
        .into_iter()
        .flatten()
        .cloned()
        .collect()
}

fn sha256_file(path: &Path) -> anyhow::Result<String> {
    let bytes = std::fs::read(path)
        .with_context(|| format!("reading input {}", path.display()))?;
    let mut hasher = sha2::Sha256::new();
    hasher.update(&bytes);
    Ok(format!("{:x}", hasher.finalize()))
}

fn write_atomic(dir: &Path, name: &str, content: &str) -> anyhow::Result<PathBuf> {
    std::fs::create_dir_all(dir)
        .with_context(|| format!("creating output directory {}", dir.display()))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating temporary file in {}", dir.display()))?;
    tmp.write_all(content.as_bytes())
        .with_context(|| format!("writing {name}"))?;
    let path = dir.join(name);
    tmp.persist(&path)
        .with_context(|| format!("moving {name} into place"))?;
    Ok(path)
}

fn load(data: &DataArgs) -> anyhow::Result<(DatasetBundle, SocialGraph)> {
    let paths = DatasetPaths {
        friends: data.friends.clone(),
        follows: data.follows.clone(),
        posts: data.posts.clone(),
        communities: data.communities.clone(),
    };
    let mut bundle = load_dataset(&paths, MoodLexicon::builtin())?;
    if let Some(min_posts) = data.min_posts {
        bundle = filter_min_posts(&bundle, min_posts)?;
    }
    let graph = SocialGraph::from_bundle(&bundle);
    Ok((bundle, graph))
}

fn null_config(null: &NullArgs) -> Option<NullConfig> {
    (null.null_reps > 0).then_some(NullConfig {
        replicates: null.null_reps,
        seed: null.seed,
    })
}

/// Run the permutation assessment when configured.
fn assess_with(
    ctx: &ParadoxContexts<'_>,
    values: &[Option<f64>],
    agg: AggKind,
    stats: &ParadoxStats,
    cfg: Option<&NullConfig>,
) -> Option<SurpriseResult> {
    cfg.map(|cfg| assess(values, |shuffled| ctx.magnitude(shuffled, agg), stats, cfg))
}

fn write_paradox_outputs(
    out_dir: &Path,
    stats: &ParadoxStats,
    null: Option<&SurpriseResult>,
    record: &mut RunRecord,
) -> anyhow::Result<()> {
    write_atomic(out_dir, "paradox.csv", &report::paradox_csv(stats, null))?;
    record.outputs.push("paradox.csv".into());
    println!(
        "{} paradox on {}: magnitude {} over {} users ({})",
        stats.kind.label(),
        stats.connection.label(),
        report::fmt_ratio(stats.magnitude),
        stats.total,
        stats.verdict().label(),
    );
    if let Some(s) = null {
        println!(
            "null expectation {} -> surprise {}, empirical p {}",
            report::fmt_ratio(s.expected),
            report::fmt_real(s.surprise),
            report::fmt_real(s.empirical_p),
        );
    }
    Ok(())
}

fn bundle_from_graph(g: &SocialGraph, memberships: &[(u32, u32)]) -> DatasetBundle {
    let mut friends = Vec::with_capacity(g.n_friend_edges());
    let mut follows = Vec::with_capacity(g.n_follow_edges());
    for u in 0..g.n_users() as u32 {
        for &v in g
            .connections(u, ConnectionType::Friends)
            .expect("index in range")
        {
            if u < v {
                friends.push((g.external_id(u), g.external_id(v)));
            }
        }
        for &v in g
            .connections(u, ConnectionType::Followees)
            .expect("index in range")
        {
            follows.push((g.external_id(u), g.external_id(v)));
        }
    }
    DatasetBundle {
        users: (0..g.n_users() as u64).collect(),
        posts: Vec::new(),
        friend_edges: friends,
        follow_edges: follows,
        memberships: memberships
            .iter()
            .map(|&(u, c)| (u as u64, c as u64))
            .collect(),
        ..Default::default()
    }
}

fn dispatch(cli: Cli, out_dir: &Path) -> anyhow::Result<RunRecord> {
    let mut record = RunRecord::default();
    match cli.command {
        Command::Ingest { data } => {
            let (bundle, graph) = load(&data)?;
            write_dataset(&bundle, out_dir)?;
            record.outputs.extend(
                ["friends.tsv", "follows.tsv", "posts.tsv", "communities.tsv"]
                    .map(String::from),
            );
            println!(
                "dataset: {} users, {} friendships, {} follows, {} posts, {} memberships",
                graph.n_users(),
                graph.n_friend_edges(),
                graph.n_follow_edges(),
                bundle.posts.len(),
                bundle.memberships.len(),
            );
            let w = &bundle.warnings;
            if w.self_loops_dropped + w.duplicate_edges_dropped + w.duplicate_memberships_dropped
                > 0
            {
                println!(
                    "dropped: {} self-loops, {} duplicate edges, {} duplicate memberships",
                    w.self_loops_dropped, w.duplicate_edges_dropped, w.duplicate_memberships_dropped,
                );
            }
            if !w.unknown_moods.is_empty() {
                println!(
                    "{} posts carry moods outside the lexicon ({} distinct)",
                    w.unknown_mood_posts(),
                    w.unknown_moods.len(),
                );
            }
        }

        Command::Swb { data } => {
            let (bundle, _) = load(&data)?;
            let swb = compute_swb(&bundle.posts, MoodLexicon::builtin());
            write_atomic(out_dir, "swb.csv", &report::swb_csv(&swb))?;
            record.outputs.push("swb.csv".into());
            println!("scored {} users", swb.len());
        }

        Command::Activity { data, window_days } => {
            let (bundle, _) = load(&data)?;
            let activity = compute_activity(&bundle.posts, window_days)?;
            write_atomic(out_dir, "activity.csv", &report::activity_csv(&activity))?;
            record.outputs.push("activity.csv".into());
            println!("rated {} users over a {window_days}-day window", activity.len());
        }

        Command::Paradox {
            kind,
            data,
            connection,
            agg,
            null,
        } => {
            let (bundle, graph) = load(&data)?;
            let t = ConnectionType::from(connection);
            let agg = AggKind::from(agg);
            let swb = compute_swb(&bundle.posts, MoodLexicon::builtin());
            let values = swb_vector(&graph, &swb);
            let communities = CommunityIndex::from_bundle(&bundle, &graph);
            let ctx = match kind {
                ParadoxArg::General => ParadoxContexts::general(&graph, t),
                ParadoxArg::Triad => ParadoxContexts::triad(&graph, t),
                ParadoxArg::CommonNeighbor => ParadoxContexts::common_neighbor(&graph, t),
                ParadoxArg::Community => ParadoxContexts::community(&graph, &communities, t),
                ParadoxArg::CommonInterest => {
                    ParadoxContexts::common_interest(&graph, &communities, t)
                }
            };
            let stats = ctx.stats(&values, agg);
            let cfg = null_config(&null);
            if cfg.is_some() {
                record.seeds.push(null.seed);
            }
            let assessed = assess_with(&ctx, &values, agg, &stats, cfg.as_ref());
            write_paradox_outputs(out_dir, &stats, assessed.as_ref(), &mut record)?;
        }

        Command::Sweep {
            data,
            connection,
            agg,
            axis,
            lo,
            hi,
            buckets,
            null,
        } => {
            let (bundle, graph) = load(&data)?;
            let swb = compute_swb(&bundle.posts, MoodLexicon::builtin());
            let values = swb_vector(&graph, &swb);
            let communities = CommunityIndex::from_bundle(&bundle, &graph);
            let axis = match axis {
                AxisArg::Size => SweepAxis::Size,
                AxisArg::Density => SweepAxis::Density,
            };
            let cfg = null_config(&null).unwrap_or(NullConfig {
                replicates: 1,
                seed: null.seed,
            });
            record.seeds.push(null.seed);
            let rows = community_sweep(
                &graph,
                &values,
                &communities,
                ConnectionType::from(connection),
                AggKind::from(agg),
                axis,
                (lo, hi),
                buckets,
                &cfg,
            )?;
            write_atomic(out_dir, "sweep.csv", &report::sweep_csv(&rows))?;
            record.outputs.push("sweep.csv".into());
            println!(
                "swept {} buckets over [{lo}, {hi}] by {}",
                rows.len(),
                axis.label()
            );
        }

        Command::Correlate { data, connection } => {
            let (bundle, graph) = load(&data)?;
            let t = ConnectionType::from(connection);
            let swb = compute_swb(&bundle.posts, MoodLexicon::builtin());
            let values = swb_vector(&graph, &swb);
            let (mut xs, mut ys) = (Vec::new(), Vec::new());
            for (u, v) in values.iter().enumerate() {
                if let Some(score) = v {
                    xs.push(*score);
                    ys.push(graph.degree(u as u32, t) as f64);
                }
            }
            let result = pearson(&xs, &ys)?;
            let pair = format!("swb_vs_{}_degree", t.label());
            write_atomic(
                out_dir,
                "correlation.csv",
                &report::correlation_csv(&pair, &result),
            )?;
            record.outputs.push("correlation.csv".into());
            println!(
                "{pair}: r {} (n {}, p {})",
                report::fmt_real(result.r),
                result.n,
                report::fmt_p(result.p_value),
            );
        }

        Command::Trend {
            data,
            connection,
            bin_width,
        } => {
            let (bundle, graph) = load(&data)?;
            let t = ConnectionType::from(connection);
            let swb = compute_swb(&bundle.posts, MoodLexicon::builtin());
            let values = swb_vector(&graph, &swb);
            let (mut xs, mut ys) = (Vec::new(), Vec::new());
            for (u, v) in values.iter().enumerate() {
                if let Some(score) = v {
                    xs.push(*score);
                    ys.push(graph.degree(u as u32, t) as f64);
                }
            }
            let table = binned_trend(&xs, &ys, bin_width, None)?;
            write_atomic(out_dir, "trend.csv", &report::trend_csv(&table))?;
            record.outputs.push("trend.csv".into());
            match &table.fit {
                Some(fit) => println!(
                    "{} bins; fitted slope {} over [{}, {}]",
                    table.bins.len(),
                    report::fmt_real(fit.slope),
                    table.fit_band.0,
                    table.fit_band.1,
                ),
                None => println!("{} bins; no in-band fit", table.bins.len()),
            }
        }

        Command::Friendship {
            data,
            connection,
            agg,
            null,
        } => {
            let (bundle, graph) = load(&data)?;
            let t = ConnectionType::from(connection);
            let agg = AggKind::from(agg);
            let ctx = ParadoxContexts::friendship(&graph, t);
            let values = degree_values(&graph, t);
            let stats = ctx.stats(&values, agg);
            let cfg = null_config(&null);
            if cfg.is_some() {
                record.seeds.push(null.seed);
            }
            let assessed = assess_with(&ctx, &values, agg, &stats, cfg.as_ref());
            write_paradox_outputs(out_dir, &stats, assessed.as_ref(), &mut record)?;

            // polarity-group degree means ride along when posts are given
            if data.posts.is_some() {
                let swb = compute_swb(&bundle.posts, MoodLexicon::builtin());
                let table = group_degree_means(&graph, &swb_vector(&graph, &swb), None);
                write_atomic(out_dir, "group_degrees.csv", &report::group_degree_csv(&table))?;
                record.outputs.push("group_degrees.csv".into());
            }
        }

        Command::ActivityParadox {
            data,
            connection,
            agg,
            window_days,
            null,
        } => {
            let (bundle, graph) = load(&data)?;
            let t = ConnectionType::from(connection);
            let agg = AggKind::from(agg);
            let activity = compute_activity(&bundle.posts, window_days)?;
            let values = activity_vector(&graph, &activity);
            let ctx = ParadoxContexts::activity(&graph, t);
            let stats = ctx.stats(&values, agg);
            let cfg = null_config(&null);
            if cfg.is_some() {
                record.seeds.push(null.seed);
            }
            let assessed = assess_with(&ctx, &values, agg, &stats, cfg.as_ref());
            write_paradox_outputs(out_dir, &stats, assessed.as_ref(), &mut record)?;
        }

        Command::Synth { model } => {
            let (spec, seed) = match model {
                SynthCommand::Er {
                    n,
                    p,
                    orientation,
                    seed,
                } => (
                    GenSpec {
                        n,
                        model: GenModel::ErdosRenyi { p },
                        orientation: orientation.into(),
                        seed,
                    },
                    seed,
                ),
                SynthCommand::PowerLaw {
                    n,
                    gamma,
                    min_degree,
                    max_degree,
                    orientation,
                    seed,
                } => (
                    GenSpec {
                        n,
                        model: GenModel::PowerLawConfig {
                            gamma,
                            min_degree,
                            max_degree,
                        },
                        orientation: orientation.into(),
                        seed,
                    },
                    seed,
                ),
                SynthCommand::Planted {
                    k,
                    size,
                    p_intra,
                    p_inter,
                    orientation,
                    seed,
                } => (
                    GenSpec {
                        n: k * size,
                        model: GenModel::PlantedCommunities {
                            k,
                            size,
                            p_intra,
                            p_inter,
                        },
                        orientation: orientation.into(),
                        seed,
                    },
                    seed,
                ),
            };
            record.seeds.push(seed);
            let graph = generate_graph(&spec)?;
            let memberships = spec.planted_memberships().unwrap_or_default();
            let bundle = bundle_from_graph(&graph, &memberships);
            write_dataset(&bundle, out_dir)?;
            record.outputs.extend(
                ["friends.tsv", "follows.tsv", "posts.tsv", "communities.tsv"]
                    .map(String::from),
            );
            println!(
                "generated {} users, {} friendships, {} follows",
                graph.n_users(),
                graph.n_friend_edges(),
                graph.n_follow_edges(),
            );
        }

        Command::Theorem1 {
            n,
            gamma,
            min_degree,
            max_degree,
            mu,
            sigma2,
            rho,
            runs,
            connection,
            seed,
        } => {
            record.seeds.push(seed);
            let graph = generate_graph(&GenSpec {
                n,
                model: GenModel::PowerLawConfig {
                    gamma,
                    min_degree,
                    max_degree,
                },
                orientation: EdgeOrientation::Undirected,
                seed,
            })?;
            let assignment = SwbAssignment {
                mode: match rho {
                    Some(_) => AssignMode::DegreeCoupled,
                    None => AssignMode::IidNormal,
                },
                mu,
                sigma2,
                rho: rho.unwrap_or(0.0),
                seed: seed ^ 0x5EED,
            };
            let report_out =
                theorem1_check(&graph, &assignment, runs, ConnectionType::from(connection));
            let mut csv = report::Csv::new(&[
                "run",
                "diff_mean",
                "diff_median",
                "grand_diff_mean",
                "grand_diff_median",
                "sigma_c2",
            ]);
            for (i, run) in report_out.per_run.iter().enumerate() {
                csv.row([
                    i.to_string(),
                    report::fmt_real(run.diff_mean),
                    report::fmt_real(run.diff_median),
                    report::fmt_real(report_out.mean_diff_mean),
                    report::fmt_real(report_out.mean_diff_median),
                    report::fmt_real(report_out.sigma_c2),
                ]);
            }
            write_atomic(out_dir, "theorem1.csv", &csv.finish())?;
            record.outputs.push("theorem1.csv".into());
            println!(
                "{} runs on {} nodes: grand mean difference {} (mean) / {} (median)",
                report_out.runs,
                n,
                report::fmt_real(report_out.mean_diff_mean),
                report::fmt_real(report_out.mean_diff_median),
            );
        }

        Command::Features { data } => {
            let (bundle, graph) = load(&data)?;
            let swb = compute_swb(&bundle.posts, MoodLexicon::builtin());
            let values = swb_vector(&graph, &swb);
            let communities = CommunityIndex::from_bundle(&bundle, &graph);
            let matrix = extract_features(&graph, &values, &communities);
            write_atomic(out_dir, "features.csv", &report::features_csv(&matrix, &graph))?;
            record.outputs.push("features.csv".into());
            println!(
                "extracted {} rows x {} features",
                matrix.n_rows(),
                matrix.n_cols()
            );
        }

        Command::Predict {
            data,
            folds,
            seed,
            groups,
        } => {
            let (bundle, graph) = load(&data)?;
            record.seeds.push(seed);
            let swb = compute_swb(&bundle.posts, MoodLexicon::builtin());
            let values = swb_vector(&graph, &swb);
            let communities = CommunityIndex::from_bundle(&bundle, &graph);
            let matrix = extract_features(&graph, &values, &communities);
            let group_names: Vec<String> = groups.unwrap_or_else(|| {
                FeatureGroup::SINGLES
                    .iter()
                    .map(|g| g.label().to_string())
                    .collect()
            });
            let name_refs: Vec<&str> = group_names.iter().map(String::as_str).collect();
            let results = ablate_feature_groups(&matrix, &name_refs, folds, seed)?;
            let eval = Eval {
                folds,
                seed,
                rows: matrix.n_rows(),
                groups: results
                    .iter()
                    .map(|(g, e)| (g.label().to_string(), e.clone()))
                    .collect(),
            };
            let body =
                serde_json::to_string_pretty(&eval).expect("evaluation report serializes");
            write_atomic(out_dir, "eval.json", &body)?;
            record.outputs.push("eval.json".into());
            for (group, e) in &results {
                println!(
                    "{:<15} accuracy {} auc {}",
                    group.label(),
                    report::fmt_real(e.accuracy),
                    report::fmt_real(e.auc),
                );
            }
        }
    }
    Ok(record)
}

#[derive(serde::Serialize)]
struct Eval {
    folds: usize,
    seed: u64,
    rows: usize,
    groups: BTreeMap<String, moodnet_core::predict::EvalResult>,
}
