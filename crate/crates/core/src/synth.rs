//! Synthetic graph and score generators: uniform random graphs, heavy-tail
//! configuration models, planted communities, and score assignments that
//! are independent of or deliberately coupled to degree. Used to exercise
//! the analyses end to end and to check the no-paradox expectation for
//! i.i.d. scores by simulation.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::Normal;
use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal as NormalDist};

use crate::analytics::pearson_r;
use crate::error::Error;
use crate::graph::{ConnectionType, SocialGraph};
use crate::nullmodel::child_seed;
use crate::paradox::AggKind;
use crate::Result;

/// Random-graph family and its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GenModel {
    /// Every pair is an edge independently with probability `p`.
    ErdosRenyi { p: f64 },
    /// Configuration model over a truncated power-law degree sequence
    /// with exponent `gamma`; colliding stubs (self-loops, multi-edges)
    /// are erased.
    PowerLawConfig {
        gamma: f64,
        min_degree: usize,
        max_degree: usize,
    },
    /// `k` disjoint groups of `size` members; in-group pairs are edges
    /// with probability `p_intra`, cross-group pairs with `p_inter`.
    PlantedCommunities {
        k: usize,
        size: usize,
        p_intra: f64,
        p_inter: f64,
    },
}

/// Whether generated edges land in the friendship graph or the follow
/// graph.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EdgeOrientation {
    Undirected,
    /// Each generated edge is directed randomly; with probability
    /// `reciprocal_p` the reverse edge is added too.
    Directed { reciprocal_p: f64 },
}

/// Full description of one synthetic network.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenSpec {
    pub n: usize,
    pub model: GenModel,
    pub orientation: EdgeOrientation,
    pub seed: u64,
}

impl GenSpec {
    fn validate(&self) -> Result<()> {
        let prob = |name: &str, p: f64| -> Result<()> {
            if (0.0..=1.0).contains(&p) {
                Ok(())
            } else {
                Err(Error::InvalidInput(format!(
                    "{name} must lie in [0, 1], got {p}"
                )))
            }
        };
        match self.model {
            GenModel::ErdosRenyi { p } => prob("edge probability", p)?,
            GenModel::PowerLawConfig {
                gamma,
                min_degree,
                max_degree,
            } => {
                if gamma <= 1.0 {
                    return Err(Error::InvalidInput(format!(
                        "power-law exponent must exceed 1, got {gamma}"
                    )));
                }
                if min_degree < 1 || min_degree > max_degree || max_degree >= self.n {
                    return Err(Error::InfeasibleDegrees(format!(
                        "need 1 <= min ({min_degree}) <= max ({max_degree}) < n ({})",
                        self.n
                    )));
                }
            }
            GenModel::PlantedCommunities {
                k,
                size,
                p_intra,
                p_inter,
            } => {
                prob("intra-community probability", p_intra)?;
                prob("inter-community probability", p_inter)?;
                if k == 0 || size == 0 {
                    return Err(Error::InvalidInput(
                        "planted communities need k >= 1 and size >= 1".into(),
                    ));
                }
                if k * size != self.n {
                    return Err(Error::InvalidInput(format!(
                        "planted communities need n = k * size ({k} * {size} != {})",
                        self.n
                    )));
                }
            }
        }
        if let EdgeOrientation::Directed { reciprocal_p } = self.orientation {
            prob("reciprocation probability", reciprocal_p)?;
        }
        Ok(())
    }

    /// The (user, community) pairs a planted-community graph is built
    /// around; `None` for the other models.
    pub fn planted_memberships(&self) -> Option<Vec<(u32, u32)>> {
        match self.model {
            GenModel::PlantedCommunities { size, .. } => Some(
                (0..self.n as u32)
                    .map(|u| (u, u / size as u32))
                    .collect(),
            ),
            _ => None,
        }
    }
}

/// Sample each pair independently with probability `p`, visiting only the
/// sampled pairs (geometric skips between hits).
fn uniform_pairs(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Vec<(u32, u32)> {
    let mut edges = Vec::new();
    if n < 2 || p <= 0.0 {
        return edges;
    }
    if p >= 1.0 {
        for a in 0..n as u32 {
            for b in (a + 1)..n as u32 {
                edges.push((a, b));
            }
        }
        return edges;
    }
    let total_pairs = n as f64 * (n as f64 - 1.0) / 2.0;
    let lq = (1.0 - p).ln();
    let mut v = 1usize;
    let mut w = -1i64;
    loop {
        let r: f64 = rng.gen();
        let skip = ((1.0 - r).ln() / lq).floor();
        if !(skip < total_pairs) {
            break; // jumped past every remaining pair
        }
        w += 1 + skip as i64;
        while v < n && w >= v as i64 {
            w -= v as i64;
            v += 1;
        }
        if v >= n {
            break;
        }
        edges.push((w as u32, v as u32));
    }
    edges
}

/// Degrees drawn from a power law `P(d) ∝ d^(−gamma)` truncated to
/// `[min, max]`, via floored Pareto samples (exact power-law tail).
fn power_law_degrees(
    n: usize,
    gamma: f64,
    min_degree: usize,
    max_degree: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<usize> {
    let alpha = gamma - 1.0;
    let cutoff = max_degree as f64 + 1.0;
    let mut degrees: Vec<usize> = (0..n)
        .map(|_| loop {
            let u: f64 = rng.gen();
            let x = min_degree as f64 * (1.0 - u).powf(-1.0 / alpha);
            if x < cutoff {
                return x as usize;
            }
        })
        .collect();
    if degrees.iter().sum::<usize>() % 2 == 1 {
        degrees[0] += 1; // stubs must pair off
    }
    degrees
}

fn config_model_pairs(degrees: &[usize], rng: &mut ChaCha8Rng) -> Vec<(u32, u32)> {
    let mut stubs: Vec<u32> = degrees
        .iter()
        .enumerate()
        .flat_map(|(u, &d)| std::iter::repeat(u as u32).take(d))
        .collect();
    stubs.shuffle(rng);
    stubs
        .chunks_exact(2)
        .map(|pair| (pair[0], pair[1]))
        .filter(|(a, b)| a != b)
        .collect()
}

fn planted_pairs(
    k: usize,
    size: usize,
    p_intra: f64,
    p_inter: f64,
    rng: &mut ChaCha8Rng,
) -> Vec<(u32, u32)> {
    let n = k * size;
    let mut edges = Vec::new();
    for c in 0..k {
        let base = (c * size) as u32;
        for i in 0..size as u32 {
            for j in (i + 1)..size as u32 {
                if rng.gen::<f64>() < p_intra {
                    edges.push((base + i, base + j));
                }
            }
        }
    }
    // cross-community pairs from the uniform process, intra pairs excluded
    let community_of = |u: u32| u as usize / size;
    edges.extend(
        uniform_pairs(n, p_inter, rng)
            .into_iter()
            .filter(|&(a, b)| community_of(a) != community_of(b)),
    );
    edges
}

/// Generate a simple graph per the spec; deterministic for a fixed spec.
pub fn generate_graph(spec: &GenSpec) -> Result<SocialGraph> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let pairs = match spec.model {
        GenModel::ErdosRenyi { p } => uniform_pairs(spec.n, p, &mut rng),
        GenModel::PowerLawConfig {
            gamma,
            min_degree,
            max_degree,
        } => {
            let degrees = power_law_degrees(spec.n, gamma, min_degree, max_degree, &mut rng);
            config_model_pairs(&degrees, &mut rng)
        }
        GenModel::PlantedCommunities {
            k,
            size,
            p_intra,
            p_inter,
        } => planted_pairs(k, size, p_intra, p_inter, &mut rng),
    };
    Ok(match spec.orientation {
        EdgeOrientation::Undirected => SocialGraph::from_edge_lists(spec.n, &pairs, &[]),
        EdgeOrientation::Directed { reciprocal_p } => {
            let mut follows = Vec::with_capacity(pairs.len());
            for (a, b) in pairs {
                let (from, to) = if rng.gen::<bool>() { (a, b) } else { (b, a) };
                follows.push((from, to));
                if rng.gen::<f64>() < reciprocal_p {
                    follows.push((to, from));
                }
            }
            SocialGraph::from_edge_lists(spec.n, &[], &follows)
        }
    })
}

/// How synthetic scores relate to the network.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AssignMode {
    /// Scores independent of structure.
    IidNormal,
    /// Scores correlated with connection count at strength `rho`.
    DegreeCoupled,
}

/// Score-assignment description: normal marginals with mean `mu`,
/// variance `sigma2`, clamped to [−1, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwbAssignment {
    pub mode: AssignMode,
    pub mu: f64,
    pub sigma2: f64,
    /// Target degree–score correlation; ignored by [`AssignMode::IidNormal`].
    pub rho: f64,
    pub seed: u64,
}

impl Default for SwbAssignment {
    fn default() -> Self {
        SwbAssignment {
            mode: AssignMode::IidNormal,
            mu: 0.0,
            sigma2: 0.08,
            rho: 0.0,
            seed: 0,
        }
    }
}

fn clamp_unit(x: f64) -> f64 {
    x.clamp(-1.0, 1.0)
}

/// Overall connection count used as the coupling basis: friend degree
/// plus follow degrees, so the same assignment works on undirected and
/// directed graphs.
fn coupling_degrees(g: &SocialGraph) -> Vec<f64> {
    (0..g.n_users() as u32)
        .map(|u| {
            (g.degree(u, ConnectionType::Friends)
                + g.degree(u, ConnectionType::Followees)
                + g.degree(u, ConnectionType::Followers)) as f64
        })
        .collect()
}

/// Normal scores by degree rank, with tied degrees sharing their group's
/// mean score so ties do not inject spurious order.
fn rank_normal_scores(degrees: &[f64]) -> Vec<f64> {
    let n = degrees.len();
    let std_normal = NormalDist::new(0.0, 1.0).expect("valid parameters");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| degrees[a].total_cmp(&degrees[b]).then(a.cmp(&b)));
    let raw: Vec<f64> = (0..n)
        .map(|i| std_normal.inverse_cdf((i as f64 + 0.5) / n as f64))
        .collect();
    let mut scores = vec![0.0; n];
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && degrees[order[end]] == degrees[order[start]] {
            end += 1;
        }
        let group_mean = raw[start..end].iter().sum::<f64>() / (end - start) as f64;
        for &u in &order[start..end] {
            scores[u] = group_mean;
        }
        start = end;
    }
    scores
}

/// Draw a score per user. Values are clamped to [−1, 1]; the
/// degree-coupled mode blends rank scores with independent noise and
/// calibrates the blend by bisection until the measured post-clamp
/// correlation meets the target (capped at pure rank coupling when the
/// target is unreachable).
pub fn assign_swb(g: &SocialGraph, a: &SwbAssignment) -> Vec<Option<f64>> {
    let n = g.n_users();
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let sigma = a.sigma2.sqrt();
    if sigma == 0.0 {
        return vec![Some(clamp_unit(a.mu)); n];
    }
    let noise_dist = Normal::new(0.0, 1.0).expect("valid parameters");
    let noise: Vec<f64> = (0..n).map(|_| noise_dist.sample(&mut rng)).collect();
    let iid = || -> Vec<Option<f64>> {
        noise.iter().map(|&e| Some(clamp_unit(a.mu + sigma * e))).collect()
    };
    match a.mode {
        AssignMode::IidNormal => iid(),
        AssignMode::DegreeCoupled => {
            let degrees = coupling_degrees(g);
            let spread = degrees.iter().any(|&d| d != degrees[0]);
            if n < 3 || !spread || a.rho == 0.0 {
                // no degree signal to couple to, or nothing requested
                return iid();
            }
            let sign = if a.rho < 0.0 { -1.0 } else { 1.0 };
            let target = a.rho.abs().min(1.0);
            let scores = rank_normal_scores(&degrees);
            let values_at = |alpha: f64| -> Vec<f64> {
                let beta = (1.0 - alpha * alpha).max(0.0).sqrt();
                scores
                    .iter()
                    .zip(&noise)
                    .map(|(&z, &e)| clamp_unit(a.mu + sigma * (sign * alpha * z + beta * e)))
                    .collect()
            };
            let corr_at = |alpha: f64| sign * pearson_r(&values_at(alpha), &degrees);
            let mut alpha = if corr_at(1.0) <= target {
                1.0
            } else {
                let (mut lo, mut hi) = (0.0f64, 1.0f64);
                for _ in 0..40 {
                    let mid = 0.5 * (lo + hi);
                    if corr_at(mid) < target {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                0.5 * (lo + hi)
            };
            if !alpha.is_finite() {
                alpha = 1.0;
            }
            values_at(alpha).into_iter().map(Some).collect()
        }
    }
}

/// One run's mean user-minus-connections differences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunDiff {
    pub diff_mean: f64,
    pub diff_median: f64,
}

/// Simulation check of the no-paradox expectation: with scores assigned
/// independently of structure, the average difference between a user's
/// score and their connections' aggregate should vanish.
#[derive(Debug, Clone, PartialEq)]
pub struct TheoremCheckReport {
    pub runs: usize,
    pub connection: ConnectionType,
    /// Grand mean over runs of the per-run mean difference (mean
    /// aggregate).
    pub mean_diff_mean: f64,
    /// Grand mean for the median aggregate.
    pub mean_diff_median: f64,
    /// Mean over runs of the per-user connection-aggregate sample
    /// variance.
    pub sigma_c2: f64,
    pub per_run: Vec<RunDiff>,
}

impl TheoremCheckReport {
    /// Both grand means within `tol` of zero.
    pub fn within(&self, tol: f64) -> bool {
        self.mean_diff_mean.abs() < tol && self.mean_diff_median.abs() < tol
    }
}

/// Repeatedly assign scores and measure mean user-minus-connections
/// differences; run `r` derives its seed from `(a.seed, r)`.
pub fn theorem1_check(
    g: &SocialGraph,
    a: &SwbAssignment,
    runs: usize,
    t: ConnectionType,
) -> TheoremCheckReport {
    assert!(runs >= 1, "simulation needs at least one run");
    let outcomes: Vec<(f64, f64, f64)> = (0..runs as u64)
        .into_par_iter()
        .map(|r| {
            let assignment = SwbAssignment {
                seed: child_seed(a.seed, r),
                ..*a
            };
            let values: Vec<f64> = assign_swb(g, &assignment)
                .into_iter()
                .map(|v| v.expect("synthetic scores are always defined"))
                .collect();
            let mut diff_mean_sum = 0.0;
            let mut diff_median_sum = 0.0;
            let mut aggregates = Vec::new();
            let mut buf = Vec::new();
            for u in 0..g.n_users() as u32 {
                let conn = g.connections(u, t).expect("index in range");
                if conn.is_empty() {
                    continue;
                }
                buf.clear();
                buf.extend(conn.iter().map(|&v| values[v as usize]));
                let mean_agg = AggKind::Mean.aggregate(&buf);
                let median_agg = AggKind::Median.aggregate(&buf);
                diff_mean_sum += values[u as usize] - mean_agg;
                diff_median_sum += values[u as usize] - median_agg;
                aggregates.push(mean_agg);
            }
            let m = aggregates.len() as f64;
            let var = if aggregates.len() < 2 {
                0.0
            } else {
                let mean = aggregates.iter().sum::<f64>() / m;
                aggregates.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0)
            };
            (diff_mean_sum / m, diff_median_sum / m, var)
        })
        .collect();
    let runs_f = outcomes.len() as f64;
    TheoremCheckReport {
        runs,
        connection: t,
        mean_diff_mean: outcomes.iter().map(|o| o.0).sum::<f64>() / runs_f,
        mean_diff_median: outcomes.iter().map(|o| o.1).sum::<f64>() / runs_f,
        sigma_c2: outcomes.iter().map(|o| o.2).sum::<f64>() / runs_f,
        per_run: outcomes
            .into_iter()
            .map(|(diff_mean, diff_median, _)| RunDiff {
                diff_mean,
                diff_median,
            })
            .collect(),
    }
}
