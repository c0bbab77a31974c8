//! Binary sentiment prediction from paradox-derived features: feature
//! extraction, a native regularized logistic-regression reference model
//! behind a pluggable interface, stratified cross-validation, and
//! accuracy/AUC evaluation with feature-group ablation.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::community::CommunityIndex;
use crate::error::Error;
use crate::graph::{ConnectionType, SocialGraph};
use crate::paradox::{degree_values, AggKind, ParadoxContexts};
use crate::Result;

/// Fixed width of the feature space: five sentiment-paradox groups of
/// six columns each, plus the nine degree columns.
pub const N_FEATURES: usize = 39;

const SENTIMENT_PARADOXES: [&str; 5] = [
    "general",
    "triad",
    "common_neighbor",
    "community",
    "common_interest",
];

/// Names of all 39 columns, in matrix order.
pub fn feature_names() -> Vec<String> {
    let mut names = Vec::with_capacity(N_FEATURES);
    for paradox in SENTIMENT_PARADOXES {
        for t in ConnectionType::ALL {
            for agg in AggKind::ALL {
                names.push(format!("{paradox}_{}_{}_swb", t.label(), agg.label()));
            }
        }
    }
    names.push("own_degree".into());
    names.push("own_out_degree".into());
    names.push("own_in_degree".into());
    for (t, basis) in [
        (ConnectionType::Friends, "degree"),
        (ConnectionType::Followees, "out_degree"),
        (ConnectionType::Followers, "in_degree"),
    ] {
        for agg in AggKind::ALL {
            names.push(format!("{}_{}_{basis}", t.label(), agg.label()));
        }
    }
    names
}

/// A named slice of the feature space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FeatureGroup {
    General,
    Triad,
    CommonNeighbor,
    Community,
    CommonInterest,
    Friendship,
    /// The thirty sentiment-paradox columns together.
    AllSentiment,
    /// Every column.
    All,
}

impl FeatureGroup {
    /// The six base groups, in column order.
    pub const SINGLES: [FeatureGroup; 6] = [
        FeatureGroup::General,
        FeatureGroup::Triad,
        FeatureGroup::CommonNeighbor,
        FeatureGroup::Community,
        FeatureGroup::CommonInterest,
        FeatureGroup::Friendship,
    ];

    pub fn label(self) -> &'static str {
        match self {
            FeatureGroup::General => "general",
            FeatureGroup::Triad => "triad",
            FeatureGroup::CommonNeighbor => "common-neighbor",
            FeatureGroup::Community => "community",
            FeatureGroup::CommonInterest => "common-interest",
            FeatureGroup::Friendship => "friendship",
            FeatureGroup::AllSentiment => "all-sentiment",
            FeatureGroup::All => "all",
        }
    }

    pub fn parse(name: &str) -> Result<FeatureGroup> {
        match name {
            "general" => Ok(FeatureGroup::General),
            "triad" => Ok(FeatureGroup::Triad),
            "common-neighbor" => Ok(FeatureGroup::CommonNeighbor),
            "community" => Ok(FeatureGroup::Community),
            "common-interest" => Ok(FeatureGroup::CommonInterest),
            "friendship" => Ok(FeatureGroup::Friendship),
            "all-sentiment" => Ok(FeatureGroup::AllSentiment),
            "all" => Ok(FeatureGroup::All),
            other => Err(Error::UnknownFeatureGroup(other.to_string())),
        }
    }

    /// Column indices the group covers.
    pub fn columns(self) -> std::ops::Range<usize> {
        match self {
            FeatureGroup::General => 0..6,
            FeatureGroup::Triad => 6..12,
            FeatureGroup::CommonNeighbor => 12..18,
            FeatureGroup::Community => 18..24,
            FeatureGroup::CommonInterest => 24..30,
            FeatureGroup::Friendship => 30..39,
            FeatureGroup::AllSentiment => 0..30,
            FeatureGroup::All => 0..N_FEATURES,
        }
    }
}

/// Per-user feature rows for every positively or negatively labeled
/// user. Missing cells (empty comparison context) are `NaN` until
/// imputed by a training pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub names: Vec<String>,
    /// Dense user index of each row.
    pub users: Vec<u32>,
    /// One row per user; `NaN` marks a missing cell.
    pub rows: Vec<Vec<f64>>,
    /// `true` for Positive, `false` for Negative.
    pub labels: Vec<bool>,
}

impl FeatureMatrix {
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.names.len()
    }

    /// Copy of the matrix keeping only the given columns.
    pub fn restricted(&self, cols: std::ops::Range<usize>) -> FeatureMatrix {
        FeatureMatrix {
            names: self.names[cols.clone()].to_vec(),
            users: self.users.clone(),
            rows: self.rows.iter().map(|r| r[cols.clone()].to_vec()).collect(),
            labels: self.labels.clone(),
        }
    }
}

fn aggregate_or_nan(buf: &mut Vec<f64>) -> (f64, f64) {
    if buf.is_empty() {
        (f64::NAN, f64::NAN)
    } else {
        (
            AggKind::Mean.aggregate(buf),
            AggKind::Median.aggregate(buf),
        )
    }
}

/// Build the 39-column matrix over all users with a nonzero sentiment
/// sign; neutral (exactly zero) and unscored users get no row.
pub fn extract_features(
    g: &SocialGraph,
    swb_values: &[Option<f64>],
    communities: &CommunityIndex,
) -> FeatureMatrix {
    assert_eq!(
        swb_values.len(),
        g.n_users(),
        "value vector must cover every user"
    );
    let labeled: Vec<(u32, bool)> = swb_values
        .iter()
        .enumerate()
        .filter_map(|(u, v)| match v {
            Some(s) if *s > 0.0 => Some((u as u32, true)),
            Some(s) if *s < 0.0 => Some((u as u32, false)),
            _ => None,
        })
        .collect();
    let mut rows = vec![vec![f64::NAN; N_FEATURES]; labeled.len()];

    let mut buf = Vec::new();
    for (ti, t) in ConnectionType::ALL.into_iter().enumerate() {
        let contexts = [
            ParadoxContexts::general(g, t),
            ParadoxContexts::triad(g, t),
            ParadoxContexts::common_neighbor(g, t),
            ParadoxContexts::community(g, communities, t),
            ParadoxContexts::common_interest(g, communities, t),
        ];
        for (pi, ctx) in contexts.iter().enumerate() {
            let col = pi * 6 + ti * 2;
            for (row, &(u, _)) in rows.iter_mut().zip(&labeled) {
                ctx.pooled_defined(u, swb_values, &mut buf);
                (row[col], row[col + 1]) = aggregate_or_nan(&mut buf);
            }
        }
    }
    for (ti, t) in ConnectionType::ALL.into_iter().enumerate() {
        let degrees = degree_values(g, t);
        let col = 33 + ti * 2;
        for (row, &(u, _)) in rows.iter_mut().zip(&labeled) {
            row[30 + ti] = g.degree(u, t) as f64;
            buf.clear();
            buf.extend(
                g.connections(u, t)
                    .expect("index in range by construction")
                    .iter()
                    .map(|&v| degrees[v as usize].expect("degrees are always defined")),
            );
            (row[col], row[col + 1]) = aggregate_or_nan(&mut buf);
        }
    }
    FeatureMatrix {
        names: feature_names(),
        users: labeled.iter().map(|&(u, _)| u).collect(),
        rows,
        labels: labeled.iter().map(|&(_, p)| p).collect(),
    }
}

/// Binary probabilistic classifier over fixed-width feature rows.
pub trait Classifier {
    /// Fit on finite-valued rows; `labels[i]` is the class of `rows[i]`.
    fn fit(&mut self, rows: &[Vec<f64>], labels: &[bool]) -> Result<()>;
    /// Probability of the positive class for one finite-valued row.
    fn predict_proba(&self, row: &[f64]) -> f64;
}

/// L2-regularized logistic regression trained by full-batch gradient
/// descent with a backtracking step size. Deterministic: starts from
/// zero weights, no sampling involved.
#[derive(Debug, Clone)]
pub struct LogisticRegression {
    /// Ridge penalty on the weights (never the intercept), scaled by 1/n.
    pub l2: f64,
    pub max_epochs: usize,
    /// Stop once an epoch improves the loss by less than this.
    pub tol: f64,
    weights: Vec<f64>,
    intercept: f64,
}

impl Default for LogisticRegression {
    fn default() -> Self {
        LogisticRegression {
            l2: 1.0,
            max_epochs: 500,
            tol: 1e-6,
            weights: Vec::new(),
            intercept: 0.0,
        }
    }
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

impl LogisticRegression {
    fn loss(&self, rows: &[Vec<f64>], labels: &[bool]) -> f64 {
        let n = rows.len() as f64;
        let data: f64 = rows
            .iter()
            .zip(labels)
            .map(|(row, &y)| {
                let z = self.decision(row);
                // log(1 + e^-|z|) + max(0, ∓z): stable log-loss
                let softplus = (-z.abs()).exp().ln_1p();
                if y {
                    softplus + (-z).max(0.0)
                } else {
                    softplus + z.max(0.0)
                }
            })
            .sum();
        let ridge: f64 = self.weights.iter().map(|w| w * w).sum();
        (data + 0.5 * self.l2 * ridge) / n
    }

    fn decision(&self, row: &[f64]) -> f64 {
        self.intercept
            + self
                .weights
                .iter()
                .zip(row)
                .map(|(w, x)| w * x)
                .sum::<f64>()
    }
}

impl Classifier for LogisticRegression {
    fn fit(&mut self, rows: &[Vec<f64>], labels: &[bool]) -> Result<()> {
        let n = rows.len();
        assert_eq!(n, labels.len(), "one label per row");
        let n_pos = labels.iter().filter(|&&y| y).count();
        if n == 0 || n_pos == 0 || n_pos == n {
            return Err(Error::SingleClass);
        }
        let d = rows[0].len();
        self.weights = vec![0.0; d];
        self.intercept = 0.0;
        let nf = n as f64;
        let mut lr = 0.5;
        let mut prev_loss = self.loss(rows, labels);
        for _ in 0..self.max_epochs {
            let mut grad_w = vec![0.0; d];
            let mut grad_b = 0.0;
            for (row, &y) in rows.iter().zip(labels) {
                let err = sigmoid(self.decision(row)) - f64::from(u8::from(y));
                grad_b += err;
                for (gw, &x) in grad_w.iter_mut().zip(row) {
                    *gw += err * x;
                }
            }
            for (gw, w) in grad_w.iter_mut().zip(&self.weights) {
                *gw = (*gw + self.l2 * w) / nf;
            }
            grad_b /= nf;

            // backtracking: shrink the step until the loss improves
            let (saved_w, saved_b) = (self.weights.clone(), self.intercept);
            let loss = loop {
                for (w, gw) in self.weights.iter_mut().zip(&grad_w) {
                    *w -= lr * gw;
                }
                self.intercept -= lr * grad_b;
                let loss = self.loss(rows, labels);
                if loss <= prev_loss || lr < 1e-12 {
                    break loss;
                }
                self.weights.copy_from_slice(&saved_w);
                self.intercept = saved_b;
                lr *= 0.5;
            };
            let gain = prev_loss - loss;
            prev_loss = loss;
            lr *= 1.1;
            if gain.abs() < self.tol {
                break;
            }
        }
        Ok(())
    }

    fn predict_proba(&self, row: &[f64]) -> f64 {
        sigmoid(self.decision(row))
    }
}

/// Per-column imputation and standardization statistics, fit on a
/// training fold only.
#[derive(Debug, Clone)]
pub(crate) struct Pipeline {
    fill: Vec<f64>,
    center: Vec<f64>,
    scale: Vec<f64>,
}

impl Pipeline {
    pub(crate) fn fit(rows: &[Vec<f64>]) -> Pipeline {
        assert!(!rows.is_empty(), "cannot fit a pipeline on zero rows");
        let d = rows[0].len();
        let mut fill = vec![0.0; d];
        for j in 0..d {
            let defined: Vec<f64> = rows
                .iter()
                .map(|r| r[j])
                .filter(|v| v.is_finite())
                .collect();
            if !defined.is_empty() {
                fill[j] = defined.iter().sum::<f64>() / defined.len() as f64;
            }
        }
        let imputed = |i: usize, j: usize| -> f64 {
            let v = rows[i][j];
            if v.is_finite() {
                v
            } else {
                fill[j]
            }
        };
        let n = rows.len() as f64;
        let mut center = vec![0.0; d];
        let mut scale = vec![1.0; d];
        for j in 0..d {
            let mean = (0..rows.len()).map(|i| imputed(i, j)).sum::<f64>() / n;
            let var = (0..rows.len())
                .map(|i| (imputed(i, j) - mean).powi(2))
                .sum::<f64>()
                / n;
            center[j] = mean;
            if var > 0.0 {
                scale[j] = var.sqrt();
            }
        }
        Pipeline {
            fill,
            center,
            scale,
        }
    }

    pub(crate) fn transform(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .enumerate()
            .map(|(j, &v)| {
                let v = if v.is_finite() { v } else { self.fill[j] };
                (v - self.center[j]) / self.scale[j]
            })
            .collect()
    }
}

/// Rank-statistic AUC: the probability a random positive score exceeds a
/// random negative one, ties counted half.
pub fn auc(scores: &[f64], labels: &[bool]) -> Result<f64> {
    assert_eq!(scores.len(), labels.len(), "one label per score");
    let n_pos = labels.iter().filter(|&&y| y).count();
    let n_neg = labels.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::SingleClass);
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    // average ranks across tie runs, 1-based
    let mut pos_rank_sum = 0.0;
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && scores[order[end]] == scores[order[start]] {
            end += 1;
        }
        let avg_rank = (start + 1 + end) as f64 / 2.0;
        let ties_pos = order[start..end]
            .iter()
            .filter(|&&i| labels[i])
            .count() as f64;
        pos_rank_sum += avg_rank * ties_pos;
        start = end;
    }
    let u = pos_rank_sum - (n_pos * (n_pos + 1)) as f64 / 2.0;
    Ok(u / (n_pos as f64 * n_neg as f64))
}

/// One fold's held-out metrics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FoldScore {
    pub accuracy: f64,
    pub auc: f64,
}

/// Cross-validation outcome; headline numbers are unweighted fold means.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalResult {
    pub accuracy: f64,
    pub auc: f64,
    pub per_fold: Vec<FoldScore>,
    pub folds: usize,
    pub seed: u64,
}

/// Deterministic stratified fold assignment: each class is shuffled
/// separately and dealt round-robin, so per-fold class counts differ by
/// at most one.
pub(crate) fn stratified_folds(labels: &[bool], folds: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assignment = vec![0usize; labels.len()];
    for class in [true, false] {
        let mut members: Vec<usize> = (0..labels.len())
            .filter(|&i| labels[i] == class)
            .collect();
        members.shuffle(&mut rng);
        for (k, i) in members.into_iter().enumerate() {
            assignment[i] = k % folds;
        }
    }
    assignment
}

fn eval_fold(m: &FeatureMatrix, assignment: &[usize], fold: usize) -> Result<FoldScore> {
    let mut train_rows = Vec::new();
    let mut train_labels = Vec::new();
    let mut test_idx = Vec::new();
    for i in 0..m.n_rows() {
        if assignment[i] == fold {
            test_idx.push(i);
        } else {
            train_rows.push(m.rows[i].clone());
            train_labels.push(m.labels[i]);
        }
    }
    let pipeline = Pipeline::fit(&train_rows);
    let train: Vec<Vec<f64>> = train_rows.iter().map(|r| pipeline.transform(r)).collect();
    let mut model = LogisticRegression::default();
    model.fit(&train, &train_labels)?;
    let scores: Vec<f64> = test_idx
        .iter()
        .map(|&i| model.predict_proba(&pipeline.transform(&m.rows[i])))
        .collect();
    let test_labels: Vec<bool> = test_idx.iter().map(|&i| m.labels[i]).collect();
    let correct = scores
        .iter()
        .zip(&test_labels)
        .filter(|&(s, &y)| (*s >= 0.5) == y)
        .count();
    Ok(FoldScore {
        accuracy: correct as f64 / test_labels.len() as f64,
        auc: auc(&scores, &test_labels)?,
    })
}

/// Stratified k-fold cross-validation of the reference classifier.
pub fn cross_validate(m: &FeatureMatrix, folds: usize, seed: u64) -> Result<EvalResult> {
    if folds < 2 {
        return Err(Error::InvalidInput(format!(
            "cross-validation needs at least 2 folds, got {folds}"
        )));
    }
    let n_pos = m.labels.iter().filter(|&&y| y).count();
    let n_neg = m.n_rows() - n_pos;
    if n_pos < folds || n_neg < folds {
        return Err(Error::InvalidInput(format!(
            "each class must fill every fold: {n_pos} positive / {n_neg} negative rows for {folds} folds"
        )));
    }
    let assignment = stratified_folds(&m.labels, folds, seed);
    let per_fold: Vec<FoldScore> = (0..folds)
        .into_par_iter()
        .map(|fold| eval_fold(m, &assignment, fold))
        .collect::<Result<_>>()?;
    let k = per_fold.len() as f64;
    Ok(EvalResult {
        accuracy: per_fold.iter().map(|f| f.accuracy).sum::<f64>() / k,
        auc: per_fold.iter().map(|f| f.auc).sum::<f64>() / k,
        per_fold,
        folds,
        seed,
    })
}

/// Cross-validate each named base group separately, then the
/// thirty-column sentiment composite and the full composite.
pub fn ablate_feature_groups(
    m: &FeatureMatrix,
    groups: &[&str],
    folds: usize,
    seed: u64,
) -> Result<Vec<(FeatureGroup, EvalResult)>> {
    if groups.is_empty() {
        return Err(Error::InvalidInput(
            "ablation needs at least one feature group".into(),
        ));
    }
    let mut selected = Vec::with_capacity(groups.len() + 2);
    for name in groups {
        let group = FeatureGroup::parse(name)?;
        if !FeatureGroup::SINGLES.contains(&group) {
            return Err(Error::UnknownFeatureGroup(format!(
                "{name} is a composite; ablation subsets draw from the base groups"
            )));
        }
        selected.push(group);
    }
    selected.push(FeatureGroup::AllSentiment);
    selected.push(FeatureGroup::All);
    selected
        .into_iter()
        .map(|group| {
            let sub = m.restricted(group.columns());
            Ok((group, cross_validate(&sub, folds, seed)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{generate_graph, EdgeOrientation, GenModel, GenSpec};
    use proptest::prelude::*;

    /// Four-node star with the center above zero and the leaves below.
    fn star_matrix() -> FeatureMatrix {
        let g = SocialGraph::from_edge_lists(4, &[(0, 1), (0, 2), (0, 3)], &[]);
        let values = vec![Some(0.1), Some(-0.2), Some(-0.3), Some(-0.4)];
        let communities = CommunityIndex::from_memberships(4, &[]);
        extract_features(&g, &values, &communities)
    }

    /// Graph whose scores are smoothed over edges, so connection scores
    /// carry real signal about a user's own sign.
    fn homophily_matrix(seed: u64) -> FeatureMatrix {
        let g = generate_graph(&GenSpec {
            n: 400,
            model: GenModel::ErdosRenyi { p: 0.03 },
            orientation: EdgeOrientation::Undirected,
            seed,
        })
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xA5A5);
        let mut x: Vec<f64> =
            (0..g.n_users()).map(|_| rand::Rng::gen_range(&mut rng, -1.0..1.0)).collect();
        for _ in 0..2 {
            let prev = x.clone();
            for u in 0..g.n_users() as u32 {
                let conn = g.connections(u, ConnectionType::Friends).unwrap();
                if conn.is_empty() {
                    continue;
                }
                let neighbor_mean =
                    conn.iter().map(|&v| prev[v as usize]).sum::<f64>() / conn.len() as f64;
                x[u as usize] = 0.5 * prev[u as usize] + 0.5 * neighbor_mean;
            }
        }
        let values: Vec<Option<f64>> = x
            .iter()
            .map(|&v| Some(v.clamp(-1.0, 1.0)))
            .collect();
        let communities = CommunityIndex::from_memberships(g.n_users(), &[]);
        extract_features(&g, &values, &communities)
    }

    #[test]
    fn column_layout_is_fixed() {
        let names = feature_names();
        assert_eq!(names.len(), N_FEATURES);
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), N_FEATURES, "names must be distinct");
        assert_eq!(names[0], "general_friends_mean_swb");
        assert_eq!(names[11], "triad_followers_median_swb");
        assert_eq!(names[30], "own_degree");
        assert_eq!(names[38], "followers_median_in_degree");
        // the six base groups tile the space
        let mut covered = vec![false; N_FEATURES];
        for group in FeatureGroup::SINGLES {
            for c in group.columns() {
                assert!(!covered[c], "column {c} claimed twice");
                covered[c] = true;
            }
        }
        assert!(covered.iter().all(|&c| c));
        assert_eq!(FeatureGroup::AllSentiment.columns(), 0..30);
        assert_eq!(FeatureGroup::All.columns().len(), N_FEATURES);
    }

    #[test]
    fn group_names_round_trip() {
        for group in FeatureGroup::SINGLES {
            assert_eq!(FeatureGroup::parse(group.label()).unwrap(), group);
        }
        assert!(matches!(
            FeatureGroup::parse("sentiment"),
            Err(Error::UnknownFeatureGroup(_))
        ));
    }

    #[test]
    fn star_features_match_hand_computation() {
        let m = star_matrix();
        assert_eq!(m.n_rows(), 4);
        assert_eq!(m.users, vec![0, 1, 2, 3]);
        assert_eq!(m.labels, vec![true, false, false, false]);
        let center = &m.rows[0];
        assert!((center[0] - (-0.3)).abs() < 1e-12); // mean of −0.2, −0.3, −0.4
        assert!((center[1] - (-0.3)).abs() < 1e-12); // median
        let leaf = &m.rows[1];
        assert!((leaf[0] - 0.1).abs() < 1e-12);
        // no triads and no communities in a star
        assert!(center[FeatureGroup::Triad.columns().start].is_nan());
        assert!(center[FeatureGroup::Community.columns().start].is_nan());
        assert!(center[FeatureGroup::CommonInterest.columns().start].is_nan());
        // leaves share the center as a common neighbor... but a star has
        // no two adjacent users with a shared neighbor
        assert!(center[FeatureGroup::CommonNeighbor.columns().start].is_nan());
        // degree block: center has 3 friends of degree 1
        assert_eq!(center[30], 3.0);
        assert_eq!(center[31], 0.0); // no follow edges
        assert_eq!(center[33], 1.0); // mean friend degree
        assert_eq!(leaf[30], 1.0);
        assert_eq!(leaf[33], 3.0);
        // no followees → the followee aggregate is missing
        assert!(center[35].is_nan());
    }

    #[test]
    fn neutral_and_unscored_users_get_no_row() {
        let g = SocialGraph::from_edge_lists(3, &[(0, 1), (1, 2)], &[]);
        let values = vec![Some(0.0), None, Some(-0.2)];
        let communities = CommunityIndex::from_memberships(3, &[]);
        let m = extract_features(&g, &values, &communities);
        assert_eq!(m.n_rows(), 1);
        assert_eq!(m.users, vec![2]);
        assert_eq!(m.labels, vec![false]);
    }

    #[test]
    fn isolated_user_has_zero_degrees_and_missing_connections() {
        let g = SocialGraph::from_edge_lists(3, &[(1, 2)], &[]);
        let values = vec![Some(0.4), Some(0.2), Some(-0.2)];
        let communities = CommunityIndex::from_memberships(3, &[]);
        let m = extract_features(&g, &values, &communities);
        let row = &m.rows[0];
        assert_eq!(row[30], 0.0);
        assert_eq!(row[31], 0.0);
        assert_eq!(row[32], 0.0);
        for c in 0..30 {
            assert!(row[c].is_nan(), "column {c} should be missing");
        }
        assert!(row[33].is_nan());
    }

    #[test]
    fn auc_matches_hand_counts() {
        assert_eq!(
            auc(&[0.9, 0.4, 0.5, 0.1], &[true, true, false, false]).unwrap(),
            0.75
        );
        assert_eq!(
            auc(&[0.9, 0.8, 0.2, 0.1], &[true, true, false, false]).unwrap(),
            1.0
        );
        assert_eq!(auc(&[0.3, 0.3, 0.3], &[true, false, true]).unwrap(), 0.5);
        assert!(matches!(
            auc(&[0.1, 0.2], &[true, true]),
            Err(Error::SingleClass)
        ));
    }

    #[test]
    fn separable_toy_set_fits_perfectly() {
        let rows: Vec<Vec<f64>> = vec![
            vec![1.0, 0.2],
            vec![1.2, -0.1],
            vec![0.9, 0.0],
            vec![-1.0, 0.1],
            vec![-1.1, -0.2],
            vec![-0.8, 0.3],
        ];
        let labels = vec![true, true, true, false, false, false];
        let mut model = LogisticRegression::default();
        model.fit(&rows, &labels).unwrap();
        for (row, &y) in rows.iter().zip(&labels) {
            assert_eq!(model.predict_proba(row) >= 0.5, y);
        }
    }

    #[test]
    fn constant_features_predict_the_class_prior() {
        let rows: Vec<Vec<f64>> = (0..40).map(|_| vec![0.0, 0.0]).collect();
        let labels: Vec<bool> = (0..40).map(|i| i < 30).collect();
        let mut model = LogisticRegression::default();
        model.fit(&rows, &labels).unwrap();
        let p = model.predict_proba(&[0.0, 0.0]);
        assert!((p - 0.75).abs() < 1e-3, "prior prediction {p}");
    }

    #[test]
    fn single_class_training_is_rejected() {
        let rows = vec![vec![1.0], vec![2.0]];
        let mut model = LogisticRegression::default();
        assert!(matches!(
            model.fit(&rows, &[true, true]),
            Err(Error::SingleClass)
        ));
    }

    #[test]
    fn pipeline_imputes_with_training_means_then_standardizes() {
        let rows = vec![
            vec![1.0, f64::NAN],
            vec![3.0, 4.0],
            vec![f64::NAN, 8.0],
        ];
        let p = Pipeline::fit(&rows);
        // column 0: defined mean 2.0; column 1: defined mean 6.0
        let t = p.transform(&[f64::NAN, f64::NAN]);
        assert!(t[0].abs() < 1e-12);
        assert!(t[1].abs() < 1e-12);
        // imputed column 0 becomes [1, 3, 2]: centered at 2
        let t = p.transform(&[3.0, 6.0]);
        assert!(t[0] > 0.0);
        assert!((t[1] - 0.0).abs() < 1e-12);
        // all-missing column keeps scale 1 and centers at zero
        let empty = Pipeline::fit(&vec![vec![f64::NAN]; 3]);
        assert_eq!(empty.transform(&[f64::NAN]), vec![0.0]);
    }

    #[test]
    fn cross_validation_is_deterministic_per_seed() {
        let m = homophily_matrix(11);
        let a = cross_validate(&m, 10, 7).unwrap();
        let b = cross_validate(&m, 10, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.per_fold.len(), 10);
        assert_eq!(a.folds, 10);
        assert_eq!(a.seed, 7);
    }

    #[test]
    fn duplicated_separable_rows_score_perfectly_in_every_fold() {
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for _ in 0..20 {
            rows.push(vec![2.0, 1.0]);
            labels.push(true);
            rows.push(vec![-2.0, -1.0]);
            labels.push(false);
        }
        let m = FeatureMatrix {
            names: vec!["a".into(), "b".into()],
            users: (0..rows.len() as u32).collect(),
            rows,
            labels,
        };
        let eval = cross_validate(&m, 10, 3).unwrap();
        for fold in &eval.per_fold {
            assert_eq!(fold.accuracy, 1.0);
            assert_eq!(fold.auc, 1.0);
        }
        assert_eq!(eval.accuracy, 1.0);
    }

    #[test]
    fn undersized_classes_are_rejected() {
        let m = FeatureMatrix {
            names: vec!["a".into()],
            users: (0..8).collect(),
            rows: (0..8).map(|i| vec![i as f64]).collect(),
            labels: (0..8).map(|i| i < 4).collect(),
        };
        assert!(cross_validate(&m, 10, 0).is_err());
        assert!(cross_validate(&m, 1, 0).is_err());
        assert!(cross_validate(&m, 4, 0).is_ok());
    }

    #[test]
    fn homophilous_scores_are_predictable_but_shuffled_labels_are_not() {
        let m = homophily_matrix(5);
        assert!(m.n_rows() > 100, "fixture too small: {}", m.n_rows());
        let eval = cross_validate(&m, 10, 13).unwrap();
        assert!(eval.auc > 0.55, "signal AUC {}", eval.auc);

        let mut shuffled = m.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        shuffled.labels.shuffle(&mut rng);
        let eval = cross_validate(&shuffled, 10, 13).unwrap();
        assert!(
            (eval.auc - 0.5).abs() < 0.05,
            "shuffled-label AUC {}",
            eval.auc
        );
    }

    #[test]
    fn ablation_returns_requested_groups_plus_composites() {
        let m = homophily_matrix(21);
        let results =
            ablate_feature_groups(&m, &["general", "friendship"], 5, 17).unwrap();
        let order: Vec<FeatureGroup> = results.iter().map(|(g, _)| *g).collect();
        assert_eq!(
            order,
            vec![
                FeatureGroup::General,
                FeatureGroup::Friendship,
                FeatureGroup::AllSentiment,
                FeatureGroup::All
            ]
        );
        let best_single = results[..2]
            .iter()
            .map(|(_, e)| e.auc)
            .fold(f64::NEG_INFINITY, f64::max);
        let composite = results[3].1.auc;
        assert!(
            composite >= best_single - 0.02,
            "composite {composite} vs best single {best_single}"
        );

        assert!(matches!(
            ablate_feature_groups(&m, &[], 5, 17),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            ablate_feature_groups(&m, &["plausibility"], 5, 17),
            Err(Error::UnknownFeatureGroup(_))
        ));
        assert!(ablate_feature_groups(&m, &["all"], 5, 17).is_err());
    }

    proptest! {
        #[test]
        fn folds_partition_and_stratify(
            n_pos in 10usize..60,
            n_neg in 10usize..60,
            folds in 2usize..8,
            seed in 0u64..1000,
        ) {
            prop_assume!(n_pos >= folds && n_neg >= folds);
            let labels: Vec<bool> = (0..n_pos + n_neg).map(|i| i < n_pos).collect();
            let assignment = stratified_folds(&labels, folds, seed);
            prop_assert_eq!(assignment.len(), labels.len());
            let mut pos_counts = vec![0usize; folds];
            let mut neg_counts = vec![0usize; folds];
            for (i, &fold) in assignment.iter().enumerate() {
                prop_assert!(fold < folds);
                if labels[i] {
                    pos_counts[fold] += 1;
                } else {
                    neg_counts[fold] += 1;
                }
            }
            // round-robin dealing: class counts differ by at most one
            for counts in [&pos_counts, &neg_counts] {
                let lo = counts.iter().min().unwrap();
                let hi = counts.iter().max().unwrap();
                prop_assert!(hi - lo <= 1, "unbalanced folds: {:?}", counts);
            }
            prop_assert_eq!(pos_counts.iter().sum::<usize>(), n_pos);
            prop_assert_eq!(neg_counts.iter().sum::<usize>(), n_neg);
        }

        #[test]
        fn auc_is_invariant_under_monotone_transforms(
            raw in prop::collection::vec((0i32..17, prop::bool::ANY), 4..40),
        ) {
            let scores: Vec<f64> = raw.iter().map(|&(s, _)| s as f64 / 8.0).collect();
            let labels: Vec<bool> = raw.iter().map(|&(_, y)| y).collect();
            prop_assume!(labels.iter().any(|&y| y) && labels.iter().any(|&y| !y));
            let base = auc(&scores, &labels).unwrap();
            // affine map on the 1/8 grid is exact, so ties are preserved
            let stretched: Vec<f64> = scores.iter().map(|s| 2.0 * s + 1.0).collect();
            prop_assert_eq!(base, auc(&stretched, &labels).unwrap());
        }
    }
}
