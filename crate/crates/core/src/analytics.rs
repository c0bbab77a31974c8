//! Correlation, trend, and group analyses connecting sentiment to degree
//! and activity, plus the community size/density sweep.

use std::collections::BTreeMap;

use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::community::CommunityIndex;
use crate::error::Error;
use crate::graph::{ConnectionType, SocialGraph};
use crate::nullmodel::{map_replicates, NullConfig};
use crate::paradox::{compare_to_connections, AggKind, ComparisonStatus};
use crate::sentiment::{ActivityRecord, PolarityLabel, UserSentiment};
use crate::Result;

/// Product-moment correlation with its two-sided significance test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationResult {
    pub r: f64,
    pub p_value: f64,
    pub n: usize,
}

/// Correlation coefficient without validation or significance; shared by
/// the public test and the generator calibration.
pub(crate) fn pearson_r(x: &[f64], y: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in x.iter().zip(y) {
        let dx = a - mx;
        let dy = b - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0)
}

/// Pearson correlation with a two-sided p-value from the exact t statistic
/// `r·sqrt((n−2)/(1−r²))` on `n−2` degrees of freedom.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<CorrelationResult> {
    if x.len() != y.len() {
        return Err(Error::InvalidInput(format!(
            "correlation inputs differ in length: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "correlation needs at least 3 samples, got {}",
            x.len()
        )));
    }
    let zero_var = |v: &[f64]| {
        let m = v.iter().sum::<f64>() / v.len() as f64;
        v.iter().all(|a| (a - m).abs() == 0.0)
    };
    if zero_var(x) || zero_var(y) {
        return Err(Error::InvalidInput(
            "correlation undefined for zero-variance input".into(),
        ));
    }
    let n = x.len();
    let r = pearson_r(x, y);
    let df = (n - 2) as f64;
    let p_value = if (1.0 - r * r) <= 0.0 {
        0.0
    } else {
        let t = r.abs() * (df / (1.0 - r * r)).sqrt();
        let dist = StudentsT::new(0.0, 1.0, df).expect("df >= 1");
        2.0 * (1.0 - dist.cdf(t))
    };
    Ok(CorrelationResult {
        r,
        p_value: p_value.clamp(0.0, 1.0),
        n,
    })
}

/// Row key of the group-degree table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DegreeGroup {
    Positive,
    Negative,
    Neutral,
    /// Every scored user, not the mean of the group means.
    Overall,
}

impl DegreeGroup {
    pub const ALL: [DegreeGroup; 4] = [
        DegreeGroup::Positive,
        DegreeGroup::Negative,
        DegreeGroup::Neutral,
        DegreeGroup::Overall,
    ];

    pub fn label(self) -> &'static str {
        match self {
            DegreeGroup::Positive => "positive",
            DegreeGroup::Negative => "negative",
            DegreeGroup::Neutral => "neutral",
            DegreeGroup::Overall => "overall",
        }
    }
}

/// Mean connection counts of one polarity group; means absent for empty
/// groups.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupDegreeRow {
    pub group: DegreeGroup,
    pub n_users: usize,
    pub mean_friends: Option<f64>,
    pub mean_followees: Option<f64>,
    pub mean_followers: Option<f64>,
}

/// Per-polarity mean connection counts, optionally restricted to a score
/// band.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupDegreeTable {
    pub swb_band: Option<(f64, f64)>,
    /// Rows in [`DegreeGroup::ALL`] order.
    pub rows: Vec<GroupDegreeRow>,
}

/// Partition scored users by polarity (inside the band, when given) and
/// average their connection counts per group.
pub fn group_degree_means(
    g: &SocialGraph,
    swb_values: &[Option<f64>],
    band: Option<(f64, f64)>,
) -> GroupDegreeTable {
    assert_eq!(swb_values.len(), g.n_users());
    let mut sums: BTreeMap<&'static str, (usize, f64, f64, f64)> = BTreeMap::new();
    let mut add = |group: DegreeGroup, u: u32| {
        let entry = sums.entry(group.label()).or_default();
        entry.0 += 1;
        entry.1 += g.degree(u, ConnectionType::Friends) as f64;
        entry.2 += g.degree(u, ConnectionType::Followees) as f64;
        entry.3 += g.degree(u, ConnectionType::Followers) as f64;
    };
    for u in 0..g.n_users() as u32 {
        let Some(s) = swb_values[u as usize] else {
            continue;
        };
        if let Some((lo, hi)) = band {
            if s < lo || s > hi {
                continue;
            }
        }
        match PolarityLabel::of(Some(s)) {
            PolarityLabel::Positive => add(DegreeGroup::Positive, u),
            PolarityLabel::Negative => add(DegreeGroup::Negative, u),
            PolarityLabel::Neutral => add(DegreeGroup::Neutral, u),
            PolarityLabel::Undefined => unreachable!("value is defined"),
        }
        add(DegreeGroup::Overall, u);
    }
    let rows = DegreeGroup::ALL
        .iter()
        .map(|&group| {
            let (n, f, fo, fr) = sums.get(group.label()).copied().unwrap_or_default();
            GroupDegreeRow {
                group,
                n_users: n,
                mean_friends: (n > 0).then(|| f / n as f64),
                mean_followees: (n > 0).then(|| fo / n as f64),
                mean_followers: (n > 0).then(|| fr / n as f64),
            }
        })
        .collect();
    GroupDegreeTable {
        swb_band: band,
        rows,
    }
}

/// One x-bin of a trend table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrendBin {
    pub lower: f64,
    pub upper: f64,
    pub n: usize,
    pub mean_x: f64,
    pub mean_y: f64,
}

/// Least-squares line over the points inside the fit band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Points the line was fit to.
    pub n: usize,
}

/// Binned means of y over x plus a linear fit over a band of raw points.
#[derive(Debug, Clone, PartialEq)]
pub struct TrendTable {
    pub bin_width: f64,
    /// Non-empty bins, ascending by x.
    pub bins: Vec<TrendBin>,
    pub fit_band: (f64, f64),
    /// Absent when fewer than two band points exist or x is constant
    /// there.
    pub fit: Option<LinearFit>,
}

/// Default band the trend line is fit over; the extremes of the score
/// range are dominated by users with very few polarized posts and are
/// reported but not fitted.
pub const DEFAULT_FIT_BAND: (f64, f64) = (-0.5, 0.5);

/// Mean of y per x-bin, with an ordinary least-squares fit over the raw
/// points whose x lies in `fit_band` (defaults to [`DEFAULT_FIT_BAND`]).
pub fn binned_trend(
    x: &[f64],
    y: &[f64],
    bin_width: f64,
    fit_band: Option<(f64, f64)>,
) -> Result<TrendTable> {
    if !(bin_width > 0.0) {
        return Err(Error::InvalidInput(format!(
            "bin width must be positive, got {bin_width}"
        )));
    }
    if x.len() != y.len() {
        return Err(Error::InvalidInput(format!(
            "trend inputs differ in length: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    let fit_band = fit_band.unwrap_or(DEFAULT_FIT_BAND);

    let mut acc: BTreeMap<i64, (usize, f64, f64)> = BTreeMap::new();
    for (&a, &b) in x.iter().zip(y) {
        let idx = (a / bin_width).floor() as i64;
        let entry = acc.entry(idx).or_default();
        entry.0 += 1;
        entry.1 += a;
        entry.2 += b;
    }
    let bins = acc
        .into_iter()
        .map(|(idx, (n, sx, sy))| TrendBin {
            lower: idx as f64 * bin_width,
            upper: (idx + 1) as f64 * bin_width,
            n,
            mean_x: sx / n as f64,
            mean_y: sy / n as f64,
        })
        .collect();

    let (lo, hi) = fit_band;
    let in_band: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(&a, _)| a >= lo && a <= hi)
        .map(|(&a, &b)| (a, b))
        .collect();
    let fit = ols(&in_band);

    Ok(TrendTable {
        bin_width,
        bins,
        fit_band,
        fit,
    })
}

fn ols(points: &[(f64, f64)]) -> Option<LinearFit> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|(a, _)| a).sum::<f64>() / n;
    let my = points.iter().map(|(_, b)| b).sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for &(a, b) in points {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
    }
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    Some(LinearFit {
        slope,
        intercept: my - slope * mx,
        n: points.len(),
    })
}

/// Bucketing axis of the community sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepAxis {
    /// Member count.
    Size,
    /// In-community connection count of the analyzed type.
    Density,
}

impl SweepAxis {
    pub fn label(self) -> &'static str {
        match self {
            SweepAxis::Size => "size",
            SweepAxis::Density => "density",
        }
    }
}

/// Observed and permutation-expected community outcomes in one axis
/// bucket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepBucket {
    pub axis: SweepAxis,
    pub lower: f64,
    pub upper: f64,
    pub n_communities: usize,
    pub prop_holds: f64,
    pub prop_not: f64,
    pub prop_unknown: f64,
    /// Mean proportion of communities holding across permutation
    /// replicates.
    pub expected_prop_holds: f64,
}

/// Community-level outcome: strictly more members below their
/// in-community connection aggregate than above it. Members without
/// scored in-community connections are skipped; a community where nothing
/// can be compared is Unknown.
fn community_status(
    member_sets: &[(u32, Vec<u32>)],
    values: &[Option<f64>],
    agg: AggKind,
) -> ComparisonStatus {
    let mut holds = 0usize;
    let mut not = 0usize;
    let mut buf = Vec::new();
    for (u, set) in member_sets {
        let Some(own) = values[*u as usize] else {
            continue;
        };
        buf.clear();
        buf.extend(set.iter().filter_map(|&v| values[v as usize]));
        if buf.is_empty() {
            continue;
        }
        match compare_to_connections(own, &buf, agg).expect("buffer checked non-empty") {
            ComparisonStatus::Holds => holds += 1,
            ComparisonStatus::DoesNotHold => not += 1,
            ComparisonStatus::Unknown => {}
        }
    }
    match holds.cmp(&not) {
        std::cmp::Ordering::Greater => ComparisonStatus::Holds,
        std::cmp::Ordering::Less => ComparisonStatus::DoesNotHold,
        std::cmp::Ordering::Equal => ComparisonStatus::Unknown,
    }
}

/// Sweep community outcomes against community size or density.
///
/// Communities whose axis value lies in `[bounds.0, bounds.1]` are split
/// into `n_buckets` equal-width buckets; per bucket, the proportions of
/// Holds / DoesNotHold / Unknown communities are reported together with
/// the permutation-expected Holds proportion under `null_cfg`.
#[allow(clippy::too_many_arguments)]
pub fn community_sweep(
    g: &SocialGraph,
    swb_values: &[Option<f64>],
    communities: &CommunityIndex,
    t: ConnectionType,
    agg: AggKind,
    axis: SweepAxis,
    bounds: (f64, f64),
    n_buckets: usize,
    null_cfg: &NullConfig,
) -> Result<Vec<SweepBucket>> {
    assert_eq!(swb_values.len(), g.n_users());
    let (lo, hi) = bounds;
    if !(hi > lo) {
        return Err(Error::InvalidInput(format!(
            "sweep bounds must satisfy lower < upper, got [{lo}, {hi}]"
        )));
    }
    if n_buckets == 0 {
        return Err(Error::InvalidInput("sweep needs at least one bucket".into()));
    }
    let width = (hi - lo) / n_buckets as f64;

    // structure phase: per community, each member's in-community
    // connection set, plus the bucket the community falls into
    let mut member_sets_by_community: Vec<Vec<(u32, Vec<u32>)>> = Vec::new();
    let mut bucket_of_community: Vec<usize> = Vec::new();
    for c in 0..communities.n_communities() as u32 {
        let axis_value = match axis {
            SweepAxis::Size => communities.members(c).len() as f64,
            SweepAxis::Density => communities.in_community_edge_count(g, c, t) as f64,
        };
        if axis_value < lo || axis_value > hi {
            continue;
        }
        let bucket = (((axis_value - lo) / width) as usize).min(n_buckets - 1);
        let sets: Vec<(u32, Vec<u32>)> = communities
            .members(c)
            .iter()
            .map(|&u| (u, communities.in_community_connections(g, u, c, t)))
            .filter(|(_, set)| !set.is_empty())
            .collect();
        member_sets_by_community.push(sets);
        bucket_of_community.push(bucket);
    }

    let tally = |values: &[Option<f64>]| -> Vec<(usize, usize, usize)> {
        let mut per_bucket = vec![(0usize, 0usize, 0usize); n_buckets];
        for (sets, &bucket) in member_sets_by_community.iter().zip(&bucket_of_community) {
            match community_status(sets, values, agg) {
                ComparisonStatus::Holds => per_bucket[bucket].0 += 1,
                ComparisonStatus::DoesNotHold => per_bucket[bucket].1 += 1,
                ComparisonStatus::Unknown => per_bucket[bucket].2 += 1,
            }
        }
        per_bucket
    };

    let observed = tally(swb_values);
    let replicate_tallies = map_replicates(swb_values, |vals| tally(vals), null_cfg);

    Ok((0..n_buckets)
        .map(|b| {
            let (holds, not, unknown) = observed[b];
            let n = holds + not + unknown;
            let expected_prop_holds = if n == 0 {
                0.0
            } else {
                replicate_tallies
                    .iter()
                    .map(|counts| counts[b].0 as f64 / n as f64)
                    .sum::<f64>()
                    / replicate_tallies.len() as f64
            };
            SweepBucket {
                axis,
                lower: lo + b as f64 * width,
                upper: lo + (b + 1) as f64 * width,
                n_communities: n,
                prop_holds: if n == 0 { 0.0 } else { holds as f64 / n as f64 },
                prop_not: if n == 0 { 0.0 } else { not as f64 / n as f64 },
                prop_unknown: if n == 0 { 0.0 } else { unknown as f64 / n as f64 },
                expected_prop_holds,
            }
        })
        .collect())
}

/// Mean activity per score bin: which well-being levels post more?
pub fn swb_activity_relation(
    swb: &BTreeMap<u64, UserSentiment>,
    activity: &BTreeMap<u64, ActivityRecord>,
    bin_width: f64,
) -> Result<TrendTable> {
    let mut x = Vec::new();
    let mut y = Vec::new();
    for (user, s) in swb {
        let (Some(score), Some(a)) = (s.swb, activity.get(user)) else {
            continue;
        };
        x.push(score);
        y.push(a.activity);
    }
    binned_trend(&x, &y, bin_width, None)
}
