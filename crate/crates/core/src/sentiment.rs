//! Per-user sentiment scores from mood-tagged posts, posting activity, and
//! a normal fit of the score distribution.
//!
//! A user's score is `(n_pos − n_neg) / (n_pos + n_neg)` over their
//! polarized posts; users with no polarized posts have no score. Activity
//! is the average number of posts per window over the user's posting span.

use std::collections::BTreeMap;

use chrono::NaiveDate;

use crate::error::Error;
use crate::graph::SocialGraph;
use crate::ingest::{MoodLexicon, Polarity, RawPost};
use crate::Result;

/// Polarized-post counts and the derived well-being score for one user.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct UserSentiment {
    pub n_pos: usize,
    pub n_neg: usize,
    pub n_neu: usize,
    /// `None` when the user has no polarized posts.
    pub swb: Option<f64>,
}

impl UserSentiment {
    pub fn from_counts(n_pos: usize, n_neg: usize, n_neu: usize) -> UserSentiment {
        let swb = if n_pos + n_neg > 0 {
            Some((n_pos as f64 - n_neg as f64) / (n_pos + n_neg) as f64)
        } else {
            None
        };
        UserSentiment { n_pos, n_neg, n_neu, swb }
    }

    pub fn label(&self) -> PolarityLabel {
        PolarityLabel::of(self.swb)
    }
}

/// Sign category of a well-being score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PolarityLabel {
    Positive,
    Negative,
    Neutral,
    Undefined,
}

impl PolarityLabel {
    pub fn of(swb: Option<f64>) -> PolarityLabel {
        match swb {
            Some(s) if s > 0.0 => PolarityLabel::Positive,
            Some(s) if s < 0.0 => PolarityLabel::Negative,
            Some(_) => PolarityLabel::Neutral,
            None => PolarityLabel::Undefined,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            PolarityLabel::Positive => "positive",
            PolarityLabel::Negative => "negative",
            PolarityLabel::Neutral => "neutral",
            PolarityLabel::Undefined => "undefined",
        }
    }
}

/// Sign category of a sentiment record.
pub fn polarity_label(s: &UserSentiment) -> PolarityLabel {
    s.label()
}

/// Posting volume and rate for one user.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActivityRecord {
    pub n_posts: usize,
    pub first_date: NaiveDate,
    pub last_date: NaiveDate,
    /// Window length Δt in days the rate is normalized to.
    pub window_days: f64,
    /// Average posts per window: `window / span · n`, or `n` when all
    /// posts fall on one day.
    pub activity: f64,
}

impl ActivityRecord {
    pub fn span_days(&self) -> i64 {
        (self.last_date - self.first_date).num_days()
    }
}

/// Mean and variance of a fitted normal distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalFit {
    pub mu: f64,
    pub sigma2: f64,
}

/// Tally polarized and neutral posts per user and derive each score.
///
/// Posts whose mood is not in the lexicon count toward none of the three
/// tallies; they still exist for volume filtering and activity, which use
/// the raw post list.
pub fn compute_swb(posts: &[RawPost], lex: &MoodLexicon) -> BTreeMap<u64, UserSentiment> {
    let mut counts: BTreeMap<u64, (usize, usize, usize)> = BTreeMap::new();
    for post in posts {
        let entry = counts.entry(post.user).or_default();
        match lex.polarity(&post.mood) {
            Some(Polarity::Positive) => entry.0 += 1,
            Some(Polarity::Negative) => entry.1 += 1,
            Some(Polarity::Neutral) => entry.2 += 1,
            None => {}
        }
    }
    counts
        .into_iter()
        .map(|(user, (p, n, u))| (user, UserSentiment::from_counts(p, n, u)))
        .collect()
}

/// Score per dense graph index; `None` for users with no defined score.
pub fn swb_vector(g: &SocialGraph, swb: &BTreeMap<u64, UserSentiment>) -> Vec<Option<f64>> {
    (0..g.n_users() as u32)
        .map(|u| swb.get(&g.external_id(u)).and_then(|s| s.swb))
        .collect()
}

/// Posting rate per user: `window / span · n` posts per window, where the
/// span runs from a user's first to last post. A single-day span counts
/// the whole history as one window, giving rate `n`.
pub fn compute_activity(
    posts: &[RawPost],
    window_days: f64,
) -> Result<BTreeMap<u64, ActivityRecord>> {
    if !(window_days > 0.0) {
        return Err(Error::InvalidInput(format!(
            "activity window must be positive, got {window_days}"
        )));
    }
    let mut spans: BTreeMap<u64, (usize, NaiveDate, NaiveDate)> = BTreeMap::new();
    for post in posts {
        spans
            .entry(post.user)
            .and_modify(|(n, first, last)| {
                *n += 1;
                *first = (*first).min(post.date);
                *last = (*last).max(post.date);
            })
            .or_insert((1, post.date, post.date));
    }
    Ok(spans
        .into_iter()
        .map(|(user, (n, first, last))| {
            let span = (last - first).num_days() as f64;
            let activity = if span == 0.0 {
                n as f64
            } else {
                window_days / span * n as f64
            };
            (
                user,
                ActivityRecord {
                    n_posts: n,
                    first_date: first,
                    last_date: last,
                    window_days,
                    activity,
                },
            )
        })
        .collect())
}

/// Activity value per dense graph index.
pub fn activity_vector(
    g: &SocialGraph,
    activity: &BTreeMap<u64, ActivityRecord>,
) -> Vec<Option<f64>> {
    (0..g.n_users() as u32)
        .map(|u| activity.get(&g.external_id(u)).map(|a| a.activity))
        .collect()
}

/// Fit a normal distribution by sample mean and unbiased sample variance.
pub fn fit_normal(values: &[f64]) -> Result<NormalFit> {
    if values.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "normal fit needs at least 2 values, got {}",
            values.len()
        )));
    }
    let n = values.len() as f64;
    let mu = values.iter().sum::<f64>() / n;
    let sigma2 = values.iter().map(|v| (v - mu).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(NormalFit { mu, sigma2 })
}
