//! Plain-text report formatting: one CSV builder per analysis output,
//! with shared numeric conventions — reals at six significant digits,
//! exact ratios (magnitudes, proportions) at six decimals, and p-values
//! floored at the printable limit.

use std::collections::BTreeMap;

use crate::analytics::{CorrelationResult, GroupDegreeTable, SweepBucket, TrendTable};
use crate::graph::SocialGraph;
use crate::nullmodel::SurpriseResult;
use crate::paradox::ParadoxStats;
use crate::predict::FeatureMatrix;
use crate::sentiment::{ActivityRecord, PolarityLabel, UserSentiment};

/// Smallest p-value printed as a number.
pub const P_FLOOR: f64 = 1e-300;

/// A real at six significant digits; plain notation near unit scale,
/// scientific further out.
pub fn fmt_real(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x == 0.0 {
        return "0".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.5e}")
    }
}

/// An exact ratio (magnitude, proportion) at six decimals.
pub fn fmt_ratio(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else {
        format!("{x:.6}")
    }
}

/// A p-value: six significant digits, or `< 1e-300` below the printable
/// floor.
pub fn fmt_p(p: f64) -> String {
    if p.is_nan() {
        "NaN".into()
    } else if p < P_FLOOR {
        "< 1e-300".into()
    } else {
        fmt_real(p)
    }
}

fn opt(x: Option<f64>, f: impl Fn(f64) -> String) -> String {
    x.map(f).unwrap_or_default()
}

/// Minimal CSV assembler: header plus rows, `\n` endings, no quoting
/// (fields never contain separators).
pub struct Csv {
    out: String,
    width: usize,
}

impl Csv {
    pub fn new(header: &[&str]) -> Csv {
        let mut csv = Csv {
            out: String::new(),
            width: header.len(),
        };
        csv.push_fields(header.iter().map(|h| (*h).to_string()));
        csv
    }

    pub fn row<I>(&mut self, fields: I)
    where
        I: IntoIterator<Item = String>,
    {
        self.push_fields(fields);
    }

    fn push_fields<I>(&mut self, fields: I)
    where
        I: IntoIterator<Item = String>,
    {
        let mut n = 0;
        for (i, field) in fields.into_iter().enumerate() {
            debug_assert!(
                !field.contains([',', '"', '\n']),
                "field needs quoting: {field:?}"
            );
            if i > 0 {
                self.out.push(',');
            }
            self.out.push_str(&field);
            n += 1;
        }
        debug_assert_eq!(n, self.width, "row width must match the header");
        self.out.push('\n');
    }

    pub fn finish(self) -> String {
        self.out
    }
}

/// One paradox analysis, with the null-model columns filled when a
/// permutation test ran.
pub fn paradox_csv(stats: &ParadoxStats, null: Option<&SurpriseResult>) -> String {
    let mut csv = Csv::new(&[
        "kind",
        "connection",
        "aggregate",
        "n_holds",
        "n_does_not_hold",
        "n_unknown",
        "total",
        "magnitude",
        "verdict",
        "null_expected",
        "surprise",
        "empirical_p",
    ]);
    let null_fields = match null {
        Some(s) => [
            fmt_ratio(s.expected),
            fmt_real(s.surprise),
            fmt_real(s.empirical_p),
        ],
        None => [String::new(), String::new(), String::new()],
    };
    csv.row(
        [
            stats.kind.label().to_string(),
            stats.connection.label().to_string(),
            stats.agg.label().to_string(),
            stats.n_holds.to_string(),
            stats.n_not.to_string(),
            stats.n_unknown.to_string(),
            stats.total.to_string(),
            fmt_ratio(stats.magnitude),
            stats.verdict().label().to_string(),
        ]
        .into_iter()
        .chain(null_fields),
    );
    csv.finish()
}

/// Community-sweep buckets, one row per bucket.
pub fn sweep_csv(buckets: &[SweepBucket]) -> String {
    let mut csv = Csv::new(&[
        "axis",
        "lower",
        "upper",
        "n_communities",
        "prop_holds",
        "prop_does_not_hold",
        "prop_unknown",
        "expected_prop_holds",
    ]);
    for b in buckets {
        csv.row([
            b.axis.label().to_string(),
            fmt_real(b.lower),
            fmt_real(b.upper),
            b.n_communities.to_string(),
            fmt_ratio(b.prop_holds),
            fmt_ratio(b.prop_not),
            fmt_ratio(b.prop_unknown),
            fmt_ratio(b.expected_prop_holds),
        ]);
    }
    csv.finish()
}

/// One correlation, tagged with what was correlated.
pub fn correlation_csv(pair: &str, c: &CorrelationResult) -> String {
    let mut csv = Csv::new(&["pair", "n", "r", "p_value"]);
    csv.row([
        pair.to_string(),
        c.n.to_string(),
        fmt_real(c.r),
        fmt_p(c.p_value),
    ]);
    csv.finish()
}

/// Binned trend rows; the overall fit rides along as constant columns.
pub fn trend_csv(t: &TrendTable) -> String {
    let mut csv = Csv::new(&[
        "lower",
        "upper",
        "n",
        "mean_x",
        "mean_y",
        "fit_slope",
        "fit_intercept",
        "fit_n",
    ]);
    let fit = t.fit.as_ref();
    for bin in &t.bins {
        csv.row([
            fmt_real(bin.lower),
            fmt_real(bin.upper),
            bin.n.to_string(),
            fmt_real(bin.mean_x),
            fmt_real(bin.mean_y),
            opt(fit.map(|f| f.slope), fmt_real),
            opt(fit.map(|f| f.intercept), fmt_real),
            fit.map(|f| f.n.to_string()).unwrap_or_default(),
        ]);
    }
    csv.finish()
}

/// Mean degrees by sentiment polarity group.
pub fn group_degree_csv(table: &GroupDegreeTable) -> String {
    let mut csv = Csv::new(&[
        "group",
        "n_users",
        "mean_friend_degree",
        "mean_followee_degree",
        "mean_follower_degree",
    ]);
    for row in &table.rows {
        csv.row([
            row.group.label().to_string(),
            row.n_users.to_string(),
            opt(row.mean_friends, fmt_real),
            opt(row.mean_followees, fmt_real),
            opt(row.mean_followers, fmt_real),
        ]);
    }
    csv.finish()
}

/// Per-user sentiment scores keyed by external user id.
pub fn swb_csv(swb: &BTreeMap<u64, UserSentiment>) -> String {
    let mut csv = Csv::new(&[
        "user",
        "n_positive",
        "n_negative",
        "n_neutral",
        "swb",
        "polarity",
    ]);
    for (user, s) in swb {
        csv.row([
            user.to_string(),
            s.n_pos.to_string(),
            s.n_neg.to_string(),
            s.n_neu.to_string(),
            opt(s.swb, fmt_real),
            PolarityLabel::of(s.swb).label().to_string(),
        ]);
    }
    csv.finish()
}

/// Per-user posting activity keyed by external user id.
pub fn activity_csv(activity: &BTreeMap<u64, ActivityRecord>) -> String {
    let mut csv = Csv::new(&[
        "user",
        "n_posts",
        "first_date",
        "last_date",
        "activity",
    ]);
    for (user, a) in activity {
        csv.row([
            user.to_string(),
            a.n_posts.to_string(),
            a.first_date.to_string(),
            a.last_date.to_string(),
            fmt_real(a.activity),
        ]);
    }
    csv.finish()
}

/// The feature matrix with external user ids and text labels; missing
/// cells print as `NaN`.
pub fn features_csv(m: &FeatureMatrix, g: &SocialGraph) -> String {
    let header: Vec<&str> = std::iter::once("user")
        .chain(m.names.iter().map(String::as_str))
        .chain(std::iter::once("label"))
        .collect();
    let mut csv = Csv::new(&header);
    for i in 0..m.n_rows() {
        csv.row(
            std::iter::once(g.external_id(m.users[i]).to_string())
                .chain(m.rows[i].iter().map(|&v| fmt_real(v)))
                .chain(std::iter::once(
                    if m.labels[i] { "positive" } else { "negative" }.to_string(),
                )),
        );
    }
    csv.finish()
}

/// Edge lists in the ingest TSV formats (friend pairs, follow pairs),
/// usable as pipeline input.
pub fn edges_tsv(g: &SocialGraph) -> (String, String) {
    let mut friends = String::new();
    let mut follows = String::new();
    for u in 0..g.n_users() as u32 {
        for &v in g.adjacency(u, crate::graph::ConnectionType::Friends) {
            if u < v {
                friends.push_str(&format!(
                    "{}\t{}\n",
                    g.external_id(u),
                    g.external_id(v)
                ));
            }
        }
        for &v in g.adjacency(u, crate::graph::ConnectionType::Followees) {
            follows.push_str(&format!(
                "{}\t{}\n",
                g.external_id(u),
                g.external_id(v)
            ));
        }
    }
    (friends, follows)
}
