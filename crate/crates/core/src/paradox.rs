//! Paradox engine: per-user comparisons of a value against aggregates over
//! connection sets, with seven analyses built on one evaluation core.
//!
//! Every analysis splits into a *structure* phase that precomputes each
//! user's comparison sets from the graph (and communities or triads), and
//! an *evaluation* phase that runs those sets against a value vector. The
//! split lets permutation null models re-evaluate thousands of shuffled
//! value assignments without touching the structure again.

use crate::community::CommunityIndex;
use crate::error::Error;
use crate::graph::{ConnectionType, SocialGraph, TriadMode};
use crate::Result;

/// Values within this distance of the aggregate count as ties. Scores are
/// ratios of small integers, so exact ties are common and must not be
/// pushed into either side by the last bit of a float sum.
pub const TIE_EPS: f64 = 1e-12;

/// Aggregate applied to a user's connection values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AggKind {
    Mean,
    Median,
}

impl AggKind {
    pub const ALL: [AggKind; 2] = [AggKind::Mean, AggKind::Median];

    pub fn label(self) -> &'static str {
        match self {
            AggKind::Mean => "mean",
            AggKind::Median => "median",
        }
    }

    /// Aggregate of a non-empty value list.
    pub fn aggregate(self, values: &[f64]) -> f64 {
        debug_assert!(!values.is_empty());
        match self {
            AggKind::Mean => values.iter().sum::<f64>() / values.len() as f64,
            AggKind::Median => {
                let mut buf = values.to_vec();
                median_in_place(&mut buf)
            }
        }
    }

    /// In-place variant for hot paths; may reorder `values`.
    fn aggregate_mut(self, values: &mut [f64]) -> f64 {
        match self {
            AggKind::Mean => values.iter().sum::<f64>() / values.len() as f64,
            AggKind::Median => median_in_place(values),
        }
    }
}

/// Median with the even-length convention of averaging the two central
/// values.
fn median_in_place(values: &mut [f64]) -> f64 {
    let n = values.len();
    let mid = n / 2;
    let (below, at_mid, _) = values.select_nth_unstable_by(mid, f64::total_cmp);
    if n % 2 == 1 {
        *at_mid
    } else {
        let lower = below.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (lower + *at_mid) / 2.0
    }
}

/// Outcome of comparing one user's value to a connection aggregate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ComparisonStatus {
    /// The user's value is strictly below the aggregate.
    Holds,
    /// The user's value is strictly above the aggregate.
    DoesNotHold,
    /// Tie within [`TIE_EPS`].
    Unknown,
}

/// Which analysis produced a [`ParadoxStats`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParadoxKind {
    General,
    Triad,
    CommonNeighbor,
    Community,
    CommonInterest,
    Friendship,
    Activity,
}

impl ParadoxKind {
    pub fn label(self) -> &'static str {
        match self {
            ParadoxKind::General => "general",
            ParadoxKind::Triad => "triad",
            ParadoxKind::CommonNeighbor => "common-neighbor",
            ParadoxKind::Community => "community",
            ParadoxKind::CommonInterest => "common-interest",
            ParadoxKind::Friendship => "friendship",
            ParadoxKind::Activity => "activity",
        }
    }
}

/// Network-level verdict derived from the status counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParadoxVerdict {
    /// Magnitude above one half: most eligible users sit below their
    /// connections' aggregate.
    StronglyHolds,
    /// Holds is the plurality outcome without reaching half.
    WeaklyHolds,
    DoesNotHold,
}

impl ParadoxVerdict {
    pub fn label(self) -> &'static str {
        match self {
            ParadoxVerdict::StronglyHolds => "strongly-holds",
            ParadoxVerdict::WeaklyHolds => "weakly-holds",
            ParadoxVerdict::DoesNotHold => "does-not-hold",
        }
    }
}

/// Status counts and magnitude of one analysis over one network.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParadoxStats {
    pub kind: ParadoxKind,
    pub connection: ConnectionType,
    pub agg: AggKind,
    pub n_holds: usize,
    pub n_not: usize,
    pub n_unknown: usize,
    /// Eligible users: `n_holds + n_not + n_unknown`.
    pub total: usize,
    /// `n_holds / total`; 0 when no user is eligible.
    pub magnitude: f64,
}

impl ParadoxStats {
    pub fn verdict(&self) -> ParadoxVerdict {
        if self.magnitude > 0.5 {
            ParadoxVerdict::StronglyHolds
        } else if self.n_holds > self.n_not && self.n_holds > self.n_unknown {
            ParadoxVerdict::WeaklyHolds
        } else {
            ParadoxVerdict::DoesNotHold
        }
    }
}

/// Compare a single value against the aggregate of its connection values.
pub fn compare_to_connections(
    value: f64,
    connection_values: &[f64],
    agg: AggKind,
) -> Result<ComparisonStatus> {
    if connection_values.is_empty() {
        return Err(Error::EmptyConnections);
    }
    Ok(compare(value, agg.aggregate(connection_values)))
}

#[inline]
fn compare(value: f64, aggregate: f64) -> ComparisonStatus {
    let diff = value - aggregate;
    if diff < -TIE_EPS {
        ComparisonStatus::Holds
    } else if diff > TIE_EPS {
        ComparisonStatus::DoesNotHold
    } else {
        ComparisonStatus::Unknown
    }
}

enum Store {
    /// Comparison set per user is the graph adjacency itself (no copy).
    Adjacency,
    /// One precomputed set per user (may be empty).
    Single(Vec<Vec<u32>>),
    /// Several sets per user (triads, communities); empty sets dropped at
    /// build time.
    Multi(Vec<Vec<Vec<u32>>>),
}

/// Precomputed comparison structure of one analysis, reusable across any
/// number of value assignments.
pub struct ParadoxContexts<'g> {
    kind: ParadoxKind,
    connection: ConnectionType,
    g: &'g SocialGraph,
    store: Store,
}

impl<'g> ParadoxContexts<'g> {
    /// Compare each user against all their type-`t` connections.
    pub fn general(g: &'g SocialGraph, t: ConnectionType) -> Self {
        ParadoxContexts {
            kind: ParadoxKind::General,
            connection: t,
            g,
            store: Store::Adjacency,
        }
    }

    /// Compare each user against the connections they share a neighbor
    /// with.
    pub fn common_neighbor(g: &'g SocialGraph, t: ConnectionType) -> Self {
        let sets = (0..g.n_users() as u32)
            .map(|u| {
                g.common_neighbor_partners(u, t)
                    .expect("index in range by construction")
            })
            .collect();
        ParadoxContexts {
            kind: ParadoxKind::CommonNeighbor,
            connection: t,
            g,
            store: Store::Single(sets),
        }
    }

    /// Compare each user against the connections sharing at least one
    /// community with them.
    pub fn common_interest(
        g: &'g SocialGraph,
        communities: &CommunityIndex,
        t: ConnectionType,
    ) -> Self {
        let sets = (0..g.n_users() as u32)
            .map(|u| {
                g.adjacency(u, t)
                    .iter()
                    .copied()
                    .filter(|&v| communities.shares_community(u, v))
                    .collect()
            })
            .collect();
        ParadoxContexts {
            kind: ParadoxKind::CommonInterest,
            connection: t,
            g,
            store: Store::Single(sets),
        }
    }

    /// Compare each user, triad by triad, against the triad members on the
    /// relevant side: the other two members for friendships, the members
    /// the user follows for followees, and the members following the user
    /// for followers. A triad contributes nothing for a user whose side is
    /// empty.
    pub fn triad(g: &'g SocialGraph, t: ConnectionType) -> Self {
        let mode = TriadMode::for_connection(t);
        let mut sets: Vec<Vec<Vec<u32>>> = vec![Vec::new(); g.n_users()];
        for triad in g.enumerate_triads(mode) {
            for &u in &triad.members {
                let set: Vec<u32> = triad
                    .members
                    .iter()
                    .copied()
                    .filter(|&v| v != u)
                    .filter(|&v| match t {
                        ConnectionType::Friends => true,
                        ConnectionType::Followees => g.follows(u, v),
                        ConnectionType::Followers => g.follows(v, u),
                    })
                    .collect();
                if !set.is_empty() {
                    sets[u as usize].push(set);
                }
            }
        }
        ParadoxContexts {
            kind: ParadoxKind::Triad,
            connection: t,
            g,
            store: Store::Multi(sets),
        }
    }

    /// Compare each user, community by community, against their type-`t`
    /// connections inside that community.
    pub fn community(
        g: &'g SocialGraph,
        communities: &CommunityIndex,
        t: ConnectionType,
    ) -> Self {
        let mut sets: Vec<Vec<Vec<u32>>> = vec![Vec::new(); g.n_users()];
        for u in 0..g.n_users() as u32 {
            for &c in communities.communities_of(u) {
                let set = communities.in_community_connections(g, u, c, t);
                if !set.is_empty() {
                    sets[u as usize].push(set);
                }
            }
        }
        ParadoxContexts {
            kind: ParadoxKind::Community,
            connection: t,
            g,
            store: Store::Multi(sets),
        }
    }

    /// General-paradox structure tagged as the friendship (degree)
    /// analysis.
    pub fn friendship(g: &'g SocialGraph, t: ConnectionType) -> Self {
        ParadoxContexts {
            kind: ParadoxKind::Friendship,
            connection: t,
            g,
            store: Store::Adjacency,
        }
    }

    /// General-paradox structure tagged as the activity analysis.
    pub fn activity(g: &'g SocialGraph, t: ConnectionType) -> Self {
        ParadoxContexts {
            kind: ParadoxKind::Activity,
            connection: t,
            g,
            store: Store::Adjacency,
        }
    }

    pub fn kind(&self) -> ParadoxKind {
        self.kind
    }

    pub fn connection(&self) -> ConnectionType {
        self.connection
    }

    fn for_each_set(&self, u: u32, mut f: impl FnMut(&[u32])) {
        match &self.store {
            Store::Adjacency => f(self.g.adjacency(u, self.connection)),
            Store::Single(sets) => f(&sets[u as usize]),
            Store::Multi(multi) => {
                for set in &multi[u as usize] {
                    f(set);
                }
            }
        }
    }

    /// All defined connection values of `u`, pooled across the user's
    /// comparison sets (a member of several sets contributes once per
    /// set). Feature extraction aggregates over this pool.
    pub(crate) fn pooled_defined(&self, u: u32, values: &[Option<f64>], out: &mut Vec<f64>) {
        out.clear();
        self.for_each_set(u, |set| {
            out.extend(set.iter().filter_map(|&v| values[v as usize]));
        });
    }

    /// Status of one user under a value assignment, or `None` when the
    /// user is ineligible (own value undefined, or no comparison set with
    /// any defined value). Multi-set analyses reduce per-set statuses by
    /// strict majority of Holds vs DoesNotHold; ties give Unknown.
    fn status_of(
        &self,
        u: u32,
        values: &[Option<f64>],
        agg: AggKind,
        buf: &mut Vec<f64>,
    ) -> Option<ComparisonStatus> {
        let own = values[u as usize]?;
        let mut holds = 0usize;
        let mut not = 0usize;
        let mut compared = false;
        self.for_each_set(u, |set| {
            buf.clear();
            buf.extend(set.iter().filter_map(|&v| values[v as usize]));
            if buf.is_empty() {
                return;
            }
            compared = true;
            match compare(own, agg.aggregate_mut(buf)) {
                ComparisonStatus::Holds => holds += 1,
                ComparisonStatus::DoesNotHold => not += 1,
                ComparisonStatus::Unknown => {}
            }
        });
        if !compared {
            None
        } else if holds > not {
            Some(ComparisonStatus::Holds)
        } else if not > holds {
            Some(ComparisonStatus::DoesNotHold)
        } else {
            Some(ComparisonStatus::Unknown)
        }
    }

    /// Per-user statuses under a value assignment; `None` marks users
    /// excluded from the totals.
    pub fn statuses(&self, values: &[Option<f64>], agg: AggKind) -> Vec<Option<ComparisonStatus>> {
        assert_eq!(
            values.len(),
            self.g.n_users(),
            "value vector must cover every user"
        );
        let mut buf = Vec::new();
        (0..self.g.n_users() as u32)
            .map(|u| self.status_of(u, values, agg, &mut buf))
            .collect()
    }

    /// Status counts and magnitude under a value assignment.
    pub fn stats(&self, values: &[Option<f64>], agg: AggKind) -> ParadoxStats {
        assert_eq!(
            values.len(),
            self.g.n_users(),
            "value vector must cover every user"
        );
        let mut buf = Vec::new();
        let (mut n_holds, mut n_not, mut n_unknown) = (0usize, 0usize, 0usize);
        for u in 0..self.g.n_users() as u32 {
            match self.status_of(u, values, agg, &mut buf) {
                Some(ComparisonStatus::Holds) => n_holds += 1,
                Some(ComparisonStatus::DoesNotHold) => n_not += 1,
                Some(ComparisonStatus::Unknown) => n_unknown += 1,
                None => {}
            }
        }
        let total = n_holds + n_not + n_unknown;
        ParadoxStats {
            kind: self.kind,
            connection: self.connection,
            agg,
            n_holds,
            n_not,
            n_unknown,
            total,
            magnitude: if total == 0 {
                0.0
            } else {
                n_holds as f64 / total as f64
            },
        }
    }

    /// Magnitude only; the quantity permutation null models average.
    pub fn magnitude(&self, values: &[Option<f64>], agg: AggKind) -> f64 {
        self.stats(values, agg).magnitude
    }
}

/// Type-`t` degree of every user as a value vector (always defined).
pub fn degree_values(g: &SocialGraph, t: ConnectionType) -> Vec<Option<f64>> {
    (0..g.n_users() as u32)
        .map(|u| Some(g.degree(u, t) as f64))
        .collect()
}

/// Are your connections more positive than you?
pub fn general_paradox(
    g: &SocialGraph,
    values: &[Option<f64>],
    t: ConnectionType,
    agg: AggKind,
) -> ParadoxStats {
    ParadoxContexts::general(g, t).stats(values, agg)
}

/// Are your fellow triad members more positive than you, in most of your
/// triads?
pub fn triad_paradox(
    g: &SocialGraph,
    values: &[Option<f64>],
    t: ConnectionType,
    agg: AggKind,
) -> ParadoxStats {
    ParadoxContexts::triad(g, t).stats(values, agg)
}

/// Are the connections you share a neighbor with more positive than you?
pub fn common_neighbor_paradox(
    g: &SocialGraph,
    values: &[Option<f64>],
    t: ConnectionType,
    agg: AggKind,
) -> ParadoxStats {
    ParadoxContexts::common_neighbor(g, t).stats(values, agg)
}

/// Are your in-community connections more positive than you, in most of
/// your communities?
pub fn community_paradox(
    g: &SocialGraph,
    values: &[Option<f64>],
    communities: &CommunityIndex,
    t: ConnectionType,
    agg: AggKind,
) -> ParadoxStats {
    ParadoxContexts::community(g, communities, t).stats(values, agg)
}

/// Are the connections you share a community with more positive than you?
pub fn common_interest_paradox(
    g: &SocialGraph,
    values: &[Option<f64>],
    communities: &CommunityIndex,
    t: ConnectionType,
    agg: AggKind,
) -> ParadoxStats {
    ParadoxContexts::common_interest(g, communities, t).stats(values, agg)
}

/// Do your connections have more connections than you?
pub fn friendship_paradox(g: &SocialGraph, t: ConnectionType, agg: AggKind) -> ParadoxStats {
    ParadoxContexts::friendship(g, t).stats(&degree_values(g, t), agg)
}

/// Are your connections more active than you?
pub fn activity_paradox(
    g: &SocialGraph,
    activity_values: &[Option<f64>],
    t: ConnectionType,
    agg: AggKind,
) -> ParadoxStats {
    ParadoxContexts::activity(g, t).stats(activity_values, agg)
}
