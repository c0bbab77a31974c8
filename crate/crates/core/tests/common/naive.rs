//! Naive reimplementations of every paradox analysis, working directly on
//! raw edge/membership sets via exhaustive scans. Deliberately slow and
//! simple: these are the oracles the optimized library is checked against.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use moodnet_core::community::CommunityIndex;
use moodnet_core::graph::{SocialGraph, Triad, TriadMode};
use moodnet_core::paradox::{AggKind, ComparisonStatus};
use moodnet_core::ConnectionType;

pub const EPS: f64 = 1e-12;

/// Raw relational data, queried by exhaustive scans only.
pub struct Naive {
    pub n: u32,
    pub friends: BTreeSet<(u32, u32)>,
    pub follows: BTreeSet<(u32, u32)>,
    pub memberships: BTreeSet<(u32, u32)>,
}

impl Naive {
    pub fn befriended(&self, a: u32, b: u32) -> bool {
        self.friends.contains(&(a, b)) || self.friends.contains(&(b, a))
    }

    pub fn follows(&self, a: u32, b: u32) -> bool {
        self.follows.contains(&(a, b))
    }

    pub fn connections(&self, u: u32, t: ConnectionType) -> Vec<u32> {
        (0..self.n)
            .filter(|&v| v != u)
            .filter(|&v| match t {
                ConnectionType::Friends => self.befriended(u, v),
                ConnectionType::Followees => self.follows(u, v),
                ConnectionType::Followers => self.follows(v, u),
            })
            .collect()
    }

    pub fn communities(&self) -> Vec<u32> {
        self.memberships.iter().map(|&(_, c)| c).collect::<BTreeSet<_>>().into_iter().collect()
    }

    pub fn member_of(&self, u: u32, c: u32) -> bool {
        self.memberships.contains(&(u, c))
    }

    pub fn shares_community(&self, u: u32, v: u32) -> bool {
        self.communities()
            .into_iter()
            .any(|c| self.member_of(u, c) && self.member_of(v, c))
    }

    /// All triads of the requested flavor, ascending members, sorted.
    pub fn triads(&self, mode: TriadMode) -> Vec<Triad> {
        let linked = |a: u32, b: u32| match mode {
            TriadMode::Undirected => self.befriended(a, b),
            TriadMode::Directed => self.follows(a, b) || self.follows(b, a),
        };
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                for k in (j + 1)..self.n {
                    if linked(i, j) && linked(i, k) && linked(j, k) {
                        out.push(Triad {
                            members: [i, j, k],
                            mode,
                        });
                    }
                }
            }
        }
        out
    }
}

pub fn naive_aggregate(vals: &[f64], agg: AggKind) -> f64 {
    match agg {
        AggKind::Mean => vals.iter().sum::<f64>() / vals.len() as f64,
        AggKind::Median => {
            let mut sorted = vals.to_vec();
            sorted.sort_by(f64::total_cmp);
            let m = sorted.len() / 2;
            if sorted.len() % 2 == 1 {
                sorted[m]
            } else {
                (sorted[m - 1] + sorted[m]) / 2.0
            }
        }
    }
}

pub fn naive_compare(own: f64, aggregate: f64) -> ComparisonStatus {
    if own - aggregate < -EPS {
        ComparisonStatus::Holds
    } else if own - aggregate > EPS {
        ComparisonStatus::DoesNotHold
    } else {
        ComparisonStatus::Unknown
    }
}

/// One comparison set: needs the user's own value and at least one
/// defined connection value.
pub fn naive_single(
    own: Option<f64>,
    set: &[u32],
    values: &[Option<f64>],
    agg: AggKind,
) -> Option<ComparisonStatus> {
    let own = own?;
    let defined: Vec<f64> = set.iter().filter_map(|&v| values[v as usize]).collect();
    if defined.is_empty() {
        return None;
    }
    Some(naive_compare(own, naive_aggregate(&defined, agg)))
}

/// Several comparison sets reduced by strict majority; ties in neither
/// direction stay Unknown, and a user with no evaluable set is excluded.
pub fn naive_majority(
    own: Option<f64>,
    sets: &[Vec<u32>],
    values: &[Option<f64>],
    agg: AggKind,
) -> Option<ComparisonStatus> {
    let own = own?;
    let mut holds = 0usize;
    let mut not = 0usize;
    let mut evaluable = false;
    for set in sets {
        let defined: Vec<f64> = set.iter().filter_map(|&v| values[v as usize]).collect();
        if defined.is_empty() {
            continue;
        }
        evaluable = true;
        match naive_compare(own, naive_aggregate(&defined, agg)) {
            ComparisonStatus::Holds => holds += 1,
            ComparisonStatus::DoesNotHold => not += 1,
            ComparisonStatus::Unknown => {}
        }
    }
    if !evaluable {
        None
    } else if holds > not {
        Some(ComparisonStatus::Holds)
    } else if not > holds {
        Some(ComparisonStatus::DoesNotHold)
    } else {
        Some(ComparisonStatus::Unknown)
    }
}

pub type Statuses = Vec<Option<ComparisonStatus>>;

pub fn naive_general(
    d: &Naive,
    values: &[Option<f64>],
    t: ConnectionType,
    agg: AggKind,
) -> Statuses {
    (0..d.n)
        .map(|u| naive_single(values[u as usize], &d.connections(u, t), values, agg))
        .collect()
}

pub fn naive_common_neighbor(
    d: &Naive,
    values: &[Option<f64>],
    t: ConnectionType,
    agg: AggKind,
) -> Statuses {
    (0..d.n)
        .map(|u| {
            let conn = d.connections(u, t);
            let partners: Vec<u32> = conn
                .iter()
                .copied()
                .filter(|&v| {
                    let theirs = d.connections(v, t);
                    conn.iter().any(|w| theirs.contains(w))
                })
                .collect();
            naive_single(values[u as usize], &partners, values, agg)
        })
        .collect()
}

pub fn naive_common_interest(
    d: &Naive,
    values: &[Option<f64>],
    t: ConnectionType,
    agg: AggKind,
) -> Statuses {
    (0..d.n)
        .map(|u| {
            let partners: Vec<u32> = d
                .connections(u, t)
                .into_iter()
                .filter(|&v| d.shares_community(u, v))
                .collect();
            naive_single(values[u as usize], &partners, values, agg)
        })
        .collect()
}

pub fn naive_triad(
    d: &Naive,
    values: &[Option<f64>],
    t: ConnectionType,
    agg: AggKind,
) -> Statuses {
    let triads = d.triads(TriadMode::for_connection(t));
    (0..d.n)
        .map(|u| {
            let mut sides: Vec<Vec<u32>> = Vec::new();
            for triad in triads.iter().filter(|tr| tr.members.contains(&u)) {
                let side: Vec<u32> = triad
                    .members
                    .iter()
                    .copied()
                    .filter(|&v| v != u)
                    .filter(|&v| match t {
                        ConnectionType::Friends => true,
                        ConnectionType::Followees => d.follows(u, v),
                        ConnectionType::Followers => d.follows(v, u),
                    })
                    .collect();
                if !side.is_empty() {
                    sides.push(side);
                }
            }
            naive_majority(values[u as usize], &sides, values, agg)
        })
        .collect()
}

pub fn naive_community(
    d: &Naive,
    values: &[Option<f64>],
    t: ConnectionType,
    agg: AggKind,
) -> Statuses {
    let communities = d.communities();
    (0..d.n)
        .map(|u| {
            let mut sets: Vec<Vec<u32>> = Vec::new();
            for &c in communities.iter().filter(|&&c| d.member_of(u, c)) {
                let inside: Vec<u32> = d
                    .connections(u, t)
                    .into_iter()
                    .filter(|&v| d.member_of(v, c))
                    .collect();
                if !inside.is_empty() {
                    sets.push(inside);
                }
            }
            naive_majority(values[u as usize], &sets, values, agg)
        })
        .collect()
}

pub fn naive_degrees(d: &Naive, t: ConnectionType) -> Vec<Option<f64>> {
    (0..d.n)
        .map(|u| Some(d.connections(u, t).len() as f64))
        .collect()
}

/// Random fixture: sparse-to-dense graphs with overlapping random
/// communities, grid-valued scores (exact ties are common), and some
/// unscored users.
pub fn random_case(
    seed: u64,
) -> (Naive, SocialGraph, CommunityIndex, Vec<Option<f64>>, Vec<Option<f64>>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=50u32);
    let p_friend = rng.gen_range(0.02..0.25);
    let p_follow = rng.gen_range(0.02..0.25);
    let mut friends = BTreeSet::new();
    let mut follows = BTreeSet::new();
    for a in 0..n {
        for b in (a + 1)..n {
            if rng.gen::<f64>() < p_friend {
                friends.insert((a, b));
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            if a != b && rng.gen::<f64>() < p_follow {
                follows.insert((a, b));
            }
        }
    }
    let k = rng.gen_range(0..=6u32);
    let mut memberships = BTreeSet::new();
    for u in 0..n {
        for c in 0..k {
            if rng.gen::<f64>() < 0.25 {
                memberships.insert((u, c));
            }
        }
    }
    let values: Vec<Option<f64>> = (0..n)
        .map(|_| {
            if rng.gen::<f64>() < 0.15 {
                None
            } else {
                Some(rng.gen_range(-8i32..=8) as f64 / 8.0)
            }
        })
        .collect();
    let activity: Vec<Option<f64>> = (0..n)
        .map(|_| {
            if rng.gen::<f64>() < 0.2 {
                None
            } else {
                Some(rng.gen_range(0i32..=12) as f64 / 4.0)
            }
        })
        .collect();

    let friend_list: Vec<(u32, u32)> = friends.iter().copied().collect();
    let follow_list: Vec<(u32, u32)> = follows.iter().copied().collect();
    let member_list: Vec<(u32, u32)> = memberships.iter().copied().collect();
    let g = SocialGraph::from_edge_lists(n as usize, &friend_list, &follow_list);
    let communities = CommunityIndex::from_memberships(n as usize, &member_list);
    let d = Naive {
        n,
        friends,
        follows,
        memberships,
    };
    (d, g, communities, values, activity)
}
