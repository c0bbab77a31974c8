//! Bipartite user–community membership index with induced-subgraph
//! accessors used by the community and common-interest analyses.

use crate::graph::{sorted_intersection, sorted_intersects, ConnectionType, SocialGraph};
use crate::ingest::DatasetBundle;

/// Membership index over dense user indices and dense community indices.
/// Member lists and per-user community lists are sorted and duplicate-free.
#[derive(Debug, Clone, Default)]
pub struct CommunityIndex {
    community_ids: Vec<u64>,
    members: Vec<Vec<u32>>,
    communities_of: Vec<Vec<u32>>,
}

impl CommunityIndex {
    /// Build from a bundle's membership pairs, mapping users through the
    /// graph's dense index. Communities are indexed by ascending external id.
    pub fn from_bundle(bundle: &DatasetBundle, g: &SocialGraph) -> CommunityIndex {
        let mut community_ids: Vec<u64> =
            bundle.memberships.iter().map(|&(_, c)| c).collect();
        community_ids.sort_unstable();
        community_ids.dedup();
        let pairs: Vec<(u32, u32)> = bundle
            .memberships
            .iter()
            .map(|&(user, comm)| {
                let u = g
                    .index_of(user)
                    .expect("bundle invariant: membership users appear in the user set");
                let c = community_ids.binary_search(&comm).unwrap() as u32;
                (u, c)
            })
            .collect();
        Self::from_indexed(g.n_users(), community_ids, &pairs)
    }

    /// Build from dense (user, community) pairs; community ids become `0..k`
    /// where `k` is one past the largest community index mentioned.
    pub fn from_memberships(n_users: usize, pairs: &[(u32, u32)]) -> CommunityIndex {
        let k = pairs.iter().map(|&(_, c)| c as usize + 1).max().unwrap_or(0);
        Self::from_indexed(n_users, (0..k as u64).collect(), pairs)
    }

    fn from_indexed(
        n_users: usize,
        community_ids: Vec<u64>,
        pairs: &[(u32, u32)],
    ) -> CommunityIndex {
        let mut members = vec![Vec::new(); community_ids.len()];
        let mut communities_of = vec![Vec::new(); n_users];
        for &(u, c) in pairs {
            members[c as usize].push(u);
            communities_of[u as usize].push(c);
        }
        for list in members.iter_mut().chain(communities_of.iter_mut()) {
            list.sort_unstable();
            list.dedup();
        }
        CommunityIndex {
            community_ids,
            members,
            communities_of,
        }
    }

    pub fn n_communities(&self) -> usize {
        self.community_ids.len()
    }

    /// External id of a dense community index.
    pub fn community_id(&self, c: u32) -> u64 {
        self.community_ids[c as usize]
    }

    /// Sorted member indices of a community.
    pub fn members(&self, c: u32) -> &[u32] {
        &self.members[c as usize]
    }

    /// Sorted community indices a user belongs to.
    pub fn communities_of(&self, u: u32) -> &[u32] {
        &self.communities_of[u as usize]
    }

    /// Whether two users belong to at least one common community.
    pub fn shares_community(&self, u: u32, v: u32) -> bool {
        sorted_intersects(self.communities_of(u), self.communities_of(v))
    }

    /// `u`'s type-`t` connections that are members of community `c`.
    pub fn in_community_connections(
        &self,
        g: &SocialGraph,
        u: u32,
        c: u32,
        t: ConnectionType,
    ) -> Vec<u32> {
        sorted_intersection(g.adjacency(u, t), self.members(c))
    }

    /// Number of type-`t` edges with both endpoints inside community `c`.
    /// Friendship edges count once per unordered pair; follow edges once
    /// per directed pair.
    pub fn in_community_edge_count(&self, g: &SocialGraph, c: u32, t: ConnectionType) -> usize {
        let members = self.members(c);
        let total: usize = members
            .iter()
            .map(|&u| sorted_intersection(g.adjacency(u, t), members).len())
            .sum();
        match t {
            ConnectionType::Friends => total / 2,
            // summing over members' followee lists counts each directed
            // in-community edge exactly once; followers double-count it
            ConnectionType::Followees => total,
            ConnectionType::Followers => total,
        }
    }
}
