//! Immutable adjacency store for the undirected friendship graph and the
//! directed follow graph, with triad enumeration and common-neighbor
//! queries.
//!
//! User ids are compacted to dense `u32` indices at build time; the original
//! ids are retained for reporting. All neighbor lists are sorted ascending
//! and duplicate-free, so set operations are merge scans.

use rayon::prelude::*;

use crate::error::Error;
use crate::ingest::DatasetBundle;
use crate::Result;

/// Which connection set of a user an analysis compares against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConnectionType {
    Friends,
    Followees,
    Followers,
}

impl ConnectionType {
    pub const ALL: [ConnectionType; 3] = [
        ConnectionType::Friends,
        ConnectionType::Followees,
        ConnectionType::Followers,
    ];

    pub fn label(self) -> &'static str {
        match self {
            ConnectionType::Friends => "friends",
            ConnectionType::Followees => "followees",
            ConnectionType::Followers => "followers",
        }
    }
}

/// Triad flavor: friendship triangles, or closed triples on the symmetrized
/// follow graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TriadMode {
    Undirected,
    Directed,
}

impl TriadMode {
    /// The triad flavor a connection type is evaluated against.
    pub fn for_connection(t: ConnectionType) -> TriadMode {
        match t {
            ConnectionType::Friends => TriadMode::Undirected,
            ConnectionType::Followees | ConnectionType::Followers => TriadMode::Directed,
        }
    }
}

/// Three mutually connected users, members sorted ascending.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Triad {
    pub members: [u32; 3],
    pub mode: TriadMode,
}

/// Compressed sparse row adjacency. Rows are sorted and duplicate-free.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct Csr {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Csr {
    /// Build from directed (src, dst) pairs; sorts and dedups each row.
    fn from_pairs(n: usize, pairs: impl Iterator<Item = (u32, u32)> + Clone) -> Csr {
        let mut counts = vec![0usize; n + 1];
        for (src, _) in pairs.clone() {
            counts[src as usize + 1] += 1;
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let mut targets = vec![0u32; counts[n]];
        let mut cursor = counts.clone();
        for (src, dst) in pairs {
            targets[cursor[src as usize]] = dst;
            cursor[src as usize] += 1;
        }
        let mut offsets = counts;
        // sort and dedup each row in place, compacting the target array
        let mut write = 0usize;
        let mut row_start = 0usize;
        let mut new_offsets = vec![0usize; n + 1];
        for u in 0..n {
            let row_end = offsets[u + 1];
            let row = &mut targets[row_start..row_end];
            row.sort_unstable();
            let mut prev: Option<u32> = None;
            let mut kept = Vec::with_capacity(row.len());
            for &v in row.iter() {
                if prev != Some(v) {
                    kept.push(v);
                    prev = Some(v);
                }
            }
            for (i, v) in kept.iter().enumerate() {
                targets[write + i] = *v;
            }
            write += kept.len();
            new_offsets[u + 1] = write;
            row_start = row_end;
        }
        targets.truncate(write);
        offsets = new_offsets;
        Csr { offsets, targets }
    }

    #[inline]
    fn neighbors(&self, u: u32) -> &[u32] {
        &self.targets[self.offsets[u as usize]..self.offsets[u as usize + 1]]
    }
}

/// Immutable social graph over a compacted user-id space.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SocialGraph {
    external_ids: Vec<u64>,
    friend_adj: Csr,
    out_adj: Csr,
    in_adj: Csr,
    /// Union of out- and in-adjacency; backs directed triad enumeration.
    sym_adj: Csr,
    n_friend_edges: usize,
    n_follow_edges: usize,
}

impl SocialGraph {
    /// Build the graph from a validated bundle. Users are indexed by the
    /// ascending order of their external ids.
    pub fn from_bundle(bundle: &DatasetBundle) -> SocialGraph {
        let external_ids: Vec<u64> = bundle.users.iter().copied().collect();
        let idx = |id: u64| -> u32 {
            external_ids
                .binary_search(&id)
                .expect("bundle invariant: edge endpoints appear in the user set")
                as u32
        };
        let friend_pairs: Vec<(u32, u32)> = bundle
            .friend_edges
            .iter()
            .map(|&(a, b)| (idx(a), idx(b)))
            .collect();
        let follow_pairs: Vec<(u32, u32)> = bundle
            .follow_edges
            .iter()
            .map(|&(a, b)| (idx(a), idx(b)))
            .collect();
        Self::from_indexed_edges(external_ids, &friend_pairs, &follow_pairs)
    }

    /// Build directly from dense-index edge lists; external ids become
    /// `0..n`. Self-loops are dropped and duplicates collapse.
    pub fn from_edge_lists(
        n: usize,
        friend_edges: &[(u32, u32)],
        follow_edges: &[(u32, u32)],
    ) -> SocialGraph {
        Self::from_indexed_edges(
            (0..n as u64).collect(),
            friend_edges,
            follow_edges,
        )
    }

    fn from_indexed_edges(
        external_ids: Vec<u64>,
        friend_edges: &[(u32, u32)],
        follow_edges: &[(u32, u32)],
    ) -> SocialGraph {
        let n = external_ids.len();
        let mut friends: Vec<(u32, u32)> = friend_edges
            .iter()
            .filter(|(a, b)| a != b)
            .map(|&(a, b)| (a.min(b), a.max(b)))
            .collect();
        friends.sort_unstable();
        friends.dedup();
        let mut follows: Vec<(u32, u32)> = follow_edges
            .iter()
            .filter(|(a, b)| a != b)
            .copied()
            .collect();
        follows.sort_unstable();
        follows.dedup();

        let friend_adj = Csr::from_pairs(
            n,
            friends
                .iter()
                .flat_map(|&(a, b)| [(a, b), (b, a)])
                .collect::<Vec<_>>()
                .into_iter(),
        );
        let out_adj = Csr::from_pairs(n, follows.iter().copied());
        let in_adj = Csr::from_pairs(n, follows.iter().map(|&(a, b)| (b, a)));
        let sym_adj = Csr::from_pairs(
            n,
            follows
                .iter()
                .flat_map(|&(a, b)| [(a, b), (b, a)])
                .collect::<Vec<_>>()
                .into_iter(),
        );

        SocialGraph {
            external_ids,
            friend_adj,
            out_adj,
            in_adj,
            sym_adj,
            n_friend_edges: friends.len(),
            n_follow_edges: follows.len(),
        }
    }

    pub fn n_users(&self) -> usize {
        self.external_ids.len()
    }

    pub fn n_friend_edges(&self) -> usize {
        self.n_friend_edges
    }

    pub fn n_follow_edges(&self) -> usize {
        self.n_follow_edges
    }

    /// External id for a dense index.
    pub fn external_id(&self, u: u32) -> u64 {
        self.external_ids[u as usize]
    }

    /// Dense index for an external id, if present.
    pub fn index_of(&self, external: u64) -> Option<u32> {
        self.external_ids.binary_search(&external).ok().map(|i| i as u32)
    }

    #[inline]
    pub(crate) fn adjacency(&self, u: u32, t: ConnectionType) -> &[u32] {
        match t {
            ConnectionType::Friends => self.friend_adj.neighbors(u),
            ConnectionType::Followees => self.out_adj.neighbors(u),
            ConnectionType::Followers => self.in_adj.neighbors(u),
        }
    }

    /// Sorted connection list of a user for the given type.
    pub fn connections(&self, u: u32, t: ConnectionType) -> Result<&[u32]> {
        if (u as usize) >= self.n_users() {
            return Err(Error::UserOutOfRange(u, self.n_users()));
        }
        Ok(self.adjacency(u, t))
    }

    /// Number of type-`t` connections.
    pub fn degree(&self, u: u32, t: ConnectionType) -> usize {
        self.adjacency(u, t).len()
    }

    /// Checks whether the directed edge `u -> v` exists.
    pub fn follows(&self, u: u32, v: u32) -> bool {
        self.out_adj.neighbors(u).binary_search(&v).is_ok()
    }

    fn triangle_adjacency(&self, mode: TriadMode) -> &Csr {
        match mode {
            TriadMode::Undirected => &self.friend_adj,
            TriadMode::Directed => &self.sym_adj,
        }
    }

    /// Enumerate all triads of the given mode, each exactly once, in
    /// ascending lexicographic order of the sorted member triple.
    ///
    /// Undirected triads are friendship triangles. Directed triads are
    /// triples in which every pair is joined by at least one follow edge in
    /// either direction. Enumeration partitions by lowest-id vertex, so the
    /// result is identical for any worker count.
    pub fn enumerate_triads(&self, mode: TriadMode) -> Vec<Triad> {
        let adj = self.triangle_adjacency(mode);
        let n = self.n_users();
        (0..n as u32)
            .into_par_iter()
            .map(|u| {
                let mut local = Vec::new();
                let nu = adj.neighbors(u);
                let above_u = match nu.binary_search(&u) {
                    Ok(_) => unreachable!("adjacency has no self-loops"),
                    Err(pos) => &nu[pos..],
                };
                for (i, &v) in above_u.iter().enumerate() {
                    let nv = adj.neighbors(v);
                    // two-pointer intersection of neighbors above v
                    let mut a = &above_u[i + 1..];
                    let start = match nv.binary_search(&v) {
                        Ok(_) => unreachable!(),
                        Err(pos) => pos,
                    };
                    let mut b = &nv[start..];
                    while let (Some(&x), Some(&y)) = (a.first(), b.first()) {
                        match x.cmp(&y) {
                            std::cmp::Ordering::Less => a = &a[1..],
                            std::cmp::Ordering::Greater => b = &b[1..],
                            std::cmp::Ordering::Equal => {
                                local.push(Triad {
                                    members: [u, v, x],
                                    mode,
                                });
                                a = &a[1..];
                                b = &b[1..];
                            }
                        }
                    }
                }
                local
            })
            .collect::<Vec<Vec<Triad>>>()
            .into_iter()
            .flatten()
            .collect()
    }

    /// Count triads without materializing them.
    pub fn triad_count(&self, mode: TriadMode) -> usize {
        let adj = self.triangle_adjacency(mode);
        let n = self.n_users();
        (0..n as u32)
            .into_par_iter()
            .map(|u| {
                let mut count = 0usize;
                let nu = adj.neighbors(u);
                let above_u = match nu.binary_search(&u) {
                    Ok(_) => unreachable!(),
                    Err(pos) => &nu[pos..],
                };
                for (i, &v) in above_u.iter().enumerate() {
                    let nv = adj.neighbors(v);
                    let start = match nv.binary_search(&v) {
                        Ok(_) => unreachable!(),
                        Err(pos) => pos,
                    };
                    count += intersection_size(&above_u[i + 1..], &nv[start..]);
                }
                count
            })
            .sum()
    }

    /// The subset of `connections(u, t)` that shares at least one type-`t`
    /// neighbor with `u`, i.e. partners with whom `u` co-occurs in a triad.
    pub fn common_neighbor_partners(&self, u: u32, t: ConnectionType) -> Result<Vec<u32>> {
        let own = self.connections(u, t)?;
        Ok(own
            .iter()
            .copied()
            .filter(|&v| sorted_intersects(own, self.adjacency(v, t)))
            .collect())
    }
}

/// True when two sorted slices share an element.
pub(crate) fn sorted_intersects(a: &[u32], b: &[u32]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

fn intersection_size(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Sorted intersection of two sorted slices.
pub(crate) fn sorted_intersection(a: &[u32], b: &[u32]) -> Vec<u32> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}
