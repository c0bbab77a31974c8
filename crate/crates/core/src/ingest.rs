//! Dataset ingestion: TSV parsing, mood lexicon, validation, and the
//! minimum-post user filter.
//!
//! Input formats (one record per line, tab separated):
//!
//! * `friends.tsv`      — `user_a<TAB>user_b`
//! * `follows.tsv`      — `follower<TAB>followee`
//! * `posts.tsv`        — `user<TAB>YYYY-MM-DD<TAB>mood`
//! * `communities.tsv`  — `user<TAB>community`
//! * `moods.tsv`        — `mood<TAB>polarity` with polarity in `{pos, neg, neu}`

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use chrono::NaiveDate;

use crate::error::Error;
use crate::Result;

/// Sentiment polarity of a mood token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    Positive,
    Negative,
    Neutral,
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Polarity::Positive => "pos",
            Polarity::Negative => "neg",
            Polarity::Neutral => "neu",
        };
        f.write_str(s)
    }
}

/// A single mood-tagged post. Timestamps have day resolution, which is all
/// the activity window computation needs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawPost {
    pub user: u64,
    pub date: NaiveDate,
    pub mood: String,
}

/// Maps lowercase mood tokens to their sentiment polarity. Lookups are
/// case-insensitive.
#[derive(Debug, Clone, Default)]
pub struct MoodLexicon {
    map: HashMap<String, Polarity>,
}

static BUILTIN_LEXICON: OnceLock<MoodLexicon> = OnceLock::new();
const BUILTIN_MOODS: &str = include_str!("../data/moods.tsv");

impl MoodLexicon {
    /// Parse a `mood<TAB>polarity` lexicon file.
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let content =
            fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
        Self::parse(&path.display().to_string(), &content)
    }

    /// The lexicon bundled with the crate (132 moods).
    pub fn builtin() -> &'static MoodLexicon {
        BUILTIN_LEXICON.get_or_init(|| {
            Self::parse("builtin moods.tsv", BUILTIN_MOODS).expect("bundled lexicon is well-formed")
        })
    }

    fn parse(name: &str, content: &str) -> Result<Self> {
        let mut map = HashMap::new();
        for (idx, raw) in content.lines().enumerate() {
            let line = raw.trim_end_matches('\r');
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split('\t');
            let (mood, pol) = match (fields.next(), fields.next(), fields.next()) {
                (Some(m), Some(p), None) => (m, p),
                _ => {
                    return Err(Error::parse(
                        name,
                        idx + 1,
                        "expected `mood<TAB>polarity`".to_string(),
                    ))
                }
            };
            let mood = mood.trim().to_lowercase();
            if mood.is_empty() {
                return Err(Error::parse(name, idx + 1, "empty mood token"));
            }
            let polarity = match pol.trim() {
                "pos" => Polarity::Positive,
                "neg" => Polarity::Negative,
                "neu" => Polarity::Neutral,
                other => {
                    return Err(Error::parse(
                        name,
                        idx + 1,
                        format!("unknown polarity `{other}` (expected pos|neg|neu)"),
                    ))
                }
            };
            if let Some(prev) = map.insert(mood.clone(), polarity) {
                if prev != polarity {
                    return Err(Error::parse(
                        name,
                        idx + 1,
                        format!("mood `{mood}` mapped to conflicting polarities"),
                    ));
                }
            }
        }
        Ok(Self { map })
    }

    /// Polarity of a mood token, or `None` when the token is not in the
    /// lexicon. Matching is case-insensitive.
    pub fn polarity(&self, mood: &str) -> Option<Polarity> {
        self.map.get(&mood.to_lowercase()).copied()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// Input file locations for [`load_dataset`]. Absent entries are treated as
/// empty files, so purely undirected analyses do not need a follows file.
#[derive(Debug, Clone, Default)]
pub struct DatasetPaths {
    pub friends: Option<PathBuf>,
    pub follows: Option<PathBuf>,
    pub posts: Option<PathBuf>,
    pub communities: Option<PathBuf>,
}

/// Counters for records dropped or flagged during ingestion.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IngestWarnings {
    pub self_loops_dropped: usize,
    pub duplicate_edges_dropped: usize,
    pub duplicate_memberships_dropped: usize,
    /// Posts whose mood is absent from the lexicon, keyed by mood token.
    /// Such posts still count toward the post filter and activity, but are
    /// excluded from SWB counting.
    pub unknown_moods: BTreeMap<String, usize>,
}

impl IngestWarnings {
    pub fn unknown_mood_posts(&self) -> usize {
        self.unknown_moods.values().sum()
    }
}

/// Validated in-memory corpus: users, posts, both edge sets, and community
/// memberships. Friend edges are canonical `(min, max)` pairs; follow edges
/// keep their direction. All lists are sorted and duplicate-free, which makes
/// bundles deterministic to serialize and safe to share across threads.
#[derive(Debug, Clone, Default)]
pub struct DatasetBundle {
    pub users: BTreeSet<u64>,
    pub posts: Vec<RawPost>,
    pub friend_edges: Vec<(u64, u64)>,
    pub follow_edges: Vec<(u64, u64)>,
    pub memberships: Vec<(u64, u64)>,
    pub warnings: IngestWarnings,
}

impl DatasetBundle {
    /// True when the two bundles hold the same corpus, ignoring warning
    /// counters (a re-loaded bundle has nothing left to deduplicate).
    pub fn same_data(&self, other: &DatasetBundle) -> bool {
        self.users == other.users
            && self.posts == other.posts
            && self.friend_edges == other.friend_edges
            && self.follow_edges == other.follow_edges
            && self.memberships == other.memberships
    }
}

fn read_lines(path: &Path) -> Result<Vec<String>> {
    let content =
        fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    Ok(content
        .lines()
        .map(|l| l.trim_end_matches('\r').to_string())
        .collect())
}

fn parse_id(field: &str, file: &str, line: usize) -> Result<u64> {
    field
        .trim()
        .parse::<u64>()
        .map_err(|_| Error::parse(file, line, format!("invalid user id `{field}`")))
}

fn split_fields<'a>(line: &'a str, n: usize, file: &str, lineno: usize) -> Result<Vec<&'a str>> {
    let fields: Vec<&str> = line.split('\t').collect();
    if fields.len() != n {
        return Err(Error::parse(
            file,
            lineno,
            format!("expected {n} tab-separated fields, found {}", fields.len()),
        ));
    }
    Ok(fields)
}

/// Parse the dataset files into a validated [`DatasetBundle`].
///
/// Self-loop edges are dropped (counted in the warnings), duplicate edges are
/// deduplicated after canonical ordering, and posts with moods missing from
/// the lexicon are kept but tallied so SWB computation can skip them.
pub fn load_dataset(paths: &DatasetPaths, lexicon: &MoodLexicon) -> Result<DatasetBundle> {
    let mut bundle = DatasetBundle::default();
    let mut friend_set: BTreeSet<(u64, u64)> = BTreeSet::new();
    let mut follow_set: BTreeSet<(u64, u64)> = BTreeSet::new();
    let mut member_set: BTreeSet<(u64, u64)> = BTreeSet::new();

    if let Some(path) = &paths.friends {
        let file = path.display().to_string();
        for (idx, line) in read_lines(path)?.iter().enumerate() {
            if line.is_empty() {
                continue;
            }
            let fields = split_fields(line, 2, &file, idx + 1)?;
            let a = parse_id(fields[0], &file, idx + 1)?;
            let b = parse_id(fields[1], &file, idx + 1)?;
            if a == b {
                bundle.warnings.self_loops_dropped += 1;
                continue;
            }
            bundle.users.insert(a);
            bundle.users.insert(b);
            let edge = (a.min(b), a.max(b));
            if !friend_set.insert(edge) {
                bundle.warnings.duplicate_edges_dropped += 1;
            }
        }
    }

    if let Some(path) = &paths.follows {
        let file = path.display().to_string();
        for (idx, line) in read_lines(path)?.iter().enumerate() {
            if line.is_empty() {
                continue;
            }
            let fields = split_fields(line, 2, &file, idx + 1)?;
            let follower = parse_id(fields[0], &file, idx + 1)?;
            let followee = parse_id(fields[1], &file, idx + 1)?;
            if follower == followee {
                bundle.warnings.self_loops_dropped += 1;
                continue;
            }
            bundle.users.insert(follower);
            bundle.users.insert(followee);
            if !follow_set.insert((follower, followee)) {
                bundle.warnings.duplicate_edges_dropped += 1;
            }
        }
    }

    if let Some(path) = &paths.posts {
        let file = path.display().to_string();
        for (idx, line) in read_lines(path)?.iter().enumerate() {
            if line.is_empty() {
                continue;
            }
            let fields = split_fields(line, 3, &file, idx + 1)?;
            let user = parse_id(fields[0], &file, idx + 1)?;
            let date = NaiveDate::parse_from_str(fields[1].trim(), "%Y-%m-%d").map_err(|_| {
                Error::parse(&file, idx + 1, format!("invalid date `{}`", fields[1]))
            })?;
            let mood = fields[2].trim().to_lowercase();
            if mood.is_empty() {
                return Err(Error::parse(&file, idx + 1, "empty mood token"));
            }
            if lexicon.polarity(&mood).is_none() {
                *bundle.warnings.unknown_moods.entry(mood.clone()).or_insert(0) += 1;
            }
            bundle.users.insert(user);
            bundle.posts.push(RawPost { user, date, mood });
        }
    }

    if let Some(path) = &paths.communities {
        let file = path.display().to_string();
        for (idx, line) in read_lines(path)?.iter().enumerate() {
            if line.is_empty() {
                continue;
            }
            let fields = split_fields(line, 2, &file, idx + 1)?;
            let user = parse_id(fields[0], &file, idx + 1)?;
            let community = parse_id(fields[1], &file, idx + 1)?;
            bundle.users.insert(user);
            if !member_set.insert((user, community)) {
                bundle.warnings.duplicate_memberships_dropped += 1;
            }
        }
    }

    bundle.friend_edges = friend_set.into_iter().collect();
    bundle.follow_edges = follow_set.into_iter().collect();
    bundle.memberships = member_set.into_iter().collect();
    Ok(bundle)
}

/// Remove users with fewer than `min_posts` posts, together with their
/// incident edges, memberships, and posts.
///
/// Every post counts toward the threshold, including posts whose mood is not
/// in the lexicon: the filter is on posting volume, not on polarized volume.
pub fn filter_min_posts(bundle: &DatasetBundle, min_posts: usize) -> Result<DatasetBundle> {
    if min_posts < 1 {
        return Err(Error::InvalidInput(
            "min_posts must be at least 1".to_string(),
        ));
    }
    let mut counts: HashMap<u64, usize> = HashMap::new();
    for post in &bundle.posts {
        *counts.entry(post.user).or_insert(0) += 1;
    }
    let keep: BTreeSet<u64> = bundle
        .users
        .iter()
        .copied()
        .filter(|u| counts.get(u).copied().unwrap_or(0) >= min_posts)
        .collect();

    let posts = bundle
        .posts
        .iter()
        .filter(|p| keep.contains(&p.user))
        .cloned()
        .collect();
    let friend_edges = bundle
        .friend_edges
        .iter()
        .copied()
        .filter(|(a, b)| keep.contains(a) && keep.contains(b))
        .collect();
    let follow_edges = bundle
        .follow_edges
        .iter()
        .copied()
        .filter(|(a, b)| keep.contains(a) && keep.contains(b))
        .collect();
    let memberships = bundle
        .memberships
        .iter()
        .copied()
        .filter(|(u, _)| keep.contains(u))
        .collect();

    Ok(DatasetBundle {
        users: keep,
        posts,
        friend_edges,
        follow_edges,
        memberships,
        warnings: bundle.warnings.clone(),
    })
}

fn write_atomic(path: &Path, content: &str) -> Result<()> {
    let tmp = path.with_extension("tmp");
    {
        let mut f =
            fs::File::create(&tmp).map_err(|e| Error::io(tmp.display().to_string(), e))?;
        f.write_all(content.as_bytes())
            .map_err(|e| Error::io(tmp.display().to_string(), e))?;
    }
    fs::rename(&tmp, path).map_err(|e| Error::io(path.display().to_string(), e))
}

/// Serialize a bundle back into the ingest TSV formats inside `dir`.
/// Returns the paths written, suitable for re-loading with [`load_dataset`].
pub fn write_dataset(bundle: &DatasetBundle, dir: impl AsRef<Path>) -> Result<DatasetPaths> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir.display().to_string(), e))?;

    let mut friends = String::new();
    for (a, b) in &bundle.friend_edges {
        friends.push_str(&format!("{a}\t{b}\n"));
    }
    let mut follows = String::new();
    for (a, b) in &bundle.follow_edges {
        follows.push_str(&format!("{a}\t{b}\n"));
    }
    let mut posts = String::new();
    for p in &bundle.posts {
        posts.push_str(&format!("{}\t{}\t{}\n", p.user, p.date.format("%Y-%m-%d"), p.mood));
    }
    let mut communities = String::new();
    for (u, c) in &bundle.memberships {
        communities.push_str(&format!("{u}\t{c}\n"));
    }

    let paths = DatasetPaths {
        friends: Some(dir.join("friends.tsv")),
        follows: Some(dir.join("follows.tsv")),
        posts: Some(dir.join("posts.tsv")),
        communities: Some(dir.join("communities.tsv")),
    };
    write_atomic(paths.friends.as_ref().unwrap(), &friends)?;
    write_atomic(paths.follows.as_ref().unwrap(), &follows)?;
    write_atomic(paths.posts.as_ref().unwrap(), &posts)?;
    write_atomic(paths.communities.as_ref().unwrap(), &communities)?;
    Ok(paths)
}
