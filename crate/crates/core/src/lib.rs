//! Sentiment paradox analyses for social networks.
//!
//! The crate ingests mood-tagged posts together with friendship, follow,
//! and community-membership data, computes per-user subjective well-being
//! (SWB) scores, and measures whether users are less positive than their
//! connections at the network, triad, and community level. Observed
//! paradox magnitudes are validated against attribute-permutation null
//! models, and paradox-derived features feed a reference classifier for
//! user sentiment prediction. Synthetic generators allow the analyses to
//! be exercised end to end without a crawled dataset.

pub mod analytics;
pub mod community;
pub mod error;
pub mod graph;
pub mod ingest;
pub mod nullmodel;
pub mod paradox;
pub mod predict;
pub mod report;
pub mod sentiment;
pub mod synth;

pub use crate::community::CommunityIndex;
pub use crate::error::Error;
pub use crate::graph::{ConnectionType, SocialGraph, TriadMode};
pub use crate::ingest::{DatasetBundle, MoodLexicon, Polarity, RawPost};
pub use crate::paradox::{AggKind, ComparisonStatus, ParadoxKind, ParadoxStats, ParadoxVerdict};
pub use crate::sentiment::{ActivityRecord, NormalFit, UserSentiment};

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
