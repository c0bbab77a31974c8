//! Brute-force oracle equivalence: every paradox analysis and the triad
//! enumerator are replayed here against naive reimplementations that work
//! directly on raw edge/membership lists, and must agree exactly.

#[path = "common/naive.rs"]
mod naive;

use naive::*;

use moodnet_core::graph::{SocialGraph, TriadMode};
use moodnet_core::paradox::{degree_values, AggKind, ComparisonStatus, ParadoxContexts};
use moodnet_core::ConnectionType;

#[test]
fn every_analysis_matches_brute_force_on_random_graphs() {
    for case in 0..50u64 {
        let (d, g, communities, values, activity) = random_case(1000 + case);
        for t in ConnectionType::ALL {
            for agg in AggKind::ALL {
                let tag = format!("case {case}, {t:?}, {agg:?}");
                assert_eq!(
                    ParadoxContexts::general(&g, t).statuses(&values, agg),
                    naive_general(&d, &values, t, agg),
                    "general: {tag}"
                );
                assert_eq!(
                    ParadoxContexts::triad(&g, t).statuses(&values, agg),
                    naive_triad(&d, &values, t, agg),
                    "triad: {tag}"
                );
                assert_eq!(
                    ParadoxContexts::common_neighbor(&g, t).statuses(&values, agg),
                    naive_common_neighbor(&d, &values, t, agg),
                    "common-neighbor: {tag}"
                );
                assert_eq!(
                    ParadoxContexts::community(&g, &communities, t).statuses(&values, agg),
                    naive_community(&d, &values, t, agg),
                    "community: {tag}"
                );
                assert_eq!(
                    ParadoxContexts::common_interest(&g, &communities, t).statuses(&values, agg),
                    naive_common_interest(&d, &values, t, agg),
                    "common-interest: {tag}"
                );
                assert_eq!(
                    ParadoxContexts::friendship(&g, t).statuses(&degree_values(&g, t), agg),
                    naive_general(&d, &naive_degrees(&d, t), t, agg),
                    "friendship: {tag}"
                );
                assert_eq!(
                    ParadoxContexts::activity(&g, t).statuses(&activity, agg),
                    naive_general(&d, &activity, t, agg),
                    "activity: {tag}"
                );
            }
        }
    }
}

#[test]
fn status_counts_agree_with_naive_tallies() {
    for case in 0..10u64 {
        let (d, g, _, values, _) = random_case(4000 + case);
        for t in ConnectionType::ALL {
            let stats = ParadoxContexts::general(&g, t).stats(&values, AggKind::Mean);
            let naive = naive_general(&d, &values, t, AggKind::Mean);
            let holds = naive
                .iter()
                .filter(|s| **s == Some(ComparisonStatus::Holds))
                .count();
            let not = naive
                .iter()
                .filter(|s| **s == Some(ComparisonStatus::DoesNotHold))
                .count();
            let unknown = naive
                .iter()
                .filter(|s| **s == Some(ComparisonStatus::Unknown))
                .count();
            assert_eq!(
                (stats.n_holds, stats.n_not, stats.n_unknown, stats.total),
                (holds, not, unknown, holds + not + unknown),
            );
        }
    }
}

#[test]
fn triad_enumeration_matches_cubic_brute_force() {
    for case in 0..8u64 {
        let (d, g, _, _, _) = random_case(7000 + case);
        for mode in [TriadMode::Undirected, TriadMode::Directed] {
            assert_eq!(g.enumerate_triads(mode), d.triads(mode), "case {case}, {mode:?}");
            assert_eq!(g.triad_count(mode), d.triads(mode).len());
        }
    }
}

#[test]
fn complete_four_clique_has_exactly_four_triads() {
    let edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let g = SocialGraph::from_edge_lists(4, &edges, &[]);
    let triads = g.enumerate_triads(TriadMode::Undirected);
    assert_eq!(triads.len(), 4);
    let members: Vec<[u32; 3]> = triads.iter().map(|t| t.members).collect();
    assert_eq!(
        members,
        vec![[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]
    );
}
