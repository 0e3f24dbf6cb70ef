//! The two worked datasets shipped with the repository.
//!
//! `EXAM_*`: three teachers ticking five hierarchical feedback items for six
//! student answers. `DSM_*`: 27 child psychiatric cases, each diagnosed by
//! three or four psychiatrists into one or more of 20 broad categories.

pub const EXAM_RATINGS: &str = include_str!("../../../fixtures/exam.csv");
pub const EXAM_CATEGORIES: &str = include_str!("../../../fixtures/exam_categories.txt");
pub const EXAM_HIERARCHY: &str = include_str!("../../../fixtures/exam_hierarchy.json");
pub const EXAM_WEIGHTS: &str = include_str!("../../../fixtures/exam_weights.json");

pub const DSM_RATINGS: &str = include_str!("../../../fixtures/dsm.csv");
pub const DSM_ROSTER: &str = include_str!("../../../fixtures/dsm_roster.csv");
pub const DSM_CATEGORIES: &str = include_str!("../../../fixtures/dsm_categories.txt");
/// Same diagnoses as [`DSM_RATINGS`], with each rater's listing order as rank.
pub const DSM_RANKINGS: &str = include_str!("../../../fixtures/dsm_rankings.csv");
