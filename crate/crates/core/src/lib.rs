//! Chance-corrected agreement for raters who may assign a subject to any
//! number of categories.
//!
//! The central statistic generalizes Fleiss' kappa: each category gets its own
//! observed (`Po_c`) and chance (`Pe_c`) agreement over select/not-select
//! decisions, and the per-category terms are pooled with importance weights
//! and availability scale factors. Categories may depend on one another
//! through [`hierarchy`] rules, and raters may see only some of the subjects.
//!
//! ```
//! use kappax::{data, hierarchy, kappa, fixtures};
//!
//! let records = data::parse_ratings(fixtures::EXAM_RATINGS).unwrap();
//! let categories = data::parse_category_list(fixtures::EXAM_CATEGORIES);
//! let tensor = data::build_tensor(&records, None, Some(&categories)).unwrap();
//! let rules = hierarchy::parse_hierarchy(fixtures::EXAM_HIERARCHY).unwrap();
//! let rules = hierarchy::validate_rules(&rules, tensor.categories()).unwrap();
//! let weights = kappa::parse_weights(fixtures::EXAM_WEIGHTS, tensor.categories()).unwrap();
//!
//! let report = kappa::generalized_kappa(&tensor, Some(&rules), &weights).unwrap();
//! // 0.692 when every intermediate is rounded to three decimals first.
//! assert!((report.overall.unwrap() - 0.69254).abs() < 5e-6);
//! ```

pub mod baselines;
pub mod bootstrap;
pub mod data;
mod error;
pub mod fixtures;
pub mod hierarchy;
pub mod kappa;

pub use error::{Error, Result};
