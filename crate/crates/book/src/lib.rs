//! The chapters of the guide in `book/src`, compiled as doc-tests so the
//! samples cannot drift from the library.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/data.md")]
pub mod data {}

#[doc = include_str!("../../../book/src/generalized-kappa.md")]
pub mod generalized_kappa {}

#[doc = include_str!("../../../book/src/hierarchies.md")]
pub mod hierarchies {}

#[doc = include_str!("../../../book/src/weights.md")]
pub mod weights {}

#[doc = include_str!("../../../book/src/baselines.md")]
pub mod baselines {}

#[doc = include_str!("../../../book/src/bootstrap.md")]
pub mod bootstrap {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
