//! The guide chapters from `book/` included as rustdoc pages.
//!
//! Each submodule's documentation is one chapter of the mdbook under
//! `book/src`, included verbatim. `cargo test --doc` therefore compiles
//! and runs every code block in the guide, which keeps the prose and
//! the API from drifting apart.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/charges.md")]
pub mod charges {}

#[doc = include_str!("../../../book/src/interval-measures.md")]
pub mod interval_measures {}

#[doc = include_str!("../../../book/src/sweeping.md")]
pub mod sweeping {}

#[doc = include_str!("../../../book/src/criteria.md")]
pub mod criteria {}

#[doc = include_str!("../../../book/src/constructions.md")]
pub mod constructions {}

#[doc = include_str!("../../../book/src/growth.md")]
pub mod growth {}

#[doc = include_str!("../../../book/src/small-sets.md")]
pub mod small_sets {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
