//! Exact arithmetic, word metrics and subgroup distortion for two families of
//! nilpotent integer matrix groups: the Heisenberg groups `H_k` and the
//! unitriangular groups `T_n`.
//!
//! * [`group`] holds elements, words, normal forms and presentations.
//! * [`collection`] rewrites words into normal form and counts generator
//!   instances along the way.
//! * [`quasimetric`] evaluates the metric estimates and calibrates them
//!   against exact word lengths.
//! * [`synthesis`] builds short words whose lengths realise the estimates.
//! * [`exact_metric`] is a breadth-first word-length oracle.
//! * [`distortion`] realises the embeddings between the families and fits
//!   their distortion exponents.

pub mod collection;
pub mod distortion;
mod error;
pub mod exact_metric;
mod fit;
pub mod group;
pub mod quasimetric;
pub mod synthesis;
pub mod text;

pub mod cli;

pub use error::{Error, Result};
pub use group::{
    GeneratorIndex, GroupElement, GroupSpec, HeisenbergForm, Letter, NormalForm, Word,
};
