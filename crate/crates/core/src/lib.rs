//! Compressed indexes for approximate pattern matching over collections of
//! similar genomes.
//!
//! Two index kinds share one query contract. [`hybrid::HybridIndex`] filters
//! the text down to the neighbourhoods of LZ77 phrase boundaries.
//! [`alibi::AlibiIndex`] does the same using a reference genome and one
//! alignment script per genome. Both answer "every approximate occurrence of
//! `P` with at most `k` edits" for `|P| <= M` and `k <= K`.

pub mod alibi;
pub mod bench;
pub mod cli;
pub mod codec;
pub mod container;
pub mod error;
mod grid;
pub mod hybrid;
pub mod kernel;
pub mod lz77;
pub mod seq;
pub mod succinct;
pub mod testkit;

pub use error::{Error, Result};
