//! Learns a batch-level topic classifier from a monolingual in-domain sample
//! and uses it to rank and select documents of a large parallel corpus.

pub mod batcher;
pub mod classifier;
pub mod cli;
pub mod config;
pub mod corpus_io;
pub mod error;
pub mod evaluation;
pub mod fixtures;
pub mod hexfloat;
pub mod pipeline;
pub mod ranker;
pub mod textproc;
pub mod vectorizer;

pub use error::{Error, Result};
