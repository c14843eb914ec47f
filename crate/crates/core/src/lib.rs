//! Social media mining toolkit.
//!
//! The crate covers the whole pipeline for working with tweet data:
//!
//! * [`acquire`]: stream capture, keyword search, id hydration and scraping
//! * [`flatten`]: newline-delimited tweet objects to TSV, plus term filtering
//! * [`dict`]: two-column term dictionaries
//! * [`annotate`]: dictionary-based entity annotation (TSV, brat, PubAnnotation)
//! * [`classify`]: TF-IDF + multinomial Naive Bayes with metrics and a heat-map
//! * [`pipeline`]: the keyword classification walkthrough, end to end
//!
//! The `smmt` binary exposes all of it as subcommands; see [`cli`].

pub mod acquire;
pub mod annotate;
pub mod classify;
pub mod cli;
pub mod dict;
pub mod error;
pub mod flatten;
pub mod pipeline;
pub mod tsv;

pub use error::{Error, Result};
