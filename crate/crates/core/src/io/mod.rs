//! Configuration, output formats and the command layer behind the binary.

pub mod commands;
pub mod config;
pub mod output;

use std::collections::BTreeMap;

pub use commands::{run, Command, Outcome};
pub use config::{config_from_pairs, parse_config, parse_pairs, BinsKind, ProcessKind, RunConfig, KEYS};
pub use output::{events_from_csv, trajectory_to_csv, DistributionOut, Meta, OutputBundle, Payload};

use crate::error::Result;

/// Parses an optional configuration file, then applies `overrides` on top.
pub fn load_config<'a, I>(file_text: Option<&str>, overrides: I) -> Result<RunConfig>
where
    I: IntoIterator<Item = (&'a str, String)>,
{
    let mut pairs = match file_text {
        Some(text) => parse_pairs(text)?,
        None => BTreeMap::new(),
    };
    for (k, v) in overrides {
        pairs.insert(k.to_string(), v);
    }
    config_from_pairs(pairs)
}
