use std::collections::{HashMap, HashSet};

use serde_json::Value;

use super::credentials::Credentials;
use super::record::TweetRecord;
use super::retry::{self, RetryPolicy, Sleeper};
use super::transport::{Method, Params, Request, Transport};
use super::Endpoints;
use crate::error::{Error, Result};

pub const DEFAULT_BATCH_SIZE: usize = 100;

#[derive(Debug, Clone)]
pub struct HydrateOptions {
    pub batch_size: usize,
    pub retry: RetryPolicy,
}

impl Default for HydrateOptions {
    fn default() -> Self {
        HydrateOptions {
            batch_size: DEFAULT_BATCH_SIZE,
            retry: RetryPolicy::default(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Hydrated {
    /// Found tweets, in input order.
    pub tweets: Vec<TweetRecord>,
    /// Ids the service did not return (deleted, protected, suspended).
    pub missing: Vec<String>,
}

/// Resolves bare tweet ids into full tweet objects via batched lookups.
///
/// Duplicate ids are looked up once. Batches go out sequentially; a rate
/// limited batch is retried as a whole.
pub fn hydrate<T: Transport + ?Sized>(
    transport: &T,
    credentials: &Credentials,
    endpoints: &Endpoints,
    ids: &[String],
    opts: &HydrateOptions,
    sleeper: &dyn Sleeper,
) -> Result<Hydrated> {
    let ids = unique_ids(ids)?;
    if ids.is_empty() {
        return Ok(Hydrated::default());
    }
    if opts.batch_size == 0 {
        return Err(Error::input("batch size must be at least 1"));
    }
    credentials.validate()?;

    let mut found: HashMap<String, TweetRecord> = HashMap::with_capacity(ids.len());
    for batch in ids.chunks(opts.batch_size) {
        let mut params = Params::new();
        params.insert("id".into(), batch.join(","));
        params.insert("include_entities".into(), "true".into());
        let req = Request {
            method: Method::Post,
            url: &endpoints.lookup,
            params: &params,
            credentials,
        };
        let mut backoff = opts.retry.backoff();
        let body = retry::send(transport, &req, &mut backoff, sleeper)?.read_body()?;
        let requested: HashSet<&str> = batch.iter().map(String::as_str).collect();
        for record in parse_lookup(&body)? {
            if requested.contains(record.id.as_str()) {
                found.insert(record.id.clone(), record);
            }
        }
    }

    let mut out = Hydrated::default();
    for id in ids {
        match found.remove(&id) {
            Some(t) => out.tweets.push(t),
            None => out.missing.push(id),
        }
    }
    Ok(out)
}

/// Validates every id up front and drops repeats, keeping first occurrences.
fn unique_ids(ids: &[String]) -> Result<Vec<String>> {
    let mut seen = HashSet::with_capacity(ids.len());
    let mut out = Vec::with_capacity(ids.len());
    for id in ids {
        let id = id.trim();
        if id.is_empty() || !id.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::input(format!("invalid tweet id {id:?}")));
        }
        if seen.insert(id) {
            out.push(id.to_string());
        }
    }
    Ok(out)
}

fn parse_lookup(body: &[u8]) -> Result<Vec<TweetRecord>> {
    let value: Value = serde_json::from_slice(body)
        .map_err(|e| Error::Transport(format!("invalid lookup response: {e}")))?;
    let items = match value {
        Value::Array(items) => items,
        // map=true style: {"id": {"123": {...} | null}}
        Value::Object(mut obj) => match obj.remove("id") {
            Some(Value::Object(m)) => m.into_iter().map(|(_, v)| v).collect(),
            _ => return Err(Error::Transport("lookup response is not an array".into())),
        },
        _ => return Err(Error::Transport("lookup response is not an array".into())),
    };
    Ok(items
        .into_iter()
        .filter(|v| v.is_object())
        .filter_map(|v| TweetRecord::from_value(v).ok())
        .collect())
}

/// Reads one id per line, skipping blanks and `#` comments.
pub fn parse_id_list(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.split(['\t', ',']).next().unwrap_or(l).trim().to_string())
        .collect()
}
