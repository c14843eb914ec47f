use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Write};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use serde_json::{Map, Value};

use super::credentials::Credentials;
use super::record::text_of;
use super::retry::{self, RetryPolicy, Sleeper};
use super::transport::{Method, Params, Request, Transport};
use super::Endpoints;
use crate::error::{Error, Result};

/// Field added to every record written by [`search_collect`], holding the
/// keyword the record was collected for.
pub const KEYWORD_FIELD: &str = "smmt_keyword";

#[derive(Debug, Clone, Default)]
pub struct StreamOptions {
    pub retry: RetryPolicy,
    /// Checked between records; set it from a signal handler to stop cleanly.
    pub stop: Option<Arc<AtomicBool>>,
}

impl StreamOptions {
    fn stopped(&self) -> bool {
        self.stop
            .as_ref()
            .is_some_and(|s| s.load(Ordering::Relaxed))
    }
}

enum Flow {
    Continue,
    Stop,
}

/// Captures the open sample stream into `sink`, one object per line.
///
/// Returns when the stream ends, `limit` records are written, or the stop
/// flag is raised.
pub fn stream_collect<T: Transport + ?Sized>(
    transport: &T,
    credentials: &Credentials,
    endpoints: &Endpoints,
    sink: &mut dyn Write,
    limit: Option<u64>,
    opts: &StreamOptions,
    sleeper: &dyn Sleeper,
) -> Result<u64> {
    credentials.validate()?;
    let mut written = 0u64;
    if limit == Some(0) {
        return Ok(0);
    }
    let params = Params::new();
    let req = Request {
        method: Method::Get,
        url: &endpoints.sample,
        params: &params,
        credentials,
    };
    consume(transport, &req, opts, sleeper, |record| {
        write_record(sink, &record)?;
        written += 1;
        Ok(if limit.is_some_and(|l| written >= l) {
            Flow::Stop
        } else {
            Flow::Continue
        })
    })?;
    Ok(written)
}

/// Collects up to `per_keyword` tweets for each keyword from one combined
/// filtered stream.
///
/// A tweet is credited to the first keyword, in list order, that occurs in
/// its text (case-insensitive substring) and still has quota left. Written
/// records carry the keyword in [`KEYWORD_FIELD`]. Keywords that run short
/// before the stream ends report their actual count.
#[allow(clippy::too_many_arguments)]
pub fn search_collect<T: Transport + ?Sized>(
    transport: &T,
    credentials: &Credentials,
    endpoints: &Endpoints,
    keywords: &[String],
    per_keyword: u64,
    sink: &mut dyn Write,
    opts: &StreamOptions,
    sleeper: &dyn Sleeper,
) -> Result<BTreeMap<String, u64>> {
    let keywords = validate_keywords(keywords)?;
    if per_keyword == 0 {
        return Err(Error::input("number of tweets per keyword must be at least 1"));
    }
    credentials.validate()?;

    let folded: Vec<String> = keywords.iter().map(|k| k.to_lowercase()).collect();
    let mut counts = vec![0u64; keywords.len()];
    let mut params = Params::new();
    params.insert("track".into(), keywords.join(","));
    let req = Request {
        method: Method::Post,
        url: &endpoints.filter,
        params: &params,
        credentials,
    };
    consume(transport, &req, opts, sleeper, |mut record| {
        let text = text_of(&record).to_lowercase();
        let hit = (0..keywords.len()).find(|&i| counts[i] < per_keyword && text.contains(&folded[i]));
        if let Some(i) = hit {
            record.insert(KEYWORD_FIELD.into(), Value::String(keywords[i].clone()));
            write_record(sink, &record)?;
            counts[i] += 1;
        }
        Ok(if counts.iter().all(|&c| c >= per_keyword) {
            Flow::Stop
        } else {
            Flow::Continue
        })
    })?;

    Ok(keywords.into_iter().zip(counts).collect())
}

fn validate_keywords(keywords: &[String]) -> Result<Vec<String>> {
    if keywords.is_empty() {
        return Err(Error::input("at least one keyword is required"));
    }
    let mut out: Vec<String> = Vec::with_capacity(keywords.len());
    for k in keywords {
        let k = k.trim();
        if k.is_empty() {
            return Err(Error::input("keywords must be non-empty"));
        }
        if out.iter().any(|o| o.to_lowercase() == k.to_lowercase()) {
            return Err(Error::input(format!("duplicate keyword {k:?}")));
        }
        out.push(k.to_string());
    }
    Ok(out)
}

fn write_record(sink: &mut dyn Write, record: &Map<String, Value>) -> Result<()> {
    let mut line = serde_json::to_vec(record).expect("serializing a JSON map cannot fail");
    line.push(b'\n');
    sink.write_all(&line)?;
    sink.flush()?;
    Ok(())
}

/// Reads a newline-delimited stream of objects, reconnecting on dropped
/// connections. Keep-alive blank lines, non-tweet notices and undecodable
/// lines are skipped.
fn consume<T, F>(
    transport: &T,
    req: &Request<'_>,
    opts: &StreamOptions,
    sleeper: &dyn Sleeper,
    mut on_record: F,
) -> Result<()>
where
    T: Transport + ?Sized,
    F: FnMut(Map<String, Value>) -> Result<Flow>,
{
    let mut backoff = opts.retry.backoff();
    loop {
        if opts.stopped() {
            return Ok(());
        }
        let resp = retry::send(transport, req, &mut backoff, sleeper)?;
        let mut reader = BufReader::new(resp.body);
        let mut line = Vec::new();
        loop {
            if opts.stopped() {
                return Ok(());
            }
            line.clear();
            match reader.read_until(b'\n', &mut line) {
                Ok(0) => return Ok(()),
                Ok(_) => {
                    backoff.reset();
                    let Some(record) = decode(&line) else { continue };
                    if let Flow::Stop = on_record(record)? {
                        return Ok(());
                    }
                }
                Err(e) => {
                    let Some(delay) = backoff.next_delay(None) else {
                        return Err(Error::Transport(format!("stream connection lost: {e}")));
                    };
                    log::warn!("stream connection lost ({e}); reconnecting in {delay:?}");
                    sleeper.sleep(delay);
                    break;
                }
            }
        }
    }
}

fn decode(line: &[u8]) -> Option<Map<String, Value>> {
    let trimmed = line.trim_ascii();
    if trimmed.is_empty() {
        return None;
    }
    match serde_json::from_slice::<Value>(trimmed) {
        Ok(Value::Object(map)) if map.contains_key("id_str") || map.contains_key("id") => Some(map),
        Ok(_) => {
            log::debug!("skipping non-tweet stream message");
            None
        }
        Err(e) => {
            log::warn!("skipping undecodable stream line: {e}");
            None
        }
    }
}
