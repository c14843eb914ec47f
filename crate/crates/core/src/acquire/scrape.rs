//! Per-user, per-date-range tweet id scraping.
//!
//! Page structure knowledge lives only in a [`ScrapeAdapter`]; the driver
//! handles pagination, de-duplication and error reporting.

use std::collections::HashSet;
use std::str::FromStr;

use chrono::{Days, NaiveDate};
use regex::Regex;

use super::transport::PageFetcher;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScrapeTask {
    handle: String,
    date_from: NaiveDate,
    date_to: NaiveDate,
}

impl ScrapeTask {
    pub fn new(handle: &str, date_from: NaiveDate, date_to: NaiveDate) -> Result<Self> {
        let handle = handle.trim().trim_start_matches('@');
        if handle.is_empty() || handle.chars().any(char::is_whitespace) {
            return Err(Error::input(format!("invalid handle {handle:?}")));
        }
        if date_from > date_to {
            return Err(Error::input(format!(
                "date range {date_from}..{date_to} is reversed"
            )));
        }
        Ok(ScrapeTask {
            handle: handle.to_string(),
            date_from,
            date_to,
        })
    }

    pub fn handle(&self) -> &str {
        &self.handle
    }

    pub fn date_from(&self) -> NaiveDate {
        self.date_from
    }

    pub fn date_to(&self) -> NaiveDate {
        self.date_to
    }
}

impl FromStr for ScrapeTask {
    type Err = Error;

    /// `handle<TAB or space or comma>YYYY-MM-DD<sep>YYYY-MM-DD`
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s
            .split(|c: char| c == '\t' || c == ',' || c.is_whitespace())
            .filter(|p| !p.is_empty())
            .collect();
        let [handle, from, to] = parts[..] else {
            return Err(Error::input(format!(
                "expected `handle from-date to-date`, got {s:?}"
            )));
        };
        let date = |d: &str| {
            NaiveDate::parse_from_str(d, "%Y-%m-%d")
                .map_err(|e| Error::input(format!("bad date {d:?}: {e}")))
        };
        ScrapeTask::new(handle, date(from)?, date(to)?)
    }
}

/// Result of parsing one page.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PageIds {
    pub ids: Vec<String>,
    pub next: Option<String>,
}

pub trait ScrapeAdapter {
    fn first_url(&self, task: &ScrapeTask) -> String;

    /// Extracts tweet ids and the follow-up page URL, if any. Pages without
    /// the expected id-bearing structure are a [`Error::Parse`].
    fn parse_page(&self, url: &str, body: &str) -> Result<PageIds>;
}

/// Adapter for the server-rendered search timeline markup: tweets carry
/// `data-tweet-id` attributes inside a `stream-container` whose
/// `data-min-position` cursor addresses the next page.
#[derive(Debug, Clone)]
pub struct SearchTimelineAdapter {
    base_url: String,
    tweet_id: Regex,
    container: Regex,
    cursor: Regex,
}

impl Default for SearchTimelineAdapter {
    fn default() -> Self {
        Self::new("https://twitter.com/search")
    }
}

impl SearchTimelineAdapter {
    pub fn new(base_url: &str) -> Self {
        SearchTimelineAdapter {
            base_url: base_url.to_string(),
            tweet_id: Regex::new(r#"data-tweet-id="(\d+)""#).unwrap(),
            container: Regex::new(r#"class="[^"]*\bstream-container\b[^"]*""#).unwrap(),
            cursor: Regex::new(r#"data-min-position="([^"]*)""#).unwrap(),
        }
    }
}

impl ScrapeAdapter for SearchTimelineAdapter {
    fn first_url(&self, task: &ScrapeTask) -> String {
        // `until` is exclusive on the search side, so extend by one day.
        let until = task
            .date_to
            .checked_add_days(Days::new(1))
            .unwrap_or(task.date_to);
        let query = format!(
            "from:{} since:{} until:{}",
            task.handle, task.date_from, until
        );
        format!("{}?f=tweets&vertical=default&q={}", self.base_url, encode_query(&query))
    }

    fn parse_page(&self, url: &str, body: &str) -> Result<PageIds> {
        if !self.container.is_match(body) {
            return Err(Error::Parse {
                url: url.to_string(),
                message: "no stream-container element".into(),
            });
        }
        let ids: Vec<String> = self
            .tweet_id
            .captures_iter(body)
            .map(|c| c[1].to_string())
            .collect();
        let next = match self.cursor.captures(body) {
            Some(c) if !ids.is_empty() && !c[1].is_empty() => {
                let base = url.split("&max_position=").next().unwrap_or(url);
                Some(format!("{base}&max_position={}", encode_query(&c[1])))
            }
            _ => None,
        };
        Ok(PageIds { ids, next })
    }
}

fn encode_query(s: &str) -> String {
    let mut out = String::with_capacity(s.len() * 3);
    for b in s.bytes() {
        match b {
            b'A'..=b'Z' | b'a'..=b'z' | b'0'..=b'9' | b'-' | b'_' | b'.' | b'~' => out.push(b as char),
            _ => out.push_str(&format!("%{b:02X}")),
        }
    }
    out
}

pub const DEFAULT_MAX_PAGES: usize = 1000;

/// Walks the result pages for `task` and returns distinct tweet ids in the
/// order the pages deliver them (newest first on the live site).
pub fn scrape_user_range<F, A>(
    fetcher: &F,
    adapter: &A,
    task: &ScrapeTask,
    max_pages: usize,
) -> Result<Vec<String>>
where
    F: PageFetcher + ?Sized,
    A: ScrapeAdapter + ?Sized,
{
    let mut seen = HashSet::new();
    let mut visited = HashSet::new();
    let mut ids = Vec::new();
    let mut url = Some(adapter.first_url(task));
    while let Some(current) = url.take() {
        if visited.len() >= max_pages || !visited.insert(current.clone()) {
            break;
        }
        let page = fetcher.fetch(&current)?;
        if !(200..300).contains(&page.status) {
            return Err(Error::Fetch {
                url: current,
                status: page.status,
            });
        }
        let parsed = adapter.parse_page(&current, &page.body)?;
        for id in parsed.ids {
            if seen.insert(id.clone()) {
                ids.push(id);
            }
        }
        url = parsed.next;
    }
    Ok(ids)
}
