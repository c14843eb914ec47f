//! Tweet acquisition: open stream capture, keyword-bounded capture, id
//! hydration and per-user scraping, all behind a pluggable [`Transport`].

mod credentials;
mod hydrate;
#[cfg(feature = "live")]
mod live;
mod record;
mod retry;
mod scrape;
mod stream;
mod transport;

pub use credentials::Credentials;
pub use hydrate::{hydrate, parse_id_list, HydrateOptions, Hydrated, DEFAULT_BATCH_SIZE};
#[cfg(feature = "live")]
pub use live::HttpTransport;
pub use record::TweetRecord;
pub use retry::{retry_after, Backoff, RecordingSleeper, RetryPolicy, Sleeper, ThreadSleeper};
pub use scrape::{
    scrape_user_range, PageIds, ScrapeAdapter, ScrapeTask, SearchTimelineAdapter,
    DEFAULT_MAX_PAGES,
};
pub use stream::{search_collect, stream_collect, StreamOptions, KEYWORD_FIELD};
pub use transport::{
    FixtureEntry, FixtureResponse, FixtureTransport, Method, Page, PageFetcher, Params,
    RecordedRequest, Request, Response, Transport,
};

/// Service endpoint URLs. Defaults target the v1.1 REST and streaming APIs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Endpoints {
    pub sample: String,
    pub filter: String,
    pub lookup: String,
}

impl Default for Endpoints {
    fn default() -> Self {
        Endpoints {
            sample: "https://stream.twitter.com/1.1/statuses/sample.json".into(),
            filter: "https://stream.twitter.com/1.1/statuses/filter.json".into(),
            lookup: "https://api.twitter.com/1.1/statuses/lookup.json".into(),
        }
    }
}
