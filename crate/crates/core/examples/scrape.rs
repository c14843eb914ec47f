//! Collects the tweet ids a user posted in a date range by paging through
//! search results. Two recorded pages stand in for the site.
//!
//!     cargo run --example scrape

use smmt::acquire::{
    scrape_user_range, FixtureEntry, FixtureResponse, FixtureTransport, Method, ScrapeAdapter,
    ScrapeTask, SearchTimelineAdapter, DEFAULT_MAX_PAGES,
};

fn page(ids: &[u64], cursor: &str) -> String {
    let items: String = ids
        .iter()
        .map(|id| format!(r#"<li class="stream-item"><div class="tweet" data-tweet-id="{id}"></div></li>"#))
        .collect();
    format!(r#"<div class="stream-container" data-min-position="{cursor}"><ol>{items}</ol></div>"#)
}

fn main() -> smmt::Result<()> {
    let task: ScrapeTask = "nasa 2020-05-01 2020-05-31".parse()?;
    let adapter = SearchTimelineAdapter::default();
    let first = adapter.first_url(&task);
    let second = format!("{first}&max_position=TWEET-903-901");

    let site = FixtureTransport::new(vec![
        FixtureEntry::new(Method::Get, &first)
            .respond(FixtureResponse::ok(page(&[905, 904, 903], "TWEET-903-901"))),
        FixtureEntry::new(Method::Get, &second)
            .respond(FixtureResponse::ok(page(&[903, 902, 901], ""))),
    ])?;

    let ids = scrape_user_range(&site, &adapter, &task, DEFAULT_MAX_PAGES)?;
    println!("{} from {} to {}: {} tweets", task.handle(), task.date_from(), task.date_to(), ids.len());
    for id in ids {
        println!("{id}");
    }
    Ok(())
}
