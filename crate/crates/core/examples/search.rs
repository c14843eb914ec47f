//! Keyword search over the filtered stream, using the recorded stream that
//! ships with the crate: 300 tweets per keyword, each tagged with the
//! keyword it was collected for.
//!
//!     cargo run --example search

use std::path::Path;

use smmt::acquire::{
    search_collect, Credentials, Endpoints, FixtureTransport, StreamOptions, ThreadSleeper,
    TweetRecord, KEYWORD_FIELD,
};

fn main() -> smmt::Result<()> {
    let fixture = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/e2e");
    let transport = FixtureTransport::from_dir(&fixture)?;
    let keywords: Vec<String> = ["donald trump", "coronavirus", "cricket"]
        .iter()
        .map(|s| s.to_string())
        .collect();

    let mut out = Vec::new();
    let counts = search_collect(
        &transport,
        &Credentials::offline(),
        &Endpoints::default(),
        &keywords,
        300,
        &mut out,
        &StreamOptions::default(),
        &ThreadSleeper,
    )?;
    for (keyword, n) in &counts {
        println!("{keyword:>14}: {n}");
    }

    let text = String::from_utf8_lossy(&out);
    for line in text.lines().take(3) {
        let value = serde_json::from_str(line).expect("collector writes JSON lines");
        let tweet = TweetRecord::from_value(value)?;
        println!("[{}] {}", tweet.raw[KEYWORD_FIELD].as_str().unwrap_or(""), tweet.text());
    }
    Ok(())
}
