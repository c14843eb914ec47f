//! Captures the sample stream into a JSONL file. The stream here is replayed
//! from an in-memory fixture, including one dropped connection and a
//! rate-limit response the collector backs off from.
//!
//!     cargo run --example stream

use std::io::Write;

use smmt::acquire::{
    stream_collect, Credentials, Endpoints, FixtureEntry, FixtureResponse, FixtureTransport,
    Method, RecordingSleeper, StreamOptions,
};

fn main() -> smmt::Result<()> {
    let endpoints = Endpoints::default();
    let tweet = |id: u64, text: &str| format!(r#"{{"id":{id},"id_str":"{id}","text":"{text}"}}"#);

    let first = format!("{}\n{}\n", tweet(1, "good morning"), tweet(2, "rain again"));
    let second = format!("\r\n{}\n{}\n", tweet(3, "coffee first"), tweet(4, "weekend!"));
    let transport = FixtureTransport::new(vec![FixtureEntry::new(Method::Get, &endpoints.sample)
        .respond(FixtureResponse::ok(first).dropped())
        .respond(FixtureResponse::new(429).header("Retry-After", "5"))
        .respond(FixtureResponse::ok(second))])?;

    let sleeper = RecordingSleeper::default();
    let mut out = Vec::new();
    let n = stream_collect(
        &transport,
        &Credentials::offline(),
        &endpoints,
        &mut out,
        Some(4),
        &StreamOptions::default(),
        &sleeper,
    )?;

    println!("collected {n} tweets over {} connections", transport.requests().len());
    println!("backoff delays: {:?}", sleeper.delays());
    std::io::stdout().write_all(&out)?;
    Ok(())
}
