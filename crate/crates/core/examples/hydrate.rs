//! Hydrates a list of tweet ids. The lookup endpoint is a fixture that
//! knows about some of the ids and rate-limits the first attempt.
//!
//!     cargo run --example hydrate

use serde_json::json;
use smmt::acquire::{
    hydrate, parse_id_list, Credentials, Endpoints, FixtureEntry, FixtureResponse,
    FixtureTransport, HydrateOptions, Method, RecordingSleeper,
};

fn main() -> smmt::Result<()> {
    let endpoints = Endpoints::default();
    let ids = parse_id_list("# shared dataset\n1001\n1002\n1003\n1002\n1004\n");

    let known = json!([
        {"id": 1004, "id_str": "1004", "text": "fourth"},
        {"id": 1001, "id_str": "1001", "text": "first"},
        {"id": 1003, "id_str": "1003", "text": "third"},
    ]);
    let transport = FixtureTransport::new(vec![FixtureEntry::new(Method::Post, &endpoints.lookup)
        .respond(FixtureResponse::new(429).header("Retry-After", "2"))
        .respond(FixtureResponse::ok(known.to_string()))])?;

    let sleeper = RecordingSleeper::default();
    let result = hydrate(
        &transport,
        &Credentials::offline(),
        &endpoints,
        &ids,
        &HydrateOptions::default(),
        &sleeper,
    )?;

    for tweet in &result.tweets {
        println!("{}\t{}", tweet.id, tweet.text());
    }
    println!("missing: {:?}", result.missing);
    println!("waited {:?} before retrying", sleeper.delays());
    Ok(())
}
