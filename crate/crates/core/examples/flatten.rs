//! Flattens tweet JSON lines into TSV, once in memory and once streaming,
//! and shows the two agree.
//!
//!     cargo run --example flatten

use smmt::flatten::{flatten_heavy, flatten_lite, FlattenConfig, FlattenOptions};

const INPUT: &str = concat!(
    r#"{"id_str":"1","text":"tabs\tand\nnewlines","user":{"screen_name":"ana"},"entities":{"hashtags":[{"text":"rust"}]}}"#, "\n",
    r#"{"id_str":"2","text":"no user here 🦀"}"#, "\n",
    "not json at all\n",
    "\n",
    r#"{"id_str":"3","text":"retweeted","user":{"screen_name":"bo"},"retweet_count":12}"#, "\n",
);

fn main() -> smmt::Result<()> {
    let config = FlattenConfig::parse_fields(
        "# one dotted path per line\nid_str\nuser.screen_name\ntext\nretweet_count\nentities.hashtags\n",
        true,
    )?;
    let opts = FlattenOptions::default();

    let mut lite = Vec::new();
    let stats = flatten_lite(INPUT.as_bytes(), &config, &opts, &mut lite)?;
    let mut heavy = Vec::new();
    flatten_heavy(INPUT.as_bytes(), &config, &opts, &mut heavy)?;

    print!("{}", String::from_utf8_lossy(&lite));
    println!("rows: {}, skipped: {}, modes agree: {}", stats.rows, stats.skipped, lite == heavy);

    let strict = FlattenOptions { strict: true, ..opts };
    if let Err(e) = flatten_lite(INPUT.as_bytes(), &config, &strict, Vec::new()) {
        println!("strict mode: {e}");
    }
    Ok(())
}
