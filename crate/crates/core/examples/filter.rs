//! Keeps the rows of a flattened TSV whose text mentions a term from a
//! list. Matching is case-insensitive and respects word boundaries.
//!
//!     cargo run --example filter

use smmt::flatten::{filter_tsv_by_terms, TermList};
use smmt::tsv::ColumnRef;

const TWEETS: &str = "id_str\ttext
1\tHad a FEVER all night
2\tfeverish excitement for the match
3\tsore   throat and a cough
4\tnothing to report
5\t#fever day three
";

fn main() -> smmt::Result<()> {
    let terms = TermList::parse("C0015967\tfever\nC0242429\tsore throat\ncough\n")?;
    let mut out = Vec::new();
    let stats = filter_tsv_by_terms(
        TWEETS.as_bytes(),
        &ColumnRef::Name("text".into()),
        true,
        &terms,
        &mut out,
    )?;
    print!("{}", String::from_utf8_lossy(&out));
    println!("kept {}, dropped {}", stats.kept, stats.dropped);
    Ok(())
}
