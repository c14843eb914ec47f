//! The full walkthrough on the shipped recording: collect 300 tweets for
//! each of three keywords, flatten them to (label, id, text), train and
//! evaluate the classifier, and draw the confusion matrix.
//!
//!     cargo run --example end_to_end [-- OUT_DIR]

use std::path::{Path, PathBuf};

use smmt::acquire::{Credentials, Endpoints, FixtureTransport, ThreadSleeper};
use smmt::pipeline::{files, run_example, ExampleConfig};

fn main() -> smmt::Result<()> {
    let out: PathBuf = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("smmt-end-to-end"));
    let fixture = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/e2e");
    let transport = FixtureTransport::from_dir(&fixture)?;

    let report = run_example(
        &transport,
        &Credentials::offline(),
        &Endpoints::default(),
        &ExampleConfig::new(42),
        &out,
        &ThreadSleeper,
    )?;

    println!("collected: {:?}", report.counts);
    println!(
        "{} labeled rows, {} train, {} test",
        report.labeled_rows, report.train_docs, report.test_docs
    );
    print!("{}", report.evaluation.metrics_tsv());
    for name in [files::LABELED, files::MODEL, files::CONFUSION, files::HEATMAP] {
        println!("wrote {}", out.join(name).display());
    }
    Ok(())
}
