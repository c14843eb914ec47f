//! The keyword classification walkthrough: collect tweets for three
//! keywords, flatten them to (label, id, text), train and evaluate the
//! classifier, and draw the confusion matrix.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::BufReader;
use std::path::{Path, PathBuf};

use crate::acquire::{
    search_collect, Credentials, Endpoints, Sleeper, StreamOptions, Transport, KEYWORD_FIELD,
};
use crate::classify::{self, ClassifierBundle, CorpusColumns, Evaluation, HeatmapStyle};
use crate::error::{Error, Result};
use crate::flatten::{self, FlattenConfig, FlattenOptions};

pub const EXAMPLE_KEYWORDS: [&str; 3] = ["donald trump", "coronavirus", "cricket"];
pub const EXAMPLE_PER_KEYWORD: u64 = 300;

#[derive(Debug, Clone)]
pub struct ExampleConfig {
    pub keywords: Vec<String>,
    pub per_keyword: u64,
    pub seed: u64,
    pub test_fraction: f64,
    pub alpha: f64,
}

impl ExampleConfig {
    pub fn new(seed: u64) -> Self {
        ExampleConfig {
            keywords: EXAMPLE_KEYWORDS.iter().map(|s| s.to_string()).collect(),
            per_keyword: EXAMPLE_PER_KEYWORD,
            seed,
            test_fraction: classify::DEFAULT_TEST_FRACTION,
            alpha: classify::DEFAULT_ALPHA,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExampleReport {
    pub counts: BTreeMap<String, u64>,
    pub labeled_rows: u64,
    pub train_docs: usize,
    pub test_docs: usize,
    pub evaluation: Evaluation,
    pub out_dir: PathBuf,
}

/// Output files written under the artifacts directory.
pub mod files {
    pub const TWEETS: &str = "tweets.jsonl";
    pub const LABELED: &str = "labeled.tsv";
    pub const TRAIN: &str = "train.tsv";
    pub const TEST: &str = "test.tsv";
    pub const MODEL: &str = "model.json";
    pub const METRICS: &str = "metrics.tsv";
    pub const CONFUSION: &str = "confusion.tsv";
    pub const HEATMAP: &str = "heatmap.svg";
}

pub fn run_example<T: Transport + ?Sized>(
    transport: &T,
    credentials: &Credentials,
    endpoints: &Endpoints,
    config: &ExampleConfig,
    out_dir: &Path,
    sleeper: &dyn Sleeper,
) -> Result<ExampleReport> {
    fs::create_dir_all(out_dir).map_err(|e| Error::file(out_dir, e))?;
    let path = |name: &str| out_dir.join(name);

    // 1. collect
    let tweets_path = path(files::TWEETS);
    let mut sink = flatten::create_output(&tweets_path)?;
    let counts = search_collect(
        transport,
        credentials,
        endpoints,
        &config.keywords,
        config.per_keyword,
        &mut sink,
        &StreamOptions::default(),
        sleeper,
    )?;
    drop(sink);
    let short: Vec<String> = counts
        .iter()
        .filter(|(_, &n)| n < config.per_keyword)
        .map(|(k, n)| format!("{k:?} ({n} of {})", config.per_keyword))
        .collect();
    if !short.is_empty() {
        return Err(Error::input(format!(
            "not enough tweets for keyword(s): {}",
            short.join(", ")
        )));
    }

    // 2. flatten to label, id, text
    let flat = FlattenConfig::from_paths(&[KEYWORD_FIELD, "id_str", "text"], true)?;
    let labeled_path = path(files::LABELED);
    let stats = flatten::flatten_heavy_file(
        &tweets_path,
        false,
        &flat,
        &FlattenOptions::default(),
        &labeled_path,
    )?;

    // 3. split, vectorize, train
    let file = File::open(&labeled_path).map_err(|e| Error::file(&labeled_path, e))?;
    let corpus = classify::read_corpus(BufReader::new(file), &CorpusColumns::default())?;
    let (train, test) = classify::split(&corpus, config.test_fraction, config.seed)?;
    train.write_tsv(flatten::create_output(&path(files::TRAIN))?)?;
    test.write_tsv(flatten::create_output(&path(files::TEST))?)?;
    let bundle = ClassifierBundle::train(&train, config.alpha)?;
    bundle.save(&path(files::MODEL))?;

    // 4. evaluate and plot
    let evaluation = bundle.evaluate(&test)?;
    write(&path(files::METRICS), &evaluation.metrics_tsv())?;
    write(&path(files::CONFUSION), &evaluation.matrix.to_tsv())?;
    classify::render_heatmap(
        &evaluation.matrix,
        &HeatmapStyle::default(),
        &path(files::HEATMAP),
    )?;

    Ok(ExampleReport {
        counts,
        labeled_rows: stats.rows,
        train_docs: train.len(),
        test_docs: test.len(),
        evaluation,
        out_dir: out_dir.to_path_buf(),
    })
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::file(path, e))
}
