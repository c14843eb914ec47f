//! Command-line front end: one subcommand per tool.
//!
//! Exit codes: 0 on success, 1 for input errors (including usage errors),
//! 2 for transport, authentication and rate-limit failures.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand};

use crate::acquire::{
    self, Credentials, Endpoints, FixtureTransport, HydrateOptions, PageFetcher, ScrapeTask,
    SearchTimelineAdapter, StreamOptions, ThreadSleeper, Transport,
};
use crate::annotate::{self, AnnotateOptions, OutputFormat};
use crate::classify::{self, ClassifierBundle, ConfusionMatrix, CorpusColumns, HeatmapStyle};
use crate::dict::{self, BuildOptions};
use crate::error::{Error, Result};
use crate::flatten::{self, FlattenConfig, FlattenOptions, TermList};
use crate::pipeline::{self, ExampleConfig};
use crate::tsv::ColumnRef;

#[derive(Debug, Parser)]
#[command(name = "smmt", version, about = "Social media mining toolkit")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Credentials file (`key = value` lines); SMMT_* variables override it
    #[arg(long, global = true, value_name = "FILE")]
    credentials: Option<PathBuf>,

    /// Increase log verbosity (-v info, -vv debug)
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    /// Abort on the first malformed input line instead of skipping it
    #[arg(long, global = true)]
    strict: bool,

    /// Longest single record heavy mode will buffer, in MiB
    #[arg(long, global = true, value_name = "MIB", default_value_t = 256)]
    memory_cap: usize,
}

#[derive(Debug, Clone)]
enum TransportSpec {
    Live,
    Fixture(PathBuf),
}

impl FromStr for TransportSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "live" => Ok(TransportSpec::Live),
            _ => match s.strip_prefix("fixture:") {
                Some(dir) if !dir.is_empty() => Ok(TransportSpec::Fixture(dir.into())),
                _ => Err(format!("expected `live` or `fixture:<dir>`, got {s:?}")),
            },
        }
    }
}

#[derive(Debug, Args)]
struct NetArgs {
    /// `live` or `fixture:<dir>` for recorded responses
    #[arg(long, default_value = "live", value_name = "SPEC")]
    transport: TransportSpec,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Capture the open sample stream until it ends or is interrupted
    Stream {
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
        /// Stop after this many tweets
        #[arg(long)]
        limit: Option<u64>,
        #[command(flatten)]
        net: NetArgs,
    },
    /// Capture up to N tweets per keyword from the filtered stream
    Search {
        /// Comma-separated keywords
        #[arg(long, value_delimiter = ',', required = true)]
        keywords: Vec<String>,
        #[arg(long, short = 'n')]
        count: u64,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
        #[command(flatten)]
        net: NetArgs,
    },
    /// Turn a list of tweet ids into full tweet objects
    Hydrate {
        /// One tweet id per line
        #[arg(long, value_name = "FILE")]
        ids: PathBuf,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
        /// Write ids the service did not return here
        #[arg(long, value_name = "FILE")]
        missing: Option<PathBuf>,
        #[arg(long, default_value_t = acquire::DEFAULT_BATCH_SIZE)]
        batch_size: usize,
        #[command(flatten)]
        net: NetArgs,
    },
    /// Scrape tweet ids for users over date ranges
    Scrape {
        #[arg(long, requires_all = ["from", "to"], conflicts_with = "tasks")]
        handle: Option<String>,
        #[arg(long, value_name = "YYYY-MM-DD")]
        from: Option<NaiveDate>,
        #[arg(long, value_name = "YYYY-MM-DD")]
        to: Option<NaiveDate>,
        /// File of `handle from to` lines
        #[arg(long, value_name = "FILE", required_unless_present = "handle")]
        tasks: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
        #[arg(long, default_value_t = acquire::DEFAULT_MAX_PAGES)]
        max_pages: usize,
        #[command(flatten)]
        net: NetArgs,
    },
    /// Convert newline-delimited tweet objects to TSV
    Flatten {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
        /// Field paths, one per line (default: id_str, text)
        #[arg(long, value_name = "FILE")]
        fields: Option<PathBuf>,
        /// Stream the input with constant memory
        #[arg(long)]
        heavy: bool,
        /// Input is gzip-compressed
        #[arg(long)]
        gzip: bool,
        #[arg(long)]
        no_header: bool,
    },
    /// Keep only TSV rows whose text mentions a listed term
    Filter {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        /// `id<TAB>term` lines, or one term per line
        #[arg(long, value_name = "FILE")]
        terms: PathBuf,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
        /// Text column, by header name or zero-based index
        #[arg(long, default_value = "text")]
        column: ColumnRef,
        /// Input has no header row (column must be an index)
        #[arg(long)]
        no_header: bool,
    },
    /// Dictionary tools
    #[command(subcommand)]
    Dict(DictCommand),
    /// Annotate TSV tweets with dictionary concepts
    Annotate {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long, value_name = "FILE")]
        dict: PathBuf,
        /// Output file (tsv, pubannotation) or directory (brat)
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
        #[arg(long, default_value = "tsv")]
        format: OutputFormat,
        #[arg(long, default_value = "id_str")]
        doc_id_column: ColumnRef,
        #[arg(long, default_value = "text")]
        text_column: ColumnRef,
        /// PubAnnotation: one JSON array instead of one object per line
        #[arg(long)]
        array: bool,
        #[arg(long)]
        no_header: bool,
    },
    /// Train, evaluate and plot the tweet classifier
    #[command(subcommand)]
    Classify(ClassifyCommand),
    /// Run the three-keyword classification walkthrough end to end
    #[command(name = "example-e2e")]
    ExampleE2e {
        /// Fixture directory standing in for the live stream
        #[arg(long, value_name = "DIR")]
        fixture: Option<PathBuf>,
        #[arg(long)]
        seed: u64,
        /// Artifacts directory
        #[arg(long, value_name = "DIR", default_value = "smmt-e2e")]
        out: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum DictCommand {
    /// Build a two-column dictionary from a terminology export
    Build {
        #[arg(long, value_name = "FILE")]
        source: PathBuf,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
        #[arg(long, default_value = "0")]
        id_column: ColumnRef,
        #[arg(long, default_value = "1")]
        term_column: ColumnRef,
        /// Single-character delimiter; `tab` or `\t` for tabs
        #[arg(long, default_value = "tab")]
        delimiter: String,
        /// First row is a header
        #[arg(long)]
        header: bool,
    },
}

#[derive(Debug, Subcommand)]
enum ClassifyCommand {
    /// Split a labeled TSV (label, doc_id, text) and fit the model
    Train {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = classify::DEFAULT_TEST_FRACTION)]
        test_fraction: f64,
        #[arg(long, default_value_t = classify::DEFAULT_ALPHA)]
        alpha: f64,
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        /// Write train.tsv and test.tsv here
        #[arg(long, value_name = "DIR")]
        split_dir: PathBuf,
    },
    /// Score a labeled TSV; writes metrics.tsv and confusion.tsv
    Eval {
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long, value_name = "DIR")]
        out_dir: PathBuf,
    },
    /// Draw a confusion matrix TSV as an SVG heat-map
    Plot {
        #[arg(long, value_name = "FILE")]
        confusion: PathBuf,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
}

/// Parses `argv` (program name first), runs the subcommand and returns the
/// process exit code.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let level = match cli.global.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .try_init();

    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let g = &cli.global;
    match cli.command {
        Command::Stream { out, limit, net } => {
            let (transport, creds) = connect(&net, g)?;
            let stop = Arc::new(AtomicBool::new(false));
            let flag = Arc::clone(&stop);
            if let Err(e) = ctrlc::set_handler(move || flag.store(true, Ordering::Relaxed)) {
                log::warn!("no interrupt handler installed: {e}");
            }
            let opts = StreamOptions {
                stop: Some(stop),
                ..Default::default()
            };
            let mut sink = flatten::create_output(&out)?;
            let n = acquire::stream_collect(
                &transport,
                &creds,
                &Endpoints::default(),
                &mut sink,
                limit,
                &opts,
                &ThreadSleeper,
            )?;
            eprintln!("collected {n} tweets");
        }
        Command::Search {
            keywords,
            count,
            out,
            net,
        } => {
            let (transport, creds) = connect(&net, g)?;
            let mut sink = flatten::create_output(&out)?;
            let counts = acquire::search_collect(
                &transport,
                &creds,
                &Endpoints::default(),
                &keywords,
                count,
                &mut sink,
                &StreamOptions::default(),
                &ThreadSleeper,
            )?;
            for (k, n) in counts {
                eprintln!("{k}\t{n}");
            }
        }
        Command::Hydrate {
            ids,
            out,
            missing,
            batch_size,
            net,
        } => {
            let text = fs::read_to_string(&ids).map_err(|e| Error::file(&ids, e))?;
            let ids = acquire::parse_id_list(&text);
            let (transport, creds) = connect(&net, g)?;
            let opts = HydrateOptions {
                batch_size,
                ..Default::default()
            };
            let result = acquire::hydrate(
                &transport,
                &creds,
                &Endpoints::default(),
                &ids,
                &opts,
                &ThreadSleeper,
            )?;
            let mut sink = flatten::create_output(&out)?;
            for t in &result.tweets {
                writeln!(sink, "{}", t.to_line())?;
            }
            sink.flush()?;
            if let Some(path) = missing {
                let mut text = result.missing.join("\n");
                if !text.is_empty() {
                    text.push('\n');
                }
                fs::write(&path, text).map_err(|e| Error::file(&path, e))?;
            }
            eprintln!(
                "hydrated {} tweets, {} missing",
                result.tweets.len(),
                result.missing.len()
            );
        }
        Command::Scrape {
            handle,
            from,
            to,
            tasks,
            out,
            max_pages,
            net,
        } => {
            let tasks = match (handle, tasks) {
                (Some(h), _) => vec![ScrapeTask::new(
                    &h,
                    from.expect("clap requires --from"),
                    to.expect("clap requires --to"),
                )?],
                (None, Some(path)) => {
                    let text = fs::read_to_string(&path).map_err(|e| Error::file(&path, e))?;
                    text.lines()
                        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
                        .map(str::parse)
                        .collect::<Result<Vec<ScrapeTask>>>()?
                }
                (None, None) => return Err(Error::input("give --handle or --tasks")),
            };
            let fetcher = page_fetcher(&net)?;
            let adapter = SearchTimelineAdapter::default();
            let mut sink = flatten::create_output(&out)?;
            for task in &tasks {
                let ids = acquire::scrape_user_range(fetcher.as_ref(), &adapter, task, max_pages)?;
                eprintln!("{}\t{} ids", task.handle(), ids.len());
                for id in ids {
                    writeln!(sink, "{id}")?;
                }
            }
            sink.flush()?;
        }
        Command::Flatten {
            input,
            out,
            fields,
            heavy,
            gzip,
            no_header,
        } => {
            let config = match fields {
                Some(path) => FlattenConfig::from_file(&path, !no_header)?,
                None => {
                    let mut c = FlattenConfig::default();
                    c.include_header = !no_header;
                    c
                }
            };
            let opts = FlattenOptions {
                strict: g.strict,
                memory_cap: g.memory_cap.saturating_mul(1 << 20),
            };
            let stats = if heavy {
                flatten::flatten_heavy_file(&input, gzip, &config, &opts, &out)?
            } else {
                flatten::flatten_lite_file(&input, gzip, &config, &opts, &out)?
            };
            eprintln!("rows: {}, skipped: {}", stats.rows, stats.skipped);
        }
        Command::Filter {
            input,
            terms,
            out,
            column,
            no_header,
        } => {
            let terms = TermList::from_file(&terms)?;
            let reader = flatten::open_input(&input, false)?;
            let stats =
                flatten::filter_tsv_by_terms(reader, &column, !no_header, &terms, flatten::create_output(&out)?)?;
            eprintln!("kept: {}, dropped: {}", stats.kept, stats.dropped);
        }
        Command::Dict(DictCommand::Build {
            source,
            out,
            id_column,
            term_column,
            delimiter,
            header,
        }) => {
            let opts = BuildOptions {
                id_column,
                term_column,
                delimiter: parse_delimiter(&delimiter)?,
                has_header: header,
                name: dict::name_from_path(&out),
            };
            let (d, stats) = dict::build_dictionary_file(&source, &opts)?;
            dict::save_dictionary(&d, &out)?;
            eprintln!(
                "entries: {}, rows: {}, skipped: {}, duplicates: {}",
                d.len(),
                stats.rows,
                stats.skipped,
                stats.duplicates
            );
        }
        Command::Annotate {
            input,
            dict: dict_path,
            out,
            format,
            doc_id_column,
            text_column,
            array,
            no_header,
        } => {
            let d = dict::load_dictionary(&dict_path)?;
            let opts = AnnotateOptions {
                doc_id_column,
                text_column,
                has_header: !no_header,
            };
            let n = annotate::annotate_tsv(&input, &d, &opts, &out, format, array)?;
            eprintln!("annotations: {n}");
        }
        Command::Classify(cmd) => run_classify(cmd)?,
        Command::ExampleE2e { fixture, seed, out } => {
            let spec = NetArgs {
                transport: match fixture {
                    Some(dir) => TransportSpec::Fixture(dir),
                    None => TransportSpec::Live,
                },
            };
            let (transport, creds) = connect(&spec, g)?;
            let report = pipeline::run_example(
                &transport,
                &creds,
                &Endpoints::default(),
                &ExampleConfig::new(seed),
                &out,
                &ThreadSleeper,
            )?;
            eprintln!(
                "labeled rows: {}, train: {}, test: {}, accuracy: {:.4}",
                report.labeled_rows,
                report.train_docs,
                report.test_docs,
                report.evaluation.accuracy
            );
            eprintln!("artifacts in {}", out.display());
        }
    }
    Ok(())
}

fn run_classify(cmd: ClassifyCommand) -> Result<()> {
    match cmd {
        ClassifyCommand::Train {
            input,
            seed,
            test_fraction,
            alpha,
            model,
            split_dir,
        } => {
            let corpus = read_corpus_file(&input)?;
            let (train, test) = classify::split(&corpus, test_fraction, seed)?;
            fs::create_dir_all(&split_dir).map_err(|e| Error::file(&split_dir, e))?;
            train.write_tsv(flatten::create_output(&split_dir.join("train.tsv"))?)?;
            test.write_tsv(flatten::create_output(&split_dir.join("test.tsv"))?)?;
            let bundle = ClassifierBundle::train(&train, alpha)?;
            bundle.save(&model)?;
            eprintln!(
                "trained on {} docs ({} features), held out {}",
                train.len(),
                bundle.tfidf.n_features(),
                test.len()
            );
        }
        ClassifyCommand::Eval {
            model,
            input,
            out_dir,
        } => {
            let bundle = ClassifierBundle::load(&model)?;
            let corpus = read_corpus_file(&input)?;
            let eval = bundle.evaluate(&corpus)?;
            fs::create_dir_all(&out_dir).map_err(|e| Error::file(&out_dir, e))?;
            write_file(&out_dir.join("metrics.tsv"), &eval.metrics_tsv())?;
            write_file(&out_dir.join("confusion.tsv"), &eval.matrix.to_tsv())?;
            eprint!("{}", eval.metrics_tsv());
        }
        ClassifyCommand::Plot { confusion, out } => {
            let text = fs::read_to_string(&confusion).map_err(|e| Error::file(&confusion, e))?;
            let matrix = ConfusionMatrix::parse_tsv(&text)?;
            classify::render_heatmap(&matrix, &HeatmapStyle::default(), &out)?;
        }
    }
    Ok(())
}

fn read_corpus_file(path: &Path) -> Result<classify::LabeledCorpus> {
    let file = File::open(path).map_err(|e| Error::file(path, e))?;
    classify::read_corpus(BufReader::new(file), &CorpusColumns::default())
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::file(path, e))
}

fn parse_delimiter(s: &str) -> Result<u8> {
    match s {
        "tab" | "\\t" | "\t" => Ok(b'\t'),
        "comma" => Ok(b','),
        _ if s.len() == 1 => Ok(s.as_bytes()[0]),
        _ => Err(Error::input(format!("delimiter must be one ASCII character, got {s:?}"))),
    }
}

/// Credentials from the file named by `--credentials`, then the environment.
/// Fixture runs fall back to placeholder keys when none are configured.
fn load_credentials(g: &GlobalArgs, offline: bool) -> Result<Credentials> {
    let creds = match &g.credentials {
        Some(path) => Credentials::from_file(path)?,
        None => Credentials::default(),
    }
    .with_env();
    if offline && creds.validate().is_err() {
        return Ok(Credentials::offline());
    }
    Ok(creds)
}

fn connect(net: &NetArgs, g: &GlobalArgs) -> Result<(Box<dyn Transport>, Credentials)> {
    match &net.transport {
        TransportSpec::Fixture(dir) => Ok((
            Box::new(FixtureTransport::from_dir(dir)?),
            load_credentials(g, true)?,
        )),
        TransportSpec::Live => Ok((live_transport()?, load_credentials(g, false)?)),
    }
}

fn page_fetcher(net: &NetArgs) -> Result<Box<dyn PageFetcher>> {
    match &net.transport {
        TransportSpec::Fixture(dir) => Ok(Box::new(FixtureTransport::from_dir(dir)?)),
        TransportSpec::Live => live_fetcher(),
    }
}

#[cfg(feature = "live")]
fn live_transport() -> Result<Box<dyn Transport>> {
    Ok(Box::new(acquire::HttpTransport::new()?))
}

#[cfg(feature = "live")]
fn live_fetcher() -> Result<Box<dyn PageFetcher>> {
    Ok(Box::new(acquire::HttpTransport::new()?))
}

#[cfg(not(feature = "live"))]
fn live_transport() -> Result<Box<dyn Transport>> {
    Err(Error::Transport("built without the `live` feature; use --transport fixture:<dir>".into()))
}

#[cfg(not(feature = "live"))]
fn live_fetcher() -> Result<Box<dyn PageFetcher>> {
    live_transport().map(|_| unreachable!())
}
