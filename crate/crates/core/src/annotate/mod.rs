//! Dictionary-based entity annotation over flattened tweets.

mod formats;
mod matcher;

use std::io::BufRead;
use std::path::Path;
use std::str::FromStr;

pub use formats::{
    brat_ann, AnnotationSink, BratSink, Denotation, PubAnnotationDoc, PubAnnotationSink, PubSpan,
    TsvSink, TSV_HEADER,
};
pub use matcher::{bounded, fold_char, is_word_char, select_leftmost_longest, Matcher, Span};

use crate::dict::TermDictionary;
use crate::error::{Error, Result};
use crate::flatten::create_output;
use crate::tsv::{self, ColumnRef};

/// A recognized span. Offsets count Unicode code points; `end` is exclusive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Annotation {
    pub doc_id: String,
    pub begin: usize,
    pub end: usize,
    pub surface: String,
    pub concept_ids: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedDocument {
    pub doc_id: String,
    pub text: String,
    /// Sorted by (begin, end), pairwise non-overlapping.
    pub annotations: Vec<Annotation>,
}

pub fn compile_matcher(dict: &TermDictionary) -> Result<Matcher> {
    Matcher::compile(dict)
}

pub fn annotate_text(matcher: &Matcher, doc_id: &str, text: &str) -> AnnotatedDocument {
    let chars: Vec<char> = text.chars().collect();
    let annotations = matcher
        .find(&chars)
        .into_iter()
        .map(|s| Annotation {
            doc_id: doc_id.to_string(),
            begin: s.begin,
            end: s.end,
            surface: chars[s.begin..s.end].iter().collect(),
            concept_ids: matcher.concept_ids(s.pattern).to_vec(),
        })
        .collect();
    AnnotatedDocument {
        doc_id: doc_id.to_string(),
        text: text.to_string(),
        annotations,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Tsv,
    Brat,
    PubAnnotation,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "tsv" => Ok(OutputFormat::Tsv),
            "brat" => Ok(OutputFormat::Brat),
            "pubannotation" => Ok(OutputFormat::PubAnnotation),
            other => Err(Error::input(format!(
                "unknown format {other:?} (expected tsv, brat or pubannotation)"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct AnnotateOptions {
    pub doc_id_column: ColumnRef,
    pub text_column: ColumnRef,
    pub has_header: bool,
}

impl Default for AnnotateOptions {
    fn default() -> Self {
        AnnotateOptions {
            doc_id_column: ColumnRef::Name("id_str".into()),
            text_column: ColumnRef::Name("text".into()),
            has_header: true,
        }
    }
}

/// Annotates every row of a TSV, in row order, into `sink`. Returns the
/// number of (span, concept id) records emitted.
pub fn annotate_rows<R: BufRead>(
    input: R,
    matcher: &Matcher,
    opts: &AnnotateOptions,
    sink: &mut dyn AnnotationSink,
) -> Result<u64> {
    let mut lines = input.lines();
    let mut columns = None;
    if opts.has_header {
        let header = match lines.next() {
            Some(l) => tsv::split_row(&l?),
            None => return Err(Error::input("input TSV is empty; expected a header row")),
        };
        columns = Some((
            opts.doc_id_column.resolve(Some(&header), header.len())?,
            opts.text_column.resolve(Some(&header), header.len())?,
        ));
    }
    let mut emitted = 0u64;
    for line in lines {
        let cells = tsv::split_row(&line?);
        let (id_col, text_col) = match columns {
            Some(c) => c,
            None => *columns.insert((
                opts.doc_id_column.resolve(None, cells.len())?,
                opts.text_column.resolve(None, cells.len())?,
            )),
        };
        let get = |i: usize| cells.get(i).map(String::as_str).unwrap_or("");
        let doc = annotate_text(matcher, get(id_col), get(text_col));
        emitted += doc
            .annotations
            .iter()
            .map(|a| a.concept_ids.len() as u64)
            .sum::<u64>();
        sink.write(&doc)?;
    }
    sink.finish()?;
    Ok(emitted)
}

/// File-level driver. `output` is a file for TSV and PubAnnotation and a
/// directory for brat.
pub fn annotate_tsv(
    input: &Path,
    dict: &TermDictionary,
    opts: &AnnotateOptions,
    output: &Path,
    format: OutputFormat,
    pubannotation_array: bool,
) -> Result<u64> {
    let matcher = compile_matcher(dict)?;
    let reader = crate::flatten::open_input(input, false)?;
    match format {
        OutputFormat::Tsv => {
            let mut sink = TsvSink::new(create_output(output)?);
            annotate_rows(reader, &matcher, opts, &mut sink)
        }
        OutputFormat::PubAnnotation => {
            let mut sink = PubAnnotationSink::new(create_output(output)?, pubannotation_array);
            annotate_rows(reader, &matcher, opts, &mut sink)
        }
        OutputFormat::Brat => {
            let mut sink = BratSink::new(output, matcher.entity_type())?;
            annotate_rows(reader, &matcher, opts, &mut sink)
        }
    }
}
