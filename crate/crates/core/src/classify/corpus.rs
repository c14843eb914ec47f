use std::collections::BTreeSet;
use std::io::{BufRead, Write};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::tsv::{self, ColumnRef};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledDoc {
    pub doc_id: String,
    pub text: String,
    pub label: String,
}

/// Documents plus their distinct labels in sorted order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LabeledCorpus {
    pub docs: Vec<LabeledDoc>,
    pub label_set: Vec<String>,
}

impl LabeledCorpus {
    pub fn new(docs: Vec<LabeledDoc>) -> Self {
        let label_set = docs
            .iter()
            .map(|d| d.label.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        LabeledCorpus { docs, label_set }
    }

    fn with_labels(docs: Vec<LabeledDoc>, label_set: &[String]) -> Self {
        LabeledCorpus {
            docs,
            label_set: label_set.to_vec(),
        }
    }

    pub fn texts(&self) -> Vec<&str> {
        self.docs.iter().map(|d| d.text.as_str()).collect()
    }

    pub fn labels(&self) -> Vec<String> {
        self.docs.iter().map(|d| d.label.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }

    /// Writes `label<TAB>doc_id<TAB>text` with a header row.
    pub fn write_tsv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "label\tdoc_id\ttext")?;
        for d in &self.docs {
            writeln!(out, "{}", tsv::join_row([&d.label, &d.doc_id, &d.text]))?;
        }
        out.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct CorpusColumns {
    pub label: ColumnRef,
    pub doc_id: ColumnRef,
    pub text: ColumnRef,
    pub has_header: bool,
}

impl Default for CorpusColumns {
    fn default() -> Self {
        CorpusColumns {
            label: ColumnRef::Index(0),
            doc_id: ColumnRef::Index(1),
            text: ColumnRef::Index(2),
            has_header: true,
        }
    }
}

/// Reads a labeled TSV. Rows with an empty label are skipped.
pub fn read_corpus<R: BufRead>(input: R, cols: &CorpusColumns) -> Result<LabeledCorpus> {
    let mut lines = input.lines();
    let mut resolved = None;
    if cols.has_header {
        let header = match lines.next() {
            Some(l) => tsv::split_row(&l?),
            None => return Err(Error::input("corpus TSV is empty")),
        };
        resolved = Some(resolve(cols, Some(&header), header.len())?);
    }
    let mut docs = Vec::new();
    for line in lines {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let cells = tsv::split_row(&line);
        let (l, d, t) = match resolved {
            Some(r) => r,
            None => *resolved.insert(resolve(cols, None, cells.len())?),
        };
        let get = |i: usize| cells.get(i).cloned().unwrap_or_default();
        let label = get(l);
        if label.is_empty() {
            continue;
        }
        docs.push(LabeledDoc {
            doc_id: get(d),
            text: get(t),
            label,
        });
    }
    Ok(LabeledCorpus::new(docs))
}

fn resolve(cols: &CorpusColumns, header: Option<&[String]>, width: usize) -> Result<(usize, usize, usize)> {
    Ok((
        cols.label.resolve(header, width)?,
        cols.doc_id.resolve(header, width)?,
        cols.text.resolve(header, width)?,
    ))
}

/// Stratified train/test split. Per label, `round(test_fraction * n)` docs
/// (at least one, leaving at least one for training) go to the test side.
/// Both sides keep the corpus order.
pub fn split(
    corpus: &LabeledCorpus,
    test_fraction: f64,
    seed: u64,
) -> Result<(LabeledCorpus, LabeledCorpus)> {
    if test_fraction.is_nan() || test_fraction <= 0.0 || test_fraction >= 1.0 {
        return Err(Error::input(format!(
            "test fraction must lie strictly between 0 and 1, got {test_fraction}"
        )));
    }
    if corpus.label_set.len() < 2 {
        return Err(Error::input("a split needs at least two labels"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut in_test = vec![false; corpus.docs.len()];
    for label in &corpus.label_set {
        let mut idx: Vec<usize> = corpus
            .docs
            .iter()
            .enumerate()
            .filter(|(_, d)| &d.label == label)
            .map(|(i, _)| i)
            .collect();
        let n = idx.len();
        if n < 2 {
            return Err(Error::input(format!(
                "label {label:?} has {n} document(s); at least 2 are needed to split"
            )));
        }
        let k = ((test_fraction * n as f64).round() as usize).clamp(1, n - 1);
        idx.shuffle(&mut rng);
        for &i in &idx[..k] {
            in_test[i] = true;
        }
    }
    let (test, train): (Vec<_>, Vec<_>) = corpus
        .docs
        .iter()
        .cloned()
        .zip(in_test)
        .partition(|(_, t)| *t);
    let strip = |v: Vec<(LabeledDoc, bool)>| v.into_iter().map(|(d, _)| d).collect();
    Ok((
        LabeledCorpus::with_labels(strip(train), &corpus.label_set),
        LabeledCorpus::with_labels(strip(test), &corpus.label_set),
    ))
}
