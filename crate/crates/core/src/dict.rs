//! Two-column term dictionaries: `concept_id<TAB>term`, no header.
//!
//! Entries are kept sorted by (concept_id, term), which makes saved files
//! byte-reproducible.

use std::collections::BTreeSet;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::tsv::{self, ColumnRef};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DictEntry {
    pub concept_id: String,
    pub term: String,
}

impl DictEntry {
    pub fn new(concept_id: impl Into<String>, term: impl Into<String>) -> Result<Self> {
        let entry = DictEntry {
            concept_id: concept_id.into(),
            term: term.into(),
        };
        if entry.concept_id.trim().is_empty() || entry.term.trim().is_empty() {
            return Err(Error::input(format!(
                "dictionary entry ({:?}, {:?}) has an empty field",
                entry.concept_id, entry.term
            )));
        }
        Ok(entry)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TermDictionary {
    pub name: String,
    entries: BTreeSet<DictEntry>,
}

impl TermDictionary {
    pub fn new(name: impl Into<String>) -> Self {
        TermDictionary {
            name: name.into(),
            entries: BTreeSet::new(),
        }
    }

    /// Returns false when the entry was already present.
    pub fn insert(&mut self, entry: DictEntry) -> bool {
        self.entries.insert(entry)
    }

    pub fn entries(&self) -> impl Iterator<Item = &DictEntry> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&tsv::join_row([&e.concept_id, &e.term]));
            out.push('\n');
        }
        out
    }

    pub fn parse(name: &str, text: &str) -> Result<Self> {
        let mut dict = TermDictionary::new(name);
        for (n, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let cells = tsv::split_row(line);
            let [id, term, ..] = cells.as_slice() else {
                return Err(Error::input(format!(
                    "dictionary line {}: expected two tab-separated cells",
                    n + 1
                )));
            };
            let entry = DictEntry::new(id.clone(), term.clone())
                .map_err(|e| Error::input(format!("dictionary line {}: {e}", n + 1)))?;
            dict.insert(entry);
        }
        Ok(dict)
    }
}

impl FromIterator<DictEntry> for TermDictionary {
    fn from_iter<I: IntoIterator<Item = DictEntry>>(iter: I) -> Self {
        TermDictionary {
            name: String::new(),
            entries: iter.into_iter().collect(),
        }
    }
}

impl From<&TermDictionary> for crate::flatten::TermList {
    fn from(dict: &TermDictionary) -> Self {
        crate::flatten::TermList::new(
            dict.entries()
                .map(|e| (e.concept_id.clone(), e.term.clone()))
                .collect(),
        )
        .expect("dictionary entries are non-empty")
    }
}

/// Name label derived from a file name, e.g. `rxnorm.tsv` -> `rxnorm`.
pub fn name_from_path(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

pub fn load_dictionary(path: &Path) -> Result<TermDictionary> {
    let text = fs::read_to_string(path).map_err(|e| Error::file(path, e))?;
    TermDictionary::parse(&name_from_path(path), &text)
        .map_err(|e| Error::input(format!("{}: {e}", path.display())))
}

pub fn save_dictionary(dict: &TermDictionary, path: &Path) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| Error::file(path, e))?;
    let mut out = BufWriter::new(file);
    out.write_all(dict.to_tsv().as_bytes())?;
    out.flush()?;
    Ok(())
}

#[derive(Debug, Clone)]
pub struct BuildOptions {
    pub id_column: ColumnRef,
    pub term_column: ColumnRef,
    pub delimiter: u8,
    /// First row names the columns. Required when either column is a name.
    pub has_header: bool,
    pub name: String,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            id_column: ColumnRef::Index(0),
            term_column: ColumnRef::Index(1),
            delimiter: b'\t',
            has_header: false,
            name: String::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildStats {
    pub rows: u64,
    pub skipped: u64,
    pub duplicates: u64,
}

/// Collapses whitespace runs to single spaces and trims. Case is kept.
pub fn normalize_term(term: &str) -> String {
    term.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Projects two columns of a delimited terminology export into a dictionary.
///
/// Tab-delimited sources are read with the toolkit's TSV escaping, so a
/// saved dictionary rebuilds to itself. Other delimiters go through a CSV
/// reader with quote handling.
pub fn build_dictionary(source: &[u8], opts: &BuildOptions) -> Result<(TermDictionary, BuildStats)> {
    let needs_header = matches!(opts.id_column, ColumnRef::Name(_))
        || matches!(opts.term_column, ColumnRef::Name(_));
    if needs_header && !opts.has_header {
        return Err(Error::input("columns given by name need a header row"));
    }
    let source = source.strip_prefix(b"\xEF\xBB\xBF").unwrap_or(source);
    let rows: Box<dyn Iterator<Item = Result<Vec<String>>>> = if opts.delimiter == b'\t' {
        let text = std::str::from_utf8(source)
            .map_err(|e| Error::input(format!("source is not UTF-8: {e}")))?;
        Box::new(
            text.lines()
                .filter(|l| !l.trim().is_empty())
                .map(|l| Ok(tsv::split_row(l))),
        )
    } else {
        let reader = csv::ReaderBuilder::new()
            .delimiter(opts.delimiter)
            .has_headers(false)
            .flexible(true)
            .from_reader(source);
        Box::new(reader.into_records().map(|r| {
            r.map(|rec| rec.iter().map(str::to_string).collect())
                .map_err(|e| Error::input(format!("source row: {e}")))
        }))
    };

    let mut dict = TermDictionary::new(opts.name.clone());
    let mut stats = BuildStats::default();
    let mut columns = None;
    let mut rows = rows.peekable();

    if opts.has_header {
        let header = rows
            .next()
            .transpose()?
            .ok_or_else(|| Error::input("source is empty"))?;
        columns = Some((
            opts.id_column.resolve(Some(&header), header.len())?,
            opts.term_column.resolve(Some(&header), header.len())?,
        ));
    }

    for row in rows {
        let row = row?;
        let (id_col, term_col) = match columns {
            Some(c) => c,
            None => *columns.insert((
                opts.id_column.resolve(None, row.len())?,
                opts.term_column.resolve(None, row.len())?,
            )),
        };
        stats.rows += 1;
        let id = row.get(id_col).map(|s| s.trim()).unwrap_or("");
        let term = normalize_term(row.get(term_col).map(String::as_str).unwrap_or(""));
        if id.is_empty() || term.is_empty() {
            stats.skipped += 1;
            continue;
        }
        if !dict.insert(DictEntry {
            concept_id: id.to_string(),
            term,
        }) {
            stats.duplicates += 1;
        }
    }

    if dict.is_empty() {
        return Err(Error::input("no usable (id, term) rows in source"));
    }
    Ok((dict, stats))
}

pub fn build_dictionary_file(path: &Path, opts: &BuildOptions) -> Result<(TermDictionary, BuildStats)> {
    let data = fs::read(path).map_err(|e| Error::file(path, e))?;
    build_dictionary(&data, opts)
}
