use std::fs;
use std::io::{BufRead, Write};
use std::path::Path;

use regex::{Regex, RegexBuilder};

use crate::error::{Error, Result};
use crate::tsv::{self, ColumnRef};

/// Terms to filter on, each with an identifier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermList {
    entries: Vec<(String, String)>,
}

impl TermList {
    pub fn new(entries: Vec<(String, String)>) -> Result<Self> {
        for (id, term) in &entries {
            if id.trim().is_empty() || term.trim().is_empty() {
                return Err(Error::input(format!(
                    "term list entry ({id:?}, {term:?}) has an empty field"
                )));
            }
        }
        Ok(TermList { entries })
    }

    /// Reads `id<TAB>term` lines; a line with a single cell uses the term
    /// as its own id. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (n, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let cells = tsv::split_row(line);
            let entry = match cells.as_slice() {
                [term] => (term.clone(), term.clone()),
                [id, term, ..] => (id.clone(), term.clone()),
                [] => unreachable!("split always yields a cell"),
            };
            if entry.0.trim().is_empty() || entry.1.trim().is_empty() {
                return Err(Error::input(format!("term list line {}: empty field", n + 1)));
            }
            entries.push(entry);
        }
        Ok(TermList { entries })
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::file(path, e))?;
        Self::parse(&text)
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// One regex testing whether any term occurs, case-insensitively, with
    /// a non-alphanumeric character or the string edge on both sides.
    /// Inside multiword terms any whitespace run matches.
    pub fn compile(&self) -> Result<Regex> {
        if self.entries.is_empty() {
            return Err(Error::input("term list is empty; refusing to drop every row"));
        }
        let mut alts: Vec<String> = self
            .entries
            .iter()
            .map(|(_, term)| {
                term.split_whitespace()
                    .map(regex::escape)
                    .collect::<Vec<_>>()
                    .join(r"\s+")
            })
            .collect();
        alts.sort();
        alts.dedup();
        let pattern = format!(
            r"(?i)(?:^|[^\p{{Alphabetic}}\p{{N}}])(?:{})(?:$|[^\p{{Alphabetic}}\p{{N}}])",
            alts.join("|")
        );
        RegexBuilder::new(&pattern)
            .size_limit(1 << 30)
            .dfa_size_limit(1 << 28)
            .build()
            .map_err(|e| Error::input(format!("term list too large to compile: {e}")))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FilterStats {
    pub kept: u64,
    pub dropped: u64,
}

/// Copies the header and every row whose text cell mentions at least one
/// term. Kept rows are written byte-for-byte as read.
pub fn filter_tsv_by_terms<R: BufRead, W: Write>(
    mut input: R,
    text_column: &ColumnRef,
    has_header: bool,
    terms: &TermList,
    mut out: W,
) -> Result<FilterStats> {
    let matcher = terms.compile()?;
    let mut stats = FilterStats::default();
    let mut line = String::new();
    let mut column = None;

    if has_header {
        if input.read_line(&mut line)? == 0 {
            return Err(Error::input("input TSV is empty; expected a header row"));
        }
        let header = tsv::split_row(line.trim_end_matches('\n'));
        column = Some(text_column.resolve(Some(&header), header.len())?);
        write_line(&mut out, &line)?;
    }

    loop {
        line.clear();
        if input.read_line(&mut line)? == 0 {
            break;
        }
        let content = line.trim_end_matches('\n');
        let cells = tsv::split_row(content);
        let col = match column {
            Some(c) => c,
            None => *column.insert(text_column.resolve(None, cells.len())?),
        };
        let text = cells.get(col).map(String::as_str).unwrap_or("");
        if matcher.is_match(text) {
            write_line(&mut out, &line)?;
            stats.kept += 1;
        } else {
            stats.dropped += 1;
        }
    }
    out.flush()?;
    Ok(stats)
}

fn write_line<W: Write>(out: &mut W, line: &str) -> Result<()> {
    out.write_all(line.as_bytes())?;
    if !line.ends_with('\n') {
        out.write_all(b"\n")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn terms(list: &[&str]) -> TermList {
        TermList::new(
            list.iter()
                .enumerate()
                .map(|(i, t)| (format!("C{i}"), t.to_string()))
                .collect(),
        )
        .unwrap()
    }

    fn run(tsv_in: &str, list: &[&str]) -> (FilterStats, String) {
        let mut out = Vec::new();
        let stats = filter_tsv_by_terms(
            tsv_in.as_bytes(),
            &ColumnRef::Name("text".into()),
            true,
            &terms(list),
            &mut out,
        )
        .unwrap();
        (stats, String::from_utf8(out).unwrap())
    }

    #[test]
    fn keeps_rows_mentioning_a_term() {
        let (stats, out) = run("id\ttext\n1\ttook aspirin\n2\ttook naproxen\n", &["aspirin"]);
        assert_eq!(stats, FilterStats { kept: 1, dropped: 1 });
        assert_eq!(out, "id\ttext\n1\ttook aspirin\n");
    }

    #[test]
    fn word_boundaries_and_case() {
        let (stats, _) = run("id\ttext\n1\tinfluenza season\n2\tFLU shot\n3\tflu.\n", &["flu"]);
        assert_eq!(stats, FilterStats { kept: 2, dropped: 1 });
    }

    #[test]
    fn multiword_terms_span_whitespace_runs() {
        let (stats, _) = run(
            "id\ttext\n1\theart  attack today\n2\theart\\tattack\n3\theartattack\n",
            &["heart attack"],
        );
        assert_eq!(stats, FilterStats { kept: 2, dropped: 1 });
    }

    #[test]
    fn empty_text_cells_never_match() {
        let (stats, out) = run("id\ttext\n1\t\n2\n", &["a"]);
        assert_eq!(stats, FilterStats { kept: 0, dropped: 2 });
        assert_eq!(out, "id\ttext\n");
    }

    #[test]
    fn errors() {
        let empty = TermList::new(vec![]).unwrap();
        let res = filter_tsv_by_terms(
            "id\ttext\n".as_bytes(),
            &ColumnRef::Name("text".into()),
            true,
            &empty,
            Vec::new(),
        );
        assert!(matches!(res, Err(Error::Input(_))));

        let res = filter_tsv_by_terms(
            "id\tbody\n1\tx\n".as_bytes(),
            &ColumnRef::Name("text".into()),
            true,
            &terms(&["x"]),
            Vec::new(),
        );
        let msg = res.unwrap_err().to_string();
        assert!(msg.contains("0:id, 1:body"), "{msg}");
    }

    #[test]
    fn regex_metacharacters_are_literal() {
        let (stats, _) = run("id\ttext\n1\tc++ rocks\n2\tcxx\n", &["c++"]);
        assert_eq!(stats.kept, 1);
    }

    #[test]
    fn parses_one_and_two_column_lists() {
        let list = TermList::parse("# terms\nC1\taspirin\nflu\n\n").unwrap();
        assert_eq!(
            list.entries(),
            [("C1".into(), "aspirin".into()), ("flu".into(), "flu".into())]
        );
    }
}
