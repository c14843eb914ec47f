//! Annotation writers: document/span/term TSV, brat standoff and
//! PubAnnotation JSON.

use std::collections::HashSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::AnnotatedDocument;
use crate::error::{Error, Result};
use crate::tsv;

pub const TSV_HEADER: &str = "doc_id\tbegin\tend\tsurface\tconcept_id";

pub trait AnnotationSink {
    fn write(&mut self, doc: &AnnotatedDocument) -> Result<()>;

    fn finish(&mut self) -> Result<()> {
        Ok(())
    }
}

/// One line per (annotation, concept id) under [`TSV_HEADER`].
pub struct TsvSink<W: Write> {
    out: W,
    wrote_header: bool,
}

impl<W: Write> TsvSink<W> {
    pub fn new(out: W) -> Self {
        TsvSink {
            out,
            wrote_header: false,
        }
    }

    fn header(&mut self) -> Result<()> {
        if !self.wrote_header {
            writeln!(self.out, "{TSV_HEADER}")?;
            self.wrote_header = true;
        }
        Ok(())
    }
}

impl<W: Write> AnnotationSink for TsvSink<W> {
    fn write(&mut self, doc: &AnnotatedDocument) -> Result<()> {
        self.header()?;
        for a in &doc.annotations {
            for id in &a.concept_ids {
                let begin = a.begin.to_string();
                let end = a.end.to_string();
                let row = tsv::join_row([doc.doc_id.as_str(), &begin, &end, &a.surface, id]);
                writeln!(self.out, "{row}")?;
            }
        }
        Ok(())
    }

    fn finish(&mut self) -> Result<()> {
        self.header()?;
        self.out.flush()?;
        Ok(())
    }
}

/// Renders the `.ann` body for one document. Ambiguous spans get one
/// T-line per concept id.
pub fn brat_ann(doc: &AnnotatedDocument, entity_type: &str) -> String {
    let mut out = String::new();
    let mut k = 1;
    for a in &doc.annotations {
        let surface = a.surface.replace(['\n', '\r'], " ");
        for _ in &a.concept_ids {
            out.push_str(&format!(
                "T{k}\t{entity_type} {} {}\t{surface}\n",
                a.begin, a.end
            ));
            k += 1;
        }
    }
    out
}

/// Writes `<doc>.txt` and `<doc>.ann` pairs into a directory.
pub struct BratSink {
    dir: PathBuf,
    entity_type: String,
    used: HashSet<String>,
}

impl BratSink {
    pub fn new(dir: &Path, entity_type: &str) -> Result<Self> {
        fs::create_dir_all(dir).map_err(|e| Error::file(dir, e))?;
        Ok(BratSink {
            dir: dir.to_path_buf(),
            entity_type: entity_type.to_string(),
            used: HashSet::new(),
        })
    }

    /// File stem for a document id, unique within this sink.
    fn stem(&mut self, doc_id: &str) -> String {
        let mut base: String = doc_id
            .chars()
            .map(|c| {
                if c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.') {
                    c
                } else {
                    '_'
                }
            })
            .collect();
        if base.is_empty() || base.starts_with('.') {
            base.insert_str(0, "doc");
        }
        let mut stem = base.clone();
        let mut n = 2;
        while !self.used.insert(stem.clone()) {
            stem = format!("{base}-{n}");
            n += 1;
        }
        stem
    }
}

impl AnnotationSink for BratSink {
    fn write(&mut self, doc: &AnnotatedDocument) -> Result<()> {
        let stem = self.stem(&doc.doc_id);
        let txt = self.dir.join(format!("{stem}.txt"));
        fs::write(&txt, &doc.text).map_err(|e| Error::file(&txt, e))?;
        let ann = self.dir.join(format!("{stem}.ann"));
        fs::write(&ann, brat_ann(doc, &self.entity_type)).map_err(|e| Error::file(&ann, e))?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PubSpan {
    pub begin: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Denotation {
    pub id: String,
    pub span: PubSpan,
    pub obj: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PubAnnotationDoc {
    pub text: String,
    pub denotations: Vec<Denotation>,
}

impl From<&AnnotatedDocument> for PubAnnotationDoc {
    fn from(doc: &AnnotatedDocument) -> Self {
        let denotations = doc
            .annotations
            .iter()
            .flat_map(|a| a.concept_ids.iter().map(move |id| (a, id)))
            .enumerate()
            .map(|(i, (a, id))| Denotation {
                id: format!("T{}", i + 1),
                span: PubSpan {
                    begin: a.begin,
                    end: a.end,
                },
                obj: id.clone(),
            })
            .collect();
        PubAnnotationDoc {
            text: doc.text.clone(),
            denotations,
        }
    }
}

/// One object per document, either one per line or as a single array.
pub struct PubAnnotationSink<W: Write> {
    out: W,
    array: bool,
    count: usize,
}

impl<W: Write> PubAnnotationSink<W> {
    pub fn new(out: W, array: bool) -> Self {
        PubAnnotationSink {
            out,
            array,
            count: 0,
        }
    }
}

impl<W: Write> AnnotationSink for PubAnnotationSink<W> {
    fn write(&mut self, doc: &AnnotatedDocument) -> Result<()> {
        let json = serde_json::to_string(&PubAnnotationDoc::from(doc))
            .expect("serializing annotations cannot fail");
        if self.array {
            self.out
                .write_all(if self.count == 0 { b"[\n" } else { b",\n" })?;
            self.out.write_all(json.as_bytes())?;
        } else {
            writeln!(self.out, "{json}")?;
        }
        self.count += 1;
        Ok(())
    }

    fn finish(&mut self) -> Result<()> {
        if self.array {
            self.out
                .write_all(if self.count == 0 { b"[]\n" } else { b"\n]\n" })?;
        }
        self.out.flush()?;
        Ok(())
    }
}
