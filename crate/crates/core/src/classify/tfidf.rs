use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sparse vector as (column, value) pairs sorted by column.
pub type SparseVec = Vec<(usize, f64)>;

/// Lower-cased maximal runs of alphanumeric code points.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

/// Smoothed TF-IDF: `idf(t) = ln((1 + N) / (1 + df(t))) + 1`, raw term
/// counts as tf, rows L2-normalized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TfIdfModel {
    pub vocabulary: BTreeMap<String, usize>,
    pub idf: Vec<f64>,
    pub n_docs: usize,
}

impl TfIdfModel {
    pub fn fit<S: AsRef<str>>(texts: &[S]) -> Result<Self> {
        if texts.is_empty() {
            return Err(Error::input("cannot fit TF-IDF on an empty corpus"));
        }
        let mut df: BTreeMap<String, usize> = BTreeMap::new();
        for text in texts {
            let distinct: BTreeSet<String> = tokenize(text.as_ref()).into_iter().collect();
            for t in distinct {
                *df.entry(t).or_default() += 1;
            }
        }
        let n = texts.len() as f64;
        let mut vocabulary = BTreeMap::new();
        let mut idf = Vec::with_capacity(df.len());
        for (i, (term, count)) in df.into_iter().enumerate() {
            idf.push(((1.0 + n) / (1.0 + count as f64)).ln() + 1.0);
            vocabulary.insert(term, i);
        }
        Ok(TfIdfModel {
            vocabulary,
            idf,
            n_docs: texts.len(),
        })
    }

    pub fn n_features(&self) -> usize {
        self.idf.len()
    }

    /// Unknown terms are ignored; a document with none known maps to the
    /// zero vector (empty).
    pub fn transform(&self, text: &str) -> SparseVec {
        let mut tf: BTreeMap<usize, f64> = BTreeMap::new();
        for t in tokenize(text) {
            if let Some(&col) = self.vocabulary.get(&t) {
                *tf.entry(col).or_default() += 1.0;
            }
        }
        let mut v: SparseVec = tf.into_iter().map(|(c, f)| (c, f * self.idf[c])).collect();
        let norm = v.iter().map(|(_, x)| x * x).sum::<f64>().sqrt();
        if norm > 0.0 {
            for (_, x) in &mut v {
                *x /= norm;
            }
        }
        v
    }
}
