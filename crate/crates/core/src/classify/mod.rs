//! Keyword-label tweet classification: TF-IDF features, multinomial Naive
//! Bayes, stratified splitting, metrics and a confusion-matrix heat-map.

mod corpus;
mod heatmap;
mod metrics;
mod nb;
mod tfidf;

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

pub use corpus::{read_corpus, split, CorpusColumns, LabeledCorpus, LabeledDoc};
pub use heatmap::{heatmap_svg, render_heatmap, HeatmapStyle};
pub use metrics::{evaluate, ConfusionMatrix, Evaluation, LabelMetrics};
pub use nb::{train_nb, NbModel};
pub use tfidf::{tokenize, SparseVec, TfIdfModel};

use crate::error::{Error, Result};

pub const DEFAULT_TEST_FRACTION: f64 = 0.2;
pub const DEFAULT_ALPHA: f64 = 1.0;

/// Fitted vectorizer and classifier, saved together as JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierBundle {
    pub tfidf: TfIdfModel,
    pub nb: NbModel,
}

impl ClassifierBundle {
    /// TF-IDF weights feed the multinomial model directly.
    pub fn train(corpus: &LabeledCorpus, alpha: f64) -> Result<Self> {
        let tfidf = TfIdfModel::fit(&corpus.texts())?;
        let features: Vec<SparseVec> = corpus.docs.iter().map(|d| tfidf.transform(&d.text)).collect();
        let nb = train_nb(
            &features,
            &corpus.labels(),
            &corpus.label_set,
            tfidf.n_features(),
            alpha,
        )?;
        Ok(ClassifierBundle { tfidf, nb })
    }

    pub fn predict(&self, text: &str) -> &str {
        self.nb.predict(&self.tfidf.transform(text))
    }

    pub fn evaluate(&self, test: &LabeledCorpus) -> Result<Evaluation> {
        let predicted: Vec<String> = test.docs.iter().map(|d| self.predict(&d.text).to_string()).collect();
        evaluate(&test.labels(), &predicted, &self.nb.labels)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let json = serde_json::to_string(self).expect("serializing a model cannot fail");
        fs::write(path, json).map_err(|e| Error::file(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::file(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::input(format!("{}: {e}", path.display())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundle_round_trip_and_predict() {
        let docs = [
            ("cricket", "great cricket match today"),
            ("cricket", "cricket world cup final"),
            ("flu", "flu season is here"),
            ("flu", "got my flu shot"),
        ]
        .iter()
        .enumerate()
        .map(|(i, (l, t))| LabeledDoc {
            doc_id: i.to_string(),
            text: t.to_string(),
            label: l.to_string(),
        })
        .collect();
        let corpus = LabeledCorpus::new(docs);
        let bundle = ClassifierBundle::train(&corpus, DEFAULT_ALPHA).unwrap();
        assert_eq!(bundle.predict("cricket match"), "cricket");
        assert_eq!(bundle.predict("flu shot"), "flu");

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.json");
        bundle.save(&path).unwrap();
        assert_eq!(ClassifierBundle::load(&path).unwrap(), bundle);
    }
}
