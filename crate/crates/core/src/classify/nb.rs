use serde::{Deserialize, Serialize};

use super::tfidf::SparseVec;
use crate::error::{Error, Result};

/// Multinomial Naive Bayes with additive smoothing.
///
/// `feature_log_prob[c][t] = ln((S_ct + alpha) / (S_c + alpha * |V|))`, where
/// `S_ct` sums feature values of term `t` over class `c` (fractional values
/// are fine) and `S_c` sums `S_ct` over terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NbModel {
    pub labels: Vec<String>,
    pub class_log_prior: Vec<f64>,
    pub feature_log_prob: Vec<Vec<f64>>,
    pub alpha: f64,
}

/// Fits the model. `label_order` fixes class order (and tie-breaking);
/// every entry of `labels` must appear in it.
pub fn train_nb(
    features: &[SparseVec],
    labels: &[String],
    label_order: &[String],
    n_features: usize,
    alpha: f64,
) -> Result<NbModel> {
    if features.len() != labels.len() {
        return Err(Error::input(format!(
            "{} feature vectors but {} labels",
            features.len(),
            labels.len()
        )));
    }
    if alpha.is_nan() || alpha <= 0.0 {
        return Err(Error::input("smoothing alpha must be positive"));
    }
    let k = label_order.len();
    let mut doc_counts = vec![0usize; k];
    let mut sums = vec![vec![0.0f64; n_features]; k];
    for (x, label) in features.iter().zip(labels) {
        let c = label_order
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::input(format!("label {label:?} not in label set")))?;
        doc_counts[c] += 1;
        for &(t, v) in x {
            if t >= n_features {
                return Err(Error::input(format!("feature index {t} out of range")));
            }
            sums[c][t] += v;
        }
    }
    let present = doc_counts.iter().filter(|&&n| n > 0).count();
    if present < 2 {
        return Err(Error::input("training needs at least two distinct labels"));
    }

    let n = labels.len() as f64;
    let class_log_prior = doc_counts
        .iter()
        .map(|&nc| (nc as f64 / n).ln())
        .collect();
    let feature_log_prob = sums
        .into_iter()
        .map(|row| {
            let total: f64 = row.iter().sum::<f64>() + alpha * n_features as f64;
            row.into_iter().map(|s| ((s + alpha) / total).ln()).collect()
        })
        .collect();
    Ok(NbModel {
        labels: label_order.to_vec(),
        class_log_prior,
        feature_log_prob,
        alpha,
    })
}

impl NbModel {
    /// Joint log-likelihood per class.
    pub fn scores(&self, x: &SparseVec) -> Vec<f64> {
        self.class_log_prior
            .iter()
            .zip(&self.feature_log_prob)
            .map(|(prior, flp)| prior + x.iter().map(|&(t, v)| v * flp[t]).sum::<f64>())
            .collect()
    }

    /// Highest-scoring class; ties go to the earlier label.
    pub fn predict_index(&self, x: &SparseVec) -> usize {
        let scores = self.scores(x);
        let mut best = 0;
        for (i, &s) in scores.iter().enumerate().skip(1) {
            if s > scores[best] {
                best = i;
            }
        }
        best
    }

    pub fn predict(&self, x: &SparseVec) -> &str {
        &self.labels[self.predict_index(x)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn hand_computed_example() {
        // vocabulary x=0, y=1, z=2; class A totals {x:2, y:1} over two docs
        let features = vec![vec![(0, 1.0), (1, 1.0)], vec![(0, 1.0)], vec![(2, 1.0)]];
        let m = train_nb(&features, &labels(&["A", "A", "B"]), &labels(&["A", "B"]), 3, 1.0).unwrap();
        let s = m.scores(&vec![(0, 1.0)]);
        // A: (2/3)(3/6) = 1/3; B: (1/3)(1/4) = 1/12
        assert!((s[0].exp() - 1.0 / 3.0).abs() < 1e-12);
        assert!((s[1].exp() - 1.0 / 12.0).abs() < 1e-12);
        assert_eq!(m.predict(&vec![(0, 1.0)]), "A");
    }

    #[test]
    fn normalization_invariants() {
        let features = vec![vec![(0, 0.3), (2, 0.7)], vec![(1, 1.0)], vec![(0, 0.5)]];
        let m = train_nb(&features, &labels(&["a", "b", "a"]), &labels(&["a", "b"]), 3, 0.5).unwrap();
        let prior: f64 = m.class_log_prior.iter().map(|l| l.exp()).sum();
        assert!((prior - 1.0).abs() < 1e-9);
        for row in &m.feature_log_prob {
            assert!((row.iter().map(|l| l.exp()).sum::<f64>() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn ties_go_to_first_label() {
        let features = vec![vec![(0, 1.0)], vec![(0, 1.0)]];
        let m = train_nb(&features, &labels(&["b", "a"]), &labels(&["a", "b"]), 1, 1.0).unwrap();
        assert_eq!(m.predict(&vec![(0, 1.0)]), "a");
        assert_eq!(m.predict(&vec![]), "a");
    }

    #[test]
    fn rejects_single_label_and_bad_alpha() {
        let f = vec![vec![(0, 1.0)], vec![(0, 1.0)]];
        assert!(train_nb(&f, &labels(&["a", "a"]), &labels(&["a", "b"]), 1, 1.0).is_err());
        assert!(train_nb(&f, &labels(&["a", "b"]), &labels(&["a", "b"]), 1, 0.0).is_err());
    }
}
