use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Rows are true labels, columns predicted labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    pub labels: Vec<String>,
    pub counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn max_count(&self) -> u64 {
        self.counts.iter().flatten().copied().max().unwrap_or(0)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("true/predicted");
        for l in &self.labels {
            out.push('\t');
            out.push_str(&crate::tsv::escape(l));
        }
        out.push('\n');
        for (l, row) in self.labels.iter().zip(&self.counts) {
            out.push_str(&crate::tsv::escape(l));
            for c in row {
                let _ = write!(out, "\t{c}");
            }
            out.push('\n');
        }
        out
    }

    pub fn parse_tsv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.is_empty());
        let header = crate::tsv::split_row(lines.next().ok_or_else(|| Error::input("empty confusion matrix"))?);
        let labels: Vec<String> = header.into_iter().skip(1).collect();
        let mut counts = Vec::with_capacity(labels.len());
        for (i, line) in lines.enumerate() {
            let cells = crate::tsv::split_row(line);
            if cells.len() != labels.len() + 1 || labels.get(i) != Some(&cells[0]) {
                return Err(Error::input(format!("confusion matrix row {} is malformed", i + 1)));
            }
            counts.push(
                cells[1..]
                    .iter()
                    .map(|c| c.parse().map_err(|_| Error::input(format!("bad count {c:?}"))))
                    .collect::<Result<Vec<u64>>>()?,
            );
        }
        if counts.len() != labels.len() || labels.is_empty() {
            return Err(Error::input("confusion matrix is not square"));
        }
        Ok(ConfusionMatrix { labels, counts })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabelMetrics {
    pub label: String,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub matrix: ConfusionMatrix,
    pub per_label: Vec<LabelMetrics>,
    pub accuracy: f64,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn evaluate<S: AsRef<str>>(y_true: &[S], y_pred: &[S], labels: &[String]) -> Result<Evaluation> {
    if y_true.len() != y_pred.len() {
        return Err(Error::input(format!(
            "{} true labels but {} predictions",
            y_true.len(),
            y_pred.len()
        )));
    }
    if y_true.is_empty() {
        return Err(Error::input("nothing to evaluate"));
    }
    let index = |l: &str| {
        labels
            .iter()
            .position(|x| x == l)
            .ok_or_else(|| Error::input(format!("label {l:?} not in label set")))
    };
    let k = labels.len();
    let mut counts = vec![vec![0u64; k]; k];
    for (t, p) in y_true.iter().zip(y_pred) {
        counts[index(t.as_ref())?][index(p.as_ref())?] += 1;
    }
    let per_label = (0..k)
        .map(|i| {
            let tp = counts[i][i];
            let row: u64 = counts[i].iter().sum();
            let col: u64 = counts.iter().map(|r| r[i]).sum();
            let precision = ratio(tp, col);
            let recall = ratio(tp, row);
            let f1 = if precision + recall == 0.0 {
                0.0
            } else {
                2.0 * precision * recall / (precision + recall)
            };
            LabelMetrics {
                label: labels[i].clone(),
                precision,
                recall,
                f1,
                support: row,
            }
        })
        .collect();
    let correct: u64 = (0..k).map(|i| counts[i][i]).sum();
    Ok(Evaluation {
        accuracy: ratio(correct, y_true.len() as u64),
        matrix: ConfusionMatrix {
            labels: labels.to_vec(),
            counts,
        },
        per_label,
    })
}

impl Evaluation {
    /// `label precision recall f1` rows, then an `accuracy` line. Six
    /// decimals, so equal runs give equal bytes.
    pub fn metrics_tsv(&self) -> String {
        let mut out = String::from("label\tprecision\trecall\tf1\n");
        for m in &self.per_label {
            let _ = writeln!(
                out,
                "{}\t{:.6}\t{:.6}\t{:.6}",
                crate::tsv::escape(&m.label),
                m.precision,
                m.recall,
                m.f1
            );
        }
        let _ = writeln!(out, "accuracy\t{:.6}", self.accuracy);
        out
    }
}
