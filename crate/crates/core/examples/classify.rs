//! Trains the TF-IDF + naive Bayes classifier on a small labeled corpus,
//! evaluates it on a held-out split and renders the confusion matrix.
//!
//!     cargo run --example classify [-- heatmap.svg]

use smmt::classify::{heatmap_svg, split, ClassifierBundle, HeatmapStyle, LabeledCorpus, LabeledDoc};

const DOCS: &[(&str, &str)] = &[
    ("weather", "heavy rain and wind tonight"),
    ("weather", "sunny skies all weekend"),
    ("weather", "snow expected on monday morning"),
    ("weather", "rain again, grab an umbrella"),
    ("weather", "heat wave warning for the weekend"),
    ("weather", "wind and snow closing the pass"),
    ("food", "best pasta recipe with garlic"),
    ("food", "fresh bread and butter for breakfast"),
    ("food", "garlic butter shrimp tonight"),
    ("food", "weekend brunch: pancakes and coffee"),
    ("food", "homemade pasta with fresh basil"),
    ("food", "coffee and bread, the perfect morning"),
];

fn main() -> smmt::Result<()> {
    let corpus = LabeledCorpus::new(
        DOCS.iter()
            .enumerate()
            .map(|(i, (label, text))| LabeledDoc {
                label: label.to_string(),
                doc_id: i.to_string(),
                text: text.to_string(),
            })
            .collect(),
    );
    let (train, test) = split(&corpus, 0.25, 7)?;
    let model = ClassifierBundle::train(&train, 1.0)?;
    println!("train {} / test {}, {} features", train.len(), test.len(), model.tfidf.n_features());

    for text in ["snow and wind", "garlic bread", "coffee on a rainy morning"] {
        println!("{text:>28} -> {}", model.predict(text));
    }

    let eval = model.evaluate(&test)?;
    print!("\n{}\n{}", eval.metrics_tsv(), eval.matrix.to_tsv());

    if let Some(path) = std::env::args().nth(1) {
        std::fs::write(&path, heatmap_svg(&eval.matrix, &HeatmapStyle::default()))?;
        println!("heat-map written to {path}");
    }
    Ok(())
}
