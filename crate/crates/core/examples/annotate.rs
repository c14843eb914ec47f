//! Annotates tweets with dictionary concepts and prints the result in each
//! output format.
//!
//!     cargo run --example annotate

use smmt::annotate::{
    annotate_rows, annotate_text, compile_matcher, AnnotateOptions, AnnotationSink, BratSink,
    PubAnnotationSink, TsvSink,
};
use smmt::dict::TermDictionary;

const TWEETS: &str = "id_str\ttext
10\tHigh Fever and a sore throat since Monday
11\tthe fever-tree tonic is back in stock
12\tNo symptoms, just a feverish mood
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dict = TermDictionary::parse(
        "symptoms",
        "C0015967\tfever\nC0015967\thigh fever\nC0242429\tsore throat\nC0015672\tfatigue\n",
    )?;
    let matcher = compile_matcher(&dict)?;
    println!("{} patterns, fingerprint {}", matcher.pattern_count(), &matcher.fingerprint()[..16]);

    let doc = annotate_text(&matcher, "demo", "Fatigue, then HIGH FEVER.");
    for a in &doc.annotations {
        println!("{}..{} {:?} -> {:?}", a.begin, a.end, a.surface, a.concept_ids);
    }

    let opts = AnnotateOptions::default();
    println!("\n-- tsv");
    let mut tsv = Vec::new();
    annotate_rows(TWEETS.as_bytes(), &matcher, &opts, &mut TsvSink::new(&mut tsv))?;
    print!("{}", String::from_utf8_lossy(&tsv));

    println!("\n-- pubannotation");
    let mut json = Vec::new();
    annotate_rows(TWEETS.as_bytes(), &matcher, &opts, &mut PubAnnotationSink::new(&mut json, false))?;
    print!("{}", String::from_utf8_lossy(&json));

    println!("\n-- brat");
    let dir = tempfile::tempdir()?;
    let mut brat = BratSink::new(dir.path(), matcher.entity_type())?;
    annotate_rows(TWEETS.as_bytes(), &matcher, &opts, &mut brat as &mut dyn AnnotationSink)?;
    let mut files: Vec<_> = std::fs::read_dir(dir.path())?.map(|e| e.unwrap().path()).collect();
    files.sort();
    for path in files.iter().filter(|p| p.extension().is_some_and(|x| x == "ann")) {
        println!("{}:", path.file_name().unwrap().to_string_lossy());
        print!("{}", std::fs::read_to_string(path)?);
    }
    Ok(())
}
