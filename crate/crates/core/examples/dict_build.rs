//! Builds a two-column dictionary from a terminology export, saves it and
//! loads it back.
//!
//!     cargo run --example dict_build

use smmt::dict::{build_dictionary, load_dictionary, save_dictionary, BuildOptions};
use smmt::tsv::ColumnRef;

const EXPORT: &str = "\
code,preferred_name,source
C0015967,Fever,MTH
C0015967,  pyrexia ,MTH
C0010200,Coughing,MTH
C0010200,Coughing,SNOMED
C0242429,Sore throat,MTH
C0000000,,MTH
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let opts = BuildOptions {
        id_column: ColumnRef::Name("code".into()),
        term_column: ColumnRef::Name("preferred_name".into()),
        delimiter: b',',
        has_header: true,
        name: "symptoms".into(),
    };
    let (dict, stats) = build_dictionary(EXPORT.as_bytes(), &opts)?;
    println!(
        "{} entries from {} rows ({} skipped, {} duplicates)",
        dict.len(),
        stats.rows,
        stats.skipped,
        stats.duplicates
    );
    print!("{}", dict.to_tsv());

    let dir = tempfile::tempdir()?;
    let path = dir.path().join("symptoms.tsv");
    save_dictionary(&dict, &path)?;
    let loaded = load_dictionary(&path)?;
    println!("round trip equal: {}", loaded == dict);
    Ok(())
}
