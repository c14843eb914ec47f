mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use smmt::dict::{build_dictionary, load_dictionary, save_dictionary, BuildOptions, DictEntry, TermDictionary};
use smmt::flatten::TermList;
use smmt::tsv::ColumnRef;

fn random_dictionary(seed: u64) -> TermDictionary {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut d = TermDictionary::new("random");
    for _ in 0..rng.gen_range(1..60) {
        let id = format!("C{:03}", rng.gen_range(0..40));
        let term = common::random_unicode(&mut rng, 12);
        if let Ok(e) = DictEntry::new(id, term) {
            d.insert(e);
        }
    }
    if d.is_empty() {
        d.insert(DictEntry::new("C0", "x").unwrap());
    }
    d
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn save_then_load_is_identity(seed in any::<u64>()) {
        let d = random_dictionary(seed);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("random.tsv");
        save_dictionary(&d, &path).unwrap();
        let loaded = load_dictionary(&path).unwrap();
        prop_assert_eq!(&loaded, &d);
        let again = dir.path().join("again.tsv");
        save_dictionary(&loaded, &again).unwrap();
        prop_assert_eq!(std::fs::read(&path).unwrap(), std::fs::read(&again).unwrap());
    }

    #[test]
    fn insertion_order_does_not_change_bytes(seed in any::<u64>()) {
        let d = random_dictionary(seed);
        let mut entries: Vec<DictEntry> = d.entries().cloned().collect();
        entries.reverse();
        let rebuilt: TermDictionary = entries.into_iter().collect();
        prop_assert_eq!(rebuilt.to_tsv(), d.to_tsv());
    }
}

const SOURCE: &str = "CUI,STR,SAB\nC1,\"Fever, high\",MTH\nC1,fever,MTH\nC1,  fever ,SNOMED\nC2,,MTH\nC3,Cough,MTH\n";

fn csv_options() -> BuildOptions {
    BuildOptions {
        id_column: ColumnRef::Name("CUI".into()),
        term_column: ColumnRef::Name("STR".into()),
        delimiter: b',',
        has_header: true,
        name: "terms".into(),
    }
}

#[test]
fn builds_are_byte_identical_and_idempotent() {
    let (a, stats) = build_dictionary(SOURCE.as_bytes(), &csv_options()).unwrap();
    let (b, _) = build_dictionary(SOURCE.as_bytes(), &csv_options()).unwrap();
    assert_eq!(a.to_tsv(), b.to_tsv());
    assert_eq!((stats.rows, stats.skipped, stats.duplicates), (5, 1, 1));
    assert_eq!(a.to_tsv(), "C1\tFever, high\nC1\tfever\nC3\tCough\n");

    // Rebuilding from a saved dictionary gives the same dictionary.
    let (c, _) = build_dictionary(a.to_tsv().as_bytes(), &BuildOptions { name: "terms".into(), ..Default::default() }).unwrap();
    assert_eq!(c, a);
}

#[test]
fn tab_sources_round_trip_escapes() {
    let mut d = TermDictionary::new("esc");
    d.insert(DictEntry::new("C1", "back\\slash").unwrap());
    d.insert(DictEntry::new("C2", r"literal \t and \n").unwrap());
    let (rebuilt, _) = build_dictionary(d.to_tsv().as_bytes(), &BuildOptions { name: "esc".into(), ..Default::default() }).unwrap();
    assert_eq!(rebuilt, d);
}

#[test]
fn named_columns_need_a_header() {
    let opts = BuildOptions { has_header: false, ..csv_options() };
    assert!(build_dictionary(SOURCE.as_bytes(), &opts).is_err());
    let opts = BuildOptions { term_column: ColumnRef::Name("NOPE".into()), ..csv_options() };
    let msg = build_dictionary(SOURCE.as_bytes(), &opts).unwrap_err().to_string();
    assert!(msg.contains("STR"), "{msg}");
}

#[test]
fn dictionary_feeds_the_term_filter() {
    let (d, _) = build_dictionary(SOURCE.as_bytes(), &csv_options()).unwrap();
    let list = TermList::from(&d);
    assert_eq!(list.entries().len(), d.len());
    assert!(list.compile().unwrap().is_match("a bad COUGH today"));
}
