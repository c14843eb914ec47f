//! Generators and reference implementations shared by the integration
//! tests and the acceptance runner. Nothing here calls into the crate's
//! matching, escaping or classification code.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::io::{self, Read};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::{json, Value};

// ---------------------------------------------------------------- corpora

const WORDS: &[&str] = &[
    "hello", "world", "tab\there", "new\nline", "back\\slash", "crlf\r\n", "😷", "🏏🇺🇸",
    "𝔘𝔫𝔦𝔠𝔬𝔡𝔢", "çà et là", "中文", "\u{0}", "\"quoted\"", " ", "",
];

pub const FIELD_POOL: &[&str] = &[
    "id_str",
    "text",
    "user.screen_name",
    "user.location.city",
    "entities.hashtags",
    "retweet_count",
    "flag",
    "nothing",
    "deep.a.b.c.d",
];

fn random_text<R: Rng>(rng: &mut R) -> String {
    (0..rng.gen_range(0..6))
        .map(|_| *WORDS.choose(rng).unwrap())
        .collect::<Vec<_>>()
        .join(" ")
}

fn random_scalar<R: Rng>(rng: &mut R) -> Value {
    match rng.gen_range(0..6) {
        0 => Value::Null,
        1 => json!(rng.gen_bool(0.5)),
        2 => json!(rng.gen_range(-1000i64..100000)),
        3 => json!(rng.gen_range(-1.0f64..1.0)),
        _ => json!(random_text(rng)),
    }
}

/// One tweet-shaped object with fields present, absent or oddly typed at
/// random.
pub fn random_record<R: Rng>(rng: &mut R, id: u64) -> Value {
    let mut obj = serde_json::Map::new();
    if rng.gen_bool(0.9) {
        obj.insert("id_str".into(), json!(id.to_string()));
    }
    obj.insert("id".into(), json!(id));
    if rng.gen_bool(0.9) {
        obj.insert("text".into(), json!(random_text(rng)));
    }
    if rng.gen_bool(0.7) {
        let mut user = json!({ "screen_name": random_text(rng) });
        if rng.gen_bool(0.5) {
            user["location"] = json!({ "city": random_scalar(rng) });
        } else if rng.gen_bool(0.3) {
            user["location"] = random_scalar(rng);
        }
        obj.insert("user".into(), user);
    }
    if rng.gen_bool(0.5) {
        let tags: Vec<Value> = (0..rng.gen_range(0..3))
            .map(|_| json!({ "text": random_text(rng) }))
            .collect();
        obj.insert("entities".into(), json!({ "hashtags": tags }));
    }
    if rng.gen_bool(0.5) {
        obj.insert("retweet_count".into(), random_scalar(rng));
    }
    if rng.gen_bool(0.3) {
        obj.insert("flag".into(), random_scalar(rng));
    }
    if rng.gen_bool(0.2) {
        obj.insert("deep".into(), json!({ "a": { "b": { "c": { "d": random_scalar(rng) } } } }));
    }
    Value::Object(obj)
}

fn malformed_line<R: Rng>(rng: &mut R) -> Vec<u8> {
    match rng.gen_range(0..6) {
        0 => b"{\"id_str\": \"1\", \"text\": ".to_vec(),
        1 => b"not json".to_vec(),
        2 => b"[1, 2, 3]".to_vec(),
        3 => b"\"just a string\"".to_vec(),
        4 => vec![b'{', 0xff, 0xfe, b'}'],
        _ => b"{\"a\":1} trailing".to_vec(),
    }
}

/// A generated JSONL input. `kind` selects a few fixed edge cases before
/// falling back to random content.
pub fn random_corpus<R: Rng>(rng: &mut R, kind: usize) -> Vec<u8> {
    match kind {
        0 => return Vec::new(),
        1 => return b"\n\n\r\n".to_vec(),
        2 => return b"\xEF\xBB\xBF{\"id_str\":\"1\",\"text\":\"bom\"}".to_vec(),
        3 => return b"{\"id_str\":\"1\",\"text\":\"no newline at end\"}".to_vec(),
        _ => {}
    }
    let mut out = Vec::new();
    if rng.gen_bool(0.2) {
        out.extend_from_slice(b"\xEF\xBB\xBF");
    }
    let n = rng.gen_range(0..60);
    for i in 0..n {
        match rng.gen_range(0..20) {
            0 => out.extend(malformed_line(rng)),
            1 => {}
            _ => out.extend(serde_json::to_vec(&random_record(rng, i as u64 + 1)).unwrap()),
        }
        if i + 1 < n || rng.gen_bool(0.7) {
            out.extend_from_slice(if rng.gen_bool(0.2) { b"\r\n" } else { b"\n" });
        }
    }
    out
}

pub fn random_fields<R: Rng>(rng: &mut R) -> Vec<&'static str> {
    let mut fields: Vec<&str> = FIELD_POOL
        .iter()
        .copied()
        .filter(|_| rng.gen_bool(0.5))
        .collect();
    if fields.is_empty() {
        fields.push("text");
    }
    fields.shuffle(rng);
    fields
}

/// Produces `count` JSONL records on the fly, so arbitrarily large inputs
/// need no buffer.
pub struct RecordStream {
    next: u64,
    count: u64,
    buf: Vec<u8>,
    pos: usize,
}

impl RecordStream {
    pub fn new(count: u64) -> Self {
        RecordStream {
            next: 0,
            count,
            buf: Vec::new(),
            pos: 0,
        }
    }
}

impl Read for RecordStream {
    fn read(&mut self, out: &mut [u8]) -> io::Result<usize> {
        if self.pos == self.buf.len() {
            if self.next == self.count {
                return Ok(0);
            }
            self.buf.clear();
            self.pos = 0;
            let id = 1_200_000_000_000_000_000 + self.next;
            self.buf.extend_from_slice(
                format!(
                    "{{\"id\":{id},\"id_str\":\"{id}\",\"text\":\"record {} with emoji 😷 and a\\ttab\",\"user\":{{\"screen_name\":\"u{}\",\"followers_count\":{}}},\"entities\":{{\"hashtags\":[{{\"text\":\"h{}\"}}]}}}}\n",
                    self.next,
                    self.next % 977,
                    self.next % 10007,
                    self.next % 13
                )
                .as_bytes(),
            );
            self.next += 1;
        }
        let n = out.len().min(self.buf.len() - self.pos);
        out[..n].copy_from_slice(&self.buf[self.pos..self.pos + n]);
        self.pos += n;
        Ok(n)
    }
}

// ---------------------------------------------------------------- escaping

pub fn reference_escape(s: &str) -> String {
    let mut out = String::new();
    for c in s.chars() {
        match c {
            '\\' => out += "\\\\",
            '\t' => out += "\\t",
            '\n' => out += "\\n",
            '\r' => out += "\\r",
            c => out.push(c),
        }
    }
    out
}

/// Strings biased towards the characters escaping has to handle.
pub fn random_unicode<R: Rng>(rng: &mut R, max_len: usize) -> String {
    const SPECIAL: &[char] = &['\\', '\t', '\n', '\r', 't', 'n', 'r', '😷', '𝔘', '\u{10FFFF}', 'é', '\u{0}'];
    (0..rng.gen_range(0..=max_len))
        .map(|_| {
            if rng.gen_bool(0.5) {
                *SPECIAL.choose(rng).unwrap()
            } else {
                loop {
                    if let Some(c) = char::from_u32(rng.gen_range(0..0x11_0000)) {
                        break c;
                    }
                }
            }
        })
        .collect()
}

// ---------------------------------------------------------------- annotation

fn fold(c: char) -> char {
    let lower: Vec<char> = c.to_lowercase().collect();
    if lower.len() == 1 {
        lower[0]
    } else {
        c
    }
}

fn word_char(c: char) -> bool {
    c.is_alphanumeric()
}

/// (begin, end, surface, concept ids) in code points.
pub type OracleSpan = (usize, usize, String, Vec<String>);

/// Brute force: try every dictionary key at every offset, keep word-bounded
/// hits, then walk left to right taking the longest hit at each position.
pub fn oracle_annotate(entries: &[(String, String)], text: &str) -> Vec<OracleSpan> {
    let mut keys: BTreeMap<Vec<char>, BTreeSet<String>> = BTreeMap::new();
    for (id, term) in entries {
        keys.entry(term.chars().map(fold).collect())
            .or_default()
            .insert(id.clone());
    }
    let chars: Vec<char> = text.chars().collect();
    let folded: Vec<char> = chars.iter().map(|&c| fold(c)).collect();
    let n = chars.len();
    let mut out = Vec::new();
    let mut i = 0;
    while i < n {
        let mut best: Option<(usize, &BTreeSet<String>)> = None;
        for (key, ids) in &keys {
            let end = i + key.len();
            if key.is_empty() || end > n || folded[i..end] != key[..] {
                continue;
            }
            let left_ok = i == 0 || !word_char(chars[i - 1]);
            let right_ok = end == n || !word_char(chars[end]);
            if left_ok && right_ok && best.is_none_or(|(e, _)| end > e) {
                best = Some((end, ids));
            }
        }
        match best {
            Some((end, ids)) => {
                out.push((i, end, chars[i..end].iter().collect(), ids.iter().cloned().collect()));
                i = end;
            }
            None => i += 1,
        }
    }
    out
}

const ANNOT_ALPHABET: &[char] = &[
    'a', 'b', 'c', 'A', 'B', 'C', ' ', ' ', '-', '.', '1', 'é', 'É', 'İ', 'ß', '😷', '\t',
];

pub fn random_annot_text<R: Rng>(rng: &mut R, max_len: usize) -> String {
    (0..rng.gen_range(0..=max_len))
        .map(|_| *ANNOT_ALPHABET.choose(rng).unwrap())
        .collect()
}

/// Dictionary rows (concept id, term); terms are often lifted from `text`
/// so matches are common, and ids collide so shared terms occur.
pub fn random_annot_dict<R: Rng>(rng: &mut R, text: &str, max_terms: usize) -> Vec<(String, String)> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    for _ in 0..rng.gen_range(1..=max_terms) {
        let term: String = if !chars.is_empty() && rng.gen_bool(0.6) {
            let b = rng.gen_range(0..chars.len());
            let e = (b + rng.gen_range(1..8)).min(chars.len());
            chars[b..e].iter().collect()
        } else {
            random_annot_text(rng, 6)
        };
        let term = term.split_whitespace().collect::<Vec<_>>().join(" ");
        if term.is_empty() {
            continue;
        }
        out.push((format!("C{}", rng.gen_range(0..10)), term));
    }
    if out.is_empty() {
        out.push(("C0".into(), "a".into()));
    }
    out
}

// ---------------------------------------------------------------- formats

pub type BratRow = (String, String, usize, usize, String);

/// (id, type, begin, end, surface) from a brat `.ann` body. Only text-bound
/// annotations are expected; anything else is an error.
pub fn parse_brat(ann: &str) -> Result<Vec<BratRow>, String> {
    let mut out = Vec::new();
    for (n, line) in ann.lines().enumerate() {
        let fields: Vec<&str> = line.splitn(3, '\t').collect();
        if fields.len() != 3 {
            return Err(format!("line {}: expected 3 tab-separated fields", n + 1));
        }
        let id = fields[0];
        if !id.starts_with('T') || id.len() < 2 || !id[1..].bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("line {}: bad id {id:?}", n + 1));
        }
        let parts: Vec<&str> = fields[1].split(' ').collect();
        if parts.len() != 3 {
            return Err(format!("line {}: expected `Type begin end`", n + 1));
        }
        let ty = parts[0];
        if ty.is_empty() || !ty.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(format!("line {}: bad type {ty:?}", n + 1));
        }
        let begin: usize = parts[1].parse().map_err(|_| format!("line {}: begin", n + 1))?;
        let end: usize = parts[2].parse().map_err(|_| format!("line {}: end", n + 1))?;
        out.push((id.to_string(), ty.to_string(), begin, end, fields[2].to_string()));
    }
    Ok(out)
}

/// Structural check of one PubAnnotation document against its text.
pub fn validate_pubannotation(doc: &Value) -> Result<Vec<(usize, usize, String)>, String> {
    let obj = doc.as_object().ok_or("document is not an object")?;
    let text = obj.get("text").and_then(Value::as_str).ok_or("missing text")?;
    let len = text.chars().count();
    let dens = obj
        .get("denotations")
        .and_then(Value::as_array)
        .ok_or("missing denotations array")?;
    let mut ids = BTreeSet::new();
    let mut out = Vec::new();
    for d in dens {
        let id = d.get("id").and_then(Value::as_str).ok_or("denotation without id")?;
        if !ids.insert(id.to_string()) {
            return Err(format!("duplicate denotation id {id}"));
        }
        let span = d.get("span").ok_or("denotation without span")?;
        let begin = span.get("begin").and_then(Value::as_u64).ok_or("span.begin")? as usize;
        let end = span.get("end").and_then(Value::as_u64).ok_or("span.end")? as usize;
        if !(begin < end && end <= len) {
            return Err(format!("span {begin}..{end} out of bounds for length {len}"));
        }
        let obj = d.get("obj").and_then(Value::as_str).ok_or("denotation without obj")?;
        out.push((begin, end, obj.to_string()));
    }
    Ok(out)
}

pub fn char_slice(text: &str, begin: usize, end: usize) -> String {
    text.chars().skip(begin).take(end - begin).collect()
}

// ---------------------------------------------------------------- naive Bayes

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn pow(base: &BigRational, exp: u32) -> BigRational {
    (0..exp).fold(BigRational::one(), |acc, _| acc * base)
}

/// Exact class scores `P(c) * prod_t P(t|c)^x_t` for integer count
/// features and rational smoothing.
pub fn exact_nb_scores(
    docs: &[Vec<u32>],
    labels: &[usize],
    n_classes: usize,
    alpha: &BigRational,
    query: &[u32],
) -> Vec<BigRational> {
    let v = query.len();
    let n = docs.len() as i64;
    (0..n_classes)
        .map(|c| {
            let members: Vec<&Vec<u32>> = docs
                .iter()
                .zip(labels)
                .filter(|(_, &l)| l == c)
                .map(|(d, _)| d)
                .collect();
            let prior = ratio(members.len() as i64, n);
            let counts: Vec<i64> = (0..v)
                .map(|t| members.iter().map(|d| d[t] as i64).sum())
                .collect();
            let total = BigRational::from_integer(counts.iter().sum::<i64>().into())
                + alpha * BigRational::from_integer((v as i64).into());
            let mut score = prior;
            for t in 0..v {
                let p = (BigRational::from_integer(counts[t].into()) + alpha) / &total;
                score *= pow(&p, query[t]);
            }
            score
        })
        .collect()
}

pub fn argmax_set(scores: &[BigRational]) -> Vec<usize> {
    let best = scores.iter().max().cloned().unwrap_or_else(BigRational::zero);
    (0..scores.len()).filter(|&i| scores[i] == best).collect()
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// A random instance: docs as dense count vectors over `v` terms and class
/// indices, with every class present at least once.
pub struct NbInstance {
    pub docs: Vec<Vec<u32>>,
    pub labels: Vec<usize>,
    pub n_classes: usize,
    pub alpha: (i64, i64),
    pub query: Vec<u32>,
}

pub fn random_nb_instance<R: Rng>(rng: &mut R) -> NbInstance {
    let n_classes = rng.gen_range(2..=3);
    let v = rng.gen_range(1..=5);
    let n_docs = rng.gen_range(n_classes..=8);
    let mut labels: Vec<usize> = (0..n_docs).map(|i| if i < n_classes { i } else { rng.gen_range(0..n_classes) }).collect();
    labels.shuffle(rng);
    let docs = (0..n_docs)
        .map(|_| (0..v).map(|_| rng.gen_range(0..4)).collect())
        .collect();
    let alpha = *[(1, 1), (1, 2), (2, 1), (1, 10)].choose(rng).unwrap();
    let query = (0..v).map(|_| rng.gen_range(0..4)).collect();
    NbInstance {
        docs,
        labels,
        n_classes,
        alpha,
        query,
    }
}

pub fn sparse(dense: &[u32]) -> Vec<(usize, f64)> {
    dense
        .iter()
        .enumerate()
        .filter(|(_, &x)| x > 0)
        .map(|(i, &x)| (i, x as f64))
        .collect()
}

// ---------------------------------------------------------------- metrics

pub type PrecisionRecallF1 = (f64, f64, f64);

/// Counts (true, predicted) pairs directly and derives per-label
/// precision, recall and F1 with zero for empty denominators.
pub fn recount(
    y_true: &[String],
    y_pred: &[String],
    labels: &[String],
) -> (Vec<Vec<u64>>, Vec<PrecisionRecallF1>, f64) {
    let idx = |l: &String| labels.iter().position(|x| x == l).unwrap();
    let k = labels.len();
    let mut m = vec![vec![0u64; k]; k];
    for (t, p) in y_true.iter().zip(y_pred) {
        m[idx(t)][idx(p)] += 1;
    }
    let per = (0..k)
        .map(|c| {
            let tp = m[c][c] as f64;
            let pred: u64 = (0..k).map(|r| m[r][c]).sum();
            let actual: u64 = m[c].iter().sum();
            let p = if pred == 0 { 0.0 } else { tp / pred as f64 };
            let r = if actual == 0 { 0.0 } else { tp / actual as f64 };
            let f = if p + r == 0.0 { 0.0 } else { 2.0 * p * r / (p + r) };
            (p, r, f)
        })
        .collect();
    let correct: u64 = (0..k).map(|c| m[c][c]).sum();
    let acc = if y_true.is_empty() { 0.0 } else { correct as f64 / y_true.len() as f64 };
    (m, per, acc)
}

// ---------------------------------------------------------------- corpora for classification

/// Three classes sharing a background vocabulary; each document carries
/// its class's marker token once.
pub fn separable_corpus<R: Rng>(rng: &mut R, per_class: usize) -> Vec<(String, String)> {
    const BACKGROUND: &[&str] = &[
        "the", "a", "today", "news", "people", "just", "time", "new", "good", "see", "now",
        "think", "day", "big", "world", "update", "watch", "live", "first", "really",
    ];
    let classes = [("alpha", "zorblax"), ("beta", "quintar"), ("gamma", "vellumor")];
    let mut out = Vec::new();
    for i in 0..per_class {
        for (label, marker) in classes {
            let mut words: Vec<&str> = (0..rng.gen_range(4..12))
                .map(|_| *BACKGROUND.choose(rng).unwrap())
                .collect();
            words.insert(rng.gen_range(0..=words.len()), marker);
            out.push((label.to_string(), format!("{} {}", words.join(" "), i)));
        }
    }
    out
}
