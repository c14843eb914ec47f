//! Dictionary phrase matcher: an Aho-Corasick automaton over case-folded
//! code points, with leftmost-longest, non-overlapping, word-bounded match
//! selection.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use sha2::{Digest, Sha256};

use crate::dict::TermDictionary;
use crate::error::{Error, Result};

const ROOT: u32 = 0;

/// Case folding that never changes the number of code points: characters
/// whose lowercase form is longer than one code point (e.g. `İ`) are kept.
pub fn fold_char(c: char) -> char {
    let mut lower = c.to_lowercase();
    match (lower.next(), lower.next()) {
        (Some(l), None) => l,
        _ => c,
    }
}

pub fn is_word_char(c: char) -> bool {
    c.is_alphanumeric()
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Node {
    /// Sorted by character.
    next: Vec<(char, u32)>,
    fail: u32,
    /// Pattern ending exactly at this node.
    output: Option<u32>,
    /// Nearest node on the failure chain that has an output.
    dict_link: Option<u32>,
}

impl Node {
    fn new() -> Self {
        Node {
            next: Vec::new(),
            fail: ROOT,
            output: None,
            dict_link: None,
        }
    }

    fn step(&self, c: char) -> Option<u32> {
        self.next
            .binary_search_by_key(&c, |&(k, _)| k)
            .ok()
            .map(|i| self.next[i].1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Pattern {
    len: usize,
    concept_ids: Vec<String>,
}

/// Compiled dictionary. Immutable and `Sync`, so one matcher can serve many
/// threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matcher {
    nodes: Vec<Node>,
    patterns: Vec<Pattern>,
    entity_type: String,
}

/// A raw match before annotation: code-point span plus pattern index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Span {
    pub begin: usize,
    pub end: usize,
    pub pattern: usize,
}

impl Matcher {
    pub fn compile(dict: &TermDictionary) -> Result<Self> {
        if dict.is_empty() {
            return Err(Error::input("cannot compile an empty dictionary"));
        }
        let mut by_key: BTreeMap<Vec<char>, BTreeSet<String>> = BTreeMap::new();
        for e in dict.entries() {
            let key: Vec<char> = e.term.chars().map(fold_char).collect();
            by_key.entry(key).or_default().insert(e.concept_id.clone());
        }

        let mut trie: Vec<(BTreeMap<char, u32>, Option<u32>)> = vec![(BTreeMap::new(), None)];
        let mut patterns = Vec::with_capacity(by_key.len());
        for (key, ids) in by_key {
            let mut state = ROOT as usize;
            for &c in &key {
                let next = match trie[state].0.get(&c) {
                    Some(&n) => n as usize,
                    None => {
                        let n = trie.len();
                        trie.push((BTreeMap::new(), None));
                        trie[state].0.insert(c, n as u32);
                        n
                    }
                };
                state = next;
            }
            trie[state].1 = Some(patterns.len() as u32);
            patterns.push(Pattern {
                len: key.len(),
                concept_ids: ids.into_iter().collect(),
            });
        }

        let mut nodes: Vec<Node> = trie
            .into_iter()
            .map(|(next, output)| Node {
                next: next.into_iter().collect(),
                output,
                ..Node::new()
            })
            .collect();

        // Breadth-first failure links.
        let mut queue = VecDeque::new();
        for &(_, child) in &nodes[ROOT as usize].next {
            queue.push_back(child);
        }
        while let Some(s) = queue.pop_front() {
            let edges = nodes[s as usize].next.clone();
            for (c, child) in edges {
                let mut f = nodes[s as usize].fail;
                let target = loop {
                    if let Some(t) = nodes[f as usize].step(c) {
                        break t;
                    }
                    if f == ROOT {
                        break ROOT;
                    }
                    f = nodes[f as usize].fail;
                };
                let fail = if target == child { ROOT } else { target };
                let dict_link = if nodes[fail as usize].output.is_some() {
                    Some(fail)
                } else {
                    nodes[fail as usize].dict_link
                };
                let node = &mut nodes[child as usize];
                node.fail = fail;
                node.dict_link = dict_link;
                queue.push_back(child);
            }
        }

        Ok(Matcher {
            nodes,
            patterns,
            entity_type: brat_type(&dict.name),
        })
    }

    pub fn pattern_count(&self) -> usize {
        self.patterns.len()
    }

    pub fn concept_ids(&self, pattern: usize) -> &[String] {
        &self.patterns[pattern].concept_ids
    }

    /// The brat entity type: dictionary name restricted to `[A-Za-z0-9_]`.
    pub fn entity_type(&self) -> &str {
        &self.entity_type
    }

    /// Every word-bounded occurrence of every pattern, overlapping ones
    /// included, ordered by (begin, end).
    pub fn all_matches(&self, text: &[char]) -> Vec<Span> {
        let mut found = Vec::new();
        let mut state = ROOT;
        for (i, &raw) in text.iter().enumerate() {
            let c = fold_char(raw);
            state = loop {
                if let Some(t) = self.nodes[state as usize].step(c) {
                    break t;
                }
                if state == ROOT {
                    break ROOT;
                }
                state = self.nodes[state as usize].fail;
            };
            let end = i + 1;
            let mut hit = if self.nodes[state as usize].output.is_some() {
                Some(state)
            } else {
                self.nodes[state as usize].dict_link
            };
            while let Some(node) = hit {
                let n = &self.nodes[node as usize];
                let pattern = n.output.expect("dict links point at output nodes") as usize;
                let begin = end - self.patterns[pattern].len;
                if bounded(text, begin, end) {
                    found.push(Span {
                        begin,
                        end,
                        pattern,
                    });
                }
                hit = n.dict_link;
            }
        }
        found.sort_unstable();
        found
    }

    /// Leftmost-longest, non-overlapping selection from [`Self::all_matches`].
    pub fn find(&self, text: &[char]) -> Vec<Span> {
        select_leftmost_longest(self.all_matches(text))
    }

    /// SHA-256 over the automaton structure, for reproducibility checks.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update((self.nodes.len() as u64).to_le_bytes());
        for n in &self.nodes {
            h.update((n.next.len() as u64).to_le_bytes());
            for &(c, t) in &n.next {
                h.update((c as u32).to_le_bytes());
                h.update(t.to_le_bytes());
            }
            h.update(n.fail.to_le_bytes());
            h.update(n.output.map_or(u32::MAX, |o| o).to_le_bytes());
            h.update(n.dict_link.map_or(u32::MAX, |o| o).to_le_bytes());
        }
        for p in &self.patterns {
            h.update((p.len as u64).to_le_bytes());
            for id in &p.concept_ids {
                h.update((id.len() as u64).to_le_bytes());
                h.update(id.as_bytes());
            }
        }
        h.update(self.entity_type.as_bytes());
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// True when neither neighbour of `text[begin..end]` is a word character.
pub fn bounded(text: &[char], begin: usize, end: usize) -> bool {
    (begin == 0 || !is_word_char(text[begin - 1]))
        && (end == text.len() || !is_word_char(text[end]))
}

/// Greedy pass over candidates: earliest start first, longest among equal
/// starts, skipping anything that overlaps an accepted match.
pub fn select_leftmost_longest(mut spans: Vec<Span>) -> Vec<Span> {
    spans.sort_unstable_by(|a, b| a.begin.cmp(&b.begin).then(b.end.cmp(&a.end)));
    let mut out: Vec<Span> = Vec::new();
    for s in spans {
        if out.last().is_none_or(|last| s.begin >= last.end) {
            out.push(s);
        }
    }
    out
}

fn brat_type(name: &str) -> String {
    let t: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' })
        .collect();
    if t.is_empty() {
        "Entity".to_string()
    } else {
        t
    }
}
