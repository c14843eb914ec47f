use serde_json::{Map, Value};

use crate::error::{Error, Result};

/// One tweet: its decimal id plus the full object as received.
#[derive(Debug, Clone, PartialEq)]
pub struct TweetRecord {
    pub id: String,
    pub raw: Map<String, Value>,
}

impl TweetRecord {
    /// Wraps a parsed object. The id comes from `id_str`, falling back to a
    /// numeric `id`; objects carrying neither are rejected.
    pub fn from_object(raw: Map<String, Value>) -> Result<Self> {
        let id = match (raw.get("id_str"), raw.get("id")) {
            (Some(Value::String(s)), _) if !s.is_empty() => s.clone(),
            (_, Some(Value::Number(n))) if n.is_u64() => n.to_string(),
            (_, Some(Value::String(s))) if !s.is_empty() => s.clone(),
            _ => return Err(Error::input("tweet object has no id_str or id field")),
        };
        Ok(TweetRecord { id, raw })
    }

    pub fn from_value(value: Value) -> Result<Self> {
        match value {
            Value::Object(map) => Self::from_object(map),
            _ => Err(Error::input("tweet must be a JSON object")),
        }
    }

    /// The tweet body: `full_text` for extended-mode objects, else `text`.
    pub fn text(&self) -> &str {
        text_of(&self.raw)
    }

    /// Compact single-line rendering, newline not included.
    pub fn to_line(&self) -> String {
        serde_json::to_string(&self.raw).expect("serializing a JSON map cannot fail")
    }
}

pub(crate) fn text_of(raw: &Map<String, Value>) -> &str {
    ["full_text", "text"]
        .iter()
        .find_map(|k| raw.get(*k).and_then(Value::as_str))
        .unwrap_or("")
}
