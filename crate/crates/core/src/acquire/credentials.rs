use std::fmt;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

const KEYS: [&str; 4] = ["consumer_key", "consumer_secret", "access_token", "access_secret"];

/// API credential keys. Read from a flat `key = value` file and overridden
/// by `SMMT_CONSUMER_KEY`, `SMMT_CONSUMER_SECRET`, `SMMT_ACCESS_TOKEN` and
/// `SMMT_ACCESS_SECRET`.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct Credentials {
    pub consumer_key: String,
    pub consumer_secret: String,
    pub access_token: String,
    pub access_secret: String,
}

impl fmt::Debug for Credentials {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Credentials")
            .field("consumer_key", &redact(&self.consumer_key))
            .field("consumer_secret", &redact(&self.consumer_secret))
            .field("access_token", &redact(&self.access_token))
            .field("access_secret", &redact(&self.access_secret))
            .finish()
    }
}

fn redact(s: &str) -> &'static str {
    if s.is_empty() {
        "<empty>"
    } else {
        "<set>"
    }
}

impl Credentials {
    /// Parses the credentials file format. Separators `=` and `:` are both
    /// accepted; blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut creds = Credentials::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once(['=', ':']) else {
                return Err(Error::input(format!(
                    "credentials line {}: expected `key = value`",
                    n + 1
                )));
            };
            let value = value.trim().trim_matches('"').to_string();
            match key.trim() {
                "consumer_key" => creds.consumer_key = value,
                "consumer_secret" => creds.consumer_secret = value,
                "access_token" => creds.access_token = value,
                "access_secret" | "access_token_secret" => creds.access_secret = value,
                other => log::warn!("ignoring unknown credentials key {other:?}"),
            }
        }
        Ok(creds)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::file(path, e))?;
        Self::parse(&text)
    }

    /// Applies environment overrides through `lookup` (normally `std::env::var`).
    pub fn with_overrides<F>(mut self, lookup: F) -> Self
    where
        F: Fn(&str) -> Option<String>,
    {
        for key in KEYS {
            if let Some(v) = lookup(&format!("SMMT_{}", key.to_ascii_uppercase())) {
                *self.field_mut(key) = v;
            }
        }
        self
    }

    pub fn with_env(self) -> Self {
        self.with_overrides(|k| std::env::var(k).ok())
    }

    fn field_mut(&mut self, key: &str) -> &mut String {
        match key {
            "consumer_key" => &mut self.consumer_key,
            "consumer_secret" => &mut self.consumer_secret,
            "access_token" => &mut self.access_token,
            _ => &mut self.access_secret,
        }
    }

    /// All four keys must be present before anything touches the network.
    pub fn validate(&self) -> Result<()> {
        let fields = [
            &self.consumer_key,
            &self.consumer_secret,
            &self.access_token,
            &self.access_secret,
        ];
        let missing: Vec<_> = KEYS
            .iter()
            .zip(fields)
            .filter(|(_, v)| v.trim().is_empty())
            .map(|(k, _)| *k)
            .collect();
        if missing.is_empty() {
            Ok(())
        } else {
            Err(Error::input(format!(
                "missing credentials: {}",
                missing.join(", ")
            )))
        }
    }

    /// Placeholder keys for offline fixture runs.
    pub fn offline() -> Self {
        let v = || "offline".to_string();
        Credentials {
            consumer_key: v(),
            consumer_secret: v(),
            access_token: v(),
            access_secret: v(),
        }
    }
}
