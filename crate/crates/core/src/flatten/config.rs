use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde_json::{Map, Value};

use crate::error::{Error, Result};

/// A dot-separated key path into a tweet object, e.g. `user.screen_name`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldPath(Vec<String>);

impl FieldPath {
    pub fn segments(&self) -> &[String] {
        &self.0
    }

    /// Walks the path; `None` when any segment is absent or lands on a
    /// non-object.
    pub fn lookup<'a>(&self, obj: &'a Map<String, Value>) -> Option<&'a Value> {
        let (first, rest) = self.0.split_first()?;
        rest.iter()
            .try_fold(obj.get(first)?, |v, seg| v.as_object()?.get(seg))
    }
}

impl FromStr for FieldPath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::input("empty field path"));
        }
        let segments: Vec<String> = s.split('.').map(str::to_string).collect();
        if segments.iter().any(|seg| seg.is_empty() || seg.contains('\t')) {
            return Err(Error::input(format!("invalid field path {s:?}")));
        }
        Ok(FieldPath(segments))
    }
}

impl fmt::Display for FieldPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.join("."))
    }
}

/// Which fields become columns, in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlattenConfig {
    paths: Vec<FieldPath>,
    pub include_header: bool,
}

impl FlattenConfig {
    pub fn new(paths: Vec<FieldPath>, include_header: bool) -> Result<Self> {
        if paths.is_empty() {
            return Err(Error::input("at least one field path is required"));
        }
        for (i, p) in paths.iter().enumerate() {
            if paths[..i].contains(p) {
                return Err(Error::input(format!("duplicate field path {p}")));
            }
        }
        Ok(FlattenConfig {
            paths,
            include_header,
        })
    }

    pub fn from_paths<S: AsRef<str>>(paths: &[S], include_header: bool) -> Result<Self> {
        let paths = paths
            .iter()
            .map(|p| p.as_ref().parse())
            .collect::<Result<Vec<_>>>()?;
        Self::new(paths, include_header)
    }

    /// Parses a field file: one dot-path per line, `#` starts a comment.
    pub fn parse_fields(text: &str, include_header: bool) -> Result<Self> {
        let paths: Vec<&str> = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .collect();
        Self::from_paths(&paths, include_header)
    }

    pub fn from_file(path: &Path, include_header: bool) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::file(path, e))?;
        Self::parse_fields(&text, include_header)
    }

    pub fn paths(&self) -> &[FieldPath] {
        &self.paths
    }
}

impl Default for FlattenConfig {
    /// Tweet id and text, with a header row.
    fn default() -> Self {
        Self::from_paths(&["id_str", "text"], true).expect("default paths are valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_grammar() {
        let p: FieldPath = "user.screen_name".parse().unwrap();
        assert_eq!(p.segments(), ["user", "screen_name"]);
        assert_eq!(p.to_string(), "user.screen_name");
        for bad in ["", "a..b", ".a", "a.", "a\tb"] {
            assert!(bad.parse::<FieldPath>().is_err(), "{bad:?}");
        }
    }

    #[test]
    fn fields_file_with_comments() {
        let cfg = FlattenConfig::parse_fields("# columns\nid_str\n\nuser.screen_name  # who\n", true)
            .unwrap();
        let names: Vec<_> = cfg.paths().iter().map(ToString::to_string).collect();
        assert_eq!(names, ["id_str", "user.screen_name"]);
    }

    #[test]
    fn rejects_empty_and_duplicate() {
        assert!(FlattenConfig::parse_fields("# nothing\n", true).is_err());
        assert!(FlattenConfig::from_paths(&["a", "b", "a"], true).is_err());
    }
}
