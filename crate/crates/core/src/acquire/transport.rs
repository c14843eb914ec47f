//! The network seam. Every acquisition operation talks to a [`Transport`];
//! tests and offline runs plug in a [`FixtureTransport`] that replays
//! recorded responses.
//!
//! # Fixture directory format
//!
//! A fixture is a directory of `*.json` entry files, loaded in file-name
//! order. Each entry describes one request pattern and the responses it
//! replays:
//!
//! ```json
//! {
//!   "method": "POST",
//!   "url": "https://stream.twitter.com/1.1/statuses/filter.json",
//!   "params": { "track": "cricket" },
//!   "responses": [
//!     { "status": 429, "headers": { "Retry-After": "2" } },
//!     { "status": 200, "body_file": "stream.jsonl" }
//!   ]
//! }
//! ```
//!
//! * `method` is `GET` or `POST`; `url` must match exactly.
//! * `params` is optional; every listed pair must be present in the request
//!   (other request parameters are ignored).
//! * Each matching request consumes the next response; the last response
//!   repeats once the list is exhausted.
//! * A response body is given inline as `body` (string), `body_json` (any
//!   JSON value, serialized compactly) or `body_file` (path relative to the
//!   fixture directory). `drop_connection: true` makes the body reader fail
//!   after delivering its bytes, simulating a dropped connection.
//!
//! Requests matching no entry get a 404 with an empty body. Every request is
//! recorded and can be inspected with [`FixtureTransport::requests`].

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::{self, Cursor, Read};
use std::path::Path;
use std::sync::{Arc, Mutex};

use serde::Deserialize;

use super::credentials::Credentials;
use crate::error::{Error, Result};

pub type Params = BTreeMap<String, String>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Method {
    Get,
    Post,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Get => "GET",
            Method::Post => "POST",
        })
    }
}

pub struct Request<'a> {
    pub method: Method,
    pub url: &'a str,
    pub params: &'a Params,
    pub credentials: &'a Credentials,
}

pub struct Response {
    pub status: u16,
    /// Header names are lower-cased.
    pub headers: BTreeMap<String, String>,
    pub body: Box<dyn Read + Send>,
}

impl Response {
    pub fn header(&self, name: &str) -> Option<&str> {
        self.headers
            .get(&name.to_ascii_lowercase())
            .map(String::as_str)
    }

    pub fn is_success(&self) -> bool {
        (200..300).contains(&self.status)
    }

    pub fn read_body(mut self) -> io::Result<Vec<u8>> {
        let mut buf = Vec::new();
        self.body.read_to_end(&mut buf)?;
        Ok(buf)
    }
}

impl fmt::Debug for Response {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Response")
            .field("status", &self.status)
            .field("headers", &self.headers)
            .finish_non_exhaustive()
    }
}

/// Issues one HTTP-style request. `Err` means the connection itself failed;
/// HTTP error statuses come back as an ordinary [`Response`].
pub trait Transport {
    fn request(&self, req: &Request<'_>) -> Result<Response>;
}

impl<T: Transport + ?Sized> Transport for &T {
    fn request(&self, req: &Request<'_>) -> Result<Response> {
        (**self).request(req)
    }
}

impl<T: Transport + ?Sized> Transport for Box<T> {
    fn request(&self, req: &Request<'_>) -> Result<Response> {
        (**self).request(req)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecordedRequest {
    pub method: Method,
    pub url: String,
    pub params: Params,
}

#[derive(Debug, Clone, Default, Deserialize)]
pub struct FixtureResponse {
    pub status: u16,
    #[serde(default)]
    pub headers: BTreeMap<String, String>,
    #[serde(default)]
    pub body: Option<String>,
    #[serde(default)]
    pub body_json: Option<serde_json::Value>,
    #[serde(default)]
    pub body_file: Option<String>,
    #[serde(default)]
    pub drop_connection: bool,
}

impl FixtureResponse {
    pub fn new(status: u16) -> Self {
        FixtureResponse {
            status,
            ..Default::default()
        }
    }

    pub fn ok(body: impl Into<String>) -> Self {
        Self::new(200).body(body)
    }

    pub fn body(mut self, body: impl Into<String>) -> Self {
        self.body = Some(body.into());
        self
    }

    pub fn header(mut self, name: &str, value: impl Into<String>) -> Self {
        self.headers.insert(name.to_string(), value.into());
        self
    }

    pub fn dropped(mut self) -> Self {
        self.drop_connection = true;
        self
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct FixtureEntry {
    pub method: Method,
    pub url: String,
    #[serde(default)]
    pub params: Params,
    pub responses: Vec<FixtureResponse>,
}

impl FixtureEntry {
    pub fn new(method: Method, url: impl Into<String>) -> Self {
        FixtureEntry {
            method,
            url: url.into(),
            params: Params::new(),
            responses: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<String>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn respond(mut self, response: FixtureResponse) -> Self {
        self.responses.push(response);
        self
    }

    fn matches(&self, method: Method, url: &str, params: &Params) -> bool {
        self.method == method
            && self.url == url
            && self
                .params
                .iter()
                .all(|(k, v)| params.get(k) == Some(v))
    }
}

#[derive(Default)]
struct FixtureState {
    cursors: Vec<usize>,
    log: Vec<RecordedRequest>,
}

type LoadedEntry = (FixtureEntry, Vec<Arc<[u8]>>);

/// Replays recorded responses; see the module docs for the on-disk format.
#[derive(Clone, Default)]
pub struct FixtureTransport {
    entries: Arc<Vec<LoadedEntry>>,
    state: Arc<Mutex<FixtureState>>,
}

impl FixtureTransport {
    pub fn new(entries: Vec<FixtureEntry>) -> Result<Self> {
        Self::build(entries, None)
    }

    pub fn from_dir(dir: &Path) -> Result<Self> {
        let mut files: Vec<_> = fs::read_dir(dir)
            .map_err(|e| Error::file(dir, e))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        files.sort();
        let mut entries = Vec::with_capacity(files.len());
        for path in files {
            let text = fs::read_to_string(&path).map_err(|e| Error::file(&path, e))?;
            let entry: FixtureEntry = serde_json::from_str(&text)
                .map_err(|e| Error::input(format!("{}: {e}", path.display())))?;
            entries.push(entry);
        }
        Self::build(entries, Some(dir))
    }

    fn build(entries: Vec<FixtureEntry>, dir: Option<&Path>) -> Result<Self> {
        let mut loaded = Vec::with_capacity(entries.len());
        for entry in entries {
            if entry.responses.is_empty() {
                return Err(Error::input(format!(
                    "fixture entry {} {} has no responses",
                    entry.method, entry.url
                )));
            }
            let bodies = entry
                .responses
                .iter()
                .map(|r| load_body(r, dir))
                .collect::<Result<Vec<_>>>()?;
            loaded.push((entry, bodies));
        }
        let cursors = vec![0; loaded.len()];
        Ok(FixtureTransport {
            entries: Arc::new(loaded),
            state: Arc::new(Mutex::new(FixtureState {
                cursors,
                log: Vec::new(),
            })),
        })
    }

    /// Every request seen so far, in order.
    pub fn requests(&self) -> Vec<RecordedRequest> {
        self.state.lock().unwrap().log.clone()
    }

    pub fn count_requests(&self, url: &str) -> usize {
        self.state
            .lock()
            .unwrap()
            .log
            .iter()
            .filter(|r| r.url == url)
            .count()
    }

    fn respond(&self, method: Method, url: &str, params: &Params) -> Response {
        let mut state = self.state.lock().unwrap();
        state.log.push(RecordedRequest {
            method,
            url: url.to_string(),
            params: params.clone(),
        });
        let Some(idx) = self
            .entries
            .iter()
            .position(|(e, _)| e.matches(method, url, params))
        else {
            return Response {
                status: 404,
                headers: BTreeMap::new(),
                body: Box::new(io::empty()),
            };
        };
        let (entry, bodies) = &self.entries[idx];
        let cursor = state.cursors[idx];
        let pick = cursor.min(entry.responses.len() - 1);
        state.cursors[idx] = cursor + 1;

        let fixture = &entry.responses[pick];
        let body = Cursor::new(ArcBytes(Arc::clone(&bodies[pick])));
        Response {
            status: fixture.status,
            headers: fixture
                .headers
                .iter()
                .map(|(k, v)| (k.to_ascii_lowercase(), v.clone()))
                .collect(),
            body: if fixture.drop_connection {
                Box::new(body.chain(DroppedConnection))
            } else {
                Box::new(body)
            },
        }
    }
}

impl Transport for FixtureTransport {
    fn request(&self, req: &Request<'_>) -> Result<Response> {
        Ok(self.respond(req.method, req.url, req.params))
    }
}

fn load_body(r: &FixtureResponse, dir: Option<&Path>) -> Result<Arc<[u8]>> {
    if let Some(body) = &r.body {
        return Ok(Arc::from(body.as_bytes()));
    }
    if let Some(json) = &r.body_json {
        return Ok(Arc::from(json.to_string().into_bytes()));
    }
    if let Some(file) = &r.body_file {
        let path = match dir {
            Some(d) => d.join(file),
            None => file.into(),
        };
        return fs::read(&path)
            .map(Arc::from)
            .map_err(|e| Error::file(path, e));
    }
    Ok(Arc::from(&[][..]))
}

struct ArcBytes(Arc<[u8]>);

impl AsRef<[u8]> for ArcBytes {
    fn as_ref(&self) -> &[u8] {
        &self.0
    }
}

struct DroppedConnection;

impl Read for DroppedConnection {
    fn read(&mut self, _buf: &mut [u8]) -> io::Result<usize> {
        Err(io::Error::new(
            io::ErrorKind::ConnectionReset,
            "fixture connection dropped",
        ))
    }
}

/// Fetches one web page by URL, for the scraper.
pub trait PageFetcher {
    fn fetch(&self, url: &str) -> Result<Page>;
}

#[derive(Debug, Clone)]
pub struct Page {
    pub status: u16,
    pub body: String,
}

impl PageFetcher for FixtureTransport {
    fn fetch(&self, url: &str) -> Result<Page> {
        let resp = self.respond(Method::Get, url, &Params::new());
        let status = resp.status;
        let body = resp.read_body()?;
        Ok(Page {
            status,
            body: String::from_utf8_lossy(&body).into_owned(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn get(t: &FixtureTransport, url: &str, params: &Params) -> Response {
        let creds = Credentials::offline();
        t.request(&Request {
            method: Method::Get,
            url,
            params,
            credentials: &creds,
        })
        .unwrap()
    }

    #[test]
    fn replays_in_sequence_then_repeats_last() {
        let t = FixtureTransport::new(vec![FixtureEntry::new(Method::Get, "u")
            .respond(FixtureResponse::new(429).header("Retry-After", "3"))
            .respond(FixtureResponse::ok("done"))])
        .unwrap();
        let p = Params::new();
        let first = get(&t, "u", &p);
        assert_eq!(first.status, 429);
        assert_eq!(first.header("retry-after"), Some("3"));
        assert_eq!(get(&t, "u", &p).read_body().unwrap(), b"done");
        assert_eq!(get(&t, "u", &p).status, 200);
        assert_eq!(t.count_requests("u"), 3);
    }

    #[test]
    fn params_match_as_subset() {
        let t = FixtureTransport::new(vec![
            FixtureEntry::new(Method::Get, "u")
                .param("q", "a")
                .respond(FixtureResponse::ok("A")),
            FixtureEntry::new(Method::Get, "u").respond(FixtureResponse::ok("other")),
        ])
        .unwrap();
        let mut p = Params::new();
        p.insert("q".into(), "a".into());
        p.insert("extra".into(), "1".into());
        assert_eq!(get(&t, "u", &p).read_body().unwrap(), b"A");
        assert_eq!(get(&t, "u", &Params::new()).read_body().unwrap(), b"other");
        assert_eq!(get(&t, "nope", &p).status, 404);
    }

    #[test]
    fn dropped_connection_errors_after_body() {
        let t = FixtureTransport::new(vec![
            FixtureEntry::new(Method::Get, "u").respond(FixtureResponse::ok("abc").dropped())
        ])
        .unwrap();
        let mut body = get(&t, "u", &Params::new()).body;
        let mut buf = [0u8; 3];
        body.read_exact(&mut buf).unwrap();
        assert_eq!(&buf, b"abc");
        assert_eq!(
            body.read(&mut buf).unwrap_err().kind(),
            io::ErrorKind::ConnectionReset
        );
    }

    #[test]
    fn loads_directory_fixture() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("body.txt"), "from file").unwrap();
        fs::write(
            dir.path().join("01.json"),
            r#"{"method":"GET","url":"u","responses":[{"status":200,"body_file":"body.txt"}]}"#,
        )
        .unwrap();
        let t = FixtureTransport::from_dir(dir.path()).unwrap();
        assert_eq!(
            get(&t, "u", &Params::new()).read_body().unwrap(),
            b"from file"
        );
    }
}
