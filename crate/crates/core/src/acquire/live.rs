//! HTTP transport against the real service, signing requests with OAuth 1.0a.

use std::collections::BTreeMap;
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use base64::Engine;
use hmac::{Hmac, Mac};
use percent_encoding::{utf8_percent_encode, AsciiSet, NON_ALPHANUMERIC};
use rand::distributions::Alphanumeric;
use rand::Rng;
use sha1::Sha1;

use super::credentials::Credentials;
use super::transport::{Method, Page, PageFetcher, Params, Request, Response, Transport};
use crate::error::{Error, Result};

// RFC 3986 unreserved characters stay literal.
const OAUTH: &AsciiSet = &NON_ALPHANUMERIC
    .remove(b'-')
    .remove(b'.')
    .remove(b'_')
    .remove(b'~');

fn enc(s: &str) -> String {
    utf8_percent_encode(s, OAUTH).to_string()
}

pub struct HttpTransport {
    client: reqwest::blocking::Client,
}

impl HttpTransport {
    pub fn new() -> Result<Self> {
        let client = reqwest::blocking::Client::builder()
            .connect_timeout(Duration::from_secs(30))
            // streaming responses stay open indefinitely
            .timeout(None)
            .user_agent(concat!("smmt/", env!("CARGO_PKG_VERSION")))
            .build()
            .map_err(|e| Error::Transport(e.to_string()))?;
        Ok(HttpTransport { client })
    }
}

impl Transport for HttpTransport {
    fn request(&self, req: &Request<'_>) -> Result<Response> {
        let nonce: String = rand::thread_rng()
            .sample_iter(&Alphanumeric)
            .take(32)
            .map(char::from)
            .collect();
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .unwrap_or_default()
            .as_secs();
        let auth = authorization_header(req, &nonce, timestamp);
        let builder = match req.method {
            Method::Get => self.client.get(req.url).query(req.params),
            Method::Post => self.client.post(req.url).form(req.params),
        };
        let resp = builder
            .header("Authorization", auth)
            .send()
            .map_err(|e| Error::Transport(e.to_string()))?;
        let status = resp.status().as_u16();
        let headers = resp
            .headers()
            .iter()
            .filter_map(|(k, v)| Some((k.as_str().to_ascii_lowercase(), v.to_str().ok()?.to_string())))
            .collect();
        Ok(Response {
            status,
            headers,
            body: Box::new(resp),
        })
    }
}

impl PageFetcher for HttpTransport {
    fn fetch(&self, url: &str) -> Result<Page> {
        let resp = self
            .client
            .get(url)
            .timeout(Duration::from_secs(60))
            .send()
            .map_err(|e| Error::Transport(e.to_string()))?;
        let status = resp.status().as_u16();
        let body = resp.text().map_err(|e| Error::Transport(e.to_string()))?;
        Ok(Page { status, body })
    }
}

fn authorization_header(req: &Request<'_>, nonce: &str, timestamp: u64) -> String {
    let creds: &Credentials = req.credentials;
    let mut oauth: BTreeMap<&str, String> = BTreeMap::new();
    oauth.insert("oauth_consumer_key", creds.consumer_key.clone());
    oauth.insert("oauth_nonce", nonce.to_string());
    oauth.insert("oauth_signature_method", "HMAC-SHA1".into());
    oauth.insert("oauth_timestamp", timestamp.to_string());
    oauth.insert("oauth_token", creds.access_token.clone());
    oauth.insert("oauth_version", "1.0".into());

    let signature = sign(req.method, req.url, req.params, &oauth, creds);
    oauth.insert("oauth_signature", signature);
    let fields: Vec<String> = oauth
        .iter()
        .map(|(k, v)| format!("{}=\"{}\"", enc(k), enc(v)))
        .collect();
    format!("OAuth {}", fields.join(", "))
}

fn sign(
    method: Method,
    url: &str,
    params: &Params,
    oauth: &BTreeMap<&str, String>,
    creds: &Credentials,
) -> String {
    let mut pairs: Vec<(String, String)> = params
        .iter()
        .map(|(k, v)| (enc(k), enc(v)))
        .chain(oauth.iter().map(|(k, v)| (enc(k), enc(v))))
        .collect();
    pairs.sort();
    let param_string = pairs
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join("&");
    let base = format!("{method}&{}&{}", enc(url), enc(&param_string));
    let key = format!("{}&{}", enc(&creds.consumer_secret), enc(&creds.access_secret));
    let mut mac = Hmac::<Sha1>::new_from_slice(key.as_bytes()).expect("HMAC accepts any key length");
    mac.update(base.as_bytes());
    base64::engine::general_purpose::STANDARD.encode(mac.finalize().into_bytes())
}
