//! Feed retrieval with a validating local cache.
//!
//! URL sources are fetched with conditional requests: the cached entity tag
//! or last-modified value rides along, a 304 serves the cache untouched, a
//! 200 atomically replaces it. Offline mode never opens a connection. Plain
//! filesystem paths are read directly and bypass the cache.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FeedSource {
    Url(String),
    Path(PathBuf),
}

impl FeedSource {
    /// `http://` and `https://` go over the network; anything else is a
    /// local file path.
    pub fn parse(raw: &str) -> Self {
        if raw.starts_with("http://") || raw.starts_with("https://") {
            FeedSource::Url(raw.to_string())
        } else {
            FeedSource::Path(PathBuf::from(raw))
        }
    }

    fn cache_key(&self) -> String {
        let s = match self {
            FeedSource::Url(u) => u.as_str(),
            FeedSource::Path(p) => p.to_str().unwrap_or("<non-utf8 path>"),
        };
        let digest = Sha256::digest(s.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Debug, Clone)]
pub struct FetchConfig {
    pub cache_dir: PathBuf,
    pub offline: bool,
    pub timeout: Duration,
}

impl FetchConfig {
    pub fn new(cache_dir: impl Into<PathBuf>) -> Self {
        Self {
            cache_dir: cache_dir.into(),
            offline: false,
            timeout: Duration::from_secs(30),
        }
    }

    pub fn offline(mut self, offline: bool) -> Self {
        self.offline = offline;
        self
    }
}

#[derive(Debug, Error)]
pub enum FetchError {
    #[error("feed unavailable: {0}")]
    NetworkUnavailable(String),
    #[error("feed source returned HTTP {status}")]
    SourceError { status: u16 },
    #[error("feed i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Conditional-request validators stored next to the cached body.
#[derive(Debug, Default, Clone, Serialize, Deserialize)]
struct Validators {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    etag: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    last_modified: Option<String>,
}

struct CachePaths {
    body: PathBuf,
    meta: PathBuf,
}

fn cache_paths(source: &FeedSource, config: &FetchConfig) -> CachePaths {
    let key = source.cache_key();
    CachePaths {
        body: config.cache_dir.join(format!("{key}.json")),
        meta: config.cache_dir.join(format!("{key}.meta")),
    }
}

/// Fetch the feed document from a URL or path.
pub fn fetch_feed(source: &FeedSource, config: &FetchConfig) -> Result<Vec<u8>, FetchError> {
    match source {
        FeedSource::Path(p) => Ok(fs::read(p)?),
        FeedSource::Url(url) => fetch_url(source, url, config),
    }
}

fn fetch_url(source: &FeedSource, url: &str, config: &FetchConfig) -> Result<Vec<u8>, FetchError> {
    let paths = cache_paths(source, config);
    let cached = fs::read(&paths.body).ok();

    if config.offline {
        return cached.ok_or_else(|| {
            FetchError::NetworkUnavailable(format!("offline and no cached copy of {url}"))
        });
    }

    let agent = ureq::config::Config::builder()
        .http_status_as_error(false)
        .timeout_global(Some(config.timeout))
        .build()
        .new_agent();

    let mut request = agent.get(url);
    if cached.is_some() {
        let validators = read_validators(&paths.meta);
        if let Some(etag) = &validators.etag {
            request = request.header("If-None-Match", etag);
        }
        if let Some(lm) = &validators.last_modified {
            request = request.header("If-Modified-Since", lm);
        }
    }

    let response = match request.call() {
        Ok(r) => r,
        Err(e) => {
            // Transport failure: degrade to the cache when we have one.
            return cached.ok_or_else(|| FetchError::NetworkUnavailable(e.to_string()));
        }
    };

    let status = response.status().as_u16();
    match status {
        304 => cached.ok_or_else(|| {
            FetchError::NetworkUnavailable("server answered 304 but no cached copy exists".into())
        }),
        200..=299 => {
            let validators = Validators {
                etag: header_value(&response, "etag"),
                last_modified: header_value(&response, "last-modified"),
            };
            let mut response = response;
            let body = response
                .body_mut()
                .read_to_vec()
                .map_err(|e| FetchError::NetworkUnavailable(e.to_string()))?;
            store_cache(&paths, &body, &validators)?;
            Ok(body)
        }
        s if s >= 400 => Err(FetchError::SourceError { status: s }),
        s => Err(FetchError::NetworkUnavailable(format!(
            "unexpected HTTP status {s}"
        ))),
    }
}

fn header_value(response: &ureq::http::Response<ureq::Body>, name: &str) -> Option<String> {
    response
        .headers()
        .get(name)
        .and_then(|v| v.to_str().ok())
        .map(str::to_string)
}

fn read_validators(meta: &Path) -> Validators {
    fs::read(meta)
        .ok()
        .and_then(|bytes| serde_json::from_slice(&bytes).ok())
        .unwrap_or_default()
}

/// Write body then metadata, each atomically via a temp file rename.
fn store_cache(paths: &CachePaths, body: &[u8], validators: &Validators) -> Result<(), FetchError> {
    if let Some(dir) = paths.body.parent() {
        fs::create_dir_all(dir)?;
    }
    atomic_write(&paths.body, body)?;
    atomic_write(
        &paths.meta,
        &serde_json::to_vec(validators).expect("validators serialize"),
    )?;
    Ok(())
}

fn atomic_write(path: &Path, bytes: &[u8]) -> Result<(), std::io::Error> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)
}
