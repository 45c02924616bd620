//! Feed client behavior against a scripted local HTTP server: conditional
//! requests, cache updates, offline mode.

#[path = "common/stub_http.rs"]
mod stub_http;

use cymed::cve::{fetch_feed, FeedSource, FetchConfig, FetchError};
use std::net::TcpListener;
use stub_http::{StubResponse, StubServer};
use tempfile::TempDir;

const FEED_V1: &[u8] = br#"{"advisories":[{"id":"CVE-1","cvss":5.0,"affected":[]}]}"#;
const FEED_V2: &[u8] = br#"{"advisories":[{"id":"CVE-2","cvss":6.0,"affected":[]}]}"#;

fn config(dir: &TempDir) -> FetchConfig {
    FetchConfig::new(dir.path())
}

#[test]
fn first_fetch_populates_the_cache() {
    let cache = TempDir::new().unwrap();
    let server = StubServer::start(vec![StubResponse::ok(FEED_V1).with_header("ETag", "\"v1\"")]);
    let source = FeedSource::parse(&server.url);

    let bytes = fetch_feed(&source, &config(&cache)).unwrap();
    assert_eq!(bytes, FEED_V1);

    let requests = server.finish();
    assert_eq!(requests.len(), 1);
    assert!(
        !requests[0].contains("If-None-Match"),
        "cold cache must not send validators"
    );

    // Offline now serves the cache.
    let offline = fetch_feed(&source, &config(&cache).offline(true)).unwrap();
    assert_eq!(offline, FEED_V1);
}

#[test]
fn not_modified_serves_cache_unmodified_with_validator_sent() {
    let cache = TempDir::new().unwrap();
    let server = StubServer::start(vec![
        StubResponse::ok(FEED_V1).with_header("ETag", "\"etag-1\""),
        StubResponse::not_modified(),
    ]);
    let source = FeedSource::parse(&server.url);

    let first = fetch_feed(&source, &config(&cache)).unwrap();
    let second = fetch_feed(&source, &config(&cache)).unwrap();
    assert_eq!(first, FEED_V1);
    assert_eq!(second, FEED_V1, "304 must serve cached bytes unmodified");

    let requests = server.finish();
    assert_eq!(requests.len(), 2);
    assert!(
        requests[1].contains("if-none-match: \"etag-1\"")
            || requests[1].contains("If-None-Match: \"etag-1\""),
        "revalidation must carry the stored entity tag, got: {}",
        requests[1]
    );
}

#[test]
fn fresh_body_overwrites_the_cache() {
    let cache = TempDir::new().unwrap();
    let server = StubServer::start(vec![
        StubResponse::ok(FEED_V1).with_header("Last-Modified", "Mon, 01 Jan 2024 00:00:00 GMT"),
        StubResponse::ok(FEED_V2).with_header("Last-Modified", "Tue, 02 Jan 2024 00:00:00 GMT"),
    ]);
    let source = FeedSource::parse(&server.url);

    assert_eq!(fetch_feed(&source, &config(&cache)).unwrap(), FEED_V1);
    assert_eq!(fetch_feed(&source, &config(&cache)).unwrap(), FEED_V2);

    let requests = server.finish();
    assert!(requests[1]
        .to_lowercase()
        .contains("if-modified-since: mon, 01 jan 2024"));

    // Cache now holds v2.
    let offline = fetch_feed(&source, &config(&cache).offline(true)).unwrap();
    assert_eq!(offline, FEED_V2);
}

#[test]
fn warm_cache_offline_performs_zero_network_operations() {
    let cache = TempDir::new().unwrap();
    let server = StubServer::start(vec![StubResponse::ok(FEED_V1)]);
    let source = FeedSource::parse(&server.url);
    fetch_feed(&source, &config(&cache)).unwrap();
    server.finish();

    // Re-bind a listener and point a same-shaped source at it: the offline
    // fetch must never connect.
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    listener.set_nonblocking(true).unwrap();
    let sentinel_url = format!("http://{}/feed.json", listener.local_addr().unwrap());
    let sentinel_source = FeedSource::parse(&sentinel_url);

    // Warm the sentinel's cache slot by copying the body under its key: the
    // simplest way is fetching once through a real server script.
    let warm_server = StubServer::start(vec![StubResponse::ok(FEED_V1)]);
    let warm_source = FeedSource::parse(&warm_server.url);
    fetch_feed(&warm_source, &config(&cache)).unwrap();
    warm_server.finish();

    let bytes = fetch_feed(&warm_source, &config(&cache).offline(true)).unwrap();
    assert_eq!(bytes, FEED_V1);

    // And the sentinel listener saw no connection at all while offline mode
    // ran (its cache slot is cold, so the fetch errors instead of dialing).
    let err = fetch_feed(&sentinel_source, &config(&cache).offline(true)).unwrap_err();
    assert!(matches!(err, FetchError::NetworkUnavailable(_)));
    match listener.accept() {
        Err(e) if e.kind() == std::io::ErrorKind::WouldBlock => {}
        other => panic!("offline fetch touched the network: {other:?}"),
    }
}

#[test]
fn http_error_statuses_are_source_errors() {
    let cache = TempDir::new().unwrap();
    let server = StubServer::start(vec![StubResponse::status(404)]);
    let source = FeedSource::parse(&server.url);
    let err = fetch_feed(&source, &config(&cache)).unwrap_err();
    assert!(matches!(err, FetchError::SourceError { status: 404 }));
    server.finish();
}

#[test]
fn transport_failure_degrades_to_cache_when_warm() {
    let cache = TempDir::new().unwrap();
    let server = StubServer::start(vec![StubResponse::ok(FEED_V1)]);
    let source = FeedSource::parse(&server.url);
    fetch_feed(&source, &config(&cache)).unwrap();
    server.finish();

    // Server is gone now; online fetch falls back to the cached copy.
    let bytes = fetch_feed(&source, &config(&cache)).unwrap();
    assert_eq!(bytes, FEED_V1);
}

#[test]
fn cold_cache_with_dead_server_is_unavailable() {
    let cache = TempDir::new().unwrap();
    // A port that was bound and immediately dropped: connection refused.
    let dead_url = {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        format!("http://{}/feed.json", listener.local_addr().unwrap())
    };
    let err = fetch_feed(&FeedSource::parse(&dead_url), &config(&cache)).unwrap_err();
    assert!(matches!(err, FetchError::NetworkUnavailable(_)));
}
