//! Minimal scripted HTTP/1.1 server for feed-client tests.
//!
//! Serves a fixed sequence of canned responses on a loopback port, records
//! every request verbatim, and exits once the script is exhausted.

#![allow(dead_code)]

use std::io::{Read, Write};
use std::net::{TcpListener, TcpStream};
use std::sync::mpsc;
use std::thread::JoinHandle;

#[derive(Debug, Clone)]
pub struct StubResponse {
    pub status: u16,
    pub headers: Vec<(String, String)>,
    pub body: Vec<u8>,
}

impl StubResponse {
    pub fn ok(body: &[u8]) -> Self {
        Self {
            status: 200,
            headers: Vec::new(),
            body: body.to_vec(),
        }
    }

    pub fn with_header(mut self, name: &str, value: &str) -> Self {
        self.headers.push((name.to_string(), value.to_string()));
        self
    }

    pub fn not_modified() -> Self {
        Self {
            status: 304,
            headers: Vec::new(),
            body: Vec::new(),
        }
    }

    pub fn status(status: u16) -> Self {
        Self {
            status,
            headers: Vec::new(),
            body: Vec::new(),
        }
    }
}

pub struct StubServer {
    pub url: String,
    requests_rx: mpsc::Receiver<String>,
    handle: Option<JoinHandle<()>>,
}

impl StubServer {
    /// Start a server that answers exactly `script.len()` requests, in
    /// order, then shuts down.
    pub fn start(script: Vec<StubResponse>) -> Self {
        let listener = TcpListener::bind("127.0.0.1:0").expect("bind loopback");
        let addr = listener.local_addr().expect("local addr");
        let (tx, requests_rx) = mpsc::channel();

        let handle = std::thread::spawn(move || {
            for response in script {
                let Ok((stream, _)) = listener.accept() else {
                    return;
                };
                serve_one(stream, &response, &tx);
            }
        });

        Self {
            url: format!("http://{addr}/feed.json"),
            requests_rx,
            handle: Some(handle),
        }
    }

    /// All raw requests received so far (joins the server thread).
    pub fn finish(mut self) -> Vec<String> {
        if let Some(handle) = self.handle.take() {
            handle.join().expect("stub server thread");
        }
        self.requests_rx.try_iter().collect()
    }
}

fn serve_one(mut stream: TcpStream, response: &StubResponse, tx: &mpsc::Sender<String>) {
    let mut raw = Vec::new();
    let mut buf = [0u8; 1024];
    // Read until the end of the request headers; these tests only send GETs.
    while !raw.windows(4).any(|w| w == b"\r\n\r\n") {
        match stream.read(&mut buf) {
            Ok(0) => break,
            Ok(n) => raw.extend_from_slice(&buf[..n]),
            Err(_) => break,
        }
    }
    let _ = tx.send(String::from_utf8_lossy(&raw).into_owned());

    let reason = match response.status {
        200 => "OK",
        304 => "Not Modified",
        404 => "Not Found",
        500 => "Internal Server Error",
        _ => "Response",
    };
    let mut head = format!("HTTP/1.1 {} {reason}\r\n", response.status);
    for (name, value) in &response.headers {
        head.push_str(&format!("{name}: {value}\r\n"));
    }
    head.push_str(&format!(
        "Content-Length: {}\r\nConnection: close\r\n\r\n",
        response.body.len()
    ));
    let _ = stream.write_all(head.as_bytes());
    let _ = stream.write_all(&response.body);
    let _ = stream.flush();
}
