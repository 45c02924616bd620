//! Printable-string extraction from binary content.

/// A maximal printable-ASCII run and the byte offset it starts at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoundString {
    pub text: String,
    pub offset: usize,
}

fn is_printable(b: u8) -> bool {
    (0x20..=0x7E).contains(&b)
}

/// Extract maximal runs of printable ASCII of at least `min_len` bytes.
///
/// Runs separated by even a single non-printable byte are never merged.
pub fn extract_strings(bytes: &[u8], min_len: usize) -> Vec<FoundString> {
    debug_assert!(min_len >= 4, "min_len below 4 floods the output with noise");
    let min_len = min_len.max(1);
    let mut out = Vec::new();
    let mut start = None;
    for (i, &b) in bytes.iter().enumerate() {
        match (is_printable(b), start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                if i - s >= min_len {
                    out.push(FoundString {
                        text: String::from_utf8_lossy(&bytes[s..i]).into_owned(),
                        offset: s,
                    });
                }
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        if bytes.len() - s >= min_len {
            out.push(FoundString {
                text: String::from_utf8_lossy(&bytes[s..]).into_owned(),
                offset: s,
            });
        }
    }
    out
}
