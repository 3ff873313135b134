//! Content-derived artifact ids: a kind prefix plus the first 16 hex digits
//! of the SHA-256 of the artifact's canonical JSON (with its own id left
//! out). Identical content always yields the same id.

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::model::{Ident, TestReport, TestStory, TestTrace, TraceRecord, TraceEvent, Lof};

pub fn content_id(prefix: &str, bytes: &[u8]) -> Ident {
    let digest = Sha256::digest(bytes);
    Ident::new(format!("{prefix}-{}", &hex::encode(digest)[..16])).expect("prefix is an identifier")
}

/// Full hex SHA-256 of `bytes`.
pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn canonical<T: Serialize>(v: &T) -> Vec<u8> {
    serde_json::to_vec(v).expect("domain types serialize")
}

fn blank() -> Ident {
    Ident::new("x").expect("static id")
}

pub fn story_id(story: &TestStory) -> Ident {
    let mut s = story.clone();
    s.id = blank();
    content_id("st", &canonical(&s))
}

pub fn trace_id(trace: &TestTrace) -> Ident {
    #[derive(Serialize)]
    struct Key<'a> {
        story_id: &'a Ident,
        lof: Lof,
        records: &'a [TraceRecord],
        events: &'a [TraceEvent],
    }
    content_id(
        "tr",
        &canonical(&Key {
            story_id: &trace.story_id,
            lof: trace.lof,
            records: &trace.records,
            events: &trace.events,
        }),
    )
}

pub fn report_id(report: &TestReport) -> Ident {
    let mut r = report.clone();
    r.id = blank();
    content_id("rp", &canonical(&r))
}
