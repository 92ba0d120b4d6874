//! Structured command output.
//!
//! A report is a command echo, a digest of the command's inputs and a list
//! of records. Each record has a kind and ordered `key = value` fields whose
//! values are plain strings. Vectors are written leftmost coordinate first,
//! row numbers are 1-based.
//!
//! # Tab-separated form
//!
//! ```text
//! lamp-report<TAB>1
//! command<TAB><command line>
//! inputs_digest<TAB><sha-256 hex>
//! <kind><TAB><key>=<value><TAB><key>=<value>...
//! ```
//!
//! Values escape `\` as `\\`, tab as `\t`, newline as `\n` and carriage
//! return as `\r`. Keys never contain `=`, tabs or newlines.
//!
//! # JSON form
//!
//! `{"command": .., "inputs_digest": .., "records": [{"kind": .., "fields": {..}}]}`
//! with field order preserved.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub const TSV_MAGIC: &str = "lamp-report";
pub const TSV_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub kind: String,
    pub fields: IndexMap<String, String>,
}

impl Record {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields.get(key).map(String::as_str)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub inputs_digest: String,
    pub records: Vec<Record>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReportError {
    #[error("line {line}: {message}")]
    Tsv { line: usize, message: String },
    #[error("json: {0}")]
    Json(String),
}

impl RunReport {
    pub fn new(command: impl Into<String>, inputs_digest: impl Into<String>) -> Self {
        RunReport {
            command: command.into(),
            inputs_digest: inputs_digest.into(),
            records: Vec::new(),
        }
    }

    pub fn push<K: Into<String>, V: ToString>(
        &mut self,
        kind: &str,
        fields: impl IntoIterator<Item = (K, V)>,
    ) {
        self.records.push(Record {
            kind: kind.to_string(),
            fields: fields
                .into_iter()
                .map(|(k, v)| (k.into(), v.to_string()))
                .collect(),
        });
    }

    pub fn records_of<'a>(&'a self, kind: &'a str) -> impl Iterator<Item = &'a Record> + 'a {
        self.records.iter().filter(move |r| r.kind == kind)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = format!("{TSV_MAGIC}\t{TSV_VERSION}\n");
        out.push_str(&format!("command\t{}\n", escape(&self.command)));
        out.push_str(&format!("inputs_digest\t{}\n", escape(&self.inputs_digest)));
        for r in &self.records {
            out.push_str(&escape(&r.kind));
            for (k, v) in &r.fields {
                out.push('\t');
                out.push_str(k);
                out.push('=');
                out.push_str(&escape(v));
            }
            out.push('\n');
        }
        out
    }

    pub fn from_tsv(text: &str) -> Result<Self, ReportError> {
        let err = |line: usize, message: &str| ReportError::Tsv {
            line,
            message: message.to_string(),
        };
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        match lines.next() {
            Some((_, l)) if l == format!("{TSV_MAGIC}\t{TSV_VERSION}") => {}
            _ => return Err(err(1, "missing report header")),
        }
        let mut header = |name: &str| -> Result<String, ReportError> {
            let (line, l) = lines.next().ok_or_else(|| err(0, "truncated report"))?;
            match l.split_once('\t') {
                Some((k, v)) if k == name => unescape(v).ok_or_else(|| err(line, "bad escape")),
                _ => Err(err(line, &format!("expected {name}"))),
            }
        };
        let command = header("command")?;
        let inputs_digest = header("inputs_digest")?;
        let mut records = Vec::new();
        for (line, l) in lines {
            let mut parts = l.split('\t');
            let kind =
                unescape(parts.next().unwrap_or("")).ok_or_else(|| err(line, "bad escape"))?;
            let mut fields = IndexMap::new();
            for part in parts {
                let (k, v) = part
                    .split_once('=')
                    .ok_or_else(|| err(line, "field without '='"))?;
                let v = unescape(v).ok_or_else(|| err(line, "bad escape"))?;
                if fields.insert(k.to_string(), v).is_some() {
                    return Err(err(line, &format!("repeated field {k:?}")));
                }
            }
            records.push(Record { kind, fields });
        }
        Ok(RunReport {
            command,
            inputs_digest,
            records,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, ReportError> {
        serde_json::from_str(text).map_err(|e| ReportError::Json(e.to_string()))
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}

fn unescape(s: &str) -> Option<String> {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        out.push(match chars.next()? {
            '\\' => '\\',
            't' => '\t',
            'n' => '\n',
            'r' => '\r',
            _ => return None,
        });
    }
    Some(out)
}

/// SHA-256 over the inputs, each prefixed by its length so that boundaries
/// between parts are unambiguous.
pub fn inputs_digest<'a>(parts: impl IntoIterator<Item = &'a [u8]>) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    hex::encode(h.finalize())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample() -> RunReport {
        let mut r = RunReport::new(
            "lamp query t.tsv --m 1010",
            inputs_digest([b"abc".as_slice()]),
        );
        r.push("best", [("row", "2"), ("label", "F\t2"), ("index", "0/4")]);
        r.push("note", [("text", "a=b\\c\nnext")]);
        r.push("empty", Vec::<(&str, &str)>::new());
        r
    }

    #[test]
    fn tsv_round_trip() {
        let r = sample();
        let text = r.to_tsv();
        assert!(text.starts_with("lamp-report\t1\ncommand\tlamp query"));
        assert!(text.contains("best\trow=2\tlabel=F\\t2\tindex=0/4\n"));
        assert_eq!(RunReport::from_tsv(&text).unwrap(), r);
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        assert_eq!(RunReport::from_json(&r.to_json()).unwrap(), r);
    }

    #[test]
    fn digest_separates_parts() {
        let a = inputs_digest([b"ab".as_slice(), b"c".as_slice()]);
        let b = inputs_digest([b"a".as_slice(), b"bc".as_slice()]);
        assert_ne!(a, b);
        assert_eq!(a.len(), 64);
    }

    #[test]
    fn rejects_garbage() {
        assert!(RunReport::from_tsv("hello").is_err());
        assert!(
            RunReport::from_tsv("lamp-report\t1\ncommand\tx\ninputs_digest\td\nk\tnoequals")
                .is_err()
        );
        assert!(RunReport::from_tsv("lamp-report\t1\ncommand\tbad\\q\ninputs_digest\td").is_err());
    }

    proptest! {
        #[test]
        fn any_strings_survive(cmd in ".*", kind in "[a-z]{1,6}", vals in proptest::collection::vec(".*", 0..5)) {
            let mut r = RunReport::new(cmd, "d");
            r.push(&kind, vals.iter().enumerate().map(|(i, v)| (format!("k{i}"), v.clone())));
            prop_assert_eq!(RunReport::from_tsv(&r.to_tsv()).unwrap(), r.clone());
            prop_assert_eq!(RunReport::from_json(&r.to_json()).unwrap(), r);
        }
    }
}
