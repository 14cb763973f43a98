//! Reading and writing bitrades as JSON documents or plain text.
//!
//! Text layout: a header `n q kind`, then one line per word consisting of the
//! part tag `0` or `1` followed by the symbols, all separated by single
//! spaces. Both writers emit each part in lexicographic order.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::construct::{Bitrade, BitradeKind};
use crate::error::{param, Error, Result};
use crate::hamming::{Code, HammingParams, Word};

pub const FORMAT_VERSION: &str = "1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            other => param(format!("unknown format '{other}' (expected json or text)")),
        }
    }
}

impl Format {
    /// JSON if the first non-blank character opens an object, text otherwise.
    pub fn detect(input: &str) -> Format {
        if input.trim_start().starts_with('{') {
            Format::Json
        } else {
            Format::Text
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BitradeDocument {
    pub format_version: String,
    pub n: usize,
    pub q: usize,
    pub kind: BitradeKind,
    pub t0: Vec<Vec<u16>>,
    pub t1: Vec<Vec<u16>>,
}

impl BitradeDocument {
    pub fn from_bitrade(b: &Bitrade) -> Self {
        let words = |c: &Code| c.iter().map(|w| w.symbols().to_vec()).collect();
        Self {
            format_version: FORMAT_VERSION.to_string(),
            n: b.params().n(),
            q: b.params().q(),
            kind: b.kind(),
            t0: words(b.t0()),
            t1: words(b.t1()),
        }
    }

    /// Validates the document and builds an unverified bitrade from it.
    pub fn into_bitrade(self) -> Result<Bitrade> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::Document(format!(
                "unsupported format_version '{}' (expected '{FORMAT_VERSION}')",
                self.format_version
            )));
        }
        let params = HammingParams::new(self.n, self.q)?;
        let t0 = part_code(params, &self.t0, 0).map_err(to_document)?;
        let t1 = part_code(params, &self.t1, 1).map_err(to_document)?;
        finish(t0, t1, self.kind).map_err(to_document)
    }
}

fn to_document(e: Error) -> Error {
    match e {
        Error::Parameter(m) | Error::Domain(m) => Error::Document(m),
        other => other,
    }
}

fn part_code(params: HammingParams, words: &[Vec<u16>], part: usize) -> Result<Code> {
    let mut code = Code::new(params);
    for symbols in words {
        let w = params.word(symbols.clone())?;
        if !code.insert(w.clone())? {
            return param(format!("word {w} repeated in T{part}"));
        }
    }
    Ok(code)
}

fn finish(t0: Code, t1: Code, kind: BitradeKind) -> Result<Bitrade> {
    if t0.is_empty() && t1.is_empty() {
        return param("bitrade has no words");
    }
    let mut b = Bitrade::new(t0, t1, kind)?;
    b.set_unverified(true);
    Ok(b)
}

/// Pretty-printed, with each word as a one-line array so diffs stay per word.
pub fn to_json(b: &Bitrade) -> String {
    json_layout(&BitradeDocument::from_bitrade(b)).expect("documents always serialize")
}

fn json_layout(doc: &BitradeDocument) -> Result<String> {
    let words = |list: &[Vec<u16>]| {
        if list.is_empty() {
            return "[]".to_string();
        }
        let body = list
            .iter()
            .map(|w| {
                format!(
                    "    {}",
                    serde_json::to_string(w).expect("integer arrays serialize")
                )
            })
            .collect::<Vec<_>>()
            .join(",\n");
        format!("[\n{body}\n  ]")
    };
    Ok(format!(
        "{{\n  \"format_version\": {},\n  \"n\": {},\n  \"q\": {},\n  \"kind\": {},\n  \"t0\": {},\n  \"t1\": {}\n}}\n",
        serde_json::to_string(&doc.format_version)?,
        doc.n,
        doc.q,
        serde_json::to_string(&doc.kind)?,
        words(&doc.t0),
        words(&doc.t1),
    ))
}

pub fn from_json(input: &str) -> Result<Bitrade> {
    if input.trim().is_empty() {
        return Err(Error::Document("empty input".into()));
    }
    let doc: BitradeDocument = serde_json::from_str(input)?;
    doc.into_bitrade()
}

pub fn to_text(b: &Bitrade) -> String {
    let p = b.params();
    let mut out = format!("{} {} {}\n", p.n(), p.q(), b.kind());
    for (w, part) in b.tagged_words() {
        write!(out, "{part}").unwrap();
        for s in w.symbols() {
            write!(out, " {s}").unwrap();
        }
        out.push('\n');
    }
    out
}

fn format_err<T>(line: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Format {
        line,
        message: message.into(),
    })
}

/// Splits on single spaces, rejecting empty fields.
fn fields(line: &str, number: usize) -> Result<Vec<&str>> {
    let fields: Vec<&str> = line.split(' ').collect();
    if fields.iter().any(|f| f.is_empty()) {
        return format_err(number, "fields must be separated by single spaces");
    }
    Ok(fields)
}

fn number<T: std::str::FromStr>(field: &str, line: usize, what: &str) -> Result<T> {
    if !field.bytes().all(|b| b.is_ascii_digit()) {
        return format_err(line, format!("{what} '{field}' is not a decimal integer"));
    }
    field
        .parse()
        .or_else(|_| format_err(line, format!("{what} '{field}' is out of range")))
}

pub fn from_text(input: &str) -> Result<Bitrade> {
    let body = input.strip_suffix('\n').unwrap_or(input);
    if body.is_empty() {
        return Err(Error::Document("empty input".into()));
    }
    let mut lines = body.split('\n').enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().expect("split yields at least one line");
    let head = fields(header, 1)?;
    let [n, q, kind] = head[..] else {
        return format_err(1, "header must be 'n q kind'");
    };
    let n: usize = number(n, 1, "n")?;
    let q: usize = number(q, 1, "q")?;
    let kind: BitradeKind = kind
        .parse()
        .or_else(|_| format_err(1, format!("unknown kind '{kind}'")))?;
    let params = HammingParams::new(n, q).or_else(|e| format_err(1, e.to_string()))?;
    let mut parts = [Code::new(params), Code::new(params)];
    for (number_, line) in lines {
        let f = fields(line, number_)?;
        let tag = match f[0] {
            "0" => 0,
            "1" => 1,
            other => return format_err(number_, format!("part tag must be 0 or 1, got '{other}'")),
        };
        if f.len() != n + 1 {
            return format_err(
                number_,
                format!("expected {n} symbols, got {}", f.len() - 1),
            );
        }
        let symbols = f[1..]
            .iter()
            .map(|s| number::<u16>(s, number_, "symbol"))
            .collect::<Result<Vec<_>>>()?;
        let w = Word::new(params, symbols).or_else(|e| format_err(number_, e.to_string()))?;
        if parts[1 - tag].contains(&w) {
            return format_err(number_, format!("word {w} occurs in both parts"));
        }
        if !parts[tag].insert(w.clone())? {
            return format_err(number_, format!("word {w} repeated in T{tag}"));
        }
    }
    let [t0, t1] = parts;
    finish(t0, t1, kind).map_err(to_document)
}

pub fn render(b: &Bitrade, format: Format) -> String {
    match format {
        Format::Json => to_json(b),
        Format::Text => to_text(b),
    }
}

/// Parses either format, detected from the content.
pub fn parse(input: &str) -> Result<Bitrade> {
    match Format::detect(input) {
        Format::Json => from_json(input),
        Format::Text => from_text(input),
    }
}

pub fn load(path: impl AsRef<Path>) -> Result<Bitrade> {
    parse(&std::fs::read_to_string(path)?)
}

pub fn save(path: impl AsRef<Path>, b: &Bitrade, format: Format) -> Result<()> {
    std::fs::write(path, render(b, format))?;
    Ok(())
}
