//! Text formats for symbol files.
//!
//! A word file starts with a header line `r m q` followed by `n` lines, one
//! symbol per line as a decimal enumeration index, or `?` for an erasure.
//! A message file holds `k` such symbols (no header, no erasures). Blank lines
//! and lines starting with `#` are ignored when reading.

use std::fmt::Write as _;

use crate::code::CodeParams;
use crate::error::{Error, Result};
use crate::gf::FieldElement;

pub const ERASURE_MARKER: &str = "?";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordFile {
    pub params: CodeParams,
    pub symbols: Vec<Option<FieldElement>>,
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_symbol(line_no: usize, token: &str, q: usize) -> Result<Option<FieldElement>> {
    if token == ERASURE_MARKER {
        return Ok(None);
    }
    let v: usize = token
        .parse()
        .map_err(|_| Error::Parse(format!("line {line_no}: '{token}' is not a symbol")))?;
    if v >= q {
        return Err(Error::Parse(format!(
            "line {line_no}: symbol {v} is not below q={q}"
        )));
    }
    Ok(Some(FieldElement(v as u8)))
}

pub fn parse_word(text: &str) -> Result<WordFile> {
    let mut lines = content_lines(text);
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::Parse("missing 'r m q' header".into()))?;
    let fields: Vec<usize> = header
        .split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| Error::Parse(format!("bad header '{header}'")))
        })
        .collect::<Result<_>>()?;
    let [r, m, q] = fields[..] else {
        return Err(Error::Parse(format!("header '{header}' must be 'r m q'")));
    };
    let params = CodeParams::new(r, m, q)?;
    let symbols = lines
        .map(|(no, l)| parse_symbol(no, l, q))
        .collect::<Result<Vec<_>>>()?;
    if symbols.len() != params.n {
        return Err(Error::Parse(format!(
            "expected {} symbols, found {}",
            params.n,
            symbols.len()
        )));
    }
    Ok(WordFile { params, symbols })
}

pub fn render_word(params: &CodeParams, symbols: &[Option<FieldElement>]) -> String {
    let mut out = format!("{} {} {}\n", params.r, params.m, params.q);
    for s in symbols {
        match s {
            Some(v) => writeln!(out, "{v}"),
            None => writeln!(out, "{ERASURE_MARKER}"),
        }
        .expect("writing to a String");
    }
    out
}

pub fn parse_message(text: &str, params: &CodeParams) -> Result<Vec<FieldElement>> {
    let symbols = content_lines(text)
        .flat_map(|(no, l)| l.split_whitespace().map(move |t| (no, t)))
        .map(|(no, t)| {
            parse_symbol(no, t, params.q)?
                .ok_or_else(|| Error::Parse(format!("line {no}: messages cannot contain erasures")))
        })
        .collect::<Result<Vec<_>>>()?;
    if symbols.len() != params.k {
        return Err(Error::Parse(format!(
            "expected {} message symbols, found {}",
            params.k,
            symbols.len()
        )));
    }
    Ok(symbols)
}
