//! Minimal ordered `key = value` reader shared by the model and report
//! parsers.

use std::str::FromStr;

use crate::error::{Error, Result};

pub(crate) struct KvReader<'a> {
    source: String,
    entries: Vec<(u64, &'a str, &'a str)>,
    pos: usize,
}

impl<'a> KvReader<'a> {
    pub(crate) fn new(source: impl Into<String>, text: &'a str) -> Result<Self> {
        let source = source.into();
        let mut entries = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx as u64 + 1;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(&source, line_no, "expected `key = value`"))?;
            let value = value.strip_prefix(' ').unwrap_or(value);
            entries.push((line_no, key.trim(), value));
        }
        Ok(KvReader {
            source,
            entries,
            pos: 0,
        })
    }

    fn line(&self) -> u64 {
        self.entries
            .get(self.pos)
            .or(self.entries.last())
            .map_or(0, |e| e.0)
    }

    pub(crate) fn error(&self, message: impl Into<String>) -> Error {
        Error::parse(&self.source, self.line(), message)
    }

    /// Next value, which must carry `key`.
    pub(crate) fn raw(&mut self, key: &str) -> Result<&'a str> {
        match self.entries.get(self.pos) {
            Some(&(_, k, v)) if k == key => {
                self.pos += 1;
                Ok(v)
            }
            Some(&(_, k, _)) => Err(self.error(format!("expected key `{key}`, found `{k}`"))),
            None => Err(self.error(format!("missing key `{key}`"))),
        }
    }

    pub(crate) fn value<T: FromStr>(&mut self, key: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        let raw = self.raw(key)?;
        raw.trim().parse().map_err(|e: T::Err| {
            self.pos -= 1;
            let err = self.error(format!("bad value for `{key}`: {e}"));
            self.pos += 1;
            err
        })
    }

    /// Whitespace-separated fields of the next `key` entry; the final field
    /// takes the rest of the line verbatim.
    pub(crate) fn fields(&mut self, key: &str, count: usize) -> Result<Vec<&'a str>> {
        let raw = self.raw(key)?;
        let mut out = Vec::with_capacity(count);
        let mut rest = raw;
        for _ in 1..count {
            let (head, tail) = rest.split_once(' ').ok_or_else(|| {
                self.pos -= 1;
                let e = self.error(format!("`{key}` needs {count} fields"));
                self.pos += 1;
                e
            })?;
            out.push(head);
            rest = tail;
        }
        out.push(rest);
        Ok(out)
    }

    pub(crate) fn parse_field<T: FromStr>(&self, key: &str, field: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        field.parse().map_err(|e: T::Err| {
            Error::parse(
                &self.source,
                self.entries[self.pos.saturating_sub(1)].0,
                format!("bad field {field:?} in `{key}`: {e}"),
            )
        })
    }

    pub(crate) fn peek_key(&self) -> Option<&'a str> {
        self.entries.get(self.pos).map(|e| e.1)
    }

    pub(crate) fn finish(&self) -> Result<()> {
        match self.entries.get(self.pos) {
            None => Ok(()),
            Some(&(_, k, _)) => Err(self.error(format!("unexpected key `{k}`"))),
        }
    }
}

/// `-` for `None`.
pub(crate) fn opt_field(value: Option<String>) -> String {
    value.unwrap_or_else(|| "-".into())
}
