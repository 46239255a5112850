//! Line-oriented reports: `key = value` pairs in caller order, grouped
//! into sections separated by single blank lines. Output is a pure
//! function of the write sequence, so identical runs produce identical
//! bytes.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Line {
    Pair(String, String),
    Raw(String),
    Blank,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    lines: Vec<Line>,
}

impl Report {
    pub fn new() -> Report {
        Report::default()
    }

    pub fn kv(&mut self, key: &str, value: impl fmt::Display) -> &mut Self {
        self.lines.push(Line::Pair(key.to_owned(), value.to_string()));
        self
    }

    /// Verbatim line, for content that is not a pair (move logs, notes).
    pub fn raw(&mut self, line: &str) -> &mut Self {
        self.lines.push(Line::Raw(line.to_owned()));
        self
    }

    /// Starts a new section: inserts one blank line unless the report is
    /// empty or already ends with one.
    pub fn section(&mut self) -> &mut Self {
        if !matches!(self.lines.last(), None | Some(Line::Blank)) {
            self.lines.push(Line::Blank);
        }
        self
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for line in &self.lines {
            match line {
                Line::Pair(k, v) => {
                    out.push_str(k);
                    out.push_str(" = ");
                    out.push_str(v);
                }
                Line::Raw(s) => out.push_str(s),
                Line::Blank => {}
            }
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Renders a comma-separated list, the report convention for tuples.
pub fn comma_list<T: fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items
        .into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}
