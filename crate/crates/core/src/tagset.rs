//! The closed tag inventory.
//!
//! Part-of-speech tags are numbered from 0 in file order. Three reserved
//! symbols are appended after them: the start-of-sentence symbol and the two
//! hypertags that open and close the subject. Hypertags take part in tuple
//! features exactly like ordinary tags.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};

/// Reserved names that may not appear in a tagset file.
pub const RESERVED: [&str; 3] = ["STRT", "OPEN", "CLOSE"];

/// Index of a symbol in a [`TagSet`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TagId(pub u16);

impl TagId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TagSet {
    tags: Vec<String>,
    by_name: HashMap<String, TagId>,
}

impl TagSet {
    /// Builds a tagset from part-of-speech names, appending the reserved symbols.
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let mut tags = Vec::with_capacity(names.len() + 3);
        let mut by_name = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            let name = name.as_ref();
            check_name(name).map_err(|msg| Error::format("tagset", i + 1, msg))?;
            if by_name.insert(name.to_string(), TagId(i as u16)).is_some() {
                return Err(Error::format("tagset", i + 1, format!("duplicate tag `{name}`")));
            }
            tags.push(name.to_string());
        }
        if tags.is_empty() {
            return Err(Error::Empty("tagset has no tags"));
        }
        for r in RESERVED {
            let id = TagId(tags.len() as u16);
            by_name.insert(r.to_string(), id);
            tags.push(r.to_string());
        }
        by_name.insert("[".into(), TagId((tags.len() - 2) as u16));
        by_name.insert("]".into(), TagId((tags.len() - 1) as u16));
        by_name.insert("strt".into(), TagId((tags.len() - 3) as u16));
        Ok(TagSet { tags, by_name })
    }

    /// Parses the tagset file format: one tag per line, `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut names = Vec::new();
        let mut lines = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = strip_comment(raw).trim();
            if line.is_empty() {
                continue;
            }
            names.push(line);
            lines.push(lineno + 1);
        }
        // Re-run validation so errors carry the physical line number.
        TagSet::new(&names).map_err(|e| match e {
            Error::Format { what, line, msg } => Error::Format {
                what,
                line: lines[line - 1],
                msg,
            },
            other => other,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        TagSet::parse(&text)
    }

    /// The 19-tag inventory shipped with the crate.
    pub fn default_set() -> Self {
        TagSet::parse(crate::resources::DEFAULT_TAGSET).expect("bundled tagset is valid")
    }

    /// Total symbol count, reserved symbols included.
    pub fn m(&self) -> usize {
        self.tags.len()
    }

    pub fn pos_count(&self) -> usize {
        self.tags.len() - 3
    }

    pub fn start_id(&self) -> TagId {
        TagId((self.tags.len() - 3) as u16)
    }

    pub fn open_id(&self) -> TagId {
        TagId((self.tags.len() - 2) as u16)
    }

    pub fn close_id(&self) -> TagId {
        TagId((self.tags.len() - 1) as u16)
    }

    pub fn is_pos(&self, id: TagId) -> bool {
        id.index() < self.pos_count()
    }

    pub fn pos_ids(&self) -> impl Iterator<Item = TagId> {
        (0..self.pos_count() as u16).map(TagId)
    }

    /// Looks a symbol up by name. The reserved symbols also answer to
    /// `strt`, `[` and `]`.
    pub fn id(&self, name: &str) -> Option<TagId> {
        self.by_name.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<TagId> {
        self.id(name).ok_or_else(|| Error::UnknownTag(name.to_string()))
    }

    /// File name of a tag (`STRT`, `OPEN`, `CLOSE` for the reserved ones).
    pub fn name(&self, id: TagId) -> &str {
        &self.tags[id.index()]
    }

    /// Display form used in traces: `strt`, `[`, `]` for the reserved symbols.
    pub fn display(&self, id: TagId) -> &str {
        if id == self.start_id() {
            "strt"
        } else if id == self.open_id() {
            "["
        } else if id == self.close_id() {
            "]"
        } else {
            self.name(id)
        }
    }

    pub fn render(&self, seq: &[TagId]) -> String {
        let parts: Vec<&str> = seq.iter().map(|&t| self.display(t)).collect();
        parts.join(" ")
    }

    /// Parses a whitespace-separated symbol string such as `strt [ noun ] verb`.
    pub fn parse_sequence(&self, s: &str) -> Result<Vec<TagId>> {
        s.split_whitespace().map(|t| self.require(t)).collect()
    }

    pub fn pos_names(&self) -> &[String] {
        &self.tags[..self.pos_count()]
    }
}

impl fmt::Display for TagSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for name in self.pos_names() {
            writeln!(f, "{name}")?;
        }
        Ok(())
    }
}

fn check_name(name: &str) -> std::result::Result<(), String> {
    if name.is_empty() {
        return Err("empty tag name".into());
    }
    if name.chars().any(char::is_whitespace) {
        return Err(format!("tag `{name}` contains whitespace"));
    }
    if RESERVED.contains(&name) || matches!(name, "[" | "]" | "strt") {
        return Err(format!("`{name}` is a reserved symbol"));
    }
    // Tag names appear in comma-separated lexicon entries.
    if name.contains(',') {
        return Err(format!("tag `{name}` contains a comma"));
    }
    Ok(())
}

pub(crate) fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_set_has_22_symbols() {
        let ts = TagSet::default_set();
        assert_eq!(ts.pos_count(), 19);
        assert_eq!(ts.m(), 22);
        assert_ne!(ts.start_id(), ts.open_id());
        assert_ne!(ts.open_id(), ts.close_id());
    }

    #[test]
    fn single_tag_file() {
        let ts = TagSet::parse("noun\n").unwrap();
        assert_eq!(ts.m(), 4);
        assert_eq!(ts.id("noun"), Some(TagId(0)));
        assert_eq!(ts.id("["), Some(ts.open_id()));
    }

    #[test]
    fn duplicate_reports_line() {
        let err = TagSet::parse("# header\nnoun\nverb\nnoun\n").unwrap_err();
        match err {
            Error::Format { line, msg, .. } => {
                assert_eq!(line, 4);
                assert!(msg.contains("duplicate"));
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn empty_and_reserved_rejected() {
        assert!(matches!(TagSet::parse("# nothing\n\n"), Err(Error::Empty(_))));
        let err = TagSet::parse("noun\nOPEN\n").unwrap_err();
        assert!(matches!(err, Error::Format { line: 2, .. }));
    }

    #[test]
    fn render_uses_bracket_symbols() {
        let ts = TagSet::parse("noun\nverb\n").unwrap();
        let seq = ts.parse_sequence("strt [ noun ] verb").unwrap();
        assert_eq!(ts.render(&seq), "strt [ noun ] verb");
        assert_eq!(ts.name(seq[1]), "OPEN");
    }
}
