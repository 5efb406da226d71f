use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// One segment of a normalized path template.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Segment {
    /// Fixed path text, never empty, never containing '/'.
    Literal(String),
    /// A placeholder; the payload is the declared-type tag (e.g. "String",
    /// "Integer", "unknown") once endpoint parameters have been resolved.
    Variable(String),
}

impl Segment {
    pub fn is_literal(&self) -> bool {
        matches!(self, Segment::Literal(_))
    }

    pub fn literal(&self) -> Option<&str> {
        match self {
            Segment::Literal(text) => Some(text),
            Segment::Variable(_) => None,
        }
    }
}

/// A normalized endpoint or call path: ordered segments plus an optional
/// trailing wildcard (`/**`) that matches any suffix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PathTemplate {
    segments: Vec<Segment>,
    trailing_wildcard: bool,
}

impl PathTemplate {
    pub fn new(segments: Vec<Segment>, trailing_wildcard: bool) -> Result<Self> {
        if segments.is_empty() && !trailing_wildcard {
            return Err(Error::InvalidPath(String::new()));
        }
        for seg in &segments {
            if let Segment::Literal(text) = seg {
                if text.is_empty() || text.contains('/') {
                    return Err(Error::InvalidPath(text.clone()));
                }
            }
        }
        Ok(Self { segments, trailing_wildcard })
    }

    /// Parse a raw path string into a template. Empty segments collapse,
    /// query strings are stripped, `{name}` / `{name:type}` become variables
    /// (tagged with the type when given, the name otherwise), and a final
    /// `*` or `**` segment becomes the trailing wildcard. Idempotent over
    /// rendered templates.
    pub fn parse(raw: &str) -> Result<Self> {
        let without_query = match raw.split_once('?') {
            Some((head, _)) => head,
            None => raw,
        };
        let mut segments = Vec::new();
        let mut wildcard = false;
        let pieces: Vec<&str> = without_query.split('/').filter(|p| !p.is_empty()).collect();
        for (idx, piece) in pieces.iter().enumerate() {
            let last = idx + 1 == pieces.len();
            if last && (*piece == "*" || *piece == "**") {
                wildcard = true;
                continue;
            }
            if piece.starts_with('{') && piece.ends_with('}') && piece.len() > 2 {
                let inner = &piece[1..piece.len() - 1];
                let tag = match inner.split_once(':') {
                    Some((_, ty)) if !ty.is_empty() => ty,
                    _ => inner,
                };
                segments.push(Segment::Variable(tag.trim().to_string()));
            } else {
                segments.push(Segment::Literal((*piece).to_string()));
            }
        }
        Self::new(segments, wildcard).map_err(|_| Error::InvalidPath(raw.to_string()))
    }

    /// Render back to the canonical string form, `/seg/{Type}` with a
    /// trailing `/**` when the wildcard is set.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for seg in &self.segments {
            out.push('/');
            match seg {
                Segment::Literal(text) => out.push_str(text),
                Segment::Variable(tag) => {
                    out.push('{');
                    out.push_str(tag);
                    out.push('}');
                }
            }
        }
        if self.trailing_wildcard {
            out.push_str("/**");
        }
        out
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn has_trailing_wildcard(&self) -> bool {
        self.trailing_wildcard
    }

    pub fn variable_count(&self) -> usize {
        self.segments.iter().filter(|s| !s.is_literal()).count()
    }

    /// Replace the tag of the `index`-th variable segment (0-based among
    /// variables only).
    pub fn retag_variable(&mut self, index: usize, tag: &str) {
        let mut seen = 0usize;
        for seg in &mut self.segments {
            if let Segment::Variable(t) = seg {
                if seen == index {
                    *t = tag.to_string();
                    return;
                }
                seen += 1;
            }
        }
    }
}

impl fmt::Display for PathTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Serialize for PathTemplate {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.render())
    }
}

impl<'de> Deserialize<'de> for PathTemplate {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = String::deserialize(deserializer)?;
        PathTemplate::parse(&raw).map_err(|e| D::Error::custom(e.to_string()))
    }
}
