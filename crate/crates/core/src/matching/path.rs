use crate::error::{Error, Result};
use crate::model::path::{PathTemplate, Segment};
use crate::model::UrlPart;

/// A call or endpoint target after URL normalization: the path template plus
/// the hostname when one was present and fully literal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedTarget {
    pub host: Option<String>,
    pub path: PathTemplate,
}

fn split_scheme(raw: &str) -> Option<&str> {
    let lower = raw.to_ascii_lowercase();
    if lower.starts_with("http://") {
        Some(&raw[7..])
    } else if lower.starts_with("https://") {
        Some(&raw[8..])
    } else {
        None
    }
}

fn clean_host(authority: &str) -> String {
    let host = match authority.rsplit_once('@') {
        Some((_, h)) => h,
        None => authority,
    };
    let host = match host.split_once(':') {
        Some((h, _)) => h,
        None => host,
    };
    host.to_lowercase()
}

/// Normalize a raw path or URL string: the scheme and authority are split
/// off when present, the rest parses as a path template.
pub fn normalize_raw(raw: &str) -> Result<NormalizedTarget> {
    match split_scheme(raw) {
        Some(rest) => {
            let (authority, path) = match rest.find('/') {
                Some(idx) => (&rest[..idx], &rest[idx..]),
                None => (rest, ""),
            };
            Ok(NormalizedTarget {
                host: Some(clean_host(authority)),
                path: PathTemplate::parse(path).map_err(|_| Error::InvalidPath(raw.to_string()))?,
            })
        }
        None => Ok(NormalizedTarget { host: None, path: PathTemplate::parse(raw)? }),
    }
}

/// Atoms of a call URL after literal concatenation: raw text runs and typed
/// holes.
enum Atom<'a> {
    Text(&'a str),
    Hole(&'a str),
}

/// Normalize a client call URL built from literal and dynamic parts. A
/// segment containing any dynamic part becomes a Variable; the hostname is
/// only reported when the whole authority was literal.
pub fn normalize_call_url(parts: &[UrlPart]) -> Result<NormalizedTarget> {
    let mut atoms: Vec<Atom> = Vec::new();
    for part in parts {
        match part {
            UrlPart::Lit(text) => atoms.push(Atom::Text(text)),
            UrlPart::Hole(tag) => atoms.push(Atom::Hole(tag)),
        }
    }

    let mut host: Option<String> = None;
    let mut idx = 0;
    let first_text = match atoms.first() {
        Some(Atom::Text(text)) => Some(*text),
        _ => None,
    };
    if let Some(rest) = first_text.and_then(split_scheme) {
        match rest.find('/') {
            Some(slash) => {
                host = Some(clean_host(&rest[..slash]));
                atoms[0] = Atom::Text(&rest[slash..]);
            }
            None => {
                // Authority continues into later parts; a hole before the
                // first '/' makes the host dynamic.
                let mut authority = rest.to_string();
                let mut dynamic = false;
                idx = 1;
                while idx < atoms.len() {
                    let text = match &atoms[idx] {
                        Atom::Text(text) => *text,
                        Atom::Hole(_) => {
                            dynamic = true;
                            idx += 1;
                            continue;
                        }
                    };
                    match text.find('/') {
                        Some(slash) => {
                            authority.push_str(&text[..slash]);
                            atoms[idx] = Atom::Text(&text[slash..]);
                            break;
                        }
                        None => {
                            authority.push_str(text);
                            idx += 1;
                        }
                    }
                }
                if !dynamic {
                    host = Some(clean_host(&authority));
                }
            }
        }
    }

    // Assemble path segments: '/' in text ends a segment, '?' ends the path.
    let mut segments: Vec<Segment> = Vec::new();
    let mut text = String::new();
    let mut holes: Vec<&str> = Vec::new();
    let mut done = false;
    let flush = |text: &mut String, holes: &mut Vec<&str>, segments: &mut Vec<Segment>| {
        if holes.is_empty() {
            if !text.is_empty() {
                segments.push(Segment::Literal(std::mem::take(text)));
            }
        } else {
            let tag = if holes.len() == 1 && text.is_empty() { holes[0] } else { "unknown" };
            segments.push(Segment::Variable(tag.to_string()));
            text.clear();
            holes.clear();
        }
    };
    for atom in &atoms[idx..] {
        if done {
            break;
        }
        match atom {
            Atom::Text(t) => {
                for c in t.chars() {
                    match c {
                        '/' => flush(&mut text, &mut holes, &mut segments),
                        '?' => {
                            done = true;
                            break;
                        }
                        _ => text.push(c),
                    }
                }
            }
            Atom::Hole(tag) => holes.push(tag),
        }
    }
    flush(&mut text, &mut holes, &mut segments);

    let mut wildcard = false;
    if let Some(Segment::Literal(last)) = segments.last() {
        if last == "*" || last == "**" {
            wildcard = true;
            segments.pop();
        }
    }

    let path = PathTemplate::new(segments, wildcard).map_err(|_| {
        Error::InvalidPath(
            parts
                .iter()
                .map(|p| match p {
                    UrlPart::Lit(t) => t.clone(),
                    UrlPart::Hole(tag) => format!("{{{tag}}}"),
                })
                .collect::<String>(),
        )
    })?;
    Ok(NormalizedTarget { host, path })
}
