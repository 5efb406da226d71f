use std::collections::BTreeMap;

use regex::Regex;

use crate::error::{Error, Result};
use crate::model::path::{PathTemplate, Segment};
use crate::model::{EndpointDef, EndpointMatch, RestCall};

use super::path::normalize_call_url;

/// A declared-type name paired with the regex its path values must satisfy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypePattern {
    pub type_name: String,
    pub value_regex: String,
}

const INT_TYPES: &[&str] =
    &["int", "Integer", "long", "Long", "short", "Short", "byte", "Byte", "BigInteger"];
const UUID_REGEX: &str =
    "[0-9a-fA-F]{8}-[0-9a-fA-F]{4}-[0-9a-fA-F]{4}-[0-9a-fA-F]{4}-[0-9a-fA-F]{12}";

/// Compiled, whole-segment-anchored value patterns keyed by type name, with
/// a catch-all for unlisted types.
#[derive(Debug, Clone)]
pub struct TypePatternSet {
    by_type: BTreeMap<String, Regex>,
    fallback: Regex,
}

impl TypePatternSet {
    /// Integer types take digit runs, UUIDs the canonical hex form, booleans
    /// the two literals; any other type accepts any single segment.
    pub fn defaults() -> Self {
        let mut patterns = Vec::new();
        for t in INT_TYPES {
            patterns.push(TypePattern { type_name: t.to_string(), value_regex: "[0-9]+".into() });
        }
        patterns.push(TypePattern { type_name: "UUID".into(), value_regex: UUID_REGEX.into() });
        for t in ["boolean", "Boolean"] {
            patterns
                .push(TypePattern { type_name: t.to_string(), value_regex: "true|false".into() });
        }
        Self::with_overrides(&patterns).expect("default patterns compile")
    }

    /// Defaults plus user-supplied patterns; an override for an already
    /// listed type name wins.
    pub fn with_overrides(overrides: &[TypePattern]) -> Result<Self> {
        let mut by_type = BTreeMap::new();
        for p in overrides {
            let compiled = Regex::new(&format!("^(?:{})$", p.value_regex))
                .map_err(|e| Error::Config(format!("type pattern {}: {e}", p.type_name)))?;
            by_type.insert(p.type_name.clone(), compiled);
        }
        Ok(TypePatternSet { by_type, fallback: Regex::new("^[^/]+$").expect("fallback compiles") })
    }

    pub fn extend(&mut self, overrides: &[TypePattern]) -> Result<()> {
        let extra = Self::with_overrides(overrides)?;
        self.by_type.extend(extra.by_type);
        Ok(())
    }

    pub fn value_matches(&self, type_name: &str, value: &str) -> bool {
        self.by_type.get(type_name).unwrap_or(&self.fallback).is_match(value)
    }
}

impl Default for TypePatternSet {
    fn default() -> Self {
        Self::defaults()
    }
}

/// Compare a normalized call path against an endpoint path. Returns the
/// specificity (count of exact literal agreements) on success.
///
/// Segment rules: literals must be equal; a call literal against an endpoint
/// variable must satisfy the variable type's value pattern; a call hole
/// against an endpoint variable always fits; a call hole against an endpoint
/// literal never does. An endpoint trailing wildcard swallows any call
/// suffix beyond the fixed segments.
pub fn match_template(
    call_path: &PathTemplate,
    endpoint_path: &PathTemplate,
    patterns: &TypePatternSet,
) -> Option<u32> {
    let call_segs = call_path.segments();
    let ep_segs = endpoint_path.segments();
    if endpoint_path.has_trailing_wildcard() {
        if call_segs.len() < ep_segs.len() {
            return None;
        }
    } else if call_path.has_trailing_wildcard() || call_segs.len() != ep_segs.len() {
        return None;
    }
    let mut specificity = 0u32;
    for (cs, es) in call_segs.iter().zip(ep_segs) {
        match (cs, es) {
            (Segment::Literal(c), Segment::Literal(e)) => {
                if c != e {
                    return None;
                }
                specificity += 1;
            }
            (Segment::Literal(c), Segment::Variable(ty)) => {
                if !patterns.value_matches(ty, c) {
                    return None;
                }
            }
            (Segment::Variable(_), Segment::Variable(_)) => {}
            (Segment::Variable(_), Segment::Literal(_)) => return None,
        }
    }
    Some(specificity)
}

/// Match one call against one endpoint: methods, segment shapes and path
/// parameter counts must all agree. Verbs outside the standard set never
/// match anything.
pub fn match_signature(
    call: &RestCall,
    endpoint: &EndpointDef,
    patterns: &TypePatternSet,
) -> Option<EndpointMatch> {
    if call.unresolvable {
        return None;
    }
    let target = normalize_call_url(&call.url).ok()?;
    match_normalized(call, &target.path, endpoint, patterns)
}

/// The body of [`match_signature`] once the call URL has been normalized;
/// callers that test many endpoints per call normalize once and reuse.
pub(crate) fn match_normalized(
    call: &RestCall,
    call_path: &PathTemplate,
    endpoint: &EndpointDef,
    patterns: &TypePatternSet,
) -> Option<EndpointMatch> {
    if !call.method.is_standard() || !endpoint.method.is_standard() {
        return None;
    }
    if call.method != endpoint.method {
        return None;
    }
    let specificity = match_template(call_path, &endpoint.path, patterns)?;
    // Path-param counts agree by construction here: the segment rules force
    // every call hole onto an endpoint variable and every endpoint variable
    // consumes exactly one call segment, so both sides count the endpoint's
    // variable segments.
    Some(EndpointMatch {
        call: call.clone(),
        endpoint: endpoint.clone(),
        specificity,
        ambiguous: false,
    })
}
