pub mod matrices;
pub mod path;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use matrices::{Ddm, DepClass, Edm, Sdm, SdmCell, sdm_display, sdm_parse};
pub use path::{PathTemplate, Segment};

/// A discovered microservice with its stable display ordinal. Ordinals are
/// assigned by lexicographic order of name, 1-based, so they are reproducible
/// for any input tree.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ServiceId {
    pub name: String,
    pub ordinal: u32,
}

/// Where a fact was extracted from, relative to the source root.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SourceLoc {
    pub file: String,
    pub line: u32,
}

impl fmt::Display for SourceLoc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.file, self.line)
    }
}

/// The seven standard verbs plus a verbatim catch-all. Unknown verbs are
/// carried through unchanged and never participate in matching.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum HttpMethod {
    Get,
    Post,
    Put,
    Delete,
    Patch,
    Head,
    Options,
    Other(String),
}

impl HttpMethod {
    pub fn from_verb(verb: &str) -> Self {
        match verb.to_ascii_uppercase().as_str() {
            "GET" => HttpMethod::Get,
            "POST" => HttpMethod::Post,
            "PUT" => HttpMethod::Put,
            "DELETE" => HttpMethod::Delete,
            "PATCH" => HttpMethod::Patch,
            "HEAD" => HttpMethod::Head,
            "OPTIONS" => HttpMethod::Options,
            _ => HttpMethod::Other(verb.to_string()),
        }
    }

    pub fn as_str(&self) -> &str {
        match self {
            HttpMethod::Get => "GET",
            HttpMethod::Post => "POST",
            HttpMethod::Put => "PUT",
            HttpMethod::Delete => "DELETE",
            HttpMethod::Patch => "PATCH",
            HttpMethod::Head => "HEAD",
            HttpMethod::Options => "OPTIONS",
            HttpMethod::Other(verb) => verb,
        }
    }

    pub fn is_standard(&self) -> bool {
        !matches!(self, HttpMethod::Other(_))
    }
}

impl fmt::Display for HttpMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl PartialOrd for HttpMethod {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HttpMethod {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.as_str().cmp(other.as_str())
    }
}

impl Serialize for HttpMethod {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for HttpMethod {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let verb = String::deserialize(d)?;
        Ok(HttpMethod::from_verb(&verb))
    }
}

/// Whether an endpoint parameter is bound from the path, the query string,
/// or the request body.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamKind {
    Path,
    Query,
    Body,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ParamDef {
    pub name: String,
    pub declared_type: String,
    pub kind: ParamKind,
}

/// A server-side HTTP endpoint: the exposed path, verb, parameters and
/// return type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EndpointDef {
    pub service: String,
    pub path: PathTemplate,
    pub method: HttpMethod,
    pub params: Vec<ParamDef>,
    pub return_type: String,
    pub source_loc: SourceLoc,
}

impl EndpointDef {
    /// Path parameters must cover the path's variable segments one-to-one.
    pub fn check(&self) -> Result<()> {
        let vars = self.path.variable_count();
        let path_params = self.params.iter().filter(|p| p.kind == ParamKind::Path).count();
        if vars != path_params {
            return Err(Error::IrValidation {
                context: format!("{} {}", self.method, self.path),
                message: format!(
                    "path has {vars} variable segments but {path_params} path params"
                ),
            });
        }
        Ok(())
    }
}

/// One piece of a client-side request URL: literal text, or a dynamic hole
/// tagged with the inferred type of the interpolated expression.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UrlPart {
    Lit(String),
    Hole(String),
}

impl UrlPart {
    pub fn lit(text: impl Into<String>) -> Self {
        UrlPart::Lit(text.into())
    }

    pub fn hole(tag: impl Into<String>) -> Self {
        UrlPart::Hole(tag.into())
    }
}

/// A client-side REST invocation found in the caller's source.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RestCall {
    pub caller: String,
    pub url: Vec<UrlPart>,
    pub method: HttpMethod,
    pub arg_count: u32,
    pub expected_return_type: String,
    pub source_loc: SourceLoc,
    /// True when no usable target could be reconstructed (fully dynamic URL
    /// or unrecoverable verb); such calls are excluded from matching.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub unresolvable: bool,
}

impl RestCall {
    pub fn has_literal_part(&self) -> bool {
        self.url.iter().any(|p| matches!(p, UrlPart::Lit(_)))
    }

    /// Human-readable URL with holes shown as `{Type}` placeholders.
    pub fn url_display(&self) -> String {
        self.url
            .iter()
            .map(|p| match p {
                UrlPart::Lit(text) => text.clone(),
                UrlPart::Hole(tag) => format!("{{{tag}}}"),
            })
            .collect()
    }
}

/// Whether an entity class is backed by a persistence annotation or is a
/// plain transfer object.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntityKind {
    Persistent,
    Dto,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EntityField {
    pub name: String,
    pub type_name: String,
}

/// A data-carrying class: a persistent entity or a DTO.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EntityDef {
    pub service: String,
    pub name: String,
    pub fields: Vec<EntityField>,
    pub kind: EntityKind,
    pub annotations: Vec<String>,
    pub source_loc: SourceLoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SystemMeta {
    pub source_root: String,
    pub revision: String,
    pub tool_version: String,
}

impl SystemMeta {
    pub fn unversioned(source_root: impl Into<String>) -> Self {
        SystemMeta {
            source_root: source_root.into(),
            revision: "unversioned".to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

/// Everything extracted from one system revision: the service list and the
/// endpoint, call and entity facts. This is the unit that serializes to and
/// from the intermediate JSON file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SystemIR {
    pub services: Vec<String>,
    pub endpoints: Vec<EndpointDef>,
    pub calls: Vec<RestCall>,
    pub entities: Vec<EntityDef>,
    pub meta: SystemMeta,
}

impl SystemIR {
    pub fn new(meta: SystemMeta) -> Self {
        SystemIR {
            services: Vec::new(),
            endpoints: Vec::new(),
            calls: Vec::new(),
            entities: Vec::new(),
            meta,
        }
    }

    /// Sort the service list and every fact list into the canonical order.
    /// Idempotent; called after extraction and after IR load so downstream
    /// output is independent of discovery order.
    pub fn normalize(&mut self) {
        self.services.sort();
        self.services.dedup();
        self.endpoints.sort_by(|a, b| {
            (&a.service, a.path.render(), &a.method, &a.source_loc).cmp(&(
                &b.service,
                b.path.render(),
                &b.method,
                &b.source_loc,
            ))
        });
        self.calls
            .sort_by(|a, b| (&a.caller, &a.source_loc).cmp(&(&b.caller, &b.source_loc)));
        self.entities
            .sort_by(|a, b| (&a.service, &a.name, &a.source_loc).cmp(&(&b.service, &b.name, &b.source_loc)));
    }

    /// Services with their display ordinals: lexicographic order of name,
    /// 1-based. Requires a normalized service list.
    pub fn service_ids(&self) -> Vec<ServiceId> {
        self.services
            .iter()
            .enumerate()
            .map(|(i, name)| ServiceId { name: name.clone(), ordinal: (i + 1) as u32 })
            .collect()
    }

    pub fn ordinal_of(&self, name: &str) -> Option<u32> {
        self.services.iter().position(|s| s == name).map(|i| (i + 1) as u32)
    }

    /// Check the cross-reference and per-fact invariants. Assumes a
    /// normalized system.
    pub fn validate(&self) -> Result<()> {
        for pair in self.services.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::IrValidation {
                    context: "services".to_string(),
                    message: format!("duplicate service name {:?}", pair[0]),
                });
            }
        }
        for name in &self.services {
            if name.is_empty() {
                return Err(Error::IrValidation {
                    context: "services".to_string(),
                    message: "empty service name".to_string(),
                });
            }
        }
        let known = |name: &str| self.services.iter().any(|s| s == name);
        for ep in &self.endpoints {
            if !known(&ep.service) {
                return Err(Error::IrValidation {
                    context: ep.source_loc.to_string(),
                    message: format!("endpoint references unknown service {:?}", ep.service),
                });
            }
            ep.check()?;
        }
        for call in &self.calls {
            if !known(&call.caller) {
                return Err(Error::IrValidation {
                    context: call.source_loc.to_string(),
                    message: format!("call references unknown service {:?}", call.caller),
                });
            }
            if call.url.is_empty() {
                return Err(Error::IrValidation {
                    context: call.source_loc.to_string(),
                    message: "call has an empty url".to_string(),
                });
            }
            if !call.has_literal_part() && !call.unresolvable {
                return Err(Error::IrValidation {
                    context: call.source_loc.to_string(),
                    message: "fully dynamic url must be marked unresolvable".to_string(),
                });
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        for entity in &self.entities {
            if !known(&entity.service) {
                return Err(Error::IrValidation {
                    context: entity.source_loc.to_string(),
                    message: format!("entity references unknown service {:?}", entity.service),
                });
            }
            if !seen.insert((entity.service.clone(), entity.name.clone())) {
                return Err(Error::IrValidation {
                    context: entity.source_loc.to_string(),
                    message: format!(
                        "duplicate entity {} in service {}",
                        entity.name, entity.service
                    ),
                });
            }
            for field in &entity.fields {
                if field.name.is_empty() {
                    return Err(Error::IrValidation {
                        context: entity.source_loc.to_string(),
                        message: format!("entity {} has an unnamed field", entity.name),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.services.is_empty()
    }
}

/// A resolved call-to-endpoint match.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndpointMatch {
    pub call: RestCall,
    pub endpoint: EndpointDef,
    /// Count of literal path segments the call pins down exactly; used to
    /// rank competing candidates.
    pub specificity: u32,
    /// True when another candidate tied on specificity and the winner was
    /// picked by canonical order.
    pub ambiguous: bool,
}

/// A cross-service entity pair judged to denote the same data concept.
#[derive(Debug, Clone, PartialEq)]
pub struct EntityMatch {
    pub a: EntityDef,
    pub b: EntityDef,
    pub name_score: f64,
    pub matched_field_count: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Info,
    Warning,
}

/// A structured, non-fatal finding surfaced alongside analysis results.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Diagnostic {
    pub severity: Severity,
    /// Stable kebab-case kind, e.g. "ambiguous-match" or "skipped-region".
    pub code: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_loc: Option<SourceLoc>,
}

impl Diagnostic {
    pub fn warning(code: &str, message: impl Into<String>, loc: Option<SourceLoc>) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            code: code.to_string(),
            message: message.into(),
            source_loc: loc,
        }
    }

    pub fn info(code: &str, message: impl Into<String>, loc: Option<SourceLoc>) -> Self {
        Diagnostic {
            severity: Severity::Info,
            code: code.to_string(),
            message: message.into(),
            source_loc: loc,
        }
    }
}

/// Order an unordered service pair canonically (lexicographic by name).
/// Diagonal pairs are rejected.
pub fn canonical_pair<'a>(a: &'a str, b: &'a str) -> Result<(&'a str, &'a str)> {
    match a.cmp(b) {
        std::cmp::Ordering::Less => Ok((a, b)),
        std::cmp::Ordering::Greater => Ok((b, a)),
        std::cmp::Ordering::Equal => Err(Error::InvalidPair(a.to_string())),
    }
}
