//! End-to-end orchestration: fetch, discover, extract, match, and fold the
//! results into matrices. The CLI and tests drive everything through the
//! functions here.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frontend::{build_ir, FrontendConfig};
use crate::ingest::{discover_services, fetch_repository, DiscoveryConfig};
use crate::matching::{
    match_entities, resolve_calls, SimilarityConfig, TypePattern, TypePatternSet,
};
use crate::matrix::{build_ddm, build_edm, build_sdm, hotspots, HotspotRow};
use crate::model::{
    Diagnostic, EndpointMatch, EntityMatch, RestCall, SystemIR, SystemMeta,
};
use crate::model::{Ddm, Edm, Sdm};
use crate::render::RenderConfig;

/// Entity-matching and call-matching knobs as they appear in configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default, deny_unknown_fields)]
pub struct MatchConfig {
    pub threshold: f64,
    pub synonym_dict_path: Option<PathBuf>,
    pub min_field_matches: u32,
    /// Extra or overriding value patterns per declared type name.
    pub type_patterns: BTreeMap<String, String>,
}

impl Default for MatchConfig {
    fn default() -> Self {
        let base = SimilarityConfig::default();
        MatchConfig {
            threshold: base.threshold,
            synonym_dict_path: base.synonym_dict_path,
            min_field_matches: base.min_field_matches,
            type_patterns: BTreeMap::new(),
        }
    }
}

impl MatchConfig {
    pub fn similarity(&self) -> SimilarityConfig {
        SimilarityConfig {
            threshold: self.threshold,
            synonym_dict_path: self.synonym_dict_path.clone(),
            min_field_matches: self.min_field_matches,
        }
    }

    pub fn patterns(&self) -> Result<TypePatternSet> {
        let overrides: Vec<TypePattern> = self
            .type_patterns
            .iter()
            .map(|(t, p)| TypePattern { type_name: t.clone(), value_regex: p.clone() })
            .collect();
        let mut set = TypePatternSet::defaults();
        set.extend(&overrides)?;
        Ok(set)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default, deny_unknown_fields)]
pub struct HotspotConfig {
    /// An endpoint is a hotspot when it receives more than this many calls.
    pub min_calls: u32,
}

impl Default for HotspotConfig {
    fn default() -> Self {
        HotspotConfig { min_calls: 3 }
    }
}

/// Full analysis configuration; also the schema of the TOML config file.
/// Every section and field is optional and falls back to its default.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default, deny_unknown_fields)]
pub struct AnalysisSettings {
    pub discovery: DiscoveryConfig,
    pub frontend: FrontendConfig,
    #[serde(rename = "match")]
    pub matching: MatchConfig,
    pub hotspots: HotspotConfig,
    pub render: RenderConfig,
    /// Drop ambiguous matches from the matrices instead of counting the
    /// lexicographic winner.
    pub strict: bool,
}

/// Parse a TOML configuration file into settings; unknown keys are errors.
pub fn load_settings(path: &Path) -> Result<AnalysisSettings> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

/// Everything one analysis run produces.
#[derive(Debug, Clone)]
pub struct AnalysisReport {
    pub ir: SystemIR,
    pub matches: Vec<EndpointMatch>,
    pub unmatched: Vec<RestCall>,
    pub entity_matches: Vec<EntityMatch>,
    pub equivalence: crate::matching::EntityEquivalence,
    pub edm: Edm,
    pub ddm: Ddm,
    pub sdm: Sdm,
    pub hotspots: Vec<HotspotRow>,
    pub diagnostics: Vec<Diagnostic>,
}

impl AnalysisReport {
    /// Counters for the one-line run summary.
    pub fn summary(&self) -> BTreeMap<&'static str, u64> {
        let ambiguous = self.matches.iter().filter(|m| m.ambiguous).count() as u64;
        BTreeMap::from([
            ("services", self.ir.services.len() as u64),
            ("endpoints", self.ir.endpoints.len() as u64),
            ("calls", self.ir.calls.len() as u64),
            ("matched", self.matches.len() as u64),
            ("unmatched", self.unmatched.len() as u64),
            ("ambiguous", ambiguous),
            ("entities", self.ir.entities.len() as u64),
            ("entityClasses", self.equivalence.classes.len() as u64),
        ])
    }
}

/// Run matching and matrix construction on an already-extracted system.
pub fn analyze_ir(
    ir: SystemIR,
    base_diagnostics: Vec<Diagnostic>,
    settings: &AnalysisSettings,
) -> Result<AnalysisReport> {
    if ir.is_empty() {
        return Err(Error::EmptySystem);
    }
    let similarity = settings.matching.similarity();
    similarity.check()?;
    let patterns = settings.matching.patterns()?;

    let mut diagnostics = base_diagnostics;
    let outcome = resolve_calls(&ir, &patterns);
    diagnostics.extend(outcome.diagnostics);
    for call in &outcome.unmatched {
        diagnostics.push(Diagnostic::warning(
            "unmatched-call",
            format!("no endpoint matches {} {}", call.method, call.url_display()),
            Some(call.source_loc.clone()),
        ));
    }
    let mut matches = outcome.matches;
    if settings.strict {
        let (kept, dropped): (Vec<_>, Vec<_>) =
            matches.into_iter().partition(|m| !m.ambiguous);
        for m in &dropped {
            diagnostics.push(Diagnostic::info(
                "strict-excluded",
                format!(
                    "ambiguous match from {} to {} excluded in strict mode",
                    m.call.caller, m.endpoint.service
                ),
                Some(m.call.source_loc.clone()),
            ));
        }
        matches = kept;
    }

    let (entity_matches, equivalence) = match_entities(&ir, &similarity)?;
    let services = ir.service_ids();
    let edm = build_edm(&matches, &services);
    let ddm = build_ddm(&equivalence, &services);
    let sdm = build_sdm(&edm, &ddm)?;
    let hotspots = hotspots(&matches, settings.hotspots.min_calls);
    diagnostics.sort();
    Ok(AnalysisReport {
        ir,
        matches,
        unmatched: outcome.unmatched,
        entity_matches,
        equivalence,
        edm,
        ddm,
        sdm,
        hotspots,
        diagnostics,
    })
}

/// Analyze a prepared checkout directory.
pub fn analyze_checkout(
    root: &Path,
    meta: SystemMeta,
    settings: &AnalysisSettings,
) -> Result<AnalysisReport> {
    let (roots, mut diagnostics) = discover_services(root, &settings.discovery)?;
    let (ir, extraction_diags) = build_ir(root, &roots, &settings.frontend, meta)?;
    diagnostics.extend(extraction_diags);
    analyze_ir(ir, diagnostics, settings)
}

/// Analyze a source spec (local directory or git URL, optionally at a
/// revision). Temporary checkouts are removed when this returns.
pub fn analyze_source(
    source: &str,
    revision: Option<&str>,
    settings: &AnalysisSettings,
) -> Result<AnalysisReport> {
    let fetched = fetch_repository(source, revision)?;
    let meta = SystemMeta {
        source_root: source.to_string(),
        revision: fetched.revision.clone(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
    };
    analyze_checkout(&fetched.root, meta, settings)
}
