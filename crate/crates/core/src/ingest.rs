use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use globset::{Glob, GlobSet, GlobSetBuilder};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Diagnostic, ServiceId};

/// One discovered microservice project directory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ServiceRoot {
    pub id: ServiceId,
    pub root_dir: PathBuf,
    pub manifest_path: PathBuf,
}

/// How service directories are recognized under the repository root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default, deny_unknown_fields)]
pub struct DiscoveryConfig {
    /// Build manifest filenames that mark a directory as a service project.
    pub manifests: Vec<String>,
    /// Directory-name globs that are never entered.
    pub exclude_globs: Vec<String>,
    /// How many directory levels below the root to search.
    pub max_depth: usize,
}

impl Default for DiscoveryConfig {
    fn default() -> Self {
        DiscoveryConfig {
            manifests: ["pom.xml", "build.gradle", "build.gradle.kts"]
                .map(String::from)
                .to_vec(),
            exclude_globs: [".*", "target", "build", "node_modules"].map(String::from).to_vec(),
            max_depth: 2,
        }
    }
}

impl DiscoveryConfig {
    fn exclude_set(&self) -> Result<GlobSet> {
        let mut builder = GlobSetBuilder::new();
        for glob in &self.exclude_globs {
            builder.add(
                Glob::new(glob)
                    .map_err(|e| Error::Config(format!("exclude glob {glob:?}: {e}")))?,
            );
        }
        builder.build().map_err(|e| Error::Config(format!("exclude globs: {e}")))
    }
}

/// The analysis root plus the revision label recorded into output metadata.
/// Holds the temporary checkout alive for cloned sources.
#[derive(Debug)]
pub struct FetchedSource {
    pub root: PathBuf,
    pub revision: String,
    checkout: Option<tempfile::TempDir>,
}

impl FetchedSource {
    /// True when the root lives in a temporary checkout owned by this value
    /// and vanishes on drop.
    pub fn is_temporary(&self) -> bool {
        self.checkout.is_some()
    }

    /// Disown the temporary checkout so it outlives this value and return
    /// the analysis root. Pass-through local sources are unaffected.
    pub fn persist(mut self) -> PathBuf {
        if let Some(dir) = self.checkout.take() {
            let _ = dir.keep();
        }
        self.root.clone()
    }
}

fn looks_like_git_url(source: &str) -> bool {
    source.starts_with("http://")
        || source.starts_with("https://")
        || source.starts_with("git://")
        || source.starts_with("ssh://")
        || source.starts_with("git@")
        || source.ends_with(".git")
}

fn run_git(args: &[&str], cwd: Option<&Path>) -> Result<()> {
    let mut cmd = Command::new("git");
    cmd.args(args);
    if let Some(dir) = cwd {
        cmd.current_dir(dir);
    }
    let output = cmd.output().map_err(|e| Error::Ingest {
        source_path: args.join(" "),
        message: format!("failed to run git: {e}"),
    })?;
    if !output.status.success() {
        return Err(Error::Ingest {
            source_path: args.join(" "),
            message: String::from_utf8_lossy(&output.stderr).trim().to_string(),
        });
    }
    Ok(())
}

/// Make the source available as a local directory. Plain local paths pass
/// through untouched; git URLs, and local paths paired with a revision,
/// are cloned to a temporary checkout so the caller's tree is never moved
/// off its current revision.
pub fn fetch_repository(source: &str, revision: Option<&str>) -> Result<FetchedSource> {
    let is_url = looks_like_git_url(source);
    if !is_url {
        let path = Path::new(source);
        if !path.is_dir() {
            return Err(Error::Ingest {
                source_path: source.to_string(),
                message: "not a readable directory".to_string(),
            });
        }
        if revision.is_none() {
            return Ok(FetchedSource {
                root: path.to_path_buf(),
                revision: "unversioned".to_string(),
                checkout: None,
            });
        }
    }

    let checkout = tempfile::TempDir::new().map_err(|e| Error::Ingest {
        source_path: source.to_string(),
        message: format!("cannot create checkout directory: {e}"),
    })?;
    let target = checkout.path().join("src");
    let target_str = target.to_string_lossy().to_string();
    run_git(&["clone", "--quiet", source, &target_str], None)?;
    let label = match revision {
        Some(rev) => {
            run_git(&["checkout", "--quiet", rev], Some(&target)).map_err(|e| {
                Error::Revision { revision: rev.to_string(), message: e.to_string() }
            })?;
            rev.to_string()
        }
        None => "unversioned".to_string(),
    };
    Ok(FetchedSource { root: target, revision: label, checkout: Some(checkout) })
}

/// Walk the root to the configured depth and return one [`ServiceRoot`] per
/// directory holding a recognized build manifest, sorted by name. A service
/// directory is never descended into, so discovered roots cannot nest.
pub fn discover_services(
    root: &Path,
    config: &DiscoveryConfig,
) -> Result<(Vec<ServiceRoot>, Vec<Diagnostic>)> {
    let excludes = config.exclude_set()?;
    let mut found: Vec<(String, PathBuf, PathBuf)> = Vec::new();
    let mut diagnostics = Vec::new();
    scan_level(root, 1, config, &excludes, &mut found, &mut diagnostics)?;

    found.sort();
    let mut services = Vec::new();
    for (name, root_dir, manifest_path) in found {
        if services.iter().any(|s: &ServiceRoot| s.id.name == name) {
            diagnostics.push(Diagnostic::warning(
                "duplicate-service-name",
                format!("skipping {}: directory name {name:?} already taken", root_dir.display()),
                None,
            ));
            continue;
        }
        services.push(ServiceRoot {
            id: ServiceId { name, ordinal: 0 },
            root_dir,
            manifest_path,
        });
    }
    for (i, service) in services.iter_mut().enumerate() {
        service.id.ordinal = (i + 1) as u32;
    }
    if services.is_empty() {
        return Err(Error::EmptySystem);
    }
    Ok((services, diagnostics))
}

/// Returns how many services the subtree contributed.
fn scan_level(
    dir: &Path,
    depth: usize,
    config: &DiscoveryConfig,
    excludes: &GlobSet,
    found: &mut Vec<(String, PathBuf, PathBuf)>,
    diagnostics: &mut Vec<Diagnostic>,
) -> Result<usize> {
    let entries = fs::read_dir(dir).map_err(|e| Error::Ingest {
        source_path: dir.display().to_string(),
        message: e.to_string(),
    })?;
    let mut children: Vec<PathBuf> = entries
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.is_dir())
        .collect();
    children.sort();

    let mut contributed = 0;
    for child in children {
        let name = match child.file_name().and_then(|n| n.to_str()) {
            Some(n) => n.to_string(),
            None => continue,
        };
        if excludes.is_match(&name) {
            continue;
        }
        if let Some(manifest) = config
            .manifests
            .iter()
            .map(|m| child.join(m))
            .find(|p| p.is_file())
        {
            found.push((name, child, manifest));
            contributed += 1;
            continue;
        }
        let below = if depth < config.max_depth {
            scan_level(&child, depth + 1, config, excludes, found, diagnostics)?
        } else {
            0
        };
        if below == 0 && depth == 1 {
            diagnostics.push(Diagnostic::info(
                "skipped-dir",
                format!("{}: no build manifest found", child.display()),
                None,
            ));
        }
        contributed += below;
    }
    Ok(contributed)
}
