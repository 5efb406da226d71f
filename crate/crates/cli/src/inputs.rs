//! Input resolution shared by the commands: turning a source directory, git
//! URL, fact file or analysis report into analysis results or a single
//! matrix.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use depmat_core::frontend::{parse_ir, save_ir};
use depmat_core::ingest::fetch_repository;
use depmat_core::matrix::{AnyMatrix, MatrixKind};
use depmat_core::model::{Ddm, Edm, Sdm, SdmCell, ServiceId, SystemMeta};
use depmat_core::pipeline::{analyze_checkout, analyze_ir, AnalysisReport, AnalysisSettings};

/// Fetch the source and run `work` on the prepared checkout. Temporary
/// checkouts vanish on success; on failure they are kept and their path
/// printed so the tree can be inspected.
pub fn with_checkout<T>(
    source: &str,
    revision: Option<&str>,
    work: impl FnOnce(&Path, SystemMeta) -> Result<T>,
) -> Result<T> {
    let fetched = fetch_repository(source, revision)?;
    let meta = SystemMeta {
        source_root: source.to_string(),
        revision: fetched.revision.clone(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
    };
    match work(&fetched.root, meta) {
        Ok(value) => Ok(value),
        Err(err) => {
            if fetched.is_temporary() {
                let kept = fetched.persist();
                eprintln!("note: checkout retained at {}", kept.display());
            }
            Err(err)
        }
    }
}

/// Run the full pipeline on a source directory or git URL.
pub fn analyze_source_retaining(
    source: &str,
    revision: Option<&str>,
    settings: &AnalysisSettings,
) -> Result<AnalysisReport> {
    with_checkout(source, revision, |root, meta| Ok(analyze_checkout(root, meta, settings)?))
}

/// Load facts from a file and run matching on them.
pub fn analyze_ir_file(path: &Path, settings: &AnalysisSettings) -> Result<AnalysisReport> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let ir = parse_ir(&text, path)?;
    Ok(analyze_ir(ir, Vec::new(), settings)?)
}

pub fn write_ir(report: &AnalysisReport, path: &Path) -> Result<()> {
    save_ir(&report.ir, path)?;
    Ok(())
}

/// An owned matrix of any kind, loadable from every diff input form.
pub enum OwnedMatrix {
    Edm(Edm),
    Ddm(Ddm),
    Sdm(Sdm),
}

impl OwnedMatrix {
    pub fn as_any(&self) -> AnyMatrix<'_> {
        match self {
            OwnedMatrix::Edm(m) => AnyMatrix::Edm(m),
            OwnedMatrix::Ddm(m) => AnyMatrix::Ddm(m),
            OwnedMatrix::Sdm(m) => AnyMatrix::Sdm(m),
        }
    }
}

fn from_report(report: &AnalysisReport, kind: MatrixKind) -> OwnedMatrix {
    match kind {
        MatrixKind::Edm => OwnedMatrix::Edm(report.edm.clone()),
        MatrixKind::Ddm => OwnedMatrix::Ddm(report.ddm.clone()),
        MatrixKind::Sdm => OwnedMatrix::Sdm(report.sdm.clone()),
    }
}

/// Resolve one diff input. Files holding an analysis report contribute the
/// stored matrix directly; fact files are matched first; anything else is
/// treated as a source tree or git URL and fully analyzed.
pub fn load_matrix_input(
    input: &str,
    kind: MatrixKind,
    revision: Option<&str>,
    settings: &AnalysisSettings,
) -> Result<OwnedMatrix> {
    let path = Path::new(input);
    if path.is_file() {
        let text = fs::read_to_string(path)
            .with_context(|| format!("cannot read {}", path.display()))?;
        let value: serde_json::Value = serde_json::from_str(&text)
            .with_context(|| format!("{} is not JSON", path.display()))?;
        if value.get("matrices").is_some() {
            return matrix_from_report_json(&value, kind)
                .with_context(|| format!("in report {}", path.display()));
        }
        let ir = parse_ir(&text, path)?;
        let report = analyze_ir(ir, Vec::new(), settings)?;
        return Ok(from_report(&report, kind));
    }
    let report = analyze_source_retaining(input, revision, settings)?;
    Ok(from_report(&report, kind))
}

fn service_ids(matrix: &serde_json::Value) -> Result<Vec<ServiceId>> {
    matrix["services"]
        .as_array()
        .ok_or_else(|| anyhow!("matrix lacks a services list"))?
        .iter()
        .enumerate()
        .map(|(i, v)| {
            Ok(ServiceId {
                name: v.as_str().ok_or_else(|| anyhow!("service name is not a string"))?.to_string(),
                ordinal: (i + 1) as u32,
            })
        })
        .collect()
}

fn cell_str<'a>(cell: &'a serde_json::Value, key: &str) -> Result<&'a str> {
    cell[key].as_str().ok_or_else(|| anyhow!("cell field {key:?} is not a string"))
}

fn cell_u32(cell: &serde_json::Value, key: &str) -> Result<u32> {
    let v = cell[key].as_u64().ok_or_else(|| anyhow!("cell field {key:?} is not a count"))?;
    u32::try_from(v).map_err(|_| anyhow!("cell field {key:?} out of range"))
}

/// Rebuild one matrix from the "matrices" section of an analysis report.
pub fn matrix_from_report_json(value: &serde_json::Value, kind: MatrixKind) -> Result<OwnedMatrix> {
    let matrix = &value["matrices"][kind.to_string()];
    if matrix.is_null() {
        bail!("report has no {kind} matrix");
    }
    let services = service_ids(matrix)?;
    let cells = matrix["cells"].as_array().ok_or_else(|| anyhow!("matrix lacks a cells list"))?;
    match kind {
        MatrixKind::Edm => {
            let mut edm = Edm::new(services);
            for cell in cells {
                edm.add(cell_str(cell, "row")?, cell_str(cell, "col")?, cell_u32(cell, "count")?)?;
            }
            Ok(OwnedMatrix::Edm(edm))
        }
        MatrixKind::Ddm => {
            let mut ddm = Ddm::new(services);
            for cell in cells {
                ddm.add(cell_str(cell, "row")?, cell_str(cell, "col")?, cell_u32(cell, "count")?)?;
            }
            Ok(OwnedMatrix::Ddm(ddm))
        }
        MatrixKind::Sdm => {
            let mut sdm = Sdm::new(services);
            for cell in cells {
                let value = SdmCell {
                    endpoint_degree: cell_u32(cell, "endpoint")?,
                    data_degree: cell_u32(cell, "data")?,
                };
                sdm.set(cell_str(cell, "row")?, cell_str(cell, "col")?, value)?;
            }
            Ok(OwnedMatrix::Sdm(sdm))
        }
    }
}
