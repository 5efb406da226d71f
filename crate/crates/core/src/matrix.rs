use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matching::EntityEquivalence;
use crate::model::{
    sdm_display, Ddm, DepClass, Edm, EndpointDef, EndpointMatch, Sdm, SdmCell, ServiceId,
};

/// Count matched calls per directed service pair.
pub fn build_edm(matches: &[EndpointMatch], services: &[ServiceId]) -> Edm {
    let mut edm = Edm::new(services.to_vec());
    for m in matches {
        edm.add(&m.call.caller, &m.endpoint.service, 1)
            .expect("matches never pair a service with itself");
    }
    edm
}

/// Count shared equivalence classes per unordered service pair. A class
/// spanning three services contributes one to each of its three pairs.
pub fn build_ddm(equivalence: &EntityEquivalence, services: &[ServiceId]) -> Ddm {
    let mut ddm = Ddm::new(services.to_vec());
    for class in &equivalence.classes {
        let mut seen: BTreeSet<&str> = BTreeSet::new();
        for (service, _) in &class.members {
            seen.insert(service);
        }
        let members: Vec<&str> = seen.into_iter().collect();
        for (i, a) in members.iter().enumerate() {
            for b in &members[i + 1..] {
                ddm.add(a, b, 1).expect("distinct services");
            }
        }
    }
    ddm
}

/// Merge the two degree matrices; a cell exists wherever either degree is
/// positive. Data degrees mirror into both directions of a pair.
pub fn build_sdm(edm: &Edm, ddm: &Ddm) -> Result<Sdm> {
    if edm.services != ddm.services {
        return Err(Error::InvalidMerge);
    }
    let mut sdm = Sdm::new(edm.services.clone());
    for a in &edm.services {
        for b in &edm.services {
            if a.name == b.name {
                continue;
            }
            let cell = SdmCell {
                endpoint_degree: edm.get(&a.name, &b.name),
                data_degree: ddm.get(&a.name, &b.name),
            };
            if cell.endpoint_degree > 0 || cell.data_degree > 0 {
                sdm.set(&a.name, &b.name, cell)?;
            }
        }
    }
    Ok(sdm)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixKind {
    Edm,
    Ddm,
    Sdm,
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MatrixKind::Edm => "edm",
            MatrixKind::Ddm => "ddm",
            MatrixKind::Sdm => "sdm",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ViewCell {
    pub row: String,
    pub col: String,
    pub display: String,
    /// Scalar weight for shading; for merged cells the sum of both degrees.
    pub magnitude: u32,
    pub class: Option<DepClass>,
}

/// A matrix reduced to its display form: empty rows and columns dropped,
/// original ordinals retained.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixView {
    pub kind: MatrixKind,
    pub rows: Vec<ServiceId>,
    pub cols: Vec<ServiceId>,
    pub cells: Vec<ViewCell>,
}

impl MatrixView {
    pub fn cell_at(&self, row: &str, col: &str) -> Option<&ViewCell> {
        self.cells.iter().find(|c| c.row == row && c.col == col)
    }

    pub fn max_magnitude(&self) -> u32 {
        self.cells.iter().map(|c| c.magnitude).max().unwrap_or(0)
    }
}

fn keep(services: &[ServiceId], used: &BTreeSet<&str>) -> Vec<ServiceId> {
    services.iter().filter(|s| used.contains(s.name.as_str())).cloned().collect()
}

/// Drop callers that call nothing and callees nothing calls.
pub fn prune_edm(edm: &Edm) -> MatrixView {
    let mut callers = BTreeSet::new();
    let mut callees = BTreeSet::new();
    let mut cells = Vec::new();
    for (a, b, count) in edm.cells() {
        callers.insert(a);
        callees.insert(b);
        cells.push(ViewCell {
            row: a.to_string(),
            col: b.to_string(),
            display: count.to_string(),
            magnitude: count,
            class: None,
        });
    }
    MatrixView {
        kind: MatrixKind::Edm,
        rows: keep(&edm.services, &callers),
        cols: keep(&edm.services, &callees),
        cells,
    }
}

/// Drop services that share no entity with anyone; both orientations of each
/// symmetric cell appear so the view renders as a full grid.
pub fn prune_ddm(ddm: &Ddm) -> MatrixView {
    let mut used = BTreeSet::new();
    let mut cells = Vec::new();
    for (a, b, count) in ddm.cells() {
        used.insert(a);
        used.insert(b);
        for (row, col) in [(a, b), (b, a)] {
            cells.push(ViewCell {
                row: row.to_string(),
                col: col.to_string(),
                display: count.to_string(),
                magnitude: count,
                class: None,
            });
        }
    }
    cells.sort_by(|x, y| (&x.row, &x.col).cmp(&(&y.row, &y.col)));
    let services = keep(&ddm.services, &used);
    MatrixView { kind: MatrixKind::Ddm, rows: services.clone(), cols: services, cells }
}

/// Drop empty rows and columns of the merged matrix.
pub fn prune_sdm(sdm: &Sdm) -> MatrixView {
    let mut rows = BTreeSet::new();
    let mut cols = BTreeSet::new();
    let mut cells = Vec::new();
    for (a, b, cell) in sdm.cells() {
        rows.insert(a);
        cols.insert(b);
        cells.push(ViewCell {
            row: a.to_string(),
            col: b.to_string(),
            display: sdm_display(cell).expect("stored cells are nonzero"),
            magnitude: cell.endpoint_degree + cell.data_degree,
            class: Some(cell.class().expect("stored cells are nonzero")),
        });
    }
    MatrixView {
        kind: MatrixKind::Sdm,
        rows: keep(&sdm.services, &rows),
        cols: keep(&sdm.services, &cols),
        cells,
    }
}

/// An endpoint drawing calls from several places.
#[derive(Debug, Clone, PartialEq)]
pub struct HotspotRow {
    pub endpoint: EndpointDef,
    pub call_count: u32,
    pub distinct_callers: u32,
}

/// Endpoints receiving strictly more than `min_calls` matched calls, most
/// called first.
pub fn hotspots(matches: &[EndpointMatch], min_calls: u32) -> Vec<HotspotRow> {
    type Key = (String, String, String, u32);
    let mut by_endpoint: BTreeMap<Key, (EndpointDef, u32, BTreeSet<String>)> = BTreeMap::new();
    for m in matches {
        let key = (
            m.endpoint.service.clone(),
            m.endpoint.path.render(),
            m.endpoint.method.to_string(),
            m.endpoint.source_loc.line,
        );
        let entry = by_endpoint
            .entry(key)
            .or_insert_with(|| (m.endpoint.clone(), 0, BTreeSet::new()));
        entry.1 += 1;
        entry.2.insert(m.call.caller.clone());
    }
    let mut rows: Vec<HotspotRow> = by_endpoint
        .into_values()
        .filter(|(_, count, _)| *count > min_calls)
        .map(|(endpoint, call_count, callers)| HotspotRow {
            endpoint,
            call_count,
            distinct_callers: callers.len() as u32,
        })
        .collect();
    rows.sort_by(|a, b| {
        (std::cmp::Reverse(a.call_count), &a.endpoint.service, a.endpoint.path.render()).cmp(&(
            std::cmp::Reverse(b.call_count),
            &b.endpoint.service,
            b.endpoint.path.render(),
        ))
    });
    rows
}

/// One cell value in a diff: a plain count from the single-degree matrices
/// or a degree pair from the merged one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellValue {
    Count(u32),
    Degrees(u32, u32),
}

impl fmt::Display for CellValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CellValue::Count(v) => write!(f, "{v}"),
            CellValue::Degrees(e, d) => {
                let cell = SdmCell { endpoint_degree: *e, data_degree: *d };
                match sdm_display(cell) {
                    Ok(text) => f.write_str(&text),
                    Err(_) => f.write_str("0"),
                }
            }
        }
    }
}

/// Cell-wise difference between two matrices of the same kind, keyed by
/// service-name pairs so ordinal shifts between versions do not register as
/// changes.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MatrixDiff {
    pub added: Vec<((String, String), CellValue)>,
    pub removed: Vec<((String, String), CellValue)>,
    pub changed: Vec<((String, String), CellValue, CellValue)>,
    pub services_added: Vec<String>,
    pub services_removed: Vec<String>,
}

impl MatrixDiff {
    pub fn is_empty(&self) -> bool {
        self.added.is_empty()
            && self.removed.is_empty()
            && self.changed.is_empty()
            && self.services_added.is_empty()
            && self.services_removed.is_empty()
    }
}

/// A borrowed matrix of any kind, for kind-checked generic operations.
#[derive(Debug, Clone, Copy)]
pub enum AnyMatrix<'a> {
    Edm(&'a Edm),
    Ddm(&'a Ddm),
    Sdm(&'a Sdm),
}

impl AnyMatrix<'_> {
    pub fn kind(&self) -> MatrixKind {
        match self {
            AnyMatrix::Edm(_) => MatrixKind::Edm,
            AnyMatrix::Ddm(_) => MatrixKind::Ddm,
            AnyMatrix::Sdm(_) => MatrixKind::Sdm,
        }
    }

    fn services(&self) -> &[ServiceId] {
        match self {
            AnyMatrix::Edm(m) => &m.services,
            AnyMatrix::Ddm(m) => &m.services,
            AnyMatrix::Sdm(m) => &m.services,
        }
    }

    fn value_cells(&self) -> BTreeMap<(String, String), CellValue> {
        match self {
            AnyMatrix::Edm(m) => m
                .cells()
                .map(|(a, b, v)| ((a.to_string(), b.to_string()), CellValue::Count(v)))
                .collect(),
            AnyMatrix::Ddm(m) => m
                .cells()
                .map(|(a, b, v)| ((a.to_string(), b.to_string()), CellValue::Count(v)))
                .collect(),
            AnyMatrix::Sdm(m) => m
                .cells()
                .map(|(a, b, c)| {
                    (
                        (a.to_string(), b.to_string()),
                        CellValue::Degrees(c.endpoint_degree, c.data_degree),
                    )
                })
                .collect(),
        }
    }
}

pub fn diff(old: AnyMatrix, new: AnyMatrix) -> Result<MatrixDiff> {
    if old.kind() != new.kind() {
        return Err(Error::InvalidDiff {
            left: old.kind().to_string(),
            right: new.kind().to_string(),
        });
    }
    let old_cells = old.value_cells();
    let new_cells = new.value_cells();
    let mut out = MatrixDiff::default();
    for (pair, old_value) in &old_cells {
        match new_cells.get(pair) {
            None => out.removed.push((pair.clone(), *old_value)),
            Some(new_value) if new_value != old_value => {
                out.changed.push((pair.clone(), *old_value, *new_value));
            }
            Some(_) => {}
        }
    }
    for (pair, new_value) in &new_cells {
        if !old_cells.contains_key(pair) {
            out.added.push((pair.clone(), *new_value));
        }
    }
    let old_services: BTreeSet<&str> = old.services().iter().map(|s| s.name.as_str()).collect();
    let new_services: BTreeSet<&str> = new.services().iter().map(|s| s.name.as_str()).collect();
    out.services_added =
        new_services.difference(&old_services).map(|s| s.to_string()).collect();
    out.services_removed =
        old_services.difference(&new_services).map(|s| s.to_string()).collect();
    Ok(out)
}
