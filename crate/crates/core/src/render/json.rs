//! The main JSON report: per-service dependency fan-out and fan-in, the
//! shared-entity context map, all three matrices, and diagnostics. Key order
//! is fixed and all collections iterate in canonical order, so the output is
//! byte-identical across runs.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::model::{sdm_display, EndpointMatch};
use crate::pipeline::AnalysisReport;

/// Per-partner aggregation: (path, method) -> call count.
type CallCounts = BTreeMap<String, BTreeMap<(String, String), u32>>;

fn group_out(matches: &[EndpointMatch], caller: &str) -> CallCounts {
    let mut out = CallCounts::new();
    for m in matches {
        if m.call.caller == caller && m.endpoint.service != caller {
            *out.entry(m.endpoint.service.clone())
                .or_default()
                .entry((m.endpoint.path.render(), m.endpoint.method.as_str().to_string()))
                .or_insert(0) += 1;
        }
    }
    out
}

fn group_in(matches: &[EndpointMatch], callee: &str) -> CallCounts {
    let mut out = CallCounts::new();
    for m in matches {
        if m.endpoint.service == callee && m.call.caller != callee {
            *out.entry(m.call.caller.clone())
                .or_default()
                .entry((m.endpoint.path.render(), m.endpoint.method.as_str().to_string()))
                .or_insert(0) += 1;
        }
    }
    out
}

fn endpoint_calls(counts: &BTreeMap<(String, String), u32>) -> Value {
    Value::Array(
        counts
            .iter()
            .map(|((path, method), count)| {
                let mut cell = Map::new();
                cell.insert("path".to_string(), json!(path));
                cell.insert("method".to_string(), json!(method));
                cell.insert("count".to_string(), json!(count));
                Value::Object(cell)
            })
            .collect(),
    )
}

fn partner_list(counts: &CallCounts, key: &str) -> Value {
    Value::Array(
        counts
            .iter()
            .map(|(partner, calls)| {
                let mut entry = Map::new();
                entry.insert(key.to_string(), json!(partner));
                entry.insert("endpointCalls".to_string(), endpoint_calls(calls));
                Value::Object(entry)
            })
            .collect(),
    )
}

fn services_json(report: &AnalysisReport) -> Value {
    let mut services = Map::new();
    for id in report.ir.service_ids() {
        let mut entry = Map::new();
        entry.insert("id".to_string(), json!(id.ordinal));
        entry.insert(
            "dependencies".to_string(),
            partner_list(&group_out(&report.matches, &id.name), "target"),
        );
        entry.insert(
            "dependants".to_string(),
            partner_list(&group_in(&report.matches, &id.name), "source"),
        );
        let entities: Vec<Value> = report
            .ir
            .entities
            .iter()
            .filter(|e| e.service == id.name)
            .map(|e| {
                let mut ent = Map::new();
                ent.insert("name".to_string(), json!(e.name));
                ent.insert("kind".to_string(), serde_json::to_value(e.kind).expect("kind"));
                Value::Object(ent)
            })
            .collect();
        entry.insert("entities".to_string(), Value::Array(entities));
        services.insert(id.name, Value::Object(entry));
    }
    Value::Object(services)
}

fn context_map_json(report: &AnalysisReport) -> Value {
    let qualify = |m: &(String, String)| format!("{}/{}", m.0, m.1);
    Value::Array(
        report
            .equivalence
            .classes
            .iter()
            .map(|class| {
                let mut entry = Map::new();
                entry.insert("representative".to_string(), json!(qualify(&class.representative)));
                entry.insert(
                    "members".to_string(),
                    json!(class.members.iter().map(qualify).collect::<Vec<_>>()),
                );
                Value::Object(entry)
            })
            .collect(),
    )
}

fn count_cells<'a>(cells: impl Iterator<Item = (&'a str, &'a str, u32)>) -> Value {
    Value::Array(
        cells
            .map(|(row, col, count)| {
                let mut cell = Map::new();
                cell.insert("row".to_string(), json!(row));
                cell.insert("col".to_string(), json!(col));
                cell.insert("count".to_string(), json!(count));
                Value::Object(cell)
            })
            .collect(),
    )
}

fn matrices_json(report: &AnalysisReport) -> Value {
    let names = |ids: &[crate::model::ServiceId]| {
        Value::Array(ids.iter().map(|s| json!(s.name)).collect())
    };
    let mut matrices = Map::new();

    let mut edm = Map::new();
    edm.insert("services".to_string(), names(&report.edm.services));
    edm.insert("cells".to_string(), count_cells(report.edm.cells()));
    matrices.insert("edm".to_string(), Value::Object(edm));

    let mut ddm = Map::new();
    ddm.insert("services".to_string(), names(&report.ddm.services));
    ddm.insert("cells".to_string(), count_cells(report.ddm.cells()));
    matrices.insert("ddm".to_string(), Value::Object(ddm));

    let mut sdm = Map::new();
    sdm.insert("services".to_string(), names(&report.sdm.services));
    let sdm_cells: Vec<Value> = report
        .sdm
        .cells()
        .map(|(row, col, cell)| {
            let mut entry = Map::new();
            entry.insert("row".to_string(), json!(row));
            entry.insert("col".to_string(), json!(col));
            entry.insert("endpoint".to_string(), json!(cell.endpoint_degree));
            entry.insert("data".to_string(), json!(cell.data_degree));
            entry.insert(
                "display".to_string(),
                json!(sdm_display(cell).expect("stored cells are nonzero")),
            );
            Value::Object(entry)
        })
        .collect();
    sdm.insert("cells".to_string(), Value::Array(sdm_cells));
    matrices.insert("sdm".to_string(), Value::Object(sdm));

    Value::Object(matrices)
}

/// Serialize the full analysis result. Deterministic: equal reports yield
/// byte-identical documents.
pub fn emit_json(report: &AnalysisReport) -> String {
    let mut root = Map::new();
    root.insert("meta".to_string(), serde_json::to_value(&report.ir.meta).expect("meta"));
    root.insert("services".to_string(), services_json(report));
    root.insert("contextMap".to_string(), context_map_json(report));
    root.insert("matrices".to_string(), matrices_json(report));
    root.insert(
        "diagnostics".to_string(),
        serde_json::to_value(&report.diagnostics).expect("diagnostics"),
    );
    let mut text = serde_json::to_string_pretty(&Value::Object(root)).expect("report json");
    text.push('\n');
    text
}
