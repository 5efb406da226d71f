//! Cross-version diff output: a machine-readable JSON document and an
//! aligned text table for terminals.

use serde_json::{json, Map, Value};

use crate::matrix::{CellValue, MatrixDiff, MatrixKind};

fn cell_entry(pair: &(String, String), old: Option<CellValue>, new: Option<CellValue>) -> Value {
    let mut entry = Map::new();
    entry.insert("row".to_string(), json!(pair.0));
    entry.insert("col".to_string(), json!(pair.1));
    if let Some(value) = old {
        entry.insert("old".to_string(), json!(value.to_string()));
    }
    if let Some(value) = new {
        entry.insert("new".to_string(), json!(value.to_string()));
    }
    Value::Object(entry)
}

/// Serialize a diff. Cell values appear in the matrix's display form, so a
/// merged-matrix diff carries "E.D" strings.
pub fn emit_diff_json(kind: MatrixKind, diff: &MatrixDiff) -> String {
    let mut root = Map::new();
    root.insert("kind".to_string(), json!(kind.to_string()));
    root.insert("servicesAdded".to_string(), json!(diff.services_added));
    root.insert("servicesRemoved".to_string(), json!(diff.services_removed));
    root.insert(
        "added".to_string(),
        Value::Array(diff.added.iter().map(|(p, v)| cell_entry(p, None, Some(*v))).collect()),
    );
    root.insert(
        "removed".to_string(),
        Value::Array(diff.removed.iter().map(|(p, v)| cell_entry(p, Some(*v), None)).collect()),
    );
    root.insert(
        "changed".to_string(),
        Value::Array(
            diff.changed.iter().map(|(p, o, n)| cell_entry(p, Some(*o), Some(*n))).collect(),
        ),
    );
    let mut text = serde_json::to_string_pretty(&Value::Object(root)).expect("diff json");
    text.push('\n');
    text
}

/// Render the diff as an aligned table, one line per changed cell.
pub fn format_diff_table(kind: MatrixKind, diff: &MatrixDiff) -> String {
    if diff.is_empty() {
        return format!("{kind}: no changes\n");
    }
    let mut rows: Vec<[String; 5]> = vec![[
        "change".to_string(),
        "row".to_string(),
        "col".to_string(),
        "old".to_string(),
        "new".to_string(),
    ]];
    for (pair, value) in &diff.added {
        rows.push(["added".into(), pair.0.clone(), pair.1.clone(), "-".into(), value.to_string()]);
    }
    for (pair, value) in &diff.removed {
        rows.push([
            "removed".into(),
            pair.0.clone(),
            pair.1.clone(),
            value.to_string(),
            "-".into(),
        ]);
    }
    for (pair, old, new) in &diff.changed {
        rows.push([
            "changed".into(),
            pair.0.clone(),
            pair.1.clone(),
            old.to_string(),
            new.to_string(),
        ]);
    }
    let mut widths = [0usize; 5];
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = format!(
        "{kind}: {} added, {} removed, {} changed\n",
        diff.added.len(),
        diff.removed.len(),
        diff.changed.len()
    );
    for row in &rows {
        let line: Vec<String> =
            row.iter().zip(widths).map(|(cell, w)| format!("{cell:<w$}")).collect();
        out.push_str("  ");
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    if !diff.services_added.is_empty() {
        out.push_str(&format!("services added: {}\n", diff.services_added.join(", ")));
    }
    if !diff.services_removed.is_empty() {
        out.push_str(&format!("services removed: {}\n", diff.services_removed.join(", ")));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{diff, AnyMatrix};
    use crate::model::{Edm, Sdm, SdmCell, ServiceId};

    fn ids(names: &[&str]) -> Vec<ServiceId> {
        names
            .iter()
            .enumerate()
            .map(|(i, n)| ServiceId { name: n.to_string(), ordinal: (i + 1) as u32 })
            .collect()
    }

    #[test]
    fn json_lists_every_change_with_display_values() {
        let mut old = Sdm::new(ids(&["a", "b"]));
        old.set("a", "b", SdmCell { endpoint_degree: 2, data_degree: 0 }).unwrap();
        let mut new = Sdm::new(ids(&["a", "b"]));
        new.set("a", "b", SdmCell { endpoint_degree: 4, data_degree: 1 }).unwrap();
        new.set("b", "a", SdmCell { endpoint_degree: 0, data_degree: 1 }).unwrap();
        let d = diff(AnyMatrix::Sdm(&old), AnyMatrix::Sdm(&new)).unwrap();
        let v: serde_json::Value = serde_json::from_str(&emit_diff_json(MatrixKind::Sdm, &d)).unwrap();
        assert_eq!(v["kind"], "sdm");
        assert_eq!(v["added"][0]["new"], "0.1");
        assert_eq!(v["changed"][0]["old"], "2");
        assert_eq!(v["changed"][0]["new"], "4.1");
        assert!(v["removed"].as_array().unwrap().is_empty());
    }

    #[test]
    fn empty_diff_formats_as_no_changes() {
        let edm = Edm::new(ids(&["a"]));
        let d = diff(AnyMatrix::Edm(&edm), AnyMatrix::Edm(&edm)).unwrap();
        assert_eq!(format_diff_table(MatrixKind::Edm, &d), "edm: no changes\n");
    }

    #[test]
    fn table_aligns_and_lists_service_churn() {
        let mut old = Edm::new(ids(&["a", "long-service-name"]));
        old.add("long-service-name", "a", 1).unwrap();
        let new = Edm::new(ids(&["a", "b"]));
        let d = diff(AnyMatrix::Edm(&old), AnyMatrix::Edm(&new)).unwrap();
        let table = format_diff_table(MatrixKind::Edm, &d);
        assert!(table.starts_with("edm: 0 added, 1 removed, 0 changed\n"));
        assert!(table.contains("removed  long-service-name  a    1    -"));
        assert!(table.contains("services added: b\n"));
        assert!(table.contains("services removed: long-service-name\n"));
    }
}
