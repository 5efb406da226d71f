//! CSV exports: one file per matrix view plus the hotspot table. Quoting and
//! escaping follow RFC 4180 via the csv crate.

use crate::matrix::{HotspotRow, MatrixView};

fn finish(writer: csv::Writer<Vec<u8>>) -> String {
    let bytes = writer.into_inner().expect("csv buffer");
    String::from_utf8(bytes).expect("csv output is utf-8")
}

/// Matrix as a grid: header row carries the column service names, the first
/// field of each data row carries the row service name, and cells without a
/// dependency stay blank.
pub fn emit_csv(view: &MatrixView) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut header = vec![String::new()];
    header.extend(view.cols.iter().map(|s| s.name.clone()));
    writer.write_record(&header).expect("csv header");
    for row in &view.rows {
        let mut record = vec![row.name.clone()];
        for col in &view.cols {
            record.push(match view.cell_at(&row.name, &col.name) {
                Some(cell) => cell.display.clone(),
                None => String::new(),
            });
        }
        writer.write_record(&record).expect("csv row");
    }
    finish(writer)
}

/// Hotspot endpoints, most-called first, with their source locations.
pub fn emit_hotspots_csv(rows: &[HotspotRow]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["service", "path", "method", "callCount", "distinctCallers", "file", "line"])
        .expect("csv header");
    for row in rows {
        writer
            .write_record([
                row.endpoint.service.as_str(),
                &row.endpoint.path.render(),
                row.endpoint.method.as_str(),
                &row.call_count.to_string(),
                &row.distinct_callers.to_string(),
                row.endpoint.source_loc.file.as_str(),
                &row.endpoint.source_loc.line.to_string(),
            ])
            .expect("csv row");
    }
    finish(writer)
}
