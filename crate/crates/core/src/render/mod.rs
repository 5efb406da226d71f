//! Result serialization: the JSON report, CSV matrix exports, and SVG
//! heatmaps. All emitters are pure functions of their inputs and produce
//! byte-identical output for identical inputs.

pub mod csv;
pub mod diff;
pub mod json;
pub mod svg;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{MatrixKind, MatrixView};
use crate::model::DepClass;

pub use csv::{emit_csv, emit_hotspots_csv};
pub use diff::{emit_diff_json, format_diff_table};
pub use json::emit_json;
pub use svg::emit_heatmap;

/// Fill colors for the heatmaps, as `#rrggbb` strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default, deny_unknown_fields)]
pub struct ColorConfig {
    /// Ramp endpoints for the count matrices.
    pub ramp_start: String,
    pub ramp_end: String,
    /// Classification colors for the merged matrix.
    pub endpoints_only: String,
    pub data_only: String,
    pub both: String,
}

impl Default for ColorConfig {
    fn default() -> Self {
        ColorConfig {
            ramp_start: "#ffffff".to_string(),
            ramp_end: "#08306b".to_string(),
            endpoints_only: "#1f77b4".to_string(),
            data_only: "#ff7f0e".to_string(),
            both: "#d62728".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default, deny_unknown_fields)]
pub struct RenderConfig {
    pub colors: ColorConfig,
    /// Outline the rows and columns with the most nonzero cells.
    pub mark_extremes: bool,
}

impl Default for RenderConfig {
    fn default() -> Self {
        RenderConfig { colors: ColorConfig::default(), mark_extremes: true }
    }
}

impl RenderConfig {
    pub fn check(&self) -> Result<()> {
        let colors = [
            &self.colors.ramp_start,
            &self.colors.ramp_end,
            &self.colors.endpoints_only,
            &self.colors.data_only,
            &self.colors.both,
        ];
        for color in colors {
            if svg::parse_hex(color).is_none() {
                return Err(Error::Config(format!(
                    "color {color:?} is not a #rrggbb value"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColorScale {
    EdmHeat,
    DdmHeat,
    SdmThreeClass,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeatLabel {
    pub ordinal: u32,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeatCell {
    /// Indexes into the label lists.
    pub row: usize,
    pub col: usize,
    pub display: String,
    pub magnitude: u32,
    pub class: Option<DepClass>,
}

/// Everything the SVG emitter needs, decoupled from matrix internals.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatmapSpec {
    pub title: String,
    pub row_labels: Vec<HeatLabel>,
    pub col_labels: Vec<HeatLabel>,
    pub cells: Vec<HeatCell>,
    pub color_scale: ColorScale,
    pub mark_extremes: bool,
}

impl HeatmapSpec {
    /// Lift a pruned display view into a heatmap description.
    pub fn from_view(view: &MatrixView, title: impl Into<String>, mark_extremes: bool) -> Self {
        let label = |s: &crate::model::ServiceId| HeatLabel { ordinal: s.ordinal, name: s.name.clone() };
        let row_index: std::collections::BTreeMap<&str, usize> =
            view.rows.iter().enumerate().map(|(i, s)| (s.name.as_str(), i)).collect();
        let col_index: std::collections::BTreeMap<&str, usize> =
            view.cols.iter().enumerate().map(|(i, s)| (s.name.as_str(), i)).collect();
        let cells = view
            .cells
            .iter()
            .filter_map(|c| {
                Some(HeatCell {
                    row: *row_index.get(c.row.as_str())?,
                    col: *col_index.get(c.col.as_str())?,
                    display: c.display.clone(),
                    magnitude: c.magnitude,
                    class: c.class,
                })
            })
            .collect();
        HeatmapSpec {
            title: title.into(),
            row_labels: view.rows.iter().map(label).collect(),
            col_labels: view.cols.iter().map(label).collect(),
            cells,
            color_scale: match view.kind {
                MatrixKind::Edm => ColorScale::EdmHeat,
                MatrixKind::Ddm => ColorScale::DdmHeat,
                MatrixKind::Sdm => ColorScale::SdmThreeClass,
            },
            mark_extremes,
        }
    }

    pub fn check(&self) -> Result<()> {
        for cell in &self.cells {
            if cell.row >= self.row_labels.len() || cell.col >= self.col_labels.len() {
                return Err(Error::Config(format!(
                    "heatmap cell ({}, {}) is outside the {}x{} label grid",
                    cell.row,
                    cell.col,
                    self.row_labels.len(),
                    self.col_labels.len()
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::prune_edm;
    use crate::model::{Edm, ServiceId};

    fn two_services() -> Vec<ServiceId> {
        vec![
            ServiceId { name: "svc-a".into(), ordinal: 1 },
            ServiceId { name: "svc-b".into(), ordinal: 2 },
        ]
    }

    #[test]
    fn view_lifts_into_spec_with_ordinals() {
        let mut edm = Edm::new(two_services());
        edm.add("svc-a", "svc-b", 3).unwrap();
        let spec = HeatmapSpec::from_view(&prune_edm(&edm), "calls", true);
        spec.check().unwrap();
        assert_eq!(spec.row_labels, vec![HeatLabel { ordinal: 1, name: "svc-a".into() }]);
        assert_eq!(spec.col_labels, vec![HeatLabel { ordinal: 2, name: "svc-b".into() }]);
        assert_eq!(spec.cells.len(), 1);
        assert_eq!(spec.cells[0].display, "3");
        assert_eq!(spec.color_scale, ColorScale::EdmHeat);
    }

    #[test]
    fn bad_colors_fail_validation() {
        let mut config = RenderConfig::default();
        config.check().unwrap();
        config.colors.ramp_end = "blue".to_string();
        assert!(config.check().is_err());
    }

    #[test]
    fn out_of_range_cells_fail_validation() {
        let spec = HeatmapSpec {
            title: "t".into(),
            row_labels: vec![],
            col_labels: vec![],
            cells: vec![HeatCell { row: 0, col: 0, display: "1".into(), magnitude: 1, class: None }],
            color_scale: ColorScale::EdmHeat,
            mark_extremes: false,
        };
        assert!(spec.check().is_err());
    }
}
