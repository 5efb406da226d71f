//! Hand-rolled SVG heatmaps. Row and column headers carry service ordinals,
//! a legend maps ordinals back to names, cell fills follow either a linear
//! count ramp or the three-class dependency palette, and the rows and columns
//! with the most nonzero cells get a contrasting outline. Coordinates are
//! integers, so identical specs yield byte-identical documents.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::model::DepClass;
use crate::render::{ColorConfig, ColorScale, HeatmapSpec};

const MARGIN: usize = 12;
const TITLE_H: usize = 24;
const HEAD_H: usize = 22;
const ROW_HEAD_W: usize = 34;
const CELL_W: usize = 46;
const CELL_H: usize = 26;
const LEGEND_LINE: usize = 16;
const LEGEND_GAP: usize = 12;
const MARK_COLOR: &str = "#ff0000";

pub(crate) fn parse_hex(color: &str) -> Option<(u8, u8, u8)> {
    let hex = color.strip_prefix('#')?;
    if hex.len() != 6 || !hex.bytes().all(|b| b.is_ascii_hexdigit()) {
        return None;
    }
    let channel = |i: usize| u8::from_str_radix(&hex[i..i + 2], 16).ok();
    Some((channel(0)?, channel(2)?, channel(4)?))
}

fn to_hex((r, g, b): (u8, u8, u8)) -> String {
    format!("#{r:02x}{g:02x}{b:02x}")
}

/// Linear interpolation per channel; t is clamped to [0, 1].
fn mix(start: (u8, u8, u8), end: (u8, u8, u8), t: f64) -> (u8, u8, u8) {
    let t = t.clamp(0.0, 1.0);
    let lerp = |a: u8, b: u8| (a as f64 + (b as f64 - a as f64) * t).round() as u8;
    (lerp(start.0, end.0), lerp(start.1, end.1), lerp(start.2, end.2))
}

/// Perceived brightness on 0..255; used to keep cell text readable.
fn luminance((r, g, b): (u8, u8, u8)) -> f64 {
    0.299 * r as f64 + 0.587 * g as f64 + 0.114 * b as f64
}

fn xml_escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

fn fallback(color: &str, default: (u8, u8, u8)) -> (u8, u8, u8) {
    parse_hex(color).unwrap_or(default)
}

struct Palette {
    ramp_start: (u8, u8, u8),
    ramp_end: (u8, u8, u8),
    endpoints_only: (u8, u8, u8),
    data_only: (u8, u8, u8),
    both: (u8, u8, u8),
}

impl Palette {
    fn from_config(colors: &ColorConfig) -> Self {
        Palette {
            ramp_start: fallback(&colors.ramp_start, (0xff, 0xff, 0xff)),
            ramp_end: fallback(&colors.ramp_end, (0x08, 0x30, 0x6b)),
            endpoints_only: fallback(&colors.endpoints_only, (0x1f, 0x77, 0xb4)),
            data_only: fallback(&colors.data_only, (0xff, 0x7f, 0x0e)),
            both: fallback(&colors.both, (0xd6, 0x27, 0x28)),
        }
    }

    fn cell_fill(&self, spec: &HeatmapSpec, class: Option<DepClass>, magnitude: u32, max: u32) -> (u8, u8, u8) {
        match spec.color_scale {
            ColorScale::SdmThreeClass => match class {
                Some(DepClass::EndpointsOnly) => self.endpoints_only,
                Some(DepClass::DataOnly) => self.data_only,
                Some(DepClass::Both) | None => self.both,
            },
            ColorScale::EdmHeat | ColorScale::DdmHeat => {
                let t = if max == 0 { 0.0 } else { magnitude as f64 / max as f64 };
                mix(self.ramp_start, self.ramp_end, t)
            }
        }
    }
}

/// Indices of the rows (or columns) tied for the most nonzero cells.
fn extreme_indices(counts: &[usize]) -> Vec<usize> {
    let max = counts.iter().copied().max().unwrap_or(0);
    if max == 0 {
        return Vec::new();
    }
    counts
        .iter()
        .enumerate()
        .filter(|(_, c)| **c == max)
        .map(|(i, _)| i)
        .collect()
}

pub fn emit_heatmap(spec: &HeatmapSpec, colors: &ColorConfig) -> String {
    let palette = Palette::from_config(colors);
    let rows = spec.row_labels.len();
    let cols = spec.col_labels.len();
    let grid_x = MARGIN + ROW_HEAD_W;
    let grid_y = MARGIN + TITLE_H + HEAD_H;
    let grid_w = cols * CELL_W;
    let grid_h = rows * CELL_H;

    // Legend: every service appearing on either axis, in ordinal order.
    let mut legend: BTreeMap<u32, &str> = BTreeMap::new();
    for label in spec.row_labels.iter().chain(&spec.col_labels) {
        legend.insert(label.ordinal, &label.name);
    }

    let legend_y = grid_y + grid_h + LEGEND_GAP;
    let width = (grid_x + grid_w + MARGIN).max(
        MARGIN * 2 + legend.values().map(|n| n.len() * 7 + 60).max().unwrap_or(0).max(spec.title.len() * 8),
    );
    let height = legend_y + legend.len() * LEGEND_LINE + MARGIN;

    let mut svg = String::new();
    let _ = write!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\" font-family=\"sans-serif\" font-size=\"12\">\n"
    );
    let _ = write!(svg, "<rect width=\"{width}\" height=\"{height}\" fill=\"#ffffff\"/>\n");
    let _ = write!(
        svg,
        "<text x=\"{}\" y=\"{}\" font-size=\"14\" font-weight=\"bold\">{}</text>\n",
        MARGIN,
        MARGIN + 14,
        xml_escape(&spec.title)
    );

    // Ordinal headers.
    for (c, label) in spec.col_labels.iter().enumerate() {
        let x = grid_x + c * CELL_W + CELL_W / 2;
        let y = grid_y - 7;
        let _ = write!(
            svg,
            "<text x=\"{x}\" y=\"{y}\" text-anchor=\"middle\">{}</text>\n",
            label.ordinal
        );
    }
    for (r, label) in spec.row_labels.iter().enumerate() {
        let x = grid_x - 8;
        let y = grid_y + r * CELL_H + CELL_H / 2 + 4;
        let _ = write!(
            svg,
            "<text x=\"{x}\" y=\"{y}\" text-anchor=\"end\">{}</text>\n",
            label.ordinal
        );
    }

    // Grid cells. Empty positions get a plain background rect so the grid
    // reads as a full matrix; filled positions carry class="cell".
    let max_magnitude = spec.cells.iter().map(|c| c.magnitude).max().unwrap_or(0);
    let mut grid: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (i, cell) in spec.cells.iter().enumerate() {
        grid.insert((cell.row, cell.col), i);
    }
    for r in 0..rows {
        for c in 0..cols {
            let x = grid_x + c * CELL_W;
            let y = grid_y + r * CELL_H;
            match grid.get(&(r, c)) {
                Some(&i) => {
                    let cell = &spec.cells[i];
                    let fill = palette.cell_fill(spec, cell.class, cell.magnitude, max_magnitude);
                    let _ = write!(
                        svg,
                        "<rect class=\"cell\" x=\"{x}\" y=\"{y}\" width=\"{CELL_W}\" height=\"{CELL_H}\" \
                         fill=\"{}\" stroke=\"#999999\"/>\n",
                        to_hex(fill)
                    );
                    let text_fill = if luminance(fill) > 140.0 { "#000000" } else { "#ffffff" };
                    let _ = write!(
                        svg,
                        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" fill=\"{text_fill}\">{}</text>\n",
                        x + CELL_W / 2,
                        y + CELL_H / 2 + 4,
                        xml_escape(&cell.display)
                    );
                }
                None => {
                    let _ = write!(
                        svg,
                        "<rect x=\"{x}\" y=\"{y}\" width=\"{CELL_W}\" height=\"{CELL_H}\" \
                         fill=\"#ffffff\" stroke=\"#999999\"/>\n"
                    );
                }
            }
        }
    }

    // Outline every row and column tied for the most nonzero cells.
    if spec.mark_extremes && !spec.cells.is_empty() {
        let mut row_counts = vec![0usize; rows];
        let mut col_counts = vec![0usize; cols];
        for cell in &spec.cells {
            row_counts[cell.row] += 1;
            col_counts[cell.col] += 1;
        }
        for r in extreme_indices(&row_counts) {
            let y = grid_y + r * CELL_H;
            let _ = write!(
                svg,
                "<rect class=\"mark\" x=\"{grid_x}\" y=\"{y}\" width=\"{grid_w}\" height=\"{CELL_H}\" \
                 fill=\"none\" stroke=\"{MARK_COLOR}\" stroke-width=\"2\"/>\n"
            );
        }
        for c in extreme_indices(&col_counts) {
            let x = grid_x + c * CELL_W;
            let _ = write!(
                svg,
                "<rect class=\"mark\" x=\"{x}\" y=\"{grid_y}\" width=\"{CELL_W}\" height=\"{grid_h}\" \
                 fill=\"none\" stroke=\"{MARK_COLOR}\" stroke-width=\"2\"/>\n"
            );
        }
    }

    // Ordinal-to-name legend.
    for (i, (ordinal, name)) in legend.iter().enumerate() {
        let y = legend_y + i * LEGEND_LINE + 12;
        let _ = write!(
            svg,
            "<text x=\"{MARGIN}\" y=\"{y}\">{ordinal} = {}</text>\n",
            xml_escape(name)
        );
    }

    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{prune_edm, prune_sdm};
    use crate::model::{Edm, Sdm, SdmCell, ServiceId};

    fn ids(names: &[&str]) -> Vec<ServiceId> {
        names
            .iter()
            .enumerate()
            .map(|(i, n)| ServiceId { name: n.to_string(), ordinal: (i + 1) as u32 })
            .collect()
    }

    fn cell_count(svg: &str) -> usize {
        svg.matches("class=\"cell\"").count()
    }

    #[test]
    fn filled_cells_match_view_and_headers_use_ordinals() {
        let mut edm = Edm::new(ids(&["svc-a", "svc-b", "svc-c"]));
        edm.add("svc-a", "svc-b", 3).unwrap();
        edm.add("svc-c", "svc-b", 1).unwrap();
        let spec = HeatmapSpec::from_view(&prune_edm(&edm), "calls", false);
        let svg = emit_heatmap(&spec, &ColorConfig::default());
        assert_eq!(cell_count(&svg), 2);
        assert!(svg.contains(">1 = svc-a<"));
        assert!(svg.contains(">2 = svc-b<"));
        assert!(svg.contains(">3 = svc-c<"));
        assert!(svg.starts_with("<svg "));
        assert!(svg.ends_with("</svg>\n"));
    }

    #[test]
    fn names_are_xml_escaped() {
        let mut edm = Edm::new(ids(&["a&b<c", "plain"]));
        edm.add("a&b<c", "plain", 1).unwrap();
        let spec = HeatmapSpec::from_view(&prune_edm(&edm), "x < y", true);
        let svg = emit_heatmap(&spec, &ColorConfig::default());
        assert!(svg.contains("a&amp;b&lt;c"));
        assert!(svg.contains("x &lt; y"));
        assert!(!svg.contains("a&b"));
    }

    #[test]
    fn all_tied_extremes_are_marked() {
        // Both rows have one nonzero cell; both columns too. Expect 4 marks.
        let mut edm = Edm::new(ids(&["a", "b", "c", "d"]));
        edm.add("a", "b", 1).unwrap();
        edm.add("c", "d", 2).unwrap();
        let spec = HeatmapSpec::from_view(&prune_edm(&edm), "calls", true);
        let svg = emit_heatmap(&spec, &ColorConfig::default());
        assert_eq!(svg.matches("class=\"mark\"").count(), 4);
        let without = HeatmapSpec { mark_extremes: false, ..spec };
        assert_eq!(emit_heatmap(&without, &ColorConfig::default()).matches("class=\"mark\"").count(), 0);
    }

    #[test]
    fn single_extreme_row_and_column_get_one_mark_each() {
        let mut edm = Edm::new(ids(&["a", "b", "c"]));
        edm.add("a", "b", 1).unwrap();
        edm.add("a", "c", 1).unwrap();
        edm.add("b", "c", 1).unwrap();
        let spec = HeatmapSpec::from_view(&prune_edm(&edm), "calls", true);
        let svg = emit_heatmap(&spec, &ColorConfig::default());
        // Row "a" has two cells, rows "b" one; column "c" two, column "b" one.
        assert_eq!(svg.matches("class=\"mark\"").count(), 2);
    }

    #[test]
    fn merged_matrix_uses_class_palette() {
        let mut sdm = Sdm::new(ids(&["a", "b", "c"]));
        sdm.set("a", "b", SdmCell { endpoint_degree: 2, data_degree: 0 }).unwrap();
        sdm.set("b", "a", SdmCell { endpoint_degree: 0, data_degree: 3 }).unwrap();
        sdm.set("a", "c", SdmCell { endpoint_degree: 4, data_degree: 1 }).unwrap();
        let spec = HeatmapSpec::from_view(&prune_sdm(&sdm), "merged", false);
        let svg = emit_heatmap(&spec, &ColorConfig::default());
        assert!(svg.contains("fill=\"#1f77b4\""));
        assert!(svg.contains("fill=\"#ff7f0e\""));
        assert!(svg.contains("fill=\"#d62728\""));
        assert!(svg.contains(">4.1<"));
    }

    #[test]
    fn count_ramp_darkens_with_magnitude_and_flips_text_color() {
        let mut edm = Edm::new(ids(&["a", "b", "c"]));
        edm.add("a", "b", 1).unwrap();
        edm.add("a", "c", 10).unwrap();
        let spec = HeatmapSpec::from_view(&prune_edm(&edm), "calls", false);
        let svg = emit_heatmap(&spec, &ColorConfig::default());
        // The maximal cell takes the full ramp end and needs light text.
        assert!(svg.contains("fill=\"#08306b\""));
        assert!(svg.contains("fill=\"#ffffff\">10<"));
    }

    #[test]
    fn empty_view_renders_headers_only() {
        let edm = Edm::new(ids(&["a", "b"]));
        let spec = HeatmapSpec::from_view(&prune_edm(&edm), "calls", true);
        let svg = emit_heatmap(&spec, &ColorConfig::default());
        assert_eq!(cell_count(&svg), 0);
        assert_eq!(svg.matches("class=\"mark\"").count(), 0);
        assert!(svg.contains("calls"));
    }

    #[test]
    fn hex_parsing_accepts_rrggbb_only() {
        assert_eq!(parse_hex("#08306b"), Some((0x08, 0x30, 0x6b)));
        assert_eq!(parse_hex("08306b"), None);
        assert_eq!(parse_hex("#08306"), None);
        assert_eq!(parse_hex("#08306g"), None);
    }
}
