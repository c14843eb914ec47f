use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::metrics::ConfusionMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct HeatmapStyle {
    pub cell_size: u32,
    /// Fill opacity of a zero cell.
    pub min_intensity: f64,
    /// Fill opacity of the largest cell.
    pub max_intensity: f64,
    /// `rgb(...)` base colour, scaled by intensity through fill-opacity.
    pub color: String,
    pub title: String,
}

impl Default for HeatmapStyle {
    fn default() -> Self {
        HeatmapStyle {
            cell_size: 80,
            min_intensity: 0.0,
            max_intensity: 1.0,
            color: "rgb(8,48,107)".into(),
            title: "Confusion matrix".into(),
        }
    }
}

impl HeatmapStyle {
    /// Linear in count / max count.
    pub fn intensity(&self, count: u64, max: u64) -> f64 {
        let frac = if max == 0 { 0.0 } else { count as f64 / max as f64 };
        self.min_intensity + (self.max_intensity - self.min_intensity) * frac
    }
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c if (c as u32) < 0x20 && !matches!(c, '\t' | '\n' | '\r') => out.push(' '),
            c => out.push(c),
        }
    }
    out
}

/// Self-contained SVG: one `rect.cell` and one `text.count` per matrix cell,
/// label names along both axes.
pub fn heatmap_svg(matrix: &ConfusionMatrix, style: &HeatmapStyle) -> String {
    let k = matrix.labels.len() as u32;
    let cs = style.cell_size;
    let left = 160;
    let top = 60;
    let width = left + k * cs + 20;
    let height = top + k * cs + 90;
    let max = matrix.max_count();

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif">"#
    );
    let _ = writeln!(svg, r#"  <rect x="0" y="0" width="{width}" height="{height}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"  <text class="title" x="{}" y="30" text-anchor="middle" font-size="18">{}</text>"#,
        left + k * cs / 2,
        xml_escape(&style.title)
    );
    for (i, row) in matrix.counts.iter().enumerate() {
        for (j, &count) in row.iter().enumerate() {
            let x = left + j as u32 * cs;
            let y = top + i as u32 * cs;
            let intensity = style.intensity(count, max);
            let _ = writeln!(
                svg,
                r##"  <rect class="cell" x="{x}" y="{y}" width="{cs}" height="{cs}" fill="{}" fill-opacity="{intensity:.4}" stroke="#cccccc"/>"##,
                style.color
            );
            let ink = if intensity > 0.5 { "white" } else { "black" };
            let _ = writeln!(
                svg,
                r#"  <text class="count" x="{}" y="{}" text-anchor="middle" dominant-baseline="central" font-size="16" fill="{ink}">{count}</text>"#,
                x + cs / 2,
                y + cs / 2
            );
        }
    }
    for (i, label) in matrix.labels.iter().enumerate() {
        let label = xml_escape(label);
        let _ = writeln!(
            svg,
            r#"  <text class="row-label" x="{}" y="{}" text-anchor="end" dominant-baseline="central" font-size="13">{label}</text>"#,
            left - 8,
            top + i as u32 * cs + cs / 2
        );
        let _ = writeln!(
            svg,
            r#"  <text class="col-label" x="{}" y="{}" text-anchor="middle" font-size="13">{label}</text>"#,
            left + i as u32 * cs + cs / 2,
            top + k * cs + 20
        );
    }
    let _ = writeln!(
        svg,
        r#"  <text x="{}" y="{}" text-anchor="middle" font-size="14">Predicted label</text>"#,
        left + k * cs / 2,
        top + k * cs + 55
    );
    let _ = writeln!(
        svg,
        r#"  <text x="20" y="{}" text-anchor="middle" font-size="14" transform="rotate(-90 20 {})">True label</text>"#,
        top + k * cs / 2,
        top + k * cs / 2
    );
    svg.push_str("</svg>\n");
    svg
}

pub fn render_heatmap(matrix: &ConfusionMatrix, style: &HeatmapStyle, output: &Path) -> Result<()> {
    fs::write(output, heatmap_svg(matrix, style)).map_err(|e| Error::file(output, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m2() -> ConfusionMatrix {
        ConfusionMatrix {
            labels: vec!["a".into(), "b<&>".into()],
            counts: vec![vec![2, 0], vec![0, 2]],
        }
    }

    #[test]
    fn one_rect_and_count_per_cell() {
        let svg = heatmap_svg(&m2(), &HeatmapStyle::default());
        assert_eq!(svg.matches(r#"class="cell""#).count(), 4);
        assert_eq!(svg.matches(r#"class="count""#).count(), 4);
        assert!(svg.contains("b&lt;&amp;&gt;"));
    }

    #[test]
    fn intensity_endpoints() {
        let style = HeatmapStyle {
            min_intensity: 0.1,
            max_intensity: 0.9,
            ..Default::default()
        };
        assert_eq!(style.intensity(2, 2), 0.9);
        assert_eq!(style.intensity(0, 2), 0.1);
        assert_eq!(style.intensity(0, 0), 0.1);
        let svg = heatmap_svg(&m2(), &style);
        assert_eq!(svg.matches(r#"fill-opacity="0.9000""#).count(), 2);
        assert_eq!(svg.matches(r#"fill-opacity="0.1000""#).count(), 2);
    }
}
