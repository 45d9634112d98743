//! SVG point clouds of recorded trajectories.
//!
//! Output is plain SVG 1.1 text with a fixed viewport of [-1.05, 1.05]^2:
//! the unit circle, the two poles, one dot per unsaturated record, and
//! saturated records drawn at their pole in a distinct style. Rendering is
//! pure string building with fixed-precision coordinates, so identical
//! inputs produce identical bytes.

use std::fmt::Write as _;
use std::fs::File;
use std::io::Write as _;
use std::path::Path;

use crate::disk::Pole;
use crate::error::{Error, Result};
use crate::walk::TrajectoryRecord;

/// Pixel size and dot styling.
#[derive(Debug, Clone)]
pub struct RenderStyle {
    pub size_px: u32,
    pub point_radius_px: f64,
    pub point_color: String,
    pub saturated_color: String,
    pub title: Option<String>,
}

impl Default for RenderStyle {
    fn default() -> Self {
        Self {
            size_px: 840,
            point_radius_px: 1.2,
            point_color: "#1f4e79".to_string(),
            saturated_color: "#c0392b".to_string(),
            title: None,
        }
    }
}

const WORLD_HALF: f64 = 1.05;

fn px(style: &RenderStyle, v: f64) -> f64 {
    (v + WORLD_HALF) / (2.0 * WORLD_HALF) * style.size_px as f64
}

fn px_y(style: &RenderStyle, v: f64) -> f64 {
    (WORLD_HALF - v) / (2.0 * WORLD_HALF) * style.size_px as f64
}

/// Render records into an SVG string.
pub fn render_pointcloud(
    records: &[TrajectoryRecord],
    pole: Pole,
    style: &RenderStyle,
) -> String {
    let mut svg = String::new();
    let s = style.size_px;
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{s}\" height=\"{s}\" viewBox=\"0 0 {s} {s}\">"
    );
    let _ = writeln!(svg, "<rect width=\"{s}\" height=\"{s}\" fill=\"white\"/>");
    if let Some(title) = &style.title {
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"18\" font-family=\"monospace\" font-size=\"14\" text-anchor=\"middle\">{}</text>",
            s as f64 / 2.0,
            title
        );
    }
    // unit circle
    let _ = writeln!(
        svg,
        "<circle cx=\"{:.4}\" cy=\"{:.4}\" r=\"{:.4}\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>",
        px(style, 0.0),
        px_y(style, 0.0),
        s as f64 / (2.0 * WORLD_HALF)
    );
    // pole marks
    for a in [pole.alpha(), pole.neg_alpha()] {
        let _ = writeln!(
            svg,
            "<circle cx=\"{:.4}\" cy=\"{:.4}\" r=\"4\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>",
            px(style, a.re),
            px_y(style, a.im)
        );
    }

    let mut saturated_count = 0usize;
    for r in records {
        let (color, radius) = if r.saturated {
            saturated_count += 1;
            (style.saturated_color.as_str(), style.point_radius_px * 1.6)
        } else {
            (style.point_color.as_str(), style.point_radius_px)
        };
        let _ = writeln!(
            svg,
            "<circle cx=\"{:.4}\" cy=\"{:.4}\" r=\"{:.2}\" fill=\"{}\" fill-opacity=\"0.35\"/>",
            px(style, r.x),
            px_y(style, r.y),
            radius,
            color
        );
    }
    if !records.is_empty() && saturated_count == records.len() {
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{}\" font-family=\"monospace\" font-size=\"13\" text-anchor=\"middle\">warning: all {} records saturated at the poles</text>",
            s as f64 / 2.0,
            s - 12,
            saturated_count
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// Render and write to a file.
pub fn render_to_path(
    records: &[TrajectoryRecord],
    pole: Pole,
    style: &RenderStyle,
    path: &Path,
) -> Result<()> {
    let svg = render_pointcloud(records, pole, style);
    let mut f = File::create(path).map_err(|source| Error::Io { written: 0, source })?;
    f.write_all(svg.as_bytes())
        .map_err(|source| Error::Io { written: 0, source })?;
    Ok(())
}
