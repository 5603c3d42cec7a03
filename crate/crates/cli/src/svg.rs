//! Standalone SVG heatmaps. Output is a pure function of the input, so
//! identical data gives byte-identical files.

use std::fmt::Write;

use anyhow::{bail, Result};

pub const SVG_SCHEMA_VERSION: u32 = 1;

const PLOT: f64 = 512.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 50.0;
const BAR_WIDTH: f64 = 16.0;
const BAR_GAP: f64 = 20.0;
const MARGIN_RIGHT: f64 = 90.0;

/// Colour for `+∞` cells.
pub const SATURATED: &str = "#ff00ff";

// viridis, sampled at 5 stops
const PALETTE: [(u8, u8, u8); 5] = [
    (0x44, 0x01, 0x54),
    (0x3b, 0x52, 0x8b),
    (0x21, 0x91, 0x8c),
    (0x5e, 0xc9, 0x62),
    (0xfd, 0xe7, 0x25),
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ColorScale {
    Linear { min: f64, max: f64 },
    Log { min: f64, max: f64 },
}

impl ColorScale {
    fn unit(&self, v: f64) -> f64 {
        let t = match *self {
            ColorScale::Linear { min, max } => (v - min) / (max - min),
            ColorScale::Log { min, max } => (v.ln() - min.ln()) / (max.ln() - min.ln()),
        };
        if t.is_finite() {
            t.clamp(0.0, 1.0)
        } else {
            0.0
        }
    }

    fn bounds(&self) -> (f64, f64) {
        match *self {
            ColorScale::Linear { min, max } | ColorScale::Log { min, max } => (min, max),
        }
    }
}

fn palette(t: f64) -> String {
    let x = t * (PALETTE.len() - 1) as f64;
    let k = (x.floor() as usize).min(PALETTE.len() - 2);
    let f = x - k as f64;
    let mix = |a: u8, b: u8| (a as f64 + f * (b as f64 - a as f64)).round() as u8;
    let (a, b) = (PALETTE[k], PALETTE[k + 1]);
    format!(
        "#{:02x}{:02x}{:02x}",
        mix(a.0, b.0),
        mix(a.1, b.1),
        mix(a.2, b.2)
    )
}

/// `cells[ix][iy]`; `None` cells are left blank, `+∞` cells use [`SATURATED`].
pub struct Heatmap {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub cells: Vec<Vec<Option<f64>>>,
    pub scale: ColorScale,
    pub value_label: String,
    pub metadata: Vec<(String, String)>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
        .replace("--", "- -")
}

fn tick(v: f64) -> String {
    if v.abs() >= 1e4 || (v != 0.0 && v.abs() < 1e-2) {
        format!("{v:.2e}")
    } else {
        format!("{}", (v * 1000.0).round() / 1000.0)
    }
}

impl Heatmap {
    pub fn render(&self) -> Result<String> {
        let nx = self.cells.len();
        let ny = self.cells.first().map_or(0, Vec::len);
        if nx == 0 || ny == 0 || self.cells.iter().flatten().all(Option::is_none) {
            bail!("empty dataset: nothing to draw");
        }
        let (cw, ch) = (PLOT / nx as f64, PLOT / ny as f64);
        let width = MARGIN_LEFT + PLOT + MARGIN_RIGHT;
        let height = MARGIN_TOP + PLOT + MARGIN_BOTTOM;

        let mut s = String::new();
        writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#)?;
        writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
        )?;
        writeln!(s, "<!-- schema_version={SVG_SCHEMA_VERSION} -->")?;
        for (k, v) in &self.metadata {
            writeln!(s, "<!-- {}={} -->", escape(k), escape(v))?;
        }
        writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#)?;
        writeln!(
            s,
            r#"<text x="{:.1}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">{}</text>"#,
            MARGIN_LEFT + PLOT / 2.0,
            escape(&self.title)
        )?;

        writeln!(s, r#"<g shape-rendering="crispEdges">"#)?;
        for (ix, column) in self.cells.iter().enumerate() {
            for (iy, cell) in column.iter().enumerate() {
                let Some(v) = cell else { continue };
                let fill = if v.is_infinite() {
                    SATURATED.to_string()
                } else if v.is_nan() {
                    continue;
                } else {
                    palette(self.scale.unit(*v))
                };
                // iy = 0 at the bottom
                let x = MARGIN_LEFT + ix as f64 * cw;
                let y = MARGIN_TOP + PLOT - (iy + 1) as f64 * ch;
                writeln!(
                    s,
                    r#"<rect x="{x:.3}" y="{y:.3}" width="{cw:.3}" height="{ch:.3}" fill="{fill}" data-ix="{ix}" data-iy="{iy}"/>"#
                )?;
            }
        }
        writeln!(s, "</g>")?;

        // frame and axes
        writeln!(
            s,
            r#"<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{PLOT}" height="{PLOT}" fill="none" stroke="black"/>"#
        )?;
        let bottom = MARGIN_TOP + PLOT;
        let text = |s: &mut String, x: f64, y: f64, anchor: &str, body: &str| {
            writeln!(
                s,
                r#"<text x="{x:.1}" y="{y:.1}" font-family="sans-serif" font-size="12" text-anchor="{anchor}">{}</text>"#,
                escape(body)
            )
        };
        text(
            &mut s,
            MARGIN_LEFT,
            bottom + 16.0,
            "start",
            &tick(self.x_range.0),
        )?;
        text(
            &mut s,
            MARGIN_LEFT + PLOT,
            bottom + 16.0,
            "end",
            &tick(self.x_range.1),
        )?;
        text(
            &mut s,
            MARGIN_LEFT + PLOT / 2.0,
            bottom + 36.0,
            "middle",
            &self.x_label,
        )?;
        text(
            &mut s,
            MARGIN_LEFT - 6.0,
            bottom,
            "end",
            &tick(self.y_range.0),
        )?;
        text(
            &mut s,
            MARGIN_LEFT - 6.0,
            MARGIN_TOP + 10.0,
            "end",
            &tick(self.y_range.1),
        )?;
        writeln!(
            s,
            r#"<text x="20" y="{:.1}" font-family="sans-serif" font-size="12" text-anchor="middle" transform="rotate(-90 20 {:.1})">{}</text>"#,
            MARGIN_TOP + PLOT / 2.0,
            MARGIN_TOP + PLOT / 2.0,
            escape(&self.y_label)
        )?;

        // colour bar
        let bar_x = MARGIN_LEFT + PLOT + BAR_GAP;
        let steps = 64;
        let step_h = PLOT / steps as f64;
        for k in 0..steps {
            let y = bottom - (k + 1) as f64 * step_h;
            writeln!(
                s,
                r#"<rect x="{bar_x:.1}" y="{y:.3}" width="{BAR_WIDTH}" height="{step_h:.3}" fill="{}"/>"#,
                palette((k as f64 + 0.5) / steps as f64)
            )?;
        }
        let (lo, hi) = self.scale.bounds();
        let label_x = bar_x + BAR_WIDTH + 4.0;
        text(&mut s, label_x, bottom, "start", &tick(lo))?;
        text(&mut s, label_x, MARGIN_TOP + 10.0, "start", &tick(hi))?;
        writeln!(
            s,
            r#"<rect x="{bar_x:.1}" y="{:.1}" width="{BAR_WIDTH}" height="10" fill="{SATURATED}"/>"#,
            MARGIN_TOP - 16.0
        )?;
        text(&mut s, label_x, MARGIN_TOP - 7.0, "start", "inf")?;
        text(&mut s, bar_x, bottom + 36.0, "start", &self.value_label)?;
        writeln!(s, "</svg>")?;
        Ok(s)
    }
}
