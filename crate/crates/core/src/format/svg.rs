//! Static SVG drawings of layers and tilings.
//!
//! The first panel is the layer itself: levels `k..n` as rows of vertices
//! from the bottom up, consecutive rows joined by gray edges. Each block of
//! a tiling then gets a panel of its own in which its vertices and the
//! edges between them are colored. Coordinates are printed with one
//! decimal, so output depends only on the input.

use std::fmt::Write;

use crate::geometry::{Block, Layer};
use crate::tiling::Tiling;

/// Drawing parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Style {
    pub level_spacing: f64,
    pub vertex_spacing: f64,
    pub vertex_radius: f64,
    pub margin: f64,
    /// Panels per row.
    pub columns: usize,
    /// Block colors, used in turn.
    pub colors: Vec<String>,
}

impl Default for Style {
    fn default() -> Self {
        Style {
            level_spacing: 48.0,
            vertex_spacing: 24.0,
            vertex_radius: 5.0,
            margin: 20.0,
            columns: 4,
            colors: ["#e76f51", "#2a9d8f", "#e9c46a", "#264653", "#f4a261", "#8ab17d", "#b5838d", "#6d597a"]
                .iter()
                .map(|c| c.to_string())
                .collect(),
        }
    }
}

struct Geometry<'a> {
    layer: &'a Layer,
    style: &'a Style,
    width: f64,
    height: f64,
}

impl Geometry<'_> {
    fn new<'a>(layer: &'a Layer, style: &'a Style) -> Geometry<'a> {
        let widest = layer.sizes().iter().copied().max().unwrap_or(1);
        Geometry {
            layer,
            style,
            width: 2.0 * style.margin + (widest.saturating_sub(1)) as f64 * style.vertex_spacing,
            height: 2.0 * style.margin + (layer.height() - 1) as f64 * style.level_spacing + 14.0,
        }
    }

    /// Center of vertex `label` on the row at `level` (0 = bottom).
    fn point(&self, level: usize, label: u32) -> (f64, f64) {
        let size = self.layer.sizes()[level];
        let row = (size - 1) as f64 * self.style.vertex_spacing;
        let x = (self.width - row) / 2.0 + (label - 1) as f64 * self.style.vertex_spacing;
        let y = self.style.margin + 14.0 + (self.layer.height() - 1 - level) as f64 * self.style.level_spacing;
        (x, y)
    }

    fn edges(&self, out: &mut String, levels: &[Vec<u32>], stroke: &str, width: f64) {
        for level in 0..levels.len().saturating_sub(1) {
            for &a in &levels[level] {
                for &b in &levels[level + 1] {
                    let (x1, y1) = self.point(level, a);
                    let (x2, y2) = self.point(level + 1, b);
                    writeln!(
                        out,
                        "<line x1=\"{x1:.1}\" y1=\"{y1:.1}\" x2=\"{x2:.1}\" y2=\"{y2:.1}\" stroke=\"{stroke}\" stroke-width=\"{width:.1}\"/>"
                    )
                    .unwrap();
                }
            }
        }
    }

    fn vertices(&self, out: &mut String, levels: &[Vec<u32>], fill: &str) {
        for (level, labels) in levels.iter().enumerate() {
            for &v in labels {
                let (x, y) = self.point(level, v);
                writeln!(
                    out,
                    "<circle cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"{:.1}\" fill=\"{fill}\" stroke=\"#333333\"/>",
                    self.style.vertex_radius
                )
                .unwrap();
            }
        }
    }

    fn all_levels(&self) -> Vec<Vec<u32>> {
        self.layer
            .sizes()
            .iter()
            .map(|&s| (1..=s as u32).collect())
            .collect()
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn panel(out: &mut String, g: &Geometry<'_>, index: usize, id: &str, title: &str, body: &str) {
    let column = index % g.style.columns.max(1);
    let row = index / g.style.columns.max(1);
    writeln!(
        out,
        "<g id=\"{id}\" transform=\"translate({:.1},{:.1})\">",
        column as f64 * g.width,
        row as f64 * g.height
    )
    .unwrap();
    writeln!(
        out,
        "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"middle\">{}</text>",
        g.width / 2.0,
        g.style.margin,
        escape(title)
    )
    .unwrap();
    out.push_str(body);
    out.push_str("</g>\n");
}

fn render(layer: &Layer, blocks: &[Block], style: &Style) -> String {
    let g = Geometry::new(layer, style);
    let panels = 1 + blocks.len();
    let columns = style.columns.max(1).min(panels);
    let rows = panels.div_ceil(style.columns.max(1));
    let mut out = String::new();
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.1}\" height=\"{:.1}\" viewBox=\"0 0 {:.1} {:.1}\">",
        columns as f64 * g.width,
        rows as f64 * g.height,
        columns as f64 * g.width,
        rows as f64 * g.height
    )
    .unwrap();
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n");

    let all = g.all_levels();
    let [k, n] = layer.span();
    let mut body = String::new();
    g.edges(&mut body, &all, "#bbbbbb", 0.6);
    g.vertices(&mut body, &all, "#ffffff");
    panel(&mut out, &g, 0, "layer", &format!("{} <{k} -> {n}>", layer.seq()), &body);

    for (i, block) in blocks.iter().enumerate() {
        let color = if style.colors.is_empty() {
            "#000000"
        } else {
            &style.colors[i % style.colors.len()]
        };
        let mut body = String::new();
        g.vertices(&mut body, &all, "#f2f2f2");
        g.edges(&mut body, block.levels(), color, 1.2);
        g.vertices(&mut body, block.levels(), color);
        let sigma: Vec<String> = block.sigma().iter().map(|s| s.to_string()).collect();
        panel(
            &mut out,
            &g,
            i + 1,
            &format!("block-{i}"),
            &format!("block {i} [{}]", sigma.join(" ")),
            &body,
        );
    }
    out.push_str("</svg>\n");
    out
}

/// The bare layer.
pub fn render_layer(layer: &Layer, style: &Style) -> String {
    render(layer, &[], style)
}

/// The layer followed by one panel per block.
pub fn render_tiling(tiling: &Tiling, style: &Style) -> String {
    render(tiling.layer(), tiling.blocks(), style)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fsequence::FSequence;
    use crate::tiling::{construct_tiling, ChoiceStrategy};

    #[test]
    fn layer_skeleton() {
        let layer = Layer::new(&FSequence::natural(), 2, 4).unwrap();
        let svg = render_layer(&layer, &Style::default());
        assert_eq!(svg.matches("<circle").count(), 9);
        // 2*3 + 3*4 edges
        assert_eq!(svg.matches("<line").count(), 18);
        assert!(svg.contains("id=\"layer\""));
        assert!(!svg.contains("block-0"));
    }

    #[test]
    fn rows_go_bottom_to_top() {
        let layer = Layer::new(&FSequence::natural(), 2, 4).unwrap();
        let style = Style::default();
        let g = Geometry::new(&layer, &style);
        assert!(g.point(0, 1).1 > g.point(2, 1).1);
    }

    #[test]
    fn tiling_panels_are_deterministic() {
        let t = construct_tiling(&FSequence::natural(), 3, 4, ChoiceStrategy::LowestLabels).unwrap();
        let a = render_tiling(&t, &Style::default());
        assert_eq!(a, render_tiling(&t, &Style::default()));
        assert!(a.contains("block-5"));
        assert!(!a.contains("block-6"));
    }
}
