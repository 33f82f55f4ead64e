//! Deterministic SVG rendering of constructions.
//!
//! The drawing shows every decorated loop with its token labels and
//! classified self-crossings, the matching paths of a chain, and — for
//! a product Lagrangian — the base curve with its rotation-block labels
//! and a winding legend. All coordinates derive from the exact rational
//! geometry through one fixed formatting rule, so rendering the same
//! construction always yields the same bytes.

use std::fmt::Write as _;

use num_traits::ToPrimitive;

use crate::configs::{ConfigError, CrossingColor, FiberedLagrangian, TestSphere};
use crate::plane::{self, Polyline, Pt, Q};
use crate::report::{Construction, ConstructionSpec, Failure};

/// Stroke palette cycled per piece.
const PIECE_COLORS: [&str; 6] =
    ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2"];
const NECK_COLOR: &str = "#777777";
const BASE_COLOR: &str = "#111111";
const GREEN: &str = "#2ca02c";
const BLUE: &str = "#1f77b4";
const UNCLASSIFIED: &str = "#999999";

fn fq(v: &Q) -> f64 {
    let n = v.numer().to_f64().expect("coordinates stay in f64 range");
    let d = v.denom().to_f64().expect("coordinates stay in f64 range");
    n / d
}

/// One drawing surface with a y-flip from math to screen coordinates.
struct Canvas {
    min_x: f64,
    max_y: f64,
    body: String,
}

impl Canvas {
    fn x(&self, p: &Pt) -> f64 {
        fq(&p.x) - self.min_x + 20.0
    }

    fn y(&self, p: &Pt) -> f64 {
        self.max_y - fq(&p.y) + 20.0
    }

    fn path(&mut self, poly: &Polyline, color: &str, width: f64, dashed: bool) {
        let mut d = String::new();
        for (i, p) in poly.points().iter().enumerate() {
            let cmd = if i == 0 { 'M' } else { 'L' };
            let _ = write!(d, "{}{:.3},{:.3} ", cmd, self.x(p), self.y(p));
        }
        if poly.is_closed() {
            d.push('Z');
        }
        let dash = if dashed { " stroke-dasharray=\"6,4\"" } else { "" };
        let _ = writeln!(
            self.body,
            "  <path d=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{:.3}\"{} />",
            d.trim_end(),
            color,
            width,
            dash
        );
    }

    fn dot(&mut self, p: &Pt, r: f64, color: &str) {
        let _ = writeln!(
            self.body,
            "  <circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"{:.3}\" fill=\"{}\" />",
            self.x(p),
            self.y(p),
            r,
            color
        );
    }

    fn text(&mut self, p: &Pt, dx: f64, dy: f64, size: f64, color: &str, content: &str) {
        let _ = writeln!(
            self.body,
            "  <text x=\"{:.3}\" y=\"{:.3}\" font-size=\"{:.3}\" font-family=\"monospace\" fill=\"{}\">{}</text>",
            self.x(p) + dx,
            self.y(p) + dy,
            size,
            color,
            content
        );
    }

    fn legend(&mut self, line: usize, content: &str) {
        let _ = writeln!(
            self.body,
            "  <text x=\"8.000\" y=\"{:.3}\" font-size=\"11.000\" font-family=\"monospace\" fill=\"#111111\">{}</text>",
            14.0 + 12.0 * line as f64,
            content
        );
    }
}

fn point_at(poly: &Polyline, edge: usize, t: &Q) -> Pt {
    let (a, b) = poly.edge(edge);
    Pt::new(&a.x + &(t * &(&b.x - &a.x)), &a.y + &(t * &(&b.y - &a.y)))
}

fn bounds(polys: &[&Polyline]) -> (f64, f64, f64, f64) {
    let mut min_x = f64::MAX;
    let mut max_x = f64::MIN;
    let mut min_y = f64::MAX;
    let mut max_y = f64::MIN;
    for poly in polys {
        for p in poly.points() {
            min_x = min_x.min(fq(&p.x));
            max_x = max_x.max(fq(&p.x));
            min_y = min_y.min(fq(&p.y));
            max_y = max_y.max(fq(&p.y));
        }
    }
    (min_x, max_x, min_y, max_y)
}

fn draw_piece(
    canvas: &mut Canvas,
    fl: &FiberedLagrangian,
    color: &str,
) -> Result<(), ConfigError> {
    canvas.path(&fl.loop_, color, 1.5, false);
    for tok in &fl.tokens {
        let p = point_at(&fl.loop_, tok.edge, &tok.t);
        canvas.dot(&p, 2.2, color);
        let label =
            format!("{}{}", tok.kind.name(), if tok.traversal > 0 { "+" } else { "-" });
        canvas.text(&p, 3.5, -3.5, 9.0, color, &label);
    }
    for crossing in fl.classified_self_crossings()? {
        let fill = match crossing.color() {
            Some(CrossingColor::Green) => GREEN,
            Some(CrossingColor::Blue) => BLUE,
            None => UNCLASSIFIED,
        };
        canvas.dot(&crossing.point, 3.2, fill);
    }
    Ok(())
}

fn draw_neck(canvas: &mut Canvas, sphere: &TestSphere) {
    canvas.path(&sphere.path, NECK_COLOR, 1.2, true);
    if let Some(p) = sphere.path.points().first() {
        canvas.text(p, 3.0, -3.0, 9.0, NECK_COLOR, &sphere.name);
    }
}

/// Render a realized construction as a standalone SVG document.
pub fn render_svg(spec: &ConstructionSpec, c: &Construction) -> Result<String, Failure> {
    let (pieces, necks, base): (Vec<&FiberedLagrangian>, Vec<&TestSphere>, Option<_>) = match c {
        Construction::Single(fl) => (vec![fl], Vec::new(), None),
        Construction::Chain(a) => {
            (a.pieces.iter().collect(), a.matchings.iter().collect(), None)
        }
        Construction::Product(t3) => (
            t3.fiber_piece.pieces.iter().collect(),
            t3.fiber_piece.matchings.iter().collect(),
            Some(t3),
        ),
    };

    let mut all: Vec<&Polyline> = pieces.iter().map(|fl| &fl.loop_).collect();
    for neck in &necks {
        all.push(&neck.path);
    }
    if let Some(t3) = base {
        all.push(&t3.base3);
    }
    let (min_x, max_x, min_y, max_y) = bounds(&all);
    let width = max_x - min_x + 40.0;
    let height = max_y - min_y + 40.0;

    let mut canvas = Canvas { min_x, max_y, body: String::new() };
    let mut legend_line = 0usize;
    canvas.legend(legend_line, &spec.name());
    legend_line += 1;

    if let Some(t3) = base {
        canvas.path(&t3.base3, BASE_COLOR, 2.5, false);
        for (i, block) in t3.blocks.iter().enumerate() {
            let p = point_at(&t3.base3, block.placement.0, &block.placement.1);
            canvas.dot(&p, 4.0, BASE_COLOR);
            let sign = if block.repeats >= 0 { "+" } else { "" };
            canvas.text(&p, 5.0, -5.0, 11.0, BASE_COLOR, &format!("block {}: {}{}", i, sign, block.repeats));
        }
        let turning = plane::turning_number(&t3.base3).map_err(ConfigError::from)?;
        let arrangement = plane::arrangement(&[&t3.base3]).map_err(ConfigError::from)?;
        let mut windings: Vec<i64> = arrangement
            .faces
            .iter()
            .filter(|f| f.bounded)
            .map(|f| f.winding[0])
            .collect();
        windings.sort_unstable();
        canvas.legend(
            legend_line,
            &format!(
                "base turning {}, face windings [{}]",
                turning,
                windings.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(", ")
            ),
        );
        legend_line += 1;
    }

    for (i, fl) in pieces.iter().enumerate() {
        let color = PIECE_COLORS[i % PIECE_COLORS.len()];
        draw_piece(&mut canvas, fl, color).map_err(Failure::from)?;
        canvas.legend(legend_line, &format!("piece {}: {}", i, fl.kind.name()));
        legend_line += 1;
    }
    for neck in &necks {
        draw_neck(&mut canvas, neck);
    }
    let _ = legend_line;

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0}\" height=\"{:.0}\" viewBox=\"0 0 {:.3} {:.3}\">",
        width, height, width, height
    );
    let _ = writeln!(out, "  <title>{}</title>", spec.name());
    let _ = writeln!(out, "  <rect width=\"100%\" height=\"100%\" fill=\"#fdfdfb\" />");
    out.push_str(&canvas.body);
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn svg_for(spec: &ConstructionSpec) -> String {
        let c = spec.realize().unwrap();
        render_svg(spec, &c).unwrap()
    }

    #[test]
    fn torus_drawing_shows_tokens_and_crossings() {
        let spec = ConstructionSpec::Torus { k: 1, l: 2, m: 0, teeth: 0, offset: (0, 0) };
        let svg = svg_for(&spec);
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("BB+") || svg.contains("BB-"));
        assert!(svg.contains(GREEN));
        // h = m + k + l = 3 self-crossing markers with radius 3.2.
        assert_eq!(svg.matches("r=\"3.200\"").count(), 3);
    }

    #[test]
    fn chain_drawing_shows_matching_paths() {
        let spec = ConstructionSpec::Lambda { g: 2 };
        let svg = svg_for(&spec);
        assert!(svg.contains("stroke-dasharray"));
        assert!(svg.contains("neck-0"));
        assert!(svg.contains("piece 1"));
    }

    #[test]
    fn product_drawing_annotates_blocks_and_windings() {
        let spec =
            ConstructionSpec::Gamma { n: 3, g: 2, k1: 1, l1: 1, r: 279, displaced: false };
        let svg = svg_for(&spec);
        assert!(svg.contains("block 0"));
        assert!(svg.contains("base turning 2"));
        assert!(svg.contains("face windings"));
    }

    #[test]
    fn rendering_is_deterministic() {
        let spec = ConstructionSpec::Xi { g: 2, k1: 1, l1: 1 };
        assert_eq!(svg_for(&spec), svg_for(&spec));
    }
}
